//! Serializable reports.

use std::f64::consts::PI;

use crosscap::asymptotics::{
    a_theta, a_theta_lower_bound, default_radii, umbilic_gap, verify_convergence, SeriesFit,
};
use crosscap::invariants::{
    classify_sign_with_tol, focal_conic_with_tol, intrinsic_from_map, intrinsic_from_map_metric,
    isometry_combos, ConicKind, IntrinsicTriple, SignClass,
};
use crosscap::normalform::{classify_with_tol, reduce_with_tol, NormalForm};
use crosscap::surface::{detect_crosscap_with_tol, SurfaceMap};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub subject: String,
    pub order: usize,
    pub tolerance: f64,
    pub crosscap: CrossCapSection,
    pub normal_form: NormalFormSection,
    pub classification: ClassificationSection,
    pub intrinsic: IntrinsicSection,
    pub extrinsic: ExtrinsicSection,
    pub focal_conic: ConicSection,
    pub combos: Option<CombosSection>,
    pub asymptotics: Vec<RaySummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCapSection {
    pub is_crosscap: bool,
    pub delta: f64,
    pub fv_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ACoeff {
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BCoeff {
    pub i: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormSection {
    pub a: Vec<ACoeff>,
    pub b: Vec<BCoeff>,
    pub residual: f64,
    pub rotation: [[f64; 3]; 3],
    pub translation: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSection {
    pub degenerate: bool,
    pub quadratic: bool,
    pub normal: bool,
    pub sign: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triple {
    pub a02: f64,
    pub a20: f64,
    pub a11: f64,
    pub delta_sq: f64,
}

impl From<IntrinsicTriple<f64>> for Triple {
    fn from(t: IntrinsicTriple<f64>) -> Self {
        Self {
            a02: t.a02,
            a20: t.a20,
            a11: t.a11,
            delta_sq: t.delta_sq,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicSection {
    pub map: Triple,
    pub metric: Triple,
    pub delta_sq_hessian: f64,
    pub a02_hessian: f64,
    pub max_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrinsicSection {
    pub a12: f64,
    pub a03: f64,
    pub b3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicSection {
    pub yy: f64,
    pub yz: f64,
    pub zz: f64,
    pub z: f64,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombosSection {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub leading: f64,
    pub extrapolated: f64,
    pub slope: Option<f64>,
    pub constant: f64,
    pub converged: bool,
}

impl From<&SeriesFit<f64>> for SeriesSummary {
    fn from(s: &SeriesFit<f64>) -> Self {
        Self {
            leading: s.leading,
            extrapolated: s.extrapolated,
            slope: s.slope,
            constant: s.constant,
            converged: s.converged,
        }
    }
}

/// Limits of `r²H` and `r²K` along one ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySummary {
    pub theta: f64,
    pub a_theta: f64,
    pub h: SeriesSummary,
    pub k: SeriesSummary,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub theta: f64,
    pub gap: SeriesSummary,
    pub k_negative: Option<bool>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    pub subject: String,
    pub triple: Triple,
    pub a_theta_min: f64,
    pub radii: Vec<f64>,
    pub rays: Vec<RaySummary>,
    pub gaps: Vec<GapSummary>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub kappa: f64,
    /// Largest coefficient difference of the first fundamental form to the
    /// base cross cap's.
    pub base_metric_deviation: f64,
    /// Largest normal form coefficient difference to the base cross cap.
    pub base_normal_form_deviation: f64,
    pub report: InvariantReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformReport {
    pub subject: String,
    pub kappas: Vec<f64>,
    pub members: Vec<MemberReport>,
    /// Pairwise largest first fundamental form coefficient difference.
    pub deviation_matrix: Vec<Vec<f64>>,
    pub max_deviation: f64,
    pub isometric: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub subject: String,
    pub class: String,
}

fn sign_name(s: SignClass) -> &'static str {
    match s {
        SignClass::Elliptic => "elliptic",
        SignClass::Hyperbolic => "hyperbolic",
        SignClass::Degenerate => "degenerate",
    }
}

fn conic_name(k: ConicKind) -> &'static str {
    match k {
        ConicKind::Hyperbola => "hyperbola",
        ConicKind::Ellipse => "ellipse",
        ConicKind::Parabolic => "parabolic",
    }
}

pub fn analysis_thetas() -> [f64; 3] {
    [0.0, PI / 4.0, PI / 2.0]
}

pub fn sweep_thetas() -> Vec<f64> {
    (0..16).map(|i| 2.0 * PI * i as f64 / 16.0).collect()
}

fn ray(f: &SurfaceMap<f64>, theta: f64) -> Result<RaySummary, CliError> {
    let c = verify_convergence(f, theta, &default_radii())?;
    Ok(RaySummary {
        theta,
        a_theta: a_theta(c.triple.a02, c.triple.a11, theta),
        h: (&c.h).into(),
        k: (&c.k).into(),
        passed: c.passed,
    })
}

/// Normal form and invariants of `f`; fails with a precondition error when
/// `f` is not a cross cap.
pub fn analyze(
    subject: &str,
    f: &SurfaceMap<f64>,
    order: usize,
    tol: f64,
) -> Result<(InvariantReport, NormalForm<f64>), CliError> {
    let test = detect_crosscap_with_tol(f, tol);
    let nf = reduce_with_tol(f, order, tol)?;
    let class = classify_with_tol(&nf, tol);
    let map = intrinsic_from_map(f)?;
    let metric = intrinsic_from_map_metric(f)?;
    let conic = focal_conic_with_tol(&map, tol);
    let combos = isometry_combos(&nf).ok().map(|c| CombosSection {
        c1: c.c1,
        c2: c.c2,
        c3: c.c3,
        c4: c.c4,
    });
    let asymptotics = analysis_thetas()
        .into_iter()
        .map(|th| ray(f, th))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = nf.rotation.rows;
    let report = InvariantReport {
        subject: subject.to_string(),
        order: nf.order(),
        tolerance: tol,
        crosscap: CrossCapSection {
            is_crosscap: test.is_crosscap,
            delta: test.delta,
            fv_norm: test.fv_norm,
        },
        normal_form: NormalFormSection {
            a: nf
                .a_entries()
                .map(|(j, k, value)| ACoeff { j, k, value })
                .collect(),
            b: nf
                .b_entries()
                .map(|(i, value)| BCoeff { i, value })
                .collect(),
            residual: nf.residual,
            rotation: rows.map(|r| r.to_array()),
            translation: nf.translation.to_array(),
        },
        classification: ClassificationSection {
            degenerate: class.degenerate,
            quadratic: class.quadratic,
            normal: class.normal,
            sign: sign_name(classify_sign_with_tol(&map, tol)).into(),
        },
        intrinsic: IntrinsicSection {
            map: map.into(),
            metric: metric.triple.into(),
            delta_sq_hessian: metric.delta_sq_hessian,
            a02_hessian: metric.a02_hessian,
            max_discrepancy: map
                .max_abs_diff(&metric.triple)
                .max((map.delta_sq - metric.triple.delta_sq).abs()),
        },
        extrinsic: ExtrinsicSection {
            a12: nf.a(1, 2),
            a03: nf.a(0, 3),
            b3: nf.b(3),
        },
        focal_conic: ConicSection {
            yy: conic.yy,
            yz: conic.yz,
            zz: conic.zz,
            z: conic.z,
            kind: conic_name(conic.kind).into(),
        },
        combos,
        asymptotics,
    };
    Ok((report, nf))
}

pub fn asymptotics(subject: &str, f: &SurfaceMap<f64>) -> Result<AsymptoticsReport, CliError> {
    let radii = default_radii::<f64>();
    let rays = sweep_thetas()
        .into_iter()
        .map(|th| ray(f, th))
        .collect::<Result<Vec<_>, _>>()?;
    let gaps = [PI / 4.0, PI / 2.0]
        .into_iter()
        .map(|th| {
            let g = umbilic_gap(f, th, &radii)?;
            Ok(GapSummary {
                theta: th,
                gap: (&g.gap).into(),
                k_negative: g.k_negative,
                passed: g.passed,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let triple = intrinsic_from_map(f)?;
    let passed = rays.iter().all(|r| r.passed) && gaps.iter().all(|g| g.passed);
    Ok(AsymptoticsReport {
        subject: subject.to_string(),
        triple: triple.into(),
        a_theta_min: a_theta_lower_bound(triple.a02, triple.a11),
        radii,
        rays,
        gaps,
        passed,
    })
}
