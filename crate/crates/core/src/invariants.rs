//! Intrinsic invariants `a02`, `a20`, `a11` computed from the map and from
//! the induced metric alone, the focal conic, and the combinations of third
//! order coefficients shared by isometric cross caps.

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::normalform::NormalForm;
use crate::surface::{first_form, require_crosscap, FirstForm, SurfaceMap};
use crate::vec3::{det3, triple};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntrinsicTriple<T> {
    pub a02: T,
    pub a20: T,
    pub a11: T,
    /// `Δ² = [f_u, f_uv, f_vv]²` at the origin.
    pub delta_sq: T,
}

impl<T: Scalar> IntrinsicTriple<T> {
    pub fn max_abs_diff(&self, o: &Self) -> T {
        (self.a02 - o.a02)
            .abs()
            .max((self.a20 - o.a20).abs())
            .max((self.a11 - o.a11).abs())
    }
}

/// The triple evaluated from derivatives of the map at the origin.
pub fn intrinsic_from_map<T: Scalar>(f: &SurfaceMap<T>) -> Result<IntrinsicTriple<T>> {
    let test = require_crosscap(f, T::default_tol())?;
    let jet = f.jet();
    let mut fu = jet.partial(1, 0);
    if test.delta < T::zero() {
        // (u, v) ↦ (-u, -v) flips only the odd derivatives
        fu = -fu;
    }
    let fuv = jet.partial(1, 1);
    let fvv = jet.partial(0, 2);
    let fuu = jet.partial(2, 0);

    let delta = triple(fu, fuv, fvv);
    let d_uu_vv = triple(fu, fuu, fvv);
    let d_uv_uu = triple(fu, fuv, fuu);
    let fu_norm = fu.norm();
    let cross_sq = fu.cross(fvv).norm_sq();
    let minor = fu.dot(fu) * fvv.dot(fuv) - fu.dot(fuv) * fvv.dot(fu);
    Ok(assemble(fu_norm, cross_sq, delta, d_uu_vv, d_uv_uu, minor))
}

fn assemble<T: Scalar>(
    fu_norm: T,
    cross_sq: T,
    delta: T,
    d_uu_vv: T,
    d_uv_uu: T,
    minor: T,
) -> IntrinsicTriple<T> {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let delta_sq = delta * delta;
    let cross = cross_sq.sqrt();
    let a02 = fu_norm * cross * cross_sq / delta_sq;
    let a20 =
        cross / (four * fu_norm.powi(3) * delta_sq) * (d_uu_vv * d_uu_vv + four * delta * d_uv_uu);
    let a11 = (two * delta * minor - cross_sq * d_uu_vv) / (two * fu_norm * delta_sq);
    IntrinsicTriple {
        a02,
        a20,
        a11,
        delta_sq,
    }
}

/// Result of the metric-only route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricInvariants<T> {
    pub triple: IntrinsicTriple<T>,
    /// `Δ²` from the Hessian of `h = EG - F²`: `(h_uu h_vv - h_uv²) / (4E)`.
    pub delta_sq_hessian: T,
    /// `a02 = √E · h_vv^{3/2} / (2√2 Δ²)`, also from `h` alone.
    pub a02_hessian: T,
    /// `h_vv(0,0)`, non-negative for a genuine metric.
    pub h_vv: T,
}

/// The triple from `(E, F, G)` jets in admissible coordinates, without any
/// reference to an ambient map. Requires order ≥ 2.
pub fn intrinsic_from_metric<T: Scalar>(
    e: &Jet2<T>,
    f: &Jet2<T>,
    g: &Jet2<T>,
) -> Result<MetricInvariants<T>> {
    intrinsic_from_metric_with_tol(e, f, g, T::default_tol())
}

pub fn intrinsic_from_metric_with_tol<T: Scalar>(
    e: &Jet2<T>,
    f: &Jet2<T>,
    g: &Jet2<T>,
    tol: T,
) -> Result<MetricInvariants<T>> {
    if e.order().min(f.order()).min(g.order()) < 2 {
        return Err(Error::InvalidMetric("metric jets need order ≥ 2".into()));
    }
    let half = T::lit(0.5);
    let e0 = e.partial(0, 0);
    if !(e0 > tol) {
        return Err(Error::InvalidMetric(format!(
            "E(0,0) = {e0} is not positive"
        )));
    }
    let (e_u, e_uv, e_vv) = (e.partial(1, 0), e.partial(1, 1), e.partial(0, 2));
    let (f_u, f_v, f_uu, f_uv) = (
        f.partial(1, 0),
        f.partial(0, 1),
        f.partial(2, 0),
        f.partial(1, 1),
    );
    let (g_uu, g_uv, g_vv) = (g.partial(2, 0), g.partial(1, 1), g.partial(0, 2));

    // Inner products of f_u, f_uv, f_vv, f_uu at the origin.
    let uu = e0;
    let u_uv = f_u;
    let u_vv = f_v;
    let uv_uv = g_uu * half;
    let uv_vv = g_uv * half;
    let vv_vv = g_vv * half;
    let u_fuu = e_u * half;
    let uv_fuu = f_uu - e_uv * half;
    let vv_fuu = f_uv - e_vv * half;

    let delta_sq = det3([[uu, u_uv, u_vv], [u_uv, uv_uv, uv_vv], [u_vv, uv_vv, vv_vv]]);
    if !(delta_sq > tol) {
        return Err(Error::InvalidMetric(format!(
            "Δ² = {delta_sq} is not positive; not the metric of a cross cap"
        )));
    }
    let delta = delta_sq.sqrt();
    let d_uu_vv = det3([
        [uu, u_fuu, u_vv],
        [u_uv, uv_fuu, uv_vv],
        [u_vv, vv_fuu, vv_vv],
    ]) / delta;
    let d_uv_uu = det3([
        [uu, u_uv, u_fuu],
        [u_uv, uv_uv, uv_fuu],
        [u_vv, uv_vv, vv_fuu],
    ]) / delta;
    let cross_sq = uu * vv_vv - u_vv * u_vv;
    let minor = uu * uv_vv - u_uv * u_vv;
    let triple = assemble(uu.sqrt(), cross_sq, delta, d_uu_vv, d_uv_uu, minor);

    let h = &e.mul_jet(g) - &f.mul_jet(f);
    let (h_uu, h_uv, h_vv) = (h.partial(2, 0), h.partial(1, 1), h.partial(0, 2));
    if h_vv < -tol {
        return Err(Error::InvalidMetric(format!(
            "h_vv(0,0) = {h_vv} is negative; EG - F² must be semidefinite"
        )));
    }
    let delta_sq_hessian = (h_uu * h_vv - h_uv * h_uv) / (T::lit(4.0) * e0);
    let a02_hessian =
        e0.sqrt() * h_vv.max(T::zero()).powf(T::lit(1.5)) / (T::lit(2.0) * T::SQRT_2() * delta_sq);
    Ok(MetricInvariants {
        triple,
        delta_sq_hessian,
        a02_hessian,
        h_vv,
    })
}

/// Metric route applied to the pull-back metric of `f`.
pub fn intrinsic_from_first_form<T: Scalar>(ff: &FirstForm<T>) -> Result<MetricInvariants<T>> {
    intrinsic_from_metric(&ff.e, &ff.f, &ff.g)
}

/// Convenience: the metric route for a map (the map is used only to form `E, F, G`).
pub fn intrinsic_from_map_metric<T: Scalar>(f: &SurfaceMap<T>) -> Result<MetricInvariants<T>> {
    require_crosscap(f, T::default_tol())?;
    intrinsic_from_first_form(&first_form(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicKind {
    Hyperbola,
    Ellipse,
    /// `a20 = 0`: the boundary case `y² + 2a11 yz + a11² z² + a02 z = 0`.
    Parabolic,
}

/// `yy·y² + yz·yz + zz·z² + z·z = 0` in the normal plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalConic<T> {
    pub yy: T,
    pub yz: T,
    pub zz: T,
    pub z: T,
    pub kind: ConicKind,
}

impl<T: Scalar> FocalConic<T> {
    pub fn eval(&self, y: T, z: T) -> T {
        self.yy * y * y + self.yz * y * z + self.zz * z * z + self.z * z
    }
}

pub fn focal_conic<T: Scalar>(t: &IntrinsicTriple<T>) -> FocalConic<T> {
    focal_conic_with_tol(t, T::default_tol())
}

pub fn focal_conic_with_tol<T: Scalar>(t: &IntrinsicTriple<T>, tol: T) -> FocalConic<T> {
    let kind = if t.a20 > tol {
        ConicKind::Hyperbola
    } else if t.a20 < -tol {
        ConicKind::Ellipse
    } else {
        ConicKind::Parabolic
    };
    FocalConic {
        yy: T::one(),
        yz: T::lit(2.0) * t.a11,
        zz: -(t.a20 * t.a02 - t.a11 * t.a11),
        z: t.a02,
        kind,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    Elliptic,
    Hyperbolic,
    Degenerate,
}

pub fn classify_sign<T: Scalar>(t: &IntrinsicTriple<T>) -> SignClass {
    classify_sign_with_tol(t, T::default_tol())
}

pub fn classify_sign_with_tol<T: Scalar>(t: &IntrinsicTriple<T>, tol: T) -> SignClass {
    if t.a20 > tol {
        SignClass::Elliptic
    } else if t.a20 < -tol {
        SignClass::Hyperbolic
    } else {
        SignClass::Degenerate
    }
}

/// Third order combinations that two cross caps with the same first
/// fundamental form share.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComboQuadruple<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub c4: T,
}

impl<T: Scalar> ComboQuadruple<T> {
    pub fn to_array(self) -> [T; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        self.to_array()
            .iter()
            .zip(o.to_array())
            .fold(T::zero(), |m, (&a, b)| m.max((a - b).abs()))
    }
}

pub fn isometry_combos<T: Scalar>(nf: &NormalForm<T>) -> Result<ComboQuadruple<T>> {
    if nf.order() < 3 {
        return Err(Error::InvalidInput(
            "combinations need a normal form of order ≥ 3".into(),
        ));
    }
    let a02 = nf.a(0, 2);
    if !(a02 > T::zero()) {
        return Err(Error::InvalidInput(format!("a02 = {a02} is not positive")));
    }
    let (a11, a20, b3) = (nf.a(1, 1), nf.a(2, 0), nf.b(3));
    let two = T::lit(2.0);
    let q = T::one() + a11 * a11;
    Ok(ComboQuadruple {
        c1: nf.a(0, 3) + T::lit(3.0) * a11 * b3 / two,
        c2: nf.a(1, 2) + q * b3 / (two * a02),
        c3: nf.a(2, 1) - a11 * a20 * b3 / (T::lit(6.0) * a02),
        c4: nf.a(3, 0) - q * a20 * b3 / (two * a02 * a02),
    })
}
