//! Ruled surfaces `γ(v) + u ξ(v)`, their isometric redeployment along a new
//! spherical ruling, and sufficient criteria for cross caps, cuspidal edges,
//! swallowtails and cuspidal cross caps.
//!
//! For a normalized ruling (`|ξ| = |ξ'| = 1`) write
//! `γ' = a ξ + b ξ' + c (ξ × ξ')`. Replacing `ξ` by any other unit speed
//! spherical curve while keeping `a, b, c` gives a surface with the same
//! first fundamental form `E = 1`, `F = a`, `G = a² + (b + u)² + c²`.

use std::fmt;
use std::sync::Arc;

use crate::deformation::SphericalCurve;
use crate::error::{Error, Result};
use crate::jet::{Jet2, Jet3, Partials};
use crate::numerics::adaptive_simpson;
use crate::surface::{SurfaceMap, SurfacePatch};
use crate::vec3::{triple, Vec3};
use crate::Scalar;

const GAMMA_QUAD_TOL: f64 = 1e-10;

/// `γ, γ', γ'', ξ, ξ', ξ''` at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveData<T> {
    pub gamma: Vec3<T>,
    pub gamma1: Vec3<T>,
    pub gamma2: Vec3<T>,
    pub xi: Vec3<T>,
    pub xi1: Vec3<T>,
    pub xi2: Vec3<T>,
}

/// Pointwise evaluation of the directrix and ruling.
pub trait RuledCurves<T: Scalar>: Send + Sync {
    fn eval(&self, v: T) -> CurveData<T>;
}

/// Evaluates the jets as polynomials in `v`.
struct PolynomialCurves<T> {
    gamma: Jet3<T>,
    xi: Jet3<T>,
}

impl<T: Scalar> RuledCurves<T> for PolynomialCurves<T> {
    fn eval(&self, v: T) -> CurveData<T> {
        let (g, gp) = self.gamma.eval_partials(T::zero(), v);
        let (x, xp) = self.xi.eval_partials(T::zero(), v);
        CurveData {
            gamma: g,
            gamma1: gp.fv,
            gamma2: gp.fvv,
            xi: x,
            xi1: xp.fv,
            xi2: xp.fvv,
        }
    }
}

struct RuledPatch<T: Scalar>(Arc<dyn RuledCurves<T>>);

impl<T: Scalar> SurfacePatch<T> for RuledPatch<T> {
    fn point(&self, u: T, v: T) -> Vec3<T> {
        let d = self.0.eval(v);
        d.gamma + d.xi * u
    }

    fn partials(&self, u: T, v: T) -> Partials<T> {
        let d = self.0.eval(v);
        Partials {
            fu: d.xi,
            fv: d.gamma1 + d.xi1 * u,
            fuu: Vec3::zero(),
            fuv: d.xi1,
            fvv: d.gamma2 + d.xi2 * u,
        }
    }
}

/// `γ(v) + u ξ(v)` with `γ`, `ξ` stored as jets in `v` alone.
#[derive(Clone)]
pub struct RuledSurface<T: Scalar> {
    gamma: Jet3<T>,
    xi: Jet3<T>,
    curves: Arc<dyn RuledCurves<T>>,
}

impl<T: Scalar> fmt::Debug for RuledSurface<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RuledSurface")
            .field("gamma", &self.gamma)
            .field("xi", &self.xi)
            .finish()
    }
}

fn depends_on_u<T: Scalar>(j: &Jet3<T>) -> bool {
    j.components()
        .iter()
        .any(|c| c.iter().any(|(a, _, x)| a > 0 && x != T::zero()))
}

impl<T: Scalar> RuledSurface<T> {
    /// From jets that only involve `v`; evaluated as polynomials.
    pub fn new(gamma: Jet3<T>, xi: Jet3<T>) -> Result<Self> {
        if depends_on_u(&gamma) || depends_on_u(&xi) {
            return Err(Error::InvalidInput(
                "directrix and ruling must depend on v only".into(),
            ));
        }
        let order = gamma.order().min(xi.order());
        let gamma = gamma.truncate(order);
        let xi = xi.truncate(order);
        let curves = Arc::new(PolynomialCurves {
            gamma: gamma.clone(),
            xi: xi.clone(),
        });
        Ok(Self { gamma, xi, curves })
    }

    /// From Taylor coefficients `gamma[k]`, `xi[k]` of `v^k`.
    pub fn from_coeffs(gamma: &[Vec3<T>], xi: &[Vec3<T>], order: usize) -> Result<Self> {
        Self::new(
            Jet3::from_v_coeffs(gamma, order),
            Jet3::from_v_coeffs(xi, order),
        )
    }

    /// Replaces the pointwise evaluator, keeping the jets.
    pub fn with_curves(mut self, curves: Arc<dyn RuledCurves<T>>) -> Self {
        self.curves = curves;
        self
    }

    pub fn gamma(&self) -> &Jet3<T> {
        &self.gamma
    }

    pub fn xi(&self) -> &Jet3<T> {
        &self.xi
    }

    pub fn order(&self) -> usize {
        self.gamma.order()
    }

    pub fn curves(&self) -> &Arc<dyn RuledCurves<T>> {
        &self.curves
    }

    /// The map `γ(v) + u ξ(v)` as a jet of the surface order, with the
    /// ruled evaluator attached.
    pub fn to_surface(&self) -> SurfaceMap<T> {
        let order = self.order();
        let u_xi = self.xi.truncate(order.saturating_sub(1)).mul_monomial(1, 0);
        let jet = (&self.gamma + &u_xi).truncate(order);
        SurfaceMap::from_jet(jet).with_evaluator(Arc::new(RuledPatch(Arc::clone(&self.curves))))
    }

    /// `max(| |ξ|² - 1 |, | |ξ'|² - 1 |)` over all jet coefficients.
    pub fn normalization_defect(&self) -> T {
        let one = |n| Jet2::constant(T::one(), n);
        let xi1 = self.xi.deriv_v();
        let a = self.xi.dot(&self.xi).max_abs_diff(&one(self.xi.order()));
        let b = xi1.dot(&xi1).max_abs_diff(&one(xi1.order()));
        a.max(b)
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        self.normalization_defect() <= tol
    }
}

/// Rescales `u` by `|ξ(v)|` and reparametrizes `v` by the arc length of
/// `ξ / |ξ|`, so that the ruling is a unit speed spherical curve. The
/// evaluator of the result is the polynomial one.
pub fn normalize<T: Scalar>(rs: &RuledSurface<T>) -> Result<RuledSurface<T>> {
    let order = rs.order();
    let xi = &rs.xi;
    let norm_sq = xi.dot(xi);
    if !(norm_sq.constant_term() > T::default_tol()) {
        return Err(Error::DegenerateRuling("ξ(0) = 0".into()));
    }
    let xi_hat = xi.scale_by(&norm_sq.sqrt()?.recip()?);
    let xi_hat1 = xi_hat.deriv_v();
    let speed_sq = xi_hat1.dot(&xi_hat1);
    if !(speed_sq.constant_term() > T::default_tol()) {
        return Err(Error::DegenerateRuling(
            "ξ'(0) is parallel to ξ(0); the ruling is not immersed in the sphere".into(),
        ));
    }
    let sigma = speed_sq.sqrt()?.integrate_v();
    let s1 = sigma.coeff(0, 1);
    let zero = Jet2::zeros(order);
    let target = Jet2::var_v(order);
    let mut v_of_sigma = target.scale(s1.recip());
    for d in 2..=order {
        let r = &sigma.compose(&zero, &v_of_sigma)? - &target;
        v_of_sigma.add_to_coeff(0, d, -r.coeff(0, d) / s1);
    }
    RuledSurface::new(
        rs.gamma.compose(&zero, &v_of_sigma)?,
        xi_hat.compose(&zero, &v_of_sigma)?,
    )
}

/// Coordinates of `γ'` in the frame `(ξ, ξ', ξ × ξ')`, plus `γ(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCoefficients<T> {
    pub a: Jet2<T>,
    pub b: Jet2<T>,
    pub c: Jet2<T>,
    pub gamma0: Vec3<T>,
}

impl<T: Scalar> FrameCoefficients<T> {
    /// Coefficients given as polynomials in `v`.
    pub fn from_polys(a: &[T], b: &[T], c: &[T], order: usize) -> Self {
        Self {
            a: Jet2::from_v_coeffs(a, order),
            b: Jet2::from_v_coeffs(b, order),
            c: Jet2::from_v_coeffs(c, order),
            gamma0: Vec3::zero(),
        }
    }

    pub fn order(&self) -> usize {
        self.a.order().min(self.b.order()).min(self.c.order())
    }

    /// `a ξ + b ξ' + c (ξ × ξ')` for a ruling jet `ξ`.
    pub fn gamma_prime(&self, xi: &Jet3<T>) -> Jet3<T> {
        let xi1 = xi.deriv_v();
        let xi0 = xi.truncate(xi1.order());
        let nu = xi0.cross(&xi1);
        &(&xi0.scale_by(&self.a) + &xi1.scale_by(&self.b)) + &nu.scale_by(&self.c)
    }

    /// `b ≡ c ≡ 0` through the jet order.
    pub fn is_developable(&self, tol: T) -> bool {
        self.b.max_abs() <= tol && self.c.max_abs() <= tol
    }
}

/// Projects `γ'` onto the frame of a normalized ruled surface.
pub fn frame_coefficients<T: Scalar>(rs: &RuledSurface<T>) -> Result<FrameCoefficients<T>> {
    frame_coefficients_with_tol(rs, T::default_tol())
}

pub fn frame_coefficients_with_tol<T: Scalar>(
    rs: &RuledSurface<T>,
    tol: T,
) -> Result<FrameCoefficients<T>> {
    let defect = rs.normalization_defect();
    if defect > tol {
        return Err(Error::InvalidInput(format!(
            "ruling is not normalized (defect {defect:e}); call normalize first"
        )));
    }
    let g1 = rs.gamma.deriv_v();
    let xi1 = rs.xi.deriv_v();
    let xi = rs.xi.truncate(xi1.order());
    let nu = xi.cross(&xi1);
    Ok(FrameCoefficients {
        a: g1.dot(&xi),
        b: g1.dot(&xi1),
        c: g1.dot(&nu),
        gamma0: rs.gamma.value(),
    })
}

/// Ruled surface with the given frame coefficients along a new unit speed
/// spherical ruling given as a jet.
pub fn redeploy<T: Scalar>(fc: &FrameCoefficients<T>, new_xi: &Jet3<T>) -> Result<RuledSurface<T>> {
    let order = fc.order().min(new_xi.order().saturating_sub(1)) + 1;
    let new_xi = new_xi.truncate(order);
    let probe = RuledSurface::new(Jet3::zeros(order), new_xi.clone())?;
    let defect = probe.normalization_defect();
    if defect > T::default_tol() {
        return Err(Error::InvalidInput(format!(
            "new ruling must be a unit speed spherical curve (defect {defect:e})"
        )));
    }
    let gamma = fc
        .gamma_prime(&new_xi)
        .integrate_v()
        .add_constant(fc.gamma0);
    RuledSurface::new(gamma, new_xi)
}

/// [`redeploy`] along a [`SphericalCurve`], with an evaluator that follows
/// the curve's frame and integrates `γ'` by adaptive quadrature.
pub fn redeploy_along<T: Scalar>(
    fc: &FrameCoefficients<T>,
    curve: &SphericalCurve<T>,
) -> Result<RuledSurface<T>> {
    let order = fc.order() + 1;
    let rs = redeploy(fc, &curve.point_jet(order))?;
    let curves = RedeployedCurves {
        a: fc.a.clone(),
        b: fc.b.clone(),
        c: fc.c.clone(),
        gamma0: fc.gamma0,
        curve: curve.clone(),
    };
    Ok(rs.with_curves(Arc::new(curves)))
}

struct RedeployedCurves<T: Scalar> {
    a: Jet2<T>,
    b: Jet2<T>,
    c: Jet2<T>,
    gamma0: Vec3<T>,
    curve: SphericalCurve<T>,
}

impl<T: Scalar> RedeployedCurves<T> {
    fn ruling(&self, v: T) -> [Vec3<T>; 4] {
        let fr = self
            .curve
            .frame_at(v)
            .unwrap_or_else(|_| panic!("redeployed ruling evaluated outside its chart at v = {v}"));
        let k = self.curve.kappa(v);
        // ξ = c, ξ' = e, ξ'' = κ n - c, ν = ξ × ξ' = n
        [fr.c, fr.e, fr.n * k - fr.c, fr.n]
    }

    fn gamma_prime(&self, v: T) -> Vec3<T> {
        let [xi, xi1, _, nu] = self.ruling(v);
        xi * self.a.eval(T::zero(), v)
            + xi1 * self.b.eval(T::zero(), v)
            + nu * self.c.eval(T::zero(), v)
    }
}

impl<T: Scalar> RuledCurves<T> for RedeployedCurves<T> {
    fn eval(&self, v: T) -> CurveData<T> {
        let [xi, xi1, xi2, nu] = self.ruling(v);
        let [a, _, da, ..] = self.a.eval_partials(T::zero(), v);
        let [b, _, db, ..] = self.b.eval_partials(T::zero(), v);
        let [c, _, dc, ..] = self.c.eval_partials(T::zero(), v);
        // ν' = ξ × ξ'' = -κ ξ'
        let nu1 = xi1 * -self.curve.kappa(v);
        let gamma1 = xi * a + xi1 * b + nu * c;
        let gamma2 = xi * da + xi1 * (a + db) + xi2 * b + nu * dc + nu1 * c;
        let integrand = |t: T| self.gamma_prime(t);
        CurveData {
            gamma: self.gamma0 + adaptive_simpson(&integrand, T::zero(), v, T::lit(GAMMA_QUAD_TOL)),
            gamma1,
            gamma2,
            xi,
            xi1,
            xi2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingularityClass {
    CrossCap,
    CuspidalEdge,
    Swallowtail,
    CuspidalCrossCap,
    Regular,
    Unclassified,
}

impl SingularityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CrossCap => "cross_cap",
            Self::CuspidalEdge => "cuspidal_edge",
            Self::Swallowtail => "swallowtail",
            Self::CuspidalCrossCap => "cuspidal_cross_cap",
            Self::Regular => "regular",
            Self::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_singularity<T: Scalar>(rs: &RuledSurface<T>) -> SingularityClass {
    classify_singularity_with_tol(rs, T::default_tol())
}

/// Applies the criteria in the order cross cap, then (for `b ≡ c ≡ 0`)
/// cuspidal cross cap, swallowtail, cuspidal edge. Inputs need not be
/// normalized.
pub fn classify_singularity_with_tol<T: Scalar>(rs: &RuledSurface<T>, tol: T) -> SingularityClass {
    let g = |k| rs.gamma.partial(0, k);
    let x = |k| rs.xi.partial(0, k);
    if rs.order() >= 2 && g(1).max_abs() <= tol && triple(g(2), x(0), x(1)).abs() > tol {
        return SingularityClass::CrossCap;
    }
    let immersed = x(0).cross(g(1)).norm() > tol;
    let fallback = if immersed {
        SingularityClass::Regular
    } else {
        SingularityClass::Unclassified
    };
    let Ok(n) = normalize(rs) else {
        return fallback;
    };
    let Ok(fc) = frame_coefficients_with_tol(&n, tol.max(T::lit(1e3) * T::epsilon())) else {
        return fallback;
    };
    if !fc.is_developable(tol) || fc.order() < 1 {
        return fallback;
    }
    let a0 = fc.a.coeff(0, 0);
    let a1 = fc.a.coeff(0, 1);
    let xi1 = n.xi.deriv_v();
    let nu = n.xi.truncate(xi1.order()).cross(&xi1);
    let nu_k = |k: usize| {
        if k <= nu.order() {
            nu.partial(0, k)
        } else {
            Vec3::zero()
        }
    };
    let xi0 = n.xi.value();
    let d1 = triple(xi0, nu_k(0), nu_k(1));
    let d2 = triple(xi0, nu_k(0), nu_k(2));
    if d1.abs() <= tol && a0.abs() > tol && d2.abs() > tol {
        SingularityClass::CuspidalCrossCap
    } else if a0.abs() <= tol && a1.abs() > tol {
        SingularityClass::Swallowtail
    } else if a0.abs() > tol {
        SingularityClass::CuspidalEdge
    } else {
        fallback
    }
}

/// Ruled surfaces meeting each criterion: `(u, uv, v²)` for the cross cap, and
/// developables over a great circle (`a ≡ 1`, resp. `a = v`) and over the
/// spherical curve with geodesic curvature `κ(s) = s` (`a ≡ 1`).
pub fn exemplar<T: Scalar>(class: SingularityClass, order: usize) -> Result<RuledSurface<T>> {
    let (z, one) = (T::zero(), T::one());
    match class {
        SingularityClass::CrossCap => RuledSurface::from_coeffs(
            &[Vec3::zero(), Vec3::zero(), Vec3::new(z, z, one)],
            &[Vec3::new(one, z, z), Vec3::new(z, one, z)],
            order,
        ),
        SingularityClass::CuspidalEdge => redeploy_along(
            &FrameCoefficients::from_polys(&[one], &[], &[], order.saturating_sub(1)),
            &SphericalCurve::with_kappa(vec![]),
        ),
        SingularityClass::Swallowtail => redeploy_along(
            &FrameCoefficients::from_polys(&[z, one], &[], &[], order.saturating_sub(1)),
            &SphericalCurve::with_kappa(vec![]),
        ),
        SingularityClass::CuspidalCrossCap => redeploy_along(
            &FrameCoefficients::from_polys(&[one], &[], &[], order.saturating_sub(1)),
            &SphericalCurve::with_kappa(vec![z, one]),
        ),
        other => Err(Error::InvalidInput(format!("no exemplar for {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::circle_family;
    use crate::surface::{curvatures_at, first_form};

    fn f_std(order: usize) -> RuledSurface<f64> {
        exemplar(SingularityClass::CrossCap, order).unwrap()
    }

    #[test]
    fn standard_crosscap_as_ruled_surface() {
        let rs = f_std(6);
        let std = SurfaceMap::<f64>::standard_crosscap(6);
        assert!(rs.to_surface().jet().max_abs_diff(std.jet()) < 1e-15);
        assert_eq!(classify_singularity(&rs), SingularityClass::CrossCap);
    }

    #[test]
    fn normalizing_standard_ruling() {
        // ξ = (1, v, 0) normalizes to (cos s, sin s, 0) with v = tan s
        let n = normalize(&f_std(9)).unwrap();
        let (s, x): (f64, _) = (0.1, n.xi().eval(0.0, 0.1));
        assert!((x - Vec3::new(s.cos(), s.sin(), 0.0)).max_abs() < 1e-9);
        assert!((n.gamma().eval(0.0, s).z - s.tan().powi(2)).abs() < 1e-8);
        assert!(n.is_normalized(1e-12));
        let again = normalize(&n).unwrap();
        assert!(again.xi().max_abs_diff(n.xi()) < 1e-12);
        assert!(again.gamma().max_abs_diff(n.gamma()) < 1e-12);
    }

    #[test]
    fn scaled_ruling_normalizes_to_same_curve() {
        let order = 8;
        let xi = |scale: f64| {
            let c: Vec<_> = (0..=order)
                .map(|k| {
                    let f = (1..=k).fold(1.0, |a, i| a * i as f64);
                    let (re, im) = match k % 4 {
                        0 => (1.0, 0.0),
                        1 => (0.0, 1.0),
                        2 => (-1.0, 0.0),
                        _ => (0.0, -1.0),
                    };
                    Vec3::new(re, im, 0.0) * (scale / f)
                })
                .collect();
            Jet3::from_v_coeffs(&c, order)
        };
        let one = normalize(&RuledSurface::new(Jet3::zeros(order), xi(1.0)).unwrap()).unwrap();
        let two = normalize(&RuledSurface::new(Jet3::zeros(order), xi(2.0)).unwrap()).unwrap();
        assert!(one.xi().max_abs_diff(two.xi()) < 1e-12);
        assert!(one.xi().max_abs_diff(&xi(1.0)) < 1e-12);
    }

    #[test]
    fn constant_ruling_is_rejected() {
        let rs = RuledSurface::from_coeffs(&[], &[Vec3::new(1.0, 0.0, 0.0)], 4).unwrap();
        assert!(matches!(normalize(&rs), Err(Error::DegenerateRuling(_))));
    }

    #[test]
    fn frame_coefficients_reconstruct_gamma_prime() {
        let n = normalize(&f_std(7)).unwrap();
        let fc = frame_coefficients(&n).unwrap();
        assert!(fc.b.max_abs() < 1e-12);
        assert!(fc.gamma_prime(n.xi()).max_abs_diff(&n.gamma().deriv_v()) < 1e-10);
        // γ' = ξ along a great circle: (a, b, c) = (1, 0, 0)
        let planar = redeploy_along(
            &FrameCoefficients::from_polys(&[1.0], &[], &[], 6),
            &circle_family(0.0),
        )
        .unwrap();
        let fc = frame_coefficients(&planar).unwrap();
        assert!(fc.a.max_abs_diff(&Jet2::constant(1.0, 6)) < 1e-12);
        assert!(fc.is_developable(1e-12));
        let cone = RuledSurface::new(Jet3::zeros(6), planar.xi().clone()).unwrap();
        let fc = frame_coefficients(&cone).unwrap();
        assert!(fc.a.max_abs() + fc.b.max_abs() + fc.c.max_abs() < 1e-15);
        let unnormalized = RuledSurface::from_coeffs(
            &[],
            &[Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)],
            3,
        )
        .unwrap();
        assert!(matches!(
            frame_coefficients(&unnormalized),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn exemplars_classify() {
        for class in [
            SingularityClass::CrossCap,
            SingularityClass::CuspidalEdge,
            SingularityClass::Swallowtail,
            SingularityClass::CuspidalCrossCap,
        ] {
            let rs = exemplar::<f64>(class, 6).unwrap();
            assert_eq!(classify_singularity(&rs), class);
        }
    }

    #[test]
    fn redeployment_preserves_metric() {
        let n = normalize(&f_std(8)).unwrap();
        let fc = frame_coefficients(&n).unwrap();
        let moved = redeploy_along(&fc, &circle_family(1.5)).unwrap();
        let d = first_form(&n.to_surface()).max_abs_diff(&first_form(&moved.to_surface()));
        assert!(d < 1e-10, "{d}");
        let same = redeploy(&fc, n.xi()).unwrap();
        assert!(same.gamma().max_abs_diff(n.gamma()) < 1e-10);
    }

    #[test]
    fn developable_has_zero_curvature() {
        let rs = exemplar::<f64>(SingularityClass::CuspidalCrossCap, 6).unwrap();
        let f = rs.to_surface();
        for &(u, v) in &[(0.5, 0.3), (-0.4, 0.7), (0.9, -0.2)] {
            let k = curvatures_at(&f, u, v).unwrap().gaussian;
            assert!(k.abs() < 1e-8, "{k}");
        }
    }
}
