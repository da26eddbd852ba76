//! Surface maps `ℝ² → ℝ³`, fundamental forms, curvature and the cross cap
//! criterion at the origin.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Jet2, Jet3, Partials};
use crate::vec3::{triple, Mat3, Vec3};
use crate::Scalar;

/// Pointwise evaluation of a surface and its derivatives away from the
/// origin. Implementations must be pure so they can be shared across threads.
pub trait SurfacePatch<T: Scalar>: Send + Sync {
    fn point(&self, u: T, v: T) -> Vec3<T>;
    fn partials(&self, u: T, v: T) -> Partials<T>;
}

/// Evaluates a jet as the polynomial it represents.
#[derive(Debug, Clone)]
pub struct PolynomialPatch<T>(pub Jet3<T>);

impl<T: Scalar> SurfacePatch<T> for PolynomialPatch<T> {
    fn point(&self, u: T, v: T) -> Vec3<T> {
        self.0.eval(u, v)
    }

    fn partials(&self, u: T, v: T) -> Partials<T> {
        self.0.eval_partials(u, v).1
    }
}

struct MovedPatch<T: Scalar> {
    inner: Arc<dyn SurfacePatch<T>>,
    rotation: Mat3<T>,
    offset: Vec3<T>,
}

impl<T: Scalar> SurfacePatch<T> for MovedPatch<T> {
    fn point(&self, u: T, v: T) -> Vec3<T> {
        self.rotation.apply(self.inner.point(u, v)) + self.offset
    }

    fn partials(&self, u: T, v: T) -> Partials<T> {
        let p = self.inner.partials(u, v);
        let r = |x| self.rotation.apply(x);
        Partials {
            fu: r(p.fu),
            fv: r(p.fv),
            fuu: r(p.fuu),
            fuv: r(p.fuv),
            fvv: r(p.fvv),
        }
    }
}

/// Parameter rectangle `[u0, u1] × [v0, v1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<T> {
    pub u: (T, T),
    pub v: (T, T),
}

impl<T: Scalar> Default for Domain<T> {
    fn default() -> Self {
        Self {
            u: (-T::one(), T::one()),
            v: (-T::one(), T::one()),
        }
    }
}

/// A map germ at the origin: its Taylor jet and, optionally, an exact
/// evaluator for finite parameters.
#[derive(Clone)]
pub struct SurfaceMap<T: Scalar> {
    jet: Jet3<T>,
    evaluator: Option<Arc<dyn SurfacePatch<T>>>,
    domain: Domain<T>,
}

impl<T: Scalar> fmt::Debug for SurfaceMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceMap")
            .field("jet", &self.jet)
            .field("evaluator", &self.evaluator.is_some())
            .field("domain", &self.domain)
            .finish()
    }
}

impl<T: Scalar> SurfaceMap<T> {
    pub fn from_jet(jet: Jet3<T>) -> Self {
        Self {
            jet,
            evaluator: None,
            domain: Domain::default(),
        }
    }

    pub fn with_evaluator(mut self, evaluator: Arc<dyn SurfacePatch<T>>) -> Self {
        self.evaluator = Some(evaluator);
        self
    }

    pub fn with_domain(mut self, domain: Domain<T>) -> Self {
        self.domain = domain;
        self
    }

    pub fn jet(&self) -> &Jet3<T> {
        &self.jet
    }

    pub fn order(&self) -> usize {
        self.jet.order()
    }

    pub fn evaluator(&self) -> Option<&Arc<dyn SurfacePatch<T>>> {
        self.evaluator.as_ref()
    }

    pub fn domain(&self) -> Domain<T> {
        self.domain
    }

    /// The standard cross cap `(u, uv, v²)`.
    pub fn standard_crosscap(order: usize) -> Self {
        let mut jet = Jet3::zeros(order);
        jet.x.set_coeff(1, 0, T::one());
        jet.y.set_coeff(1, 1, T::one());
        jet.z.set_coeff(0, 2, T::one());
        Self::from_jet(jet)
    }

    /// `(u, uv, ½(a20 u² + 2 a11 uv + a02 v²))`.
    pub fn quadratic_crosscap(a20: T, a11: T, a02: T, order: usize) -> Self {
        let half = T::lit(0.5);
        let mut jet = Jet3::zeros(order.max(2));
        jet.x.set_coeff(1, 0, T::one());
        jet.y.set_coeff(1, 1, T::one());
        jet.z.set_coeff(2, 0, half * a20);
        jet.z.set_coeff(1, 1, a11);
        jet.z.set_coeff(0, 2, half * a02);
        Self::from_jet(jet)
    }

    pub fn point(&self, u: T, v: T) -> Vec3<T> {
        match &self.evaluator {
            Some(e) => e.point(u, v),
            None => self.jet.eval(u, v),
        }
    }

    pub fn partials(&self, u: T, v: T) -> Partials<T> {
        match &self.evaluator {
            Some(e) => e.partials(u, v),
            None => self.jet.eval_partials(u, v).1,
        }
    }

    /// `rotation · f + offset`, applied to the jet and the evaluator alike.
    pub fn moved(&self, rotation: &Mat3<T>, offset: Vec3<T>) -> Self {
        Self {
            jet: self.jet.transform(rotation).add_constant(offset),
            evaluator: self.evaluator.as_ref().map(|inner| {
                Arc::new(MovedPatch {
                    inner: Arc::clone(inner),
                    rotation: *rotation,
                    offset,
                }) as Arc<dyn SurfacePatch<T>>
            }),
            domain: self.domain,
        }
    }

    /// `f ∘ (g, h)` on the jet level. The evaluator is dropped since only
    /// the Taylor data of the coordinate change is known.
    pub fn reparametrized(&self, g: &Jet2<T>, h: &Jet2<T>) -> Result<Self> {
        Ok(Self::from_jet(self.jet.compose(g, h)?))
    }
}

/// First fundamental form as jets of order `N - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstForm<T> {
    pub e: Jet2<T>,
    pub f: Jet2<T>,
    pub g: Jet2<T>,
}

impl<T: Scalar> FirstForm<T> {
    pub fn max_abs_diff(&self, o: &Self) -> T {
        self.e
            .max_abs_diff(&o.e)
            .max(self.f.max_abs_diff(&o.f))
            .max(self.g.max_abs_diff(&o.g))
    }

    pub fn order(&self) -> usize {
        self.e.order().min(self.f.order()).min(self.g.order())
    }
}

/// Metric coefficients at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricAt<T> {
    pub e: T,
    pub f: T,
    pub g: T,
}

impl<T: Scalar> MetricAt<T> {
    pub fn from_partials(p: &Partials<T>) -> Self {
        Self {
            e: p.fu.dot(p.fu),
            f: p.fu.dot(p.fv),
            g: p.fv.dot(p.fv),
        }
    }

    pub fn det(&self) -> T {
        self.e * self.g - self.f * self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondForm<T> {
    pub l: T,
    pub m: T,
    pub n: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvatures<T> {
    pub gaussian: T,
    pub mean: T,
}

pub fn first_form<T: Scalar>(f: &SurfaceMap<T>) -> FirstForm<T> {
    let fu = f.jet.deriv_u();
    let fv = f.jet.deriv_v();
    FirstForm {
        e: fu.dot(&fu),
        f: fu.dot(&fv),
        g: fv.dot(&fv),
    }
}

pub fn first_form_at<T: Scalar>(f: &SurfaceMap<T>, u: T, v: T) -> MetricAt<T> {
    MetricAt::from_partials(&f.partials(u, v))
}

fn unit_normal<T: Scalar>(p: &Partials<T>, u: T, v: T) -> Result<Vec3<T>> {
    let n = p.fu.cross(p.fv);
    let scale = (p.fu.norm() * p.fv.norm()).max(T::one());
    n.try_normalize(T::epsilon() * T::lit(64.0) * scale)
        .ok_or_else(|| Error::DegeneratePoint {
            u: u.to_f64().unwrap_or(f64::NAN),
            v: v.to_f64().unwrap_or(f64::NAN),
        })
}

/// Second fundamental form with respect to `ν = f_u × f_v / |f_u × f_v|`.
pub fn second_form_at<T: Scalar>(f: &SurfaceMap<T>, u: T, v: T) -> Result<SecondForm<T>> {
    second_form_from_partials(&f.partials(u, v), u, v)
}

pub fn second_form_from_partials<T: Scalar>(p: &Partials<T>, u: T, v: T) -> Result<SecondForm<T>> {
    let nu = unit_normal(p, u, v)?;
    Ok(SecondForm {
        l: p.fuu.dot(nu),
        m: p.fuv.dot(nu),
        n: p.fvv.dot(nu),
    })
}

pub fn curvatures_at<T: Scalar>(f: &SurfaceMap<T>, u: T, v: T) -> Result<Curvatures<T>> {
    curvatures_from_partials(&f.partials(u, v), u, v)
}

pub fn curvatures_from_partials<T: Scalar>(p: &Partials<T>, u: T, v: T) -> Result<Curvatures<T>> {
    let sf = second_form_from_partials(p, u, v)?;
    let ff = MetricAt::from_partials(p);
    let det = ff.det();
    Ok(Curvatures {
        gaussian: (sf.l * sf.n - sf.m * sf.m) / det,
        mean: (ff.e * sf.n - T::lit(2.0) * ff.f * sf.m + ff.g * sf.l) / (T::lit(2.0) * det),
    })
}

/// Outcome of Whitney's criterion at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCapTest<T> {
    pub is_crosscap: bool,
    /// `Δ = [f_u, f_uv, f_vv](0,0)`.
    pub delta: T,
    pub fv_norm: T,
}

pub fn detect_crosscap<T: Scalar>(f: &SurfaceMap<T>) -> CrossCapTest<T> {
    detect_crosscap_with_tol(f, T::default_tol())
}

pub fn detect_crosscap_with_tol<T: Scalar>(f: &SurfaceMap<T>, tol: T) -> CrossCapTest<T> {
    let jet = f.jet();
    if jet.order() < 2 {
        return CrossCapTest {
            is_crosscap: false,
            delta: T::zero(),
            fv_norm: jet.coeff_or_zero(0, 1).norm(),
        };
    }
    let fv_norm = jet.partial(0, 1).norm();
    let delta = triple(jet.partial(1, 0), jet.partial(1, 1), jet.partial(0, 2));
    CrossCapTest {
        is_crosscap: fv_norm < tol && delta.abs() > tol,
        delta,
        fv_norm,
    }
}

pub(crate) fn require_crosscap<T: Scalar>(f: &SurfaceMap<T>, tol: T) -> Result<CrossCapTest<T>> {
    let test = detect_crosscap_with_tol(f, tol);
    if test.is_crosscap {
        Ok(test)
    } else {
        Err(Error::NotACrossCap {
            fv_norm: test.fv_norm.to_f64().unwrap_or(f64::NAN),
            delta: test.delta.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Limiting unit normal `ν(θ) = lim_{r→0} ν(r cos θ, r sin θ)`.
///
/// Read off from the lowest non-vanishing homogeneous part of the jet of
/// `f_u × f_v` along the ray; no numerical limit is taken. The orientation is
/// that of `f_u × f_v` in the given coordinates, for which
/// `[f_u, f_vv, ν(π/2)] = |f_u × f_vv| > 0` at a cross cap.
pub fn limiting_normal<T: Scalar>(f: &SurfaceMap<T>, theta: T) -> Result<Vec3<T>> {
    require_crosscap(f, T::default_tol())?;
    let fu = f.jet().deriv_u();
    let fv = f.jet().deriv_v();
    let n = fu.cross(&fv);
    let (s, c) = theta.sin_cos();
    let eps = T::epsilon() * T::lit(1e3) * n.max_abs().max(T::one());
    for d in 1..=n.order() {
        let mut acc = Vec3::zero();
        for k in 0..=d {
            acc += n.coeff(d - k, k) * (c.powi((d - k) as i32) * s.powi(k as i32));
        }
        if let Some(unit) = acc.try_normalize(eps) {
            return Ok(unit);
        }
    }
    Err(Error::InvalidInput(format!(
        "normal jet vanishes along theta = {theta}"
    )))
}
