//! Isometric deformations of degenerate quadratic cross caps.
//!
//! A unit speed curve `c(s)` on the unit sphere with geodesic curvature
//! `κ(s)` produces the ruled cross cap `f_c(u, v) = γ(v) + u ξ(v)` with
//!
//! ```text
//! ξ(v) = √(1 + q v²) c(arctan(√q v)),   q = 1 + a11²,
//! B(v) = a11 ξ'(v) + ξ(v) × ξ'(v),
//! γ(v) = (a02 / q) ∫₀^v t B(t) dt,
//! ```
//!
//! whose first fundamental form does not depend on `c`. The family built
//! from great circles is congruent to `(u, uv, a11 uv + a02 v² / 2)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Jet2, Jet3, Partials};
use crate::numerics::{adaptive_simpson, rk4_step};
use crate::ruled::RuledSurface;
use crate::surface::{
    first_form, first_form_at, Domain, FirstForm, SecondForm, SurfaceMap, SurfacePatch,
};
use crate::vec3::Vec3;
use crate::Scalar;

/// Step of the Frenet frame table.
const FRAME_STEP: f64 = 1e-3;
/// Absolute tolerance for the quadrature of `∫ t B(t) dt`.
const GAMMA_QUAD_TOL: f64 = 1e-10;

pub type KappaFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// `(c, e, n)` with `e = dc/ds`, `n = c × e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalFrame<T> {
    pub c: Vec3<T>,
    pub e: Vec3<T>,
    pub n: Vec3<T>,
}

impl<T: Scalar> SphericalFrame<T> {
    fn to_array(self) -> [Vec3<T>; 3] {
        [self.c, self.e, self.n]
    }

    fn from_array([c, e, n]: [Vec3<T>; 3]) -> Self {
        Self { c, e, n }
    }

    /// Re-orthonormalizes, keeping the direction of `c` and the plane of `c, e`.
    fn renormalized(self) -> Self {
        let c = self.c.normalize();
        let e = (self.e - c * c.dot(self.e)).normalize();
        Self {
            c,
            e,
            n: c.cross(e),
        }
    }

    /// Largest violation of orthonormality.
    pub fn drift(&self) -> T {
        let one = T::one();
        [
            (self.c.norm_sq() - one).abs(),
            (self.e.norm_sq() - one).abs(),
            (self.n.norm_sq() - one).abs(),
            self.c.dot(self.e).abs(),
            self.c.dot(self.n).abs(),
            self.e.dot(self.n).abs(),
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }
}

struct FrameTable<T> {
    step: T,
    /// Nodes at `s = (i - half) · step` for `i = 0..nodes.len()`.
    half: usize,
    nodes: Vec<SphericalFrame<T>>,
}

/// Arc length parametrized curve on the unit sphere given by its geodesic
/// curvature and initial frame.
///
/// The polynomial `κ(s) = Σ kappa_poly[i] sⁱ` drives all jet computations; an
/// optional callable overrides it for pointwise evaluation.
#[derive(Clone)]
pub struct SphericalCurve<T: Scalar> {
    kappa_poly: Vec<T>,
    kappa_fn: Option<KappaFn<T>>,
    c0: Vec3<T>,
    e0: Vec3<T>,
    s_limit: T,
    table: Arc<FrameTable<T>>,
}

impl<T: Scalar> fmt::Debug for SphericalCurve<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SphericalCurve")
            .field("kappa_poly", &self.kappa_poly)
            .field("kappa_fn", &self.kappa_fn.is_some())
            .field("c0", &self.c0)
            .field("e0", &self.e0)
            .field("s_limit", &self.s_limit)
            .finish()
    }
}

impl<T: Scalar> SphericalCurve<T> {
    pub fn new(kappa_poly: Vec<T>, c0: Vec3<T>, e0: Vec3<T>) -> Result<Self> {
        let tol = T::default_tol();
        if (c0.norm() - T::one()).abs() > tol
            || (e0.norm() - T::one()).abs() > tol
            || c0.dot(e0).abs() > tol
        {
            return Err(Error::InvalidInput(
                "initial point and tangent must be orthonormal".into(),
            ));
        }
        let mut curve = Self {
            kappa_poly,
            kappa_fn: None,
            c0,
            e0,
            s_limit: T::lit(FRAC_PI_2),
            table: Arc::new(FrameTable {
                step: T::lit(FRAME_STEP),
                half: 0,
                nodes: Vec::new(),
            }),
        };
        curve.rebuild_table();
        Ok(curve)
    }

    /// Curve starting at `(1, 0, 0)` with tangent `(0, 1, 0)`.
    pub fn with_kappa(kappa_poly: Vec<T>) -> Self {
        Self::new(kappa_poly, Vec3::e1(), Vec3::e2()).expect("standard frame is orthonormal")
    }

    pub fn with_kappa_fn(mut self, kappa: KappaFn<T>) -> Self {
        self.kappa_fn = Some(kappa);
        self.rebuild_table();
        self
    }

    /// Restricts the chart to `|s| < s_limit ≤ π/2`.
    pub fn with_s_limit(mut self, s_limit: T) -> Result<Self> {
        if !(s_limit > T::zero()) || s_limit > T::lit(FRAC_PI_2) {
            return Err(Error::InvalidInput(format!(
                "chart limit {s_limit} must lie in (0, π/2]"
            )));
        }
        self.s_limit = s_limit;
        self.rebuild_table();
        Ok(self)
    }

    pub fn kappa(&self, s: T) -> T {
        match &self.kappa_fn {
            Some(k) => k(s),
            None => self
                .kappa_poly
                .iter()
                .rev()
                .fold(T::zero(), |acc, &c| acc * s + c),
        }
    }

    pub fn kappa_poly(&self) -> &[T] {
        &self.kappa_poly
    }

    pub fn kappa0(&self) -> T {
        self.kappa(T::zero())
    }

    pub fn initial_point(&self) -> Vec3<T> {
        self.c0
    }

    pub fn initial_tangent(&self) -> Vec3<T> {
        self.e0
    }

    pub fn s_limit(&self) -> T {
        self.s_limit
    }

    /// Taylor coefficients of `c`, `e`, `n` in `s` through `order`, from the
    /// spherical Frenet system with the polynomial curvature.
    pub fn series(&self, order: usize) -> [Vec<Vec3<T>>; 3] {
        let mut c = vec![self.c0];
        let mut e = vec![self.e0];
        let mut n = vec![self.c0.cross(self.e0)];
        let kappa = |j: usize| self.kappa_poly.get(j).copied().unwrap_or_else(T::zero);
        for i in 0..order {
            let mut kn = Vec3::zero();
            let mut ke = Vec3::zero();
            for j in 0..=i {
                kn += n[i - j] * kappa(j);
                ke += e[i - j] * kappa(j);
            }
            let inv = T::from_usize_lossy(i + 1).recip();
            c.push(e[i] * inv);
            e.push((kn - c[i]) * inv);
            n.push(-ke * inv);
        }
        [c, e, n]
    }

    /// `c` as a jet in the second variable.
    pub fn point_jet(&self, order: usize) -> Jet3<T> {
        let [c, _, _] = self.series(order);
        Jet3::from_v_coeffs(&c, order)
    }

    fn rhs(&self) -> impl Fn(T, &[Vec3<T>; 3]) -> [Vec3<T>; 3] + '_ {
        move |s, y| {
            let k = self.kappa(s);
            [y[1], y[2] * k - y[0], -(y[1] * k)]
        }
    }

    fn rebuild_table(&mut self) {
        let step = T::lit(FRAME_STEP);
        let half = (self.s_limit / step).ceil().to_usize().unwrap_or(0) + 1;
        let mut nodes = vec![
            SphericalFrame {
                c: Vec3::zero(),
                e: Vec3::zero(),
                n: Vec3::zero()
            };
            2 * half + 1
        ];
        let start = SphericalFrame {
            c: self.c0,
            e: self.e0,
            n: self.c0.cross(self.e0),
        };
        nodes[half] = start;
        {
            let rhs = self.rhs();
            for dir in [1i64, -1] {
                let h = if dir > 0 { step } else { -step };
                let mut y = start.to_array();
                for i in 1..=half {
                    let s = h * T::from_usize_lossy(i - 1);
                    y = SphericalFrame::from_array(rk4_step(&rhs, s, &y, h))
                        .renormalized()
                        .to_array();
                    let idx = if dir > 0 { half + i } else { half - i };
                    nodes[idx] = SphericalFrame::from_array(y);
                }
            }
        }
        self.table = Arc::new(FrameTable { step, half, nodes });
    }

    /// Frame at `s` from the nearest table node and one partial RK4 step.
    pub fn frame_at(&self, s: T) -> Result<SphericalFrame<T>> {
        if s.abs() >= self.s_limit {
            return Err(Error::ChartExceeded {
                s: s.abs().to_f64().unwrap_or(f64::NAN),
                limit: self.s_limit.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.frame_unchecked(s))
    }

    fn frame_unchecked(&self, s: T) -> SphericalFrame<T> {
        let t = &self.table;
        let pos = (s / t.step).round();
        let max = T::from_usize_lossy(t.half);
        let pos = pos.max(-max).min(max);
        let idx = (pos + max).to_usize().unwrap_or(t.half);
        let s_node = pos * t.step;
        let mut y = t.nodes[idx].to_array();
        let rhs = self.rhs();
        // Beyond the table (only possible for callers ignoring the chart) keep stepping.
        let mut s_cur = s_node;
        let mut rest = s - s_node;
        while rest.abs() > t.step {
            let h = t.step.copysign(rest);
            y = rk4_step(&rhs, s_cur, &y, h);
            s_cur += h;
            rest -= h;
        }
        SphericalFrame::from_array(rk4_step(&rhs, s_cur, &y, rest)).renormalized()
    }

    pub fn point(&self, s: T) -> Result<Vec3<T>> {
        Ok(self.frame_at(s)?.c)
    }
}

/// Circle of constant geodesic curvature `κ` through `(1, 0, 0)` with
/// tangent `(0, 1, 0)`.
pub fn circle_family<T: Scalar>(kappa: T) -> SphericalCurve<T> {
    SphericalCurve::with_kappa(vec![kappa])
}

/// Closed form of [`circle_family`]:
/// `(κ² + cos μs, μ sin μs, κ(1 - cos μs)) / μ²` with `μ = √(1 + κ²)`.
pub fn circle_point<T: Scalar>(kappa: T, s: T) -> Vec3<T> {
    let mu_sq = T::one() + kappa * kappa;
    let mu = mu_sq.sqrt();
    let (sn, cs) = (mu * s).sin_cos();
    Vec3::new(kappa * kappa + cs, mu * sn, kappa * (T::one() - cs)) * mu_sq.recip()
}

/// The degenerate quadratic cross cap `(u, uv, a11 uv + a02 v² / 2)`.
pub fn base_crosscap<T: Scalar>(a02: T, a11: T, order: usize) -> SurfaceMap<T> {
    SurfaceMap::quadratic_crosscap(T::zero(), a11, a02, order)
}

/// First fundamental form of [`base_crosscap`] as jets of the given order:
/// `E₀ = 1 + q v²`, `F₀ = q uv + a02 a11 v²`, `G₀ = q u² + 2 a02 a11 uv + a02² v²`.
pub fn base_first_form<T: Scalar>(a02: T, a11: T, order: usize) -> FirstForm<T> {
    let q = T::one() + a11 * a11;
    let mut e = Jet2::constant(T::one(), order);
    let mut f = Jet2::zeros(order);
    let mut g = Jet2::zeros(order);
    if order >= 2 {
        e.set_coeff(0, 2, q);
        f.set_coeff(1, 1, q);
        f.set_coeff(0, 2, a02 * a11);
        g.set_coeff(2, 0, q);
        g.set_coeff(1, 1, T::lit(2.0) * a02 * a11);
        g.set_coeff(0, 2, a02 * a02);
    }
    FirstForm { e, f, g }
}

/// `(a12, a03, b3)` of `f_c` in terms of `κ(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrinsicTriple<T> {
    pub a12: T,
    pub a03: T,
    pub b3: T,
}

pub fn extrinsic_invariants<T: Scalar>(kappa0: T, a02: T, a11: T) -> ExtrinsicTriple<T> {
    let q = T::one() + a11 * a11;
    let rq = q.sqrt();
    ExtrinsicTriple {
        a12: kappa0 * q * rq,
        a03: T::lit(3.0) * a02 * a11 * kappa0 * rq,
        b3: -T::lit(2.0) * a02 * kappa0 * rq,
    }
}

#[derive(Debug, Clone)]
pub struct DeformationFamily<T: Scalar> {
    pub a02: T,
    pub a11: T,
    pub curve: SphericalCurve<T>,
}

impl<T: Scalar> DeformationFamily<T> {
    pub fn new(a02: T, a11: T, curve: SphericalCurve<T>) -> Result<Self> {
        if !(a02 > T::zero()) {
            return Err(Error::InvalidInput(format!("a02 = {a02} must be positive")));
        }
        Ok(Self { a02, a11, curve })
    }

    /// Family whose curve starts at `(1, 0, 0)` with tangent `(0, 1, a11) / √q`,
    /// the frame in which `f_c` is already canonical through order 2.
    pub fn with_kappa(a02: T, a11: T, kappa_poly: Vec<T>) -> Result<Self> {
        let q = T::one() + a11 * a11;
        let e0 = Vec3::new(T::zero(), T::one(), a11) * q.sqrt().recip();
        let curve = SphericalCurve::new(kappa_poly, Vec3::e1(), e0)?;
        Self::new(a02, a11, curve)
    }

    /// `1 + a11²`.
    pub fn q(&self) -> T {
        T::one() + self.a11 * self.a11
    }

    /// Curve parameter `s(v) = arctan(√q v)`.
    pub fn s_of_v(&self, v: T) -> T {
        (self.q().sqrt() * v).atan()
    }

    fn arctan_jet(&self, order: usize) -> Jet2<T> {
        let rq = self.q().sqrt();
        let coeffs: Vec<T> = (0..=order)
            .map(|k| {
                if k % 2 == 0 {
                    T::zero()
                } else {
                    let sign = if (k / 2) % 2 == 0 {
                        T::one()
                    } else {
                        -T::one()
                    };
                    sign * rq.powi(k as i32) / T::from_usize_lossy(k)
                }
            })
            .collect();
        Jet2::from_v_coeffs(&coeffs, order)
    }

    pub fn xi_jet(&self, order: usize) -> Result<Jet3<T>> {
        let c_hat = self
            .curve
            .point_jet(order)
            .compose(&Jet2::zeros(order), &self.arctan_jet(order))?;
        let w = Jet2::from_v_coeffs(&[T::one(), T::zero(), self.q()], order).sqrt()?;
        Ok(c_hat.scale_by(&w))
    }

    pub fn b_jet(&self, order: usize) -> Result<Jet3<T>> {
        let xi = self.xi_jet(order + 1)?;
        let xi1 = xi.deriv_v();
        let xi = xi.truncate(order);
        Ok(&xi1.scale(self.a11) + &xi.cross(&xi1))
    }

    /// `γ` by exact term-wise integration of the jet of `t B(t)`.
    pub fn gamma_jet(&self, order: usize) -> Result<Jet3<T>> {
        let order_b = order.saturating_sub(2);
        let tb = self.b_jet(order_b)?.mul_monomial(0, 1);
        Ok(tb.integrate_v().scale(self.a02 / self.q()).truncate(order))
    }

    /// The jet of `f_c = γ(v) + u ξ(v)`.
    pub fn jet(&self, order: usize) -> Result<Jet3<T>> {
        let gamma = self.gamma_jet(order)?;
        let u_xi = self.xi_jet(order.saturating_sub(1))?.mul_monomial(1, 0);
        Ok((&gamma + &u_xi).truncate(order))
    }

    /// `f_c` on the default domain `[-1, 1]²`.
    pub fn build_crosscap(&self, order: usize) -> Result<SurfaceMap<T>> {
        self.build_crosscap_on(order, Domain::default())
    }

    /// `f_c` with its jet and a pointwise evaluator (adaptive quadrature for
    /// `γ`, tabulated Frenet frame for `ξ`).
    pub fn build_crosscap_on(&self, order: usize, domain: Domain<T>) -> Result<SurfaceMap<T>> {
        let v_max = domain.v.0.abs().max(domain.v.1.abs());
        let s_max = self.s_of_v(v_max);
        if s_max >= self.curve.s_limit() {
            return Err(Error::ChartExceeded {
                s: s_max.to_f64().unwrap_or(f64::NAN),
                limit: self.curve.s_limit().to_f64().unwrap_or(f64::NAN),
            });
        }
        let patch = DeformationPatch {
            a02: self.a02,
            a11: self.a11,
            curve: self.curve.clone(),
        };
        Ok(SurfaceMap::from_jet(self.jet(order)?)
            .with_evaluator(Arc::new(patch))
            .with_domain(domain))
    }

    /// `δ = √q √(q u² + 2 a02 a11 uv + a02² v² (1 + v²))`, the norm of `f_u × f_v`.
    pub fn delta(&self, u: T, v: T) -> T {
        let q = self.q();
        let (a02, a11) = (self.a02, self.a11);
        q.sqrt()
            * (q * u * u + T::lit(2.0) * a02 * a11 * u * v + a02 * a02 * v * v * (T::one() + v * v))
                .sqrt()
    }

    /// Closed form of the unit normal `f_u × f_v / |f_u × f_v|`.
    pub fn normal_closed(&self, u: T, v: T) -> Result<Vec3<T>> {
        let delta = self.checked_delta(u, v)?;
        let q = self.q();
        let fr = self.curve.frame_unchecked(self.s_of_v(v));
        let w = (T::one() + q * v * v).sqrt();
        Ok((fr.n * (q * u + self.a02 * self.a11 * v) - fr.e * (self.a02 * v * w)) * delta.recip())
    }

    fn checked_delta(&self, u: T, v: T) -> Result<T> {
        let delta = self.delta(u, v);
        if !(delta > T::epsilon() * T::lit(64.0)) {
            return Err(Error::DegeneratePoint {
                u: u.to_f64().unwrap_or(f64::NAN),
                v: v.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(delta)
    }

    /// Closed form `(L, M, N)` with respect to [`normal_closed`]; `κ` is
    /// evaluated at the curve parameter `s(v)`.
    ///
    /// [`normal_closed`]: Self::normal_closed
    pub fn second_form_closed(&self, u: T, v: T) -> Result<SecondForm<T>> {
        let delta = self.checked_delta(u, v)?;
        let q = self.q();
        let rq = q.sqrt();
        let w3 = (T::one() + q * v * v).powf(T::lit(1.5));
        let kappa = self.curve.kappa(self.s_of_v(v));
        Ok(SecondForm {
            l: T::zero(),
            m: -self.a02 * rq * v / delta,
            n: self.a02 * rq * u / delta + delta * kappa / w3,
        })
    }

    /// `f_c` as a ruled surface with directrix `γ` and ruling `ξ`.
    pub fn ruled(&self, order: usize) -> Result<RuledSurface<T>> {
        RuledSurface::new(self.gamma_jet(order)?, self.xi_jet(order)?)
    }

    /// Base cross cap `f₀` that every member is isometric to.
    pub fn base(&self, order: usize) -> SurfaceMap<T> {
        base_crosscap(self.a02, self.a11, order)
    }

    pub fn extrinsic_invariants(&self) -> ExtrinsicTriple<T> {
        extrinsic_invariants(self.curve.kappa0(), self.a02, self.a11)
    }
}

struct DeformationPatch<T: Scalar> {
    a02: T,
    a11: T,
    curve: SphericalCurve<T>,
}

/// `ξ`, `ξ'`, `ξ''` at `v`.
struct XiData<T> {
    xi: Vec3<T>,
    xi1: Vec3<T>,
    xi2: Vec3<T>,
}

impl<T: Scalar> DeformationPatch<T> {
    fn q(&self) -> T {
        T::one() + self.a11 * self.a11
    }

    fn xi_data(&self, v: T) -> XiData<T> {
        let q = self.q();
        let rq = q.sqrt();
        let s = (rq * v).atan();
        let fr = self.curve.frame_unchecked(s);
        let kappa = self.curve.kappa(s);
        let w_sq = T::one() + q * v * v;
        let w = w_sq.sqrt();
        let w1 = q * v / w;
        let w2 = q / (w * w_sq);
        let s1 = rq / w_sq;
        let s2 = -T::lit(2.0) * q * rq * v / (w_sq * w_sq);
        let c1 = fr.e * s1;
        let c2 = (fr.n * kappa - fr.c) * (s1 * s1) + fr.e * s2;
        XiData {
            xi: fr.c * w,
            xi1: fr.c * w1 + c1 * w,
            xi2: fr.c * w2 + c1 * (T::lit(2.0) * w1) + c2 * w,
        }
    }

    fn b(&self, d: &XiData<T>) -> Vec3<T> {
        d.xi1 * self.a11 + d.xi.cross(d.xi1)
    }

    fn gamma(&self, v: T) -> Vec3<T> {
        let integrand = |t: T| self.b(&self.xi_data(t)) * t;
        adaptive_simpson(&integrand, T::zero(), v, T::lit(GAMMA_QUAD_TOL)) * (self.a02 / self.q())
    }
}

impl<T: Scalar> SurfacePatch<T> for DeformationPatch<T> {
    fn point(&self, u: T, v: T) -> Vec3<T> {
        self.gamma(v) + self.xi_data(v).xi * u
    }

    fn partials(&self, u: T, v: T) -> Partials<T> {
        let d = self.xi_data(v);
        let k = self.a02 / self.q();
        let b = self.b(&d);
        let b1 = d.xi2 * self.a11 + d.xi.cross(d.xi2);
        Partials {
            fu: d.xi,
            fv: b * (k * v) + d.xi1 * u,
            fuu: Vec3::zero(),
            fuv: d.xi1,
            fvv: (b + b1 * v) * k + d.xi2 * u,
        }
    }
}

/// Cell-centred `n × n` sample grid; for symmetric domains and even `n` it
/// avoids the singular point.
pub fn sample_grid<T: Scalar>(domain: &Domain<T>, n: usize) -> Vec<(T, T)> {
    let nn = T::from_usize_lossy(n);
    let half = T::lit(0.5);
    let at = |(a, b): (T, T), i: usize| a + (b - a) * (T::from_usize_lossy(i) + half) / nn;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (at(domain.u, i), at(domain.v, j))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryReport<T> {
    /// Largest coefficient difference of the `(E, F, G)` jets.
    pub jet_max_dev: T,
    /// Largest pointwise difference of `(E, F, G)` on the grid, if one was given.
    pub grid_max_dev: Option<T>,
    pub tol: T,
    pub passed: bool,
}

/// Compares the induced metrics of `f` and `g` in their common coordinates.
pub fn verify_isometry<T: Scalar>(
    f: &SurfaceMap<T>,
    g: &SurfaceMap<T>,
    grid: &[(T, T)],
    tol: T,
) -> IsometryReport<T> {
    let jet_max_dev = first_form(f).max_abs_diff(&first_form(g));
    let grid_max_dev = (!grid.is_empty()).then(|| {
        grid.iter().fold(T::zero(), |m, &(u, v)| {
            let (a, b) = (first_form_at(f, u, v), first_form_at(g, u, v));
            m.max((a.e - b.e).abs())
                .max((a.f - b.f).abs())
                .max((a.g - b.g).abs())
        })
    });
    let passed = jet_max_dev <= tol && grid_max_dev.is_none_or(|d| d <= tol);
    IsometryReport {
        jet_max_dev,
        grid_max_dev,
        tol,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::second_form_at;
    use approx::assert_abs_diff_eq;

    #[test]
    fn circle_table_matches_closed_form() {
        for kappa in [0.0, 0.5, 1.0, 3.0] {
            let curve = circle_family(kappa);
            for i in -15..=15 {
                let s = 0.1 * i as f64;
                let fr = curve.frame_at(s).unwrap();
                assert!((fr.c - circle_point(kappa, s)).max_abs() < 1e-10);
                assert!(fr.drift() < 1e-12);
            }
        }
        let c0 = circle_point(0.0, 0.4);
        assert_abs_diff_eq!(c0.x, 0.4f64.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(c0.y, 0.4f64.sin(), epsilon = 1e-15);
    }

    #[test]
    fn frenet_series_matches_circle() {
        let kappa = 1.0;
        let [c, _, _] = circle_family(kappa).series(8);
        let s: f64 = 0.05;
        let approx_c = c
            .iter()
            .enumerate()
            .fold(Vec3::zero(), |acc, (i, &ci)| acc + ci * s.powi(i as i32));
        assert!((approx_c - circle_point(kappa, s)).max_abs() < 1e-12);
    }

    #[test]
    fn chart_is_enforced() {
        let curve = circle_family(1.0).with_s_limit(0.5).unwrap();
        assert!(matches!(
            curve.frame_at(0.6),
            Err(Error::ChartExceeded { .. })
        ));
        let fam = DeformationFamily::new(2.0, 0.0, curve).unwrap();
        assert!(matches!(
            fam.build_crosscap(4),
            Err(Error::ChartExceeded { .. })
        ));
    }

    #[test]
    fn geodesic_family_is_standard_crosscap() {
        let fam = DeformationFamily::new(2.0, 0.0, circle_family(0.0)).unwrap();
        let f = fam.build_crosscap(6).unwrap();
        let std = SurfaceMap::<f64>::standard_crosscap(6);
        assert!(f.jet().max_abs_diff(std.jet()) < 1e-13);
        for &(u, v) in &[(0.3, -0.4), (-0.7, 0.9)] {
            assert!((f.point(u, v) - std.point(u, v)).max_abs() < 1e-9);
        }
    }

    #[test]
    fn xi_and_b_identities() {
        let fam = DeformationFamily::with_kappa(1.5, 0.7, vec![1.0, -0.4, 0.3]).unwrap();
        let n = 7;
        let q = fam.q();
        let xi = fam.xi_jet(n + 1).unwrap();
        let xi1 = xi.deriv_v();
        let xi = xi.truncate(n);
        let mut want = Jet2::constant(1.0, n);
        want.set_coeff(0, 2, q);
        assert!(xi.dot(&xi).max_abs_diff(&want) < 1e-12);
        assert!(xi1.dot(&xi1).max_abs_diff(&Jet2::constant(q, n)) < 1e-12);
        assert!(xi.dot(&xi1).max_abs_diff(&Jet2::monomial(0, 1, q, n)) < 1e-12);
        let b = fam.b_jet(n).unwrap();
        assert!(b.dot(&b).max_abs_diff(&Jet2::constant(q * q, n)) < 1e-12);
    }

    #[test]
    fn evaluator_agrees_with_jet_near_origin() {
        let fam = DeformationFamily::with_kappa(2.0, 0.5, vec![1.0, 0.5]).unwrap();
        let f = fam.build_crosscap(10).unwrap();
        let (u, v) = (0.02, -0.03);
        let p = f.partials(u, v);
        let (pt, pj) = f.jet().eval_partials(u, v);
        assert!((f.point(u, v) - pt).max_abs() < 1e-12);
        assert!((p.fv - pj.fv).max_abs() < 1e-11);
        assert!((p.fvv - pj.fvv).max_abs() < 1e-9);
    }

    #[test]
    fn closed_second_form_matches_numeric() {
        let fam = DeformationFamily::with_kappa(1.3, -0.6, vec![0.8, 0.7]).unwrap();
        let f = fam.build_crosscap(6).unwrap();
        for &(u, v) in &[(0.4, 0.3), (-0.5, 0.8), (0.2, -0.9)] {
            let a = second_form_at(&f, u, v).unwrap();
            let b = fam.second_form_closed(u, v).unwrap();
            assert_abs_diff_eq!(a.l, b.l, epsilon = 1e-8);
            assert_abs_diff_eq!(a.m, b.m, epsilon = 1e-8);
            assert_abs_diff_eq!(a.n, b.n, epsilon = 1e-8);
        }
        assert!(fam.second_form_closed(0.0, 0.0).is_err());
    }

    #[test]
    fn extrinsic_closed_forms() {
        let t = extrinsic_invariants(1.0, 2.0, 0.0);
        assert_eq!((t.a12, t.a03, t.b3), (1.0, 0.0, -4.0));
        let z = extrinsic_invariants(0.0, 2.0, 3.0);
        assert_eq!((z.a12, z.a03, z.b3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn family_member_is_isometric_to_base() {
        let fam = DeformationFamily::new(2.0, 0.0, circle_family(1.0)).unwrap();
        let f = fam.build_crosscap(7).unwrap();
        let base = fam.base(7);
        let grid = sample_grid(&Domain::default(), 4);
        let rep = verify_isometry(&base, &f, &grid, 1e-6);
        assert!(rep.passed, "{rep:?}");
        assert!(rep.jet_max_dev < 1e-9);
    }
}
