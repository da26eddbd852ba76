//! Leading behaviour of the mean and Gaussian curvature along rays into the
//! cross cap, in polar coordinates `u = r cos θ`, `v = r sin θ` of the
//! canonical coordinate system:
//!
//! ```text
//! r² H → a02 cos θ / (2 A_θ³)
//! r² K → a02 (a20 cos² θ - a02 sin² θ) / A_θ⁴
//! r⁴ (H² - K) → (a02 cos θ)² / (4 A_θ⁶)
//! A_θ = √(cos² θ + (a11 cos θ + a02 sin θ)²)
//! ```
//!
//! with `O(r)` remainders.

use crate::error::{Error, Result};
use crate::invariants::IntrinsicTriple;
use crate::normalform::{reduce, NormalForm};
use crate::numerics::fit_line;
use crate::surface::{curvatures_at, SurfaceMap};
use crate::Scalar;

/// Smallest radius accepted; below it double precision cancellation dominates.
pub const MIN_RADIUS: f64 = 1e-6;
/// Required least-squares slope of `log |error|` against `log r`.
pub const MIN_SLOPE: f64 = 0.9;
/// Errors below this are treated as exact agreement.
pub const EXACT_FLOOR: f64 = 1e-12;

/// Radii `10^{-1}, 10^{-1.5}, …, 10^{-4}`.
pub fn default_radii<T: Scalar>() -> Vec<T> {
    (0..7)
        .map(|i| T::lit(10f64.powf(-1.0 - 0.5 * i as f64)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarLeading<T> {
    pub a_theta: T,
    pub h_lead: T,
    pub k_lead: T,
    pub gap_lead: T,
}

pub fn a_theta<T: Scalar>(a02: T, a11: T, theta: T) -> T {
    let (s, c) = theta.sin_cos();
    let w = a11 * c + a02 * s;
    (c * c + w * w).sqrt()
}

/// `min_θ A_θ`, the square root of the smallest eigenvalue of the form
/// `c² + (a11 c + a02 s)²`.
pub fn a_theta_lower_bound<T: Scalar>(a02: T, a11: T) -> T {
    let tr = T::one() + a11 * a11 + a02 * a02;
    let det = a02 * a02;
    let disc = (tr * tr - T::lit(4.0) * det).max(T::zero()).sqrt();
    (T::lit(2.0) * det / (tr + disc)).sqrt()
}

pub fn leading<T: Scalar>(t: &IntrinsicTriple<T>, theta: T) -> PolarLeading<T> {
    let (s, c) = theta.sin_cos();
    let a = a_theta(t.a02, t.a11, theta);
    let a2 = a * a;
    let h_lead = t.a02 * c / (T::lit(2.0) * a2 * a);
    PolarLeading {
        a_theta: a,
        h_lead,
        k_lead: t.a02 * (t.a20 * c * c - t.a02 * s * s) / (a2 * a2),
        gap_lead: h_lead * h_lead,
    }
}

/// One sampled quantity against its predicted limit.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFit<T> {
    pub values: Vec<T>,
    pub leading: T,
    pub errors: Vec<T>,
    /// Slope of `log |error|` against `log r` over the four smallest radii;
    /// `None` if the errors are exact.
    pub slope: Option<T>,
    /// Intercept of the least-squares line `value ≈ limit + C r` through the
    /// four smallest radii.
    pub extrapolated: T,
    /// `max |error| / r` over the radii.
    pub constant: T,
    pub exact: bool,
    /// `|error| / r` on the two smallest radii stays within its maximum over
    /// the larger ones.
    pub bounded: bool,
    pub converged: bool,
}

fn fit_series<T: Scalar>(radii: &[T], values: Vec<T>, leading: T) -> SeriesFit<T> {
    let errors: Vec<T> = values.iter().map(|&x| (x - leading).abs()).collect();
    let floor = T::lit(EXACT_FLOOR) * leading.abs().max(T::one());
    let exact = errors.iter().all(|&e| e <= floor);
    let tail = radii.len().saturating_sub(4);
    let logs: Vec<(T, T)> = radii[tail..]
        .iter()
        .zip(&errors[tail..])
        .filter(|(_, &e)| e > floor)
        .map(|(&r, &e)| (r.ln(), e.ln()))
        .collect();
    let slope = if exact || logs.len() < 2 {
        None
    } else {
        let (xs, ys): (Vec<T>, Vec<T>) = logs.into_iter().unzip();
        fit_line(&xs, &ys).map(|(_, m)| m)
    };
    let extrapolated = fit_line(&radii[tail..], &values[tail..]).map_or(leading, |(b, _)| b);
    let constant = radii
        .iter()
        .zip(&errors)
        .fold(T::zero(), |m, (&r, &e)| m.max(e / r));
    let ratios: Vec<T> = radii.iter().zip(&errors).map(|(&r, &e)| e / r).collect();
    let split = ratios.len().saturating_sub(2);
    let bounded = split >= 2 && {
        let large = ratios[..split].iter().fold(T::zero(), |m, &x| m.max(x));
        ratios[split..].iter().all(|&x| x <= large)
    };
    // a sign change of the remainder inside the sweep spoils the log fit but
    // not the bound |error| ≤ C r
    let converged = exact || slope.is_some_and(|m| m >= T::lit(MIN_SLOPE)) || bounded;
    SeriesFit {
        values,
        leading,
        errors,
        slope,
        extrapolated,
        constant,
        exact,
        bounded,
        converged,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub theta: T,
    pub radii: Vec<T>,
    pub triple: IntrinsicTriple<T>,
    /// `r² H`.
    pub h: SeriesFit<T>,
    /// `r² K`.
    pub k: SeriesFit<T>,
    pub passed: bool,
}

fn check_radii<T: Scalar>(radii: &[T]) -> Result<()> {
    if radii.len() < 4 {
        return Err(Error::InvalidInput("need at least 4 radii".into()));
    }
    if radii.iter().any(|&r| !(r >= T::lit(MIN_RADIUS))) {
        return Err(Error::InvalidInput(format!(
            "radii must be at least {MIN_RADIUS:e}"
        )));
    }
    if radii.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput(
            "radii must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

/// Canonical polar point `(r, θ)` in the coordinates of `f`, through the
/// linear part of the domain change (higher terms only move the point by
/// `O(r²)`, inside the `O(r)` remainder).
fn polar_point<T: Scalar>(nf: &NormalForm<T>, r: T, theta: T) -> (T, T) {
    let (s, c) = theta.sin_cos();
    let (ub, vb) = (r * c, r * s);
    let (q, p) = &nf.domain_change;
    (
        q.coeff(1, 0) * ub + q.coeff(0, 1) * vb,
        p.coeff(1, 0) * ub + p.coeff(0, 1) * vb,
    )
}

fn triple_of<T: Scalar>(nf: &NormalForm<T>) -> IntrinsicTriple<T> {
    IntrinsicTriple {
        a02: nf.a(0, 2),
        a20: nf.a(2, 0),
        a11: nf.a(1, 1),
        // canonical f_u = e1, f_uv = (0, 1, a11), f_vv = (0, 0, a02)
        delta_sq: nf.a(0, 2) * nf.a(0, 2),
    }
}

/// `(r² H, r² K)` samples along the ray at `θ` and their convergence to the
/// leading terms.
pub fn verify_convergence<T: Scalar>(
    f: &SurfaceMap<T>,
    theta: T,
    radii: &[T],
) -> Result<ConvergenceReport<T>> {
    check_radii(radii)?;
    let nf = reduce(f, f.order().min(4))?;
    let triple = triple_of(&nf);
    let lead = leading(&triple, theta);
    let mut hs = Vec::with_capacity(radii.len());
    let mut ks = Vec::with_capacity(radii.len());
    for &r in radii {
        let (u, v) = polar_point(&nf, r, theta);
        let c = curvatures_at(f, u, v)?;
        hs.push(r * r * c.mean);
        ks.push(r * r * c.gaussian);
    }
    let h = fit_series(radii, hs, lead.h_lead);
    let k = fit_series(radii, ks, lead.k_lead);
    let passed = h.converged && k.converged;
    Ok(ConvergenceReport {
        theta,
        radii: radii.to_vec(),
        triple,
        h,
        k,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport<T> {
    pub theta: T,
    pub radii: Vec<T>,
    /// `r⁴ (H² - K)` and its fit against `(a02 cos θ)² / (4 A_θ⁶)`.
    pub gap: SeriesFit<T>,
    /// For `cos θ = 0`: whether `K < 0` at every radius.
    pub k_negative: Option<bool>,
    pub passed: bool,
}

/// Umbilic check: away from `θ = ±π/2` the gap `H² - K` blows up like `r⁻⁴`
/// with a positive coefficient; on `θ = ±π/2` the Gaussian curvature is
/// negative instead.
pub fn umbilic_gap<T: Scalar>(f: &SurfaceMap<T>, theta: T, radii: &[T]) -> Result<GapReport<T>> {
    check_radii(radii)?;
    let nf = reduce(f, f.order().min(4))?;
    let lead = leading(&triple_of(&nf), theta);
    let mut gaps = Vec::with_capacity(radii.len());
    let mut all_negative = true;
    for &r in radii {
        let (u, v) = polar_point(&nf, r, theta);
        let c = curvatures_at(f, u, v)?;
        let r2 = r * r;
        gaps.push(r2 * r2 * (c.mean * c.mean - c.gaussian));
        all_negative &= c.gaussian < T::zero();
    }
    let on_axis = theta.cos().abs() <= T::default_tol();
    let gap = fit_series(radii, gaps, lead.gap_lead);
    let (k_negative, passed) = if on_axis {
        (Some(all_negative), all_negative)
    } else {
        (None, gap.converged && lead.gap_lead > T::zero())
    };
    Ok(GapReport {
        theta,
        radii: radii.to_vec(),
        gap,
        k_negative,
        passed,
    })
}
