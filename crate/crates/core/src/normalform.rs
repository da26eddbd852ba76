//! Canonical normal form of a cross cap.
//!
//! After a rigid motion of ℝ³ and an orientation preserving change of the
//! domain coordinates every cross cap germ takes the form
//!
//! ```text
//! ( u,  uv + Σ_{i≥3} b_i v^i / i!,  Σ_{j+k≥2} a_jk u^j v^k / (j! k!) )
//! ```
//!
//! with `a02 > 0`, and the coefficients `a_jk`, `b_i` are then unique.
//! [`reduce`] computes them order by order on jets.

use crate::error::{Error, Result};
use crate::jet::{Jet2, Jet3};
use crate::scalar::factorial;
use crate::surface::{require_crosscap, SurfaceMap};
use crate::vec3::{Mat3, Vec3};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm<T> {
    order: usize,
    /// `a_jk` stored at coefficient `(j, k)`; entries with `j + k < 2` are zero.
    a: Jet2<T>,
    /// `b_i` at index `i`; entries below 3 are zero.
    b: Vec<T>,
    /// Ambient rotation `R` with `R · (f - translation) ∘ domain_change` canonical.
    pub rotation: Mat3<T>,
    pub translation: Vec3<T>,
    /// `(u, v)` of the input as jets in the canonical coordinates.
    pub domain_change: (Jet2<T>, Jet2<T>),
    /// The input expressed in canonical coordinates.
    pub canonical: Jet3<T>,
    /// Largest coefficient that violates the canonical shape.
    pub residual: T,
}

impl<T: Scalar> NormalForm<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `a_jk`, zero when `j + k` is outside `2..=order`.
    pub fn a(&self, j: usize, k: usize) -> T {
        if j + k < 2 {
            T::zero()
        } else {
            self.a.coeff_or_zero(j, k)
        }
    }

    /// `b_i`, zero when `i` is outside `3..=order`.
    pub fn b(&self, i: usize) -> T {
        self.b.get(i).copied().unwrap_or_else(T::zero)
    }

    /// `(j, k, a_jk)` for `2 ≤ j + k ≤ order`.
    pub fn a_entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.a.iter().filter(|&(j, k, _)| j + k >= 2)
    }

    /// `(i, b_i)` for `3 ≤ i ≤ order`.
    pub fn b_entries(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.b.iter().copied().enumerate().skip(3)
    }

    /// Largest coefficient difference between two normal forms, through the
    /// smaller of the two orders (or `max_order` if smaller).
    pub fn max_coeff_diff(&self, other: &Self, max_order: usize) -> T {
        let n = self.order.min(other.order).min(max_order);
        let mut m = T::zero();
        for d in 2..=n {
            for k in 0..=d {
                m = m.max((self.a(d - k, k) - other.a(d - k, k)).abs());
            }
            m = m.max((self.b(d) - other.b(d)).abs());
        }
        m
    }

    /// Builds the canonical map with the given coefficients.
    pub fn canonical_map(a: &[(usize, usize, T)], b: &[(usize, T)], order: usize) -> Jet3<T> {
        let mut jet = Jet3::zeros(order);
        jet.x.set_coeff(1, 0, T::one());
        jet.y.set_coeff(1, 1, T::one());
        for &(i, bi) in b {
            if (3..=order).contains(&i) {
                jet.y.add_to_coeff(0, i, bi / factorial::<T>(i));
            }
        }
        for &(j, k, ajk) in a {
            if (2..=order).contains(&(j + k)) {
                jet.z
                    .add_to_coeff(j, k, ajk / (factorial::<T>(j) * factorial::<T>(k)));
            }
        }
        jet
    }
}

/// Reduces `f` to canonical form through `order` (capped by the jet order).
pub fn reduce<T: Scalar>(f: &SurfaceMap<T>, order: usize) -> Result<NormalForm<T>> {
    reduce_with_tol(f, order, T::default_tol())
}

pub fn reduce_with_tol<T: Scalar>(
    f: &SurfaceMap<T>,
    order: usize,
    tol: T,
) -> Result<NormalForm<T>> {
    let order = order.min(f.order());
    let test = require_crosscap(f, tol)?;
    let jet = f.jet().truncate(order);
    let translation = jet.value();
    let centered = jet.add_constant(-translation);

    // (u,v) ↦ (-u,-v) makes Δ positive; then the frame below yields b-coefficient
    // orientation with positive uv-coefficient and a02 > 0 at once.
    let flip = test.delta < T::zero();
    let (su, sv) = if flip {
        (-Jet2::var_u(order), -Jet2::var_v(order))
    } else {
        (Jet2::var_u(order), Jet2::var_v(order))
    };
    let oriented = centered.compose(&su, &sv)?;

    let fu = oriented.partial(1, 0);
    let fvv = oriented.partial(0, 2);
    let e1 = fu.normalize();
    let w = fvv - e1 * fvv.dot(e1);
    let e3 = w.try_normalize(tol).ok_or(Error::NotACrossCap {
        fv_norm: 0.0,
        delta: test.delta.to_f64().unwrap_or(f64::NAN),
    })?;
    let e2 = e3.cross(e1);
    let rotation = Mat3::from_rows(e1, e2, e3);
    let framed = oriented.transform(&rotation);

    let ubar = Jet2::var_u(order);
    let vbar = Jet2::var_v(order);

    // First component: find u = g(ū, v) with x(g(ū, v), v) = ū.
    let x = &framed.x;
    let alpha = x.coeff(1, 0);
    let mut g = ubar.scale(alpha.recip());
    for d in 2..=order {
        let res = &x.compose(&g, &vbar)? - &ubar;
        for (j, k, r) in res.homogeneous(d).collect::<Vec<_>>() {
            g.add_to_coeff(j, k, -r / alpha);
        }
    }

    // Second component: find v = p(ū, v̄) with y(g(ū, p), p) = ūv̄ + β(v̄).
    let y = framed.y.compose(&g, &vbar)?;
    let c11 = y.coeff(1, 1);
    let c20 = y.coeff(2, 0);
    if !(c11 > tol) {
        return Err(Error::SolveFailed {
            order: 2,
            residual: c11.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut p = &ubar.scale(-c20 / c11) + &vbar.scale(c11.recip());
    for d in 3..=order {
        let w = y.compose(&ubar, &p)?;
        for (j, k, r) in w.homogeneous(d).collect::<Vec<_>>() {
            // ū^j v̄^k with j ≥ 1 is produced by c11 · ū · (ū^{j-1} v̄^k) in p
            if j >= 1 {
                p.add_to_coeff(j - 1, k, -r / c11);
            }
        }
    }
    let q = g.compose(&ubar, &p)?;
    let domain_change = if flip { (-q, -p) } else { (q, p) };

    let canonical = centered
        .compose(&domain_change.0, &domain_change.1)?
        .transform(&rotation);

    // rounding grows with the size of the canonical coefficients
    let scale = jet.max_abs().max(canonical.max_abs()).max(T::one());
    let (residual, worst) = shape_residual(&canonical);
    if residual > tol * scale {
        return Err(Error::SolveFailed {
            order: worst,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }

    let a = Jet2::from_fn(order, |j, k| {
        if j + k < 2 {
            T::zero()
        } else {
            canonical.z.coeff(j, k) * factorial::<T>(j) * factorial::<T>(k)
        }
    });
    let b = (0..=order)
        .map(|i| {
            if i < 3 {
                T::zero()
            } else {
                canonical.y.coeff(0, i) * factorial::<T>(i)
            }
        })
        .collect();
    let nf = NormalForm {
        order,
        a,
        b,
        rotation,
        translation,
        domain_change,
        canonical,
        residual,
    };
    if !(nf.a(0, 2) > T::zero()) {
        return Err(Error::SolveFailed {
            order: 2,
            residual: nf.a(0, 2).to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(nf)
}

/// Largest deviation from the canonical shape and the lowest degree at which
/// it is attained.
fn shape_residual<T: Scalar>(c: &Jet3<T>) -> (T, usize) {
    let mut worst = T::zero();
    let mut worst_order = 0;
    let mut record = |val: T, d: usize| {
        if val.abs() > worst {
            worst = val.abs();
            worst_order = d;
        }
    };
    for (j, k, v) in c.x.iter() {
        let target = if (j, k) == (1, 0) {
            T::one()
        } else {
            T::zero()
        };
        record(v - target, j + k);
    }
    for (j, k, v) in c.y.iter() {
        let target = if (j, k) == (1, 1) {
            T::one()
        } else {
            T::zero()
        };
        if j == 0 && k >= 3 {
            continue;
        }
        record(v - target, j + k);
    }
    for (j, k, v) in c.z.iter() {
        if j + k < 2 {
            record(v, j + k);
        }
    }
    (worst, worst_order)
}

/// Largest deviation of `R · (f - t) ∘ φ` from the canonical map built from
/// `nf`'s own coefficients.
pub fn recomposition_residual<T: Scalar>(f: &SurfaceMap<T>, nf: &NormalForm<T>) -> Result<T> {
    let jet = f.jet().truncate(nf.order);
    let recomposed = jet
        .add_constant(-nf.translation)
        .compose(&nf.domain_change.0, &nf.domain_change.1)?
        .transform(&nf.rotation);
    let a: Vec<_> = nf.a_entries().collect();
    let b: Vec<_> = nf.b_entries().collect();
    let target = NormalForm::canonical_map(&a, &b, nf.order);
    Ok(recomposed.max_abs_diff(&target))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// `a20 = 0`.
    pub degenerate: bool,
    /// All `a_jk` with `j + k ≥ 3` and all `b_i` vanish through the order.
    pub quadratic: bool,
    /// All `b_i` vanish through the order. This is the finite-order proxy for
    /// the self-intersection set lying on the principal ∩ normal plane line,
    /// which for real analytic germs is equivalent to all `b_i` vanishing.
    pub normal: bool,
}

pub fn classify<T: Scalar>(nf: &NormalForm<T>) -> Classification {
    classify_with_tol(nf, T::default_tol())
}

pub fn classify_with_tol<T: Scalar>(nf: &NormalForm<T>, tol: T) -> Classification {
    let normal = nf.b_entries().all(|(_, b)| b.abs() < tol);
    let higher_a = nf.a_entries().all(|(j, k, a)| j + k < 3 || a.abs() < tol);
    Classification {
        degenerate: nf.a(2, 0).abs() < tol,
        quadratic: normal && higher_a,
        normal,
    }
}

/// Tangential line, principal plane and normal plane at the singular point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCapFrame<T> {
    pub origin: Vec3<T>,
    /// Unit vector along `f_u(0,0)`; also the normal of the normal plane.
    pub tangential_direction: Vec3<T>,
    /// Unit normal of the principal plane `span(f_u, f_vv)`.
    pub principal_normal: Vec3<T>,
}

impl<T: Scalar> CrossCapFrame<T> {
    /// Direction of the line where the principal and normal planes meet.
    pub fn axis(&self) -> Vec3<T> {
        self.tangential_direction.cross(self.principal_normal)
    }

    /// Signed distance of `p` from the principal plane.
    pub fn principal_plane_offset(&self, p: Vec3<T>) -> T {
        (p - self.origin).dot(self.principal_normal)
    }

    /// Signed distance of `p` from the normal plane.
    pub fn normal_plane_offset(&self, p: Vec3<T>) -> T {
        (p - self.origin).dot(self.tangential_direction)
    }
}

pub fn frame<T: Scalar>(f: &SurfaceMap<T>) -> Result<CrossCapFrame<T>> {
    require_crosscap(f, T::default_tol())?;
    let jet = f.jet();
    let fu = jet.partial(1, 0);
    let fvv = jet.partial(0, 2);
    Ok(CrossCapFrame {
        origin: jet.value(),
        tangential_direction: fu.normalize(),
        principal_normal: fu.cross(fvv).normalize(),
    })
}
