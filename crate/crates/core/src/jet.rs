//! Truncated bivariate power series ("jets") at the origin.
//!
//! A [`Jet2`] of order `N` stores the raw monomial coefficients `c[j][k]` of
//! `Σ c_jk u^j v^k` for `j + k ≤ N`. Binary operations truncate at the smaller
//! order of their operands. [`Jet3`] bundles three jets into a map `ℝ² → ℝ³`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::factorial;
use crate::vec3::{Mat3, Vec3};
use crate::Scalar;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 6;

#[inline]
fn tri_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

#[inline]
fn idx(j: usize, k: usize) -> usize {
    let d = j + k;
    d * (d + 1) / 2 + k
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<T> {
    order: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> Jet2<T> {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![T::zero(); tri_len(order)],
        }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut j = Self::zeros(order);
        j.coeffs[0] = c;
        j
    }

    /// `c · u^j v^k`, or the zero jet when `j + k` exceeds the order.
    pub fn monomial(j: usize, k: usize, c: T, order: usize) -> Self {
        let mut out = Self::zeros(order);
        if j + k <= order {
            out.coeffs[idx(j, k)] = c;
        }
        out
    }

    pub fn var_u(order: usize) -> Self {
        Self::monomial(1, 0, T::one(), order)
    }

    pub fn var_v(order: usize) -> Self {
        Self::monomial(0, 1, T::one(), order)
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = Self::zeros(order);
        for d in 0..=order {
            for k in 0..=d {
                out.coeffs[idx(d - k, k)] = f(d - k, k);
            }
        }
        out
    }

    /// Univariate series `Σ c_i v^i`, truncated at `order`.
    pub fn from_v_coeffs(coeffs: &[T], order: usize) -> Self {
        let mut out = Self::zeros(order);
        for (i, &c) in coeffs.iter().enumerate().take(order + 1) {
            out.coeffs[idx(0, i)] = c;
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, j: usize, k: usize) -> T {
        assert!(
            j + k <= self.order,
            "coefficient ({j},{k}) beyond jet order {}",
            self.order
        );
        self.coeffs[idx(j, k)]
    }

    /// Coefficient, or zero beyond the truncation order.
    pub fn coeff_or_zero(&self, j: usize, k: usize) -> T {
        if j + k <= self.order {
            self.coeffs[idx(j, k)]
        } else {
            T::zero()
        }
    }

    pub fn set_coeff(&mut self, j: usize, k: usize, c: T) {
        assert!(j + k <= self.order);
        self.coeffs[idx(j, k)] = c;
    }

    pub fn add_to_coeff(&mut self, j: usize, k: usize, c: T) {
        assert!(j + k <= self.order);
        self.coeffs[idx(j, k)] += c;
    }

    /// Partial derivative `∂^{j+k} / ∂u^j ∂v^k` at the origin.
    pub fn partial(&self, j: usize, k: usize) -> T {
        self.coeff(j, k) * factorial::<T>(j) * factorial::<T>(k)
    }

    pub fn constant_term(&self) -> T {
        self.coeffs[0]
    }

    /// `(j, k, c_jk)` in graded order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..=self.order)
            .flat_map(move |d| (0..=d).map(move |k| (d - k, k, self.coeffs[idx(d - k, k)])))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            order,
            coeffs: self.coeffs[..tri_len(order)].to_vec(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let order = self.order.min(other.order);
        let n = tri_len(order);
        Self {
            order,
            coeffs: self.coeffs[..n]
                .iter()
                .zip(&other.coeffs[..n])
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul_jet(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zeros(order);
        for d1 in 0..=order {
            for k1 in 0..=d1 {
                let a = self.coeffs[idx(d1 - k1, k1)];
                if a == T::zero() {
                    continue;
                }
                for d2 in 0..=(order - d1) {
                    for k2 in 0..=d2 {
                        let b = other.coeffs[idx(d2 - k2, k2)];
                        out.coeffs[idx(d1 - k1 + d2 - k2, k1 + k2)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Multiplication by `u^j v^k`; the order grows by `j + k`.
    pub fn mul_monomial(&self, j: usize, k: usize) -> Self {
        let mut out = Self::zeros(self.order + j + k);
        for (a, b, c) in self.iter() {
            out.coeffs[idx(a + j, b + k)] = c;
        }
        out
    }

    pub fn deriv_u(&self) -> Self {
        let order = self.order.saturating_sub(1);
        if self.order == 0 {
            return Self::zeros(0);
        }
        Self::from_fn(order, |j, k| {
            self.coeff(j + 1, k) * T::from_usize_lossy(j + 1)
        })
    }

    pub fn deriv_v(&self) -> Self {
        let order = self.order.saturating_sub(1);
        if self.order == 0 {
            return Self::zeros(0);
        }
        Self::from_fn(order, |j, k| {
            self.coeff(j, k + 1) * T::from_usize_lossy(k + 1)
        })
    }

    /// `∫_0^v self(u, t) dt`; the order grows by one.
    pub fn integrate_v(&self) -> Self {
        Self::from_fn(self.order + 1, |j, k| {
            if k == 0 {
                T::zero()
            } else {
                self.coeff(j, k - 1) / T::from_usize_lossy(k)
            }
        })
    }

    fn pow_table(&self, n: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(Self::constant(T::one(), self.order));
        for p in 1..=n {
            let next = out[p - 1].mul_jet(self);
            out.push(next);
        }
        out
    }

    /// Taylor series of `self(g(u,v), h(u,v))`, truncated at the smallest order
    /// involved. The inner jets must vanish at the origin.
    pub fn compose(&self, g: &Self, h: &Self) -> Result<Self> {
        let (g0, h0) = (g.constant_term(), h.constant_term());
        if g0 != T::zero() || h0 != T::zero() {
            return Err(Error::NonZeroConstant(
                g0.to_f64().unwrap_or(f64::NAN),
                h0.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let order = self.order.min(g.order).min(h.order);
        let g = g.truncate(order);
        let h = h.truncate(order);
        let gp = g.pow_table(order);
        let hp = h.pow_table(order);
        let mut out = Self::zeros(order);
        for (j, gj) in gp.iter().enumerate().take(order + 1) {
            // Σ_k c_jk h^k, then times g^j
            let mut inner = Self::zeros(order);
            let mut any = false;
            for (k, hk) in hp.iter().enumerate().take(order - j + 1) {
                let c = self.coeff(j, k);
                if c != T::zero() {
                    inner = &inner + &hk.scale(c);
                    any = true;
                }
            }
            if any {
                out = &out + &inner.mul_jet(gj);
            }
        }
        Ok(out)
    }

    /// `φ(self)` for an analytic `φ` given by its Taylor coefficients
    /// `taylor[n] = φ⁽ⁿ⁾(a₀)/n!` at the constant term `a₀`.
    pub fn map_analytic(&self, taylor: &[T]) -> Self {
        let mut y = self.clone();
        y.coeffs[0] = T::zero();
        let mut out = Self::zeros(self.order);
        let mut power = Self::constant(T::one(), self.order);
        for (n, &t) in taylor.iter().enumerate().take(self.order + 1) {
            if n > 0 {
                power = power.mul_jet(&y);
            }
            out = &out + &power.scale(t);
        }
        out
    }

    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if !(a0 > T::zero()) {
            return Err(Error::SingularJet(a0.to_f64().unwrap_or(f64::NAN)));
        }
        // √(a0 + y) = √a0 Σ binom(1/2, n) (y/a0)^n
        let half = T::lit(0.5);
        let mut taylor = Vec::with_capacity(self.order + 1);
        let mut binom = T::one();
        let mut scale = a0.sqrt();
        for n in 0..=self.order {
            taylor.push(binom * scale);
            let nn = T::from_usize_lossy(n);
            binom = binom * (half - nn) / (nn + T::one());
            scale /= a0;
        }
        Ok(self.map_analytic(&taylor))
    }

    pub fn recip(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if !(a0 > T::zero()) {
            return Err(Error::SingularJet(a0.to_f64().unwrap_or(f64::NAN)));
        }
        let mut taylor = Vec::with_capacity(self.order + 1);
        let mut t = a0.recip();
        for _ in 0..=self.order {
            taylor.push(t);
            t = -t / a0;
        }
        Ok(self.map_analytic(&taylor))
    }

    pub fn eval(&self, u: T, v: T) -> T {
        self.iter().fold(T::zero(), |acc, (j, k, c)| {
            acc + c * u.powi(j as i32) * v.powi(k as i32)
        })
    }

    /// Value and partial derivatives up to second order of the truncated
    /// polynomial at `(u, v)`: `[f, f_u, f_v, f_uu, f_uv, f_vv]`.
    pub fn eval_partials(&self, u: T, v: T) -> [T; 6] {
        let pw = |x: T, n: usize, d: usize| -> T {
            // d-th derivative of x^n
            if d > n {
                return T::zero();
            }
            let mut c = T::one();
            for i in 0..d {
                c *= T::from_usize_lossy(n - i);
            }
            c * x.powi((n - d) as i32)
        };
        let mut out = [T::zero(); 6];
        let derivs = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        for (j, k, c) in self.iter() {
            if c == T::zero() {
                continue;
            }
            for (slot, &(du, dv)) in derivs.iter().enumerate() {
                out[slot] += c * pw(u, j, du) * pw(v, k, dv);
            }
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    /// Largest coefficient discrepancy over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self - other).max_abs()
    }

    /// Coefficients of total degree `d` as `(j, k, c)`.
    pub fn homogeneous(&self, d: usize) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..=d).map(move |k| (d - k, k, self.coeff(d - k, k)))
    }
}

macro_rules! jet_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<T: Scalar> $trait<&Jet2<T>> for &Jet2<T> {
            type Output = Jet2<T>;
            fn $method(self, rhs: &Jet2<T>) -> Jet2<T> {
                $body(self, rhs)
            }
        }
        impl<T: Scalar> $trait<Jet2<T>> for Jet2<T> {
            type Output = Jet2<T>;
            fn $method(self, rhs: Jet2<T>) -> Jet2<T> {
                $body(&self, &rhs)
            }
        }
        impl<T: Scalar> $trait<&Jet2<T>> for Jet2<T> {
            type Output = Jet2<T>;
            fn $method(self, rhs: &Jet2<T>) -> Jet2<T> {
                $body(&self, rhs)
            }
        }
        impl<T: Scalar> $trait<Jet2<T>> for &Jet2<T> {
            type Output = Jet2<T>;
            fn $method(self, rhs: Jet2<T>) -> Jet2<T> {
                $body(self, &rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a: &Jet2<T>, b: &Jet2<T>| a
    .zip_with(b, |x, y| x + y));
jet_binop!(Sub, sub, |a: &Jet2<T>, b: &Jet2<T>| a
    .zip_with(b, |x, y| x - y));
jet_binop!(Mul, mul, |a: &Jet2<T>, b: &Jet2<T>| a.mul_jet(b));

impl<T: Scalar> Neg for &Jet2<T> {
    type Output = Jet2<T>;
    fn neg(self) -> Jet2<T> {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Neg for Jet2<T> {
    type Output = Jet2<T>;
    fn neg(self) -> Jet2<T> {
        self.scale(-T::one())
    }
}

/// First and second partial derivatives of a map `ℝ² → ℝ³` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials<T> {
    pub fu: Vec3<T>,
    pub fv: Vec3<T>,
    pub fuu: Vec3<T>,
    pub fuv: Vec3<T>,
    pub fvv: Vec3<T>,
}

/// A map `ℝ² → ℝ³` given as three jets of a common order.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet3<T> {
    pub x: Jet2<T>,
    pub y: Jet2<T>,
    pub z: Jet2<T>,
}

impl<T: Scalar> Jet3<T> {
    /// Components are truncated to their common order.
    pub fn new(x: Jet2<T>, y: Jet2<T>, z: Jet2<T>) -> Self {
        let order = x.order().min(y.order()).min(z.order());
        Self {
            x: x.truncate(order),
            y: y.truncate(order),
            z: z.truncate(order),
        }
    }

    pub fn zeros(order: usize) -> Self {
        Self::new(Jet2::zeros(order), Jet2::zeros(order), Jet2::zeros(order))
    }

    pub fn constant(c: Vec3<T>, order: usize) -> Self {
        Self::new(
            Jet2::constant(c.x, order),
            Jet2::constant(c.y, order),
            Jet2::constant(c.z, order),
        )
    }

    /// Vector-valued monomial `c · u^j v^k`.
    pub fn monomial(j: usize, k: usize, c: Vec3<T>, order: usize) -> Self {
        Self::new(
            Jet2::monomial(j, k, c.x, order),
            Jet2::monomial(j, k, c.y, order),
            Jet2::monomial(j, k, c.z, order),
        )
    }

    /// Univariate vector series `Σ c_i v^i`.
    pub fn from_v_coeffs(coeffs: &[Vec3<T>], order: usize) -> Self {
        let comp = |f: fn(&Vec3<T>) -> T| coeffs.iter().map(f).collect::<Vec<_>>();
        Self::new(
            Jet2::from_v_coeffs(&comp(|c| c.x), order),
            Jet2::from_v_coeffs(&comp(|c| c.y), order),
            Jet2::from_v_coeffs(&comp(|c| c.z), order),
        )
    }

    pub fn order(&self) -> usize {
        self.x.order()
    }

    pub fn components(&self) -> [&Jet2<T>; 3] {
        [&self.x, &self.y, &self.z]
    }

    fn map(&self, f: impl Fn(&Jet2<T>) -> Jet2<T>) -> Self {
        Self::new(f(&self.x), f(&self.y), f(&self.z))
    }

    fn try_map(&self, f: impl Fn(&Jet2<T>) -> Result<Jet2<T>>) -> Result<Self> {
        Ok(Self::new(f(&self.x)?, f(&self.y)?, f(&self.z)?))
    }

    pub fn coeff(&self, j: usize, k: usize) -> Vec3<T> {
        Vec3::new(self.x.coeff(j, k), self.y.coeff(j, k), self.z.coeff(j, k))
    }

    pub fn coeff_or_zero(&self, j: usize, k: usize) -> Vec3<T> {
        Vec3::new(
            self.x.coeff_or_zero(j, k),
            self.y.coeff_or_zero(j, k),
            self.z.coeff_or_zero(j, k),
        )
    }

    pub fn partial(&self, j: usize, k: usize) -> Vec3<T> {
        Vec3::new(
            self.x.partial(j, k),
            self.y.partial(j, k),
            self.z.partial(j, k),
        )
    }

    pub fn value(&self) -> Vec3<T> {
        self.coeff(0, 0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|c| c.truncate(order))
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|c| c.scale(s))
    }

    /// Scalar jet times vector jet.
    pub fn scale_by(&self, s: &Jet2<T>) -> Self {
        self.map(|c| c * s)
    }

    pub fn add_constant(&self, c: Vec3<T>) -> Self {
        Self::new(
            self.x.add_scalar(c.x),
            self.y.add_scalar(c.y),
            self.z.add_scalar(c.z),
        )
    }

    pub fn dot(&self, o: &Self) -> Jet2<T> {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            &self.y * &o.z - &self.z * &o.y,
            &self.z * &o.x - &self.x * &o.z,
            &self.x * &o.y - &self.y * &o.x,
        )
    }

    pub fn deriv_u(&self) -> Self {
        self.map(Jet2::deriv_u)
    }

    pub fn deriv_v(&self) -> Self {
        self.map(Jet2::deriv_v)
    }

    pub fn integrate_v(&self) -> Self {
        self.map(Jet2::integrate_v)
    }

    pub fn mul_monomial(&self, j: usize, k: usize) -> Self {
        self.map(|c| c.mul_monomial(j, k))
    }

    pub fn compose(&self, g: &Jet2<T>, h: &Jet2<T>) -> Result<Self> {
        self.try_map(|c| c.compose(g, h))
    }

    /// `R · self` for a 3×3 matrix `R`.
    pub fn transform(&self, r: &Mat3<T>) -> Self {
        let row = |i: usize| {
            let w = r.rows[i];
            &(&self.x.scale(w.x) + &self.y.scale(w.y)) + &self.z.scale(w.z)
        };
        Self::new(row(0), row(1), row(2))
    }

    pub fn eval(&self, u: T, v: T) -> Vec3<T> {
        Vec3::new(self.x.eval(u, v), self.y.eval(u, v), self.z.eval(u, v))
    }

    /// Partials of the truncated polynomial map at `(u, v)`.
    pub fn eval_partials(&self, u: T, v: T) -> (Vec3<T>, Partials<T>) {
        let [px, py, pz] = [
            self.x.eval_partials(u, v),
            self.y.eval_partials(u, v),
            self.z.eval_partials(u, v),
        ];
        let at = |i: usize| Vec3::new(px[i], py[i], pz[i]);
        (
            at(0),
            Partials {
                fu: at(1),
                fv: at(2),
                fuu: at(3),
                fuv: at(4),
                fvv: at(5),
            },
        )
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        self.x
            .max_abs_diff(&o.x)
            .max(self.y.max_abs_diff(&o.y))
            .max(self.z.max_abs_diff(&o.z))
    }

    pub fn max_abs(&self) -> T {
        self.x.max_abs().max(self.y.max_abs()).max(self.z.max_abs())
    }
}

impl<T: Scalar> Add<&Jet3<T>> for &Jet3<T> {
    type Output = Jet3<T>;
    fn add(self, o: &Jet3<T>) -> Jet3<T> {
        Jet3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }
}

impl<T: Scalar> Sub<&Jet3<T>> for &Jet3<T> {
    type Output = Jet3<T>;
    fn sub(self, o: &Jet3<T>) -> Jet3<T> {
        Jet3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }
}
