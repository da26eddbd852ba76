//! Quadrature, ODE stepping and small fitting helpers.

use crate::vec3::Vec3;
use crate::Scalar;

const MAX_SIMPSON_DEPTH: u32 = 40;

/// Adaptive Simpson quadrature of a vector-valued integrand on `[a, b]`
/// to absolute tolerance `tol` (max-norm).
pub fn adaptive_simpson<T, F>(f: &F, a: T, b: T, tol: T) -> Vec3<T>
where
    T: Scalar,
    F: Fn(T) -> Vec3<T>,
{
    if a == b {
        return Vec3::zero();
    }
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) * T::lit(0.5);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, MAX_SIMPSON_DEPTH)
}

fn simpson<T: Scalar>(a: T, b: T, fa: Vec3<T>, fm: Vec3<T>, fb: Vec3<T>) -> Vec3<T> {
    (fa + fm * T::lit(4.0) + fb) * ((b - a) / T::lit(6.0))
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<T, F>(
    f: &F,
    a: T,
    b: T,
    fa: Vec3<T>,
    fm: Vec3<T>,
    fb: Vec3<T>,
    whole: Vec3<T>,
    tol: T,
    depth: u32,
) -> Vec3<T>
where
    T: Scalar,
    F: Fn(T) -> Vec3<T>,
{
    let half = T::lit(0.5);
    let m = (a + b) * half;
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.max_abs() <= T::lit(15.0) * tol {
        return left + right + delta * (T::one() / T::lit(15.0));
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol * half, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, tol * half, depth - 1)
}

/// One classical Runge–Kutta step for `y' = rhs(t, y)` on a fixed-size state.
pub fn rk4_step<T, const N: usize, F>(rhs: &F, t: T, y: &[Vec3<T>; N], h: T) -> [Vec3<T>; N]
where
    T: Scalar,
    F: Fn(T, &[Vec3<T>; N]) -> [Vec3<T>; N],
{
    let half = T::lit(0.5);
    let axpy = |y: &[Vec3<T>; N], k: &[Vec3<T>; N], s: T| -> [Vec3<T>; N] {
        std::array::from_fn(|i| y[i] + k[i] * s)
    };
    let k1 = rhs(t, y);
    let k2 = rhs(t + h * half, &axpy(y, &k1, h * half));
    let k3 = rhs(t + h * half, &axpy(y, &k2, h * half));
    let k4 = rhs(t + h, &axpy(y, &k3, h));
    let sixth = h / T::lit(6.0);
    std::array::from_fn(|i| y[i] + (k1[i] + (k2[i] + k3[i]) * T::lit(2.0) + k4[i]) * sixth)
}

/// Least-squares line `y ≈ intercept + slope · x`.
pub fn fit_line<T: Scalar>(xs: &[T], ys: &[T]) -> Option<(T, T)> {
    let n = T::from_usize_lossy(xs.len());
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    Some((my - slope * mx, slope))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_vector_function() {
        let f = |t: f64| Vec3::new(t.cos(), t * t, (2.0 * t).exp());
        let got = adaptive_simpson(&f, 0.0, 1.3, 1e-12);
        let want = Vec3::new(
            1.3f64.sin(),
            1.3f64.powi(3) / 3.0,
            ((2.6f64).exp() - 1.0) / 2.0,
        );
        assert!((got - want).max_abs() < 1e-10);
        let back = adaptive_simpson(&f, 1.3, 0.0, 1e-12);
        assert!((back + want).max_abs() < 1e-10);
    }

    #[test]
    fn rk4_rotation_stays_on_circle() {
        let rhs = |_t: f64, y: &[Vec3<f64>; 1]| [Vec3::new(-y[0].y, y[0].x, 0.0)];
        let mut y = [Vec3::new(1.0, 0.0, 0.0)];
        let h = 1e-3;
        for i in 0..1000 {
            y = rk4_step(&rhs, i as f64 * h, &y, h);
        }
        assert!((y[0] - Vec3::new(1f64.cos(), 1f64.sin(), 0.0)).max_abs() < 1e-12);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let (b, m) = fit_line(&xs, &ys).unwrap();
        assert!((b + 1.0).abs() < 1e-14 && (m - 2.0).abs() < 1e-14);
        assert!(fit_line(&[1.0], &[1.0]).is_none());
    }
}
