#![allow(dead_code)]

use crosscap::jet::{Jet2, Jet3};
use crosscap::normalform::NormalForm;
use crosscap::surface::SurfaceMap;
use crosscap::vec3::{Mat3, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut impl Rng, scale: f64) -> Vec3<f64> {
    Vec3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn random_rotation(rng: &mut impl Rng) -> Mat3<f64> {
    loop {
        let axis = random_vec(rng, 1.0);
        if axis.norm() > 0.1 {
            return Mat3::rotation(axis, rng.gen_range(-3.0..3.0));
        }
    }
}

/// Coefficient tables of a random canonical germ: `a02 ∈ [0.5, 2.5]`, all
/// other entries in `[-1, 1]`.
pub struct CanonicalGerm {
    pub a: Vec<(usize, usize, f64)>,
    pub b: Vec<(usize, f64)>,
    pub order: usize,
}

impl CanonicalGerm {
    pub fn random(rng: &mut impl Rng, order: usize) -> Self {
        let mut a = Vec::new();
        for d in 2..=order {
            for k in 0..=d {
                let v = if (d - k, k) == (0, 2) {
                    rng.gen_range(0.5..2.5)
                } else {
                    rng.gen_range(-1.0..1.0)
                };
                a.push((d - k, k, v));
            }
        }
        let b = (3..=order).map(|i| (i, rng.gen_range(-1.0..1.0))).collect();
        Self { a, b, order }
    }

    pub fn quadratic(a20: f64, a11: f64, a02: f64, order: usize) -> Self {
        Self {
            a: vec![(2, 0, a20), (1, 1, a11), (0, 2, a02)],
            b: Vec::new(),
            order,
        }
    }

    pub fn a(&self, j: usize, k: usize) -> f64 {
        self.a
            .iter()
            .find(|&&(x, y, _)| (x, y) == (j, k))
            .map_or(0.0, |&(_, _, v)| v)
    }

    pub fn b(&self, i: usize) -> f64 {
        self.b
            .iter()
            .find(|&&(x, _)| x == i)
            .map_or(0.0, |&(_, v)| v)
    }

    pub fn jet(&self) -> Jet3<f64> {
        NormalForm::canonical_map(&self.a, &self.b, self.order)
    }

    pub fn map(&self) -> SurfaceMap<f64> {
        SurfaceMap::from_jet(self.jet())
    }

    /// Largest difference to a reduced normal form through `order`.
    pub fn max_diff(&self, nf: &NormalForm<f64>, order: usize) -> f64 {
        let mut m: f64 = 0.0;
        for d in 2..=order {
            for k in 0..=d {
                m = m.max((nf.a(d - k, k) - self.a(d - k, k)).abs());
            }
            if d >= 3 {
                m = m.max((nf.b(d) - self.b(d)).abs());
            }
        }
        m
    }
}

/// Random orientation preserving diffeomorphism germ fixing the origin with
/// `∂u/∂v(0) = 0`, so admissible coordinates stay admissible.
pub fn random_admissible(rng: &mut impl Rng, order: usize) -> (Jet2<f64>, Jet2<f64>) {
    let mut g = Jet2::zeros(order);
    let mut h = Jet2::zeros(order);
    let p1: f64 = rng.gen_range(0.5..1.5);
    let s: f64 = rng.gen_range(0.5..1.5);
    g.set_coeff(1, 0, p1);
    h.set_coeff(1, 0, rng.gen_range(-0.5..0.5));
    h.set_coeff(0, 1, s);
    for d in 2..=order {
        let scale = 0.5 / d as f64;
        for k in 0..=d {
            g.set_coeff(d - k, k, rng.gen_range(-scale..scale));
            h.set_coeff(d - k, k, rng.gen_range(-scale..scale));
        }
    }
    (g, h)
}

/// `R · (f ∘ φ) + t` for a random rotation, admissible `φ` and translation.
pub fn scramble(f: &Jet3<f64>, rng: &mut impl Rng) -> SurfaceMap<f64> {
    let (g, h) = random_admissible(rng, f.order());
    let r = random_rotation(rng);
    let t = random_vec(rng, 2.0);
    SurfaceMap::from_jet(f.compose(&g, &h).unwrap()).moved(&r, t)
}

/// Random dense jet with coefficients in `[-1, 1]`.
pub fn random_jet(rng: &mut impl Rng, order: usize) -> Jet2<f64> {
    Jet2::from_fn(order, |_, _| rng.gen_range(-1.0..1.0))
}

/// Central finite-difference partials `(f_u, f_v)` of a surface's evaluator.
pub fn fd_partials(f: &SurfaceMap<f64>, u: f64, v: f64, h: f64) -> (Vec3<f64>, Vec3<f64>) {
    let fu = (f.point(u + h, v) - f.point(u - h, v)) * (0.5 / h);
    let fv = (f.point(u, v + h) - f.point(u, v - h)) * (0.5 / h);
    (fu, fv)
}
