use crosscap::jet::Jet2;
use proptest::prelude::*;

const ORDER: usize = 4;
const LEN: usize = (ORDER + 1) * (ORDER + 2) / 2;

fn jet_from(c: &[f64]) -> Jet2<f64> {
    let mut it = c.iter().copied();
    Jet2::from_fn(ORDER, |_, _| it.next().unwrap())
}

fn jet() -> impl Strategy<Value = Jet2<f64>> {
    prop::collection::vec(-1.0..1.0f64, LEN).prop_map(|c| jet_from(&c))
}

/// Jet without constant term, usable as an inner function of a composition.
fn inner() -> impl Strategy<Value = Jet2<f64>> {
    jet().prop_map(|mut j| {
        j.set_coeff(0, 0, 0.0);
        j
    })
}

/// Jet with constant term in `[0.5, 2]`.
fn positive() -> impl Strategy<Value = Jet2<f64>> {
    (jet(), 0.5..2.0f64).prop_map(|(mut j, c)| {
        j.set_coeff(0, 0, c);
        j
    })
}

fn scale(js: &[&Jet2<f64>]) -> f64 {
    js.iter().map(|j| j.max_abs()).fold(1.0, f64::max)
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in jet(), b in jet(), c in jet()) {
        let l = (&a * &b) * &c;
        let r = &a * (&b * &c);
        prop_assert!(l.max_abs_diff(&r) <= 1e-14 * scale(&[&a, &b, &c]).powi(3) * 50.0);
    }

    #[test]
    fn multiplication_distributes(a in jet(), b in jet(), c in jet()) {
        let l = &a * (&b + &c);
        let r = &a * &b + &a * &c;
        prop_assert!(l.max_abs_diff(&r) <= 1e-14 * 50.0);
    }

    #[test]
    fn product_matches_convolution(a in jet(), b in jet()) {
        let p = &a * &b;
        for d in 0..=ORDER {
            for k in 0..=d {
                let j = d - k;
                let mut want = 0.0;
                let mut mag = 0.0;
                for x in 0..=j {
                    for y in 0..=k {
                        let t = a.coeff(x, y) * b.coeff(j - x, k - y);
                        want += t;
                        mag += t.abs();
                    }
                }
                prop_assert!((p.coeff(j, k) - want).abs() <= 1e-14 * mag.max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn composition_is_associative(f in jet(), g1 in inner(), h1 in inner(), g2 in inner(), h2 in inner()) {
        let l = f.compose(&g1, &h1).unwrap().compose(&g2, &h2).unwrap();
        let g = g1.compose(&g2, &h2).unwrap();
        let h = h1.compose(&g2, &h2).unwrap();
        let r = f.compose(&g, &h).unwrap();
        prop_assert!(l.max_abs_diff(&r) <= 1e-12 * l.max_abs().max(1.0));
    }

    #[test]
    fn sqrt_squares_back(a in positive()) {
        let s = a.sqrt().unwrap();
        prop_assert!((&s * &s).max_abs_diff(&a) <= 1e-12 * a.max_abs().max(1.0));
    }

    #[test]
    fn recip_inverts(a in positive()) {
        let r = a.recip().unwrap();
        let one = Jet2::constant(1.0, ORDER);
        prop_assert!((&a * &r).max_abs_diff(&one) <= 1e-12 * r.max_abs().max(1.0));
    }

    #[test]
    fn derivative_of_integral_is_identity(a in jet()) {
        prop_assert!(a.integrate_v().deriv_v().max_abs_diff(&a) <= 1e-15);
    }
}

#[test]
fn generic_over_f32() {
    let u = Jet2::<f32>::var_u(3);
    let one = Jet2::<f32>::constant(1.0, 3);
    let s = (&one + &u).sqrt().unwrap();
    assert!((s.coeff(1, 0) - 0.5).abs() < 1e-6);
    assert!((s.coeff(2, 0) + 0.125).abs() < 1e-6);
}
