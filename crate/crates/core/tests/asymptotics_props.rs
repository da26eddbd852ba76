mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use common::{rng, scramble, CanonicalGerm};
use crosscap::asymptotics::{
    a_theta, a_theta_lower_bound, default_radii, leading, umbilic_gap, verify_convergence,
};
use crosscap::invariants::IntrinsicTriple;
use crosscap::surface::{curvatures_at, SurfaceMap};
use proptest::prelude::*;

fn thetas() -> impl Iterator<Item = f64> {
    (0..16).map(|i| 2.0 * PI * i as f64 / 16.0 + 0.05)
}

#[test]
fn curvature_converges_on_generated_crosscaps() {
    let mut r = rng(61);
    let radii = default_radii::<f64>();
    for i in 0..6 {
        let germ = CanonicalGerm::random(&mut r, 4);
        let f = if i % 2 == 0 {
            germ.map()
        } else {
            scramble(&germ.jet(), &mut r)
        };
        for theta in thetas() {
            let rep = verify_convergence(&f, theta, &radii).unwrap();
            assert!(rep.passed, "germ {i}, θ = {theta}: {:?} {:?}", rep.h, rep.k);
            assert!(rep.h.constant.is_finite() && rep.k.constant.is_finite());
        }
    }
}

#[test]
fn standard_crosscap_limits() {
    let f = SurfaceMap::<f64>::standard_crosscap(6);
    let radii = default_radii::<f64>();
    let rep = verify_convergence(&f, FRAC_PI_2, &radii).unwrap();
    assert!(rep.passed);
    assert!((rep.k.extrapolated + 0.25).abs() < 1e-5);
    for (&r, &k) in rep.radii.iter().zip(&rep.k.values) {
        // closed form r² K = -1 / (4 (1 + r²)²) along u = 0
        assert!((k + 0.25 / (1.0 + r * r).powi(2)).abs() < 1e-10);
    }
    let rep = verify_convergence(&f, 0.0, &radii).unwrap();
    assert!(rep.passed && rep.k.exact);
    assert!((rep.h.extrapolated - 1.0).abs() < 1e-5);
    let gap = umbilic_gap(&f, FRAC_PI_2, &radii).unwrap();
    assert_eq!(gap.k_negative, Some(true));
}

#[test]
fn umbilic_gap_is_positive_off_the_axis() {
    let mut r = rng(62);
    let radii = default_radii::<f64>();
    for _ in 0..10 {
        let f = scramble(&CanonicalGerm::random(&mut r, 4).jet(), &mut r);
        let rep = umbilic_gap(&f, FRAC_PI_4, &radii).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.gap.leading > 0.0 && rep.gap.extrapolated > 0.0);
    }
}

#[test]
fn elliptic_example_has_curvature_of_both_signs() {
    let t = IntrinsicTriple {
        a02: 1.0,
        a20: 1.0,
        a11: 0.0,
        delta_sq: 1.0,
    };
    assert!(leading(&t, 0.0).k_lead > 0.0);
    assert!(leading(&t, FRAC_PI_2).k_lead < 0.0);
    let f = SurfaceMap::<f64>::quadratic_crosscap(1.0, 0.0, 1.0, 4);
    let ks: Vec<f64> = (0..64)
        .map(|i| {
            let th = 2.0 * PI * (i as f64 + 0.5) / 64.0;
            curvatures_at(&f, 1e-3 * th.cos(), 1e-3 * th.sin())
                .unwrap()
                .gaussian
        })
        .collect();
    assert!(ks.iter().any(|&k| k > 0.0) && ks.iter().any(|&k| k < 0.0));
    // the sampled sign follows the leading term wherever it is not small
    for (i, &k) in ks.iter().enumerate() {
        let th = 2.0 * PI * (i as f64 + 0.5) / 64.0;
        let lead = leading(&t, th).k_lead;
        if lead.abs() > 0.05 {
            assert_eq!(k > 0.0, lead > 0.0);
        }
    }
}

proptest! {
    #[test]
    fn a_theta_bounds(a02 in 0.05..5.0f64, a11 in -5.0..5.0f64, theta in -PI..PI) {
        let a = a_theta(a02, a11, theta);
        prop_assert!(a > 0.0);
        prop_assert!(a >= a_theta_lower_bound(a02, a11) * (1.0 - 1e-12));
        if a11.abs() <= 1.0 {
            prop_assert!(a >= a02.min(1.0) / 2.0);
        }
    }

    #[test]
    fn leading_terms_are_periodic(a02 in 0.1..3.0f64, a20 in -2.0..2.0f64, a11 in -2.0..2.0f64, theta in -PI..PI) {
        let t = IntrinsicTriple { a02, a20, a11, delta_sq: 1.0 };
        let (l, m) = (leading(&t, theta), leading(&t, theta + 2.0 * PI));
        prop_assert!((l.h_lead - m.h_lead).abs() < 1e-9 * l.h_lead.abs().max(1.0));
        prop_assert!((l.k_lead - m.k_lead).abs() < 1e-9 * l.k_lead.abs().max(1.0));
        if a20 < 0.0 {
            prop_assert!(l.k_lead <= 0.0);
        }
        prop_assert!(l.gap_lead >= 0.0);
    }
}

#[test]
fn sharp_bound_is_attained() {
    for &(a02, a11) in &[(1.0, 0.0), (2.0, 3.0), (0.3, -1.5)] {
        let min = (0..100_000)
            .map(|i| a_theta(a02, a11, PI * i as f64 / 100_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!((min - a_theta_lower_bound(a02, a11)).abs() < 1e-6);
    }
}

#[test]
fn radii_are_validated() {
    let f = SurfaceMap::<f64>::standard_crosscap(6);
    assert!(verify_convergence(&f, 0.3, &[1e-1, 1e-2, 1e-3]).is_err());
    assert!(verify_convergence(&f, 0.3, &[1e-1, 1e-2, 1e-3, 1e-7]).is_err());
    assert!(verify_convergence(&f, 0.3, &[1e-1, 1e-3, 1e-2, 1e-4]).is_err());
}
