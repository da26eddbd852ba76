mod common;

use std::f64::consts::PI;

use common::{rng, scramble, CanonicalGerm};
use crosscap::deformation::{base_first_form, circle_family, DeformationFamily, SphericalCurve};
use crosscap::invariants::{
    classify_sign, focal_conic, intrinsic_from_first_form, intrinsic_from_map,
    intrinsic_from_map_metric, intrinsic_from_metric, isometry_combos, ConicKind, IntrinsicTriple,
    SignClass,
};
use crosscap::jet::Jet2;
use crosscap::normalform::reduce;
use crosscap::ruled::{frame_coefficients, normalize, redeploy_along};
use crosscap::surface::{curvatures_at, SurfaceMap};
use crosscap::Error;
use rand::Rng;

fn assert_routes_agree(f: &SurfaceMap<f64>, tol: f64) -> IntrinsicTriple<f64> {
    let map = intrinsic_from_map(f).unwrap();
    let metric = intrinsic_from_map_metric(f).unwrap();
    let scale = map.a02.abs().max(map.a20.abs()).max(map.a11.abs()).max(1.0);
    assert!(
        map.max_abs_diff(&metric.triple) < tol * scale,
        "{map:?} vs {:?}",
        metric.triple
    );
    assert!((map.delta_sq - metric.triple.delta_sq).abs() < tol * map.delta_sq.max(1.0));
    assert!((metric.delta_sq_hessian - metric.triple.delta_sq).abs() < tol * map.delta_sq.max(1.0));
    map
}

#[test]
fn routes_agree_on_scrambled_germs() {
    let mut r = rng(31);
    for _ in 0..25 {
        let germ = CanonicalGerm::random(&mut r, 4);
        let t = assert_routes_agree(&germ.map(), 1e-9);
        assert!((t.a02 - germ.a(0, 2)).abs() < 1e-12);
        assert!((t.a20 - germ.a(2, 0)).abs() < 1e-12);
        assert!((t.a11 - germ.a(1, 1)).abs() < 1e-12);
        let s = assert_routes_agree(&scramble(&germ.jet(), &mut r), 1e-9);
        assert!(s.max_abs_diff(&t) < 1e-9 * t.a02.max(1.0));
    }
}

#[test]
fn routes_agree_on_family_members() {
    let mut r = rng(32);
    for kappa in [0.0, 0.5, 1.0, 3.0] {
        let (a02, a11): (f64, f64) = (r.gen_range(0.5..2.5), r.gen_range(-1.0..1.0));
        let fam = DeformationFamily::new(a02, a11, circle_family(kappa)).unwrap();
        let t = assert_routes_agree(&fam.build_crosscap(6).unwrap(), 1e-9);
        assert!((t.a02 - a02).abs() < 1e-9);
        assert!(t.a20.abs() < 1e-9);
        assert!((t.a11 - a11).abs() < 1e-9);
    }
}

#[test]
fn base_metric_alone_gives_triple() {
    let mut r = rng(33);
    for _ in 0..10 {
        let (a02, a11): (f64, f64) = (r.gen_range(0.5..2.5), r.gen_range(-1.0..1.0));
        let ff = base_first_form(a02, a11, 5);
        let m = intrinsic_from_first_form(&ff).unwrap();
        assert!((m.triple.a02 - a02).abs() < 1e-12);
        assert!(m.triple.a20.abs() < 1e-12);
        assert!((m.triple.a11 - a11).abs() < 1e-12);
        assert!((m.delta_sq_hessian - a02 * a02).abs() < 1e-12);
    }
}

#[test]
fn metric_route_rejects_non_crosscap_metrics() {
    let one = Jet2::constant(1.0, 4);
    let zero = Jet2::zeros(4);
    assert!(matches!(
        intrinsic_from_metric(&one, &zero, &one),
        Err(Error::InvalidMetric(_))
    ));
    // E = 1, F = 0, G = -v²: h_vv < 0
    let g = Jet2::monomial(0, 2, -1.0, 4);
    assert!(matches!(
        intrinsic_from_metric(&one, &zero, &g),
        Err(Error::InvalidMetric(_))
    ));
    assert!(intrinsic_from_metric(&zero, &zero, &one).is_err());
}

fn random_curve(r: &mut impl Rng) -> SphericalCurve<f64> {
    let poly = (0..4)
        .map(|i| r.gen_range(-1.0..1.0) / (i + 1) as f64)
        .collect();
    SphericalCurve::with_kappa(poly)
}

#[test]
fn triples_and_combos_are_isometry_invariant() {
    let mut r = rng(34);
    for _ in 0..5 {
        let (a02, a11): (f64, f64) = (r.gen_range(0.5..2.5), r.gen_range(-1.0..1.0));
        let base = reduce(
            &DeformationFamily::new(a02, a11, circle_family(0.0))
                .unwrap()
                .build_crosscap(6)
                .unwrap(),
            6,
        )
        .unwrap();
        let base_combo = isometry_combos(&base).unwrap();
        for _ in 0..3 {
            let fam = DeformationFamily::new(a02, a11, random_curve(&mut r)).unwrap();
            let f = fam.build_crosscap(6).unwrap();
            let nf = reduce(&f, 6).unwrap();
            let t = intrinsic_from_map(&f).unwrap();
            assert!((t.a02 - a02).abs() < 1e-7 && t.a20.abs() < 1e-7 && (t.a11 - a11).abs() < 1e-7);
            assert!(isometry_combos(&nf).unwrap().max_abs_diff(&base_combo) < 1e-7);
        }
    }
}

#[test]
fn ruled_redeployments_share_combos() {
    let mut r = rng(35);
    for _ in 0..5 {
        let (a02, a11): (f64, f64) = (r.gen_range(0.5..2.5), r.gen_range(-1.0..1.0));
        let fam = DeformationFamily::new(a02, a11, random_curve(&mut r)).unwrap();
        let rs = normalize(&fam.ruled(7).unwrap()).unwrap();
        let fc = frame_coefficients(&rs).unwrap();
        let one = redeploy_along(&fc, &random_curve(&mut r))
            .unwrap()
            .to_surface();
        let two = redeploy_along(&fc, &random_curve(&mut r))
            .unwrap()
            .to_surface();
        let (n1, n2) = (reduce(&one, 5).unwrap(), reduce(&two, 5).unwrap());
        let (t1, t2) = (
            intrinsic_from_map(&one).unwrap(),
            intrinsic_from_map(&two).unwrap(),
        );
        assert!(t1.max_abs_diff(&t2) < 1e-7);
        let (c1, c2) = (isometry_combos(&n1).unwrap(), isometry_combos(&n2).unwrap());
        assert!(c1.max_abs_diff(&c2) < 1e-7, "{c1:?} vs {c2:?}");
    }
}

#[test]
fn extrinsic_invariants_vary_across_the_circle_family() {
    for (a02, a11) in [(2.0, 0.0), (1.0, 1.0)] {
        let mut b3 = Vec::new();
        let mut triples = Vec::new();
        for kappa in [0.0, 1.0, 3.0] {
            let f = DeformationFamily::new(a02, a11, circle_family(kappa))
                .unwrap()
                .build_crosscap(6)
                .unwrap();
            let nf = reduce(&f, 6).unwrap();
            let want = -2.0 * a02 * kappa * (1.0f64 + a11 * a11).sqrt();
            assert!((nf.b(3) - want).abs() < 1e-7);
            b3.push(nf.b(3));
            triples.push(intrinsic_from_map(&f).unwrap());
            let combo = isometry_combos(&nf).unwrap();
            assert!(combo.c1.abs() < 1e-8 && combo.c2.abs() < 1e-8);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                assert!((b3[i] - b3[j]).abs() > 0.1);
                assert!(triples[i].max_abs_diff(&triples[j]) < 1e-8);
            }
        }
    }
}

#[test]
fn hessian_identity_holds_on_scrambled_inputs() {
    let mut r = rng(36);
    for _ in 0..20 {
        let f = scramble(&CanonicalGerm::random(&mut r, 4).jet(), &mut r);
        let m = intrinsic_from_map_metric(&f).unwrap();
        let d = intrinsic_from_map(&f).unwrap().delta_sq;
        assert!((m.delta_sq_hessian - d).abs() < 1e-9 * d.max(1.0));
        assert!(m.h_vv >= 0.0);
    }
}

fn annulus_signs(f: &SurfaceMap<f64>) -> (bool, bool) {
    let (mut neg, mut pos) = (false, false);
    for i in 0..128 {
        let t = 2.0 * PI * (i as f64 + 0.5) / 128.0;
        let k = curvatures_at(f, 1e-2 * t.cos(), 1e-2 * t.sin())
            .unwrap()
            .gaussian;
        neg |= k < 0.0;
        pos |= k > 0.0;
    }
    (neg, pos)
}

#[test]
fn gaussian_curvature_sign_near_the_singularity() {
    let mut r = rng(37);
    for _ in 0..10 {
        let mut germ = CanonicalGerm::random(&mut r, 4);
        for e in germ.a.iter_mut().filter(|e| (e.0, e.1) == (2, 0)) {
            e.2 = -r.gen_range(0.5..1.5);
        }
        let f = germ.map();
        assert_eq!(
            classify_sign(&intrinsic_from_map(&f).unwrap()),
            SignClass::Hyperbolic
        );
        assert_eq!(annulus_signs(&f), (true, false));

        for e in germ.a.iter_mut().filter(|e| (e.0, e.1) == (2, 0)) {
            e.2 = -e.2;
        }
        let f = germ.map();
        assert_eq!(
            classify_sign(&intrinsic_from_map(&f).unwrap()),
            SignClass::Elliptic
        );
        assert_eq!(annulus_signs(&f), (true, true));
    }
}

#[test]
fn focal_conic_matches_the_displayed_quadratic() {
    let mut r = rng(38);
    for _ in 0..50 {
        let t = IntrinsicTriple {
            a02: r.gen_range(0.5..2.5f64),
            a20: r.gen_range(-2.0..2.0),
            a11: r.gen_range(-2.0..2.0),
            delta_sq: 1.0,
        };
        let c = focal_conic(&t);
        let (y, z): (f64, f64) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let want =
            y * y + 2.0 * t.a11 * y * z - (t.a20 * t.a02 - t.a11 * t.a11) * z * z + t.a02 * z;
        assert!((c.eval(y, z) - want).abs() < 1e-12);
        let kind = if t.a20 > 0.0 {
            ConicKind::Hyperbola
        } else {
            ConicKind::Ellipse
        };
        assert_eq!(c.kind, kind);
    }
    let std = intrinsic_from_map(&SurfaceMap::<f64>::standard_crosscap(4)).unwrap();
    let c = focal_conic(&std);
    assert_eq!(c.kind, ConicKind::Parabolic);
    assert_eq!((c.yy, c.yz, c.zz, c.z), (1.0, 0.0, 0.0, 2.0));
    assert_eq!(classify_sign(&std), SignClass::Degenerate);
}

#[test]
fn standard_crosscap_combos_vanish() {
    let nf = reduce(&SurfaceMap::<f64>::standard_crosscap(5), 5).unwrap();
    assert_eq!(isometry_combos(&nf).unwrap().to_array(), [0.0; 4]);
    let low = reduce(&SurfaceMap::<f64>::standard_crosscap(2), 2).unwrap();
    assert!(isometry_combos(&low).is_err());
}
