mod common;

use morphtip::linkage::{
    forward_facet, inverse_facet, inverse_facet_bisect, planar_condition_angle, planar_residual,
    solve_planar_pair, solve_planar_side, solve_planar_side_bisect,
};
use morphtip::{Error, FacetAngle, LinkageParams, ServoAngle, Vec2};
use proptest::prelude::*;
use rand::Rng;

fn long_crank() -> LinkageParams {
    let (r, a0) = (15f64.to_radians(), 30f64.to_radians());
    LinkageParams::from_parts(15.0, 20.0, Vec2::new(10.0, -20.0 * a0.cos()), a0, (-r, r)).unwrap()
}

fn geometries() -> [LinkageParams; 2] {
    [LinkageParams::default(), long_crank()]
}

/// Facet angle straight from the vector chain, no library help.
fn phi_by_hand(p: &LinkageParams, theta: f64) -> f64 {
    let a = p.alpha0() - theta;
    let b = p.oa() + p.l_ab() * Vec2::new(a.sin(), a.cos());
    (b.y).atan2(b.x - p.l_oc())
}

#[test]
fn forward_matches_vector_chain() {
    let mut r = common::rng(1);
    for p in geometries() {
        let (lo, hi) = p.range();
        for _ in 0..500 {
            let t = r.random_range(lo..=hi);
            let phi = forward_facet(&p, ServoAngle(t)).unwrap().0;
            assert!((phi - phi_by_hand(&p, t)).abs() < 1e-14);
        }
    }
}

#[test]
fn roundtrip_thousand_random_angles() {
    let mut r = common::rng(2);
    for p in geometries() {
        let (lo, hi) = p.range();
        let worst = (0..1000)
            .map(|_| {
                let t = r.random_range(lo..=hi);
                let phi = forward_facet(&p, ServoAngle(t)).unwrap();
                (inverse_facet(&p, phi).unwrap().0 - t).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "worst roundtrip error {worst}");
    }
}

#[test]
fn facet_angle_strictly_monotone_dense() {
    for p in geometries() {
        let (lo, hi) = p.range();
        let n = 10_000;
        let phis: Vec<f64> = (0..=n)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / n as f64;
                forward_facet(&p, ServoAngle(t)).unwrap().0
            })
            .collect();
        assert!(phis.windows(2).all(|w| w[1] > w[0]));
    }
}

#[test]
fn sign_convention() {
    for p in geometries() {
        let (lo, hi) = p.range();
        for t in [lo, 0.5 * lo, 1e-6, 0.5 * hi, hi] {
            let phi = forward_facet(&p, ServoAngle(t)).unwrap().0;
            assert_eq!(phi.signum(), t.signum(), "theta {t}");
        }
        assert_eq!(forward_facet(&p, ServoAngle(0.0)).unwrap().0, 0.0);
    }
}

#[test]
fn closed_form_agrees_with_bisection() {
    let mut r = common::rng(3);
    for p in geometries() {
        let (lo, hi) = p.attainable_facet();
        for _ in 0..1000 {
            let phi = FacetAngle(r.random_range(lo.0..=hi.0));
            let a = inverse_facet(&p, phi).unwrap().0;
            let b = inverse_facet_bisect(&p, phi).unwrap().0;
            assert!((a - b).abs() <= 1e-9, "phi {phi:?}: {a} vs {b}");
        }
        let tmax = p.attainable_planar_tilt();
        for _ in 0..300 {
            let tilt = r.random_range(-tmax..=tmax);
            let a = solve_planar_side(&p, tilt).unwrap().0;
            let b = solve_planar_side_bisect(&p, tilt).unwrap().0;
            assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn attainable_range_matches_brute_scan() {
    for p in geometries() {
        let (lo, hi) = p.range();
        let n = 100_000;
        let (mut pmin, mut pmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut qmin, mut qmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=n {
            let t = ServoAngle(lo + (hi - lo) * i as f64 / n as f64);
            let phi = forward_facet(&p, t).unwrap().0;
            let q = planar_condition_angle(&p, t).unwrap().angle;
            pmin = pmin.min(phi);
            pmax = pmax.max(phi);
            qmin = qmin.min(q);
            qmax = qmax.max(q);
        }
        let (a, b) = p.attainable_facet();
        assert!((a.0 - pmin).abs() < 1e-12 && (b.0 - pmax).abs() < 1e-12);
        assert!((p.attainable_planar_tilt() - qmax.min(-qmin)).abs() < 1e-12);

        let beyond = FacetAngle(pmax + 1e-6);
        match inverse_facet(&p, beyond) {
            Err(Error::Unreachable {
                min_deg, max_deg, ..
            }) => {
                assert!((min_deg - pmin.to_degrees()).abs() < 1e-9);
                assert!((max_deg - pmax.to_degrees()).abs() < 1e-9);
            }
            other => panic!("expected unreachable, got {other:?}"),
        }
        assert!(inverse_facet(&p, FacetAngle(pmin - 1e-6)).is_err());
        assert!(solve_planar_pair(&p, p.attainable_planar_tilt() + 1e-6).is_err());
    }
}

#[test]
fn out_of_range_servo_rejected() {
    let p = LinkageParams::default();
    let (lo, hi) = p.range();
    assert!(matches!(
        p.check_in_range(ServoAngle(hi + 1e-6)),
        Err(Error::OutOfRange { .. })
    ));
    assert!(p.check_in_range(ServoAngle(lo - 1e-6)).is_err());
    assert!(p.check_in_range(ServoAngle(hi)).is_ok());
    // the bare mechanism still moves past the range, until the crank flips
    assert!(forward_facet(&p, ServoAngle(hi + 1e-6)).is_ok());
    assert!(matches!(
        forward_facet(&p, ServoAngle(31f64.to_radians())),
        Err(Error::OutOfRange { .. })
    ));
    assert!(forward_facet(&p, ServoAngle(f64::NAN)).is_err());
    // and jams once the slider reaches the hinge
    assert!(matches!(
        forward_facet(&long_crank(), ServoAngle(17f64.to_radians())),
        Err(Error::OutOfRange { .. })
    ));
}

#[test]
fn planar_pairs_collinear_with_opposite_signs() {
    let mut r = common::rng(4);
    for p in geometries() {
        let tmax = p.attainable_planar_tilt();
        for _ in 0..100 {
            let tilt = r.random_range(-tmax..=tmax);
            let (pos, neg) = solve_planar_pair(&p, tilt).unwrap();
            assert!(planar_residual(&p, pos, neg).unwrap() < 1e-9);
            assert!(pos.0 * neg.0 < 0.0 || tilt == 0.0);
            let got = planar_condition_angle(&p, pos).unwrap().angle;
            assert!((got - tilt).abs() < 1e-12);
        }
    }
}

#[test]
fn invalid_geometry_rejected() {
    let a0 = 30f64.to_radians();
    let oa = Vec2::new(11.0, -20.0 * a0.cos());
    let r = 18f64.to_radians();
    assert!(LinkageParams::from_parts(10.0, 20.0, oa, a0, (-r, r)).is_ok());
    assert!(LinkageParams::from_parts(-1.0, 20.0, oa, a0, (-r, r)).is_err());
    assert!(LinkageParams::from_parts(10.0, 20.0, oa + Vec2::new(0.0, 0.1), a0, (-r, r)).is_err());
    assert!(LinkageParams::from_parts(10.0, 20.0, oa, a0, (r, -r)).is_err());
    assert!(LinkageParams::from_parts(10.0, 20.0, oa, a0, (-0.7, 0.7)).is_err());
}

proptest! {
    #[test]
    fn roundtrip_any_jam_free_geometry(
        l_oc in 6.0..12.0f64,
        l_ab in 15.0..25.0f64,
        gap in 0.5..3.0f64,
        alpha0_deg in 20.0..40.0f64,
        frac in -1.0..1.0f64,
    ) {
        let a0 = alpha0_deg.to_radians();
        let half = 10f64.to_radians();
        let oa = Vec2::new(l_oc + gap, -l_ab * a0.cos());
        let Ok(p) = LinkageParams::from_parts(l_oc, l_ab, oa, a0, (-half, half)) else {
            return Ok(());
        };
        let t = ServoAngle(frac * half);
        let phi = forward_facet(&p, t).unwrap();
        prop_assert!((inverse_facet(&p, phi).unwrap().0 - t.0).abs() < 1e-9);
        prop_assert!((phi.0 - phi_by_hand(&p, t.0)).abs() < 1e-13);
    }
}
