use proptest::prelude::*;
use qscode::covering::*;
use qscode::state::*;

fn build_default(d: usize, eps: f64, seed: u64) -> Covering {
    let x = default_x(d);
    let sch = covering_schedule(d, eps, x).unwrap();
    build_internal_covering(d, eps, x, default_fail_streak(sch.j_r), &mut SeededSampler::new(seed, 0)).unwrap()
}

proptest! {
    #[test]
    fn radii_sum_to_epsilon(d in 2usize..10, eps in 1e-3f64..=1.0, x in 1.0f64..1e3) {
        let s = covering_schedule(d, eps, x).unwrap();
        prop_assert_eq!(s.epsilon_r + s.epsilon_p, eps);
        prop_assert!(s.epsilon_r >= s.epsilon_p);
        prop_assert!(((s.epsilon_r / s.epsilon_p) - x).abs() <= 1e-9 * x);
    }
}

#[test]
fn schedule_examples() {
    let s = covering_schedule(2, 0.5, 2.0).unwrap();
    assert!((s.epsilon_r - 1.0 / 3.0).abs() < 1e-15 && (s.epsilon_p - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(s.j_r, 13);
    assert_eq!(covering_schedule(2, 1.0, 1.0).unwrap().j_r, 0);
    assert!((default_x(3) - 4.0 * 4f64.ln()).abs() < 1e-15);
    assert_eq!(default_x(2), 2.0 * 2f64.ln());
    assert!(covering_schedule(2, 0.5, 0.9).is_err());
    assert!(covering_schedule(1, 0.5, 2.0).is_err());
    assert!(covering_schedule(2, 1.5, 2.0).is_err());
}

#[test]
fn packing_is_valid() {
    for (d, eps, seed) in [(2, 0.5, 1), (2, 0.7, 2), (2, 1.0, 3), (3, 0.8, 4), (3, 1.0, 5)] {
        let c = build_default(d, eps, seed);
        let m = *c.meta().unwrap();
        let (random, packed) = c.elements().split_at(m.j_r);
        for (i, a) in packed.iter().enumerate() {
            for phi in random {
                assert!(trace_distance_pure(a, phi).unwrap() >= m.epsilon_r + m.epsilon_p - 1e-10);
            }
            for b in &packed[i + 1..] {
                assert!(trace_distance_pure(a, b).unwrap() >= 2.0 * m.epsilon_p - 1e-10);
            }
        }
    }
}

#[test]
fn size_stays_under_upper_bound() {
    for eps in [0.5, 0.7, 1.0] {
        let upper = internal_covering_bounds(2, eps).unwrap().upper;
        for seed in 0..10 {
            let c = build_default(2, eps, seed);
            assert!(c.len() as f64 <= upper, "eps={eps} seed={seed}: {} > {upper}", c.len());
        }
    }
}

#[test]
fn coverage_grows_with_radius() {
    let c = build_default(2, 0.5, 11);
    let mut prev = 0.0;
    for eps in [0.1, 0.2, 0.3, 0.4, 0.45, 0.5, 0.6, 1.0] {
        let r = coverage_verify(&c, eps, 20_000, &mut SeededSampler::new(12, 0));
        assert!(r.covered_fraction >= prev, "eps={eps}");
        prev = r.covered_fraction;
    }
    let gaps: Vec<f64> = {
        let mut s = SeededSampler::new(13, 0);
        (0..5000).map(|_| c.nearest(&haar_sample(2, &mut s).unwrap()).unwrap().1).collect()
    };
    let fracs: Vec<f64> = [0.2, 0.3, 0.4].iter().map(|&e| CoverageReport::from_gaps(&gaps, e).covered_fraction).collect();
    assert!(fracs.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn half_radius_is_not_covered() {
    let c = build_default(2, 0.5, 21);
    let r = coverage_verify(&c, c.radius() / 2.0, 100_000, &mut SeededSampler::new(22, 0));
    assert!(r.covered_fraction < 1.0);
    // Too few balls: the count falls short of the volume lower bound.
    assert!((c.len() as f64) < internal_covering_bounds(2, c.radius() / 2.0).unwrap().lower);
}

#[test]
fn radius_one_covers_everything() {
    let c = build_default(2, 1.0, 31);
    assert!(!c.is_empty());
    let r = coverage_verify(&c, 1.0, 10_000, &mut SeededSampler::new(32, 0));
    assert!(r.covered_fraction >= 0.999);
    let single = Covering::new(2, 1.0, vec![PureState::basis(2, 0).unwrap()]).unwrap();
    let r = coverage_verify(&single, 1.0, 10_000, &mut SeededSampler::new(33, 0));
    assert_eq!(r.covered_fraction, 1.0);
}

#[test]
fn empty_book_report() {
    let empty = Covering::new(2, 0.5, vec![]).unwrap();
    let r = coverage_verify(&empty, 0.5, 100, &mut SeededSampler::new(0, 0));
    assert_eq!((r.covered_fraction, r.worst_gap), (0.0, 1.0));
}

#[test]
fn construction_is_deterministic() {
    assert_eq!(build_default(3, 0.9, 41), build_default(3, 0.9, 41));
    assert_ne!(build_default(3, 0.9, 41), build_default(3, 0.9, 42));
}

#[test]
fn json_roundtrip_and_validation() {
    let c = build_default(2, 0.5, 51);
    let text = serde_json::to_string(&c).unwrap();
    let back: Covering = serde_json::from_str(&text).unwrap();
    assert_eq!(back.len(), c.len());
    assert_eq!(back.meta(), c.meta());
    for (a, b) in c.elements().iter().zip(back.elements()) {
        assert!(trace_distance_pure(a, b).unwrap() < 1e-15);
    }
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["elements"][1]["label"], 1);

    let mut swapped = v.clone();
    swapped["elements"][0]["label"] = serde_json::json!(1);
    swapped["elements"][1]["label"] = serde_json::json!(0);
    assert!(serde_json::from_value::<Covering>(swapped).is_err());

    let mut wrong_radius = v.clone();
    wrong_radius["radius"] = serde_json::json!(0.4);
    assert!(serde_json::from_value::<Covering>(wrong_radius).is_err());

    let mut unnormalized = v;
    unnormalized["elements"][0]["re"][0] = serde_json::json!(3.0);
    assert!(serde_json::from_value::<Covering>(unnormalized).is_err());
}

#[test]
fn bound_examples() {
    let b = internal_covering_bounds(2, 0.5).unwrap();
    assert_eq!(b.lower, 4.0);
    assert!((b.upper - 40.0 * 2f64.ln()).abs() < 1e-12);
    assert_eq!(internal_covering_bounds(4, 0.5).unwrap().lower, 64.0);
    assert_eq!(internal_covering_bounds(7, 1.0).unwrap().lower, 1.0);
    assert!(internal_covering_bounds(1, 0.5).is_err());
    assert_eq!(external_covering_lower_bound(2, 0.25).unwrap(), 4.0);
    assert_eq!(external_covering_lower_bound(4, 0.5).unwrap(), 64.0);
    assert_eq!(external_covering_lower_bound(1, 0.3).unwrap(), 1.0);
    assert!(external_covering_lower_bound(2, 0.6).is_err());
}
