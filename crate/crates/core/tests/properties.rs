use angulab::operators::{spectral, std_dev, Observable};
use angulab::oracle::{OracleEvaluator, Resolution};
use angulab::relations::{boundary_bound, csf, gram_det, rsur, BoundaryExponent};
use angulab::sampling::{indexed_rng, random_oscillator, random_periodic, random_sphere};
use angulab::states::OscillatorParams;
use angulab::State;
use proptest::prelude::*;

fn periodic(seed: u64, hbar: f64) -> State {
    State::Periodic(random_periodic(&mut indexed_rng(seed, 0), 4, hbar).unwrap())
}

fn any_state(seed: u64, kind: u8, hbar: f64) -> State {
    let mut rng = indexed_rng(seed, kind as u64);
    match kind {
        0 => State::Periodic(random_periodic(&mut rng, 4, hbar).unwrap()),
        1 => State::Oscillator(random_oscillator(&mut rng, 4, OscillatorParams::new(1.5, 0.8, hbar).unwrap()).unwrap()),
        _ => State::Sphere(random_sphere(&mut rng, 2, hbar).unwrap()),
    }
}

const PAIRS: [(Observable, Observable); 3] = [
    (Observable::Lz, Observable::Phi),
    (Observable::Lz, Observable::SinPhi),
    (Observable::Phi, Observable::CosPhi),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_states_are_normalized(seed in any::<u64>(), kind in 0u8..3, hbar in 0.1f64..5.0) {
        let s = any_state(seed, kind, hbar);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csf_never_fails(seed in any::<u64>(), kind in 0u8..3, hbar in 0.1f64..5.0) {
        let ev = spectral(&any_state(seed, kind, hbar)).unwrap();
        for (a, b) in &PAIRS {
            let r = csf(&ev, a, b).unwrap();
            prop_assert!(r.satisfied, "{a:?},{b:?}: slack {}", r.slack);
        }
    }

    #[test]
    fn entitled_rsur_holds(seed in any::<u64>(), kind in 0u8..3, hbar in 0.1f64..5.0) {
        let ev = spectral(&any_state(seed, kind, hbar)).unwrap();
        for (a, b) in &PAIRS {
            let r = rsur(&ev, a, b).unwrap();
            if r.details.get("entitled").is_some_and(|d| serde_json::to_value(d).unwrap() == true) {
                prop_assert!(r.satisfied, "{a:?},{b:?}: slack {}", r.slack);
            }
        }
    }

    #[test]
    fn boundary_bound_holds_on_the_circle(seed in any::<u64>(), hbar in 0.1f64..5.0) {
        let ev = spectral(&periodic(seed, hbar)).unwrap();
        let b = boundary_bound(&ev, BoundaryExponent::Squared).unwrap();
        prop_assert!(b.overlap.satisfied && b.product.satisfied);
    }

    #[test]
    fn gram_determinant_is_nonnegative(seed in any::<u64>(), kind in 0u8..3) {
        let ev = spectral(&any_state(seed, kind, 1.0)).unwrap();
        let obs = [Observable::Lz, Observable::Phi, Observable::CosPhi];
        let r = gram_det(&ev, &obs).unwrap();
        prop_assert!(r.satisfied, "det {}", r.lhs);
    }

    #[test]
    fn hbar_rescales_lz_spread(seed in any::<u64>(), hbar in 0.1f64..5.0) {
        let base = spectral(&periodic(seed, 1.0)).unwrap();
        let scaled = spectral(&periodic(seed, hbar)).unwrap();
        let (d1, dh) = (std_dev(&base, &Observable::Lz).unwrap(), std_dev(&scaled, &Observable::Lz).unwrap());
        let (v1, vh) = (d1 * d1, dh * dh);
        prop_assert!((vh - hbar * hbar * v1).abs() <= 1e-10 * (1.0 + vh), "{vh} vs {}", hbar * hbar * v1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn oracle_matches_spectral_spreads(seed in any::<u64>(), kind in 0u8..3) {
        let state = any_state(seed, kind, 1.0);
        let ev = spectral(&state).unwrap();
        let or = OracleEvaluator::new(&state, &Resolution::default()).unwrap();
        for a in [Observable::Lz, Observable::Phi, Observable::SinPhi] {
            let (s, o) = (std_dev(&ev, &a).unwrap(), std_dev(&or, &a).unwrap());
            prop_assert!((s - o).abs() < 1e-6 * (1.0 + s), "{a:?}: {s} vs {o}");
        }
    }
}

#[test]
fn state_documents_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for kind in 0..3 {
        let state = any_state(7, kind, 1.3);
        let path = dir.path().join(format!("state{kind}.json"));
        std::fs::write(&path, state.to_json().unwrap()).unwrap();
        let back = State::load(&path).unwrap();
        assert_eq!(back.support().len(), state.support().len());
        for ((m1, c1), (m2, c2)) in back.support().iter().zip(state.support()) {
            assert_eq!(*m1, m2);
            assert!((c1 - c2).norm() < 1e-12);
        }
    }
}
