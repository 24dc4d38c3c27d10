mod common;

use common::rel;
use limfourier::measure::{FiniteSequence, StepFunction};
use limfourier::ons::{forward, inverse, make_system, DiscreteONS, SystemKind};
use limfourier::Complex64;
use proptest::prelude::*;

fn system() -> impl Strategy<Value = DiscreteONS> {
    let kinds = prop_oneof![
        Just(SystemKind::Dft),
        Just(SystemKind::Hadamard),
        Just(SystemKind::IdentityLike),
        any::<u64>().prop_map(SystemKind::RandomUnitary),
        (0.0f64..=1.0).prop_map(SystemKind::GivensInterpolated),
    ];
    (kinds, 0u32..6).prop_map(|(k, log_n)| make_system(k, 1 << log_n).unwrap())
}

fn values(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn system_and_values() -> impl Strategy<Value = (DiscreteONS, Vec<Complex64>, Vec<Complex64>)> {
    system().prop_flat_map(|s| {
        let n = s.n();
        (Just(s), values(n), values(n))
    })
}

fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn transforms_are_isometric((sys, v, _) in system_and_values()) {
        let f = StepFunction::uniform(v.clone()).unwrap();
        prop_assert!(rel(forward(&f, &sys).unwrap().l2_norm(), f.l2_norm()) < 1e-12);
        let c = FiniteSequence::new(v).unwrap();
        prop_assert!(rel(inverse(&c, &sys).unwrap().l2_norm(), c.l2_norm()) < 1e-12);
    }

    #[test]
    fn forward_is_linear((sys, v, w) in system_and_values(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let combo: Vec<Complex64> = v.iter().zip(&w).map(|(x, y)| x * a + y * b).collect();
        let lhs = forward(&StepFunction::uniform(combo).unwrap(), &sys).unwrap();
        let fv = forward(&StepFunction::uniform(v).unwrap(), &sys).unwrap();
        let fw = forward(&StepFunction::uniform(w).unwrap(), &sys).unwrap();
        let rhs: Vec<Complex64> = fv.entries().iter().zip(fw.entries()).map(|(x, y)| x * a + y * b).collect();
        let scale = 1.0 + rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(max_dev(lhs.entries(), &rhs) < 1e-12 * scale);
    }

    #[test]
    fn inverse_undoes_forward((sys, v, _) in system_and_values()) {
        let f = StepFunction::uniform(v.clone()).unwrap();
        let back = inverse(&forward(&f, &sys).unwrap(), &sys).unwrap();
        let scale = 1.0 + f.linf_norm();
        prop_assert!(max_dev(back.values(), &v) < 1e-12 * scale);
    }

    #[test]
    fn coefficients_obey_the_uniform_bound((sys, v, _) in system_and_values()) {
        let f = StepFunction::uniform(v.clone()).unwrap();
        let c = forward(&f, &sys).unwrap();
        prop_assert!(c.linf_norm() <= sys.bound_m() * f.l1_norm() * (1.0 + 1e-12));
        let c = FiniteSequence::new(v).unwrap();
        let g = inverse(&c, &sys).unwrap();
        prop_assert!(g.linf_norm() <= sys.bound_m() * c.l1_norm() * (1.0 + 1e-12));
    }
}

#[test]
fn givens_bound_grows_with_lambda() {
    for n in [4, 16, 64] {
        let bounds: Vec<f64> = (0..=40)
            .map(|i| {
                make_system(SystemKind::GivensInterpolated(i as f64 / 40.0), n)
                    .unwrap()
                    .bound_m()
            })
            .collect();
        assert!((bounds[0] - 1.0).abs() < 1e-12 && (bounds[40] - (n as f64).sqrt()).abs() < 1e-12);
        for w in bounds.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "{bounds:?}");
            assert!(w[1] - w[0] < 0.2 * (n as f64).sqrt(), "jump in {bounds:?}");
        }
    }
}
