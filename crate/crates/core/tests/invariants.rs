use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use vilenkin_core::approx::lemma1_construct;
use vilenkin_core::operators::{maximal, partial_sum};
use vilenkin_core::system::{character_at, dirichlet_kernel};
use vilenkin_core::transform::{convolve, forward, inverse, naive_forward};
use vilenkin_core::{LevelFunction, OperatorFamily, PointSet, RadixSequence};

fn radix_strategy() -> impl Strategy<Value = Arc<RadixSequence>> {
    prop::collection::vec(2usize..=5, 1..=4).prop_map(|r| Arc::new(RadixSequence::new(r).unwrap()))
}

fn with_function() -> impl Strategy<Value = LevelFunction> {
    radix_strategy().prop_flat_map(|r| {
        let m = r.order();
        prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), m).prop_map(move |v| {
            LevelFunction::new(r.clone(), v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
    })
}

fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn digits_roundtrip(r in radix_strategy(), seed in any::<u64>()) {
        let n = (seed as usize) % r.order();
        let digits = r.index_digits(n).unwrap();
        prop_assert!(digits.iter().zip(r.radices()).all(|(d, m)| d < m));
        prop_assert_eq!(r.digits_index(&digits).unwrap(), n);
    }

    #[test]
    fn group_law(r in radix_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let m = r.order();
        let (x, y) = (a as usize % m, b as usize % m);
        prop_assert_eq!(r.add_index(x, y), r.add_index(y, x));
        prop_assert_eq!(r.add_index(x, r.neg_index(x)), 0);
        prop_assert_eq!(r.add_index(r.sub_index(x, y), y), x);
    }

    #[test]
    fn characters_are_homomorphisms(r in radix_strategy(), a in any::<u64>(), b in any::<u64>(), n in any::<u64>()) {
        let m = r.order();
        let (x, y, n) = (a as usize % m, b as usize % m, n as usize % m);
        let lhs = character_at(&r, n, r.add_index(x, y));
        let rhs = character_at(&r, n, x) * character_at(&r, n, y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn fast_matches_naive_and_roundtrips(f in with_function()) {
        let fast = forward(&f);
        prop_assert!(close(fast.coeffs(), naive_forward(&f).coeffs(), 1e-11));
        prop_assert!(close(inverse(&fast).values(), f.values(), 1e-11));
        let energy = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / f.values().len() as f64;
        prop_assert!((energy - fast.energy()).abs() <= 1e-10 * energy.max(1.0));
    }

    #[test]
    fn partial_sums_are_dirichlet_convolutions(f in with_function(), j in any::<u64>()) {
        let m = f.values().len();
        let j = 1 + j as usize % m;
        let d = dirichlet_kernel(f.radix(), j).unwrap();
        let via_kernel = convolve(&f, &d).unwrap();
        prop_assert!(close(partial_sum(&f, j).unwrap().values(), via_kernel.values(), 1e-10));
    }

    #[test]
    fn maximal_operator_dominates_each_partial_sum(f in with_function()) {
        let r = f.radix().clone();
        let family = OperatorFamily::all_partial_sums(r.clone());
        let max = maximal(&f, &family).unwrap();
        for j in 1..=r.order() {
            let s = partial_sum(&f, j).unwrap();
            for (a, b) in s.values().iter().zip(max.values()) {
                prop_assert!(a.norm() <= b.re + 1e-10);
            }
        }
        prop_assert!(close(partial_sum(&f, r.order()).unwrap().values(), f.values(), 1e-10));
    }

    #[test]
    fn approximation_bound_holds(
        f in with_function(),
        picks in prop::collection::vec(any::<u64>(), 1..4),
        eps in 0.01f64..1.0,
    ) {
        let r = f.radix().clone();
        let moduli = LevelFunction::from_real(r.clone(), f.moduli()).unwrap();
        prop_assume!(moduli.max_abs() > 0.0);
        let kernels: Vec<LevelFunction> = picks
            .iter()
            .map(|&p| dirichlet_kernel(&r, 1 + p as usize % r.order()).unwrap())
            .collect();
        let outcome = lemma1_construct(&moduli, &kernels, None, eps).unwrap();
        let report = &outcome.report;
        prop_assert!(report.pass);
        prop_assert!(report.measured_integral <= eps / 2.0 + report.slack + 1e-9);
        let atom = r.haar().atom_mass();
        for (res, a) in report.residuals.iter().zip(&report.levels[1..]) {
            prop_assert!(*res >= 0.0 && *res < a * atom);
        }
        let h = &outcome.decomposition.h;
        prop_assert!(h.values().iter().all(|v| v.im == 0.0 && v.re >= 0.0));
    }
}

#[test]
fn paley_identity_on_mixed_group() {
    let r = Arc::new(RadixSequence::new(vec![3, 2, 5]).unwrap());
    for k in 0..=r.levels() {
        let b = r.block(k);
        let d = dirichlet_kernel(&r, b).unwrap();
        let sub = PointSet::new(r.order(), (0..r.order()).step_by(b).collect()).unwrap();
        let expected = LevelFunction::indicator(r.clone(), &sub).scale(Complex64::new(b as f64, 0.0));
        assert!(close(d.values(), expected.values(), 1e-10));
    }
}
