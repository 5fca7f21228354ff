mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn filtration_telescopes(m in random_matrix(), levels in 1usize..6) {
        telescoping(&m, levels)?;
    }

    #[test]
    fn parry_measure_is_additive(index in 0usize..24, walk in proptest::collection::vec(0usize..64, 1..7)) {
        measure_additivity(index, &walk)?;
    }

    #[test]
    fn crossed_spectrum_is_symmetric(
        base in proptest::collection::vec((-50.0f64..50.0, 1u64..4), 1..6),
        cutoff in 0u64..30,
    ) {
        spectrum_symmetry(base, cutoff)?;
    }

    #[test]
    fn k_groups_ignore_relabelling(m in random_matrix(), seed in any::<u64>()) {
        k_theory_permutation_invariance(&m, seed)?;
    }

    #[test]
    fn plans_round_trip(args in plan_args()) {
        plan_round_trip(args)?;
    }

    #[test]
    fn presentations_round_trip(q in 1usize..4, cover in any::<bool>()) {
        presentation_round_trip(q, cover)?;
    }

    #[test]
    fn product_tables_decompose(
        a in proptest::collection::vec(1u64..100, 1..7),
        b in proptest::collection::vec(1u64..100, 1..7),
    ) {
        product_inclusion_exclusion(a, b)?;
    }

    #[test]
    fn tau_roots_are_simple(weights in tau_weights()) {
        tau_root(weights)?;
    }
}
