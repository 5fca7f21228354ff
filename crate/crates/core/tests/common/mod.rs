//! Invariants checked on random small instances. Shared by the property
//! suites and the acceptance run.
#![allow(dead_code)]

use mumford_core::buildings::{
    family_presentation, four_fold_cover, inclusion_exclusion_check, solve_tau, tau_lhs, PolygonalPresentation,
};
use mumford_core::cli::{parse_invocation, RunPlan};
use mumford_core::graphs::{directed_edge_matrix, genus2_catalog, kato_graph};
use mumford_core::ktheory::ck_k_theory;
use mumford_core::matrix::BinaryMatrix;
use mumford_core::shift::SFTData;
use mumford_core::triples::{crossed_product_spectrum, CrossedProductTriple};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 256;

pub fn config() -> Config {
    Config { cases: CASES, failure_persistence: None, ..Config::default() }
}

/// Irreducible shifts of small rank: Schottky shifts, the genus-2 dual
/// graphs and a few Kato graphs.
pub fn shift(index: usize) -> SFTData {
    match index % 8 {
        i @ 0..=2 => SFTData::schottky(i + 2).unwrap(),
        i @ 3..=5 => SFTData::from_edge_matrix(&directed_edge_matrix(&genus2_catalog()[i - 3]).unwrap()).unwrap(),
        _ => SFTData::from_edge_matrix(&directed_edge_matrix(&kato_graph(1 + (index / 8 % 3) as u32)).unwrap())
            .unwrap(),
    }
}

pub fn random_matrix() -> impl Strategy<Value = Vec<Vec<u8>>> {
    (1usize..=5).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(0u8..=1, n), n))
}

/// Σ_{n≤N} ê_n = dim V_N for any accepted transition matrix; matrices with
/// a zero row are rejected.
pub fn telescoping(rows: &[Vec<u8>], levels: usize) -> Result<(), TestCaseError> {
    let m = BinaryMatrix::from_rows(rows).unwrap();
    let zero_row = (0..m.size()).any(|i| m.row_sum(i) == 0);
    let Ok(s) = SFTData::from_matrix(m) else {
        prop_assert!(zero_row);
        return Ok(());
    };
    prop_assert!(!zero_row);
    let d = s.filtration_dims(levels).unwrap();
    let e: u128 = d.e_hats().iter().sum();
    prop_assert_eq!(e, d.v(levels));
    for n in 1..=levels {
        prop_assert_eq!(d.e_hat(n), d.v(n) - d.v(n - 1));
    }
    Ok(())
}

/// μ(w) = Σ_a μ(wa) over admissible continuations, and μ sums to 1 on letters.
pub fn measure_additivity(index: usize, walk: &[usize]) -> Result<(), TestCaseError> {
    let s = shift(index);
    let mu = s.parry_measure().unwrap();
    let n = s.alphabet_size();
    let letters: f64 = (0..n).map(|a| mu.weight(&[a]).unwrap()).sum();
    prop_assert!((letters - 1.0).abs() < 1e-12, "letters sum to {}", letters);
    let mut w = vec![walk[0] % n];
    for &c in &walk[1..] {
        let succ: Vec<usize> = s.matrix().successors(*w.last().unwrap()).collect();
        w.push(succ[c % succ.len()]);
    }
    let whole = mu.weight(&w).unwrap();
    let parts: f64 = s
        .matrix()
        .successors(*w.last().unwrap())
        .map(|a| {
            let mut x = w.clone();
            x.push(a);
            mu.weight(&x).unwrap()
        })
        .sum();
    prop_assert!((whole - parts).abs() <= 1e-12 * whole.max(1e-300), "{} vs {}", whole, parts);
    Ok(())
}

/// The crossed-product spectrum is symmetric under λ ↦ −λ and has total
/// multiplicity 2 (M + 1) Σ m_j.
pub fn spectrum_symmetry(base: Vec<(f64, u64)>, cutoff: u64) -> Result<(), TestCaseError> {
    let total: u64 = 2 * (cutoff + 1) * base.iter().map(|b| b.1).sum::<u64>();
    let c = CrossedProductTriple::new(base, cutoff).unwrap();
    let spectrum = crossed_product_spectrum(&c);
    prop_assert_eq!(spectrum.iter().map(|s| s.multiplicity).sum::<u64>(), total);
    for (a, b) in spectrum.iter().zip(spectrum.iter().rev()) {
        prop_assert!((a.value + b.value).abs() <= 1e-12 * a.value.abs().max(1.0));
        prop_assert_eq!(a.multiplicity, b.multiplicity);
    }
    prop_assert!(spectrum.windows(2).all(|w| w[0].value < w[1].value));
    Ok(())
}

/// K-groups depend only on the matrix up to simultaneous permutation.
pub fn k_theory_permutation_invariance(rows: &[Vec<u8>], seed: u64) -> Result<(), TestCaseError> {
    let a = BinaryMatrix::from_rows(rows).unwrap();
    let n = a.size();
    let mut p: Vec<usize> = (0..n).collect();
    let mut x = seed;
    for i in (1..n).rev() {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        p.swap(i, (x >> 33) as usize % (i + 1));
    }
    prop_assert_eq!(ck_k_theory(&a), ck_k_theory(&a.permuted(&p)));
    Ok(())
}

/// parse(render(plan)) = plan.
pub fn plan_round_trip(args: Vec<String>) -> Result<(), TestCaseError> {
    let plan: RunPlan = parse_invocation(std::iter::once("mumford".to_string()).chain(args)).unwrap();
    prop_assert_eq!(parse_invocation(plan.render()).unwrap(), plan);
    Ok(())
}

pub fn plan_args() -> impl Strategy<Value = Vec<String>> {
    prop_oneof![
        proptest::collection::vec(2u64..50, 1..9).prop_map(|w| {
            vec!["tau".into(), "--weights".into(), w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")]
        }),
        (1usize..5, 2usize..9, proptest::collection::vec(0.01f64..10.0, 1..4)).prop_map(|(g, l, t)| {
            vec![
                "spectra".into(),
                "--genus".into(),
                g.to_string(),
                "--levels".into(),
                l.to_string(),
                "--t".into(),
                t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            ]
        }),
        (1usize..5, any::<bool>(), any::<bool>()).prop_map(|(q, c, b)| {
            let mut v = vec!["building".into(), "family".into(), "--q".into(), q.to_string()];
            if c {
                v.push("--cover".into());
            }
            if b {
                v.push("--bm".into());
            }
            v
        }),
        (1u64..500, 0u64..500, 0.01f64..5.0, 0usize..3).prop_map(|(n, m, s, b)| {
            vec![
                "crossed".into(),
                "--base".into(),
                ["linear", "squares", "zero"][b].into(),
                "--count".into(),
                n.to_string(),
                "--cutoff".into(),
                m.to_string(),
                "--scale".into(),
                s.to_string(),
                "--format".into(),
                "csv".into(),
            ]
        }),
    ]
}

/// Presentations survive a JSON round trip.
pub fn presentation_round_trip(q: usize, cover: bool) -> Result<(), TestCaseError> {
    let mut p = family_presentation(q).unwrap();
    if cover {
        p = four_fold_cover(&p).unwrap();
    }
    let text = serde_json::to_string(&p).unwrap();
    let back: PolygonalPresentation = serde_json::from_str(&text).unwrap();
    prop_assert_eq!(back, p);
    Ok(())
}

/// Product tables V_{ℓ,k} = a_ℓ b_k of increasing sequences decompose exactly.
pub fn product_inclusion_exclusion(a: Vec<u64>, b: Vec<u64>) -> Result<(), TestCaseError> {
    let inc = |v: &[u64]| -> Vec<u128> {
        v.iter().scan(0u128, |acc, &x| {
            *acc += x as u128;
            Some(*acc)
        })
        .collect()
    };
    let (a, b) = (inc(&a), inc(&b));
    let t: Vec<Vec<u128>> = a.iter().map(|x| b.iter().map(|y| x * y).collect()).collect();
    prop_assert!(inclusion_exclusion_check(a.len() - 1, b.len() - 1, &t).unwrap());
    Ok(())
}

/// The exponent equation has a root where the left side crosses 2 downward.
pub fn tau_root(weights: Vec<u64>) -> Result<(), TestCaseError> {
    let r = solve_tau(&weights).unwrap();
    prop_assert!(r.residual < 1e-12);
    let (v, d) = tau_lhs(&weights, r.x);
    prop_assert!((v - 2.0).abs() < 1e-12);
    prop_assert!(d < 0.0);
    Ok(())
}

pub fn tau_weights() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(2u64..20, 5..12)
}

/// Runs every invariant with `cases` random instances; returns the number
/// of suites and the first failure.
pub fn run_all(cases: u32) -> Result<usize, String> {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    let mut suites = 0;
    macro_rules! suite {
        ($name:expr, $strategy:expr, $check:expr) => {{
            TestRunner::new(cfg.clone()).run(&$strategy, $check).map_err(|e| format!("{}: {e}", $name))?;
            suites += 1;
        }};
    }
    suite!("telescoping", (random_matrix(), 1usize..6), |(m, l)| telescoping(&m, l));
    suite!("measure_additivity", (0usize..24, proptest::collection::vec(0usize..64, 1..7)), |(i, w)| {
        measure_additivity(i, &w)
    });
    suite!("spectrum_symmetry", (proptest::collection::vec((-50.0f64..50.0, 1u64..4), 1..6), 0u64..30), |(b, m)| {
        spectrum_symmetry(b, m)
    });
    suite!("k_theory_permutation", (random_matrix(), any::<u64>()), |(m, s)| k_theory_permutation_invariance(&m, s));
    suite!("plan_round_trip", plan_args(), plan_round_trip);
    suite!("presentation_round_trip", (1usize..4, any::<bool>()), |(q, c)| presentation_round_trip(q, c));
    suite!(
        "product_inclusion_exclusion",
        (proptest::collection::vec(1u64..100, 1..7), proptest::collection::vec(1u64..100, 1..7)),
        |(a, b)| product_inclusion_exclusion(a, b)
    );
    suite!("tau_root", tau_weights(), tau_root);
    Ok(suites)
}
