//! Differential tests: fast evaluators and greedy-set enumeration against
//! exhaustive brute force, and a check that the oracle notices a wrong
//! rearrangement.

use greedy_lab::catalog::{norm, Catalog};
use greedy_lab::greedy::greedy_sets;
use greedy_lab::oracle::{brute_force, greedy_sets_brute, sample_library, SEED};
use greedy_lab::SparseVector;

#[test]
fn evaluators_match_brute_force() {
    for spec in Catalog::builtin().iter() {
        let window = match spec.family_name() {
            "family_weight" => 12,
            "partitioned_rearrangement" | "lambda_weight" => 14,
            _ => continue,
        };
        for x in sample_library(500, 6, window, SEED) {
            let (fast, slow) = (spec.value(&x).unwrap(), brute_force(spec, &x).unwrap());
            assert!((fast - slow).abs() <= 1e-12 * slow.max(1.0), "{} at {x}: {fast} vs {slow}", spec.id);
        }
    }
}

#[test]
fn greedy_sets_match_brute_force() {
    for x in sample_library(500, 6, 14, SEED ^ 1) {
        for m in 0..=7 {
            let mut fast = greedy_sets(&x, m, 14).unwrap().sets;
            let mut slow = greedy_sets_brute(&x, m, 14);
            fast.sort();
            slow.sort();
            assert_eq!(fast, slow, "{x} at order {m}");
        }
    }
}

/// Pairing the weights `1/√i` with the moduli in ascending order instead of
/// descending order is caught by the oracle on the library.
#[test]
fn oracle_rejects_ascending_pairing() {
    let spec = norm("rearranged_sqrt").unwrap();
    let ascending = |x: &SparseVector| -> f64 {
        let mut on_n: Vec<f64> = x.iter().filter(|(i, _)| spec.n.contains(*i)).map(|(_, c)| c.abs()).collect();
        on_n.sort_by(f64::total_cmp);
        let off: f64 = x.iter().filter(|(i, _)| !spec.n.contains(*i)).map(|(_, c)| c.abs()).sum();
        off + on_n.iter().enumerate().map(|(i, c)| c / ((i + 1) as f64).sqrt()).sum::<f64>()
    };
    let disagreements = sample_library(500, 6, 14, SEED)
        .iter()
        .filter(|x| (ascending(x) - brute_force(&spec, x).unwrap()).abs() > 1e-12)
        .count();
    assert!(disagreements > 100, "only {disagreements} disagreements");
}
