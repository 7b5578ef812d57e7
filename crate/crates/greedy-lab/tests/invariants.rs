//! Structural invariants: pair enumeration, projections, norm axioms,
//! reference-error containments, parameter monotonicity and the property
//! checks, on seeded libraries and proptest-generated instances.

use std::collections::BTreeSet;

use greedy_lab::catalog::{norm, Catalog};
use greedy_lab::greedy::{gamma, reference_errors, sigma_hat, truncate};
use greedy_lab::oracle::{sample_library, SEED};
use greedy_lab::pairs::subsets_upto;
use greedy_lab::parameters::{
    conservative_constant, lebesgue_parameter, omega_parameter, quasi_greedy_parameters, sc_parameter, SearchConfig,
};
use greedy_lab::properties::{
    check_unit_symmetry, divergence_report, gap_classifier, pslc_admissible, Bound, DivergenceFamily, SampleConfig,
    SymmetryVariant, Weight,
};
use greedy_lab::{
    classify_pair, enumerate_pairs, indicator, project, IndexSequence, NormSpec, PairClass, PairContext, SignPattern,
    SparseVector,
};
use proptest::prelude::*;

fn window_of(spec: &NormSpec, want: usize) -> usize {
    spec.window().map_or(want, |w| w.min(want))
}

fn signed(set: &[usize], mask: u64) -> SparseVector {
    indicator(set, Some(&SignPattern::from_mask(set, mask))).unwrap()
}

fn arb_sequence() -> impl Strategy<Value = IndexSequence> {
    prop_oneof![
        (1usize..4, 1usize..4).prop_map(|(first, step)| IndexSequence::arithmetic(first, step)),
        proptest::collection::btree_set(1usize..12, 1..8)
            .prop_map(|s| IndexSequence::list(s.into_iter().collect()).unwrap()),
    ]
}

fn arb_vector(window: usize, max_support: usize) -> impl Strategy<Value = SparseVector> {
    proptest::collection::btree_map(1..=window, prop_oneof![Just(1.0), Just(-1.0), Just(0.5), -2.0f64..2.0], 0..=max_support)
        .prop_map(|m| SparseVector::from_pairs(m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn enumeration_agrees_with_classification(n in arb_sequence(), window in 1usize..7, cap in 0usize..3) {
        let ctx = PairContext::new(&n);
        let universe: Vec<usize> = (1..=window).collect();
        for class in [PairClass::Tn, PairClass::Sn] {
            let got: BTreeSet<(Vec<usize>, Vec<usize>)> =
                enumerate_pairs(window, cap, class, ctx).unwrap().map(|p| (p.a, p.b)).collect();
            let mut want = BTreeSet::new();
            for a in subsets_upto(&universe, cap) {
                for b in subsets_upto(&universe, cap) {
                    if classify_pair(&a, &b, &ctx).is(class) {
                        want.insert((a.clone(), b));
                    }
                }
            }
            prop_assert_eq!(&got, &want);
            if class == PairClass::Tn {
                for (a, b) in &got {
                    prop_assert!(a.iter().all(|&i| n.contains(i)));
                    let min_bn = b.iter().copied().filter(|&i| n.contains(i)).min();
                    if let (Some(&top), Some(lo)) = (a.last(), min_bn) {
                        prop_assert!(top < lo);
                    }
                }
            }
        }
    }

    #[test]
    fn projections_are_exact(x in arb_vector(12, 8), set in proptest::collection::vec(1usize..13, 0..6)) {
        let p = project(&x, &set);
        prop_assert_eq!(project(&p, &set), p.clone());
        prop_assert_eq!(p.add(&x.sub(&p)), x);
    }

    #[test]
    fn positions_invert_elements(n in arb_sequence()) {
        for k in 1..=6 {
            if let Some(j) = n.nth(k) {
                prop_assert_eq!(n.index_of(j), Some(k));
            }
        }
        for j in n.elements_upto(40) {
            prop_assert_eq!(n.nth(n.index_of(j).unwrap()), Some(j));
        }
    }

    #[test]
    fn gap_profile_matches_consecutive_elements(set in proptest::collection::btree_set(1usize..200, 2..20)) {
        let elems: Vec<usize> = set.into_iter().collect();
        let p = gap_classifier(&IndexSequence::list(elems.clone()).unwrap(), 200).unwrap();
        let q = elems.windows(2).map(|w| w[1] as f64 / w[0] as f64).fold(0.0, f64::max);
        let d = elems.windows(2).map(|w| w[1] - w[0]).max().unwrap() as f64;
        prop_assert_eq!(p.quotient_bound, Bound::WindowMax(q));
        prop_assert_eq!(p.additive_bound, Bound::WindowMax(d));
    }
}

#[test]
fn norm_axioms_on_samples() {
    for spec in Catalog::builtin().iter() {
        let window = window_of(spec, 24);
        let xs = sample_library(500, 6, window, SEED);
        let ys = sample_library(500, 6, window, SEED + 1);
        for (x, y) in xs.iter().zip(&ys) {
            let nx = spec.value(x).unwrap();
            assert!(nx > 0.0, "{}: definiteness at {x}", spec.id);
            for c in [-2.5, 0.5, 3.0] {
                let gap = (spec.value(&x.scale(c)).unwrap() - c.abs() * nx).abs();
                assert!(gap <= 1e-12 * nx.max(1.0), "{}: homogeneity at {x}", spec.id);
            }
            let sum = spec.value(&x.add(y)).unwrap();
            assert!(sum <= nx + spec.value(y).unwrap() + 1e-9, "{}: triangle at {x}, {y}", spec.id);
        }
        assert_eq!(spec.value(&SparseVector::zero()).unwrap(), 0.0);
    }
}

#[test]
fn unconditional_and_normalized_flags_hold() {
    for spec in Catalog::builtin().iter() {
        let window = window_of(spec, 16);
        if spec.flags.normalized {
            for k in 1..=window {
                assert_eq!(spec.value(&SparseVector::unit(k)).unwrap(), 1.0, "{}: ‖e_{k}‖", spec.id);
            }
        }
        if !spec.flags.one_unconditional {
            continue;
        }
        for x in sample_library(150, 8, window, SEED ^ 7) {
            let nx = spec.value(&x).unwrap();
            let supp = x.support();
            for a in subsets_upto(&supp, supp.len()) {
                assert!(spec.value(&project(&x, &a)).unwrap() <= nx * (1.0 + 1e-12), "{}: P_A at {x}", spec.id);
            }
            for alpha in [0.1, 0.5, 1.0, 2.0] {
                assert!(spec.value(&truncate(&x, alpha).unwrap()).unwrap() <= nx * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn reference_error_containments() {
    for id in ["l1l2", "summing", "split", "family_sqrt", "gap_pk"] {
        let spec = norm(id).unwrap();
        for x in sample_library(120, 5, 14, SEED ^ 3) {
            for m in 0..=3 {
                let r = reference_errors(&x, &spec, &spec.n, m, 14).unwrap();
                let tilde_min = (0..=m)
                    .map(|k| reference_errors(&x, &spec, &spec.n, k, 14).unwrap().sigma_tilde)
                    .fold(f64::INFINITY, f64::min);
                assert!(tilde_min <= r.sigma_hat + 1e-12, "{id}: σ̃ at {x}, m = {m}");
                let prefix = spec.n.prefix(m).unwrap();
                let direct = spec.value(&greedy_lab::vector::project_out(&x, &prefix)).unwrap();
                assert!(r.sigma_check <= direct + 1e-12, "{id}: σ̌ at {x}, m = {m}");
            }
        }
    }
}

#[test]
fn unit_pslc_norms_satisfy_the_lebesgue_identity() {
    for spec in Catalog::builtin().iter().filter(|s| s.flags.one_pslc_expected) {
        for x in sample_library(200, 5, 12, SEED ^ 5) {
            for m in 1..=3 {
                let (sh, _) = sigma_hat(&x, spec, &spec.n, m).unwrap();
                let g = gamma(&x, spec, m).unwrap();
                assert!(g <= (1.0 + 1e-9) * sh, "{}: γ_{m} = {g} > σ̂ = {sh} at {x}", spec.id);
            }
        }
    }
}

#[test]
fn parameter_witnesses_reevaluate_and_monotone() {
    let cfg = SearchConfig::default();
    for id in ["split", "summing", "l1l2", "sup_sqrt_l1"] {
        let spec = norm(id).unwrap();
        let mut last_sc = 0.0;
        let mut last_gc = 0.0;
        for m in 1..=3 {
            let sc = sc_parameter(&spec, &spec.n, m, 12).unwrap();
            let q = quasi_greedy_parameters(&spec, &spec.n, m, &cfg).unwrap();
            let o = omega_parameter(&spec, &spec.n, m, &cfg).unwrap();
            let l = lebesgue_parameter(&spec, &spec.n, m, &cfg).unwrap();
            for r in [&sc, &q.g, &q.gc, &q.gtilde, &o.omega, &o.omega_hat, &l] {
                let again = r.reevaluate(&spec).unwrap().unwrap();
                assert!((again - r.value).abs() <= 1e-9 * r.value.max(1.0), "{id} {} at {m}", r.parameter);
            }
            assert!((o.omega.value - o.omega_hat.value).abs() <= 1e-9 * o.omega.value);
            assert!(sc.value >= last_sc && q.gc.value >= last_gc - 1e-12, "{id}: monotonicity at {m}");
            last_sc = sc.value;
            last_gc = q.gc.value;
        }
    }
}

#[test]
fn lebesgue_and_omega_agree_at_order_one() {
    let cfg = SearchConfig::default();
    for spec in Catalog::builtin().iter() {
        let l = lebesgue_parameter(spec, &spec.n, 1, &cfg).unwrap().value;
        let o = omega_parameter(spec, &spec.n, 1, &cfg).unwrap().omega.value;
        assert!((l - o).abs() <= 1e-9 * o.max(1.0), "{}: L̂_1 = {l}, ω_1 = {o}", spec.id);
    }
}

#[test]
fn democratic_dominates_conservative() {
    for id in ["summing", "rearranged_sqrt", "split", "family_sqrt"] {
        let spec = norm(id).unwrap();
        let ctx = PairContext::new(&spec.n);
        let t = conservative_constant(&spec, ctx, 10, 3, PairClass::Tn, true).unwrap().value;
        let s = conservative_constant(&spec, ctx, 10, 3, PairClass::Sn, true).unwrap().value;
        assert!(s >= t, "{id}: S_n {s} < T_n {t}");
    }
    let l1l2 = norm("l1l2").unwrap();
    for window in [6, 10, 14] {
        let r = conservative_constant(&l1l2, PairContext::new(&l1l2.n), window, 4, PairClass::Tn, true).unwrap();
        assert_eq!(r.value, 1.0, "window {window}");
    }
}

#[test]
fn divergence_negative_controls() {
    // For l1 ⊕ l2 only the family with both sets inside n is a set pair of
    // the conservative class; off n it is the l1 part against the l2 part.
    let cases = [
        ("l1", vec![DivergenceFamily::OffNVersusN, DivergenceFamily::LateVersusEarly]),
        ("l1l2", vec![DivergenceFamily::LateVersusEarly]),
    ];
    for (id, families) in cases {
        let spec = norm(id).unwrap();
        for family in families {
            let r = divergence_report(&spec, &IndexSequence::evens(), family, &[4, 16, 64]).unwrap();
            assert!(r.rows.iter().all(|row| row.ratio <= 1.0 + 1e-12), "{id} {family:?}");
            assert!(!r.growing);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn sequence_weights_respect_the_partition_factor(values in proptest::collection::vec(0.2f64..1.0, 8)) {
        let spec = norm("rearranged_sqrt").unwrap();
        let weight = Weight::Sequence { values: values.clone() };
        let alpha = weight.spread().unwrap();
        let plain = conservative_constant(&spec, PairContext::new(&spec.n), 8, 3, PairClass::Tn, false).unwrap().value;
        let ctx = PairContext::new(&spec.n).with_weight(&weight);
        let weighted = conservative_constant(&spec, ctx, 8, 3, PairClass::TomegaN, false).unwrap().value;
        prop_assert!(weighted <= (1.0 + (2.0 / alpha).ceil()) * plain + 1e-9, "{weighted} vs {plain}, α = {alpha}");
    }
}

/// Once the single-coordinate inequalities pass, chaining them gives the
/// set inequality `‖x + 1_{εA}‖ ≤ ‖x + 1_{δB}‖` for admissible sets.
#[test]
fn unit_symmetry_composes_to_set_inequality() {
    let cfg = SampleConfig { window: 9, random_count: 120, ..SampleConfig::default() };
    let universe: Vec<usize> = (1..=cfg.window).collect();
    let sets = subsets_upto(&universe, 3);
    for id in ["family_sqrt", "family_phi", "l1l2"] {
        let spec = norm(id).unwrap();
        assert!(check_unit_symmetry(&spec, &spec.n, SymmetryVariant::Pslc, &cfg).unwrap().pass);
        let library = cfg.library();
        for (t, x) in library.iter().enumerate().step_by(7) {
            // A deterministic spread of (A, B) pairs per vector.
            for (u, a) in sets.iter().enumerate().skip(t % 5).step_by(11) {
                for b in sets.iter().skip(u % 3).step_by(13) {
                    if !pslc_admissible(&spec.n, x, a, b) {
                        continue;
                    }
                    let (ma, mb) = ((t as u64) & 7, (u as u64 >> 1) & 7);
                    let lhs = spec.value(&x.add(&signed(a, ma))).unwrap();
                    let rhs = spec.value(&x.add(&signed(b, mb))).unwrap();
                    assert!(lhs <= (1.0 + 1e-8) * rhs, "{id}: x = {x}, A = {a:?}, B = {b:?}");
                }
            }
        }
    }
}
