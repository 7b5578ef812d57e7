//! Verification suites run by `verify`: the worked examples (`paper`) and
//! the brute-force equivalence checks (`oracles`).

use std::time::Instant;

use serde::Serialize;

use crate::catalog::{norm, Catalog};
use crate::error::{LabError, Result};
use crate::greedy::greedy_sets;
use crate::oracle::{brute_force, greedy_sets_brute, sample_library, SEED};
use crate::pairs::{PairClass, PairContext};
use crate::parameters::{
    conservative_constant, dual_coordinate_norm, kappa, lebesgue_parameter, omega_parameter, quasi_greedy_parameters,
    sc_parameter, verify_lebesgue_bounds, DualConfig, LebesgueIngredients, SearchConfig, TOL,
};
use crate::properties::{
    c0_subsequence_probe, check_unit_symmetry, divergence_report, n_projection_ratio, prefix_basis_constant,
    unit_swap, DivergenceFamily, SampleConfig, SymmetryVariant, Weight,
};
use crate::sequence::IndexSequence;
use crate::vector::SparseVector;
use crate::witnesses::alternating;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// What the check establishes.
    pub anchor: String,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Examples,
    Oracles,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Examples),
            "oracles" => Ok(Self::Oracles),
            _ => Err(LabError::Config(format!("unknown suite `{s}` (expected paper or oracles)"))),
        }
    }
}

/// A check either passes with a detail line or fails with a reason.
type Check = fn() -> Result<std::result::Result<String, String>>;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * b.abs().max(1.0)
}

fn verdict(ok: bool, detail: String) -> Result<std::result::Result<String, String>> {
    Ok(if ok { Ok(detail) } else { Err(detail) })
}

fn summing_omega() -> Result<std::result::Result<String, String>> {
    let spec = norm("summing")?;
    let cfg = SearchConfig::default();
    let values: Vec<f64> =
        (1..=3).map(|m| omega_parameter(&spec, &spec.n, m, &cfg).map(|r| r.omega.value)).collect::<Result<_>>()?;
    let l1 = lebesgue_parameter(&spec, &spec.n, 1, &cfg)?.value;
    let ok = values.iter().zip([5.0, 9.0, 13.0]).all(|(v, e)| close(*v, e)) && close(l1, 5.0);
    verdict(ok, format!("omega_1..3 = {values:?}, lebesgue_1 = {l1}"))
}

fn split_parameters() -> Result<std::result::Result<String, String>> {
    let spec = norm("split")?;
    let n = &spec.n;
    let window = n.nth(14).expect("infinite sequence");
    let cfg = SearchConfig::default();
    let kap = kappa(&spec, window, &DualConfig::default())?;
    let mut rows = Vec::new();
    let mut detail = Vec::new();
    for m in 1..=6usize {
        let sc = sc_parameter(&spec, n, m, window)?;
        let lebesgue = lebesgue_parameter(&spec, n, m, &cfg)?;
        let q = quasi_greedy_parameters(&spec, n, m, &cfg)?;
        let omega = omega_parameter(&spec, n, m, &cfg)?.omega;
        if !close(sc.value, m.div_ceil(2) as f64) || [q.g.value, q.gc.value, q.gtilde.value] != [1.0; 3] {
            return verdict(false, format!("m = {m}: sc {}, g {}, gc {}, gtilde {}", sc.value, q.g.value, q.gc.value, q.gtilde.value));
        }
        detail.push(format!("{:.6}", lebesgue.value));
        rows.push(LebesgueIngredients { m, lebesgue, omega, gc: q.gc, gtilde: q.gtilde, sc });
    }
    let bounds = verify_lebesgue_bounds(&kap, 6, &rows)?;
    let tight = (1..=6).all(|m| bounds.check(m, "lebesgue <= gc + gtilde sc").is_some_and(|c| c.tight));
    verdict(bounds.all_hold() && tight, format!("sc = 1,1,2,2,3,3; lebesgue = {}; tight = {tight}", detail.join(",")))
}

fn l1l2_conservative() -> Result<std::result::Result<String, String>> {
    let spec = norm("l1l2")?;
    let r = conservative_constant(&spec, PairContext::new(&spec.n), 20, 6, PairClass::Tn, true)?;
    verdict(r.value == 1.0, format!("constant = {}", r.value))
}

fn summing_duals() -> Result<std::result::Result<String, String>> {
    let spec = norm("summing")?;
    let mut worst = 0.0f64;
    for k in 1..=16 {
        let d = dual_coordinate_norm(&spec, k, &DualConfig::default())?;
        let cf = d.closed_form.expect("summing norms have closed forms").value;
        worst = worst.max((cf - d.search.value).abs());
    }
    verdict(worst <= TOL, format!("max |closed form − search| = {worst:e} over k ≤ 16"))
}

fn divergence() -> Result<std::result::Result<String, String>> {
    let rearranged = norm("rearranged_sqrt")?;
    let family = norm("family_sqrt")?;
    let l1 = norm("l1")?;
    let a = divergence_report(&rearranged, &rearranged.n, DivergenceFamily::OffNVersusN, &[16, 64, 256])?;
    let b = divergence_report(&family, &family.n, DivergenceFamily::LateVersusEarly, &[16, 64, 256, 1024])?;
    let c = divergence_report(&l1, &IndexSequence::evens(), DivergenceFamily::OffNVersusN, &[16, 64, 256])?;
    let control = c.rows.iter().all(|r| r.ratio <= 1.0 + TOL);
    verdict(
        a.growing && b.growing && control,
        format!("growth {:.4} and {:.4} (need 2); l1 control ratios ≤ 1: {control}", a.growth, b.growth),
    )
}

fn unit_symmetry() -> Result<std::result::Result<String, String>> {
    let cfg = SampleConfig::default();
    for id in ["family_sqrt", "family_phi", "l1l2"] {
        let spec = norm(id)?;
        let r = check_unit_symmetry(&spec, &spec.n, SymmetryVariant::Pslc, &cfg)?;
        if !r.pass {
            return verdict(false, format!("{id}: {:?}", r.counterexample));
        }
    }
    let two_block = norm("family_two_block")?;
    let fails = !check_unit_symmetry(&two_block, &two_block.n, SymmetryVariant::Pslc, &cfg)?.pass;
    let v = unit_swap(&two_block, &SparseVector::unit(7), 2, 9, 1.0, 1.0)?;
    let ok = fails && v.as_ref().is_some_and(|v| v.lhs_value == 2.0 && close(v.rhs_value, 1.0 + 0.5f64.sqrt()));
    verdict(ok, format!("two-block counterexample {:?}", v.map(|v| (v.lhs_value, v.rhs_value))))
}

fn n_schauder() -> Result<std::result::Result<String, String>> {
    let spec = norm("paired_summing")?;
    let m = IndexSequence::predicate("notmod3_1", 600)?;
    let prefix = prefix_basis_constant(&spec, 48, &SampleConfig::default())?.value;
    let mut ratios = Vec::new();
    for k in 1..=8 {
        ratios.push(n_projection_ratio(&spec, &spec.n, &alternating(&m, 2 * k)?, 60)?.0);
    }
    let ok = prefix <= 1.0 + TOL && ratios.iter().enumerate().all(|(i, r)| close(*r, (i + 1) as f64));
    verdict(ok, format!("prefix ≤ {prefix}, n-projections {ratios:?}"))
}

fn weights() -> Result<std::result::Result<String, String>> {
    let spec = norm("family_phi_l2")?;
    let weight = Weight::norm_induced(&spec);
    let ctx = PairContext::new(&spec.n).with_weight(&weight);
    let r = conservative_constant(&spec, ctx, 24, 4, PairClass::TomegaN, true)?;
    let probe = c0_subsequence_probe(&spec, &spec.n.prefix(64)?, &[4, 16, 64])?;
    let ok = close(r.value, 1.0) && probe.values.iter().all(|&(k, v)| v >= (k as f64).sqrt() * (1.0 - TOL));
    verdict(ok, format!("weighted constant {}, probe {:?}", r.value, probe.values))
}

const PAPER: [(&str, &str, Check); 8] = [
    ("summing_omega", "summing norm: ω_m = 1 + 4m, L̂_1 = ω_1", summing_omega),
    ("split_parameters", "split norm: sc_{2m−1} = sc_{2m} = m, L̂ = g^c + g̃·sc = m + 1", split_parameters),
    ("l1l2_conservative", "ℓ1 ⊕ ℓ2: ‖1_A‖ ≤ ‖1_B‖ on T(n)", l1l2_conservative),
    ("summing_duals", "summing norm: ‖e*_{n_s}‖ = 2 for s > 1", summing_duals),
    ("divergence", "indicator ratios grow with N", divergence),
    ("unit_symmetry", "1-PSLC instances and the two-block counterexample", unit_symmetry),
    ("n_schauder", "paired summing norm: Schauder but P^n_N(x_{2n}) = n", n_schauder),
    ("weights", "norm-induced weight: T^ω(n) constant 1, ‖Σ f_n‖ ≥ √N", weights),
];

/// Brute-force equivalence of every rearrangement or family norm in the
/// catalog on a seeded library, and of greedy sets against a subset filter.
fn oracle_checks() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for spec in Catalog::builtin().iter() {
        if !matches!(spec.family_name(), "partitioned_rearrangement" | "family_weight" | "lambda_weight") {
            continue;
        }
        let start = Instant::now();
        let window = if spec.family_name() == "family_weight" { 12 } else { 14 };
        let mut worst = 0.0f64;
        let mut failure = None;
        for x in sample_library(500, 6, window, SEED) {
            let (fast, slow) = (spec.value(&x)?, brute_force(spec, &x)?);
            let gap = (fast - slow).abs() / slow.abs().max(1.0);
            worst = worst.max(gap);
            if gap > 1e-12 && failure.is_none() {
                failure = Some(format!("{x}: evaluator {fast}, oracle {slow}"));
            }
        }
        out.push(CheckResult {
            name: format!("oracle_{}", spec.id),
            anchor: format!("{}: evaluator = brute force on 500 vectors", spec.id),
            pass: failure.is_none(),
            detail: failure.unwrap_or_else(|| format!("max relative gap {worst:e}")),
            millis: start.elapsed().as_millis(),
        });
    }
    let start = Instant::now();
    let mut mismatch = None;
    'outer: for x in sample_library(500, 6, 14, SEED ^ 1) {
        for m in 0..=6 {
            let mut fast = greedy_sets(&x, m, 14)?.sets;
            let mut slow = greedy_sets_brute(&x, m, 14);
            fast.sort();
            slow.sort();
            if fast != slow {
                mismatch = Some(format!("{x} at order {m}"));
                break 'outer;
            }
        }
    }
    out.push(CheckResult {
        name: "oracle_greedy_sets".into(),
        anchor: "greedy sets = brute-force subset filter on [1,14]".into(),
        pass: mismatch.is_none(),
        detail: mismatch.unwrap_or_else(|| "500 vectors, orders 0..6".into()),
        millis: start.elapsed().as_millis(),
    });
    Ok(out)
}

/// Runs a suite. The worked-example suite includes the oracle checks.
pub fn run(suite: Suite) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    if suite == Suite::Examples {
        for (name, anchor, check) in PAPER {
            let start = Instant::now();
            let outcome = check()?;
            out.push(CheckResult {
                name: name.into(),
                anchor: anchor.into(),
                pass: outcome.is_ok(),
                detail: outcome.unwrap_or_else(|e| e),
                millis: start.elapsed().as_millis(),
            });
        }
    }
    out.extend(oracle_checks()?);
    Ok(out)
}
