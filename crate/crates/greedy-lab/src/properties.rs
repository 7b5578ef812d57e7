//! Desk-scale checks of qualitative properties: unit symmetry inequalities,
//! divergence tables, projection constants along `n`, gap profiles, set
//! weights, right-skewness and `c_0`-type growth probes.
//!
//! Every check runs on a finite, seeded sample and reports raw values next to
//! its verdict; no check claims a limit.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::greedy::greedy_supports;
use crate::norms::{Family, NormSpec};
use crate::oracle::SEED;
use crate::pairs::{classify_pair, count_subsets_upto, guard, subsets_upto, AdmissiblePair, PairClass, PairContext, SetWeight};
use crate::parameters::{ParamWitness, TOL};
use crate::sequence::{IndexSequence, SequenceSpec};
use crate::vector::{indicator, prefix_project, project, project_out, signed_indicator, SparseVector};
use crate::witnesses;

// ---------------------------------------------------------------------------
// Set weights

/// A map from finite sets to `[0, ∞]` with `ω(∅) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `ω(A) = Σ_{i ∈ A} s_i`; indices past the list reuse the last value.
    Sequence { values: Vec<f64> },
    /// `ω(A) = ‖1_A‖`, `+∞` where the norm cannot be evaluated.
    NormInduced { norm: Box<NormSpec> },
    /// Explicit values; unlisted sets weigh `+∞`.
    Table { entries: Vec<(Vec<usize>, f64)> },
}

impl Weight {
    pub fn norm_induced(norm: &NormSpec) -> Self {
        Self::NormInduced { norm: Box::new(norm.clone()) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(LabError::Config(format!("invalid weight: {what}")));
        match self {
            Self::Sequence { values } => {
                if values.is_empty() {
                    return bad("empty weight sequence".into());
                }
                if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                    return bad(format!("sequence weight {v}"));
                }
            }
            Self::NormInduced { norm } => norm.validate()?,
            Self::Table { entries } => {
                for (set, v) in entries {
                    if set.is_empty() && *v != 0.0 {
                        return bad("ω(∅) must be 0".into());
                    }
                    let positive = *v > 0.0;
                    if !set.is_empty() && !positive {
                        return bad(format!("ω({set:?}) = {v}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `min_n s_n / max_n s_n` for sequence weights.
    pub fn spread(&self) -> Option<f64> {
        match self {
            Self::Sequence { values } => {
                let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = values.iter().copied().fold(0.0, f64::max);
                Some(lo / hi)
            }
            _ => None,
        }
    }
}

impl SetWeight for Weight {
    fn weight(&self, set: &[usize]) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        match self {
            Self::Sequence { values } => {
                set.iter().map(|&i| values[(i.max(1) - 1).min(values.len() - 1)]).sum()
            }
            Self::NormInduced { norm } => indicator(set, None)
                .and_then(|v| norm.value(&v))
                .unwrap_or(f64::INFINITY),
            Self::Table { entries } => {
                let mut key = set.to_vec();
                key.sort_unstable();
                entries.iter().find(|(s, _)| *s == key).map_or(f64::INFINITY, |e| e.1)
            }
        }
    }
}

/// Whether `(A, B) ∈ T^ω(n)`, together with every class the pair belongs to.
pub fn weight_admissibility(weight: &Weight, n: &IndexSequence, a: &[usize], b: &[usize]) -> (bool, AdmissiblePair) {
    let ctx = PairContext::new(n).with_weight(weight);
    let pair = classify_pair(a, b, &ctx);
    (pair.is(PairClass::TomegaN), pair)
}

// ---------------------------------------------------------------------------
// Unit symmetry inequalities

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryVariant {
    /// `‖x‖ ≤ ‖x + e_k‖` for `k ∉ supp x`, and `‖x + s e_j‖ ≤ ‖x + t e_k‖`
    /// for `j ∈ n`, `j < ({k} ⊔ supp x) ∩ n`. Together: 1-(n, PSLC).
    Pslc,
    /// `‖x + s e_j‖ ≤ ‖x + t e_k‖` for `j ∈ n` and `j`, `k`, `supp x`
    /// disjoint. Equivalent to 1-(n, SLC).
    Slc,
    /// `‖x + 1_{εA}‖ ≤ ‖x + 1_{δB}‖` for `(A, B) ∈ S(n)` with no element of
    /// `(supp x ⊔ B) ∩ n` inside `[min A, max A]`; sizes up to 2.
    Rslc,
    /// `‖x − G_1(x)‖ ≤ ‖x − x_j e_j‖` for `j ∈ n` and every greedy set of
    /// order 1. Equivalent to 1-(n, almost greedy).
    AlmostGreedy,
}

impl SymmetryVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pslc" => Ok(Self::Pslc),
            "slc" => Ok(Self::Slc),
            "rslc" => Ok(Self::Rslc),
            "almost_greedy" => Ok(Self::AlmostGreedy),
            _ => Err(LabError::Parse(format!("unknown symmetry variant `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Pslc => "pslc",
            Self::Slc => "slc",
            Self::Rslc => "rslc",
            Self::AlmostGreedy => "almost_greedy",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub window: usize,
    /// Every support up to this size is enumerated with all levels and signs.
    pub exhaustive_support: usize,
    pub random_count: usize,
    pub random_max_support: usize,
    pub levels: Vec<f64>,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            window: 10,
            exhaustive_support: 2,
            random_count: 300,
            random_max_support: 5,
            levels: vec![0.25, 0.5, 1.0],
            seed: SEED,
        }
    }
}

impl SampleConfig {
    /// The sample of vectors with `‖x‖_∞ ≤ 1`: the zero vector, every support
    /// up to `exhaustive_support` with all level and sign choices, then
    /// seeded random supports up to `random_max_support`.
    pub fn library(&self) -> Vec<SparseVector> {
        let universe: Vec<usize> = (1..=self.window).collect();
        let choices: Vec<f64> = self.levels.iter().flat_map(|&l| [l, -l]).collect();
        let mut out = Vec::new();
        for s in subsets_upto(&universe, self.exhaustive_support) {
            let total = choices.len().pow(s.len() as u32);
            for mut code in 0..total {
                let mut v = SparseVector::zero();
                for &i in &s {
                    v.set(i, choices[code % choices.len()]).expect("positive index");
                    code /= choices.len();
                }
                out.push(v);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let top = self.random_max_support.min(self.window);
        for _ in 0..self.random_count {
            let k = rng.gen_range(1..=top);
            let mut v = SparseVector::zero();
            for i in sample(&mut rng, self.window, k) {
                v.set(i + 1, choices[rng.gen_range(0..choices.len())]).expect("positive index");
            }
            out.push(v);
        }
        out
    }
}

/// An instance where the left side exceeds the right side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryViolation {
    pub x: SparseVector,
    pub lhs: SparseVector,
    pub rhs: SparseVector,
    pub lhs_value: f64,
    pub rhs_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub variant: SymmetryVariant,
    pub pass: bool,
    pub instances: usize,
    pub counterexample: Option<SymmetryViolation>,
}

/// Compares `‖lhs‖ ≤ ‖rhs‖ + 1e−9`.
fn compare_pair(norm: &NormSpec, x: &SparseVector, lhs: SparseVector, rhs: SparseVector) -> Result<Option<SymmetryViolation>> {
    let (l, r) = (norm.value(&lhs)?, norm.value(&rhs)?);
    Ok((l > r + TOL).then(|| SymmetryViolation { x: x.clone(), lhs, rhs, lhs_value: l, rhs_value: r }))
}

/// The single-coordinate inequality `‖x + s e_j‖ ≤ ‖x + t e_k‖`.
pub fn unit_swap(
    norm: &NormSpec,
    x: &SparseVector,
    j: usize,
    k: usize,
    s: f64,
    t: f64,
) -> Result<Option<SymmetryViolation>> {
    compare_pair(norm, x, x.add(&SparseVector::unit(j).scale(s)), x.add(&SparseVector::unit(k).scale(t)))
}

/// Admissibility for [`unit_swap`] under the partial symmetry condition:
/// `j ∈ n`, `j, k ∉ supp x`, `j ≠ k` and `j < ({k} ⊔ supp x) ∩ n`.
pub fn pslc_swap_admissible(n: &IndexSequence, x: &SparseVector, j: usize, k: usize) -> bool {
    n.contains(j)
        && j != k
        && !x.contains(j)
        && !x.contains(k)
        && x.support().iter().chain([&k]).all(|&i| !n.contains(i) || i > j)
}

/// `(A, B) ∈ T(n)`, disjoint from each other and from `supp x`, with
/// `A < (B ⊔ supp x) ∩ n`: the configurations of the partial symmetry
/// inequality `‖x + 1_{εA}‖ ≤ C ‖x + 1_{δB}‖`.
pub fn pslc_admissible(n: &IndexSequence, x: &SparseVector, a: &[usize], b: &[usize]) -> bool {
    let top = a.iter().copied().max().unwrap_or(0);
    a.len() <= b.len()
        && a.iter().all(|&i| n.contains(i) && !b.contains(&i) && !x.contains(i))
        && b.iter().all(|&i| !x.contains(i))
        && x.support().iter().chain(b).all(|&i| !n.contains(i) || i > top)
}

fn signs_for(norm: &NormSpec) -> &'static [f64] {
    if norm.flags.one_unconditional {
        &[1.0]
    } else {
        &[1.0, -1.0]
    }
}

fn check_vector(
    norm: &NormSpec,
    n: &IndexSequence,
    variant: SymmetryVariant,
    window: usize,
    x: &SparseVector,
) -> Result<(usize, Option<SymmetryViolation>)> {
    let signs = signs_for(norm);
    let free: Vec<usize> = (1..=window).filter(|&i| !x.contains(i)).collect();
    let mut count = 0;
    let mut run = |v: Option<SymmetryViolation>| -> Option<SymmetryViolation> {
        count += 1;
        v
    };
    match variant {
        SymmetryVariant::Pslc | SymmetryVariant::Slc => {
            if variant == SymmetryVariant::Pslc {
                for &k in &free {
                    if let Some(v) = run(compare_pair(norm, x, x.clone(), x.add(&SparseVector::unit(k)))?) {
                        return Ok((count, Some(v)));
                    }
                }
            }
            for &j in free.iter().filter(|&&j| n.contains(j)) {
                for &k in &free {
                    let ok = match variant {
                        SymmetryVariant::Pslc => pslc_swap_admissible(n, x, j, k),
                        _ => k != j,
                    };
                    if !ok {
                        continue;
                    }
                    for &s in signs {
                        for &t in signs {
                            if let Some(v) = run(unit_swap(norm, x, j, k, s, t)?) {
                                return Ok((count, Some(v)));
                            }
                        }
                    }
                }
            }
        }
        SymmetryVariant::Rslc => {
            let sets = subsets_upto(&free, 2);
            for a in sets.iter().filter(|a| a.iter().all(|&i| n.contains(i))) {
                let (lo, hi) = (a.first().copied().unwrap_or(0), a.last().copied().unwrap_or(0));
                let inside = |i: usize| n.contains(i) && i >= lo && i <= hi;
                if !a.is_empty() && x.support().into_iter().any(inside) {
                    continue;
                }
                for b in sets.iter().filter(|b| b.len() >= a.len().max(1)) {
                    if b.iter().any(|i| a.contains(i) || inside(*i)) {
                        continue;
                    }
                    let a_masks = if signs.len() == 1 { 1 } else { 1u64 << a.len() };
                    let b_masks = if signs.len() == 1 { 1 } else { 1u64 << b.len() };
                    for ma in 0..a_masks {
                        for mb in 0..b_masks {
                            let lhs = x.add(&signed_indicator(a, ma, 1.0));
                            let rhs = x.add(&signed_indicator(b, mb, 1.0));
                            if let Some(v) = run(compare_pair(norm, x, lhs, rhs)?) {
                                return Ok((count, Some(v)));
                            }
                        }
                    }
                }
            }
        }
        SymmetryVariant::AlmostGreedy => {
            for g in greedy_supports(x, 1)? {
                for j in (1..=window).filter(|&j| n.contains(j)) {
                    let lhs = project_out(x, &g);
                    let rhs = project_out(x, &[j]);
                    if let Some(v) = run(compare_pair(norm, x, lhs, rhs)?) {
                        return Ok((count, Some(v)));
                    }
                }
            }
        }
    }
    Ok((count, None))
}

/// Checks the variant's inequality on every admissible instance built from
/// the sample library; the first violation in library order is reported.
pub fn check_unit_symmetry(
    norm: &NormSpec,
    n: &IndexSequence,
    variant: SymmetryVariant,
    cfg: &SampleConfig,
) -> Result<SymmetryReport> {
    let per_support = (2 * cfg.levels.len() as u128).saturating_pow(cfg.exhaustive_support as u32);
    guard(count_subsets_upto(cfg.window, cfg.exhaustive_support).saturating_mul(per_support) + cfg.random_count as u128)?;
    let library = cfg.library();
    let results: Vec<(usize, Option<SymmetryViolation>)> =
        library.par_iter().map(|x| check_vector(norm, n, variant, cfg.window, x)).collect::<Result<_>>()?;
    let instances = results.iter().map(|r| r.0).sum();
    let counterexample = results.into_iter().find_map(|r| r.1);
    Ok(SymmetryReport { variant, pass: counterexample.is_none(), instances, counterexample })
}

// ---------------------------------------------------------------------------
// Divergence tables

/// Indexed families `(D_N, E_N)` whose indicator ratio should grow with `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceFamily {
    /// `D` = the first `N` indices off `n`, `E` = the `N` elements of `n`
    /// following `max D`.
    OffNVersusN,
    /// `D` = `N` elements of `n` after `n_{N²}`, `E` = the first `N` of `n`.
    LateVersusEarly,
}

impl DivergenceFamily {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "off_n_versus_n" => Ok(Self::OffNVersusN),
            "late_versus_early" => Ok(Self::LateVersusEarly),
            _ => Err(LabError::Parse(format!("unknown divergence family `{s}`"))),
        }
    }

    pub fn sets(self, n: &IndexSequence, size: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        match self {
            Self::OffNVersusN => {
                let d: Vec<usize> = (1..).filter(|&i| !n.contains(i)).take(size).collect();
                let after = d.last().map_or(0, |&top| n.count_below(top + 1));
                Ok((d, n.positions(after + 1, after + size)?))
            }
            Self::LateVersusEarly => Ok((n.positions(size * size + 1, size * size + size)?, n.prefix(size)?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub size: usize,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub family: DivergenceFamily,
    pub rows: Vec<DivergenceRow>,
    /// Ratio at the largest size over ratio at the smallest.
    pub growth: f64,
    /// `growth ≥ 2`: a desk-scale growth trend, not a limit claim.
    pub growing: bool,
}

/// Table of `‖1_{D_N}‖ / ‖1_{E_N}‖` over `sizes`.
pub fn divergence_report(
    norm: &NormSpec,
    n: &IndexSequence,
    family: DivergenceFamily,
    sizes: &[usize],
) -> Result<DivergenceReport> {
    let rows: Vec<DivergenceRow> = sizes
        .par_iter()
        .map(|&size| {
            let (d, e) = family.sets(n, size)?;
            let numerator = norm.value(&indicator(&d, None)?)?;
            let denominator = norm.value(&indicator(&e, None)?)?;
            Ok(DivergenceRow { size, numerator, denominator, ratio: numerator / denominator })
        })
        .collect::<Result<_>>()?;
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return Err(LabError::Config("divergence report needs at least one size".into()));
    };
    let growth = last.ratio / first.ratio;
    Ok(DivergenceReport { family, growth, growing: growth >= 2.0, rows })
}

// ---------------------------------------------------------------------------
// Projection constants

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    /// Lower bound for `sup_m ‖P x‖ / ‖x‖` over the library.
    pub value: f64,
    pub witness: Option<ParamWitness>,
    pub library_size: usize,
}

/// `max_m ‖P^n_m x‖ / ‖x‖` with the maximizing projection, `m` up to the
/// number of elements of `n` inside the window.
pub fn n_projection_ratio(norm: &NormSpec, n: &IndexSequence, x: &SparseVector, window: usize) -> Result<(f64, SparseVector)> {
    let nx = norm.value(x)?;
    let mut best = (0.0, SparseVector::zero());
    for m in 1..=n.count_below(window + 1) {
        let p = prefix_project(x, n, m)?;
        let r = norm.value(&p)? / nx;
        if r > best.0 {
            best = (r, p);
        }
    }
    Ok(best)
}

/// `max_m ‖P_{[1, m]} x‖ / ‖x‖`.
pub fn prefix_ratio(norm: &NormSpec, x: &SparseVector) -> Result<(f64, SparseVector)> {
    let nx = norm.value(x)?;
    let mut best = (0.0, SparseVector::zero());
    for m in x.support() {
        let p = project(x, &x.support().into_iter().filter(|&i| i <= m).collect::<Vec<_>>());
        let r = norm.value(&p)? / nx;
        if r > best.0 {
            best = (r, p);
        }
    }
    Ok(best)
}

/// Alternating vectors along the norm's summing sequence (when it has one)
/// followed by the seeded random library.
fn projection_library(norm: &NormSpec, window: usize, cfg: &SampleConfig) -> Result<Vec<SparseVector>> {
    let mut out = Vec::new();
    if let Family::Summing(p) = &norm.family {
        let seq = p.sequence.as_ref().unwrap_or(&norm.n);
        let mut len = 2;
        while seq.nth(len).is_some_and(|i| i <= window) {
            out.push(witnesses::alternating(seq, len)?);
            len += 2;
        }
    }
    let sample = SampleConfig { window: window.min(cfg.window.max(window)), ..cfg.clone() };
    out.extend(sample.library().into_iter().filter(|x| !x.is_zero()));
    Ok(out)
}

fn projection_search(
    library: &[SparseVector],
    ratio: impl Fn(&SparseVector) -> Result<(f64, SparseVector)> + Sync,
) -> Result<ProjectionReport> {
    let values: Vec<(f64, SparseVector)> = library.par_iter().map(&ratio).collect::<Result<_>>()?;
    let mut at = None;
    for (i, v) in values.iter().enumerate() {
        if at.is_none_or(|a: usize| v.0 > values[a].0) {
            at = Some(i);
        }
    }
    Ok(ProjectionReport {
        value: at.map_or(0.0, |a| values[a].0),
        witness: at.map(|a| ParamWitness {
            num: values[a].1.clone(),
            den: library[a].clone(),
            coordinate: None,
            factor: None,
            note: "projection over vector".into(),
        }),
        library_size: library.len(),
    })
}

/// Lower bound for the `n`-Schauder constant `sup ‖P^n_m x‖ / ‖x‖`.
pub fn n_schauder_constant(norm: &NormSpec, n: &IndexSequence, window: usize, cfg: &SampleConfig) -> Result<ProjectionReport> {
    let library = projection_library(norm, window, cfg)?;
    projection_search(&library, |x| n_projection_ratio(norm, n, x, window))
}

/// Lower bound for the basis constant `sup ‖P_{[1, m]} x‖ / ‖x‖`.
pub fn prefix_basis_constant(norm: &NormSpec, window: usize, cfg: &SampleConfig) -> Result<ProjectionReport> {
    let library = projection_library(norm, window, cfg)?;
    projection_search(&library, |x| prefix_ratio(norm, x))
}

// ---------------------------------------------------------------------------
// c_0-type growth

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthVerdict {
    Bounded,
    Growing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C0Report {
    /// `(k, max over signs of ‖1_{εA_k}‖)` with `A_k` the first `k` terms.
    pub values: Vec<(usize, f64)>,
    /// `Bounded` when all values lie within 1% of each other. A heuristic.
    pub verdict: GrowthVerdict,
    /// Whether every sign pattern was enumerated at every size.
    pub signs_exhaustive: bool,
}

const EXHAUSTIVE_SIGNS: usize = 16;
const SAMPLED_SIGNS: usize = 4096;

/// `max_ε ‖1_{εA}‖` over the first `k` terms of `subsequence`, for each `k`.
pub fn c0_subsequence_probe(norm: &NormSpec, subsequence: &[usize], sizes: &[usize]) -> Result<C0Report> {
    let mut values = Vec::new();
    let mut exhaustive = true;
    for &k in sizes {
        let set = subsequence
            .get(..k)
            .ok_or_else(|| LabError::Window { window: subsequence.len(), needed: format!("{k} terms") })?;
        let masks: Vec<u64> = if norm.flags.one_unconditional {
            vec![0]
        } else if k <= EXHAUSTIVE_SIGNS {
            (0..1u64 << k.saturating_sub(1)).map(|m| m << 1).collect()
        } else {
            exhaustive = false;
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ k as u64);
            let alternating = (0..k.min(64)).filter(|i| i % 2 == 1).fold(0u64, |m, i| m | 1 << i);
            [0, alternating].into_iter().chain((0..SAMPLED_SIGNS).map(|_| rng.gen::<u64>())).collect()
        };
        let best = masks
            .par_iter()
            .map(|&mask| norm.value(&signed_indicator(set, mask, 1.0)))
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
        values.push((k, best));
    }
    let lo = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let hi = values.iter().map(|v| v.1).fold(0.0, f64::max);
    let verdict = if hi <= 1.01 * lo { GrowthVerdict::Bounded } else { GrowthVerdict::Growing };
    Ok(C0Report { values, verdict, signs_exhaustive: exhaustive })
}

// ---------------------------------------------------------------------------
// Gap profiles

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Bound {
    /// Holds for the whole sequence.
    Exact(f64),
    /// Maximum over the window only.
    WindowMax(f64),
    /// The rule grows without bound.
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapStep {
    /// Position `k` of the step from `s_k` to `s_{k+1}`.
    pub k: usize,
    pub quotient: f64,
    pub difference: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    /// `sup_k s_{k+1} / s_k`.
    pub quotient_bound: Bound,
    /// `max_k (s_{k+1} − s_k)`.
    pub additive_bound: Bound,
    /// Every consecutive step inside the window.
    pub steps: Vec<GapStep>,
}

impl GapProfile {
    pub fn step(&self, k: usize) -> Option<&GapStep> {
        self.steps.iter().find(|s| s.k == k)
    }
}

/// Quotient and additive gaps of `s` inside `[1, window]`. Arithmetic rules
/// have exact bounds (the quotient is largest at `k = 1`); powers of two have
/// quotient exactly 2 and unbounded additive gaps. Everything else reports
/// the window maxima.
pub fn gap_classifier(s: &IndexSequence, window: usize) -> Result<GapProfile> {
    let elems = s.elements_upto(window);
    if elems.len() < 2 {
        return Err(LabError::Window { window, needed: "two elements of s".into() });
    }
    let steps: Vec<GapStep> = elems
        .windows(2)
        .enumerate()
        .map(|(i, w)| GapStep { k: i + 1, quotient: w[1] as f64 / w[0] as f64, difference: w[1] - w[0] })
        .collect();
    let q_max = steps.iter().map(|s| s.quotient).fold(0.0, f64::max);
    let d_max = steps.iter().map(|s| s.difference).max().unwrap_or(0) as f64;
    let (quotient_bound, additive_bound) = match s.spec() {
        SequenceSpec::Arithmetic { first, step } => {
            (Bound::Exact((first + step) as f64 / *first as f64), Bound::Exact(*step as f64))
        }
        SequenceSpec::Predicate { name, .. } if name == "powers_of_two" => (Bound::Exact(2.0), Bound::Unbounded),
        _ => (Bound::WindowMax(q_max), Bound::WindowMax(d_max)),
    };
    Ok(GapProfile { quotient_bound, additive_bound, steps })
}

// ---------------------------------------------------------------------------
// Right-skewness

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightSkewRow {
    pub a: Vec<usize>,
    /// The best `B > A` with `|B| = |A|`.
    pub b: Vec<usize>,
    /// `‖1_B‖ / ‖1_A‖`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightSkewReport {
    pub rows: Vec<RightSkewRow>,
    /// `max_A min_B ‖1_B‖ / ‖1_A‖`.
    pub worst: f64,
    pub pass: bool,
}

/// For every nonempty `A ⊂ [1, window/2]` with `|A| ≤ size_cap`, the
/// smallest `‖1_B‖ / ‖1_A‖` over `B ⊂ (max A, window]`, `|B| = |A|`.
pub fn right_skewed_probe(norm: &NormSpec, window: usize, size_cap: usize, c_target: f64) -> Result<RightSkewReport> {
    let half = window / 2;
    if window - half < size_cap || size_cap == 0 {
        return Err(LabError::Window { window, needed: format!("room for {size_cap} indices to the right") });
    }
    let left: Vec<usize> = (1..=half).collect();
    guard(count_subsets_upto(half, size_cap) * count_subsets_upto(window, size_cap))?;
    let a_sets: Vec<Vec<usize>> = subsets_upto(&left, size_cap).into_iter().filter(|a| !a.is_empty()).collect();
    let mut cache: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for set in subsets_upto(&(1..=window).collect::<Vec<_>>(), size_cap) {
        if !set.is_empty() {
            let v = norm.value(&indicator(&set, None)?)?;
            cache.insert(set, v);
        }
    }
    let rows: Vec<RightSkewRow> = a_sets
        .into_par_iter()
        .map(|a| {
            let top = *a.last().expect("nonempty");
            let na = cache[&a];
            let mut best: Option<(f64, &Vec<usize>)> = None;
            for (b, nb) in cache.range(vec![top + 1]..) {
                if b.len() == a.len() && best.is_none_or(|x| nb / na < x.0) {
                    best = Some((nb / na, b));
                }
            }
            let (ratio, b) = best.expect("the window leaves room for B");
            RightSkewRow { a, b: b.clone(), ratio }
        })
        .collect();
    let worst = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(RightSkewReport { pass: worst <= c_target * (1.0 + TOL), worst, rows })
}
