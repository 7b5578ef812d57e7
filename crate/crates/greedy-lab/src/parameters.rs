//! Greedy-type constants: set-pair ratios (`sc`, conservative and democratic
//! constants), the shifted ratio `ω`, the Lebesgue-type constant `L̂`, the
//! quasi-greedy constants and coordinate functional norms.
//!
//! Set-pair suprema are enumerated exhaustively on a window and are exact
//! there. Everything quantified over all vectors is a lower bound certified
//! by a witness from a structured library.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::greedy::{greedy_supports, sigma_hat};
use crate::norms::{Family, NormSpec};
use crate::pairs::{class_holds, count_subsets_upto, guard, subsets_upto, PairClass, PairContext, SetFeatures};
use crate::sequence::IndexSequence;
use crate::vector::{indicator, project, project_out, signed_indicator, SparseVector};
use crate::witnesses::{self, ShiftedPair};

/// Relative tolerance for comparing norm values.
pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    ExactEnumeration,
    LowerBoundWitness,
    ClosedForm,
}

impl ReportKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::ExactEnumeration => "exact_enumeration",
            Self::LowerBoundWitness => "lower_bound_witness",
            Self::ClosedForm => "closed_form",
        }
    }

    pub fn is_exact(self) -> bool {
        self != Self::LowerBoundWitness
    }
}

/// Re-evaluable evidence for a reported value:
/// `(coordinate ? |num_k| : ‖num‖) / ‖den‖ · (factor ? ‖factor‖ : 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamWitness {
    pub num: SparseVector,
    pub den: SparseVector,
    pub coordinate: Option<usize>,
    pub factor: Option<SparseVector>,
    pub note: String,
}

impl ParamWitness {
    fn ratio(num: SparseVector, den: SparseVector, note: String) -> Self {
        Self { num, den, coordinate: None, factor: None, note }
    }

    pub fn evaluate(&self, norm: &NormSpec) -> Result<f64> {
        let num = match self.coordinate {
            Some(k) => self.num.get(k).abs(),
            None => norm.value(&self.num)?,
        };
        let factor = match &self.factor {
            Some(f) => norm.value(f)?,
            None => 1.0,
        };
        Ok(num / norm.value(&self.den)? * factor)
    }

    /// One-line form: `num=<lit>;den=<lit>[;coord=k][;factor=<lit>]`.
    pub fn digest(&self) -> String {
        let mut s = format!("num={};den={}", self.num.literal(), self.den.literal());
        if let Some(k) = self.coordinate {
            s.push_str(&format!(";coord={k}"));
        }
        if let Some(f) = &self.factor {
            s.push_str(&format!(";factor={}", f.literal()));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterReport {
    pub parameter: String,
    pub m: Option<usize>,
    pub value: f64,
    pub kind: ReportKind,
    pub witness: Option<ParamWitness>,
    pub norm_id: String,
    pub n_id: String,
    pub notes: Vec<String>,
}

impl ParameterReport {
    fn new(parameter: &str, m: Option<usize>, norm: &NormSpec, n: &IndexSequence) -> Self {
        Self {
            parameter: parameter.into(),
            m,
            value: 0.0,
            kind: ReportKind::LowerBoundWitness,
            witness: None,
            norm_id: norm.id.clone(),
            n_id: n.label(),
            notes: Vec::new(),
        }
    }

    /// Recomputes the value from the witness.
    pub fn reevaluate(&self, norm: &NormSpec) -> Result<Option<f64>> {
        self.witness.as_ref().map(|w| w.evaluate(norm)).transpose()
    }
}

/// Parallel arg-max with ties broken towards the lowest index, so the result
/// does not depend on scheduling. `f` returns `None` for skipped items.
fn par_argmax<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Option<f64>> + Sync) -> Result<Option<(f64, usize)>> {
    let pick = |a: Option<(f64, usize)>, b: Option<(f64, usize)>| match (a, b) {
        (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    };
    items
        .par_iter()
        .enumerate()
        .map(|(i, item)| Ok(f(item)?.filter(|v| !v.is_nan()).map(|v| (v, i))))
        .try_reduce(|| None, |a, b| Ok(pick(a, b)))
}

// ---------------------------------------------------------------------------
// Coordinate functionals and κ

#[derive(Clone, Debug)]
pub struct DualConfig {
    /// Other coordinates are drawn from `[k − radius, k + radius]`.
    pub radius: usize,
    pub max_support: usize,
}

impl Default for DualConfig {
    fn default() -> Self {
        Self { radius: 6, max_support: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct DualReport {
    pub search: ParameterReport,
    pub closed_form: Option<ParameterReport>,
}

fn summing_sequence(norm: &NormSpec) -> Option<&IndexSequence> {
    match &norm.family {
        Family::Summing(p) => Some(p.sequence.as_ref().unwrap_or(&norm.n)),
        _ => None,
    }
}

/// Lower bound for `‖e*_k‖ = sup |x_k| / ‖x‖` over `±1` combinations on small
/// supports around `k`, plus `−e_{n_{s−1}} + 2e_{n_s}` when `k = n_s`.
pub fn dual_coordinate_norm(norm: &NormSpec, k: usize, cfg: &DualConfig) -> Result<DualReport> {
    let limit = norm.window().unwrap_or(usize::MAX);
    if k == 0 || k > limit {
        return Err(LabError::Window { window: limit, needed: format!("coordinate {k}") });
    }
    let others: Vec<usize> =
        (k.saturating_sub(cfg.radius).max(1)..=k.saturating_add(cfg.radius).min(limit)).filter(|&i| i != k).collect();
    let mut library = Vec::new();
    for s in subsets_upto(&others, cfg.max_support.saturating_sub(1)) {
        for mask in 0..1u64 << s.len() {
            let mut x = signed_indicator(&s, mask, 1.0);
            x.set(k, 1.0)?;
            library.push(x);
        }
    }
    let seq = summing_sequence(norm).unwrap_or(&norm.n);
    if let Some(s) = seq.index_of(k).filter(|&s| s > 1) {
        library.push(witnesses::summing_dual(seq, s, 2.0)?);
    }
    let (value, at) = par_argmax(&library, |x| Ok(Some(x.get(k).abs() / norm.value(x)?)))?.expect("nonempty library");
    let mut search = ParameterReport::new("dual", Some(k), norm, &norm.n);
    search.value = value;
    search.witness = Some(ParamWitness {
        num: library[at].clone(),
        den: library[at].clone(),
        coordinate: Some(k),
        factor: None,
        note: format!("coordinate {k}"),
    });
    if norm.flags.one_unconditional {
        search.kind = ReportKind::ExactEnumeration;
        search.notes.push("exact: 1-unconditional, so |x_k|·‖e_k‖ ≤ ‖x‖ with equality at e_k".into());
    }
    let closed_form = summing_sequence(norm).map(|seq| {
        let pos = seq.index_of(k);
        let (value, den) = match pos {
            Some(s) if s > 1 => (2.0, witnesses::summing_dual(seq, s, 2.0).expect("s > 1")),
            _ => (1.0, SparseVector::unit(k)),
        };
        let mut r = ParameterReport::new("dual", Some(k), norm, &norm.n);
        r.value = value;
        r.kind = ReportKind::ClosedForm;
        r.witness = Some(ParamWitness {
            num: den.clone(),
            den,
            coordinate: Some(k),
            factor: None,
            note: "1 off n and at n_1, 2 at n_s for s > 1".into(),
        });
        r
    });
    Ok(DualReport { search, closed_form })
}

/// `κ = sup_{j,k} ‖e_j‖·‖e*_k‖` over `j, k ≤ window`.
pub fn kappa(norm: &NormSpec, window: usize, cfg: &DualConfig) -> Result<ParameterReport> {
    let top = window.min(norm.window().unwrap_or(usize::MAX));
    let units: Vec<usize> = (1..=top).collect();
    let (basis_max, j) =
        par_argmax(&units, |&j| Ok(Some(norm.value(&SparseVector::unit(j))?)))?.ok_or(LabError::Window {
            window,
            needed: "at least one coordinate".into(),
        })?;
    let duals: Vec<DualReport> = units.iter().map(|&k| dual_coordinate_norm(norm, k, cfg)).collect::<Result<_>>()?;
    let best = |d: &DualReport| d.closed_form.as_ref().unwrap_or(&d.search).value;
    let mut at = 0;
    for (i, d) in duals.iter().enumerate() {
        if best(d) > best(&duals[at]) {
            at = i;
        }
    }
    let dual = duals[at].closed_form.clone().unwrap_or_else(|| duals[at].search.clone());
    let mut r = ParameterReport::new("kappa", None, norm, &norm.n);
    r.value = basis_max * dual.value;
    r.kind = dual.kind;
    let mut w = dual.witness.expect("dual reports carry witnesses");
    w.factor = Some(SparseVector::unit(units[j]));
    w.note = format!("‖e_{}‖ · ‖e*_{}‖", units[j], units[at]);
    r.witness = Some(w);
    if !r.kind.is_exact() {
        r.notes.push("κ is a lower bound: no closed form for the coordinate functionals".into());
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Set-pair ratios

struct SetEntry {
    set: Vec<usize>,
    features: SetFeatures,
    value: f64,
    mask: u64,
}

fn extreme_indicator(norm: &NormSpec, set: &[usize], signs: bool, maximize: bool) -> Result<(f64, u64)> {
    if !signs || set.len() <= 1 {
        return Ok((norm.value(&indicator(set, None)?)?, 0));
    }
    // Norms are even, so the first sign can be fixed to +1.
    let mut best = (norm.value(&indicator(set, None)?)?, 0);
    for half in 1..1u64 << (set.len() - 1) {
        let mask = half << 1;
        let v = norm.value(&signed_indicator(set, mask, 1.0))?;
        if (maximize && v > best.0) || (!maximize && v < best.0) {
            best = (v, mask);
        }
    }
    Ok(best)
}

fn entries(
    norm: &NormSpec,
    sets: Vec<Vec<usize>>,
    ctx: &PairContext<'_>,
    signs: bool,
    maximize: bool,
) -> Result<Vec<SetEntry>> {
    sets.into_par_iter()
        .map(|set| {
            let (value, mask) = extreme_indicator(norm, &set, signs, maximize)?;
            Ok(SetEntry { features: SetFeatures::of(&set, ctx), set, value, mask })
        })
        .collect()
}

/// Exact `max ‖1_{εA}‖ / ‖1_{δB}‖` over `A ∈ a_sets`, nonempty `B ∈ b_sets`
/// with `(A, B)` in `class`.
fn set_pair_search(
    norm: &NormSpec,
    ctx: &PairContext<'_>,
    a_sets: Vec<Vec<usize>>,
    b_sets: Vec<Vec<usize>>,
    class: PairClass,
    signs: bool,
) -> Result<Option<(f64, ParamWitness)>> {
    let signs = signs && !norm.flags.one_unconditional;
    let sign_work = |sets: &[Vec<usize>]| -> u128 {
        sets.iter().map(|s| if signs { 1u128 << s.len().saturating_sub(1) } else { 1 }).sum()
    };
    guard(a_sets.len() as u128 * b_sets.len() as u128)?;
    guard(sign_work(&a_sets) + sign_work(&b_sets))?;
    let a = entries(norm, a_sets, ctx, signs, true)?;
    let b = entries(norm, b_sets.into_iter().filter(|s| !s.is_empty()).collect(), ctx, signs, false)?;
    let best = par_argmax(&a, |ea| {
        let mut best: Option<f64> = None;
        for eb in &b {
            if class_holds(&ea.features, &eb.features, class, ctx) {
                let r = ea.value / eb.value;
                if best.is_none_or(|v| r > v) {
                    best = Some(r);
                }
            }
        }
        Ok(best)
    })?;
    let Some((value, ai)) = best else { return Ok(None) };
    let ea = &a[ai];
    let eb = b
        .iter()
        .find(|eb| class_holds(&ea.features, &eb.features, class, ctx) && ea.value / eb.value == value)
        .expect("maximizer exists");
    let w = ParamWitness::ratio(
        signed_indicator(&ea.set, ea.mask, 1.0),
        signed_indicator(&eb.set, eb.mask, 1.0),
        format!("A = {:?}, B = {:?}", ea.set, eb.set),
    );
    Ok(Some((value, w)))
}

/// `sup ‖1_{εA}‖ / ‖1_{δB}‖` over the pairs of `class` inside `[1, window]`
/// with `|A|, |B| ≤ cap`; exact on the window. Pairs with `B = ∅` are skipped.
pub fn conservative_constant(
    norm: &NormSpec,
    ctx: PairContext<'_>,
    window: usize,
    cap: usize,
    class: PairClass,
    signs: bool,
) -> Result<ParameterReport> {
    let universe: Vec<usize> = (1..=window).collect();
    let in_n: Vec<usize> = universe.iter().copied().filter(|&i| ctx.n.contains(i)).collect();
    guard(count_subsets_upto(in_n.len(), cap) * count_subsets_upto(window, cap))?;
    let found =
        set_pair_search(norm, &ctx, subsets_upto(&in_n, cap), subsets_upto(&universe, cap), class, signs)?;
    let name = match class {
        PairClass::Sn => "democratic",
        _ => "conservative",
    };
    let mut r = ParameterReport::new(name, None, norm, ctx.n);
    r.kind = ReportKind::ExactEnumeration;
    r.notes.push(format!("class {}, window [1,{window}], cap {cap}, signs {}", class.name(), if signs { "on" } else { "off" }));
    r.notes.push("pairs with B empty skipped".into());
    if let Some((v, w)) = found {
        r.value = v;
        r.witness = Some(w);
    } else {
        r.notes.push("no admissible pair with B nonempty".into());
    }
    Ok(r)
}

/// `sc^n_m = sup ‖1_{εA}‖ / ‖1_{δB}‖` over `T_n` pairs with
/// `|A| ≤ |B| ≤ m` and `max A ≤ n_m`, enumerated inside `[1, window]`.
pub fn sc_parameter(norm: &NormSpec, n: &IndexSequence, m: usize, window: usize) -> Result<ParameterReport> {
    let prefix = n.prefix(m)?;
    if prefix.last().is_some_and(|&last| last > window) {
        return Err(LabError::Window { window, needed: format!("n_{m} inside the window") });
    }
    guard(count_subsets_upto(m, m) * count_subsets_upto(window, m))?;
    let universe: Vec<usize> = (1..=window).collect();
    let ctx = PairContext::new(n);
    let found = set_pair_search(norm, &ctx, subsets_upto(&prefix, m), subsets_upto(&universe, m), PairClass::Tn, true)?;
    let mut r = ParameterReport::new("sc", Some(m), norm, n);
    r.kind = ReportKind::ExactEnumeration;
    r.notes.push(format!("window [1,{window}]"));
    match found {
        Some((v, w)) => {
            r.value = v;
            r.witness = Some(w);
        }
        None => r.notes.push("no admissible pair".into()),
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Shifted ratio ω and the Lebesgue-type constant L̂

/// Structured search libraries for the vector-quantified constants.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Library sets live in `[1, window]`.
    pub window: usize,
    /// Maximum size of each library set.
    pub cap: usize,
    /// Coefficient levels of the secondary sets in the greedy library.
    pub levels: Vec<f64>,
    /// Levels `c` of the background vector `c·1_{δC}` in the shifted library.
    pub shift_levels: Vec<f64>,
    /// Perturbation used by explicit witnesses.
    pub eta: f64,
    /// Include the explicit per-norm witnesses.
    pub explicit_witnesses: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            window: 7,
            cap: 2,
            levels: vec![1.0 - 1e-6, 1.0, 0.5, 0.25],
            shift_levels: vec![0.25, 0.5, 1.0],
            eta: 1e-6,
            explicit_witnesses: true,
        }
    }
}

fn sign_choices(norm: &NormSpec) -> &'static [f64] {
    if norm.flags.one_unconditional {
        &[1.0]
    } else {
        &[1.0, -1.0]
    }
}

/// Checks every constraint of the shifted ratio at order `m`:
/// `‖x‖_∞ ≤ 1`, unit coefficients on `A` and `B`, `A ⊂ n`, `max A ≤ n_m`,
/// `|A| ≤ |B| ≤ m`, `A`, `B`, `supp x` disjoint and `A < (supp x ⊔ B) ∩ n`.
pub fn validate_shifted(w: &ShiftedPair, n: &IndexSequence, m: usize) -> Result<()> {
    let fail = |msg: &str| Err(LabError::InvalidWitness(msg.into()));
    let (a, b) = (w.a.support(), w.b.support());
    if w.x.sup_norm() > 1.0 {
        return fail("‖x‖_∞ exceeds 1");
    }
    if w.a.iter().chain(w.b.iter()).any(|(_, c)| c.abs() != 1.0) {
        return fail("A and B must carry unit coefficients");
    }
    if !a.iter().all(|&i| n.contains(i)) {
        return fail("A is not inside n");
    }
    if a.len() > b.len() || b.len() > m {
        return fail("sizes must satisfy |A| ≤ |B| ≤ m");
    }
    if let Some(&top) = a.last() {
        if n.nth(m).is_none_or(|nm| top > nm) {
            return fail("max A exceeds n_m");
        }
        if w.x.support().iter().chain(&b).any(|&i| n.contains(i) && i <= top) {
            return fail("A is not to the left of (supp x ⊔ B) ∩ n");
        }
    }
    if a.iter().any(|i| b.contains(i) || w.x.contains(*i)) || b.iter().any(|&i| w.x.contains(i)) {
        return fail("A, B and supp x must be disjoint");
    }
    Ok(())
}

fn shifted_ratio(norm: &NormSpec, w: &ShiftedPair) -> Result<f64> {
    Ok(norm.value(&w.x.add(&w.a))? / norm.value(&w.x.add(&w.b))?)
}

fn shifted_library(norm: &NormSpec, n: &IndexSequence, m: usize, cfg: &SearchConfig) -> Result<Vec<ShiftedPair>> {
    let universe: Vec<usize> = (1..=cfg.window).collect();
    let prefix: Vec<usize> = n.prefix(m)?.into_iter().filter(|&i| i <= cfg.window).collect();
    let signs = sign_choices(norm);
    guard(
        count_subsets_upto(prefix.len(), m)
            * count_subsets_upto(cfg.window, m)
            * count_subsets_upto(cfg.window, cfg.cap)
            * (cfg.shift_levels.len() * 4) as u128,
    )?;
    let mut out = Vec::new();
    for a in subsets_upto(&prefix, m) {
        let top = a.last().copied().unwrap_or(0);
        let right_of_a = |i: &usize| !a.contains(i) && (!n.contains(*i) || *i > top);
        let free: Vec<usize> = universe.iter().copied().filter(right_of_a).collect();
        for b in subsets_upto(&free, m).into_iter().filter(|b| b.len() >= a.len().max(1)) {
            let rest: Vec<usize> = free.iter().copied().filter(|i| !b.contains(i)).collect();
            for c in subsets_upto(&rest, cfg.cap) {
                let levels: &[f64] = if c.is_empty() { &[1.0] } else { &cfg.shift_levels };
                let c_signs: &[f64] = if c.is_empty() { &[1.0] } else { signs };
                for &level in levels {
                    for &sc in c_signs {
                        for &sb in signs {
                            out.push(ShiftedPair {
                                x: indicator(&c, None)?.scale(level * sc),
                                a: indicator(&a, None)?,
                                b: indicator(&b, None)?.scale(sb),
                            });
                        }
                    }
                }
            }
        }
    }
    if cfg.explicit_witnesses {
        let explicit = match &norm.family {
            Family::Summing(p) if p.sequence.is_none() => Some(witnesses::summing_shifted(n, m)?),
            Family::SplitL1Sup(_) if m >= 1 => Some(witnesses::split_shifted(n, m.div_ceil(2).max(1))?),
            _ => None,
        };
        if let Some(w) = explicit {
            validate_shifted(&w, n, m)?;
            out.push(w);
        }
    }
    Ok(out)
}

fn greedy_library(norm: &NormSpec, n: &IndexSequence, m: usize, cfg: &SearchConfig) -> Result<Vec<SparseVector>> {
    let universe: Vec<usize> = (1..=cfg.window).collect();
    let signs = sign_choices(norm);
    let per_set = count_subsets_upto(cfg.window, cfg.cap);
    let choices = (cfg.levels.len() * signs.len()) as u128 + 1;
    guard(per_set.saturating_pow(3).saturating_mul(choices * choices))?;
    let mut out = Vec::new();
    for a in subsets_upto(&universe, cfg.cap).into_iter().filter(|a| !a.is_empty()) {
        let rest: Vec<usize> = universe.iter().copied().filter(|i| !a.contains(i)).collect();
        let base = indicator(&a, None)?;
        for b in subsets_upto(&rest, cfg.cap) {
            let rest_c: Vec<usize> = rest.iter().copied().filter(|i| !b.contains(i)).collect();
            let b_opts: Vec<SparseVector> = if b.is_empty() {
                vec![SparseVector::zero()]
            } else {
                let one = indicator(&b, None)?;
                cfg.levels.iter().flat_map(|&l| signs.iter().map(move |&s| (l, s))).map(|(l, s)| one.scale(l * s)).collect()
            };
            for c in subsets_upto(&rest_c, cfg.cap) {
                let c_opts: Vec<SparseVector> = if c.is_empty() {
                    vec![SparseVector::zero()]
                } else {
                    let one = indicator(&c, None)?;
                    cfg.levels.iter().flat_map(|&l| signs.iter().map(move |&s| (l, s))).map(|(l, s)| one.scale(l * s)).collect()
                };
                for vb in &b_opts {
                    for vc in &c_opts {
                        out.push(base.add(vb).add(vc));
                    }
                }
            }
        }
    }
    if cfg.explicit_witnesses {
        if let Family::SplitL1Sup(_) = norm.family {
            if m >= 1 {
                out.push(witnesses::split_lebesgue(n, m.div_ceil(2), cfg.eta)?);
            }
        }
    }
    Ok(out)
}

/// `γ_m(y) / σ̂^n_m(y)` with the greedy set and prefix attaining it; `None`
/// when `σ̂ = 0`.
fn lebesgue_ratio(norm: &NormSpec, n: &IndexSequence, m: usize, y: &SparseVector) -> Result<Option<(f64, Vec<usize>, usize)>> {
    let (sh, k) = sigma_hat(y, norm, n, m)?;
    if sh == 0.0 {
        return Ok(None);
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for g in greedy_supports(y, m)? {
        let v = norm.value(&project_out(y, &g))?;
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, g));
        }
    }
    let (g, set) = best.expect("at least one greedy set");
    Ok(Some((g / sh, set, k)))
}

/// Shifted witness → greedy witness: `y = 1_{εA} + 1_D + x + 1_{δB}` with
/// `D = {n_1..n_s} ∖ A`, `n_s = max A`. Then `D ∪ B` is greedy for `y` and
/// removing `{n_1..n_s}` leaves `x + 1_{δB}`.
fn shifted_to_greedy(w: &ShiftedPair, n: &IndexSequence) -> Result<SparseVector> {
    let s = w.a.max_index().and_then(|top| n.index_of(top)).unwrap_or(0);
    let d: Vec<usize> = n.prefix(s)?.into_iter().filter(|&i| !w.a.contains(i)).collect();
    Ok(w.a.add(&indicator(&d, None)?).add(&w.x).add(&w.b))
}

/// Greedy witness → shifted witness. With `G` the greedy set, `k` the best
/// prefix and `α = min_G |y|`, take `z = (y − P_G y)/α`, `A = {n_1..n_k} ∖ G`,
/// `B = G ∖ {n_1..n_k}` carrying the signs of `y`, and choose the signs on
/// `A` maximizing the numerator. At order 1 the shifted ratio is at least the
/// greedy ratio.
fn greedy_to_shifted(
    norm: &NormSpec,
    n: &IndexSequence,
    m: usize,
    y: &SparseVector,
    g: &[usize],
    k: usize,
) -> Result<Option<ShiftedPair>> {
    let alpha = g.iter().map(|&i| y.get(i).abs()).fold(f64::INFINITY, f64::min);
    if g.is_empty() || alpha == 0.0 {
        return Ok(None);
    }
    let prefix = n.prefix(k)?;
    let e: Vec<usize> = prefix.iter().copied().filter(|i| !g.contains(i)).collect();
    let f: Vec<usize> = g.iter().copied().filter(|i| !prefix.contains(i)).collect();
    if e.len() > f.len() {
        return Ok(None);
    }
    let z = project_out(y, g).scale(1.0 / alpha);
    let x = project_out(&z, &e);
    let b = SparseVector::from_pairs(f.iter().map(|&i| (i, y.get(i).signum())))?;
    let mut best: Option<(f64, ShiftedPair)> = None;
    for mask in 0..1u64 << e.len() {
        let cand = ShiftedPair { x: x.clone(), a: signed_indicator(&e, mask, 1.0), b: b.clone() };
        let v = norm.value(&cand.x.add(&cand.a))?;
        if best.as_ref().is_none_or(|bst| v > bst.0) {
            best = Some((v, cand));
        }
    }
    let w = best.expect("at least one sign choice").1;
    Ok(validate_shifted(&w, n, m).is_ok().then_some(w))
}

struct SharedSearch {
    omega: (f64, ShiftedPair),
    lebesgue: Option<(f64, SparseVector, Vec<usize>, usize)>,
}

/// Searches both libraries and then feeds each side's best witness through
/// the transfer to the other until neither improves. On the resulting shared
/// library the order-1 values coincide.
fn shared_search(norm: &NormSpec, n: &IndexSequence, m: usize, cfg: &SearchConfig) -> Result<SharedSearch> {
    let shifted = shifted_library(norm, n, m, cfg)?;
    let greedy = greedy_library(norm, n, m, cfg)?;
    guard((shifted.len() + greedy.len() * (m + 2)) as u128)?;
    let (wv, wi) = par_argmax(&shifted, |w| shifted_ratio(norm, w).map(Some))?.ok_or(LabError::Window {
        window: cfg.window,
        needed: "at least one shifted witness".into(),
    })?;
    let mut omega = (wv, shifted[wi].clone());
    let mut lebesgue = match par_argmax(&greedy, |y| Ok(lebesgue_ratio(norm, n, m, y)?.map(|r| r.0)))? {
        Some((_, i)) => {
            let (v, g, k) = lebesgue_ratio(norm, n, m, &greedy[i])?.expect("ratio defined");
            Some((v, greedy[i].clone(), g, k))
        }
        None => None,
    };
    for _ in 0..16 {
        let mut changed = false;
        let y = shifted_to_greedy(&omega.1, n)?;
        if let Some((v, g, k)) = lebesgue_ratio(norm, n, m, &y)? {
            if lebesgue.as_ref().is_none_or(|l| v > l.0) {
                lebesgue = Some((v, y, g, k));
                changed = true;
            }
        }
        if let Some((_, y, g, k)) = &lebesgue {
            if let Some(w) = greedy_to_shifted(norm, n, m, y, g, *k)? {
                let v = shifted_ratio(norm, &w)?;
                if v > omega.0 {
                    omega = (v, w);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(SharedSearch { omega, lebesgue })
}

#[derive(Clone, Debug)]
pub struct OmegaReport {
    pub omega: ParameterReport,
    /// The same supremum written as `‖y‖ / ‖y − P_A y + 1_{εB}‖`.
    pub omega_hat: ParameterReport,
}

/// Lower bound for `ω^n_m = sup ‖x + 1_{εA}‖ / ‖x + 1_{δB}‖`.
pub fn omega_parameter(norm: &NormSpec, n: &IndexSequence, m: usize, cfg: &SearchConfig) -> Result<OmegaReport> {
    let (value, w) = shared_search(norm, n, m, cfg)?.omega;
    let a_set = w.a.support();
    let mut omega = ParameterReport::new("omega", Some(m), norm, n);
    omega.value = value;
    omega.witness = Some(ParamWitness::ratio(
        w.x.add(&w.a),
        w.x.add(&w.b),
        format!("x = {}, A = {:?}, B = {:?}", w.x, a_set, w.b.support()),
    ));
    let y = w.x.add(&w.a);
    let den = project_out(&y, &a_set).add(&w.b);
    let mut omega_hat = ParameterReport::new("omega_hat", Some(m), norm, n);
    omega_hat.value = norm.value(&y)? / norm.value(&den)?;
    omega_hat.witness = Some(ParamWitness::ratio(y, den, format!("A = {:?}, B = {:?}", a_set, w.b.support())));
    Ok(OmegaReport { omega, omega_hat })
}

/// Lower bound for `L̂^n_m`, the best constant in `γ_m(x) ≤ L̂ σ̂^n_m(x)`.
pub fn lebesgue_parameter(norm: &NormSpec, n: &IndexSequence, m: usize, cfg: &SearchConfig) -> Result<ParameterReport> {
    let shared = shared_search(norm, n, m, cfg)?;
    let mut r = ParameterReport::new("lebesgue", Some(m), norm, n);
    match shared.lebesgue {
        Some((v, y, g, k)) => {
            r.value = v;
            let den = project_out(&y, &n.prefix(k)?);
            r.witness = Some(ParamWitness::ratio(
                project_out(&y, &g),
                den,
                format!("x = {y}, greedy set {g:?}, best prefix k = {k}"),
            ));
        }
        None => {
            r.value = 1.0;
            r.notes.push("every library vector has σ̂ = 0".into());
        }
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Quasi-greedy constants

#[derive(Clone, Debug)]
pub struct QuasiGreedyReport {
    /// `sup_{k ≤ m} ‖G_k‖`.
    pub g: ParameterReport,
    /// `sup_{k ≤ m} ‖I − G_k‖`.
    pub gc: ParameterReport,
    /// `sup ‖G_j − G_k‖` over nested greedy sets, `k < j ≤ m`.
    pub gtilde: ParameterReport,
}

pub fn quasi_greedy_parameters(
    norm: &NormSpec,
    n: &IndexSequence,
    m: usize,
    cfg: &SearchConfig,
) -> Result<QuasiGreedyReport> {
    let mut library = greedy_library(norm, n, m, cfg)?;
    if cfg.explicit_witnesses {
        if let Some(seq) = summing_sequence(norm) {
            library.push(witnesses::summing_dual(seq, 2, 2.0)?);
            library.push(witnesses::summing_dual(seq, 2, 1.0 + cfg.eta)?);
        }
    }
    // Per vector: best (value, numerator) for each of the three operators.
    type Best3 = [(f64, SparseVector); 3];
    let eval = |x: &SparseVector| -> Result<Best3> {
        let nx = norm.value(x)?;
        let mut best: Best3 = std::array::from_fn(|_| (0.0, SparseVector::zero()));
        let mut offer = |slot: usize, v: SparseVector| -> Result<()> {
            let r = norm.value(&v)? / nx;
            if r > best[slot].0 {
                best[slot] = (r, v);
            }
            Ok(())
        };
        let levels: Vec<Vec<Vec<usize>>> = (0..=m).map(|k| greedy_supports(x, k)).collect::<Result<_>>()?;
        for sets in &levels {
            for g in sets {
                offer(0, project(x, g))?;
                offer(1, project_out(x, g))?;
            }
        }
        for j in 1..=m {
            for k in 0..j {
                for gj in &levels[j] {
                    for gk in levels[k].iter().filter(|gk| gk.iter().all(|i| gj.contains(i))) {
                        let diff: Vec<usize> = gj.iter().copied().filter(|i| !gk.contains(i)).collect();
                        offer(2, project(x, &diff))?;
                    }
                }
            }
        }
        Ok(best)
    };
    let names = ["g", "gc", "gtilde"];
    let mut reports = Vec::new();
    for (slot, name) in names.iter().enumerate() {
        let (value, at) = par_argmax(&library, |x| Ok(Some(eval(x)?[slot].0)))?.expect("nonempty library");
        let num = eval(&library[at])?[slot].1.clone();
        let mut r = ParameterReport::new(name, Some(m), norm, n);
        r.value = value;
        r.witness = Some(ParamWitness::ratio(num, library[at].clone(), format!("x = {}", library[at])));
        if norm.flags.one_unconditional {
            r.kind = ReportKind::ExactEnumeration;
            r.notes.push("exact: 1-unconditional norms have all three equal to 1".into());
        }
        reports.push(r);
    }
    let gtilde = reports.pop().expect("three reports");
    let gc = reports.pop().expect("three reports");
    let g = reports.pop().expect("three reports");
    Ok(QuasiGreedyReport { g, gc, gtilde })
}

// ---------------------------------------------------------------------------
// Consistency of the Lebesgue-type bounds

#[derive(Clone, Debug)]
pub struct LebesgueIngredients {
    pub m: usize,
    pub lebesgue: ParameterReport,
    pub omega: ParameterReport,
    pub gc: ParameterReport,
    pub gtilde: ParameterReport,
    pub sc: ParameterReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum BoundStatus {
    Holds,
    Violated,
    Unchecked(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub m: usize,
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub status: BoundStatus,
    /// The lower bound meets the ceiling within `1e-5` relative.
    pub tight: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.status != BoundStatus::Violated)
    }

    pub fn check(&self, m: usize, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.m == m && c.name == name)
    }
}

fn compare(m: usize, name: &str, lhs: f64, rhs: f64, proven: std::result::Result<(), String>) -> BoundCheck {
    let status = match proven {
        Err(reason) => BoundStatus::Unchecked(reason),
        Ok(()) if lhs <= rhs * (1.0 + TOL) + TOL => BoundStatus::Holds,
        Ok(()) => BoundStatus::Violated,
    };
    let tight = (lhs - rhs).abs() <= 1e-5 * rhs.abs().max(1.0);
    BoundCheck { m, name: name.into(), lhs, rhs, status, tight }
}

/// Checks every bound that follows from the tags of the ingredients:
/// `L̂_m ≤ 1 + 2κm` (κ exact), `L̂_m ≤ g^c_m + g̃_m·sc_m` (all exact),
/// `ω_m, g^c_m ≤ max_{k ≤ m} ceiling(L̂_k)`, and `L̂_1 = ω_1` on the library.
pub fn verify_lebesgue_bounds(
    kappa: &ParameterReport,
    m_max: usize,
    rows: &[LebesgueIngredients],
) -> Result<BoundsReport> {
    let mut checks = Vec::new();
    let mut ceilings: Vec<Option<f64>> = Vec::new();
    for m in 1..=m_max {
        let row = rows
            .iter()
            .find(|r| r.m == m)
            .ok_or_else(|| LabError::MissingIngredient(format!("ingredients for m = {m}")))?;
        let lower = row.lebesgue.value;
        let kappa_exact = if kappa.kind.is_exact() { Ok(()) } else { Err("κ is a lower bound".to_string()) };
        let a_rhs = 1.0 + 2.0 * kappa.value * m as f64;
        checks.push(compare(m, "lebesgue <= 1 + 2 kappa m", lower, a_rhs, kappa_exact.clone()));
        let b_exact = if row.gc.kind.is_exact() && row.gtilde.kind.is_exact() && row.sc.kind.is_exact() {
            Ok(())
        } else {
            Err("g^c, g~ or sc is only a lower bound".to_string())
        };
        let b_rhs = row.gc.value + row.gtilde.value * row.sc.value;
        checks.push(compare(m, "lebesgue <= gc + gtilde sc", lower, b_rhs, b_exact.clone()));
        let ceiling = [kappa_exact.ok().map(|_| a_rhs), b_exact.ok().map(|_| b_rhs)]
            .into_iter()
            .flatten()
            .reduce(f64::min);
        ceilings.push(ceiling);
        let best: Option<f64> = ceilings.iter().copied().collect::<Option<Vec<f64>>>().map(|v| v.into_iter().fold(0.0, f64::max));
        let proven = best.map(|_| ()).ok_or_else(|| "no ceiling for some k ≤ m".to_string());
        let rhs = best.unwrap_or(f64::INFINITY);
        checks.push(compare(m, "omega <= max_k ceiling(lebesgue_k)", row.omega.value, rhs, proven.clone()));
        checks.push(compare(m, "gc <= max_k ceiling(lebesgue_k)", row.gc.value, rhs, proven));
        if m == 1 {
            let c = compare(1, "lebesgue_1 = omega_1", (lower - row.omega.value).abs(), 0.0, Ok(()));
            checks.push(BoundCheck { lhs: lower, rhs: row.omega.value, tight: c.status == BoundStatus::Holds, ..c });
        }
    }
    Ok(BoundsReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::norm;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL * b.abs().max(1.0)
    }

    #[test]
    fn summing_duals_match_closed_form() {
        let spec = norm("summing").unwrap();
        for k in 1..=16 {
            let d = dual_coordinate_norm(&spec, k, &DualConfig::default()).unwrap();
            let cf = d.closed_form.unwrap();
            assert!(close(d.search.value, cf.value), "k = {k}");
            assert_eq!(cf.value, if k % 2 == 1 || k == 2 { 1.0 } else { 2.0 });
            assert!(close(d.search.reevaluate(&spec).unwrap().unwrap(), d.search.value));
        }
        let l1 = norm("l1").unwrap();
        assert_eq!(dual_coordinate_norm(&l1, 3, &DualConfig::default()).unwrap().search.value, 1.0);
    }

    #[test]
    fn kappa_of_summing_is_two() {
        let spec = norm("summing").unwrap();
        let k = kappa(&spec, 12, &DualConfig::default()).unwrap();
        assert_eq!(k.value, 2.0);
        assert!(k.kind.is_exact());
        assert_eq!(k.reevaluate(&spec).unwrap(), Some(2.0));
    }

    #[test]
    fn split_sc_values() {
        let spec = norm("split").unwrap();
        for (m, expect) in [(1, 1.0), (2, 1.0), (3, 2.0), (4, 2.0)] {
            let r = sc_parameter(&spec, &spec.n, m, 20).unwrap();
            assert!(close(r.value, expect), "m = {m}: {}", r.value);
            assert!(close(r.reevaluate(&spec).unwrap().unwrap(), r.value));
        }
    }

    #[test]
    fn l1_constants_are_one() {
        let l1 = norm("l1").unwrap();
        for m in 1..=3 {
            assert_eq!(sc_parameter(&l1, &l1.n, m, 8).unwrap().value, 1.0);
            assert!(close(lebesgue_parameter(&l1, &l1.n, m, &SearchConfig::default()).unwrap().value, 1.0));
            let q = quasi_greedy_parameters(&l1, &l1.n, m, &SearchConfig::default()).unwrap();
            assert_eq!([q.g.value, q.gc.value, q.gtilde.value], [1.0; 3]);
        }
    }

    #[test]
    fn diagonal_class_gives_one() {
        let l1 = norm("l1").unwrap();
        let n = IndexSequence::naturals();
        let r = conservative_constant(&l1, PairContext::new(&n), 6, 2, PairClass::Tn, true).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn invalid_shifted_witness_is_rejected() {
        let n = IndexSequence::evens();
        let mut w = witnesses::summing_shifted(&n, 1).unwrap();
        assert!(validate_shifted(&w, &n, 1).is_ok());
        w.x.set(2, 0.5).unwrap();
        assert!(validate_shifted(&w, &n, 1).is_err());
        let w = witnesses::summing_shifted(&n, 2).unwrap();
        assert!(validate_shifted(&w, &n, 1).is_err());
    }

    #[test]
    fn summing_g1_reaches_two() {
        let spec = norm("summing").unwrap();
        let q = quasi_greedy_parameters(&spec, &spec.n, 1, &SearchConfig::default()).unwrap();
        assert!(q.g.value >= 2.0 - 2e-6);
        // The perturbed pair −e_{n_1} + (1+η)e_{n_2} alone only gives 1 + η.
        let x = witnesses::summing_dual(&spec.n, 2, 1.0 + 1e-6).unwrap();
        let g1 = spec.value(&project(&x, &[4])).unwrap() / spec.value(&x).unwrap();
        assert!(close(g1, 1.0 + 1e-6));
    }
}
