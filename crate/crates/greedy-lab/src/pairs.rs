//! Admissible set pairs `(A, B)` and their exhaustive enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sequence::IndexSequence;

/// Guard for exhaustive enumerations: estimated work above this is refused.
pub const ENUMERATION_LIMIT: u128 = 100_000_000;

/// A map from finite index sets to `[0, ∞]`, used in place of cardinality.
pub trait SetWeight: Sync {
    fn weight(&self, set: &[usize]) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PairClass {
    /// `A ⊂ n`, `|A| ≤ |B|`, `A < B ∩ n`.
    #[serde(rename = "T_n")]
    Tn,
    /// `A ⊂ n`, `|A| ≤ |B|`.
    #[serde(rename = "S_n")]
    Sn,
    /// `T_n` with some `n_s`, `s ∈ s`, separating: `A ≤ n_s < B ∩ n`.
    #[serde(rename = "T_n_s")]
    Tns,
    /// `A ⊂ n`, `ω(A) ≤ ω(B)`, `A < B ∩ n`.
    #[serde(rename = "T_omega_n")]
    TomegaN,
    /// `T_n` with `(λ − 1)·ι(max A) + |A| ≤ |B|`.
    #[serde(rename = "Lambda")]
    Lambda,
}

impl PairClass {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "T_n" => Ok(Self::Tn),
            "S_n" => Ok(Self::Sn),
            "T_n_s" => Ok(Self::Tns),
            "T_omega_n" => Ok(Self::TomegaN),
            "Lambda" => Ok(Self::Lambda),
            _ => Err(LabError::Parse(format!("unknown pair class `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Tn => "T_n",
            Self::Sn => "S_n",
            Self::Tns => "T_n_s",
            Self::TomegaN => "T_omega_n",
            Self::Lambda => "Lambda",
        }
    }
}

#[derive(Clone, Copy)]
pub struct PairContext<'a> {
    pub n: &'a IndexSequence,
    pub s: Option<&'a IndexSequence>,
    pub weight: Option<&'a dyn SetWeight>,
    pub lambda: Option<f64>,
}

impl<'a> PairContext<'a> {
    pub fn new(n: &'a IndexSequence) -> Self {
        Self { n, s: None, weight: None, lambda: None }
    }

    pub fn with_s(mut self, s: &'a IndexSequence) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_weight(mut self, w: &'a dyn SetWeight) -> Self {
        self.weight = Some(w);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    /// Classes that can be decided with the data present in the context.
    pub fn available_classes(&self) -> Vec<PairClass> {
        let mut out = vec![PairClass::Tn, PairClass::Sn];
        if self.s.is_some() {
            out.push(PairClass::Tns);
        }
        if self.weight.is_some() {
            out.push(PairClass::TomegaN);
        }
        if self.lambda.is_some() {
            out.push(PairClass::Lambda);
        }
        out
    }

    fn require(&self, class: PairClass) -> Result<()> {
        if self.available_classes().contains(&class) {
            Ok(())
        } else {
            Err(LabError::MissingIngredient(format!("class {} needs more context", class.name())))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub classes: Vec<PairClass>,
}

impl AdmissiblePair {
    pub fn is(&self, class: PairClass) -> bool {
        self.classes.contains(&class)
    }
}

/// Everything the class predicates need to know about one set.
#[derive(Clone, Debug)]
pub(crate) struct SetFeatures {
    pub len: usize,
    pub max: Option<usize>,
    pub min_in_n: Option<usize>,
    pub subset_of_n: bool,
    pub weight: Option<f64>,
}

impl SetFeatures {
    pub fn of(set: &[usize], ctx: &PairContext<'_>) -> Self {
        Self {
            len: set.len(),
            max: set.iter().copied().max(),
            min_in_n: set.iter().copied().filter(|&i| ctx.n.contains(i)).min(),
            subset_of_n: set.iter().all(|&i| ctx.n.contains(i)),
            weight: ctx.weight.map(|w| if set.is_empty() { 0.0 } else { w.weight(set) }),
        }
    }
}

/// `A < B ∩ n`, vacuously true when either side is empty.
fn left_of(a: &SetFeatures, b: &SetFeatures) -> bool {
    match (a.max, b.min_in_n) {
        (Some(x), Some(y)) => x < y,
        _ => true,
    }
}

fn separated_by_s(a: &SetFeatures, b: &SetFeatures, ctx: &PairContext<'_>) -> bool {
    let (Some(s), Some(min_bn)) = (ctx.s, b.min_in_n) else {
        // With B ∩ n empty only `A ≤ n_s` remains, met by any large s.
        return ctx.s.is_some();
    };
    // A ≤ n_p < B∩n  ⇔  ι(max A) ≤ p < ι(min B∩n) since both ends lie in n.
    let lo = a.max.and_then(|m| ctx.n.index_of(m)).unwrap_or(1);
    let hi = ctx.n.index_of(min_bn).expect("min_in_n lies in n");
    lo < hi && s.count_below(hi) > s.count_below(lo)
}

pub(crate) fn class_holds(
    a: &SetFeatures,
    b: &SetFeatures,
    class: PairClass,
    ctx: &PairContext<'_>,
) -> bool {
    if !a.subset_of_n {
        return false;
    }
    match class {
        PairClass::Sn => a.len <= b.len,
        PairClass::Tn => a.len <= b.len && left_of(a, b),
        PairClass::Tns => a.len <= b.len && left_of(a, b) && separated_by_s(a, b, ctx),
        PairClass::TomegaN => match (a.weight, b.weight) {
            (Some(wa), Some(wb)) => wa <= wb && left_of(a, b),
            _ => false,
        },
        PairClass::Lambda => {
            let Some(lambda) = ctx.lambda else { return false };
            let iota = a.max.and_then(|m| ctx.n.index_of(m)).unwrap_or(0) as f64;
            a.len <= b.len
                && left_of(a, b)
                && (lambda - 1.0) * iota + a.len as f64 <= b.len as f64 + 1e-12
        }
    }
}

/// Tags `(A, B)` with every class (among those the context can decide) whose
/// defining conditions hold.
pub fn classify_pair(a: &[usize], b: &[usize], ctx: &PairContext<'_>) -> AdmissiblePair {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let fa = SetFeatures::of(&a, ctx);
    let fb = SetFeatures::of(&b, ctx);
    let classes = ctx
        .available_classes()
        .into_iter()
        .filter(|&c| class_holds(&fa, &fb, c, ctx))
        .collect();
    AdmissiblePair { a, b, classes }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub(crate) fn count_subsets_upto(universe: usize, cap: usize) -> u128 {
    (0..=cap.min(universe)).map(|k| binomial(universe, k)).sum()
}

/// All subsets of `universe` (assumed sorted) with at most `cap` elements,
/// ordered by size and then lexicographically.
pub fn subsets_upto(universe: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=cap.min(universe.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.iter().map(|&i| universe[i]).collect());
            // Advance to the next k-combination in lexicographic order.
            let Some(p) = (0..k).rev().find(|&p| idx[p] < universe.len() - k + p) else { break };
            idx[p] += 1;
            for q in p + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out
}

pub(crate) fn guard(estimated: u128) -> Result<()> {
    if estimated > ENUMERATION_LIMIT {
        Err(LabError::Infeasible { estimated, limit: ENUMERATION_LIMIT })
    } else {
        Ok(())
    }
}

/// Every pair `(A, B)` of subsets of `[1, window]` with `|A|, |B| ≤ cap` in
/// `class`, in lexicographic order on `(|A|, A, |B|, B)`.
pub fn enumerate_pairs<'a>(
    window: usize,
    cap: usize,
    class: PairClass,
    ctx: PairContext<'a>,
) -> Result<impl Iterator<Item = AdmissiblePair> + 'a> {
    ctx.require(class)?;
    let universe: Vec<usize> = (1..=window).collect();
    let in_n: Vec<usize> = universe.iter().copied().filter(|&i| ctx.n.contains(i)).collect();
    guard(count_subsets_upto(in_n.len(), cap) * count_subsets_upto(window, cap))?;
    let a_sets: Vec<(Vec<usize>, SetFeatures)> = subsets_upto(&in_n, cap)
        .into_iter()
        .map(|s| {
            let f = SetFeatures::of(&s, &ctx);
            (s, f)
        })
        .collect();
    let b_sets: Vec<(Vec<usize>, SetFeatures)> = subsets_upto(&universe, cap)
        .into_iter()
        .map(|s| {
            let f = SetFeatures::of(&s, &ctx);
            (s, f)
        })
        .collect();
    Ok((0..a_sets.len()).flat_map(move |i| {
        let (a, fa) = a_sets[i].clone();
        b_sets
            .iter()
            .filter(|(_, fb)| class_holds(&fa, fb, class, &ctx))
            .map(|(b, _)| AdmissiblePair { a: a.clone(), b: b.clone(), classes: vec![class] })
            .collect::<Vec<_>>()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens() -> IndexSequence {
        IndexSequence::evens()
    }

    #[test]
    fn classification_examples() {
        let n = evens();
        let ctx = PairContext::new(&n);
        let p = classify_pair(&[2, 4], &[6, 7], &ctx);
        assert!(p.is(PairClass::Tn) && p.is(PairClass::Sn));
        let p = classify_pair(&[2, 4], &[5, 7], &ctx);
        assert!(p.is(PairClass::Tn));
        let p = classify_pair(&[1, 2], &[4, 6], &ctx);
        assert!(p.classes.is_empty());
        let p = classify_pair(&[4], &[2], &ctx);
        assert!(!p.is(PairClass::Tn) && p.is(PairClass::Sn));
    }

    #[test]
    fn separated_pairs_need_an_s_between() {
        let n = evens();
        let s = IndexSequence::list(vec![3, 10]).unwrap();
        let ctx = PairContext::new(&n).with_s(&s);
        // A = {2} ≤ n_3 = 6 < 8.
        assert!(classify_pair(&[2], &[8], &ctx).is(PairClass::Tns));
        // n_3 = 6 is not below 6.
        assert!(!classify_pair(&[2], &[6], &ctx).is(PairClass::Tns));
        assert!(classify_pair(&[2], &[6], &ctx).is(PairClass::Tn));
        // B ∩ n empty.
        assert!(classify_pair(&[2], &[7], &ctx).is(PairClass::Tns));
        // max A = n_3 itself is allowed.
        assert!(classify_pair(&[6], &[8], &ctx).is(PairClass::Tns));
    }

    #[test]
    fn lambda_class_weighs_the_position_of_max_a() {
        let n = evens();
        let ctx = PairContext::new(&n).with_lambda(2.0);
        // ι(4) = 2, so |B| ≥ 2 + 1 is needed.
        assert!(!classify_pair(&[4], &[6, 8], &ctx).is(PairClass::Lambda));
        assert!(classify_pair(&[4], &[6, 8, 10], &ctx).is(PairClass::Lambda));
        assert!(classify_pair(&[], &[], &ctx).is(PairClass::Lambda));
    }

    #[test]
    fn subsets_come_in_size_then_lex_order() {
        let s = subsets_upto(&[1, 2, 3], 2);
        let expect: Vec<Vec<usize>> =
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]];
        assert_eq!(s, expect);
        assert_eq!(subsets_upto(&[1, 2, 3, 4, 5], 5).len(), 32);
        assert_eq!(count_subsets_upto(5, 2), 16);
    }

    #[test]
    fn enumeration_examples() {
        let n = evens();
        let pairs: Vec<_> = enumerate_pairs(6, 1, PairClass::Tn, PairContext::new(&n)).unwrap().collect();
        let has = |a: &[usize], b: &[usize]| pairs.iter().any(|p| p.a == a && p.b == b);
        assert!(has(&[2], &[4]) && has(&[2], &[3]));
        assert!(!has(&[4], &[2]));
        assert!(pairs.iter().all(|p| p.a.len() <= p.b.len()));

        let zero: Vec<_> = enumerate_pairs(4, 0, PairClass::Sn, PairContext::new(&n)).unwrap().collect();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].a.is_empty() && zero[0].b.is_empty());
    }

    #[test]
    fn democratic_count_matches_a_direct_count() {
        let n = evens();
        let count = enumerate_pairs(6, 2, PairClass::Sn, PairContext::new(&n)).unwrap().count();
        // Independent count: A ⊂ {2,4,6}, B ⊂ [1,6], |A| ≤ |B| ≤ 2.
        let mut direct = 0;
        for amask in 0u32..8 {
            for bmask in 0u32..64 {
                let (ka, kb) = (amask.count_ones(), bmask.count_ones());
                if ka <= kb && kb <= 2 {
                    direct += 1;
                }
            }
        }
        assert_eq!(count, direct);
    }

    #[test]
    fn enumeration_is_guarded() {
        let n = IndexSequence::naturals();
        let err = enumerate_pairs(60, 8, PairClass::Sn, PairContext::new(&n)).err().unwrap();
        assert!(matches!(err, LabError::Infeasible { .. }));
    }

    #[test]
    fn missing_context_is_an_error() {
        let n = evens();
        assert!(enumerate_pairs(4, 1, PairClass::Tns, PairContext::new(&n)).is_err());
    }
}
