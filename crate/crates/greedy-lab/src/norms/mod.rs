//! Exact evaluators for the catalog of sequence-space norms.
//!
//! Every norm is a supremum over an infinite family (bijections, admissible
//! sets, partial sums). On finitely supported vectors each supremum is reduced
//! to a finite computation: sorted pairing for rearrangements, top-k selection
//! per candidate minimum for families, and a scan of partial sums.

mod family;
mod gap;
mod lambda;
mod rearrangement;
mod sums;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sequence::IndexSequence;
use crate::vector::SparseVector;

pub use family::{Coordinates, FamilyComponent, FamilyParams, FamilyPredicate, Tail};
pub use gap::{GapOrderParams, GapPkParams};
pub use lambda::LambdaParams;
pub use rearrangement::{Block, BlockMode, Combiner, RearrangementParams, Selector};
pub use sums::{SplitParams, SummingParams};

/// Non-increasing positive weights `w_1 ≥ w_2 ≥ …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSeq {
    /// `w_i = 1/√i`.
    InvSqrt,
    /// `w_i = 1/i`.
    Harmonic,
    /// `w_i = 1`.
    Unit,
}

impl WeightSeq {
    pub fn at(self, i: usize) -> f64 {
        debug_assert!(i >= 1);
        match self {
            Self::InvSqrt => 1.0 / (i as f64).sqrt(),
            Self::Harmonic => 1.0 / i as f64,
            Self::Unit => 1.0,
        }
    }

    /// `Σ_{i ≤ k} w_i · sorted[i-1]` for moduli sorted in descending order.
    pub(crate) fn pair(self, sorted_desc: &[f64]) -> f64 {
        sorted_desc.iter().enumerate().map(|(r, &m)| self.at(r + 1) * m).sum()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormFlags {
    #[serde(default)]
    pub one_unconditional: bool,
    #[serde(default)]
    pub one_pslc_expected: bool,
    #[serde(default)]
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    PartitionedRearrangement(RearrangementParams),
    FamilyWeight(FamilyParams),
    Summing(SummingParams),
    SplitL1Sup(SplitParams),
    GapOrder(GapOrderParams),
    GapPk(GapPkParams),
    LambdaWeight(LambdaParams),
}

/// A declarative norm: its reference sequence `n`, the family-specific
/// parameters and the structural flags the property checks rely on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub n: IndexSequence,
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub flags: NormFlags,
}

/// The structure attaining the supremum that defines a norm value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Zero,
    /// One term per block; `pairing` lists `(index, rank)` for weighted blocks.
    Blocks { combiner: Combiner, terms: Vec<BlockTerm> },
    /// One term per family component plus the tail.
    Family { terms: Vec<FamilyTerm>, tail: f64 },
    /// Partial-sum endpoint (as a position of the summing sequence) and the
    /// off-sequence maximum.
    PartialSum { position: usize, partial_sum: f64, off_index: Option<usize>, off_max: f64 },
    /// The winning term of a max of several terms, with the indices it used.
    Term { term: String, value: f64, indices: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockTerm {
    pub block: usize,
    pub value: f64,
    pub pairing: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyTerm {
    pub component: usize,
    pub value: f64,
    pub chosen: Vec<usize>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "zero vector"),
            Self::Blocks { combiner, terms } => {
                write!(f, "{combiner:?} of blocks")?;
                for t in terms {
                    let pairs: Vec<String> =
                        t.pairing.iter().map(|(i, r)| format!("{i}->w{r}")).collect();
                    write!(f, "; block {} = {:.12} [{}]", t.block, t.value, pairs.join(" "))?;
                }
                Ok(())
            }
            Self::Family { terms, tail } => {
                for t in terms {
                    write!(f, "component {} = {:.12} on F = {:?}; ", t.component, t.value, t.chosen)?;
                }
                write!(f, "tail = {tail:.12}")
            }
            Self::PartialSum { position, partial_sum, off_index, off_max } => {
                write!(f, "partial sum to position {position} = {partial_sum:.12}; off-sequence max = {off_max:.12}")?;
                if let Some(i) = off_index {
                    write!(f, " at {i}")?;
                }
                Ok(())
            }
            Self::Term { term, value, indices } => {
                write!(f, "{term} = {value:.12} on {indices:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub witness: Witness,
}

impl NormSpec {
    /// Checks the structural conditions of the family (growth conditions,
    /// weight shapes); evaluation assumes a validated spec.
    pub fn validate(&self) -> Result<()> {
        match &self.family {
            Family::PartitionedRearrangement(p) => p.validate(),
            Family::FamilyWeight(p) => p.validate(),
            Family::Summing(_) | Family::SplitL1Sup(_) => Ok(()),
            Family::GapOrder(p) => p.validate(&self.n),
            Family::GapPk(p) => p.validate(&self.n),
            Family::LambdaWeight(p) => p.validate(&self.n),
        }
    }

    pub fn eval(&self, x: &SparseVector) -> Result<NormValue> {
        if x.is_zero() {
            return Ok(NormValue { value: 0.0, witness: Witness::Zero });
        }
        match &self.family {
            Family::PartitionedRearrangement(p) => p.eval(x),
            Family::FamilyWeight(p) => p.eval(x),
            Family::Summing(p) => sums::eval_summing(x, p.sequence.as_ref().unwrap_or(&self.n)),
            Family::SplitL1Sup(_) => Ok(sums::eval_split(x, &self.n)),
            Family::GapOrder(p) => p.eval(x, &self.n),
            Family::GapPk(p) => p.eval(x, &self.n),
            Family::LambdaWeight(p) => p.eval(x, &self.n),
        }
    }

    pub fn value(&self, x: &SparseVector) -> Result<f64> {
        self.eval(x).map(|v| v.value)
    }

    /// Largest index the evaluator accepts, for families that live on a window.
    pub fn window(&self) -> Option<usize> {
        match &self.family {
            Family::GapOrder(p) => Some(p.window),
            Family::GapPk(p) => Some(p.window),
            Family::LambdaWeight(p) => Some(p.window),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::PartitionedRearrangement(_) => "partitioned_rearrangement",
            Family::FamilyWeight(_) => "family_weight",
            Family::Summing(_) => "summing",
            Family::SplitL1Sup(_) => "split_l1_sup",
            Family::GapOrder(_) => "gap_order",
            Family::GapPk(_) => "gap_pk",
            Family::LambdaWeight(_) => "lambda_weight",
        }
    }
}

pub(crate) fn check_window(x: &SparseVector, window: usize) -> Result<()> {
    match x.max_index() {
        Some(m) if m > window => Err(LabError::Window {
            window,
            needed: format!("support reaches index {m}"),
        }),
        _ => Ok(()),
    }
}

/// Moduli sorted in descending order (ties keep index order).
pub(crate) fn sorted_desc(mut items: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    items
}

pub(crate) fn lp(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p == 1.0 {
        values.map(f64::abs).sum()
    } else if p == 2.0 {
        values.map(|v| v * v).sum::<f64>().sqrt()
    } else {
        values.map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::norm;
    use crate::vector::indicator;

    const TOL: f64 = 1e-12;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL * b.abs().max(1.0)
    }

    fn value(id: &str, set: &[usize]) -> f64 {
        norm(id).unwrap().value(&indicator(set, None).unwrap()).unwrap()
    }

    fn evens(from: usize, to: usize) -> Vec<usize> {
        IndexSequence::evens().positions(from, to).unwrap()
    }

    #[test]
    fn catalog_round_trips_through_json() {
        for spec in crate::Catalog::builtin().iter() {
            let text = serde_json::to_string(spec).unwrap();
            let back: NormSpec = serde_json::from_str(&text).unwrap();
            assert_eq!(&back, spec);
        }
    }

    #[test]
    fn zero_vector_has_norm_zero() {
        for spec in crate::Catalog::builtin().iter() {
            assert_eq!(spec.value(&SparseVector::zero()).unwrap(), 0.0, "{}", spec.id);
        }
    }

    #[test]
    fn l1_l2_sum() {
        assert!(close(value("l1l2", &[1, 2, 4]), 1.0 + 2f64.sqrt()));
    }

    #[test]
    fn sqrt_rearrangement() {
        let d: Vec<usize> = (0..9).map(|i| 2 * i + 1).collect();
        assert!(close(value("rearranged_sqrt", &d), 9.0));
        let expect = 1.0 + 1.0 / 2f64.sqrt() + 1.0 / 3f64.sqrt();
        assert!(close(value("rearranged_sqrt", &[2, 4, 6]), expect));
        // Pairing follows the moduli, not the positions.
        let x = SparseVector::from_pairs([(2, 1.0), (4, 3.0)]).unwrap();
        let v = norm("rearranged_sqrt").unwrap().value(&x).unwrap();
        assert!(close(v, 3.0 + 1.0 / 2f64.sqrt()));
    }

    #[test]
    fn sqrt_min_family() {
        assert!(close(value("family_sqrt", &evens(1, 4)), 1.0));
        assert!(close(value("family_sqrt", &evens(4, 8)), 1.0 + 1.0 / 2f64.sqrt()));
        // Positions 9..=12: F = {9, 10, 11} is admissible.
        let expect = 1.0 + 1.0 / 2f64.sqrt() + 1.0 / 3f64.sqrt();
        assert!(close(value("family_sqrt", &evens(9, 12)), expect));
        assert!(close(value("family_sqrt", &[1, 3, 5]), 3.0));
    }

    #[test]
    fn two_block_family_values() {
        assert!(close(value("family_two_block", &[2, 7]), 2.0));
        assert!(close(value("family_two_block", &[7, 9]), 1.0 + 1.0 / 2f64.sqrt()));
        assert!(close(value("family_two_block", &[5, 7]), 1.0));
    }

    #[test]
    fn phi_family_counts_k_below() {
        // K = {2, 6, 10, ...}; φ(v) ≥ 4 once v > 14, allowing |F| = 2.
        assert!(close(value("family_phi", &[14, 16]), 1.0));
        assert!(close(value("family_phi", &[16, 18]), 2.0));
        assert!(close(value("family_phi", &[1, 3]), 2.0));
    }

    #[test]
    fn phi_l2_family_dominates_sqrt_n() {
        let spec = norm("family_phi_l2").unwrap();
        assert!(close(spec.value(&SparseVector::unit(5)).unwrap(), 2.0));
        for big_n in [4usize, 16, 64] {
            for step in [1usize, 3, 10] {
                let set: Vec<usize> = (1..=big_n).map(|i| 7 + step * i).collect();
                let v = spec.value(&indicator(&set, None).unwrap()).unwrap();
                assert!(v >= (big_n as f64).sqrt() - TOL);
            }
        }
    }

    #[test]
    fn summing_examples() {
        let n = IndexSequence::evens();
        let spec = norm("summing").unwrap();
        let x = SparseVector::from_pairs([(2, 1.0), (4, -1.0)]).unwrap();
        assert!(close(spec.value(&x).unwrap(), 1.0));
        for s in 2..10 {
            let y = SparseVector::from_pairs([(n.nth(s - 1).unwrap(), -1.0), (n.nth(s).unwrap(), 2.0)])
                .unwrap();
            assert!(close(spec.value(&y).unwrap(), 1.0));
        }
        assert!(close(spec.value(&SparseVector::from_pairs([(3, -2.0), (2, 1.0)]).unwrap()).unwrap(), 3.0));
    }

    #[test]
    fn split_examples() {
        let n = IndexSequence::evens();
        for m in 1..6 {
            let a: Vec<usize> = (1..=m).map(|i| n.nth(2 * i - 1).unwrap()).collect();
            let b: Vec<usize> = (m + 1..=2 * m).map(|i| n.nth(2 * i).unwrap()).collect();
            assert!(close(value("split", &a), m as f64));
            assert!(close(value("split", &b), 1.0));
        }
        for k in 1..30 {
            assert!(close(value("split", &[k]), 1.0));
        }
    }

    #[test]
    fn order_gap_blocks() {
        let spec = norm("gap_order").unwrap();
        let Family::GapOrder(p) = &spec.family else { unreachable!() };
        for (j0, &kj) in p.k.iter().enumerate() {
            let j = j0 + 1;
            let base = p.s[kj - 1];
            let d = evens(base + 1, (j + 1) * base);
            assert!(close(value("gap_order", &d), (j * base) as f64));
            let e = evens((j + 1) * base + 1, 2 * (j + 1) * base);
            assert!(value("gap_order", &e) <= base as f64 + TOL);
        }
        assert!(close(value("gap_order", &[37]), 1.0));
        assert!(close(value("gap_order", &[1, 3, 5]), 3.0));
        assert!(matches!(spec.value(&SparseVector::unit(5000)), Err(LabError::Window { .. })));
    }

    #[test]
    fn order_gap_growth_is_enforced() {
        let mut spec = norm("gap_order").unwrap();
        if let Family::GapOrder(p) = &mut spec.family {
            p.s[1] = 6;
        }
        assert!(matches!(spec.validate(), Err(LabError::Growth(_))));
    }

    #[test]
    fn exponent_gap_blocks() {
        let spec = norm("gap_pk").unwrap();
        let Family::GapPk(p) = &spec.family else { unreachable!() };
        for (j0, &kj) in p.k.iter().enumerate() {
            let j = j0 + 1;
            let base = p.s[kj - 1];
            let size = 10usize.pow(j as u32);
            let t = evens(base + 1, base + size);
            assert!(value("gap_pk", &t) >= 10f64.powf(j as f64 / p.p[kj]) - TOL);
            let d = evens(base + size + 1, base + 2 * size);
            assert!(value("gap_pk", &d) <= 10f64.powf(j as f64 / p.p[kj - 1]) + TOL);
        }
        for k in [1, 2, 99, 800] {
            assert!(close(value("gap_pk", &[k]), 1.0));
        }
        // Off n the limit exponent is 1.
        assert!(close(value("gap_pk", &[1, 3, 5, 7]), 4.0));
    }

    #[test]
    fn lambda_norm_cases() {
        let spec = norm("lambda_sqrt_harmonic").unwrap();
        let Family::LambdaWeight(p) = &spec.family else { unreachable!() };
        let sub = p.subsequence(&spec.n);
        assert!(sub.len() >= 5);
        let outside: Vec<usize> =
            (1..=40).map(|k| 2 * k).filter(|i| sub.binary_search(i).is_err()).take(12).collect();
        for len in 1..=outside.len() {
            let h: f64 = (1..=len).map(|i| 1.0 / i as f64).sum();
            assert!(close(value("lambda_sqrt_harmonic", &outside[..len]), h));
        }
        for len in 1..=sub.len() {
            let s: f64 = (1..=len).map(|i| 1.0 / (i as f64).sqrt()).sum();
            assert!(close(value("lambda_sqrt_harmonic", &sub[..len]), s));
        }
        for k in 1..60 {
            assert!(close(value("lambda_sqrt_harmonic", &[k]), 1.0));
        }
    }

    #[test]
    fn final_weight_norm() {
        // 2 and 6 are odd positions of the evens, 4 is not.
        let expect = 1.0 + 1.0 / 2f64.sqrt() + 1.0;
        assert!(close(value("odd_sqrt_harmonic", &[2, 4, 6]), expect));
    }

    #[test]
    fn uncovered_index_is_an_error() {
        let spec = NormSpec {
            id: "partial".into(),
            description: String::new(),
            n: IndexSequence::evens(),
            family: Family::PartitionedRearrangement(RearrangementParams {
                combiner: Combiner::Sum,
                blocks: vec![Block { select: Selector::In(IndexSequence::evens()), mode: BlockMode::Linf }],
            }),
            flags: NormFlags::default(),
        };
        assert_eq!(spec.value(&SparseVector::unit(3)), Err(LabError::Uncovered(3)));
    }
}
