use serde::{Deserialize, Serialize};

use super::{lp, sorted_desc, BlockTerm, NormValue, WeightSeq, Witness};
use crate::error::{LabError, Result};
use crate::sequence::IndexSequence;
use crate::vector::SparseVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    All,
    In(IndexSequence),
    NotIn(IndexSequence),
}

impl Selector {
    fn selects(&self, i: usize) -> bool {
        match self {
            Self::All => true,
            Self::In(s) => s.contains(i),
            Self::NotIn(s) => !s.contains(i),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockMode {
    Lp(f64),
    Linf,
    /// `sup_π Σ w_{π(i)} |x_i|` over bijections of the block.
    Weights(WeightSeq),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub select: Selector,
    pub mode: BlockMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combiner {
    Sum,
    Max,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RearrangementParams {
    pub combiner: Combiner,
    pub blocks: Vec<Block>,
}

impl RearrangementParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(LabError::Config("a rearrangement norm needs at least one block".into()));
        }
        for b in &self.blocks {
            if let BlockMode::Lp(p) = b.mode {
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(LabError::Config(format!("block exponent {p} is not in [1, ∞)")));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn eval(&self, x: &SparseVector) -> Result<NormValue> {
        for (i, _) in x.iter() {
            if !self.blocks.iter().any(|b| b.select.selects(i)) {
                return Err(LabError::Uncovered(i));
            }
        }
        let mut terms = Vec::with_capacity(self.blocks.len());
        for (k, block) in self.blocks.iter().enumerate() {
            let items: Vec<(usize, f64)> = x.moduli().filter(|&(i, _)| block.select.selects(i)).collect();
            let term = match block.mode {
                BlockMode::Lp(p) => BlockTerm {
                    block: k,
                    value: lp(items.iter().map(|&(_, m)| m), p),
                    pairing: Vec::new(),
                },
                BlockMode::Linf => {
                    let best = sorted_desc(items).into_iter().next();
                    BlockTerm {
                        block: k,
                        value: best.map_or(0.0, |(_, m)| m),
                        pairing: best.map(|(i, _)| (i, 1)).into_iter().collect(),
                    }
                }
                BlockMode::Weights(w) => {
                    // Rearrangement inequality: largest moduli take largest weights.
                    let sorted = sorted_desc(items);
                    let moduli: Vec<f64> = sorted.iter().map(|&(_, m)| m).collect();
                    BlockTerm {
                        block: k,
                        value: w.pair(&moduli),
                        pairing: sorted.iter().enumerate().map(|(r, &(i, _))| (i, r + 1)).collect(),
                    }
                }
            };
            terms.push(term);
        }
        let value = match self.combiner {
            Combiner::Sum => terms.iter().map(|t| t.value).sum(),
            Combiner::Max => terms.iter().fold(0.0, |m: f64, t| m.max(t.value)),
        };
        Ok(NormValue { value, witness: Witness::Blocks { combiner: self.combiner, terms } })
    }
}
