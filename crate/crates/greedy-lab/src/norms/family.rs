use serde::{Deserialize, Serialize};

use super::{lp, FamilyTerm, NormValue, WeightSeq, Witness};
use crate::error::{LabError, Result};
use crate::sequence::IndexSequence;
use crate::vector::SparseVector;

/// Whether admissible sets `F` are sets of positions in the component domain
/// or sets of actual indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinates {
    Positions,
    Indices,
}

/// Admissibility of `F`: `√pred(min F) ≥ |F|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyPredicate {
    /// `pred(v) = v`.
    SqrtMin,
    /// `pred(v) = φ(v) = max(1, #{k ∈ K : k < v})`.
    SqrtPhi { k: IndexSequence },
}

impl FamilyPredicate {
    /// Largest admissible `|F|` for a set with minimum coordinate `v`.
    fn cap(&self, v: usize) -> usize {
        let pred = match self {
            Self::SqrtMin => v,
            Self::SqrtPhi { k } => k.count_below(v).max(1),
        };
        pred.isqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyComponent {
    pub domain: IndexSequence,
    pub coordinates: Coordinates,
    pub predicate: FamilyPredicate,
    pub weights: WeightSeq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    None,
    /// `ℓ1` norm of the coordinates outside every listed sequence.
    L1Off(Vec<IndexSequence>),
    /// `ℓ2` norm of all coordinates.
    L2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub components: Vec<FamilyComponent>,
    pub tail: Tail,
}

impl FamilyComponent {
    /// `sup_{F admissible, π} Σ_{i ∈ F} w_{π(i)} |x_i|`.
    ///
    /// The sup is reached with `F` inside the support: moving the minimum of
    /// `F` onto a support coordinate never lowers the cap, since `pred` is
    /// non-decreasing. So it suffices to try each support coordinate `m₀` as
    /// the minimum and take the `cap(m₀)` largest moduli at coordinates `≥ m₀`.
    fn eval(&self, x: &SparseVector) -> (f64, Vec<usize>) {
        let items: Vec<(usize, usize, f64)> = x
            .moduli()
            .filter_map(|(i, m)| {
                let pos = self.domain.index_of(i)?;
                let coord = match self.coordinates {
                    Coordinates::Positions => pos,
                    Coordinates::Indices => i,
                };
                Some((i, coord, m))
            })
            .collect();
        let (mut best, mut best_set) = (0.0, Vec::new());
        // Suffix of items kept sorted by modulus descending (ties by index).
        let mut suffix: Vec<(usize, f64)> = Vec::with_capacity(items.len());
        for &(i, coord, m) in items.iter().rev() {
            let at = suffix.partition_point(|&(j, mj)| mj > m || (mj == m && j < i));
            suffix.insert(at, (i, m));
            let cap = self.predicate.cap(coord).min(suffix.len());
            let top = &suffix[..cap];
            let moduli: Vec<f64> = top.iter().map(|&(_, mm)| mm).collect();
            let value = self.weights.pair(&moduli);
            if value >= best {
                best = value;
                let mut set: Vec<usize> = top.iter().map(|&(j, _)| j).collect();
                set.sort_unstable();
                best_set = set;
            }
        }
        (best, best_set)
    }
}

impl FamilyParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(LabError::Config("a family norm needs at least one component".into()));
        }
        Ok(())
    }

    fn covers(&self, i: usize) -> bool {
        self.components.iter().any(|c| c.domain.contains(i))
            || match &self.tail {
                Tail::None => false,
                Tail::L2 => true,
                Tail::L1Off(seqs) => seqs.iter().all(|s| !s.contains(i)),
            }
    }

    pub(crate) fn eval(&self, x: &SparseVector) -> Result<NormValue> {
        if let Some((i, _)) = x.iter().find(|&(i, _)| !self.covers(i)) {
            return Err(LabError::Uncovered(i));
        }
        let mut terms = Vec::with_capacity(self.components.len());
        for (k, c) in self.components.iter().enumerate() {
            let (value, chosen) = c.eval(x);
            terms.push(FamilyTerm { component: k, value, chosen });
        }
        let tail = match &self.tail {
            Tail::None => 0.0,
            Tail::L2 => lp(x.iter().map(|(_, c)| c), 2.0),
            Tail::L1Off(seqs) => x
                .iter()
                .filter(|&(i, _)| seqs.iter().all(|s| !s.contains(i)))
                .map(|(_, c)| c.abs())
                .sum(),
        };
        let value = terms.iter().map(|t| t.value).sum::<f64>() + tail;
        Ok(NormValue { value, witness: Witness::Family { terms, tail } })
    }
}
