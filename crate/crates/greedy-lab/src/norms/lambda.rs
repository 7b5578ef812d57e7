use serde::{Deserialize, Serialize};

use super::{check_window, sorted_desc, NormValue, WeightSeq, Witness};
use crate::error::{LabError, Result};
use crate::sequence::IndexSequence;
use crate::vector::SparseVector;

/// Weighted norm `sup_{F, π} Σ_{i ∈ F} w^F_{π(i)} |x_i|` with `w^F_i = 1/√i`
/// when `F ⊂ n'` and `w^F_i = 1/i` otherwise. The subsequence `n' = (n_{k_j})`
/// is sparse: `ln⌈(λ−1)k_j⌉ ≥ 2√j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaParams {
    pub lambda: f64,
    pub window: usize,
    /// Positions `k_j` in `n`; generated greedily from the growth condition
    /// when absent.
    #[serde(default)]
    pub positions: Option<Vec<usize>>,
}

fn growth_ok(lambda: f64, k: usize, j: usize) -> bool {
    ((lambda - 1.0) * k as f64).ceil().ln() >= 2.0 * (j as f64).sqrt()
}

impl LambdaParams {
    /// Positions `k_j` of `n'` whose elements fall inside the window.
    pub fn subsequence_positions(&self, n: &IndexSequence) -> Vec<usize> {
        if let Some(p) = &self.positions {
            return p.clone();
        }
        let mut out = Vec::new();
        let mut k = 1;
        loop {
            let j = out.len() + 1;
            while !growth_ok(self.lambda, k, j) {
                k += 1;
            }
            match n.nth(k) {
                Some(i) if i <= self.window => out.push(k),
                _ => return out,
            }
            k += 1;
        }
    }

    /// The elements of `n'` inside the window.
    pub fn subsequence(&self, n: &IndexSequence) -> Vec<usize> {
        self.subsequence_positions(n).into_iter().filter_map(|k| n.nth(k)).collect()
    }

    pub(crate) fn validate(&self, n: &IndexSequence) -> Result<()> {
        if self.lambda.is_nan() || self.lambda <= 1.0 {
            return Err(LabError::Config(format!("lambda must exceed 1, got {}", self.lambda)));
        }
        let pos = self.subsequence_positions(n);
        if pos.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Config("positions of n' must increase".into()));
        }
        for (j0, &k) in pos.iter().enumerate() {
            if !growth_ok(self.lambda, k, j0 + 1) {
                return Err(LabError::Growth(format!(
                    "ln⌈(λ−1)·{k}⌉ < 2√{} for the {}-th element of n'",
                    j0 + 1,
                    j0 + 1
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn eval(&self, x: &SparseVector, n: &IndexSequence) -> Result<NormValue> {
        check_window(x, self.window)?;
        let sub = self.subsequence(n);
        let inside = sorted_desc(x.moduli().filter(|(i, _)| sub.binary_search(i).is_ok()).collect());
        let all = sorted_desc(x.moduli().collect());
        let m_in: Vec<f64> = inside.iter().map(|&(_, m)| m).collect();
        let m_all: Vec<f64> = all.iter().map(|&(_, m)| m).collect();
        let (v_in, v_all) = (WeightSeq::InvSqrt.pair(&m_in), WeightSeq::Harmonic.pair(&m_all));
        let (term, value, chosen) = if v_in >= v_all {
            ("F inside n' (weights 1/sqrt i)", v_in, inside)
        } else {
            ("F not inside n' (weights 1/i)", v_all, all)
        };
        let mut indices: Vec<usize> = chosen.iter().map(|&(i, _)| i).collect();
        indices.sort_unstable();
        Ok(NormValue { value, witness: Witness::Term { term: term.into(), value, indices } })
    }
}
