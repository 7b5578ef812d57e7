use serde::{Deserialize, Serialize};

use super::{check_window, NormValue, Witness};
use crate::error::Result;
use crate::sequence::IndexSequence;
use crate::vector::SparseVector;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SummingParams {
    /// Sequence carrying the partial sums; defaults to the norm's `n`.
    #[serde(default)]
    pub sequence: Option<IndexSequence>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitParams {}

/// `sup_m |Σ_{i ≤ m} x_{n_i}| + max_{k ∉ n} |x_k|`.
pub(crate) fn eval_summing(x: &SparseVector, n: &IndexSequence) -> Result<NormValue> {
    if let Some(w) = n.materialized_upto() {
        check_window(x, w)?;
    }
    let (mut sum, mut best, mut position) = (0.0f64, 0.0f64, 0usize);
    let (mut off_max, mut off_index) = (0.0f64, None);
    for (i, c) in x.iter() {
        match n.index_of(i) {
            Some(pos) => {
                // Partial sums only change at support points, so scanning the
                // support in order visits every distinct value of the sup.
                sum += c;
                if sum.abs() > best {
                    best = sum.abs();
                    position = pos;
                }
            }
            None => {
                if c.abs() > off_max {
                    off_max = c.abs();
                    off_index = Some(i);
                }
            }
        }
    }
    Ok(NormValue {
        value: best + off_max,
        witness: Witness::PartialSum { position, partial_sum: best, off_index, off_max },
    })
}

/// `max{Σ_i |x_{n_{2i-1}}|, max_{k ∉ n} |x_k|, max_i |x_{n_{2i}}|}`.
pub(crate) fn eval_split(x: &SparseVector, n: &IndexSequence) -> NormValue {
    let mut odd_sum = 0.0;
    let mut odd_idx = Vec::new();
    let (mut off, mut off_idx) = (0.0f64, Vec::new());
    let (mut even, mut even_idx) = (0.0f64, Vec::new());
    for (i, m) in x.moduli() {
        match n.index_of(i) {
            Some(pos) if pos % 2 == 1 => {
                odd_sum += m;
                odd_idx.push(i);
            }
            Some(_) => {
                if m > even {
                    even = m;
                    even_idx = vec![i];
                }
            }
            None => {
                if m > off {
                    off = m;
                    off_idx = vec![i];
                }
            }
        }
    }
    let candidates = [
        ("odd-position sum", odd_sum, odd_idx),
        ("off-sequence max", off, off_idx),
        ("even-position max", even, even_idx),
    ];
    let (term, value, indices) = candidates
        .into_iter()
        .fold(None::<(&str, f64, Vec<usize>)>, |best, c| match best {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        })
        .expect("three candidates");
    NormValue { value, witness: Witness::Term { term: term.into(), value, indices } }
}
