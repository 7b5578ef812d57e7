//! Explicit extremal configurations for the catalog norms, parameterized by
//! the reference sequence `n` and a size.

use crate::error::Result;
use crate::sequence::IndexSequence;
use crate::vector::{indicator, SignPattern, SparseVector};

/// A configuration `(x, 1_{εA}, 1_{δB})` for the shifted ratio
/// `‖x + 1_{εA}‖ / ‖x + 1_{δB}‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedPair {
    pub x: SparseVector,
    pub a: SparseVector,
    pub b: SparseVector,
}

fn at(n: &IndexSequence, positions: impl IntoIterator<Item = usize>) -> Result<Vec<usize>> {
    positions.into_iter().map(|p| n.nth(p).ok_or(crate::LabError::MissingElement(p))).collect()
}

/// Summing norm, ratio `4m + 1`: `A = {n_1..n_m}`, `B` every third position
/// from `m+2`, and `x = ½·1_C` with `C` filling the other positions up to
/// `4m+1`, so that the partial sums of `x − 1_B` never leave `[−½, ½]`.
pub fn summing_shifted(n: &IndexSequence, m: usize) -> Result<ShiftedPair> {
    let a = at(n, 1..=m)?;
    let b = at(n, (0..m).map(|t| m + 2 + 3 * t))?;
    let mut c = at(n, (0..m).flat_map(|t| [m + 1 + 3 * t, m + 3 + 3 * t]))?;
    c.push(n.nth(4 * m + 1).ok_or(crate::LabError::MissingElement(4 * m + 1))?);
    c.sort_unstable();
    Ok(ShiftedPair {
        x: indicator(&c, None)?.scale(0.5),
        a: indicator(&a, None)?,
        b: indicator(&b, Some(&SignPattern::uniform(&b, -1)))?,
    })
}

/// `A_k = {n_1, n_3, …, n_{2k−1}}`.
pub fn split_a(n: &IndexSequence, k: usize) -> Result<Vec<usize>> {
    at(n, (1..=k).map(|i| 2 * i - 1))
}

/// `B_k = {n_{2k+2}, n_{2k+4}, …, n_{4k}}`.
pub fn split_b(n: &IndexSequence, k: usize) -> Result<Vec<usize>> {
    at(n, (k + 1..=2 * k).map(|i| 2 * i))
}

/// Split norm, ratio `k + 1` at order `2k − 1`: `x = e_{n_{2k+1}}` with
/// `A_k` against `B_k`.
pub fn split_shifted(n: &IndexSequence, k: usize) -> Result<ShiftedPair> {
    Ok(ShiftedPair {
        x: SparseVector::unit(at(n, [2 * k + 1])?[0]),
        a: indicator(&split_a(n, k)?, None)?,
        b: indicator(&split_b(n, k)?, None)?,
    })
}

/// Split norm, `x = 1_{A_k} + e_{n_{2k+1}} + (1+η)·1_{B_{2k}}`: greedy
/// sets of order `2k−1` and `2k` sit inside `B_{2k}` and leave `k + 1`,
/// while removing the first `2k−1` elements of `n` leaves `1 + η`.
pub fn split_lebesgue(n: &IndexSequence, k: usize, eta: f64) -> Result<SparseVector> {
    let mut x = indicator(&split_a(n, k)?, None)?;
    x.set(at(n, [2 * k + 1])?[0], 1.0)?;
    for i in split_b(n, 2 * k)? {
        x.set(i, 1.0 + eta)?;
    }
    Ok(x)
}

/// `−e_{n_{s−1}} + c·e_{n_s}`: norm 1 for the summing norm when `c = 2`.
pub fn summing_dual(n: &IndexSequence, s: usize, c: f64) -> Result<SparseVector> {
    let idx = at(n, [s - 1, s])?;
    SparseVector::from_pairs([(idx[0], -1.0), (idx[1], c)])
}

/// `x_{2k} = Σ_{i ≤ 2k} (−1)^i e_{m_i}`.
pub fn alternating(m: &IndexSequence, len: usize) -> Result<SparseVector> {
    let idx = at(m, 1..=len)?;
    SparseVector::from_pairs(idx.iter().enumerate().map(|(i, &j)| (j, if i % 2 == 0 { -1.0 } else { 1.0 })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::norm;

    #[test]
    fn summing_shifted_values() {
        let spec = norm("summing").unwrap();
        for m in 1..=4 {
            let w = summing_shifted(&spec.n, m).unwrap();
            let num = spec.value(&w.x.add(&w.a)).unwrap();
            let den = spec.value(&w.x.add(&w.b)).unwrap();
            assert_eq!(num, 2.0 * m as f64 + 0.5);
            assert_eq!(den, 0.5);
            assert_eq!(w.x.support_len(), 2 * m + 1);
        }
    }

    #[test]
    fn split_sets() {
        let n = IndexSequence::evens();
        assert_eq!(split_a(&n, 3).unwrap(), vec![2, 6, 10]);
        assert_eq!(split_b(&n, 3).unwrap(), vec![16, 20, 24]);
    }
}
