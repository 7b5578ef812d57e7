use serde::{Deserialize, Serialize};

use super::{check_window, lp, sorted_desc, NormValue, Witness};
use crate::error::{LabError, Result};
use crate::sequence::IndexSequence;
use crate::vector::SparseVector;

fn s_at(s: &[usize], k: usize) -> Result<usize> {
    s.get(k.wrapping_sub(1)).copied().ok_or(LabError::MissingElement(k))
}

fn check_increasing(s: &[usize], what: &str) -> Result<()> {
    if s.first() == Some(&0) || s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LabError::Config(format!("{what} must be strictly increasing and positive")));
    }
    Ok(())
}

/// Every term beyond the configured data must vanish on the window: the
/// first `n`-index past position `last` lies outside it.
fn check_tail_outside(n: &IndexSequence, last: usize, window: usize) -> Result<()> {
    match n.nth(last + 1) {
        Some(i) if i <= window => Err(LabError::Window {
            window,
            needed: format!("configured data ends at position {last} (index {i} still inside)"),
        }),
        _ => Ok(()),
    }
}

/// Terms for `j` past the configured `k` start after position `s_{k_J+1}`,
/// and sets sized past the configured `s` start after position `s_last`; both
/// must lie outside the window for the truncation to be exact.
fn check_truncation(n: &IndexSequence, s: &[usize], k: &[usize], window: usize) -> Result<()> {
    check_tail_outside(n, *s.last().unwrap_or(&0), window)?;
    if let Some(&kj) = k.last() {
        check_tail_outside(n, s_at(s, kj + 1)?, window)?;
    }
    Ok(())
}

/// `(position in n, index, coefficient)`.
type OnN = Vec<(usize, usize, f64)>;

/// Support in `n`, plus the off-`n` part as `(index, coefficient)`.
fn split_support(x: &SparseVector, n: &IndexSequence) -> (OnN, Vec<(usize, f64)>) {
    let mut on = Vec::new();
    let mut off = Vec::new();
    for (i, c) in x.iter() {
        match n.index_of(i) {
            Some(p) => on.push((p, i, c)),
            None => off.push((i, c)),
        }
    }
    (on, off)
}

struct Best {
    term: String,
    value: f64,
    indices: Vec<usize>,
}

impl Best {
    fn offer(&mut self, term: impl FnOnce() -> String, value: f64, indices: impl FnOnce() -> Vec<usize>) {
        if value > self.value {
            self.term = term();
            self.value = value;
            let mut idx = indices();
            idx.sort_unstable();
            self.indices = idx;
        }
    }
}

/// Parameters of the order-gap norm
/// `max{‖x‖_∞, sup_{S} Σ_S |x_i|, sup_j sup_{ℓ ≤ j s_{k_j}} |Σ_{i ≤ ℓ} x_{n_{s_{k_j}+i}}|}`
/// where `S` ranges over sets with `|S| ∈ s` and `n_{|S|} < S ∩ n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapOrderParams {
    /// Initial segment of the gap sequence `s`.
    pub s: Vec<usize>,
    /// The selected positions `k_1 < k_2 < …` into `s` (1-based).
    pub k: Vec<usize>,
    pub window: usize,
}

impl GapOrderParams {
    pub(crate) fn validate(&self, n: &IndexSequence) -> Result<()> {
        check_increasing(&self.s, "s")?;
        check_increasing(&self.k, "k")?;
        for (j0, &kj) in self.k.iter().enumerate() {
            let j = j0 + 1;
            let (a, b) = (s_at(&self.s, kj)?, s_at(&self.s, kj + 1)?);
            if b <= 3 * (j + 1) * a {
                return Err(LabError::Growth(format!(
                    "s_{{k_{j}+1}} = {b} must exceed 3({j}+1)·s_{{k_{j}}} = {}",
                    3 * (j + 1) * a
                )));
            }
        }
        check_truncation(n, &self.s, &self.k, self.window)
    }

    pub(crate) fn eval(&self, x: &SparseVector, n: &IndexSequence) -> Result<NormValue> {
        check_window(x, self.window)?;
        let (on, off) = split_support(x, n);
        let mut best = Best { term: String::new(), value: 0.0, indices: Vec::new() };

        let top = sorted_desc(x.moduli().collect()).into_iter().next();
        if let Some((i, m)) = top {
            best.offer(|| "sup".into(), m, || vec![i]);
        }

        // Sizes in s, then the limit |S| → ∞ where only off-n coordinates stay
        // eligible.
        let sizes = self.s.iter().map(|&s| Some(s)).chain(std::iter::once(None));
        for size in sizes {
            let eligible: Vec<(usize, f64)> = off
                .iter()
                .map(|&(i, c)| (i, c.abs()))
                .chain(
                    on.iter()
                        .filter(|&&(p, _, _)| size.is_some_and(|s| p > s))
                        .map(|&(_, i, c)| (i, c.abs())),
                )
                .collect();
            let sorted = sorted_desc(eligible);
            let take = size.map_or(sorted.len(), |s| s.min(sorted.len()));
            let value: f64 = sorted[..take].iter().map(|&(_, m)| m).sum();
            let label = || match size {
                Some(s) => format!("set sum |S| = {s}"),
                None => "set sum |S| unbounded".into(),
            };
            best.offer(label, value, || sorted[..take].iter().map(|&(i, _)| i).collect());
        }

        for (j0, &kj) in self.k.iter().enumerate() {
            let j = j0 + 1;
            let base = s_at(&self.s, kj)?;
            let (mut sum, mut used) = (0.0, Vec::new());
            for &(p, i, c) in &on {
                if p > base && p <= base + j * base {
                    sum += c;
                    used.push(i);
                    let v = f64::abs(sum);
                    best.offer(|| format!("partial sum block j = {j}"), v, || used.clone());
                }
            }
        }
        Ok(NormValue {
            value: best.value,
            witness: Witness::Term { term: best.term, value: best.value, indices: best.indices },
        })
    }
}

/// Parameters of the exponent-gap norm
/// `max{‖x‖_∞, ‖x‖_1', sup_j ‖x|_{T_j}‖_{p_{k_j+1}}}` with
/// `‖x‖_1' = sup_k (sup_{S ∈ S_k} ‖x|_S‖_{p_k} + ‖x|_{ℕ∖n}‖_{p_k})`,
/// `S_k` the sets of `10^k` elements of `n` beyond `n_{s_k}`, and `T_j` the
/// positions `s_{k_j}+1 ..= s_{k_j}+10^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapPkParams {
    pub s: Vec<usize>,
    pub k: Vec<usize>,
    /// `p_1 ≥ p_2 ≥ … ≥ 1`, decreasing to 1; terms past the list are covered
    /// by the limit `p → 1`.
    pub p: Vec<f64>,
    pub window: usize,
}

fn pow10(j: usize) -> usize {
    10usize.pow(j as u32)
}

impl GapPkParams {
    pub(crate) fn validate(&self, n: &IndexSequence) -> Result<()> {
        check_increasing(&self.s, "s")?;
        check_increasing(&self.k, "k")?;
        if self.p.len() != self.s.len() {
            return Err(LabError::Config("p and s must have the same length".into()));
        }
        if self.p.iter().any(|&p| p.is_nan() || p < 1.0) || self.p.windows(2).any(|w| w[1] > w[0]) {
            return Err(LabError::Config("p must be non-increasing and at least 1".into()));
        }
        for (j0, &kj) in self.k.iter().enumerate() {
            let j = j0 + 1;
            let (a, b) = (s_at(&self.s, kj)?, s_at(&self.s, kj + 1)?);
            if b - a <= 3 * pow10(j) {
                return Err(LabError::Growth(format!(
                    "s_{{k_{j}+1}} − s_{{k_{j}}} = {} must exceed 3·10^{j}",
                    b - a
                )));
            }
        }
        check_truncation(n, &self.s, &self.k, self.window)
    }

    pub(crate) fn eval(&self, x: &SparseVector, n: &IndexSequence) -> Result<NormValue> {
        check_window(x, self.window)?;
        let (on, off) = split_support(x, n);
        let mut best = Best { term: String::new(), value: 0.0, indices: Vec::new() };

        if let Some((i, m)) = sorted_desc(x.moduli().collect()).into_iter().next() {
            best.offer(|| "sup".into(), m, || vec![i]);
        }

        let off_idx = || off.iter().map(|&(i, _)| i).collect::<Vec<_>>();
        for (k0, (&sk, &p)) in self.s.iter().zip(&self.p).enumerate() {
            let k = k0 + 1;
            let eligible: Vec<(usize, f64)> =
                on.iter().filter(|&&(pos, _, _)| pos > sk).map(|&(_, i, c)| (i, c.abs())).collect();
            let sorted = sorted_desc(eligible);
            let take = pow10(k.min(18)).min(sorted.len());
            let value = lp(sorted[..take].iter().map(|&(_, m)| m), p) + lp(off.iter().map(|&(_, c)| c), p);
            best.offer(
                || format!("set term k = {k} (p = {p})"),
                value,
                || sorted[..take].iter().map(|&(i, _)| i).chain(off_idx()).collect(),
            );
        }
        // k → ∞: S_k leaves the window and the exponent tends to 1.
        best.offer(|| "set term limit p -> 1".into(), lp(off.iter().map(|&(_, c)| c), 1.0), off_idx);

        for (j0, &kj) in self.k.iter().enumerate() {
            let j = j0 + 1;
            let base = s_at(&self.s, kj)?;
            let p = self.p[kj];
            let block: Vec<(usize, f64)> = on
                .iter()
                .filter(|&&(pos, _, _)| pos > base && pos <= base + pow10(j))
                .map(|&(_, i, c)| (i, c))
                .collect();
            let value = lp(block.iter().map(|&(_, c)| c), p);
            best.offer(
                || format!("block T_{j} (p = {p})"),
                value,
                || block.iter().map(|&(i, _)| i).collect(),
            );
        }
        Ok(NormValue {
            value: best.value,
            witness: Witness::Term { term: best.term, value: best.value, indices: best.indices },
        })
    }
}
