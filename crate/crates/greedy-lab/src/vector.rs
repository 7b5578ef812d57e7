//! Finitely supported real vectors, sign patterns and coordinate projections.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sequence::IndexSequence;

/// A finitely supported coefficient sequence. Zero coefficients are never
/// stored, so the key set is exactly the support.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<usize, f64>", into = "BTreeMap<usize, f64>")]
pub struct SparseVector {
    entries: BTreeMap<usize, f64>,
}

impl TryFrom<BTreeMap<usize, f64>> for SparseVector {
    type Error = LabError;

    fn try_from(map: BTreeMap<usize, f64>) -> Result<Self> {
        Self::from_pairs(map)
    }
}

impl From<SparseVector> for BTreeMap<usize, f64> {
    fn from(v: SparseVector) -> Self {
        v.entries
    }
}

impl SparseVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a vector from `(index, coefficient)` pairs. Repeated indices are
    /// summed and zero results dropped.
    pub fn from_pairs<I: IntoIterator<Item = (usize, f64)>>(pairs: I) -> Result<Self> {
        let mut v = Self::zero();
        for (i, c) in pairs {
            if i == 0 {
                return Err(LabError::InvalidIndex(0));
            }
            let sum = v.get(i) + c;
            v.put(i, sum);
        }
        Ok(v)
    }

    /// The basis vector `e_i`.
    pub fn unit(i: usize) -> Self {
        assert!(i > 0, "basis indices start at 1");
        let mut v = Self::zero();
        v.entries.insert(i, 1.0);
        v
    }

    fn put(&mut self, i: usize, c: f64) {
        if c == 0.0 {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    /// Sets one coefficient; a zero value removes the index from the support.
    pub fn set(&mut self, i: usize, c: f64) -> Result<()> {
        if i == 0 {
            return Err(LabError::InvalidIndex(0));
        }
        self.put(i, c);
        Ok(())
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries.get(&i).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&i, &c)| (i, c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.entries.contains_key(&i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = Self::zero();
        for (i, c) in self.iter() {
            out.put(i, a * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            let s = out.get(i) + c;
            out.put(i, s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Moduli in index order.
    pub fn moduli(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.iter().map(|(i, c)| (i, c.abs()))
    }

    /// Parses `idx:coef,idx:coef`, the inverse of [`Self::literal`]. An index
    /// `nK` stands for the `K`-th element of `n`. Repeated indices add up.
    pub fn parse_literal(text: &str, n: Option<&IndexSequence>) -> Result<Self> {
        let text = text.trim();
        if text == "0" || text.is_empty() {
            return Ok(Self::zero());
        }
        let bad = |msg: String| LabError::Parse(msg);
        let pairs = text
            .split(',')
            .map(|item| {
                let (idx, coef) = item.split_once(':').ok_or_else(|| bad(format!("`{item}` is not idx:coef")))?;
                let idx = idx.trim();
                let i = match idx.strip_prefix('n') {
                    Some(k) => {
                        let k: usize = k.parse().map_err(|_| bad(format!("bad symbolic index `{idx}`")))?;
                        let n = n.ok_or_else(|| bad(format!("`{idx}` needs a sequence n")))?;
                        n.nth(k).ok_or(LabError::MissingElement(k))?
                    }
                    None => idx.parse().map_err(|_| bad(format!("bad index `{idx}`")))?,
                };
                let c: f64 = coef.trim().parse().map_err(|_| bad(format!("bad coefficient `{coef}`")))?;
                if !c.is_finite() {
                    return Err(bad(format!("non-finite coefficient `{coef}`")));
                }
                Ok((i, c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }

    /// Compact `idx:coef` literal, accepted back by [`Self::parse_literal`].
    pub fn literal(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.iter()
            .map(|(i, c)| format!("{i}:{}", fmt_coef(c)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn fmt_coef(c: f64) -> String {
    // Round-trips exactly through `str::parse::<f64>`.
    format!("{c:?}")
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.literal())
    }
}

/// An assignment of signs ±1 to a finite index set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern {
    signs: BTreeMap<usize, i8>,
}

impl SignPattern {
    pub fn new<I: IntoIterator<Item = (usize, i64)>>(pairs: I) -> Result<Self> {
        let mut signs = BTreeMap::new();
        for (i, s) in pairs {
            if s != 1 && s != -1 {
                return Err(LabError::InvalidSign { index: i, value: s });
            }
            signs.insert(i, s as i8);
        }
        Ok(Self { signs })
    }

    pub fn uniform(set: &[usize], sign: i8) -> Self {
        Self { signs: set.iter().map(|&i| (i, sign)).collect() }
    }

    /// Sign pattern on `set` read from the bits of `mask`: bit `b` set means
    /// the `b`-th element of `set` gets −1.
    pub fn from_mask(set: &[usize], mask: u64) -> Self {
        Self {
            signs: set
                .iter()
                .enumerate()
                .map(|(b, &i)| (i, if mask >> b & 1 == 1 { -1 } else { 1 }))
                .collect(),
        }
    }

    pub fn get(&self, i: usize) -> Option<i8> {
        self.signs.get(&i).copied()
    }
}

/// `1_{εA}`: the signed indicator of `set`. With `signs = None` all signs are +1.
pub fn indicator(set: &[usize], signs: Option<&SignPattern>) -> Result<SparseVector> {
    let mut v = SparseVector::zero();
    for &i in set {
        let s = match signs {
            None => 1,
            Some(p) => p.get(i).ok_or(LabError::MissingSign(i))?,
        };
        v.set(i, f64::from(s))?;
    }
    Ok(v)
}

/// Indicator with explicit per-element coefficients taken from `set` order.
pub(crate) fn signed_indicator(set: &[usize], mask: u64, level: f64) -> SparseVector {
    let mut v = SparseVector::zero();
    for (b, &i) in set.iter().enumerate() {
        let s = if mask >> b & 1 == 1 { -level } else { level };
        v.put(i, s);
    }
    v
}

/// `P_A x`. `set` may be in any order.
pub fn project(x: &SparseVector, set: &[usize]) -> SparseVector {
    let mut out = SparseVector::zero();
    for &i in set {
        let c = x.get(i);
        if c != 0.0 {
            out.entries.insert(i, c);
        }
    }
    out
}

/// `x − P_A x`.
pub fn project_out(x: &SparseVector, set: &[usize]) -> SparseVector {
    let mut out = x.clone();
    for &i in set {
        out.entries.remove(&i);
    }
    out
}

/// `P^n_m x`, the projection onto `{n_1, …, n_m}`.
pub fn prefix_project(x: &SparseVector, n: &IndexSequence, m: usize) -> Result<SparseVector> {
    Ok(project(x, &n.prefix(m)?))
}
