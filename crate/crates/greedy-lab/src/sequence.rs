//! Strictly increasing index sequences `n = (n_k)` with 1-based positions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    Arithmetic { first: usize, step: usize },
    List { elements: Vec<usize> },
    Predicate { name: String, window: usize },
}

/// A strictly increasing sequence of positive integers. Arithmetic rules are
/// infinite; lists and predicate rules are materialized and finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceSpec", into = "SequenceSpec")]
pub struct IndexSequence {
    spec: SequenceSpec,
    elements: Vec<usize>,
}

impl TryFrom<SequenceSpec> for IndexSequence {
    type Error = LabError;

    fn try_from(spec: SequenceSpec) -> Result<Self> {
        match spec {
            SequenceSpec::Arithmetic { first, step } => {
                if first == 0 || step == 0 {
                    return Err(LabError::Config(format!(
                        "arithmetic sequence needs first >= 1 and step >= 1, got {first}, {step}"
                    )));
                }
                Ok(Self::arithmetic(first, step))
            }
            SequenceSpec::List { elements } => Self::list(elements),
            SequenceSpec::Predicate { name, window } => Self::predicate(&name, window),
        }
    }
}

impl From<IndexSequence> for SequenceSpec {
    fn from(s: IndexSequence) -> Self {
        s.spec
    }
}

fn is_prime(k: usize) -> bool {
    k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d))
}

fn predicate_holds(name: &str, k: usize) -> Result<bool> {
    Ok(match name {
        "naturals" => true,
        "evens" => k.is_multiple_of(2),
        "odds" => k % 2 == 1,
        "squares" => {
            let r = k.isqrt();
            r * r == k
        }
        "powers_of_two" => k.is_power_of_two(),
        "primes" => is_prime(k),
        _ if name.starts_with("notmod") => !predicate_holds(&name[3..], k)?,
        _ => {
            // `mod<q>_<r>`: all k with k ≡ r (mod q).
            let rest = name
                .strip_prefix("mod")
                .ok_or_else(|| LabError::UnknownSequence(name.to_string()))?;
            let (q, r) = rest
                .split_once('_')
                .ok_or_else(|| LabError::UnknownSequence(name.to_string()))?;
            let q: usize = q.parse().map_err(|_| LabError::UnknownSequence(name.to_string()))?;
            let r: usize = r.parse().map_err(|_| LabError::UnknownSequence(name.to_string()))?;
            if q == 0 {
                return Err(LabError::UnknownSequence(name.to_string()));
            }
            k % q == r % q
        }
    })
}

impl IndexSequence {
    pub fn arithmetic(first: usize, step: usize) -> Self {
        assert!(first >= 1 && step >= 1, "arithmetic sequence needs positive first and step");
        Self { spec: SequenceSpec::Arithmetic { first, step }, elements: Vec::new() }
    }

    pub fn naturals() -> Self {
        Self::arithmetic(1, 1)
    }

    pub fn evens() -> Self {
        Self::arithmetic(2, 2)
    }

    pub fn odds() -> Self {
        Self::arithmetic(1, 2)
    }

    pub fn list(elements: Vec<usize>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(LabError::InvalidIndex(0));
        }
        if let Some(p) = elements.windows(2).position(|w| w[0] >= w[1]) {
            return Err(LabError::NotIncreasing(p + 2));
        }
        Ok(Self { spec: SequenceSpec::List { elements: elements.clone() }, elements })
    }

    pub fn predicate(name: &str, window: usize) -> Result<Self> {
        let mut elements = Vec::new();
        for k in 1..=window {
            if predicate_holds(name, k)? {
                elements.push(k);
            }
        }
        if window == 0 {
            predicate_holds(name, 1)?;
        }
        Ok(Self { spec: SequenceSpec::Predicate { name: name.to_string(), window }, elements })
    }

    /// Resolves a short name (`naturals`, `evens`, `odds`) or a JSON spec.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "naturals" | "N" => Ok(Self::naturals()),
            "evens" => Ok(Self::evens()),
            "odds" => Ok(Self::odds()),
            t if t.starts_with('{') => {
                serde_json::from_str(t).map_err(|e| LabError::Parse(e.to_string()))
            }
            t => Err(LabError::UnknownSequence(t.to_string())),
        }
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    /// Number of elements, `None` for infinite rules.
    pub fn len(&self) -> Option<usize> {
        match self.spec {
            SequenceSpec::Arithmetic { .. } => None,
            _ => Some(self.elements.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `n_k`, 1-based.
    pub fn nth(&self, k: usize) -> Option<usize> {
        if k == 0 {
            return None;
        }
        match self.spec {
            SequenceSpec::Arithmetic { first, step } => Some(first + (k - 1) * step),
            _ => self.elements.get(k - 1).copied(),
        }
    }

    /// `ι(j)`: the position of `j` in the sequence.
    pub fn index_of(&self, j: usize) -> Option<usize> {
        match self.spec {
            SequenceSpec::Arithmetic { first, step } => {
                (j >= first && (j - first).is_multiple_of(step)).then(|| (j - first) / step + 1)
            }
            _ => self.elements.binary_search(&j).ok().map(|p| p + 1),
        }
    }

    pub fn contains(&self, j: usize) -> bool {
        self.index_of(j).is_some()
    }

    /// `{n_1, …, n_m}`.
    pub fn prefix(&self, m: usize) -> Result<Vec<usize>> {
        (1..=m).map(|k| self.nth(k).ok_or(LabError::MissingElement(k))).collect()
    }

    /// Elements at positions `from..=to`.
    pub fn positions(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        (from..=to).map(|k| self.nth(k).ok_or(LabError::MissingElement(k))).collect()
    }

    /// Number of elements strictly below `v`.
    pub fn count_below(&self, v: usize) -> usize {
        match self.spec {
            SequenceSpec::Arithmetic { first, step } => {
                if v <= first {
                    0
                } else {
                    (v - 1 - first) / step + 1
                }
            }
            _ => self.elements.partition_point(|&e| e < v),
        }
    }

    /// All elements `<= limit`.
    pub fn elements_upto(&self, limit: usize) -> Vec<usize> {
        let count = self.count_below(limit + 1);
        (1..=count).filter_map(|k| self.nth(k)).collect()
    }

    /// For predicate rules, the bound up to which the rule was materialized;
    /// membership beyond it is not represented.
    pub fn materialized_upto(&self) -> Option<usize> {
        match self.spec {
            SequenceSpec::Predicate { window, .. } => Some(window),
            _ => None,
        }
    }

    /// Short human-readable description used as the `n id` in reports.
    pub fn label(&self) -> String {
        match &self.spec {
            SequenceSpec::Arithmetic { first: 1, step: 1 } => "naturals".into(),
            SequenceSpec::Arithmetic { first: 2, step: 2 } => "evens".into(),
            SequenceSpec::Arithmetic { first: 1, step: 2 } => "odds".into(),
            SequenceSpec::Arithmetic { first, step } => format!("arith({first},{step})"),
            SequenceSpec::List { elements } => {
                let head: Vec<String> = elements.iter().take(4).map(|e| e.to_string()).collect();
                let more = if elements.len() > 4 { ",..." } else { "" };
                format!("list({}{more})", head.join(","))
            }
            SequenceSpec::Predicate { name, window } => format!("{name}<={window}"),
        }
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_positions_and_inverse() {
        let n = IndexSequence::evens();
        assert_eq!(n.nth(1), Some(2));
        assert_eq!(n.nth(7), Some(14));
        assert_eq!(n.index_of(14), Some(7));
        assert_eq!(n.index_of(13), None);
        assert_eq!(n.count_below(2), 0);
        assert_eq!(n.count_below(3), 1);
        assert_eq!(n.count_below(7), 3);
        assert_eq!(n.elements_upto(9), vec![2, 4, 6, 8]);
    }

    #[test]
    fn lists_must_increase() {
        assert!(IndexSequence::list(vec![1, 3, 3]).is_err());
        assert!(IndexSequence::list(vec![0, 3]).is_err());
        let s = IndexSequence::list(vec![3, 5, 11]).unwrap();
        assert_eq!(s.index_of(11), Some(3));
        assert_eq!(s.nth(4), None);
        assert_eq!(s.count_below(11), 2);
    }

    #[test]
    fn predicates_materialize_within_window() {
        let sq = IndexSequence::predicate("squares", 50).unwrap();
        assert_eq!(sq.elements_upto(50), vec![1, 4, 9, 16, 25, 36, 49]);
        let p2 = IndexSequence::predicate("powers_of_two", 64).unwrap();
        assert_eq!(p2.nth(7), Some(64));
        let r = IndexSequence::predicate("mod3_0", 12).unwrap();
        assert_eq!(r.elements_upto(12), vec![3, 6, 9, 12]);
        let c = IndexSequence::predicate("notmod3_1", 9).unwrap();
        assert_eq!(c.elements_upto(9), vec![2, 3, 5, 6, 8, 9]);
        assert!(IndexSequence::predicate("fibonacci", 10).is_err());
    }

    #[test]
    fn serde_forms() {
        let a: IndexSequence = serde_json::from_str(r#"{"kind":"arithmetic","first":2,"step":2}"#).unwrap();
        assert_eq!(a, IndexSequence::evens());
        let l: IndexSequence = serde_json::from_str(r#"{"kind":"list","elements":[1,4,9]}"#).unwrap();
        assert_eq!(l.nth(3), Some(9));
        let p: IndexSequence =
            serde_json::from_str(r#"{"kind":"predicate","name":"primes","window":20}"#).unwrap();
        assert_eq!(p.elements_upto(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(serde_json::from_str::<IndexSequence>(r#"{"kind":"list","elements":[2,1]}"#).is_err());
        let back = serde_json::to_string(&IndexSequence::evens()).unwrap();
        assert_eq!(back, r#"{"kind":"arithmetic","first":2,"step":2}"#);
    }
}
