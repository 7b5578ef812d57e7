//! Greedy sets, the truncation operator, and the error of the thresholding
//! greedy algorithm against the reference errors built from `n`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::norms::NormSpec;
use crate::pairs::{binomial, count_subsets_upto, guard, subsets_upto};
use crate::sequence::IndexSequence;
use crate::vector::{project_out, SparseVector};

/// Ties may expand into at most this many greedy sets.
pub const MAX_GREEDY_SETS: usize = 10_000;

/// All greedy sets of `x` of order `m`: `|A| = m` and
/// `min_{A} |x_i| ≥ max_{ℕ∖A} |x_i|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedySetFamily {
    pub x: SparseVector,
    pub m: usize,
    pub sets: Vec<Vec<usize>>,
}

fn combinations(pool: &[usize], r: usize) -> Result<Vec<Vec<usize>>> {
    if binomial(pool.len(), r) > MAX_GREEDY_SETS as u128 {
        return Err(LabError::TooManyGreedySets(MAX_GREEDY_SETS));
    }
    Ok(subsets_upto(pool, r).into_iter().filter(|c| c.len() == r).collect())
}

/// Greedy sets restricted to the support: for `m ≥ |supp x|` this is the
/// support alone. These are the distinct residual classes `x − P_A x`.
pub fn greedy_supports(x: &SparseVector, m: usize) -> Result<Vec<Vec<usize>>> {
    if m >= x.support_len() {
        return Ok(vec![x.support()]);
    }
    if m == 0 {
        return Ok(vec![Vec::new()]);
    }
    let mut moduli: Vec<f64> = x.moduli().map(|(_, a)| a).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    let t = moduli[m - 1];
    let strict: Vec<usize> = x.moduli().filter(|&(_, a)| a > t).map(|(i, _)| i).collect();
    let ties: Vec<usize> = x.moduli().filter(|&(_, a)| a == t).map(|(i, _)| i).collect();
    let mut sets: Vec<Vec<usize>> = combinations(&ties, m - strict.len())?
        .into_iter()
        .map(|c| {
            let mut s = strict.clone();
            s.extend(c);
            s.sort_unstable();
            s
        })
        .collect();
    sets.sort();
    Ok(sets)
}

/// All greedy sets of order `m` inside `[1, window] ∪ supp x`; zero
/// coordinates pad the support when `m > |supp x|`.
pub fn greedy_sets(x: &SparseVector, m: usize, window: usize) -> Result<GreedySetFamily> {
    let mut universe: Vec<usize> = (1..=window).collect();
    universe.extend(x.support().into_iter().filter(|&i| i > window));
    if m > universe.len() {
        return Err(LabError::Window { window, needed: format!("order {m} greedy sets") });
    }
    let supp = x.support();
    let sets = if m <= supp.len() {
        greedy_supports(x, m)?
    } else {
        let zeros: Vec<usize> = universe.iter().copied().filter(|&i| !x.contains(i)).collect();
        let mut sets: Vec<Vec<usize>> = combinations(&zeros, m - supp.len())?
            .into_iter()
            .map(|c| {
                let mut s = supp.clone();
                s.extend(c);
                s.sort_unstable();
                s
            })
            .collect();
        sets.sort();
        sets
    };
    Ok(GreedySetFamily { x: x.clone(), m, sets })
}

/// `T_α`: coefficients with modulus above `α` are clamped to `sign·α`.
pub fn truncate(x: &SparseVector, alpha: f64) -> Result<SparseVector> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(LabError::NonPositiveLevel(alpha));
    }
    SparseVector::from_pairs(x.iter().map(|(i, c)| (i, if c.abs() > alpha { alpha * c.signum() } else { c })))
}

/// `γ_m(x) = sup_A ‖x − P_A x‖` over the greedy sets of order `m`.
pub fn gamma(x: &SparseVector, norm: &NormSpec, m: usize) -> Result<f64> {
    let mut best = 0.0f64;
    for a in greedy_supports(x, m)? {
        best = best.max(norm.value(&project_out(x, &a))?);
    }
    Ok(best)
}

/// `σ̂^n_m(x) = min_{0 ≤ k ≤ m} ‖x − P^n_k x‖`, with the minimizing `k`.
pub fn sigma_hat(x: &SparseVector, norm: &NormSpec, n: &IndexSequence, m: usize) -> Result<(f64, usize)> {
    let prefix = n.prefix(m)?;
    let mut best = (norm.value(x)?, 0);
    for k in 1..=m {
        let v = norm.value(&project_out(x, &prefix[..k]))?;
        if v < best.0 {
            best = (v, k);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceErrors {
    /// Best prefix projection `min_{k ≤ m} ‖x − P^n_k x‖`.
    pub sigma_hat: f64,
    /// Best projection onto any `m` elements of `n`.
    pub sigma_tilde: f64,
    /// Best projection onto `m` consecutive elements of `n`.
    pub sigma_check: f64,
    /// Best projection onto an `n`-interval meeting the support in at most `m` points.
    pub sigma_bar: f64,
}

/// The four reference errors. Only the part of a projection meeting the
/// support matters, so each infimum runs over traces on the support; sets
/// are completed with zero coordinates of `n` inside `[1, window]`, which
/// must cover the support and leave room for one block past it.
pub fn reference_errors(
    x: &SparseVector,
    norm: &NormSpec,
    n: &IndexSequence,
    m: usize,
    window: usize,
) -> Result<ReferenceErrors> {
    if let Some(top) = x.max_index() {
        if top > window {
            return Err(LabError::Window { window, needed: format!("support reaches {top}") });
        }
    }
    let avail = n.elements_upto(window);
    if avail.len() < m {
        return Err(LabError::Window { window, needed: format!("{m} elements of n") });
    }
    let (sigma_hat, _) = sigma_hat(x, norm, n, m)?;
    let on_n: Vec<usize> = x.support().into_iter().filter(|&i| n.contains(i)).collect();
    let full = norm.value(x)?;

    guard(count_subsets_upto(on_n.len(), m))?;
    let mut sigma_tilde = f64::INFINITY;
    for d in subsets_upto(&on_n, m) {
        // Pad with zero coordinates of n to reach exactly m elements.
        if avail.len() - on_n.len() >= m - d.len() {
            sigma_tilde = sigma_tilde.min(norm.value(&project_out(x, &d))?);
        }
    }

    let positions: Vec<usize> = on_n.iter().map(|&i| n.index_of(i).expect("in n")).collect();
    let last = positions.last().copied().unwrap_or(0);
    let mut sigma_check = f64::INFINITY;
    for k in 0.. {
        let Some(end) = (if m == 0 { Some(0) } else { n.nth(k + m) }) else { break };
        if end > window {
            break;
        }
        if k + 1 > last || m == 0 {
            // Blocks past the support remove nothing.
            sigma_check = sigma_check.min(full);
            break;
        }
        let block = n.positions(k + 1, k + m)?;
        sigma_check = sigma_check.min(norm.value(&project_out(x, &block))?);
    }

    // An interval of n meets the support in a run of consecutive support
    // points of n; any run is realized by the interval between its ends.
    let mut sigma_bar = full;
    for start in 0..on_n.len() {
        for end in start + 1..=(start + m).min(on_n.len()) {
            sigma_bar = sigma_bar.min(norm.value(&project_out(x, &on_n[start..end]))?);
        }
    }
    Ok(ReferenceErrors { sigma_hat, sigma_tilde, sigma_check, sigma_bar })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub m: usize,
    pub gamma: f64,
    pub sigma_hat: f64,
    pub sigma_tilde: f64,
    pub sigma_check: f64,
    pub sigma_bar: f64,
    /// `γ_m / σ̂_m`; `+∞` when `σ̂_m = 0 < γ_m`, NaN when both vanish.
    pub ratio: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorProfile {
    pub rows: Vec<ProfileRow>,
}

pub fn tga_error_profile(
    x: &SparseVector,
    norm: &NormSpec,
    n: &IndexSequence,
    m_max: usize,
    window: usize,
) -> Result<ErrorProfile> {
    let mut rows = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if m > window {
            return Err(LabError::Window { window, needed: format!("order {m} greedy sets") });
        }
        let r = reference_errors(x, norm, n, m, window)?;
        let g = gamma(x, norm, m)?;
        let ratio = if r.sigma_hat > 0.0 {
            g / r.sigma_hat
        } else if g > 0.0 {
            f64::INFINITY
        } else {
            f64::NAN
        };
        rows.push(ProfileRow {
            m,
            gamma: g,
            sigma_hat: r.sigma_hat,
            sigma_tilde: r.sigma_tilde,
            sigma_check: r.sigma_check,
            sigma_bar: r.sigma_bar,
            ratio,
        });
    }
    Ok(ErrorProfile { rows })
}

impl ErrorProfile {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["m", "gamma", "sigma_hat", "sigma_tilde", "sigma_check", "sigma_bar", "ratio"])
            .expect("in-memory write");
        for r in &self.rows {
            let cells = [r.gamma, r.sigma_hat, r.sigma_tilde, r.sigma_check, r.sigma_bar, r.ratio];
            let mut rec = vec![r.m.to_string()];
            rec.extend(cells.iter().map(|v| v.to_string()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::norm;
    use crate::oracle::greedy_sets_brute;
    use crate::vector::indicator;

    fn v(pairs: &[(usize, f64)]) -> SparseVector {
        SparseVector::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn greedy_set_examples() {
        let x = v(&[(1, 3.0), (2, 2.0), (3, 2.0)]);
        assert_eq!(greedy_sets(&x, 2, 3).unwrap().sets, vec![vec![1, 2], vec![1, 3]]);
        assert_eq!(greedy_sets(&x, 1, 3).unwrap().sets, vec![vec![1]]);
        let ones = indicator(&[1, 2, 3], None).unwrap();
        assert_eq!(greedy_sets(&ones, 2, 3).unwrap().sets.len(), 3);
        assert_eq!(greedy_sets(&x, 4, 5).unwrap().sets, vec![vec![1, 2, 3, 4], vec![1, 2, 3, 5]]);
        assert!(greedy_sets(&x, 6, 5).is_err());
    }

    #[test]
    fn greedy_sets_match_the_brute_filter() {
        let levels = [1.0, -1.0, 0.5, 2.0];
        for seed in 0..400u64 {
            let mut x = SparseVector::zero();
            for k in 0..5u64 {
                let i = ((seed * 7 + k * 13) % 9 + 1) as usize;
                x.set(i, levels[((seed >> k) % 4) as usize]).unwrap();
            }
            for m in 0..=9 {
                assert_eq!(greedy_sets(&x, m, 9).unwrap().sets, greedy_sets_brute(&x, m, 9), "{x} m={m}");
            }
        }
    }

    #[test]
    fn tie_expansion_is_capped() {
        let big = indicator(&(1..=40).collect::<Vec<_>>(), None).unwrap();
        assert_eq!(greedy_supports(&big, 20), Err(LabError::TooManyGreedySets(MAX_GREEDY_SETS)));
    }

    #[test]
    fn truncation_examples() {
        let x = v(&[(1, 3.0), (2, -2.0), (3, 0.5)]);
        assert_eq!(truncate(&x, 1.0).unwrap(), v(&[(1, 1.0), (2, -1.0), (3, 0.5)]));
        assert_eq!(truncate(&x, 3.0).unwrap(), x);
        assert!(truncate(&SparseVector::zero(), 2.0).unwrap().is_zero());
        assert!(truncate(&x, 0.0).is_err());
    }

    #[test]
    fn reference_error_examples() {
        let l1 = norm("l1").unwrap();
        let evens = IndexSequence::evens();
        let r = reference_errors(&SparseVector::unit(2), &l1, &evens, 1, 10).unwrap();
        assert_eq!(r.sigma_hat, 0.0);
        let x = v(&[(1, 1.0), (2, 1.0)]);
        let r = reference_errors(&x, &l1, &evens, 1, 10).unwrap();
        assert_eq!(r.sigma_tilde, 1.0);
        let y = v(&[(1, 0.5), (2, -1.0), (4, 2.0), (7, 1.0)]);
        let full = l1.value(&y).unwrap();
        let r = reference_errors(&y, &l1, &evens, 0, 10).unwrap();
        assert_eq!([r.sigma_hat, r.sigma_tilde, r.sigma_check, r.sigma_bar], [full; 4]);
        let r = reference_errors(&y, &l1, &evens, 1, 10).unwrap();
        assert_eq!(r.sigma_tilde, 2.5);
        assert_eq!(r.sigma_check, 2.5);
        assert_eq!(r.sigma_bar, 2.5);
        assert_eq!(r.sigma_hat, 3.5);
    }

    #[test]
    fn split_profile_reaches_two() {
        let split = norm("split").unwrap();
        let n = IndexSequence::evens();
        let eta = 1e-6;
        // 1_{A_1} + e_{n_3} + (1+η) 1_{B_2}.
        let mut x = indicator(&[n.nth(1).unwrap(), n.nth(3).unwrap()], None).unwrap();
        for p in [6, 8] {
            x.set(n.nth(p).unwrap(), 1.0 + eta).unwrap();
        }
        let profile = tga_error_profile(&x, &split, &n, 2, 20).unwrap();
        assert!(profile.rows[2].ratio >= 2.0 / (1.0 + eta) - 1e-12);
        assert_eq!(profile.rows[0].gamma, split.value(&x).unwrap());
    }

    #[test]
    fn zero_vector_profile() {
        let p = tga_error_profile(&SparseVector::zero(), &norm("l1").unwrap(), &IndexSequence::evens(), 3, 10)
            .unwrap();
        assert!(p.rows.iter().all(|r| r.gamma == 0.0 && r.ratio.is_nan()));
        let csv = p.to_csv();
        assert!(csv.starts_with("m,gamma,sigma_hat,sigma_tilde,sigma_check,sigma_bar,ratio\n0,0,0,0,0,0,NaN"));
    }
}
