//! Brute-force evaluators written straight from the defining suprema, used to
//! cross-check the fast evaluators, plus the deterministic sample library.
//!
//! Everything here is exponential and meant for supports of a handful of
//! coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::norms::{
    BlockMode, Combiner, Coordinates, Family, FamilyComponent, FamilyPredicate, NormSpec, Selector,
    Tail, WeightSeq,
};
use crate::pairs::subsets_upto;
use crate::sequence::IndexSequence;
use crate::vector::SparseVector;

/// Seed of every sampled library in the crate.
pub const SEED: u64 = 0x5EED;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, k - 1);
            out.push(q);
        }
    }
    out
}

/// `max_π Σ_r w_{π(r)} m_r` over all bijections of `{1..k}`.
fn best_pairing(moduli: &[f64], w: WeightSeq) -> f64 {
    permutations(moduli.len())
        .into_iter()
        .map(|p| p.iter().zip(moduli).map(|(&r, &m)| w.at(r + 1) * m).sum::<f64>())
        .fold(0.0, f64::max)
}

fn selects(sel: &Selector, i: usize) -> bool {
    match sel {
        Selector::All => true,
        Selector::In(s) => s.contains(i),
        Selector::NotIn(s) => !s.contains(i),
    }
}

fn family_component(c: &FamilyComponent, x: &SparseVector) -> f64 {
    let coord_of = |i: usize| -> Option<usize> {
        let pos = c.domain.index_of(i)?;
        Some(match c.coordinates {
            Coordinates::Positions => pos,
            Coordinates::Indices => i,
        })
    };
    let coords: Vec<(usize, f64)> = x.moduli().filter_map(|(i, m)| Some((coord_of(i)?, m))).collect();
    let Some(&(top, _)) = coords.last() else { return 0.0 };
    // All coordinate sets F inside [1, top] (zeros included), checked against
    // the admissibility predicate literally.
    let universe: Vec<usize> = (1..=top)
        .filter(|&v| match c.coordinates {
            Coordinates::Positions => true,
            Coordinates::Indices => c.domain.contains(v),
        })
        .collect();
    let pred = |v: usize| -> f64 {
        match &c.predicate {
            FamilyPredicate::SqrtMin => v as f64,
            FamilyPredicate::SqrtPhi { k } => {
                (1..v).filter(|&t| k.contains(t)).count().max(1) as f64
            }
        }
    };
    // pred is non-decreasing, so no admissible F is larger than this.
    let cap = pred(top).sqrt() as usize;
    let mut best = 0.0f64;
    for f in subsets_upto(&universe, cap) {
        let Some(&min) = f.first() else { continue };
        if pred(min).sqrt() < f.len() as f64 {
            continue;
        }
        let moduli: Vec<f64> = f
            .iter()
            .map(|&v| coords.iter().find(|&&(cv, _)| cv == v).map_or(0.0, |&(_, m)| m))
            .collect();
        best = best.max(best_pairing(&moduli, c.weights));
    }
    best
}

fn top_subset_sum(items: &[f64], cap: usize, p: f64) -> f64 {
    let idx: Vec<usize> = (0..items.len()).collect();
    subsets_upto(&idx, cap.min(items.len()))
        .into_iter()
        .map(|t| t.iter().map(|&r| items[r].abs().powf(p)).sum::<f64>().powf(1.0 / p))
        .fold(0.0, f64::max)
}

/// Brute-force value of `spec` at `x`, from the displayed definitions.
pub fn brute_force(spec: &NormSpec, x: &SparseVector) -> Result<f64> {
    let n = &spec.n;
    Ok(match &spec.family {
        Family::PartitionedRearrangement(p) => {
            let mut terms = Vec::new();
            for b in &p.blocks {
                let m: Vec<f64> = x.moduli().filter(|&(i, _)| selects(&b.select, i)).map(|(_, m)| m).collect();
                terms.push(match b.mode {
                    BlockMode::Lp(q) => m.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q),
                    BlockMode::Linf => m.iter().copied().fold(0.0, f64::max),
                    BlockMode::Weights(w) => best_pairing(&m, w),
                });
            }
            match p.combiner {
                Combiner::Sum => terms.iter().sum(),
                Combiner::Max => terms.iter().copied().fold(0.0, f64::max),
            }
        }
        Family::FamilyWeight(p) => {
            let comps: f64 = p.components.iter().map(|c| family_component(c, x)).sum();
            let tail = match &p.tail {
                Tail::None => 0.0,
                Tail::L2 => x.iter().map(|(_, c)| c * c).sum::<f64>().sqrt(),
                Tail::L1Off(seqs) => {
                    x.iter().filter(|&(i, _)| seqs.iter().all(|s| !s.contains(i))).map(|(_, c)| c.abs()).sum()
                }
            };
            comps + tail
        }
        Family::Summing(p) => summing(x, p.sequence.as_ref().unwrap_or(n)),
        Family::SplitL1Sup(_) => {
            let odd: f64 =
                x.moduli().filter(|&(i, _)| n.index_of(i).is_some_and(|p| p % 2 == 1)).map(|(_, m)| m).sum();
            let even = x.moduli().filter(|&(i, _)| n.index_of(i).is_some_and(|p| p % 2 == 0)).map(|(_, m)| m);
            let off = x.moduli().filter(|&(i, _)| !n.contains(i)).map(|(_, m)| m);
            odd.max(even.fold(0.0, f64::max)).max(off.fold(0.0, f64::max))
        }
        Family::LambdaWeight(p) => {
            let sub = p.subsequence(n);
            let supp = x.support();
            let mut best = 0.0f64;
            for f in subsets_upto(&supp, supp.len()) {
                let moduli: Vec<f64> = f.iter().map(|&i| x.get(i).abs()).collect();
                let inside = f.iter().all(|i| sub.binary_search(i).is_ok());
                best = best.max(best_pairing(&moduli, WeightSeq::Harmonic));
                if inside {
                    best = best.max(best_pairing(&moduli, WeightSeq::InvSqrt));
                }
            }
            best
        }
        Family::GapOrder(p) => {
            let mut best = x.sup_norm();
            let sizes = p.s.iter().map(|&s| Some(s)).chain([None]);
            for size in sizes {
                let eligible: Vec<f64> = x
                    .iter()
                    .filter(|&(i, _)| match (n.index_of(i), size) {
                        (None, _) => true,
                        (Some(pos), Some(s)) => pos > s,
                        (Some(_), None) => false,
                    })
                    .map(|(_, c)| c)
                    .collect();
                best = best.max(top_subset_sum(&eligible, size.unwrap_or(usize::MAX), 1.0));
            }
            for (j0, &kj) in p.k.iter().enumerate() {
                let base = p.s[kj - 1];
                let mut sum = 0.0f64;
                for i in 1..=(j0 + 1) * base {
                    sum += x.get(n.nth(base + i).expect("infinite n"));
                    best = best.max(sum.abs());
                }
            }
            best
        }
        Family::GapPk(p) => {
            let off: Vec<f64> = x.iter().filter(|&(i, _)| !n.contains(i)).map(|(_, c)| c).collect();
            let lp = |v: &[f64], q: f64| v.iter().map(|c| c.abs().powf(q)).sum::<f64>().powf(1.0 / q);
            let mut best = x.sup_norm().max(lp(&off, 1.0));
            for (k0, (&sk, &q)) in p.s.iter().zip(&p.p).enumerate() {
                let beyond: Vec<f64> =
                    x.iter().filter(|&(i, _)| n.index_of(i).is_some_and(|pos| pos > sk)).map(|(_, c)| c).collect();
                let cap = 10usize.saturating_pow(k0 as u32 + 1);
                best = best.max(top_subset_sum(&beyond, cap, q) + lp(&off, q));
            }
            for (j0, &kj) in p.k.iter().enumerate() {
                let base = p.s[kj - 1];
                let block: Vec<f64> =
                    (1..=10usize.pow(j0 as u32 + 1)).map(|i| x.get(n.nth(base + i).expect("infinite n"))).collect();
                best = best.max(lp(&block, p.p[kj]));
            }
            best
        }
    })
}

fn summing(x: &SparseVector, n: &IndexSequence) -> f64 {
    let last = x.iter().filter_map(|(i, _)| n.index_of(i)).max().unwrap_or(0);
    let mut sum = 0.0f64;
    let mut best = 0.0f64;
    for m in 1..=last {
        sum += x.get(n.nth(m).expect("position below a support element"));
        best = best.max(sum.abs());
    }
    best + x.moduli().filter(|&(i, _)| !n.contains(i)).map(|(_, m)| m).fold(0.0, f64::max)
}

/// All greedy sets of order `m` by filtering every `m`-subset of the window.
pub fn greedy_sets_brute(x: &SparseVector, m: usize, window: usize) -> Vec<Vec<usize>> {
    let universe: Vec<usize> = (1..=window).collect();
    subsets_upto(&universe, m)
        .into_iter()
        .filter(|a| a.len() == m)
        .filter(|a| {
            let inside = a.iter().map(|&i| x.get(i).abs()).fold(f64::INFINITY, f64::min);
            let outside = universe
                .iter()
                .filter(|i| !a.contains(i))
                .map(|&i| x.get(i).abs())
                .fold(0.0, f64::max);
            a.is_empty() || inside >= outside
        })
        .collect()
}

/// Deterministic sample of vectors with `1..=max_support` coordinates in
/// `[1, window]`. Coefficients come from a small set of levels (so ties and
/// sign cancellations occur) mixed with uniform draws.
pub fn sample_library(count: usize, max_support: usize, window: usize, seed: u64) -> Vec<SparseVector> {
    const LEVELS: [f64; 5] = [0.25, 0.5, 1.0, 1.5, 2.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=max_support.min(window));
            let mut v = SparseVector::zero();
            while v.support_len() < k {
                let i = rng.gen_range(1..=window);
                let mag = if rng.gen_bool(0.7) { LEVELS[rng.gen_range(0..LEVELS.len())] } else { rng.gen_range(0.01..3.0) };
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                v.set(i, sign * mag).expect("positive index");
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(4).len(), 24);
        let mut p = permutations(3);
        p.sort();
        p.dedup();
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn library_is_deterministic() {
        let a = sample_library(20, 6, 12, SEED);
        let b = sample_library(20, 6, 12, SEED);
        assert_eq!(a, b);
        assert!(a.iter().all(|v| (1..=6).contains(&v.support_len()) && v.max_index().unwrap() <= 12));
    }

    #[test]
    fn brute_greedy_examples() {
        let x = SparseVector::from_pairs([(1, 3.0), (2, 2.0), (3, 2.0)]).unwrap();
        assert_eq!(greedy_sets_brute(&x, 2, 3), vec![vec![1, 2], vec![1, 3]]);
        assert_eq!(greedy_sets_brute(&x, 1, 3), vec![vec![1]]);
    }
}
