//! Random-hyperplane rounding, balancing to an equipartition, and the
//! best-of-`T` bisection driver.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{big_f64, binom_big, stream_rng};
use crate::embed::{build_embedding, Embedding};
use crate::error::Result;
use crate::hypergraph::{EdgeMultiset, Hypergraph, MixedHypergraph};

pub const DEFAULT_TRIALS: usize = 200;

/// How `balance` picks the vertices it moves to the smaller side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BalanceMode {
    /// Uniformly random subset of the larger side.
    Paper,
    /// Repeatedly move the vertex with the best change in internal edges.
    #[default]
    Greedy,
}

impl std::str::FromStr for BalanceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Self::Paper),
            "greedy" => Ok(Self::Greedy),
            other => Err(format!("unknown balance mode {other:?} (expected paper|greedy)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub e_x: u64,
    pub e_y: u64,
    /// Edges meeting both parts.
    pub cross: u64,
    /// `e(X) + e(Y) − Δ·||X| − |Y||`.
    pub objective: i64,
    /// `Σ_e (1 − 2^{1−|e|}) − cross`; only set for equipartitions.
    pub advantage: Option<f64>,
    pub seed: u64,
    pub trial: u64,
}

impl CutResult {
    pub fn is_equipartition(&self) -> bool {
        self.x.len().abs_diff(self.y.len()) <= 1
    }

    pub fn side_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.x {
            mask[v] = true;
        }
        mask
    }
}

/// `(e(X), e(Y), cross)` for the partition with `side[v] == true` meaning `v ∈ X`.
pub fn partition_counts(h: &EdgeMultiset, side: &[bool]) -> (u64, u64, u64) {
    let (mut ex, mut ey, mut cross) = (0, 0, 0);
    for (e, m) in h.edges() {
        let inside = e.iter().filter(|&&v| side[v as usize]).count();
        if inside == e.len() {
            ex += m;
        } else if inside == 0 {
            ey += m;
        } else {
            cross += m;
        }
    }
    (ex, ey, cross)
}

/// `Σ_e m(e) (1 − 2^{1−|e|})`, the limit of the random-bisection size.
pub fn asymptotic_baseline(h: &EdgeMultiset) -> f64 {
    h.edges()
        .map(|(e, m)| m as f64 * (1.0 - 2f64.powi(1 - e.len() as i32)))
        .sum()
}

fn evaluate(h: &EdgeMultiset, side: &[bool], seed: u64, trial: u64) -> CutResult {
    let (e_x, e_y, cross) = partition_counts(h, side);
    let x: Vec<usize> = (0..side.len()).filter(|&v| side[v]).collect();
    let y: Vec<usize> = (0..side.len()).filter(|&v| !side[v]).collect();
    let imbalance = x.len().abs_diff(y.len()) as i64;
    let objective = (e_x + e_y) as i64 - h.max_degree() as i64 * imbalance;
    let advantage = (imbalance <= 1).then(|| asymptotic_baseline(h) - cross as f64);
    CutResult {
        x,
        y,
        e_x,
        e_y,
        cross,
        objective,
        advantage,
        seed,
        trial,
    }
}

/// One rounding: `X = {v : ⟨y_v, w⟩ ≥ 0}` for a Gaussian `w` drawn from
/// stream `(seed, trial)`.
pub fn hyperplane_round(emb: &Embedding, h: &EdgeMultiset, seed: u64, trial: u64) -> CutResult {
    let side = hyperplane_side(emb, seed, trial);
    evaluate(h, &side, seed, trial)
}

pub fn hyperplane_side(emb: &Embedding, seed: u64, trial: u64) -> Vec<bool> {
    let mut rng = stream_rng(seed, trial);
    let w: Vec<f64> = (0..emb.n()).map(|_| StandardNormal.sample(&mut rng)).collect();
    (0..emb.n()).map(|v| emb.project(v, &w) >= 0.0).collect()
}

/// Moves `⌊n/2⌋ − |small|` vertices from the larger part to the smaller one.
/// The moved set's destroyed edges are at most `|S| Δ`. Greedy mode then
/// applies improving `X ↔ Y` swaps, which keep the sizes and only lower the
/// cut.
pub fn balance(c: &CutResult, h: &EdgeMultiset, mode: BalanceMode) -> CutResult {
    let n = h.n();
    let mut side = c.side_mask(n);
    // Work with `small` as the smaller side label.
    let small = c.x.len() <= c.y.len();
    let small_len = c.x.len().min(c.y.len());
    let k = n / 2 - small_len;
    let large: Vec<usize> = (0..n).filter(|&v| side[v] != small).collect();
    match mode {
        BalanceMode::Paper => {
            let mut rng = stream_rng(c.seed ^ 0x9e37_79b9_7f4a_7c15, c.trial);
            for i in sample(&mut rng, large.len(), k) {
                side[large[i]] = small;
            }
        }
        BalanceMode::Greedy => {
            let mut in_small: Vec<usize> = (0..h.distinct_edges())
                .map(|i| h.edge(i).iter().filter(|&&v| side[v as usize] == small).count())
                .collect();
            let mut candidates = large;
            for _ in 0..k {
                let (pos, _) = candidates
                    .iter()
                    .enumerate()
                    .map(|(pos, &v)| {
                        let net: i64 = h
                            .incident(v)
                            .iter()
                            .map(|&e| {
                                let e = e as usize;
                                let m = h.multiplicity(e) as i64;
                                let len = h.edge(e).len();
                                match in_small[e] {
                                    0 => -m,
                                    c if c + 1 == len => m,
                                    _ => 0,
                                }
                            })
                            .sum();
                        (pos, net)
                    })
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                    .expect("larger side has at least k vertices");
                let v = candidates.remove(pos);
                side[v] = small;
                for &e in h.incident(v) {
                    in_small[e as usize] += 1;
                }
            }
            refine_swaps(h, &mut side);
        }
    }
    evaluate(h, &side, c.seed, c.trial)
}

/// Change in the cut when `a` and `b` (on opposite sides) trade places.
fn swap_delta(h: &EdgeMultiset, in_x: &[usize], side: &[bool], a: usize, b: usize) -> i64 {
    let mut delta = 0i64;
    for (v, other) in [(a, b), (b, a)] {
        let step: isize = if side[v] { -1 } else { 1 };
        for &e in h.incident(v) {
            let e = e as usize;
            let edge = h.edge(e);
            if edge.contains(&(other as u32)) {
                continue;
            }
            let len = edge.len();
            let before = in_x[e];
            let after = (before as isize + step) as usize;
            let crossing = |c: usize| c > 0 && c < len;
            delta += h.multiplicity(e) as i64 * (crossing(after) as i64 - crossing(before) as i64);
        }
    }
    delta
}

/// Applies the best cut-lowering swap (lowest indices on ties) until none is left.
fn refine_swaps(h: &EdgeMultiset, side: &mut [bool]) {
    let n = side.len();
    let mut in_x: Vec<usize> = (0..h.distinct_edges())
        .map(|i| h.edge(i).iter().filter(|&&v| side[v as usize]).count())
        .collect();
    // Each swap lowers the cut by at least one.
    for _ in 0..=h.edge_count() {
        let mut best: Option<(i64, usize, usize)> = None;
        for a in (0..n).filter(|&v| side[v] && h.degree(v) > 0) {
            for b in (0..n).filter(|&v| !side[v]) {
                let d = swap_delta(h, &in_x, side, a, b);
                if d < 0 && best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, a, b));
                }
            }
        }
        let Some((_, a, b)) = best else { break };
        for &e in h.incident(a) {
            in_x[e as usize] -= 1;
        }
        for &e in h.incident(b) {
            in_x[e as usize] += 1;
        }
        side[a] = false;
        side[b] = true;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectReport {
    /// Final equipartition.
    pub result: CutResult,
    /// Best rounding before balancing.
    pub best_rounding: CutResult,
    /// Exact expected size of a uniformly random bisection.
    pub baseline_expectation: f64,
    /// `Σ_e (1 − 2^{1−|e|})`.
    pub baseline_asymptote: f64,
    pub trials: usize,
    pub alpha: f64,
    pub mode: BalanceMode,
}

/// Best-of-`trials` roundings by objective (ties: lower trial index),
/// then balanced.
pub fn bisect(
    h: &Hypergraph,
    trials: usize,
    alpha: f64,
    seed: u64,
    mode: BalanceMode,
) -> Result<BisectReport> {
    bisect_store(h, h.r(), trials, alpha, seed, mode)
}

/// Mixed edge sizes: baseline is `Σ_e (1 − 2^{1−|e|})`; the embedding scale
/// uses the maximum edge size.
pub fn bisect_mixed(
    h: &MixedHypergraph,
    trials: usize,
    alpha: f64,
    seed: u64,
    mode: BalanceMode,
) -> Result<BisectReport> {
    bisect_store(h, h.max_r(), trials, alpha, seed, mode)
}

fn bisect_store(
    h: &EdgeMultiset,
    r: usize,
    trials: usize,
    alpha: f64,
    seed: u64,
    mode: BalanceMode,
) -> Result<BisectReport> {
    let best = if h.edge_count() == 0 {
        let side: Vec<bool> = (0..h.n()).map(|v| v < h.n() / 2).collect();
        evaluate(h, &side, seed, 0)
    } else {
        let emb = build_embedding(h, r, alpha)?;
        best_rounding(&emb, h, trials.max(1), seed)
    };
    let result = balance(&best, h, mode);
    Ok(BisectReport {
        result,
        best_rounding: best,
        baseline_expectation: big_f64(&random_bisection_expectation(h)),
        baseline_asymptote: asymptotic_baseline(h),
        trials,
        alpha,
        mode,
    })
}

pub fn best_rounding(emb: &Embedding, h: &EdgeMultiset, trials: usize, seed: u64) -> CutResult {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| hyperplane_round(emb, h, seed, t))
        .reduce_with(|a, b| {
            if (b.objective, std::cmp::Reverse(b.trial)) > (a.objective, std::cmp::Reverse(a.trial)) {
                b
            } else {
                a
            }
        })
        .expect("at least one trial")
}

/// Exact expected bisection size over uniformly random equipartitions.
pub fn random_bisection_expectation(h: &EdgeMultiset) -> BigRational {
    let n = h.n() as u64;
    let lo = n / 2;
    let hi = n - lo;
    let total = binom_big(n, lo);
    if total.is_zero() {
        return BigRational::zero();
    }
    let mut acc = BigRational::zero();
    for (e, m) in h.edges() {
        let k = e.len() as u64;
        let same_side = inside_count(n, lo, k) + inside_count(n, hi, k);
        let p_cross = BigRational::one() - BigRational::new(same_side, total.clone());
        acc += p_cross * BigRational::from_integer(BigInt::from(m));
    }
    acc
}

/// Number of `part`-subsets of an `n`-set containing a fixed `k`-set.
fn inside_count(n: u64, part: u64, k: u64) -> BigInt {
    if part < k {
        BigInt::zero()
    } else {
        binom_big(n - k, part - k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::VertexSet;

    fn k4() -> Hypergraph {
        Hypergraph::new(4, 2, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]].map(Vec::from)).unwrap()
    }

    #[test]
    fn counts_partition_edges() {
        let h = k4();
        let (ex, ey, cross) = partition_counts(&h, &[true, true, false, false]);
        assert_eq!((ex, ey, cross), (1, 1, 4));
    }

    #[test]
    fn balance_from_empty_side() {
        let h = k4();
        let side = vec![false; 4];
        let c = evaluate(&h, &side, 0, 0);
        assert_eq!(c.objective, 6 - 3 * 4);
        for mode in [BalanceMode::Paper, BalanceMode::Greedy] {
            let b = balance(&c, &h, mode);
            assert!(b.is_equipartition());
            assert_eq!(b.cross, 4);
            assert!(b.e_x + b.e_y + 2 * 3 >= c.e_x + c.e_y);
        }
    }

    #[test]
    fn balanced_input_unchanged() {
        let h = k4();
        let c = evaluate(&h, &[true, false, true, false], 3, 1);
        assert_eq!(balance(&c, &h, BalanceMode::Greedy), c);
    }

    #[test]
    fn single_vertex() {
        let h = Hypergraph::empty(1, 2).unwrap();
        let rep = bisect(&h, 10, 0.05, 1, BalanceMode::Greedy).unwrap();
        assert_eq!(rep.result.x.len() + rep.result.y.len(), 1);
        assert_eq!(rep.result.cross, 0);
    }

    #[test]
    fn k4_bisection_is_optimal() {
        let rep = bisect(&k4(), 50, 0.05, 7, BalanceMode::Greedy).unwrap();
        assert_eq!(rep.result.cross, 4);
        assert_eq!(rep.baseline_expectation, 4.0);
        assert_eq!(rep.result.advantage, Some(3.0 - 4.0));
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(
            random_bisection_expectation(&k4()),
            BigRational::from_integer(4.into())
        );
        let h = Hypergraph::new(6, 3, [vec![0, 1, 2]]).unwrap();
        assert_eq!(
            random_bisection_expectation(&h),
            BigRational::new(9.into(), 10.into())
        );
    }

    #[test]
    fn mixed_baseline() {
        let h = MixedHypergraph::new(5, 3, [vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(asymptotic_baseline(&h), 1.25);
        let empty = MixedHypergraph::new(4, 3, std::iter::empty()).unwrap();
        let rep = bisect_mixed(&empty, 5, 0.05, 1, BalanceMode::Greedy).unwrap();
        assert_eq!(rep.result.cross, 0);
        assert_eq!(rep.baseline_asymptote, 0.0);
        assert_eq!(rep.baseline_expectation, 0.0);
    }

    #[test]
    fn mixed_agrees_with_uniform() {
        let h = Hypergraph::random_regular(12, 3, 3, 2, 1000).unwrap();
        let a = bisect(&h, 30, 0.05, 9, BalanceMode::Greedy).unwrap();
        let b = bisect_mixed(&MixedHypergraph::from(&h), 30, 0.05, 9, BalanceMode::Greedy).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn identical_vectors_round_all_or_nothing() {
        // One coordinate direction: every y_v collapses to the same sign.
        let h = Hypergraph::new(2, 2, [vec![0, 1]]).unwrap();
        let emb = Embedding::build(&h, 0.1).unwrap();
        let mut seen = [0; 3];
        for t in 0..400 {
            let x = VertexSet::from_mask(hyperplane_side(&emb, 1, t)).len();
            seen[x] += 1;
        }
        // Two nearly parallel vectors: split is rare but possible.
        assert!(seen[0] > 100 && seen[2] > 100);
    }
}
