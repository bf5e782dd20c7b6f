//! Probability that `r` vectors lie in a common random linear half-space.
//!
//! `μ(v_1, …, v_r) = P(⟨w, v_i⟩ ≥ 0 for all i)` for a uniform direction `w`.
//! Only the Gram matrix matters, so every estimate first reduces the tuple
//! to `r` lower-triangular rows in dimension `r`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::stream_rng;
use crate::error::{Error, Result};

pub const DEFAULT_UNIT_TOL: f64 = 1e-9;
const PIVOT_CLAMP: f64 = 1e-12;
const CHUNK: u64 = 1 << 16;

/// `r` unit vectors of a common dimension `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorTuple {
    vectors: Vec<Vec<f64>>,
    unit_tol: f64,
}

impl VectorTuple {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerance(vectors, DEFAULT_UNIT_TOL)
    }

    pub fn with_tolerance(vectors: Vec<Vec<f64>>, unit_tol: f64) -> Result<Self> {
        let Some(m) = vectors.first().map(Vec::len) else {
            return Err(Error::InvalidParameter("empty vector tuple".into()));
        };
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "vector {i} has dimension {}, expected {m}",
                    v.len()
                )));
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > unit_tol {
                return Err(Error::InvalidParameter(format!(
                    "vector {i} has norm {norm}, not a unit vector"
                )));
            }
        }
        Ok(Self { vectors, unit_tol })
    }

    /// Lower-triangular rows realising a unit-diagonal Gram matrix.
    pub fn from_gram(gram: &[Vec<f64>]) -> Result<Self> {
        let r = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != r {
                return Err(Error::DimensionMismatch("Gram matrix is not square".into()));
            }
            if (row[i] - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "Gram diagonal entry {i} is {}, expected 1",
                    row[i]
                )));
            }
            for j in 0..i {
                if (row[j] - gram[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidParameter("Gram matrix is not symmetric".into()));
                }
            }
        }
        let rows = cholesky_rows(gram);
        Self::with_tolerance(rows, 1e-6)
    }

    pub fn r(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn gram(&self) -> Vec<Vec<f64>> {
        let r = self.r();
        (0..r)
            .map(|i| (0..r).map(|j| dot(&self.vectors[i], &self.vectors[j])).collect())
            .collect()
    }

    /// Same Gram matrix, realised as lower-triangular rows in dimension `r`
    /// with non-negative diagonal.
    pub fn reduce_to_r_dims(&self) -> VectorTuple {
        VectorTuple {
            vectors: cholesky_rows(&self.gram()),
            unit_tol: self.unit_tol,
        }
    }

    /// Largest off-diagonal inner product.
    pub fn max_pairwise(&self) -> f64 {
        let g = self.gram();
        g.iter()
            .enumerate()
            .flat_map(|(i, row)| row[..i].iter().copied())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn pairwise_sum(&self) -> f64 {
        let g = self.gram();
        (0..g.len()).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| g[i][j]).sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cholesky factor of a PSD matrix, pivots below `1e-12 * sqrt(G_ii)` clamped to 0.
fn cholesky_rows(gram: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let r = gram.len();
    let mut l = vec![vec![0.0; r]; r];
    for i in 0..r {
        for j in 0..i {
            let s = gram[i][j] - dot(&l[i][..j], &l[j][..j]);
            l[i][j] = if l[j][j] > 0.0 { s / l[j][j] } else { 0.0 };
        }
        let rest = gram[i][i] - dot(&l[i][..i], &l[i][..i]);
        let scale = gram[i][i].max(0.0).sqrt();
        let piv = rest.max(0.0).sqrt();
        l[i][i] = if piv <= PIVOT_CLAMP * scale.max(1.0) { 0.0 } else { piv };
    }
    l
}

/// Exact `μ(v_1, v_2) = (π − angle) / (2π)`.
pub fn mu_exact_r2(angle: f64) -> f64 {
    (PI - angle) / (2.0 * PI)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub estimate: f64,
    pub trials: u64,
    pub std_error: f64,
    pub seed: u64,
}

impl MuEstimate {
    fn from_hits(hits: u64, trials: u64, seed: u64) -> Self {
        let estimate = hits as f64 / trials as f64;
        Self {
            estimate,
            trials,
            std_error: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
            seed,
        }
    }
}

fn inside(rows: &[Vec<f64>], w: &[f64]) -> bool {
    // Rows are lower-triangular: row ℓ only reads w[..=ℓ].
    rows.iter()
        .enumerate()
        .all(|(l, row)| dot(&row[..=l], &w[..=l]) >= 0.0)
}

/// Runs `trials` Gaussian draws split into fixed-size chunks, each with its
/// own RNG stream, and sums the per-draw statistic. Schedule independent.
fn chunked_sum<T, F>(r: usize, trials: u64, seed: u64, stat: F) -> T
where
    T: Send + Default + std::ops::Add<Output = T>,
    F: Fn(&[f64]) -> T + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let len = CHUNK.min(trials - c * CHUNK);
            let mut w = vec![0.0; r];
            let mut acc = T::default();
            for _ in 0..len {
                for x in w.iter_mut() {
                    *x = rng.sample(StandardNormal);
                }
                acc = acc + stat(&w);
            }
            acc
        })
        .reduce(T::default, |a, b| a + b)
}

/// Monte-Carlo estimate of `μ`. Directions are unnormalised Gaussians
/// (only signs matter); `⟨w, v⟩ = 0` counts as inside.
pub fn mu_estimate(vs: &VectorTuple, trials: u64, seed: u64) -> Result<MuEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let rows = vs.reduce_to_r_dims().vectors;
    let hits: u64 = chunked_sum(rows.len(), trials, seed, |w| inside(&rows, w) as u64);
    Ok(MuEstimate::from_hits(hits, trials, seed))
}

/// Estimate of `μ − 2^{-r}` from paired draws: each direction scores
/// `1[w ∈ S] − 1[w ∈ positive orthant]`, whose mean is exactly the excess
/// because the orthant has probability `2^{-r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcessEstimate {
    pub excess: f64,
    pub std_error: f64,
    pub trials: u64,
}

#[derive(Default)]
struct Moments(i64, u64);

impl std::ops::Add for Moments {
    type Output = Moments;
    fn add(self, o: Moments) -> Moments {
        Moments(self.0 + o.0, self.1 + o.1)
    }
}

pub fn mu_excess_estimate(vs: &VectorTuple, trials: u64, seed: u64) -> Result<ExcessEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let rows = vs.reduce_to_r_dims().vectors;
    let m: Moments = chunked_sum(rows.len(), trials, seed, |w| {
        let d = inside(&rows, w) as i64 - w.iter().all(|&x| x >= 0.0) as i64;
        Moments(d, d.unsigned_abs())
    });
    let t = trials as f64;
    let mean = m.0 as f64 / t;
    let var = (m.1 as f64 / t - mean * mean).max(0.0);
    Ok(ExcessEstimate {
        excess: mean,
        std_error: (var / t).sqrt(),
        trials,
    })
}

/// One sampled Gram matrix in a bracket check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketPoint {
    pub off_diagonal: Vec<f64>,
    pub pairwise_sum: f64,
    pub excess: f64,
    pub std_error: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub r: usize,
    pub alpha_test: f64,
    pub trials: u64,
    pub points: Vec<BracketPoint>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub all_positive: bool,
}

/// Samples Gram matrices whose off-diagonal entries are uniform in
/// `[alpha_test / 10, alpha_test]` and reports `(μ̂ − 2^{-r}) / Σ⟨v_i, v_j⟩`.
pub fn mu_bracket_check(
    r: usize,
    gram_samples: usize,
    trials: u64,
    seed: u64,
    alpha_test: f64,
) -> Result<BracketReport> {
    if r < 2 {
        return Err(Error::InvalidParameter("r must be at least 2".into()));
    }
    if !(alpha_test > 0.0 && alpha_test < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha_test {alpha_test} not in (0, 1)")));
    }
    let mut rng = stream_rng(seed, u64::MAX);
    let mut points = Vec::with_capacity(gram_samples);
    let mut k = 0u64;
    while points.len() < gram_samples {
        let mut gram = vec![vec![0.0; r]; r];
        let mut off = Vec::new();
        #[allow(clippy::needless_range_loop)]
        for i in 0..r {
            gram[i][i] = 1.0;
            for j in 0..i {
                let a = alpha_test * rng.random_range(0.1..=1.0);
                gram[i][j] = a;
                gram[j][i] = a;
                off.push(a);
            }
        }
        let vs = VectorTuple::from_gram(&gram)?;
        if vs.vectors.iter().enumerate().any(|(i, row)| row[i] <= 0.0) {
            continue;
        }
        let est = mu_excess_estimate(&vs, trials, seed.wrapping_add(k))?;
        k += 1;
        let sum: f64 = off.iter().sum();
        if sum == 0.0 {
            continue;
        }
        points.push(BracketPoint {
            pairwise_sum: sum,
            ratio: est.excess / sum,
            excess: est.excess,
            std_error: est.std_error,
            off_diagonal: off,
        });
    }
    let min_ratio = points.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = points.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(BracketReport {
        r,
        alpha_test,
        trials,
        all_positive: points.iter().all(|p| p.ratio > 0.0 && p.ratio.is_finite()),
        points,
        min_ratio,
        max_ratio,
    })
}

/// Entry bounds on the triangular rows: diagonal `≥ 1/2`, entries left of
/// the diagonal in `[−18 r a², 3a]` where `a` is the largest pairwise product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangularBounds {
    pub a: f64,
    pub min_diagonal: f64,
    pub min_below: f64,
    pub max_below: f64,
    pub holds: bool,
}

pub fn triangular_bounds(vs: &VectorTuple) -> TriangularBounds {
    let rows = vs.reduce_to_r_dims().vectors;
    let r = rows.len() as f64;
    let a = vs.max_pairwise().max(0.0);
    let min_diagonal = (0..rows.len()).map(|l| rows[l][l]).fold(f64::INFINITY, f64::min);
    let below: Vec<f64> = (0..rows.len())
        .flat_map(|l| rows[l][..l].to_vec())
        .collect();
    let min_below = below.iter().copied().fold(f64::INFINITY, f64::min);
    let max_below = below.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-12;
    let holds = min_diagonal >= 0.5
        && below
            .iter()
            .all(|&x| x >= -18.0 * r * a * a - tol && x <= 3.0 * a + tol);
    TriangularBounds {
        a,
        min_diagonal,
        min_below,
        max_below,
        holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| (x - y).abs() < 1e-12)
    }

    fn unit(m: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        v
    }

    #[test]
    fn reduce_orthonormal() {
        let vs = VectorTuple::new(vec![unit(10, 4), unit(10, 7), unit(10, 1)]).unwrap();
        let red = vs.reduce_to_r_dims();
        assert_eq!(red.dim(), 3);
        assert!(close(red.vectors(), &[unit(3, 0), unit(3, 1), unit(3, 2)]));
    }

    #[test]
    fn reduce_rank_one() {
        let vs = VectorTuple::new(vec![unit(4, 2), unit(4, 2)]).unwrap();
        assert!(close(vs.reduce_to_r_dims().vectors(), &[vec![1.0, 0.0], vec![1.0, 0.0]]));
    }

    #[test]
    fn reduce_angle() {
        let a: f64 = 0.3;
        let s = (1.0 - a * a).sqrt();
        let vs = VectorTuple::new(vec![vec![0.0, 0.0, 1.0], vec![s, 0.0, a]]).unwrap();
        assert!(close(vs.reduce_to_r_dims().vectors(), &[vec![1.0, 0.0], vec![a, s]]));
    }

    #[test]
    fn reduction_preserves_gram() {
        let g = vec![
            vec![1.0, 0.2, -0.1],
            vec![0.2, 1.0, 0.4],
            vec![-0.1, 0.4, 1.0],
        ];
        let vs = VectorTuple::from_gram(&g).unwrap();
        assert!(close(&vs.gram(), &g));
    }

    #[test]
    fn exact_r2_values() {
        assert!((mu_exact_r2(PI / 2.0) - 0.25).abs() < 1e-15);
        assert_eq!(mu_exact_r2(0.0), 0.5);
        assert_eq!(mu_exact_r2(PI), 0.0);
    }

    #[test]
    fn estimate_is_deterministic_and_accurate() {
        let vs = VectorTuple::new(vec![unit(3, 0), unit(3, 1), unit(3, 2)]).unwrap();
        let a = mu_estimate(&vs, 200_000, 5).unwrap();
        let b = mu_estimate(&vs, 200_000, 5).unwrap();
        assert_eq!(a, b);
        assert!((a.estimate - 0.125).abs() <= 4.0 * a.std_error);
        let same = VectorTuple::new(vec![unit(3, 0), unit(3, 0), unit(3, 0)]).unwrap();
        let e = mu_estimate(&same, 200_000, 6).unwrap();
        assert!((e.estimate - 0.5).abs() <= 4.0 * e.std_error);
        assert!(mu_estimate(&vs, 0, 1).is_err());
    }

    #[test]
    fn excess_zero_for_orthonormal() {
        let vs = VectorTuple::new(vec![unit(2, 0), unit(2, 1)]).unwrap();
        let e = mu_excess_estimate(&vs, 10_000, 1).unwrap();
        assert_eq!(e.excess, 0.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn rejects_non_unit_and_ragged() {
        assert!(VectorTuple::new(vec![vec![2.0, 0.0]]).is_err());
        assert!(VectorTuple::new(vec![vec![1.0, 0.0], vec![1.0]]).is_err());
        assert!(VectorTuple::from_gram(&[vec![1.0, 0.5], vec![0.4, 1.0]]).is_err());
    }

    #[test]
    fn triangular_bounds_small_products() {
        let g = vec![
            vec![1.0, 0.01, 0.005],
            vec![0.01, 1.0, 0.008],
            vec![0.005, 0.008, 1.0],
        ];
        let b = triangular_bounds(&VectorTuple::from_gram(&g).unwrap());
        assert!(b.holds);
        assert!((b.a - 0.01).abs() < 1e-15);
    }
}
