//! Sparse unit-vector embedding that makes co-edge vertices slightly
//! positively correlated.
//!
//! Vertex `v` gets `x_v` over the coordinate set `V`: `x_v(v) = 1`,
//! `x_v(u) = α / √(2rΔ)` when `u` and `v` share an edge, `0` otherwise.
//! The stored vector is `y_v = x_v / ‖x_v‖₂`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::float::FloatCore;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeMultiset, Hypergraph, MixedHypergraph};

pub const DEFAULT_ALPHA: f64 = 0.05;
const UNIT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    r: usize,
    alpha: f64,
    max_degree: u64,
    scale: f64,
    /// `y_v` as sorted `(coordinate, value)` pairs.
    vectors: Vec<Vec<(u32, f64)>>,
    norms_sq: Vec<f64>,
}

impl Embedding {
    pub fn build(h: &Hypergraph, alpha: f64) -> Result<Self> {
        build_embedding(h, h.r(), alpha)
    }

    /// Mixed edges use the maximum edge size in the scale factor.
    pub fn build_mixed(h: &MixedHypergraph, alpha: f64) -> Result<Self> {
        build_embedding(h, h.max_r(), alpha)
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_degree(&self) -> u64 {
        self.max_degree
    }

    /// Off-diagonal entry `α / √(2rΔ)` of the unnormalised vectors.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn vector(&self, v: usize) -> &[(u32, f64)] {
        &self.vectors[v]
    }

    /// `‖x_v‖₂²` of the unnormalised vector.
    pub fn norm_sq(&self, v: usize) -> f64 {
        self.norms_sq[v]
    }

    /// `⟨y_u, y_v⟩` by merging the sorted supports.
    pub fn inner(&self, u: usize, v: usize) -> f64 {
        merge_dot(&self.vectors[u], &self.vectors[v], |a, b| a * b, 0.0)
    }

    pub fn pairwise_products(&self, pairs: &[(usize, usize)]) -> Vec<f64> {
        pairs.iter().map(|&(u, v)| self.inner(u, v)).collect()
    }

    /// `⟨y_v, w⟩` for a dense `w`.
    pub fn project(&self, v: usize, w: &[f64]) -> f64 {
        self.vectors[v].iter().map(|&(u, y)| y * w[u as usize]).sum()
    }

    /// True when the worst-case bound `2s + (r−1)Δs²` on `⟨x_u, x_v⟩`
    /// reaches `α`, so the `< α` invariant is not implied by the bound alone.
    pub fn small_degree_warning(&self) -> bool {
        let d = self.max_degree as f64;
        2.0 * self.scale + (self.r as f64 - 1.0) * d * self.scale * self.scale >= self.alpha
    }

    /// Column view: for every coordinate `u`, the `(v, y_v(u))` entries.
    fn columns(&self) -> Vec<Vec<(u32, f64)>> {
        let mut cols = vec![Vec::new(); self.n()];
        for (v, vec) in self.vectors.iter().enumerate() {
            for &(u, y) in vec {
                cols[u as usize].push((v as u32, y));
            }
        }
        cols
    }

    /// `Σ_{u<v} ⟨y_u, y_v⟩` by per-coordinate aggregation
    /// `½ Σ_u [(Σ_v y_v(u))² − Σ_v y_v(u)²]`.
    pub fn pair_sum(&self) -> f64 {
        self.columns()
            .iter()
            .map(|col| {
                let s: f64 = col.iter().map(|&(_, y)| y).sum();
                let q: f64 = col.iter().map(|&(_, y)| y * y).sum();
                s * s - q
            })
            .sum::<f64>()
            / 2.0
    }

    /// Exact value of the pair sum over the stored `f64` entries, by the
    /// per-coordinate aggregation.
    pub fn pair_sum_exact(&self) -> BigRational {
        let fixed = FixedPoint::new(self);
        let mut total = BigInt::zero();
        for col in self.columns() {
            let mut s = BigInt::zero();
            let mut q = BigInt::zero();
            for &(_, y) in &col {
                let y = fixed.to_int(y);
                q += &y * &y;
                s += y;
            }
            total += &s * &s - q;
        }
        fixed.product_value(total) / BigRational::from_integer(BigInt::from(2))
    }

    /// Same quantity by the direct double loop over vertex pairs.
    pub fn pair_sum_exact_naive(&self) -> BigRational {
        let fixed = FixedPoint::new(self);
        let ints: Vec<Vec<(u32, BigInt)>> = self
            .vectors
            .iter()
            .map(|vec| vec.iter().map(|&(u, y)| (u, fixed.to_int(y))).collect())
            .collect();
        let mut total = BigInt::zero();
        for a in 0..ints.len() {
            for b in a + 1..ints.len() {
                total += merge_dot(&ints[a], &ints[b], |x, y| x * y, BigInt::zero());
            }
        }
        fixed.product_value(total)
    }

    /// Checks the four embedding invariants over every vertex and pair.
    pub fn check_invariants(&self, h: &EdgeMultiset) -> InvariantReport {
        let n = self.n();
        let mut rep = InvariantReport {
            min_norm_sq: f64::INFINITY,
            max_norm_sq: f64::NEG_INFINITY,
            max_unit_deviation: 0.0,
            min_pair: f64::INFINITY,
            max_pair: f64::NEG_INFINITY,
            min_coedge_pair: f64::INFINITY,
            coedge_threshold: self.scale,
            alpha: self.alpha,
            ok: true,
        };
        for v in 0..n {
            rep.min_norm_sq = rep.min_norm_sq.min(self.norms_sq[v]);
            rep.max_norm_sq = rep.max_norm_sq.max(self.norms_sq[v]);
            rep.max_unit_deviation = rep.max_unit_deviation.max((self.inner(v, v) - 1.0).abs());
        }
        let nbrs = h.neighbourhoods();
        for (u, nb) in nbrs.iter().enumerate() {
            for v in u + 1..n {
                let p = self.inner(u, v);
                rep.min_pair = rep.min_pair.min(p);
                rep.max_pair = rep.max_pair.max(p);
                if nb.binary_search(&(v as u32)).is_ok() {
                    rep.min_coedge_pair = rep.min_coedge_pair.min(p);
                }
            }
        }
        rep.ok = rep.min_norm_sq >= 1.0
            && rep.max_norm_sq <= 2.0
            && rep.max_unit_deviation <= UNIT_TOL
            && (n < 2 || (rep.min_pair >= 0.0 && rep.max_pair < self.alpha))
            && (rep.min_coedge_pair == f64::INFINITY || rep.min_coedge_pair >= self.scale);
        rep
    }

    /// Compares the pair sum with `4 r Δ α² n`.
    pub fn scalar_sum_bound_check(&self) -> ScalarSumReport {
        let r = self.r as f64;
        let d = self.max_degree as f64;
        let pair_sum = self.pair_sum();
        let bound = 4.0 * r * d * self.alpha * self.alpha * self.n() as f64;
        // Per-coordinate estimate rΔα²/2 + √(2rΔ)α ≤ 4rΔα² needs α√(rΔ) ≥ √2/3.5.
        let assumption_met = self.alpha * (r * d).sqrt() >= std::f64::consts::SQRT_2 / 3.5;
        ScalarSumReport {
            pair_sum,
            bound,
            holds: pair_sum <= bound,
            assumption_met,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub min_norm_sq: f64,
    pub max_norm_sq: f64,
    pub max_unit_deviation: f64,
    pub min_pair: f64,
    pub max_pair: f64,
    pub min_coedge_pair: f64,
    pub coedge_threshold: f64,
    pub alpha: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarSumReport {
    pub pair_sum: f64,
    pub bound: f64,
    pub holds: bool,
    /// Whether `Δ` is large enough for the bound to be guaranteed.
    pub assumption_met: bool,
}

fn merge_dot<T, F>(a: &[(u32, T)], b: &[(u32, T)], mul: F, zero: T) -> T
where
    T: Clone + std::ops::Add<Output = T>,
    F: Fn(&T, &T) -> T,
{
    let (mut i, mut j) = (0, 0);
    let mut acc = zero;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = acc + mul(&a[i].1, &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Maps the stored non-negative `f64` entries to integers at a common
/// power-of-two scale, so sums of products are exact.
struct FixedPoint {
    min_exp: i32,
}

impl FixedPoint {
    fn new(e: &Embedding) -> Self {
        let min_exp = e
            .vectors
            .iter()
            .flatten()
            .filter(|(_, y)| *y != 0.0)
            .map(|(_, y)| y.integer_decode().1 as i32)
            .min()
            .unwrap_or(0);
        Self { min_exp }
    }

    fn to_int(&self, y: f64) -> BigInt {
        if y == 0.0 {
            return BigInt::zero();
        }
        let (mant, exp, sign) = y.integer_decode();
        let v = BigInt::from(mant) << (exp as i32 - self.min_exp) as usize;
        if sign < 0 {
            -v
        } else {
            v
        }
    }

    /// Value of an integer sum of products of two scaled entries.
    fn product_value(&self, total: BigInt) -> BigRational {
        let shift = 2 * self.min_exp;
        if shift >= 0 {
            BigRational::from_integer(total << shift as usize)
        } else {
            BigRational::new(total, BigInt::one() << (-shift) as usize)
        }
    }
}

/// Builds the embedding for edges of size at most `r`; `r` enters the
/// scale factor `α / √(2rΔ)`.
pub fn build_embedding(h: &EdgeMultiset, r: usize, alpha: f64) -> Result<Embedding> {
    if !(alpha > 0.0 && alpha <= 0.1) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let max_degree = h.max_degree();
    if max_degree == 0 {
        return Err(Error::EmptyHypergraph);
    }
    let scale = alpha / (2.0 * r as f64 * max_degree as f64).sqrt();
    let nbrs = h.neighbourhoods();
    let mut vectors = Vec::with_capacity(h.n());
    let mut norms_sq = Vec::with_capacity(h.n());
    for (v, nb) in nbrs.iter().enumerate() {
        let norm_sq = 1.0 + nb.len() as f64 * scale * scale;
        let inv = 1.0 / norm_sq.sqrt();
        let mut vec: Vec<(u32, f64)> = nb.iter().map(|&u| (u, scale * inv)).collect();
        let pos = vec.partition_point(|&(u, _)| (u as usize) < v);
        vec.insert(pos, (v as u32, inv));
        vectors.push(vec);
        norms_sq.push(norm_sq);
    }
    Ok(Embedding {
        r,
        alpha,
        max_degree,
        scale,
        vectors,
        norms_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_vectors() {
        let h = Hypergraph::new(3, 3, [vec![0, 1, 2]]).unwrap();
        let e = Embedding::build(&h, 0.05).unwrap();
        let s = 0.05 / 6f64.sqrt();
        assert!((e.scale() - s).abs() < 1e-15);
        assert!((e.norm_sq(0) - (1.0 + 2.0 * s * s)).abs() < 1e-15);
        // ⟨x_0, x_1⟩ = 2s + (r−2)s² for a lone edge.
        let x_dot = 2.0 * s + s * s;
        assert!((e.inner(0, 1) - x_dot / (1.0 + 2.0 * s * s)).abs() < 1e-15);
        // Three pairs with identical products.
        let expected = 3.0 * x_dot / (1.0 + 2.0 * s * s);
        assert!((e.pair_sum() - expected).abs() < 1e-15);
    }

    #[test]
    fn disjoint_edges_are_orthogonal() {
        let h = Hypergraph::new(6, 3, [vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let e = Embedding::build(&h, 0.05).unwrap();
        assert_eq!(e.inner(0, 4), 0.0);
        assert_eq!(e.pairwise_products(&[(2, 2)]), vec![1.0]);
        assert!(e.check_invariants(&h).ok);
    }

    #[test]
    fn matching_pair_sum() {
        let h = Hypergraph::new(6, 2, [vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let e = Embedding::build(&h, 0.05).unwrap();
        let s = 0.05 / 2.0;
        let p = 2.0 * s / (1.0 + s * s);
        assert!((e.pair_sum() - 3.0 * p).abs() < 1e-15);
        assert!(e.small_degree_warning());
        assert!(e.check_invariants(&h).ok);
    }

    #[test]
    fn errors() {
        let h = Hypergraph::new(3, 2, [vec![0, 1]]).unwrap();
        assert!(matches!(Embedding::build(&h, 0.0), Err(Error::AlphaOutOfRange(_))));
        assert!(matches!(Embedding::build(&h, 0.2), Err(Error::AlphaOutOfRange(_))));
        let empty = Hypergraph::empty(3, 2).unwrap();
        assert!(matches!(Embedding::build(&empty, 0.05), Err(Error::EmptyHypergraph)));
    }

    #[test]
    fn exact_pair_sum_routes_agree() {
        let h = Hypergraph::random_binomial(14, 3, 0.2, 3).unwrap();
        let e = Embedding::build(&h, 0.05).unwrap();
        let a = e.pair_sum_exact();
        assert_eq!(a, e.pair_sum_exact_naive());
        assert!((crate::combinatorics::big_f64(&a) - e.pair_sum()).abs() < 1e-9);
    }

    #[test]
    fn complete_graph_bound_reported() {
        let edges = (0..40).flat_map(|a| (a + 1..40).map(move |b| vec![a, b]));
        let h = Hypergraph::new(40, 2, edges).unwrap();
        let e = Embedding::build(&h, 0.05).unwrap();
        let rep = e.scalar_sum_bound_check();
        assert!(rep.assumption_met);
        assert!(rep.holds, "{rep:?}");
    }
}
