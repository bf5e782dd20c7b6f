//! Discrepancy functionals.
//!
//! `disc(U) = e(U) − p·C(|U|, r)` with `p = e(H)/C(n, r)`. All values are
//! exact rationals; internally they are kept as integers scaled by `C(n, r)`.

mod exhaustive;
mod heuristic;
mod identities;

pub use exhaustive::{disc_exact, oracle_bw, BisectionWitness, EXHAUSTIVE_BW_LIMIT, EXHAUSTIVE_DISC_LIMIT};
pub use heuristic::{
    beta, beta_identity_check, disc_plus_heuristic, improve_witness, large_degree_reduction,
    maxdeg_witness, BetaCheck, ReductionBranch, ReductionReport, BETA_ENUMERATION_LIMIT,
    DEFAULT_REDUCTION_C,
};
pub use identities::{
    density_window, half_binomial_inequality, poly_identity_check, shadow_decomposition_check,
    shadow_density_ratios, PolyCheck, PolyPoint, ShadowCheck, POLY_ENUMERATION_LIMIT, POLY_GRID,
};

use serde::Serialize;

use crate::combinatorics::{binom_i128, rat_f64, Rational, VertexSet};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeMultiset, Hypergraph};

/// How a discrepancy value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exhaustive,
    Rounding,
    Reduction,
    Sampling,
}

/// Rational serialised as `"p/q"` next to its floating value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exact {
    pub exact: String,
    pub value: String,
}

pub fn exact(q: &Rational) -> Exact {
    Exact {
        exact: q.to_string(),
        value: format!("{}", rat_f64(q)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscReport {
    pub witness: Vec<usize>,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub disc_plus: Option<Rational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub disc_minus: Option<Rational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub disc: Option<Rational>,
    pub minus_witness: Option<Vec<usize>>,
    pub method: Method,
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    exact(q).serialize(s)
}

pub(crate) fn ser_opt_rational<S: serde::Serializer>(
    q: &Option<Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    q.as_ref().map(exact).serialize(s)
}

/// Integer pieces of `disc`: `C(n, r)` and `e(H)`, with a binomial table.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub total_sets: i128,
    pub edges: i128,
    /// `C(k, r)` for `k = 0..=n`.
    pub binoms: Vec<i128>,
}

impl Scaled {
    pub fn new(h: &Hypergraph) -> Self {
        let n = h.n();
        Self {
            total_sets: binom_i128(n, h.r()),
            edges: h.edge_count() as i128,
            binoms: (0..=n).map(|k| binom_i128(k, h.r())).collect(),
        }
    }

    /// `disc(U)·C(n, r)` from `e(U)` and `|U|`.
    pub fn scaled(&self, e_u: u64, size: usize) -> i128 {
        e_u as i128 * self.total_sets - self.edges * self.binoms[size]
    }

    pub fn value(&self, scaled: i128) -> Rational {
        if self.total_sets == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(scaled, self.total_sets)
        }
    }
}

/// Exact `disc(U)`.
pub fn disc_of(h: &Hypergraph, u: &VertexSet) -> Rational {
    let s = Scaled::new(h);
    s.value(s.scaled(h.induced_edges(u), u.len()))
}

/// Same value from a direct edge scan with an independent binomial
/// evaluation; used to cross-check the incremental routines.
pub fn disc_direct(h: &Hypergraph, u: &VertexSet) -> Rational {
    let e_u: u64 = h
        .edge_list()
        .iter()
        .filter(|(e, _)| e.iter().all(|&v| u.contains(v)))
        .map(|(_, m)| *m)
        .sum();
    Rational::from_integer(e_u as i128) - h.density() * Rational::from_integer(binom_i128(u.len(), h.r()))
}

/// Split statistics of disjoint parts with prescribed intersection sizes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitDisc {
    pub sizes: Vec<usize>,
    pub part_sizes: Vec<usize>,
    pub count: u64,
    #[serde(serialize_with = "ser_rational")]
    pub disc: Rational,
}

/// `e_{s_1..s_k}(U_1..U_k)`: edges meeting each `U_i` in exactly `s_i` vertices.
pub fn split_count(h: &EdgeMultiset, parts: &[VertexSet], sizes: &[usize]) -> u64 {
    let mut hits = vec![0usize; parts.len()];
    h.edges()
        .filter(|(e, _)| {
            hits.iter_mut().for_each(|c| *c = 0);
            for &v in *e {
                if let Some(i) = parts.iter().position(|p| p.contains(v as usize)) {
                    hits[i] += 1;
                }
            }
            hits == sizes
        })
        .map(|(_, m)| m)
        .sum()
}

/// `disc_{s_1..s_k}(U_1..U_k) = e_{s_1..s_k} − p ∏ C(|U_i|, s_i)`.
pub fn split_disc(h: &Hypergraph, parts: &[VertexSet], sizes: &[usize]) -> Result<SplitDisc> {
    if parts.len() != sizes.len() {
        return Err(Error::InvalidParameter(format!(
            "{} parts but {} sizes",
            parts.len(),
            sizes.len()
        )));
    }
    if sizes.iter().sum::<usize>() != h.r() {
        return Err(Error::InvalidParameter(format!(
            "part sizes sum to {}, expected r = {}",
            sizes.iter().sum::<usize>(),
            h.r()
        )));
    }
    for (i, p) in parts.iter().enumerate() {
        if p.n() != h.n() {
            return Err(Error::DimensionMismatch(format!("part {i} is over {} vertices", p.n())));
        }
        if parts[..i].iter().any(|q| !q.is_disjoint(p)) {
            return Err(Error::InvalidParameter(format!("part {i} overlaps an earlier part")));
        }
    }
    let count = split_count(h, parts, sizes);
    let expected = parts
        .iter()
        .zip(sizes)
        .map(|(p, &s)| Rational::from_integer(binom_i128(p.len(), s)))
        .fold(h.density(), |acc, b| acc * b);
    Ok(SplitDisc {
        sizes: sizes.to_vec(),
        part_sizes: parts.iter().map(VertexSet::len).collect(),
        count,
        disc: Rational::from_integer(count as i128) - expected,
    })
}

/// `disc_{i, r−i}(X, Y)` for `i = 0..=r`.
pub fn split_pair(h: &Hypergraph, x: &VertexSet, y: &VertexSet) -> Result<Vec<Rational>> {
    let r = h.r();
    (0..=r)
        .map(|i| split_disc(h, &[x.clone(), y.clone()], &[i, r - i]).map(|s| s.disc))
        .collect()
}

/// `|∂(X)|`: multiplicity-weighted edges with at least one vertex in `X`.
pub fn boundary(h: &EdgeMultiset, x: &VertexSet) -> u64 {
    h.edges()
        .filter(|(e, _)| e.iter().any(|&v| x.contains(v as usize)))
        .map(|(_, m)| m)
        .sum()
}

/// `|∂(X)|` as `Σ_{i<r} e_{r−i,i}(X, X^c)`.
pub fn boundary_by_splits(h: &Hypergraph, x: &VertexSet) -> u64 {
    let parts = [x.clone(), x.complement()];
    let r = h.r();
    (0..r).map(|i| split_count(h, &parts, &[r - i, i])).sum()
}

/// Exact advantage `e(H)(1 − 2^{1−r}) − cross`.
pub fn advantage_exact(h: &Hypergraph, cross: u64) -> Rational {
    let e = Rational::from_integer(h.edge_count() as i128);
    let half_pow = Rational::new(1, 1i128 << (h.r() - 1));
    e * (Rational::from_integer(1) - half_pow) - Rational::from_integer(cross as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Hypergraph {
        Hypergraph::new(4, 2, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]].map(Vec::from)).unwrap()
    }

    #[test]
    fn disc_examples() {
        let k4 = k4();
        for bits in 0..16u64 {
            let u = VertexSet::from_bits(4, bits);
            assert_eq!(disc_of(&k4, &u), Rational::from_integer(0));
        }
        let empty = Hypergraph::empty(5, 3).unwrap();
        assert_eq!(disc_of(&empty, &VertexSet::full(5)), Rational::from_integer(0));
        let single = Hypergraph::new(4, 2, [vec![0, 1]]).unwrap();
        let u = VertexSet::from_indices(4, [0, 1]);
        assert_eq!(disc_of(&single, &u), Rational::new(5, 6));
        assert_eq!(disc_direct(&single, &u), Rational::new(5, 6));
    }

    #[test]
    fn split_examples() {
        let h = Hypergraph::random_binomial(9, 3, 0.4, 2).unwrap();
        let u = VertexSet::from_indices(9, [0, 2, 3, 7]);
        let parts = split_pair(&h, &u, &u.complement()).unwrap();
        assert_eq!(parts.iter().sum::<Rational>(), Rational::from_integer(0));
        let all = split_disc(&h, &[VertexSet::full(9)], &[3]).unwrap();
        assert_eq!(all.disc, disc_of(&h, &VertexSet::full(9)));
        assert!(split_disc(&h, &[u.clone(), u.clone()], &[1, 2]).is_err());
        assert!(split_disc(&h, std::slice::from_ref(&u), &[2]).is_err());
    }

    #[test]
    fn boundary_examples() {
        let h = Hypergraph::random_binomial(8, 3, 0.3, 5).unwrap();
        assert_eq!(boundary(&h, &VertexSet::full(8)), h.edge_count());
        assert_eq!(boundary(&h, &VertexSet::empty(8)), 0);
        let v = VertexSet::from_indices(8, [4]);
        assert_eq!(boundary(&h, &v), h.degree(4));
        let x = VertexSet::from_indices(8, [1, 5, 6]);
        assert_eq!(boundary(&h, &x), boundary_by_splits(&h, &x));
    }

    #[test]
    fn advantage_of_k4() {
        assert_eq!(advantage_exact(&k4(), 4), Rational::from_integer(-1));
    }
}
