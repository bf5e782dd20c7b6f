use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{disc_of, split_count, split_disc, ser_rational, Scaled};
use crate::combinatorics::{binom_big, binom_i128, to_big, Rational, VertexSet};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const POLY_ENUMERATION_LIMIT: usize = 14;
pub const POLY_GRID: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyPoint {
    pub q: String,
    pub enumerated: String,
    pub polynomial: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyCheck {
    pub points: Vec<PolyPoint>,
    pub all_equal: bool,
}

/// Compares `E disc(Z ∪ Y)`, with each vertex of `X` kept in `Z` with
/// probability `q`, against `Σ_i q^i disc_{i,r−i}(X, Y)` at `q = k/20`.
pub fn poly_identity_check(h: &Hypergraph, x: &VertexSet, y: &VertexSet) -> Result<PolyCheck> {
    if x.len() > POLY_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n: x.len(),
            limit: POLY_ENUMERATION_LIMIT,
        });
    }
    if !x.is_disjoint(y) {
        return Err(Error::InvalidParameter("X and Y must be disjoint".into()));
    }
    let r = h.r();
    let xs = x.indices();
    let k_max = xs.len();
    let scaled = Scaled::new(h);
    // by_size[k] = C(n, r) · Σ_{|Z| = k} disc(Z ∪ Y)
    let mut by_size = vec![0i128; k_max + 1];
    for bits in 0u64..1 << k_max {
        let mut u = y.clone();
        for (j, &v) in xs.iter().enumerate() {
            if bits >> j & 1 == 1 {
                u.insert(v);
            }
        }
        by_size[bits.count_ones() as usize] += scaled.scaled(h.induced_edges(&u), u.len());
    }
    let coeffs: Vec<BigRational> = (0..=r)
        .map(|i| split_disc(h, &[x.clone(), y.clone()], &[i, r - i]).map(|s| to_big(&s.disc)))
        .collect::<Result<_>>()?;
    let denom = BigInt::from(scaled.total_sets.max(1));
    let points: Vec<PolyPoint> = (0..=POLY_GRID)
        .map(|k| {
            let q = BigRational::new(BigInt::from(k), BigInt::from(POLY_GRID));
            let one_minus = BigRational::one() - &q;
            let enumerated = by_size
                .iter()
                .enumerate()
                .fold(BigRational::zero(), |acc, (j, &s)| {
                    acc + pow(&q, j) * pow(&one_minus, k_max - j) * BigRational::new(BigInt::from(s), denom.clone())
                });
            let polynomial = coeffs
                .iter()
                .enumerate()
                .fold(BigRational::zero(), |acc, (i, c)| acc + pow(&q, i) * c);
            PolyPoint {
                q: q.to_string(),
                enumerated: enumerated.to_string(),
                polynomial: polynomial.to_string(),
                equal: enumerated == polynomial,
            }
        })
        .collect();
    Ok(PolyCheck {
        all_equal: points.iter().all(|p| p.equal),
        points,
    })
}

fn pow(q: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * q)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShadowCheck {
    pub t: usize,
    /// `e_{H_t}(U)`.
    pub edges_lhs: u64,
    /// `Σ_{j≥t} C(j, t) e_{j,r−j}(U, U^c)`.
    pub edges_rhs: u64,
    #[serde(serialize_with = "ser_rational")]
    pub disc_lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub disc_rhs: Rational,
    /// `p Σ_j C(j, t) C(|U|, j) C(|U^c|, r − j)` against `p_t C(|U|, t)`.
    #[serde(serialize_with = "ser_rational")]
    pub binomial_lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub binomial_rhs: Rational,
    pub window_applicable: bool,
    pub window: Option<usize>,
    pub holds: bool,
}

/// Checks the shadow edge count and discrepancy decompositions for `U`.
pub fn shadow_decomposition_check(h: &Hypergraph, u: &VertexSet, t: usize) -> Result<ShadowCheck> {
    let shadow = h.shadow(t)?;
    let r = h.r();
    let n = h.n();
    let parts = [u.clone(), u.complement()];
    let mut edges_rhs = 0u64;
    let mut disc_rhs = Rational::from_integer(0);
    let mut binomial_lhs = Rational::from_integer(0);
    for j in t..=r {
        let c = binom_i128(j, t);
        edges_rhs += c as u64 * split_count(h, &parts, &[j, r - j]);
        disc_rhs += Rational::from_integer(c) * split_disc(h, &parts, &[j, r - j])?.disc;
        binomial_lhs += Rational::from_integer(c * binom_i128(u.len(), j) * binom_i128(n - u.len(), r - j));
    }
    binomial_lhs *= h.density();
    let p_t = Rational::from_integer(binom_i128(n - t, r - t)) * h.density();
    let binomial_rhs = p_t * Rational::from_integer(binom_i128(u.len(), t));
    let edges_lhs = shadow.induced_edges(u);
    let disc_lhs = disc_of(&shadow, u);
    let d = h.avg_degree();
    let window_applicable = d >= Rational::from_integer(1)
        && d * Rational::from_integer(2) <= Rational::from_integer(binom_i128(n - 1, r - 1));
    let window = density_window(h);
    let holds = edges_lhs == edges_rhs
        && disc_lhs == disc_rhs
        && binomial_lhs == binomial_rhs
        && shadow.density() == p_t
        && (!window_applicable || window.is_some());
    Ok(ShadowCheck {
        t,
        edges_lhs,
        edges_rhs,
        disc_lhs,
        disc_rhs,
        binomial_lhs,
        binomial_rhs,
        window_applicable,
        window,
        holds,
    })
}

/// Largest `t ∈ 2..=r` with `1/(2n) ≤ p_t ≤ 1/2`, where
/// `p_t = C(n − t, r − t) p`.
pub fn density_window(h: &Hypergraph) -> Option<usize> {
    let n = h.n();
    let r = h.r();
    let lo = Rational::new(1, 2 * n as i128);
    let hi = Rational::new(1, 2);
    (2..=r).rev().find(|&t| {
        let p_t = Rational::from_integer(binom_i128(n - t, r - t)) * h.density();
        lo <= p_t && p_t <= hi
    })
}

/// `(t, p_{t+1}/p_t, (r − t)/(n − t))` for `t = 1..r`, with `p_t` read off
/// the materialised shadows (`p_1` from the degree sum).
pub fn shadow_density_ratios(h: &Hypergraph) -> Result<Vec<(usize, Rational, Rational)>> {
    if h.edge_count() == 0 {
        return Err(Error::EmptyHypergraph);
    }
    let n = h.n();
    let r = h.r();
    let mut p = Vec::with_capacity(r + 1);
    p.push(Rational::from_integer(0));
    let degree_sum: u64 = h.degrees().iter().sum();
    p.push(Rational::new(degree_sum as i128, n as i128));
    for t in 2..=r {
        p.push(h.shadow(t)?.density());
    }
    Ok((1..r)
        .map(|t| (t, p[t + 1] / p[t], Rational::new((r - t) as i128, (n - t) as i128)))
        .collect())
}

/// `2^{r−1} (C(⌊n/2⌋, r) + C(⌈n/2⌉, r)) ≤ C(n, r)`.
pub fn half_binomial_inequality(n: u64, r: u64) -> bool {
    let lhs = (binom_big(n / 2, r) + binom_big(n.div_ceil(2), r)) << (r as usize - 1);
    lhs <= binom_big(n, r)
}
