//! Adjacency maps `τ_H`, `σ_H` and lower-bound certificates for the
//! second-eigenvalue analogues `λ₂^(p)` and `μ^(p)`.
//!
//! For `x_1..x_r ∈ ℝ^V`,
//! `τ_H(x_1..x_r) = (1/(r−1)!) Σ_e m(e) perm[x_i(u_j)]` and
//! `σ_H = τ_H − (r e(H)/n^r) ∏_i Σ_v x_i(v)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{falling, stream_rng, VertexSet};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeMultiset, Hypergraph};

pub const MAX_PERMANENT_ORDER: usize = 6;
pub const DEFAULT_STEP: f64 = 1e-2;
pub const EXHAUSTIVE_CANDIDATE_LIMIT: usize = 20;
pub const NORM_TOL: f64 = 1e-10;

fn from_u64<T: Num + Clone>(k: u64) -> T {
    // Binary expansion keeps this cheap for any numeric type.
    let mut acc = T::zero();
    let mut pow = T::one();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + pow.clone();
        }
        pow = pow.clone() + pow;
        k >>= 1;
    }
    acc
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..r).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            if k.is_multiple_of(2) {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }
    heap(r, &mut p, &mut out);
    out.truncate((1..=r).product());
    out
}

fn check_args<T>(h: &EdgeMultiset, r: usize, xs: &[&[T]]) -> Result<()> {
    if r > MAX_PERMANENT_ORDER {
        return Err(Error::TooLarge {
            n: r,
            limit: MAX_PERMANENT_ORDER,
        });
    }
    if xs.len() != r {
        return Err(Error::DimensionMismatch(format!("{} arguments for r = {r}", xs.len())));
    }
    if let Some(x) = xs.iter().find(|x| x.len() != h.n()) {
        return Err(Error::DimensionMismatch(format!(
            "argument of length {} for n = {}",
            x.len(),
            h.n()
        )));
    }
    Ok(())
}

/// `τ_H(x_1..x_r)` by permanent expansion over every edge.
pub fn tau_eval<T: Num + Clone>(h: &Hypergraph, xs: &[&[T]]) -> Result<T> {
    let r = h.r();
    check_args(h, r, xs)?;
    let perms = permutations(r);
    let mut total = T::zero();
    for (e, m) in h.edges() {
        let mut perm = T::zero();
        for p in &perms {
            let term = (0..r).fold(T::one(), |acc, i| acc * xs[i][e[p[i]] as usize].clone());
            perm = perm + term;
        }
        total = total + from_u64::<T>(m) * perm;
    }
    let fact: u64 = (1..r as u64).product();
    Ok(total / from_u64::<T>(fact.max(1)))
}

/// `r e(H) / n^r` as `T`.
fn j_coefficient<T: Num + Clone>(h: &Hypergraph) -> T {
    let r = h.r();
    let n_pow = (0..r).fold(T::one(), |acc, _| acc * from_u64::<T>(h.n() as u64));
    from_u64::<T>(r as u64 * h.edge_count()) / n_pow
}

pub fn sigma_eval<T: Num + Clone>(h: &Hypergraph, xs: &[&[T]]) -> Result<T> {
    let tau = tau_eval(h, xs)?;
    let sums = xs
        .iter()
        .fold(T::one(), |acc, x| acc * x.iter().cloned().fold(T::zero(), |s, v| s + v));
    Ok(tau - j_coefficient::<T>(h) * sums)
}

/// `τ_H(x, …, x) = r Σ_e m(e) ∏_{u∈e} x(u)`.
pub fn tau_symmetric(h: &Hypergraph, x: &[f64]) -> f64 {
    h.r() as f64
        * h.edges()
            .map(|(e, m)| m as f64 * e.iter().map(|&v| x[v as usize]).product::<f64>())
            .sum::<f64>()
}

pub fn sigma_symmetric(h: &Hypergraph, x: &[f64]) -> f64 {
    let s: f64 = x.iter().sum();
    tau_symmetric(h, x) - j_coefficient::<f64>(h) * s.powi(h.r() as i32)
}

/// `∂/∂x(v) σ_H(x, …, x) = r [Σ_{e∋v} m(e) ∏_{u∈e−v} x(u) − (r e/n^r)(Σx)^{r−1}]`.
pub fn sigma_gradient(h: &Hypergraph, x: &[f64]) -> Vec<f64> {
    let r = h.r();
    let s: f64 = x.iter().sum();
    let j = j_coefficient::<f64>(h) * s.powi(r as i32 - 1);
    let mut g = vec![-j; h.n()];
    for (e, m) in h.edges() {
        for (i, &v) in e.iter().enumerate() {
            let rest: f64 = e
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &u)| x[u as usize])
                .product();
            g[v as usize] += m as f64 * rest;
        }
    }
    g.iter_mut().for_each(|gv| *gv *= r as f64);
    g
}

pub fn norm_p(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("norm exponent p = {p} must be at least 1")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertKind {
    Lambda2,
    Mu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// `|U|^{-1/p} 1_U`.
    Characteristic,
    /// `n^{-1/p} (1_U − 1_{U^c})`.
    Signed,
    /// Slots filled with normalised `1_U` or `1_{U^c}`.
    Mixed,
    Ascent,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuMode {
    #[default]
    Diag,
    Dense,
}

impl std::str::FromStr for MuMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "diag" => Ok(Self::Diag),
            "dense" => Ok(Self::Dense),
            other => Err(format!("unknown mode {other:?} (expected diag or dense)")),
        }
    }
}

/// A stored witness and its `σ_H` value. `vectors` holds one vector when all
/// `r` slots are equal and `r` vectors otherwise. For [`CertKind::Mu`] the
/// value is `|σ_H|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralCertificate {
    pub kind: CertKind,
    pub p: f64,
    pub vectors: Vec<Vec<f64>>,
    pub value: f64,
    pub origin: Origin,
    pub support: Option<Vec<usize>>,
}

impl SpectralCertificate {
    /// Recomputes the value from the stored vectors.
    pub fn evaluate(&self, h: &Hypergraph) -> Result<f64> {
        let v = match self.vectors.as_slice() {
            [x] => sigma_symmetric(h, x),
            xs => {
                let refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
                sigma_eval(h, &refs)?
            }
        };
        Ok(match self.kind {
            CertKind::Lambda2 => v,
            CertKind::Mu => v.abs(),
        })
    }

    /// Largest `|‖x_i‖_p − 1|` over the stored vectors.
    pub fn norm_error(&self) -> f64 {
        self.vectors
            .iter()
            .map(|x| (norm_p(x, self.p) - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn characteristic(u: &VertexSet, p: f64) -> Vec<f64> {
    let c = (u.len() as f64).powf(-1.0 / p);
    (0..u.n()).map(|v| if u.contains(v) { c } else { 0.0 }).collect()
}

pub fn signed_characteristic(u: &VertexSet, p: f64) -> Vec<f64> {
    let c = (u.n() as f64).powf(-1.0 / p);
    (0..u.n()).map(|v| if u.contains(v) { c } else { -c }).collect()
}

/// `|U|^{r/p} σ_H(x_U, …, x_U) = r e(U) − (r e(H)/n^r) |U|^r`, exact.
pub fn characteristic_scaled_sigma(h: &Hypergraph, u: &VertexSet) -> BigRational {
    let r = h.r() as u32;
    let n = BigInt::from(h.n());
    let size = BigInt::from(u.len());
    let re = BigInt::from(h.r() as u64 * h.edge_count());
    BigRational::from_integer(BigInt::from(h.r() as u64 * h.induced_edges(u)))
        - BigRational::new(re * size.pow(r), n.pow(r))
}

/// `err(U) = r e(H) (|U|^r/n^r − (|U|)_r/(n)_r)`, the exact gap between
/// `r·disc(U)` and `|U|^{r/p} σ_H(x_U, …, x_U)`.
pub fn char_error(h: &Hypergraph, u: &VertexSet) -> BigRational {
    let r = h.r() as u32;
    let n = h.n() as u64;
    let size = u.len() as u64;
    let re = BigInt::from(h.r() as u64 * h.edge_count());
    let powers = BigRational::new(BigInt::from(size).pow(r), BigInt::from(n).pow(r));
    let fallings = BigRational::new(falling(size, r as u64), falling(n, r as u64));
    BigRational::from_integer(re) * (powers - fallings)
}

fn value_of(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Every non-empty subset, for small `n`.
pub fn exhaustive_candidates(n: usize) -> Result<Vec<VertexSet>> {
    if n > EXHAUSTIVE_CANDIDATE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_CANDIDATE_LIMIT,
        });
    }
    Ok((1u64..1 << n).map(|b| VertexSet::from_bits(n, b)).collect())
}

/// `V`, all singletons, `halves` random `⌈n/2⌉`-sets and the given extras.
pub fn default_candidates(n: usize, seed: u64, halves: usize, extra: &[VertexSet]) -> Vec<VertexSet> {
    let mut out = vec![VertexSet::full(n)];
    out.extend((0..n).map(|v| VertexSet::from_indices(n, [v])));
    out.extend((0..halves as u64).map(|t| {
        let mut rng = stream_rng(seed, t);
        VertexSet::from_indices(n, sample(&mut rng, n, n.div_ceil(2)))
    }));
    out.extend(extra.iter().filter(|u| !u.is_empty()).cloned());
    out
}

fn pick_best(items: Vec<(f64, usize)>) -> Option<(f64, usize)> {
    items
        .into_iter()
        .filter(|(v, _)| v.is_finite())
        .reduce(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
}

/// Best `σ_H(x_U, …, x_U)` over characteristic vectors of the candidates.
/// `U = V` is always tried, so the value is at least 0.
pub fn lambda2_certificate(h: &Hypergraph, p: f64, candidates: &[VertexSet]) -> Result<SpectralCertificate> {
    check_p(p)?;
    let n = h.n();
    let mut all = vec![VertexSet::full(n)];
    all.extend(candidates.iter().filter(|u| !u.is_empty()).cloned());
    if let Some(u) = all.iter().find(|u| u.n() != n) {
        return Err(Error::DimensionMismatch(format!("candidate over {} vertices", u.n())));
    }
    let r = h.r() as f64;
    let scored: Vec<(f64, usize)> = all
        .par_iter()
        .enumerate()
        .map(|(i, u)| (value_of(&characteristic_scaled_sigma(h, u)) * (u.len() as f64).powf(-r / p), i))
        .collect();
    let (value, i) = pick_best(scored).ok_or_else(|| Error::Numeric("no finite candidate value".into()))?;
    Ok(SpectralCertificate {
        kind: CertKind::Lambda2,
        p,
        vectors: vec![characteristic(&all[i], p)],
        value,
        origin: Origin::Characteristic,
        support: Some(all[i].indices()),
    })
}

/// Best `|σ_H|` over characteristic and signed characteristic vectors of the
/// candidates; `Dense` also fills the slots with mixtures of `x_U` and
/// `x_{U^c}`.
pub fn mu_certificate(h: &Hypergraph, p: f64, candidates: &[VertexSet], mode: MuMode) -> Result<SpectralCertificate> {
    check_p(p)?;
    let n = h.n();
    let r = h.r();
    let mut all = vec![VertexSet::full(n)];
    all.extend(candidates.iter().filter(|u| !u.is_empty()).cloned());
    if let Some(u) = all.iter().find(|u| u.n() != n) {
        return Err(Error::DimensionMismatch(format!("candidate over {} vertices", u.n())));
    }
    // Per candidate: characteristic, signed and (dense) each slot pattern.
    let patterns: u64 = if mode == MuMode::Dense { 1 << r } else { 0 };
    let per = 2 + patterns as usize;
    let build = |idx: usize| -> (Vec<Vec<f64>>, Origin) {
        let u = &all[idx / per];
        match idx % per {
            0 => (vec![characteristic(u, p)], Origin::Characteristic),
            1 => (vec![signed_characteristic(u, p)], Origin::Signed),
            k => {
                let pat = (k - 2) as u64;
                let c = u.complement();
                let xs = (0..r)
                    .map(|i| {
                        let s = if pat >> i & 1 == 1 && !c.is_empty() { &c } else { u };
                        characteristic(s, p)
                    })
                    .collect();
                (xs, Origin::Mixed)
            }
        }
    };
    let eval = |xs: &[Vec<f64>]| -> f64 {
        match xs {
            [x] => sigma_symmetric(h, x).abs(),
            xs => {
                let refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
                sigma_mixed(h, &refs).abs()
            }
        }
    };
    let scored: Vec<(f64, usize)> = (0..all.len() * per)
        .into_par_iter()
        .map(|idx| (eval(&build(idx).0), idx))
        .collect();
    let (value, idx) = pick_best(scored).ok_or_else(|| Error::Numeric("no finite candidate value".into()))?;
    let (vectors, origin) = build(idx);
    Ok(SpectralCertificate {
        kind: CertKind::Mu,
        p,
        vectors,
        value,
        origin,
        support: Some(all[idx / per].indices()),
    })
}

/// `σ_H` for distinct arguments; NaN when the arguments are rejected.
fn sigma_mixed(h: &Hypergraph, xs: &[&[f64]]) -> f64 {
    sigma_eval(h, xs).unwrap_or(f64::NAN)
}

/// Projected gradient ascent on `σ_H(x, …, x)` over the unit `L^p` sphere.
/// A step is kept only if it raises the value; the step size doubles after
/// an accepted step and halves after a rejected one.
pub fn local_ascent(h: &Hypergraph, p: f64, x0: &[f64], steps: usize, step_size: f64) -> Result<SpectralCertificate> {
    check_p(p)?;
    if x0.len() != h.n() {
        return Err(Error::DimensionMismatch(format!("start of length {} for n = {}", x0.len(), h.n())));
    }
    let norm = norm_p(x0, p);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Numeric("start vector has zero or non-finite norm".into()));
    }
    let mut x: Vec<f64> = x0.iter().map(|v| v / norm).collect();
    let mut value = sigma_symmetric(h, &x);
    if !value.is_finite() {
        return Err(Error::Numeric("non-finite value at the start vector".into()));
    }
    let mut eta = step_size;
    for _ in 0..steps {
        let g = sigma_gradient(h, &x);
        let mut y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + eta * b).collect();
        let ny = norm_p(&y, p);
        if !(ny.is_finite() && ny > 0.0) {
            break;
        }
        y.iter_mut().for_each(|v| *v /= ny);
        let vy = sigma_symmetric(h, &y);
        if !vy.is_finite() {
            break;
        }
        if vy > value {
            x = y;
            value = vy;
            eta *= 2.0;
        } else {
            eta /= 2.0;
            if eta < 1e-300 {
                break;
            }
        }
    }
    Ok(SpectralCertificate {
        kind: CertKind::Lambda2,
        p,
        vectors: vec![x],
        value,
        origin: Origin::Ascent,
        support: None,
    })
}

/// Runs [`local_ascent`] from the given start and from `random_starts`
/// Gaussian vectors in parallel, returning the best.
pub fn ascent_from_starts(
    h: &Hypergraph,
    p: f64,
    start: Option<&[f64]>,
    random_starts: usize,
    steps: usize,
    seed: u64,
) -> Result<SpectralCertificate> {
    let n = h.n();
    let mut starts: Vec<Vec<f64>> = start.map(|s| vec![s.to_vec()]).unwrap_or_default();
    starts.extend((0..random_starts as u64).map(|t| {
        let mut rng = stream_rng(seed, t);
        (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    }));
    if starts.is_empty() {
        return Err(Error::InvalidParameter("no ascent start".into()));
    }
    let results: Vec<Result<SpectralCertificate>> = starts
        .par_iter()
        .map(|s| local_ascent(h, p, s, steps, DEFAULT_STEP))
        .collect();
    let mut best: Option<SpectralCertificate> = None;
    for r in results {
        let c = r?;
        if best.as_ref().is_none_or(|b| c.value > b.value) {
            best = Some(c);
        }
    }
    Ok(best.expect("non-empty starts"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscBoundCheck {
    pub support: Vec<usize>,
    /// `n^{r/p} · certificate`.
    pub lhs: f64,
    /// `r·disc(U) − err(U)`, equal to `|U|^{r/p} σ_H(x_U, …, x_U)`.
    pub rhs: f64,
    /// The exact identity `r·disc(U) − |U|^{r/p} σ_H(x_U) = err(U)`.
    pub identity_exact: bool,
    pub holds: bool,
}

/// Compares a non-negative certificate with the discrepancy bound for `U`.
pub fn disc_bound_check(h: &Hypergraph, p: f64, certificate: f64, u: &VertexSet) -> DiscBoundCheck {
    let disc = crate::disc::disc_of(h, u);
    let r_disc = BigRational::new(
        BigInt::from(*disc.numer()) * BigInt::from(h.r()),
        BigInt::from(*disc.denom()),
    );
    let scaled = characteristic_scaled_sigma(h, u);
    let err = char_error(h, u);
    let identity_exact = &r_disc - &scaled == err;
    let rhs = value_of(&(r_disc - err));
    let lhs = (h.n() as f64).powf(h.r() as f64 / p) * certificate;
    let slack = 1e-9 * lhs.abs().max(rhs.abs()).max(1.0);
    DiscBoundCheck {
        support: u.indices(),
        lhs,
        rhs,
        identity_exact,
        holds: identity_exact && lhs + slack >= rhs,
    }
}
