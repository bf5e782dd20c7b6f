//! Hypergraph storage, validation, degree statistics, generators and shadows.
//!
//! Edges are stored sorted and deduplicated into `(edge, multiplicity)`
//! pairs. Every count below (`e(H)`, degrees) is multiplicity-weighted.

use std::collections::{BTreeMap, HashSet};
use std::ops::Deref;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom, binom_i128, stream_rng, Rational, VertexSet};
use crate::error::{Error, Result};

/// Sorted, deduplicated edge list with incidence lists. Shared storage
/// behind [`Hypergraph`] and [`MixedHypergraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMultiset {
    n: usize,
    offsets: Vec<usize>,
    verts: Vec<u32>,
    mult: Vec<u64>,
    incidence: Vec<Vec<u32>>,
    degrees: Vec<u64>,
    total: u64,
}

impl EdgeMultiset {
    fn build(n: usize, edges: BTreeMap<Vec<u32>, u64>) -> Self {
        let mut offsets = Vec::with_capacity(edges.len() + 1);
        let mut verts = Vec::new();
        let mut mult = Vec::with_capacity(edges.len());
        let mut incidence = vec![Vec::new(); n];
        let mut degrees = vec![0u64; n];
        offsets.push(0);
        for (i, (e, m)) in edges.into_iter().enumerate() {
            for &v in &e {
                incidence[v as usize].push(i as u32);
                degrees[v as usize] += m;
            }
            verts.extend_from_slice(&e);
            offsets.push(verts.len());
            mult.push(m);
        }
        let total = mult.iter().sum();
        Self {
            n,
            offsets,
            verts,
            mult,
            incidence,
            degrees,
            total,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct edges (ignoring multiplicity).
    pub fn distinct_edges(&self) -> usize {
        self.mult.len()
    }

    /// `e(H)`, counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.total
    }

    pub fn edge(&self, i: usize) -> &[u32] {
        &self.verts[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn multiplicity(&self, i: usize) -> u64 {
        self.mult[i]
    }

    pub fn edges(&self) -> impl Iterator<Item = (&[u32], u64)> + '_ {
        (0..self.mult.len()).map(move |i| (self.edge(i), self.mult[i]))
    }

    /// Indices of the distinct edges containing `v`.
    pub fn incident(&self, v: usize) -> &[u32] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Maximum degree `Δ`.
    pub fn max_degree(&self) -> u64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Average degree `Σ deg / n` as an exact rational.
    pub fn average_degree(&self) -> Rational {
        if self.n == 0 {
            return Rational::from_integer(0);
        }
        let sum: u64 = self.degrees.iter().sum();
        Rational::new(sum as i128, self.n as i128)
    }

    /// Multiplicity-weighted count of edges entirely inside `u`.
    pub fn induced_edges(&self, u: &VertexSet) -> u64 {
        self.edges()
            .filter(|(e, _)| e.iter().all(|&v| u.contains(v as usize)))
            .map(|(_, m)| m)
            .sum()
    }

    /// Sorted co-edge neighbourhood of every vertex.
    pub fn neighbourhoods(&self) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|v| {
                let mut nb: Vec<u32> = self.incidence[v]
                    .iter()
                    .flat_map(|&e| self.edge(e as usize).iter().copied())
                    .filter(|&u| u as usize != v)
                    .collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect()
    }

    /// Edges as `(vertex list, multiplicity)` pairs with `usize` indices.
    pub fn edge_list(&self) -> Vec<(Vec<usize>, u64)> {
        self.edges()
            .map(|(e, m)| (e.iter().map(|&v| v as usize).collect(), m))
            .collect()
    }

    /// Copy without the edges that touch `x`; the vertex set is unchanged.
    pub fn without_edges_touching(&self, x: &VertexSet) -> Self {
        let kept = self
            .edges()
            .filter(|(e, _)| !e.iter().any(|&v| x.contains(v as usize)))
            .map(|(e, m)| (e.to_vec(), m))
            .collect();
        Self::build(self.n, kept)
    }
}

fn collect_edges(
    n: usize,
    sizes: (usize, usize),
    edges: impl IntoIterator<Item = (Vec<usize>, u64)>,
) -> Result<BTreeMap<Vec<u32>, u64>> {
    let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for (i, (mut e, m)) in edges.into_iter().enumerate() {
        check_edge(i, &e, n, sizes)?;
        if m == 0 {
            return Err(Error::ZeroMultiplicity { edge: i });
        }
        e.sort_unstable();
        *map.entry(e.into_iter().map(|v| v as u32).collect()).or_insert(0) += m;
    }
    Ok(map)
}

fn check_edge(i: usize, e: &[usize], n: usize, (lo, hi): (usize, usize)) -> Result<()> {
    if e.len() < lo || e.len() > hi {
        let expected = if lo == hi {
            lo.to_string()
        } else {
            format!("{lo}..={hi}")
        };
        return Err(Error::WrongEdgeSize {
            edge: i,
            found: e.len(),
            expected,
        });
    }
    if let Some(&v) = e.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { edge: i, vertex: v, n });
    }
    let mut seen = HashSet::with_capacity(e.len());
    for &v in e {
        if !seen.insert(v) {
            return Err(Error::RepeatedVertex { edge: i, vertex: v });
        }
    }
    Ok(())
}

/// An `r`-uniform multi-hypergraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    r: usize,
    store: EdgeMultiset,
}

impl Deref for Hypergraph {
    type Target = EdgeMultiset;
    fn deref(&self) -> &EdgeMultiset {
        &self.store
    }
}

impl Hypergraph {
    /// Builds a hypergraph with unit multiplicities; repeated edges are merged
    /// into a single edge of higher multiplicity.
    pub fn new(n: usize, r: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        Self::with_multiplicities(n, r, edges.into_iter().map(|e| (e, 1)))
    }

    pub fn with_multiplicities(
        n: usize,
        r: usize,
        edges: impl IntoIterator<Item = (Vec<usize>, u64)>,
    ) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameter(format!("uniformity r = {r} < 2")));
        }
        let map = collect_edges(n, (r, r), edges)?;
        Ok(Self {
            r,
            store: EdgeMultiset::build(n, map),
        })
    }

    pub fn empty(n: usize, r: usize) -> Result<Self> {
        Self::new(n, r, std::iter::empty())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn store(&self) -> &EdgeMultiset {
        &self.store
    }

    /// Re-checks every stored invariant.
    pub fn validate(&self) -> Result<()> {
        for (i, (e, m)) in self.edges().enumerate() {
            let e: Vec<usize> = e.iter().map(|&v| v as usize).collect();
            check_edge(i, &e, self.n(), (self.r, self.r))?;
            if m == 0 {
                return Err(Error::ZeroMultiplicity { edge: i });
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!("edge {i} not sorted")));
            }
        }
        let deg_sum: u64 = self.degrees().iter().sum();
        if deg_sum != self.r as u64 * self.edge_count() {
            return Err(Error::InvalidParameter(
                "degree sum differs from r * e(H)".into(),
            ));
        }
        Ok(())
    }

    /// True when every multiplicity is 1.
    pub fn is_simple(&self) -> bool {
        (0..self.distinct_edges()).all(|i| self.multiplicity(i) == 1)
    }

    /// Edge density `p = e(H) / C(n, r)`.
    pub fn density(&self) -> Rational {
        let total = binom_i128(self.n(), self.r);
        if total == 0 {
            return Rational::from_integer(0);
        }
        Rational::new(self.edge_count() as i128, total)
    }

    /// Average degree `d = r e(H) / n`.
    pub fn avg_degree(&self) -> Rational {
        if self.n() == 0 {
            return Rational::from_integer(0);
        }
        Rational::new(
            (self.r as u64 * self.edge_count()) as i128,
            self.n() as i128,
        )
    }

    /// Complement within the complete `r`-uniform hypergraph. Simple inputs only.
    pub fn complement(&self) -> Result<Self> {
        if !self.is_simple() {
            return Err(Error::InvalidParameter(
                "complement is defined for simple hypergraphs only".into(),
            ));
        }
        let present: HashSet<&[u32]> = self.edges().map(|(e, _)| e).collect();
        let mut out = Vec::new();
        for_each_combination(self.n(), self.r, |c| {
            let key: Vec<u32> = c.iter().map(|&v| v as u32).collect();
            if !present.contains(key.as_slice()) {
                out.push(c.to_vec());
            }
        });
        Self::new(self.n(), self.r, out)
    }

    /// Shadow multi-hypergraph `H_t`: each `t`-set weighted by the number of
    /// (multiplicity-weighted) edges containing it.
    pub fn shadow(&self, t: usize) -> Result<Self> {
        if t < 2 || t > self.r {
            return Err(Error::InvalidParameter(format!(
                "shadow level t = {t} outside 2..={}",
                self.r
            )));
        }
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (e, m) in self.edges() {
            for_each_combination(e.len(), t, |idx| {
                let f: Vec<u32> = idx.iter().map(|&i| e[i]).collect();
                *map.entry(f).or_insert(0) += m;
            });
        }
        Ok(Self {
            r: t,
            store: EdgeMultiset::build(self.n(), map),
        })
    }

    /// Drops the edges meeting `x`.
    pub fn remove_boundary(&self, x: &VertexSet) -> Self {
        Self {
            r: self.r,
            store: self.store.without_edges_touching(x),
        }
    }

    /// Every edge included independently with probability `p`.
    pub fn random_binomial(n: usize, r: usize, p: f64, seed: u64) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidParameter(format!("r = {r} exceeds n = {n}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("probability {p} not in [0, 1]")));
        }
        let mut rng = stream_rng(seed, 0);
        let mut edges = Vec::new();
        for_each_combination(n, r, |c| {
            if rng.random::<f64>() < p {
                edges.push(c.to_vec());
            }
        });
        Self::new(n, r, edges)
    }

    /// Simple `d`-regular `r`-uniform hypergraph from a stub-matching model.
    ///
    /// The `n d` stubs are shuffled and cut into groups of `r`. Groups with a
    /// repeated vertex or duplicating an earlier group are pooled together
    /// with an equal number of random good groups, reshuffled and regrouped.
    /// Each regrouping round consumes one retry.
    pub fn random_regular(
        n: usize,
        r: usize,
        d: usize,
        seed: u64,
        max_retries: usize,
    ) -> Result<Self> {
        if r < 2 || r > n {
            return Err(Error::InvalidParameter(format!("need 2 <= r <= n, got r = {r}, n = {n}")));
        }
        if !(n * d).is_multiple_of(r) {
            return Err(Error::Infeasible(format!("n d / r = {}/{r} is not an integer", n * d)));
        }
        if binom(n as u64 - 1, r as u64 - 1) < d as u128 {
            return Err(Error::Infeasible(format!(
                "degree {d} exceeds C(n-1, r-1) for n = {n}, r = {r}"
            )));
        }
        let mut rng = stream_rng(seed, 0);
        let mut stubs: Vec<u32> = (0..n as u32)
            .flat_map(|v| std::iter::repeat_n(v, d))
            .collect();
        stubs.shuffle(&mut rng);
        let m = stubs.len() / r;
        let mut groups: Vec<Vec<u32>> = stubs
            .chunks(r)
            .map(|c| {
                let mut g = c.to_vec();
                g.sort_unstable();
                g
            })
            .collect();

        for _ in 0..=max_retries {
            let bad = defective_groups(&groups);
            if bad.is_empty() {
                let edges = groups
                    .into_iter()
                    .map(|g| g.into_iter().map(|v| v as usize).collect());
                return Self::new(n, r, edges);
            }
            let mut chosen: Vec<usize> = bad.clone();
            let bad_set: HashSet<usize> = bad.iter().copied().collect();
            let good: Vec<usize> = (0..m).filter(|i| !bad_set.contains(i)).collect();
            chosen.extend(good.choose_multiple(&mut rng, bad.len()).copied());
            let mut pool: Vec<u32> = chosen.iter().flat_map(|&i| groups[i].clone()).collect();
            pool.shuffle(&mut rng);
            for (slot, chunk) in chosen.iter().zip(pool.chunks(r)) {
                let mut g = chunk.to_vec();
                g.sort_unstable();
                groups[*slot] = g;
            }
        }
        Err(Error::RetriesExhausted(max_retries))
    }
}

fn defective_groups(groups: &[Vec<u32>]) -> Vec<usize> {
    let mut seen: HashSet<&[u32]> = HashSet::with_capacity(groups.len());
    let mut bad = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        if g.windows(2).any(|w| w[0] == w[1]) || !seen.insert(g.as_slice()) {
            bad.push(i);
        }
    }
    bad
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        let mut i = k;
        while i > 0 && c[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Hypergraph whose edges have sizes in `2..=max_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedHypergraph {
    max_r: usize,
    store: EdgeMultiset,
}

impl Deref for MixedHypergraph {
    type Target = EdgeMultiset;
    fn deref(&self) -> &EdgeMultiset {
        &self.store
    }
}

impl MixedHypergraph {
    pub fn new(n: usize, max_r: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        Self::with_multiplicities(n, max_r, edges.into_iter().map(|e| (e, 1)))
    }

    pub fn with_multiplicities(
        n: usize,
        max_r: usize,
        edges: impl IntoIterator<Item = (Vec<usize>, u64)>,
    ) -> Result<Self> {
        if max_r < 2 {
            return Err(Error::InvalidParameter(format!("max edge size {max_r} < 2")));
        }
        let map = collect_edges(n, (2, max_r), edges)?;
        Ok(Self {
            max_r,
            store: EdgeMultiset::build(n, map),
        })
    }

    pub fn max_r(&self) -> usize {
        self.max_r
    }

    pub fn store(&self) -> &EdgeMultiset {
        &self.store
    }
}

impl From<&Hypergraph> for MixedHypergraph {
    fn from(h: &Hypergraph) -> Self {
        Self {
            max_r: h.r,
            store: h.store.clone(),
        }
    }
}

/// Structured export mirroring the text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphRecord {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_r: Option<usize>,
    pub edges: Vec<Vec<usize>>,
    pub multiplicities: Vec<u64>,
}

impl From<&Hypergraph> for HypergraphRecord {
    fn from(h: &Hypergraph) -> Self {
        let (edges, multiplicities) = h.edge_list().into_iter().unzip();
        Self {
            n: h.n(),
            r: Some(h.r),
            max_r: None,
            edges,
            multiplicities,
        }
    }
}

impl From<&MixedHypergraph> for HypergraphRecord {
    fn from(h: &MixedHypergraph) -> Self {
        let (edges, multiplicities) = h.edge_list().into_iter().unzip();
        Self {
            n: h.n(),
            r: None,
            max_r: Some(h.max_r),
            edges,
            multiplicities,
        }
    }
}
