use rayon::prelude::*;
use serde::Serialize;

use super::{DiscReport, Method, Scaled};
use crate::combinatorics::VertexSet;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const EXHAUSTIVE_DISC_LIMIT: usize = 24;
pub const EXHAUSTIVE_BW_LIMIT: usize = 20;

/// Running extremes over a range of subsets. Ties keep the smaller mask so
/// the merged result does not depend on chunk order.
#[derive(Clone, Copy, Debug)]
struct Extremes {
    max: (i128, u64),
    min: (i128, u64),
}

impl Extremes {
    fn new(d: i128, mask: u64) -> Self {
        Self {
            max: (d, mask),
            min: (d, mask),
        }
    }

    fn push(&mut self, d: i128, mask: u64) {
        if d > self.max.0 || (d == self.max.0 && mask < self.max.1) {
            self.max = (d, mask);
        }
        if d < self.min.0 || (d == self.min.0 && mask < self.min.1) {
            self.min = (d, mask);
        }
    }

    fn merge(mut self, o: Self) -> Self {
        self.push(o.max.0, o.max.1);
        self.push(o.min.0, o.min.1);
        self
    }
}

/// Subsets with fixed high bits `prefix` enumerated in Gray-code order over
/// the low `low_bits`, updating `e(U)` incrementally.
fn scan_chunk(h: &Hypergraph, scaled: &Scaled, prefix: u64, low_bits: usize) -> Extremes {
    let n = h.n();
    let mut mask = prefix << low_bits;
    let mut in_u: Vec<usize> = (0..h.distinct_edges())
        .map(|i| h.edge(i).iter().filter(|&&v| mask >> v & 1 == 1).count())
        .collect();
    let r = h.r();
    let mut e_u: u64 = (0..h.distinct_edges())
        .filter(|&i| in_u[i] == r)
        .map(|i| h.multiplicity(i))
        .sum();
    let mut size = mask.count_ones() as usize;
    let mut ext = Extremes::new(scaled.scaled(e_u, size), mask);
    for step in 1u64..(1u64 << low_bits) {
        let v = step.trailing_zeros() as usize;
        debug_assert!(v < n);
        let adding = mask >> v & 1 == 0;
        mask ^= 1 << v;
        for &e in h.incident(v) {
            let e = e as usize;
            if adding {
                in_u[e] += 1;
                if in_u[e] == r {
                    e_u += h.multiplicity(e);
                }
            } else {
                if in_u[e] == r {
                    e_u -= h.multiplicity(e);
                }
                in_u[e] -= 1;
            }
        }
        if adding {
            size += 1;
        } else {
            size -= 1;
        }
        ext.push(scaled.scaled(e_u, size), mask);
    }
    ext
}

/// `disc⁺`, `disc⁻` and `disc` by enumerating all `2^n` subsets.
pub fn disc_exact(h: &Hypergraph) -> Result<DiscReport> {
    let n = h.n();
    if n > EXHAUSTIVE_DISC_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_DISC_LIMIT,
        });
    }
    let scaled = Scaled::new(h);
    let high = n.min(6);
    let low = n - high;
    let ext = (0..1u64 << high)
        .into_par_iter()
        .map(|prefix| scan_chunk(h, &scaled, prefix, low))
        .reduce_with(Extremes::merge)
        .expect("at least one chunk");
    let plus = scaled.value(ext.max.0);
    let minus = -scaled.value(ext.min.0);
    Ok(DiscReport {
        witness: VertexSet::from_bits(n, ext.max.1).indices(),
        value: plus,
        disc_plus: Some(plus),
        disc_minus: Some(minus),
        disc: Some(plus.max(minus)),
        minus_witness: Some(VertexSet::from_bits(n, ext.min.1).indices()),
        method: Method::Exhaustive,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BisectionWitness {
    pub width: u64,
    pub x: Vec<usize>,
}

/// Exact bisection width by enumerating every equipartition.
pub fn oracle_bw(h: &Hypergraph) -> Result<BisectionWitness> {
    let n = h.n();
    if n > EXHAUSTIVE_BW_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_BW_LIMIT,
        });
    }
    let k = n / 2;
    let edges: Vec<(u64, u64)> = h
        .edges()
        .map(|(e, m)| (e.iter().fold(0u64, |acc, &v| acc | 1 << v), m))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best: Option<(u64, u64)> = None;
    let mut x: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    loop {
        // For even n each bisection appears twice; keep the copy containing 0.
        if n % 2 == 1 || n == 0 || x & 1 == 1 {
            let cross: u64 = edges
                .iter()
                .filter(|(em, _)| em & x != 0 && em & (full & !x) != 0)
                .map(|(_, m)| m)
                .sum();
            if best.is_none_or(|(w, _)| cross < w) {
                best = Some((cross, x));
            }
        }
        if k == 0 {
            break;
        }
        // Gosper's hack: next subset with k bits.
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
        if x > full {
            break;
        }
    }
    let (width, mask) = best.expect("at least one equipartition");
    Ok(BisectionWitness {
        width,
        x: VertexSet::from_bits(n, mask).indices(),
    })
}
