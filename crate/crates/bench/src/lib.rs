//! Fixed benchmark instances.

use hbisect_core::{Hypergraph, VectorTuple};

/// `d`-regular `r`-uniform instance with a fixed seed.
pub fn regular(n: usize, r: usize, d: usize) -> Hypergraph {
    Hypergraph::random_regular(n, r, d, 0xB15EC7, 1000).expect("feasible benchmark instance")
}

/// Dense random instance small enough for exhaustive routines.
pub fn small(n: usize, r: usize) -> Hypergraph {
    Hypergraph::random_binomial(n, r, 0.3, 7).expect("valid benchmark instance")
}

/// `r` unit vectors with every pairwise inner product equal to `rho`.
pub fn equicorrelated(r: usize, rho: f64) -> VectorTuple {
    let gram: Vec<Vec<f64>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { 1.0 } else { rho }).collect())
        .collect();
    VectorTuple::from_gram(&gram).expect("positive definite Gram matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(regular(120, 3, 8).edge_count(), 320);
        assert_eq!(small(12, 3).n(), 12);
        let vs = equicorrelated(4, 0.05);
        assert_eq!(vs.r(), 4);
        assert!((vs.max_pairwise() - 0.05).abs() < 1e-12);
    }
}
