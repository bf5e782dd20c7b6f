//! Binomials, exact rationals and vertex subsets shared by the other modules.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Exact rational used for discrepancies and densities.
pub type Rational = Ratio<i128>;

/// `C(n, k)` as `u128`. Panics on overflow, which needs `n` far beyond the
/// sizes any routine in this crate accepts.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial coefficient overflows u128")
            / (i as u128 + 1);
    }
    acc
}

pub fn binom_i128(n: usize, k: usize) -> i128 {
    binom(n as u64, k as u64) as i128
}

pub fn binom_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial `x (x-1) ... (x-k+1)`.
pub fn falling(x: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        if i > x {
            return BigInt::zero();
        }
        acc *= BigInt::from(x - i);
    }
    acc
}

pub fn factorial(k: u64) -> u128 {
    (1..=k as u128).product()
}

pub fn rational(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn to_big(q: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

pub fn rat_f64(q: &Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub fn big_f64(q: &BigRational) -> f64 {
    // Ratio<BigInt>::to_f64 handles numerators beyond f64 range.
    q.to_f64().unwrap_or(f64::NAN)
}

/// Deterministic RNG stream for `(seed, stream)`; used to give every
/// trial or chunk its own generator independent of scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A subset of `0..n` stored as a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    mask: Vec<bool>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self {
            mask: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            mask: vec![true; n],
        }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    /// Panics if an index is `>= n`.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; n];
        for v in indices {
            mask[v] = true;
        }
        Self { mask }
    }

    /// Bit `i` of `bits` is vertex `i`; `n <= 64`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self {
            mask: (0..n).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    pub fn bits(&self) -> u64 {
        assert!(self.mask.len() <= 64);
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn n(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.mask[v]
    }

    pub fn insert(&mut self, v: usize) {
        self.mask[v] = true;
    }

    pub fn remove(&mut self, v: usize) {
        self.mask[v] = false;
    }

    pub fn toggle(&mut self, v: usize) {
        self.mask[v] = !self.mask[v];
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            mask: self
                .mask
                .iter()
                .zip(&other.mask)
                .map(|(a, b)| *a || *b)
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        !self.mask.iter().zip(&other.mask).any(|(a, b)| *a && *b)
    }
}
