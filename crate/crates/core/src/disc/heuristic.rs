use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use super::{boundary, disc_of, split_disc, DiscReport, Method, Scaled};
use crate::combinatorics::{rat_f64, stream_rng, Rational, VertexSet};
use crate::cut::hyperplane_side;
use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::hypergraph::{for_each_combination, Hypergraph};

pub const DEFAULT_REDUCTION_C: f64 = 8.0;

/// Candidates from the rounding trials that get a local search pass.
const REFINED_STARTS: usize = 8;

fn report(h: &Hypergraph, u: &VertexSet, method: Method) -> DiscReport {
    DiscReport {
        witness: u.indices(),
        value: disc_of(h, u),
        disc_plus: None,
        disc_minus: None,
        disc: None,
        minus_witness: None,
        method,
    }
}

/// 1-flip hill climbing on `disc`. Each step applies the single vertex
/// toggle with the largest gain (smallest index on ties) until none gains.
pub fn improve_witness(h: &Hypergraph, start: &VertexSet) -> VertexSet {
    let n = h.n();
    let r = h.r();
    let scaled = Scaled::new(h);
    let mut u = start.clone();
    let mut in_u: Vec<usize> = (0..h.distinct_edges())
        .map(|i| h.edge(i).iter().filter(|&&v| u.contains(v as usize)).count())
        .collect();
    let mut size = u.len();
    for _ in 0..4 * n + 4 {
        let mut best: Option<(i128, usize)> = None;
        for v in 0..n {
            let adding = !u.contains(v);
            let (de, new_size) = if adding {
                let gained: u64 = h
                    .incident(v)
                    .iter()
                    .filter(|&&e| in_u[e as usize] == r - 1)
                    .map(|&e| h.multiplicity(e as usize))
                    .sum();
                (gained as i128, size + 1)
            } else {
                let lost: u64 = h
                    .incident(v)
                    .iter()
                    .filter(|&&e| in_u[e as usize] == r)
                    .map(|&e| h.multiplicity(e as usize))
                    .sum();
                (-(lost as i128), size - 1)
            };
            let gain = de * scaled.total_sets - scaled.edges * (scaled.binoms[new_size] - scaled.binoms[size]);
            if gain > 0 && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, v));
            }
        }
        let Some((_, v)) = best else { break };
        let adding = !u.contains(v);
        u.toggle(v);
        for &e in h.incident(v) {
            if adding {
                in_u[e as usize] += 1;
            } else {
                in_u[e as usize] -= 1;
            }
        }
        size = if adding { size + 1 } else { size - 1 };
    }
    u
}

/// Lower bound on `disc⁺` from hyperplane rounding: both sides of every
/// trial are scored, the best few are refined by [`improve_witness`].
pub fn disc_plus_heuristic(h: &Hypergraph, trials: usize, alpha: f64, seed: u64) -> Result<DiscReport> {
    let n = h.n();
    if h.edge_count() == 0 {
        return Ok(report(h, &VertexSet::empty(n), Method::Rounding));
    }
    let emb = Embedding::build(h, alpha)?;
    let scaled = Scaled::new(h);
    let mut scored: Vec<(i128, u64, VertexSet)> = (0..trials.max(1) as u64)
        .into_par_iter()
        .flat_map_iter(|t| {
            let x = VertexSet::from_mask(hyperplane_side(&emb, seed, t));
            let y = x.complement();
            [x, y].into_iter().map(move |s| (t, s))
        })
        .map(|(t, s)| (scaled.scaled(h.induced_edges(&s), s.len()), t, s))
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.mask().cmp(b.2.mask())));
    scored.truncate(REFINED_STARTS);
    let best = scored
        .into_par_iter()
        .map(|(_, t, s)| {
            let u = improve_witness(h, &s);
            (scaled.scaled(h.induced_edges(&u), u.len()), t, u)
        })
        .reduce_with(|a, b| if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) { b } else { a })
        .expect("at least one candidate");
    let mut rep = report(h, &best.2, Method::Rounding);
    // The empty set always scores 0.
    if rep.value < Rational::from_integer(0) {
        rep = report(h, &VertexSet::empty(n), Method::Rounding);
    }
    Ok(rep)
}

/// `β_i = ∏_{j<i} (b − j)/(s − j)`: the chance that `i` fixed vertices of an
/// `s`-set all land in a uniform `b`-subset.
pub fn beta(s: usize, b: usize, i: usize) -> Rational {
    let mut acc = Rational::from_integer(1);
    for j in 0..i {
        if j >= b {
            return Rational::from_integer(0);
        }
        acc *= Rational::new((b - j) as i128, (s - j) as i128);
    }
    acc
}

/// Best `disc(X ∪ Y)` over sampled `⌊|X^c|/2⌋`-subsets `Y` of `X^c`.
pub fn maxdeg_witness(h: &Hypergraph, x: &VertexSet, seed: u64, samples: usize) -> DiscReport {
    let rest = x.complement().indices();
    let b = rest.len() / 2;
    let scaled = Scaled::new(h);
    let best = (0..samples.max(1) as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t);
            let mut u = x.clone();
            for i in sample(&mut rng, rest.len(), b) {
                u.insert(rest[i]);
            }
            (scaled.scaled(h.induced_edges(&u), u.len()), t, u)
        })
        .reduce_with(|a, b| if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) { b } else { a })
        .expect("at least one sample");
    report(h, &best.2, Method::Sampling)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaCheck {
    pub i: usize,
    #[serde(serialize_with = "super::ser_rational")]
    pub beta: Rational,
    /// Mean of `disc_{r−i,i}(X, Y)` over every `b`-subset `Y ⊆ X^c`.
    #[serde(serialize_with = "super::ser_rational")]
    pub expectation: Rational,
    /// `β_i · disc_{r−i,i}(X, X^c)`.
    #[serde(serialize_with = "super::ser_rational")]
    pub predicted: Rational,
    pub holds: bool,
}

pub const BETA_ENUMERATION_LIMIT: usize = 12;

/// Enumerates every `Y` to test the expectation of each split term.
pub fn beta_identity_check(h: &Hypergraph, x: &VertexSet) -> Result<Vec<BetaCheck>> {
    let rest = x.complement().indices();
    let s = rest.len();
    if s > BETA_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n: s,
            limit: BETA_ENUMERATION_LIMIT,
        });
    }
    let b = s / 2;
    let r = h.r();
    let xc = x.complement();
    let mut sums = vec![Rational::from_integer(0); r + 1];
    let mut count = 0i128;
    let mut failure = None;
    for_each_combination(s, b, |idx| {
        let y = VertexSet::from_indices(h.n(), idx.iter().map(|&i| rest[i]));
        for (i, acc) in sums.iter_mut().enumerate() {
            match split_disc(h, &[x.clone(), y.clone()], &[r - i, i]) {
                Ok(sd) => *acc += sd.disc,
                Err(e) => failure = Some(e),
            }
        }
        count += 1;
    });
    if let Some(e) = failure {
        return Err(e);
    }
    (0..=r)
        .map(|i| {
            let full = split_disc(h, &[x.clone(), xc.clone()], &[r - i, i])?.disc;
            let beta = beta(s, b, i);
            let expectation = sums[i] / Rational::from_integer(count);
            let predicted = beta * full;
            Ok(BetaCheck {
                i,
                beta,
                expectation,
                predicted,
                holds: expectation == predicted,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionBranch {
    /// `X` empty: plain heuristic on `H`.
    Plain,
    /// `|∂(X)| ≥ e(H)/2`: sampled `X ∪ Y` witnesses.
    MaxDegree,
    /// Heuristic on `H′ = H − ∂(X)`, evaluated back in `H`.
    Pruned,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionReport {
    pub report: DiscReport,
    pub high_degree: Vec<usize>,
    pub boundary: u64,
    pub threshold: f64,
    pub branch: ReductionBranch,
    /// `disc_H(U) ≥ disc_{H′}(U) − |∂(X)|` on the pruned-branch witness.
    pub correction_holds: Option<bool>,
}

/// Splits off the vertices of degree above `c·d` and searches for a positive
/// discrepancy witness along whichever branch carries most of the edges.
pub fn large_degree_reduction(
    h: &Hypergraph,
    c: f64,
    seed: u64,
    trials: usize,
    alpha: f64,
) -> Result<ReductionReport> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("reduction constant C = {c} must be positive")));
    }
    let n = h.n();
    let threshold = c * rat_f64(&h.avg_degree());
    let x = VertexSet::from_indices(n, (0..n).filter(|&v| h.degree(v) as f64 > threshold));
    let bnd = boundary(h, &x);
    let e = h.edge_count();
    let (mut rep, branch, correction_holds) = if x.is_empty() {
        (disc_plus_heuristic(h, trials, alpha, seed)?, ReductionBranch::Plain, None)
    } else if 2 * bnd >= e {
        (maxdeg_witness(h, &x, seed, trials), ReductionBranch::MaxDegree, None)
    } else {
        let pruned = h.remove_boundary(&x);
        let inner = disc_plus_heuristic(&pruned, trials, alpha, seed)?;
        let u = VertexSet::from_indices(n, inner.witness.iter().copied());
        let in_h = disc_of(h, &u);
        let holds = in_h >= inner.value - Rational::from_integer(bnd as i128);
        let mut rep = report(h, &u, Method::Reduction);
        let alt = maxdeg_witness(h, &x, seed, trials);
        if alt.value > rep.value {
            rep = alt;
        }
        (rep, ReductionBranch::Pruned, Some(holds))
    };
    rep.method = Method::Reduction;
    Ok(ReductionReport {
        report: rep,
        high_degree: x.indices(),
        boundary: bnd,
        threshold,
        branch,
        correction_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::disc_exact;

    #[test]
    fn beta_examples() {
        assert_eq!(beta(7, 3, 0), Rational::from_integer(1));
        assert_eq!(beta(4, 2, 2), Rational::new(1, 6));
        assert_eq!(beta(4, 2, 3), Rational::from_integer(0));
    }

    #[test]
    fn beta_identity_by_enumeration() {
        let h = Hypergraph::random_binomial(11, 3, 0.35, 4).unwrap();
        let x = VertexSet::from_indices(11, [0, 3, 8]);
        let checks = beta_identity_check(&h, &x).unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
    }

    #[test]
    fn heuristic_below_exhaustive() {
        for seed in 0..4 {
            let h = Hypergraph::random_binomial(12, 3, 0.3, seed).unwrap();
            let heur = disc_plus_heuristic(&h, 50, 0.05, seed).unwrap();
            let exact = disc_exact(&h).unwrap();
            assert!(heur.value <= exact.disc_plus.unwrap());
            let w = VertexSet::from_indices(12, heur.witness.iter().copied());
            assert_eq!(disc_of(&h, &w), heur.value);
        }
    }

    #[test]
    fn heuristic_on_complete_is_zero() {
        let edges = (0..7).flat_map(|a| (a + 1..7).flat_map(move |b| (b + 1..7).map(move |c| vec![a, b, c])));
        let h = Hypergraph::new(7, 3, edges).unwrap();
        assert_eq!(disc_plus_heuristic(&h, 20, 0.05, 1).unwrap().value, Rational::from_integer(0));
    }

    #[test]
    fn local_search_never_decreases() {
        let h = Hypergraph::random_binomial(20, 3, 0.1, 9).unwrap();
        let start = VertexSet::from_indices(20, [1, 2, 3, 10, 15]);
        let out = improve_witness(&h, &start);
        assert!(disc_of(&h, &out) >= disc_of(&h, &start));
    }

    #[test]
    fn regular_graph_takes_plain_branch() {
        let h = Hypergraph::random_regular(30, 3, 4, 2, 100).unwrap();
        let red = large_degree_reduction(&h, DEFAULT_REDUCTION_C, 2, 40, 0.05).unwrap();
        assert!(red.high_degree.is_empty());
        assert_eq!(red.branch, ReductionBranch::Plain);
    }

    #[test]
    fn star_heavy_instance() {
        // Vertex 0 lies in every edge.
        let edges = (1..30).flat_map(|a| (a + 1..30).map(move |b| vec![0, a, b]));
        let mut edges: Vec<Vec<usize>> = edges.step_by(7).collect();
        edges.push(vec![5, 17, 29]);
        let h = Hypergraph::new(60, 3, edges).unwrap();
        let red = large_degree_reduction(&h, 2.0, 3, 50, 0.05).unwrap();
        assert!(red.high_degree.contains(&0));
        let u = VertexSet::from_indices(60, red.report.witness.iter().copied());
        assert!(disc_of(&h, &u) > Rational::from_integer(0));
    }

    #[test]
    fn pruned_branch_correction() {
        // Two hubs touching a minority of the edges plus a sparse random part.
        let base = Hypergraph::random_binomial(40, 3, 0.004, 6).unwrap();
        let mut edges: Vec<Vec<usize>> = base.edge_list().into_iter().map(|(e, _)| e).collect();
        edges.extend((1..12).map(|a| vec![0, a, a + 12]));
        let h = Hypergraph::new(40, 3, edges).unwrap();
        let red = large_degree_reduction(&h, 3.0, 4, 40, 0.05).unwrap();
        assert_eq!(red.branch, ReductionBranch::Pruned);
        assert_eq!(red.correction_holds, Some(true));
    }
}
