//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::index::sample;

use hbisect_core::combinatorics::{binom_big, rat_f64, stream_rng, Rational};
use hbisect_core::cut::random_bisection_expectation;
use hbisect_core::disc::{
    beta_identity_check, disc_direct, disc_exact, disc_of, disc_plus_heuristic, half_binomial_inequality,
    oracle_bw, poly_identity_check, shadow_decomposition_check, shadow_density_ratios, split_pair,
};
use hbisect_core::geomprob::{mu_bracket_check, mu_estimate, mu_exact_r2};
use hbisect_core::hypergraph::for_each_combination;
use hbisect_core::spectral::{
    default_candidates, exhaustive_candidates, lambda2_certificate, disc_bound_check, local_ascent, mu_certificate,
    sigma_eval, sigma_gradient, sigma_symmetric, tau_eval, MuMode, SpectralCertificate, NORM_TOL,
};
use hbisect_core::{bisect, BalanceMode, Embedding, Hypergraph, VectorTuple, VertexSet};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || {
        format!("runtime {:.1}s over limit {}s", start.elapsed().as_secs_f64(), limit.as_secs())
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

/// Small random instances used by the bisection and discrepancy chains.
fn oracle_instances() -> Vec<Hypergraph> {
    (0..200u64)
        .map(|i| {
            let r = 2 + (i % 2) as usize;
            let n = 8 + (i as usize / 2) % 7;
            let p = if r == 2 { 0.35 } else { 0.15 };
            Hypergraph::random_binomial(n, r, p, 1000 + i).unwrap()
        })
        .collect()
}

fn s_of(h: &Hypergraph, cross: u64) -> Rational {
    let e = Rational::from_integer(h.edge_count() as i128);
    e - e * Rational::new(1, 1 << (h.r() - 1)) - Rational::from_integer(cross as i128)
}

fn geometry_exact_cases() -> Outcome {
    let start = Instant::now();
    let t = 1_000_000;
    let mut worst = 0.0f64;
    for r in 2..=4 {
        let basis: Vec<Vec<f64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as u8 as f64).collect()).collect();
        let est = mu_estimate(&VectorTuple::new(basis).unwrap(), t, 11 + r as u64).unwrap();
        let truth = 0.5f64.powi(r);
        let z = (est.estimate - truth).abs() / est.std_error;
        worst = worst.max(z);
        ensure(z <= 4.0, || format!("orthonormal r={r}: {} vs {truth} ({z:.2} SE)", est.estimate))?;
    }
    for angle in [PI / 6.0, PI / 3.0, PI / 2.0] {
        let vs = VectorTuple::new(vec![vec![1.0, 0.0], vec![angle.cos(), angle.sin()]]).unwrap();
        let est = mu_estimate(&vs, t, 99).unwrap();
        let truth = mu_exact_r2(angle);
        let z = (est.estimate - truth).abs() / est.std_error;
        worst = worst.max(z);
        ensure(z <= 4.0, || format!("angle {angle:.4}: {} vs {truth} ({z:.2} SE)", est.estimate))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("max deviation {worst:.2} SE"))
}

fn bracket() -> Outcome {
    let start = Instant::now();
    let r3 = mu_bracket_check(3, 20, 10_000_000, 5, 0.05).unwrap();
    ensure(r3.all_positive && r3.max_ratio.is_finite(), || {
        format!("r=3 ratios not in a positive interval: [{}, {}]", r3.min_ratio, r3.max_ratio)
    })?;
    let r2 = mu_bracket_check(2, 20, 10_000_000, 6, 0.05).unwrap();
    let target = 1.0 / (2.0 * PI);
    let worst = r2
        .points
        .iter()
        .map(|p| (p.ratio / target - 1.0).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 0.10, || format!("r=2 ratio off 1/(2π) by {:.1}%", 100.0 * worst))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "r=3 ratios in [{:.4}, {:.4}]; r=2 within {:.2}% of 1/(2π)",
        r3.min_ratio,
        r3.max_ratio,
        100.0 * worst
    ))
}

fn embedding_invariants() -> Outcome {
    for i in 0..50u64 {
        let r = 2 + (i % 3) as usize;
        let n = 20 + (i as usize * 37) % 181;
        let h = if i % 2 == 0 {
            let d = 2 + (i as usize % 5);
            let n = n - n % r;
            Hypergraph::random_regular(n, r, d, i, 1000).unwrap()
        } else {
            let p = 4.0 / (n as f64).powi(r as i32 - 1);
            Hypergraph::random_binomial(n, r, p.min(0.5), i).unwrap()
        };
        let emb = Embedding::build(&h, 0.05).map_err(|e| format!("instance {i}: {e}"))?;
        let inv = emb.check_invariants(&h);
        ensure(inv.ok, || format!("instance {i} (n={}, r={r}): {inv:?}", h.n()))?;
        ensure(emb.pair_sum_exact() == emb.pair_sum_exact_naive(), || {
            format!("instance {i}: pair sums disagree")
        })?;
    }
    Ok("50 instances, invariants hold, exact pair sums agree".into())
}

fn oracle_bisection() -> Outcome {
    let start = Instant::now();
    let mut exact = 0;
    for (i, h) in oracle_instances().iter().enumerate() {
        let rep = bisect(h, 500, 0.05, i as u64, BalanceMode::Greedy).map_err(|e| e.to_string())?;
        ensure(rep.result.is_equipartition(), || format!("instance {i}: not an equipartition"))?;
        let bw = oracle_bw(h).unwrap().width;
        ensure(rep.result.cross >= bw, || format!("instance {i}: cross {} < bw {bw}", rep.result.cross))?;
        exact += (rep.result.cross == bw) as usize;
    }
    ensure(exact * 10 >= 200 * 6, || format!("exact on {exact}/200 < 60%"))?;
    let matching = Hypergraph::new(8, 2, (0..4).map(|k| vec![2 * k, 2 * k + 1])).unwrap();
    let k4 = Hypergraph::new(4, 2, (0..4).flat_map(|a| (a + 1..4).map(move |b| vec![a, b]))).unwrap();
    for (name, h) in [("matching", &matching), ("K4", &k4)] {
        let got = bisect(h, 500, 0.05, 1, BalanceMode::Greedy).unwrap().result.cross;
        let bw = oracle_bw(h).unwrap().width;
        ensure(got == bw, || format!("{name}: {got} vs oracle {bw}"))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("exact on {exact}/200; matching and K4 exact"))
}

/// Average cut over every `⌊n/2⌋`-subset.
fn enumerated_expectation(h: &Hypergraph) -> BigRational {
    let n = h.n();
    let mut total = BigInt::zero();
    let mut count = BigInt::zero();
    for_each_combination(n, n / 2, |idx| {
        let x = VertexSet::from_indices(n, idx.iter().copied());
        let cross: u64 = h
            .edges()
            .filter(|(e, _)| {
                let inside = e.iter().filter(|&&v| x.contains(v as usize)).count();
                inside > 0 && inside < e.len()
            })
            .map(|(_, m)| m)
            .sum();
        total += cross;
        count += 1;
    });
    BigRational::new(total, count)
}

fn baseline() -> Outcome {
    let mut checked = 0;
    for n in 2..=12usize {
        for r in 2..=4usize.min(n) {
            let h = Hypergraph::random_binomial(n, r, 0.4, (n * 10 + r) as u64).unwrap();
            let want = enumerated_expectation(&h);
            let got = random_bisection_expectation(&h);
            ensure(got == want, || format!("n={n} r={r}: {got} vs enumeration {want}"))?;
            let limit = h.edge_count() as f64 * (1.0 - 0.5f64.powi(r as i32 - 1));
            if limit > 0.0 {
                let rel = (rat_big(&got) - limit).abs() / limit;
                ensure(rel <= 2.0 * (r * r) as f64 / n as f64, || format!("n={n} r={r}: relative gap {rel}"))?;
            }
            checked += 1;
        }
    }
    let n = 100;
    let h = Hypergraph::random_binomial(n, 3, 0.002, 17).unwrap();
    let exact = rat_big(&random_bisection_expectation(&h));
    let samples = 100_000u64;
    let mut rng = stream_rng(23, 0);
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = VertexSet::from_indices(n, sample(&mut rng, n, n / 2));
        let cross = h
            .edges()
            .filter(|(e, _)| {
                let inside = e.iter().filter(|&&v| x.contains(v as usize)).count();
                inside > 0 && inside < e.len()
            })
            .map(|(_, m)| m)
            .sum::<u64>() as f64;
        sum += cross;
        sum_sq += cross * cross;
    }
    let mean = sum / samples as f64;
    let se = ((sum_sq / samples as f64 - mean * mean) / samples as f64).sqrt();
    let z = (mean - exact).abs() / se;
    ensure(z <= 4.0, || format!("n=100: Monte-Carlo {mean} vs exact {exact} ({z:.2} SE)"))?;
    let limit = h.edge_count() as f64 * 0.75;
    let rel = (exact - limit).abs() / limit;
    ensure(rel <= 18.0 / 100.0, || format!("n=100 relative gap {rel}"))?;
    Ok(format!("{checked} enumerated instances exact; n=100 Monte-Carlo within {z:.2} SE"))
}

fn rat_big(q: &BigRational) -> f64 {
    hbisect_core::combinatorics::big_f64(q)
}

fn advantage_probe() -> Outcome {
    let start = Instant::now();
    let mut medians = Vec::new();
    for d in [4usize, 16] {
        let mut scaled = Vec::new();
        for seed in 0..20u64 {
            let h = Hypergraph::random_regular(300, 3, d, seed, 1000).unwrap();
            let rep = bisect(&h, 400, 0.05, seed, BalanceMode::Greedy).unwrap();
            let s = s_of(&h, rep.result.cross);
            ensure(s > Rational::from_integer(0), || format!("d={d} seed={seed}: s(H) = {s} ≤ 0"))?;
            scaled.push(rat_f64(&s) / ((d as f64).sqrt() * 300.0));
        }
        medians.push(median(scaled));
    }
    let (a, b) = (medians[0], medians[1]);
    ensure(a > 0.0 && b > 0.0, || format!("medians {a}, {b}"))?;
    ensure(a.max(b) / a.min(b) < 2.0, || format!("medians {a:.4} and {b:.4} differ by 2x or more"))?;
    within(start, Duration::from_secs(900))?;
    Ok(format!("all 40 runs s(H) > 0; median s/(√d n): d=4 {a:.4}, d=16 {b:.4}"))
}

fn disc_chain() -> Outcome {
    let mut count = 0;
    for (i, h) in oracle_instances().iter().enumerate() {
        let bw = oracle_bw(h).unwrap().width;
        let s = s_of(h, bw);
        let plus = disc_exact(h).unwrap().disc_plus.unwrap();
        ensure(plus * Rational::from_integer(2) >= s, || format!("instance {i}: disc+ {plus} < s/2 = {}", s / 2))?;
        // The same bound from the algorithm's own bisection.
        let rep = bisect(h, 50, 0.05, i as u64, BalanceMode::Greedy).unwrap();
        let x = VertexSet::from_indices(h.n(), rep.result.x.iter().copied());
        let sum = disc_of(h, &x) + disc_of(h, &x.complement());
        let s_alg = s_of(h, rep.result.cross);
        ensure(sum >= s_alg, || format!("instance {i}: disc(X) + disc(Y) = {sum} < {s_alg}"))?;
        count += 1;
    }
    for r in 1..=64u64 {
        for n in r..=64 {
            ensure(half_binomial_inequality(n, r), || format!("binomial inequality fails at n={n}, r={r}"))?;
        }
    }
    // Independent restatement with exact rationals.
    for r in 1..=64u64 {
        for n in r..=64u64 {
            let lhs = BigRational::from_integer(binom_big(n / 2, r) + binom_big(n.div_ceil(2), r));
            let rhs = BigRational::new(binom_big(n, r), BigInt::from(1) << (r - 1));
            ensure(lhs <= rhs, || format!("rational check fails at n={n}, r={r}"))?;
        }
    }
    Ok(format!("{count} instances; binomial inequality for all r ≤ n ≤ 64"))
}

fn random_set(n: usize, seed: u64, k: usize) -> VertexSet {
    let mut rng = stream_rng(seed, 7);
    VertexSet::from_indices(n, sample(&mut rng, n, k))
}

fn identity_suites() -> Outcome {
    let start = Instant::now();
    let mut checks = 0usize;
    for i in 0..40u64 {
        let r = 2 + (i % 3) as usize;
        let n = 10 + (i as usize % 5);
        let h = Hypergraph::random_binomial(n, r, 0.3, 500 + i).unwrap();
        let u = random_set(n, i, n / 3 + 1);
        let uc = u.complement();
        let parts = split_pair(&h, &u, &uc).unwrap();
        ensure(parts.iter().sum::<Rational>() == Rational::from_integer(0), || format!("{i}: bipartition sum"))?;
        // Disjoint U, U′ not covering V.
        let rest = uc.indices();
        let u2 = VertexSet::from_indices(n, rest.iter().copied().take(rest.len() / 2));
        let pieces: Rational = split_pair(&h, &u, &u2).unwrap().iter().sum();
        ensure(pieces == disc_of(&h, &u.union(&u2)), || format!("{i}: union decomposition"))?;
        ensure(disc_of(&h, &u) == disc_direct(&h, &u), || format!("{i}: incremental vs direct"))?;
        for t in 2..=r {
            let chk = shadow_decomposition_check(&h, &u, t).unwrap();
            ensure(chk.holds, || format!("{i}: shadow decomposition t={t}: {chk:?}"))?;
        }
        if h.edge_count() > 0 {
            for (t, got, want) in shadow_density_ratios(&h).unwrap() {
                ensure(got == want, || format!("{i}: density ratio at t={t}"))?;
            }
        }
        let x = random_set(n, i + 1000, n - 10.min(n - 1));
        let beta = beta_identity_check(&h, &x).unwrap();
        ensure(beta.iter().all(|b| b.holds), || format!("{i}: coefficient identity {beta:?}"))?;
        let xs = random_set(n, i + 2000, (n / 2).min(14));
        let ys = VertexSet::from_indices(n, xs.complement().indices().into_iter().step_by(2));
        let poly = poly_identity_check(&h, &xs, &ys).unwrap();
        ensure(poly.all_equal && poly.points.len() == 21, || format!("{i}: polynomial identity"))?;
        let d = disc_exact(&h).unwrap().disc.unwrap();
        let bound = d * Rational::from_integer((r as i128).pow(2 * r as u32));
        for v in split_pair(&h, &xs, &ys).unwrap() {
            ensure(v.abs() <= bound, || format!("{i}: split term {v} exceeds r^(2r) disc = {bound}"))?;
        }
        checks += 1;
    }
    // Complement symmetry of the extremes on small graphs.
    for i in 0..30u64 {
        let n = 3 + (i as usize % 4);
        let g = Hypergraph::random_binomial(n, 2, 0.5, 900 + i).unwrap();
        let a = disc_exact(&g).unwrap();
        let b = disc_exact(&g.complement().unwrap()).unwrap();
        ensure(a.disc_plus == b.disc_minus, || format!("complement {i}: {:?} vs {:?}", a.disc_plus, b.disc_minus))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{checks} instances, every identity exact"))
}

fn deflated_top_eigenvalue(h: &Hypergraph) -> f64 {
    let n = h.n();
    let c = 2.0 * h.edge_count() as f64 / (n * n) as f64;
    let mut m = DMatrix::from_element(n, n, -c);
    for (e, mult) in h.edges() {
        let (a, b) = (e[0] as usize, e[1] as usize);
        m[(a, b)] += mult as f64;
        m[(b, a)] += mult as f64;
    }
    m.symmetric_eigen().eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn bound_holds_for_all(h: &Hypergraph, p: f64, cert: &SpectralCertificate, cands: &[VertexSet]) -> Result<(), String> {
    for u in cands.iter().filter(|u| !u.is_empty()) {
        let chk = disc_bound_check(h, p, cert.value, u);
        ensure(chk.holds, || format!("disc bound fails for U = {:?}: {chk:?}", u.indices()))?;
    }
    Ok(())
}

fn spectral_soundness() -> Outcome {
    let start = Instant::now();
    // Permanent form against an independent bilinear form.
    for n in 2..=12usize {
        for k in 0..5u64 {
            let g = Hypergraph::random_binomial(n, 2, 0.5, n as u64 * 100 + k).unwrap();
            let mut rng = stream_rng(k, n as u64);
            let mut draw = || -> Vec<Rational> {
                (0..n)
                    .map(|_| Rational::new(rand::Rng::random_range(&mut rng, -9..=9), rand::Rng::random_range(&mut rng, 1..=5)))
                    .collect()
            };
            let (x, y) = (draw(), draw());
            let mut adj = vec![vec![Rational::from_integer(0); n]; n];
            for (e, m) in g.edges() {
                let (a, b) = (e[0] as usize, e[1] as usize);
                adj[a][b] += Rational::from_integer(m as i128);
                adj[b][a] += Rational::from_integer(m as i128);
            }
            let form: Rational = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| x[a] * adj[a][b] * y[b]).sum();
            ensure(tau_eval(&g, &[&x, &y]).unwrap() == form, || format!("bilinear form mismatch n={n}"))?;
        }
    }
    for (i, r) in [2usize, 3, 4, 5].into_iter().enumerate() {
        let h = Hypergraph::random_binomial(9, r, 0.3, i as u64).unwrap();
        let ones = vec![Rational::from_integer(1); 9];
        let args: Vec<&[Rational]> = (0..r).map(|_| ones.as_slice()).collect();
        ensure(sigma_eval(&h, &args).unwrap() == Rational::from_integer(0), || format!("σ(1,…,1) ≠ 0 at r={r}"))?;
    }
    // Gradient against central differences.
    let mut worst_grad = 0.0f64;
    for i in 0..20u64 {
        let r = 2 + (i % 3) as usize;
        let n = 12 + i as usize;
        let h = Hypergraph::random_binomial(n, r, 6.0 / (n as f64).powi(r as i32 - 1), 40 + i).unwrap();
        let mut rng = stream_rng(i, 3);
        let x: Vec<f64> = (0..n).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect();
        let g = sigma_gradient(&h, &x);
        let scale = g.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-12);
        let step = 1e-5;
        for v in 0..n {
            let mut hi = x.clone();
            let mut lo = x.clone();
            hi[v] += step;
            lo[v] -= step;
            let fd = (sigma_symmetric(&h, &hi) - sigma_symmetric(&h, &lo)) / (2.0 * step);
            let rel = (fd - g[v]).abs() / scale;
            worst_grad = worst_grad.max(rel);
        }
    }
    ensure(worst_grad <= 1e-6, || format!("gradient relative error {worst_grad:e}"))?;
    // Ascent against the deflated eigensolver on graphs, p = 2.
    let mut worst_gap = 0.0f64;
    for (i, n) in [10usize, 20, 30, 40, 50].into_iter().enumerate() {
        let g = Hypergraph::random_binomial(n, 2, 0.2, 70 + i as u64).unwrap();
        let truth = deflated_top_eigenvalue(&g);
        let cands = default_candidates(n, i as u64, 20, &[]);
        let cert = lambda2_certificate(&g, 2.0, &cands).unwrap();
        bound_holds_for_all(&g, 2.0, &cert, &cands)?;
        let mut best = local_ascent(&g, 2.0, &cert.vectors[0], 3000, 1e-2).unwrap();
        let mut rng = stream_rng(i as u64, 9);
        for _ in 0..4 {
            let x0: Vec<f64> = (0..n).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect();
            let c = local_ascent(&g, 2.0, &x0, 3000, 1e-2).unwrap();
            if c.value > best.value {
                best = c;
            }
        }
        ensure(best.value >= cert.value, || format!("n={n}: ascent below its start"))?;
        ensure(best.norm_error() < NORM_TOL, || format!("n={n}: witness norm off by {}", best.norm_error()))?;
        ensure(best.value <= truth + 1e-9, || format!("n={n}: certificate {} above eigenvalue {truth}", best.value))?;
        worst_gap = worst_gap.max(truth - best.value);
        // A valid lower bound on λ₂ also satisfies the inequality.
        bound_holds_for_all(&g, 2.0, &best, &cands)?;
    }
    ensure(worst_gap <= 1e-3, || format!("ascent gap to eigensolver {worst_gap:e}"))?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("gradient error {worst_grad:.1e}; ascent gap {worst_gap:.1e}"))
}

fn spectral_scaling() -> Outcome {
    let start = Instant::now();
    let mut medians = Vec::new();
    for d in [4usize, 16] {
        let mut values = Vec::new();
        for seed in 0..5u64 {
            let h = Hypergraph::random_regular(300, 3, d, seed, 1000).unwrap();
            let witness = disc_plus_heuristic(&h, 200, 0.05, seed).unwrap();
            let w = VertexSet::from_indices(300, witness.witness.iter().copied());
            let cands = default_candidates(300, seed, 50, &[w]);
            let l2 = lambda2_certificate(&h, 3.0, &cands).unwrap();
            let mu = mu_certificate(&h, 3.0, &cands, MuMode::Diag).unwrap();
            ensure(mu.value >= l2.value, || format!("d={d} seed={seed}: μ {} < λ₂ {}", mu.value, l2.value))?;
            ensure((l2.evaluate(&h).unwrap() - l2.value).abs() <= 1e-9 * l2.value.abs().max(1.0), || {
                format!("d={d} seed={seed}: certificate does not re-evaluate")
            })?;
            bound_holds_for_all(&h, 3.0, &l2, &cands)?;
            values.push(l2.value);
        }
        medians.push(median(values));
    }
    let ratio = medians[1] / medians[0];
    ensure((1.4..=2.8).contains(&ratio), || format!("growth {ratio:.3} outside [1.4, 2.8]"))?;
    let edges: Vec<Vec<usize>> = (0..6).flat_map(|a| (6..12).map(move |b| vec![a, b])).collect();
    let g = Hypergraph::new(12, 2, edges).unwrap();
    let cands = exhaustive_candidates(12).unwrap();
    let l2 = lambda2_certificate(&g, 2.0, &cands).unwrap();
    let mu = mu_certificate(&g, 2.0, &cands, MuMode::Diag).unwrap();
    ensure(l2.value.abs() < 1e-12, || format!("bipartite λ₂ certificate {}", l2.value))?;
    ensure((mu.value - 6.0).abs() < 1e-9, || format!("bipartite μ certificate {}", mu.value))?;
    bound_holds_for_all(&g, 2.0, &l2, &cands)?;
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "median λ₂ certificate d=4 {:.4}, d=16 {:.4}, growth {ratio:.3}; bipartite gap 0 vs {:.1}",
        medians[0], medians[1], mu.value
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("geometry exact cases", geometry_exact_cases),
        ("small-correlation bracket", bracket),
        ("embedding invariants", embedding_invariants),
        ("bisection oracle equivalence", oracle_bisection),
        ("random-bisection baseline", baseline),
        ("bisection advantage probe", advantage_probe),
        ("discrepancy lower-bound chain", disc_chain),
        ("identity suites", identity_suites),
        ("spectral soundness", spectral_soundness),
        ("spectral scaling probe", spectral_scaling),
    ];
    // Harness flags such as `--nocapture` are ignored; bare words filter by name.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
