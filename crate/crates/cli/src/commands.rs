use std::fs;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use hbisect_core::combinatorics::{big_f64, stream_rng};
use hbisect_core::cut::random_bisection_expectation;
use hbisect_core::disc::{
    self, advantage_exact, boundary, boundary_by_splits, disc_direct, disc_exact, disc_of, disc_plus_heuristic,
    exact, large_degree_reduction, oracle_bw, poly_identity_check, shadow_decomposition_check, split_pair, Exact,
    BETA_ENUMERATION_LIMIT, POLY_ENUMERATION_LIMIT,
};
use hbisect_core::geomprob::{mu_estimate, mu_exact_r2};
use hbisect_core::spectral::{
    ascent_from_starts, default_candidates, exhaustive_candidates, lambda2_certificate, disc_bound_check, mu_certificate,
    EXHAUSTIVE_CANDIDATE_LIMIT,
};
use hbisect_core::{bisect, bisect_mixed, io, AnyHypergraph, CertKind, Hypergraph, VectorTuple, VertexSet};

use crate::args::{
    BisectArgs, CheckArgs, DiscArgs, GenArgs, Kind, MuArgs, OracleArgs, OracleKind, Source, SpectralArgs, Suite,
};
use crate::config::{GenSpec, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::Emitter;

/// Candidate subsets are enumerated outright up to this many vertices.
const AUTO_EXHAUSTIVE_N: usize = 12;

pub struct Ctx<'a, 'b> {
    pub emitter: &'a mut Emitter<'b>,
    pub timing: bool,
}

impl Ctx<'_, '_> {
    fn emit<T: Serialize>(&mut self, cfg: &RunConfig, result: &T, start: Instant) -> CliResult<()> {
        let ms = self.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
        self.emitter.emit(cfg, result, ms)
    }
}

fn load(source: &Source, cfg: &mut RunConfig) -> CliResult<AnyHypergraph> {
    match (&source.input, &source.generator) {
        (Some(path), _) => {
            cfg.input = Some(path.display().to_string());
            Ok(io::read_any(path)?)
        }
        (None, Some(g)) => {
            cfg.generator = Some(g.to_string());
            Ok(AnyHypergraph::Uniform(g.generate()?))
        }
        (None, None) => Err(CliError::Usage("give --input or --gen".into())),
    }
}

fn load_uniform(source: &Source, cfg: &mut RunConfig) -> CliResult<Hypergraph> {
    match load(source, cfg)? {
        AnyHypergraph::Uniform(h) => Ok(h),
        AnyHypergraph::Mixed(_) => Err(CliError::Usage(format!(
            "`{}` needs an r-uniform hypergraph",
            cfg.subcommand
        ))),
    }
}

#[derive(Serialize)]
struct GenOut {
    output: String,
    n: usize,
    r: usize,
    edges: u64,
    max_degree: u64,
}

pub fn gen(ctx: &mut Ctx, a: &GenArgs, cfg: RunConfig) -> CliResult<()> {
    let start = Instant::now();
    let spec = if a.model.regular {
        let d = a.d.ok_or_else(|| CliError::Usage("--regular needs -d".into()))?;
        GenSpec::Regular { n: a.n, r: a.r, d, seed: a.seed }
    } else {
        let p = a.p.ok_or_else(|| CliError::Usage("--binomial needs -p".into()))?;
        GenSpec::Binomial { n: a.n, r: a.r, p, seed: a.seed }
    };
    let h = spec.generate()?;
    let Some(path) = &a.output else {
        print!("{}", io::to_text(&h));
        return Ok(());
    };
    io::write_hypergraph(&h, path)?;
    let cfg = RunConfig {
        generator: Some(spec.to_string()),
        seed: Some(a.seed),
        ..cfg
    };
    let out = GenOut {
        output: path.display().to_string(),
        n: h.n(),
        r: h.r(),
        edges: h.edge_count(),
        max_degree: h.max_degree(),
    };
    ctx.emit(&cfg, &out, start)
}

#[derive(Serialize)]
struct BisectOut {
    n: usize,
    r: usize,
    edges: u64,
    max_degree: u64,
    x: Vec<usize>,
    y: Vec<usize>,
    cross: u64,
    e_x: u64,
    e_y: u64,
    objective: i64,
    /// Exact mean cut of a uniformly random bisection.
    baseline_expectation: Exact,
    /// `e(H)(1 − 2^{1−r})`, or its per-edge sum for mixed inputs.
    baseline_asymptote: f64,
    /// `baseline_asymptote − cross`.
    s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_exact: Option<String>,
    best_rounding_objective: i64,
    best_rounding_trial: u64,
    best_rounding_cross: u64,
}

pub fn bisect_cmd(ctx: &mut Ctx, a: &BisectArgs, mut cfg: RunConfig) -> CliResult<()> {
    let start = Instant::now();
    cfg.seed = Some(a.seed);
    cfg.trials = Some(a.trials as u64);
    cfg.alpha = Some(a.alpha);
    cfg.mode = Some(format!("{:?}", a.mode).to_lowercase());
    if a.mixed {
        cfg = cfg.flag("mixed", true);
    }
    let graph = load(&a.source, &mut cfg)?;
    let (rep, store, r, s_exact) = match &graph {
        AnyHypergraph::Uniform(h) => {
            let rep = bisect(h, a.trials, a.alpha, a.seed, a.mode)?;
            let s = advantage_exact(h, rep.result.cross).to_string();
            (rep, h.store(), h.r(), Some(s))
        }
        AnyHypergraph::Mixed(h) if a.mixed => (bisect_mixed(h, a.trials, a.alpha, a.seed, a.mode)?, h.store(), h.max_r(), None),
        AnyHypergraph::Mixed(_) => return Err(CliError::Usage("input has mixed edge sizes; pass --mixed".into())),
    };
    let baseline = random_bisection_expectation(store);
    let out = BisectOut {
        n: store.n(),
        r,
        edges: store.edge_count(),
        max_degree: store.max_degree(),
        x: rep.result.x.clone(),
        y: rep.result.y.clone(),
        cross: rep.result.cross,
        e_x: rep.result.e_x,
        e_y: rep.result.e_y,
        objective: rep.result.objective,
        baseline_expectation: Exact {
            exact: baseline.to_string(),
            value: format!("{}", big_f64(&baseline)),
        },
        baseline_asymptote: rep.baseline_asymptote,
        s: rep.baseline_asymptote - rep.result.cross as f64,
        s_exact,
        best_rounding_objective: rep.best_rounding.objective,
        best_rounding_trial: rep.best_rounding.trial,
        best_rounding_cross: rep.best_rounding.cross,
    };
    ctx.emit(&cfg, &out, start)
}

#[derive(Serialize)]
struct WithSize<T: Serialize> {
    n: usize,
    r: usize,
    edges: u64,
    #[serde(flatten)]
    report: T,
}

fn sized<T: Serialize>(h: &Hypergraph, report: T) -> WithSize<T> {
    WithSize {
        n: h.n(),
        r: h.r(),
        edges: h.edge_count(),
        report,
    }
}

pub fn disc_cmd(ctx: &mut Ctx, a: &DiscArgs, mut cfg: RunConfig) -> CliResult<()> {
    let start = Instant::now();
    let h = load_uniform(&a.source, &mut cfg)?;
    if a.exhaustive {
        cfg = cfg.flag("exhaustive", true);
        return ctx.emit(&cfg, &sized(&h, disc_exact(&h)?), start);
    }
    cfg.seed = Some(a.seed);
    cfg.trials = Some(a.trials as u64);
    cfg.alpha = Some(a.alpha);
    if a.reduction {
        cfg = cfg.flag("reduction", true).flag("c", a.c);
        let rep = large_degree_reduction(&h, a.c, a.seed, a.trials, a.alpha)?;
        return ctx.emit(&cfg, &sized(&h, rep), start);
    }
    let rep = disc_plus_heuristic(&h, a.trials, a.alpha, a.seed)?;
    ctx.emit(&cfg, &sized(&h, rep), start)
}

#[derive(Serialize)]
struct MuOut {
    r: usize,
    estimate: f64,
    std_error: f64,
    trials: u64,
    /// `μ̂ − 2^{-r}`.
    excess: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
    reduced: Vec<Vec<f64>>,
}

fn read_gram(path: &std::path::Path) -> CliResult<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("{}:{}: bad number {t:?}", path.display(), i + 1)))
                })
                .collect()
        })
        .collect()
}

pub fn mu_cmd(ctx: &mut Ctx, a: &MuArgs, mut cfg: RunConfig) -> CliResult<()> {
    let start = Instant::now();
    cfg.seed = Some(a.seed);
    cfg.trials = Some(a.trials);
    let (vs, exact) = match (&a.tuple.gram, a.tuple.angle) {
        (Some(path), _) => {
            cfg.input = Some(path.display().to_string());
            (VectorTuple::from_gram(&read_gram(path)?)?, None)
        }
        (None, Some(theta)) => {
            cfg = cfg.flag("angle", theta);
            if !(0.0..=std::f64::consts::PI).contains(&theta) {
                return Err(CliError::Usage(format!("angle {theta} not in [0, pi]")));
            }
            let vs = VectorTuple::new(vec![vec![1.0, 0.0], vec![theta.cos(), theta.sin()]])?;
            (vs, Some(mu_exact_r2(theta)))
        }
        (None, None) => return Err(CliError::Usage("give --gram or --angle".into())),
    };
    let est = mu_estimate(&vs, a.trials, a.seed)?;
    let r = vs.r();
    let out = MuOut {
        r,
        estimate: est.estimate,
        std_error: est.std_error,
        trials: est.trials,
        excess: est.estimate - 0.5f64.powi(r as i32),
        exact,
        reduced: vs.reduce_to_r_dims().vectors().to_vec(),
    };
    ctx.emit(&cfg, &out, start)
}

#[derive(Serialize)]
struct SpectralOut {
    n: usize,
    r: usize,
    kind: CertKind,
    p: f64,
    value: f64,
    origin: hbisect_core::spectral::Origin,
    /// Non-zero entries as `index:value`, one list per slot.
    witness: Vec<Vec<String>>,
    norm_error: f64,
    candidates: usize,
    /// Support of the best characteristic candidate.
    bound_support: Vec<usize>,
    disc_of_support: Exact,
    /// `(r·disc(U) − err(U)) / n^{r/p}`; never above `value`.
    disc_bound: f64,
    bound_holds: bool,
}

pub fn spectral_cmd(ctx: &mut Ctx, a: &SpectralArgs, mut cfg: RunConfig) -> CliResult<()> {
    let start = Instant::now();
    let h = load_uniform(&a.source, &mut cfg)?;
    let n = h.n();
    let p = a.p.unwrap_or(h.r() as f64);
    cfg.seed = Some(a.seed);
    cfg.p = Some(p);
    cfg.mode = Some(format!("{:?}", a.kind).to_lowercase());
    cfg = cfg.flag("ascent_steps", a.ascent_steps).flag("starts", a.starts);
    if a.kind == Kind::Mu {
        cfg = cfg.flag("mu_mode", format!("{:?}", a.mode).to_lowercase());
    }
    let candidates = if a.exhaustive || n <= AUTO_EXHAUSTIVE_N {
        if a.exhaustive {
            cfg = cfg.flag("exhaustive", true);
        }
        if n > EXHAUSTIVE_CANDIDATE_LIMIT {
            return Err(hbisect_core::Error::TooLarge {
                n,
                limit: EXHAUSTIVE_CANDIDATE_LIMIT,
            }
            .into());
        }
        exhaustive_candidates(n)?
    } else {
        let mut extra = Vec::new();
        if h.edge_count() > 0 {
            let rep = disc_plus_heuristic(&h, a.starts.max(1), 0.05, a.seed)?;
            extra.push(VertexSet::from_indices(n, rep.witness));
        }
        default_candidates(n, a.seed, a.starts, &extra)
    };
    let base = match a.kind {
        Kind::Lambda2 => lambda2_certificate(&h, p, &candidates)?,
        Kind::Mu => mu_certificate(&h, p, &candidates, a.mode)?,
    };
    let support = VertexSet::from_indices(n, base.support.clone().unwrap_or_default());
    let mut cert = base.clone();
    if a.ascent_steps > 0 {
        let seed_vec = (base.vectors.len() == 1).then(|| base.vectors[0].as_slice());
        let mut asc = ascent_from_starts(&h, p, seed_vec, a.starts, a.ascent_steps, a.seed)?;
        if asc.value > cert.value {
            asc.kind = base.kind;
            cert = asc;
        }
    }
    let bound = disc_bound_check(&h, p, cert.value, &support);
    let scale = (n as f64).powf(h.r() as f64 / p);
    let witness = cert
        .vectors
        .iter()
        .map(|x| {
            x.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| format!("{i}:{v}"))
                .collect()
        })
        .collect();
    let out = SpectralOut {
        n,
        r: h.r(),
        kind: cert.kind,
        p,
        value: cert.value,
        origin: cert.origin,
        witness,
        norm_error: cert.norm_error(),
        candidates: candidates.len(),
        bound_support: support.indices(),
        disc_of_support: exact(&disc_of(&h, &support)),
        disc_bound: bound.rhs / scale,
        bound_holds: bound.holds,
    };
    ctx.emit(&cfg, &out, start)
}

pub fn oracle_cmd(ctx: &mut Ctx, a: &OracleArgs, mut cfg: RunConfig) -> CliResult<()> {
    let start = Instant::now();
    let h = load_uniform(&a.source, &mut cfg)?;
    match a.which {
        OracleKind::Bw => {
            cfg.mode = Some("bw".into());
            ctx.emit(&cfg, &sized(&h, oracle_bw(&h)?), start)
        }
        OracleKind::Disc => {
            cfg.mode = Some("disc".into());
            ctx.emit(&cfg, &sized(&h, disc_exact(&h)?), start)
        }
    }
}

#[derive(Serialize)]
struct SuiteOut {
    suite: &'static str,
    cases: usize,
    passed: usize,
    ok: bool,
    failures: Vec<String>,
}

fn random_subset(rng: &mut impl Rng, n: usize, pool: &[usize], q: f64) -> VertexSet {
    VertexSet::from_indices(n, pool.iter().copied().filter(|_| rng.random_bool(q)))
}

fn run_suite(h: &Hypergraph, suite: Suite, cases: usize, seed: u64) -> CliResult<SuiteOut> {
    let n = h.n();
    let r = h.r();
    let all: Vec<usize> = (0..n).collect();
    let mut rng = stream_rng(seed, 1 + suite as u64);
    let mut failures = Vec::new();
    let mut total = 0;
    for case in 0..cases {
        let u = random_subset(&mut rng, n, &all, 0.5);
        let mut fail = |what: String| failures.push(format!("case {case}: {what}"));
        match suite {
            Suite::Split => {
                total += 1;
                let parts = split_pair(h, &u, &u.complement())?;
                let d = disc_of(h, &u);
                if d != disc_direct(h, &u) {
                    fail("disc paths disagree".into());
                } else if parts.iter().sum::<hbisect_core::Rational>() != 0.into() {
                    fail("split terms do not sum to 0".into());
                } else if parts[r] != d {
                    fail("disc(U) differs from disc_{r,0}(U, U^c)".into());
                } else if boundary(h, &u) != boundary_by_splits(h, &u) {
                    fail("boundary counts disagree".into());
                }
            }
            Suite::Shadow => {
                for t in 2..=r {
                    total += 1;
                    let c = shadow_decomposition_check(h, &u, t)?;
                    if !c.holds {
                        fail(format!("t = {t}"));
                    }
                }
            }
            Suite::Poly => {
                total += 1;
                let mut xs = u.indices();
                xs.truncate(POLY_ENUMERATION_LIMIT.min(n / 2));
                let x = VertexSet::from_indices(n, xs);
                let rest = x.complement().indices();
                let y = random_subset(&mut rng, n, &rest, 0.5);
                if !poly_identity_check(h, &x, &y)?.all_equal {
                    fail(format!("|X| = {}, |Y| = {}", x.len(), y.len()));
                }
            }
            Suite::Beta => {
                total += 1;
                // Keep |X^c| within the enumeration limit.
                let forced = n.saturating_sub(BETA_ENUMERATION_LIMIT);
                let x = u.union(&VertexSet::from_indices(n, 0..forced));
                let checks = disc::beta_identity_check(h, &x)?;
                if let Some(c) = checks.iter().find(|c| !c.holds) {
                    fail(format!("i = {}", c.i));
                }
            }
        }
    }
    Ok(SuiteOut {
        suite: suite.name(),
        cases: total,
        passed: total - failures.len(),
        ok: failures.is_empty(),
        failures,
    })
}

pub fn check_cmd(ctx: &mut Ctx, a: &CheckArgs, mut cfg: RunConfig) -> CliResult<()> {
    let suites: Vec<Suite> = if a.all {
        Suite::ALL.to_vec()
    } else if a.suite.is_empty() {
        return Err(CliError::Usage("give --all or --suite".into()));
    } else {
        let mut s = a.suite.clone();
        s.sort();
        s.dedup();
        s
    };
    let spec = GenSpec::Binomial {
        n: a.n,
        r: a.r,
        p: a.p,
        seed: a.seed,
    };
    cfg.generator = Some(spec.to_string());
    cfg.seed = Some(a.seed);
    cfg = cfg.flag("cases", a.cases);
    let h = spec.generate()?;
    let mut failed = Vec::new();
    for suite in suites {
        let start = Instant::now();
        let out = run_suite(&h, suite, a.cases, a.seed)?;
        if !out.ok {
            failed.push(out.suite.to_string());
        }
        ctx.emit(&cfg, &out, start)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(failed))
    }
}
