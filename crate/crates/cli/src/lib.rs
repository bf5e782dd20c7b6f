//! Driver for the `hbisect` binary: argument parsing, provenance and
//! line-structured reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::{BenchArgs, Cli, Command};
use commands::Ctx;
use config::RunConfig;
use error::{CliError, CliResult, EXIT_USAGE};
use output::Emitter;
use sweep::{bench_sweep, SweepConfig};

pub use config::{Format, GenSpec};
pub use sweep::{BenchRecord, SweepSummary, SweepTable};

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Bisect(_) => "bisect",
        Command::Disc(_) => "disc",
        Command::Mu(_) => "mu",
        Command::Spectral(_) => "spectral",
        Command::Oracle(_) => "oracle",
        Command::Check(_) => "check",
        Command::Bench(_) => "bench",
    }
}

fn bench_cmd(ctx: &mut Ctx, a: &BenchArgs, mut cfg: RunConfig) -> CliResult<()> {
    let start = Instant::now();
    let sweep = SweepConfig {
        n: a.n.0.clone(),
        r: a.r.0.clone(),
        d: a.d.0.clone(),
        seeds: a.seeds,
        base_seed: a.seed,
        trials: a.trials,
        alpha: a.alpha,
        mode: a.mode,
        disc_trials: a.disc_trials,
        spectral: a.spectral,
        timing: ctx.timing,
    };
    cfg.seed = Some(a.seed);
    cfg.trials = Some(a.trials as u64);
    cfg.alpha = Some(a.alpha);
    cfg.mode = Some(format!("{:?}", a.mode).to_lowercase());
    let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    cfg = cfg
        .flag("n", list(&a.n.0))
        .flag("r", list(&a.r.0))
        .flag("d", list(&a.d.0))
        .flag("seeds", a.seeds)
        .flag("disc_trials", a.disc_trials)
        .flag("spectral", a.spectral);
    let table = bench_sweep(&sweep);
    for rec in &table.records {
        ctx.emitter.emit(&cfg, rec, None)?;
    }
    for s in &table.summary {
        ctx.emitter.emit(&cfg, s, None)?;
    }
    if ctx.timing {
        eprintln!("bench: {} records in {:.1} ms", table.records.len(), start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(())
}

/// Dispatches a parsed command line, writing reports to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("thread count must be positive".into()));
        }
        // A pool may already exist when called repeatedly in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let mut emitter = Emitter::new(cli.format, out);
    let mut ctx = Ctx {
        emitter: &mut emitter,
        timing: !cli.no_timing,
    };
    let cfg = RunConfig::new(subcommand_name(&cli.command), cli.format);
    match &cli.command {
        Command::Gen(a) => commands::gen(&mut ctx, a, cfg),
        Command::Bisect(a) => commands::bisect_cmd(&mut ctx, a, cfg),
        Command::Disc(a) => commands::disc_cmd(&mut ctx, a, cfg),
        Command::Mu(a) => commands::mu_cmd(&mut ctx, a, cfg),
        Command::Spectral(a) => commands::spectral_cmd(&mut ctx, a, cfg),
        Command::Oracle(a) => commands::oracle_cmd(&mut ctx, a, cfg),
        Command::Check(a) => commands::check_cmd(&mut ctx, a, cfg),
        Command::Bench(a) => bench_cmd(&mut ctx, a, cfg),
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("hbisect: {e}");
            e.exit_code()
        }
    }
}
