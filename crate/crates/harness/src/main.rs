use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jointrank_core::{ComplexVector, FullRankState, JioState, C64};
use jointrank_harness::complexity::{
    complexity_count, instrumented_fullrank_step, instrumented_jio_step, OpCount, Scheme,
};
use jointrank_harness::csv::{emit_csv, write_csv};
use jointrank_harness::experiments::{run_ber_vs_symbols, run_mse_vs_rank, run_mse_vs_symbols};
use jointrank_harness::{Curve, ExperimentConfig, HarnessError};

#[derive(Parser)]
#[command(name = "jointrank", version, about = "Reduced-rank CDMA receiver experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// MSE versus received symbols on static multipath channels.
    MseTime(Common),
    /// Steady-state MSE versus rank with grid-searched step sizes.
    MseRank(Common),
    /// BER versus received symbols in Clarke fading with decision feedback.
    Ber(Common),
    /// Per-symbol operation counts, closed form against instrumented steps.
    Complexity {
        #[command(flatten)]
        common: Common,
        /// Observation dimensions to tabulate.
        #[arg(long = "dim", default_values_t = [8usize, 16, 32, 64])]
        dims: Vec<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// Config file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; run j uses seed + j.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    /// CSV output path (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Step size override, `full-rank=0.03`, `jio=0.05` or `krylov=0.05`.
    #[arg(long, value_name = "ALG=VALUE")]
    mu: Vec<String>,
    /// Projection step size of the joint scheme.
    #[arg(long)]
    eta: Option<f64>,
    /// Rank D of the reduced-rank schemes.
    #[arg(long)]
    rank: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.base_seed = s;
        }
        if let Some(r) = self.runs {
            cfg.num_runs = r;
        }
        if let Some(o) = &self.out {
            cfg.output = Some(o.clone());
        }
        for spec in &self.mu {
            let (alg, value) = spec.split_once('=').ok_or_else(|| HarnessError::InvalidValue {
                key: "--mu".into(),
                value: spec.clone(),
                reason: "expected ALG=VALUE".into(),
            })?;
            let key = match alg.trim() {
                "full-rank" | "fullrank" => "fullrank_mu",
                "jio" => "jio_mu",
                "krylov" => "krylov_mu",
                other => {
                    return Err(HarnessError::InvalidValue {
                        key: "--mu".into(),
                        value: spec.clone(),
                        reason: format!("unknown algorithm `{other}`"),
                    })
                }
            };
            cfg.set(key, value.trim())?;
        }
        if let Some(e) = self.eta {
            cfg.jio_eta = e;
        }
        if let Some(d) = self.rank {
            cfg.rank = d;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn output(curve: &Curve, cfg: &ExperimentConfig) -> Result<(), HarnessError> {
    for s in &curve.series {
        if s.diverged > 0 {
            eprintln!("warning: {} of {} runs of {} diverged and were dropped", s.diverged, curve.runs, s.name);
        }
    }
    match &cfg.output {
        Some(path) => emit_csv(curve, path),
        None => write_csv(curve, std::io::stdout().lock()).map_err(|source| HarnessError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn probe(m: usize) -> ComplexVector {
    ComplexVector::from_fn(m, |i| C64::new(1.0 / (i + 1) as f64, 0.5))
}

fn complexity_table(dims: &[usize], rank: usize) -> Result<(), HarnessError> {
    let mut out = std::io::stdout().lock();
    let line = |scheme: &str, m: usize, d: usize, f: OpCount, i: Option<OpCount>| {
        let (ia, im) = i.map_or(("-".to_string(), "-".to_string()), |c| {
            (c.additions.to_string(), c.multiplications.to_string())
        });
        format!(
            "{scheme:<10} {m:>4} {d:>3} {:>10} {:>10} {ia:>10} {im:>10}",
            f.additions, f.multiplications
        )
    };
    let io = |source| HarnessError::Io {
        path: "<stdout>".into(),
        source,
    };
    writeln!(out, "{:<10} {:>4} {:>3} {:>10} {:>10} {:>10} {:>10}", "scheme", "M", "D", "adds", "mults", "inst.adds", "inst.mults").map_err(io)?;
    for &m in dims {
        let d = rank.min(m);
        let r = probe(m);
        let fr = instrumented_fullrank_step(&FullRankState::new(m, 0.01)?, &r, C64::new(1.0, 0.0))?.ops;
        let jio = instrumented_jio_step(&JioState::new(m, d, 0.01, 0.01)?, &r, C64::new(1.0, 0.0))?.ops;
        let rows = [
            line("Full-rank", m, 1, complexity_count(Scheme::FullRank, m as u64, 1), Some(fr)),
            line("Proposed", m, d, complexity_count(Scheme::Proposed, m as u64, d as u64), Some(jio)),
            line("MWF", m, d, complexity_count(Scheme::Mwf, m as u64, d as u64), None),
        ];
        for row in rows {
            writeln!(out, "{row}").map_err(io)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::MseTime(c) => {
            let cfg = c.load()?;
            output(&run_mse_vs_symbols(&cfg)?, &cfg)
        }
        Command::MseRank(c) => {
            let cfg = c.load()?;
            output(&run_mse_vs_rank(&cfg)?, &cfg)
        }
        Command::Ber(c) => {
            let cfg = c.load()?;
            output(&run_ber_vs_symbols(&cfg)?, &cfg)
        }
        Command::Complexity { common, dims } => {
            let cfg = common.load()?;
            complexity_table(&dims, cfg.rank)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
