//! Monte Carlo experiments over the CDMA link.
//!
//! Run `j` uses seed `base_seed + j` for its scenario draw (codes, powers)
//! and for every random stream of its link. Runs execute on the rayon pool
//! and are reduced in run order, so results do not depend on the thread
//! count.

use jointrank_core::cdma::{CdmaLink, CdmaScenario, ChannelKind};
use jointrank_core::filters::{detect_bpsk, AdaptiveFilter};
use jointrank_core::oracle::fullrank_mmse;
use jointrank_core::{ComplexVector, Error, FullRankState, JioState, KrylovLms, C64};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::curve::{to_db, Curve, Series};
use crate::error::{HarnessError, Result};

/// Sliding window of the BER estimate, in symbols.
pub const BER_WINDOW: usize = 200;

/// Step sizes tried by the rank sweep, for μ and η alike.
pub const STEP_GRID: [f64; 7] = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1];

/// Fraction of the run, at its end, averaged as the steady state.
pub const STEADY_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgorithmSpec {
    FullRank { mu: f64 },
    Jio { rank: usize, mu: f64, eta: f64 },
    Krylov { rank: usize, mu: f64, refresh: usize },
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::FullRank { .. } => "full-rank",
            AlgorithmSpec::Jio { .. } => "jio",
            AlgorithmSpec::Krylov { .. } => "krylov",
        }
    }

    pub fn build(&self, dim: usize) -> jointrank_core::Result<Box<dyn AdaptiveFilter<f64> + Send>> {
        Ok(match *self {
            AlgorithmSpec::FullRank { mu } => Box::new(FullRankState::new(dim, mu)?),
            AlgorithmSpec::Jio { rank, mu, eta } => Box::new(JioState::new(dim, rank, mu, eta)?),
            AlgorithmSpec::Krylov { rank, mu, refresh } => Box::new(KrylovLms::new(dim, rank, mu, refresh)?),
        })
    }
}

/// The three schemes at the configured step sizes, in output column order.
pub fn configured_algorithms(cfg: &ExperimentConfig) -> Vec<AlgorithmSpec> {
    vec![
        AlgorithmSpec::FullRank { mu: cfg.fullrank_mu },
        AlgorithmSpec::Jio {
            rank: cfg.rank,
            mu: cfg.jio_mu,
            eta: cfg.jio_eta,
        },
        AlgorithmSpec::Krylov {
            rank: cfg.rank,
            mu: cfg.krylov_mu,
            refresh: cfg.krylov_refresh,
        },
    ]
}

/// Frames of one static-channel run and the MMSE of its true moments.
pub struct StaticRun {
    pub received: Vec<ComplexVector>,
    pub desired: Vec<f64>,
    pub mmse: f64,
}

pub fn static_run(cfg: &ExperimentConfig, run: usize) -> Result<StaticRun> {
    let seed = cfg.run_seed(run);
    let scenario = CdmaScenario::draw(cfg.scenario, seed)?;
    let mut link = CdmaLink::new(scenario, ChannelKind::Static, seed)?;
    let (_, mmse) = fullrank_mmse(&link.true_moments())?;
    let (received, desired) = (0..cfg.num_symbols)
        .map(|_| {
            let f = link.next_frame();
            (f.received, f.desired)
        })
        .unzip();
    Ok(StaticRun {
        received,
        desired,
        mmse,
    })
}

/// Squared error per symbol of a trained filter, `None` if the filter
/// diverged.
pub fn squared_errors(spec: &AlgorithmSpec, run: &StaticRun) -> Result<Option<Vec<f64>>> {
    let dim = run.received.first().map_or(1, |r| r.len());
    let mut filter = spec.build(dim)?;
    let mut out = Vec::with_capacity(run.received.len());
    for (r, &d) in run.received.iter().zip(&run.desired) {
        match filter.step_known(r, C64::new(d, 0.0)) {
            Ok(o) if o.e.norm_sqr().is_finite() => out.push(o.e.norm_sqr()),
            Ok(_) | Err(Error::Divergence { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Some(out))
}

/// Mean over the non-diverged runs, with the number of diverged runs.
fn mean_over_runs(name: &str, runs: impl IntoIterator<Item = Option<Vec<f64>>>) -> Result<Series> {
    let mut sum: Option<Vec<f64>> = None;
    let (mut kept, mut diverged) = (0usize, 0usize);
    for run in runs {
        match run {
            Some(v) => {
                kept += 1;
                match &mut sum {
                    None => sum = Some(v),
                    Some(s) => s.iter_mut().zip(&v).for_each(|(a, b)| *a += b),
                }
            }
            None => diverged += 1,
        }
    }
    let sum = sum.ok_or_else(|| HarnessError::AllRunsDiverged {
        algorithm: name.to_string(),
    })?;
    Ok(Series {
        name: name.to_string(),
        values: sum.into_iter().map(|v| v / kept as f64).collect(),
        diverged,
    })
}

/// Linear mean squared-error curves of `specs` and the mean MMSE floor.
pub fn mse_curves(cfg: &ExperimentConfig, specs: &[AlgorithmSpec]) -> Result<(Vec<Series>, f64)> {
    let per_run: Vec<(Vec<Option<Vec<f64>>>, f64)> = (0..cfg.num_runs)
        .into_par_iter()
        .map(|j| {
            let run = static_run(cfg, j)?;
            let curves = specs.iter().map(|s| squared_errors(s, &run)).collect::<Result<Vec<_>>>()?;
            Ok((curves, run.mmse))
        })
        .collect::<Result<_>>()?;
    let floor = per_run.iter().map(|(_, j)| j).sum::<f64>() / cfg.num_runs as f64;
    let mut columns: Vec<Vec<Option<Vec<f64>>>> = vec![Vec::with_capacity(cfg.num_runs); specs.len()];
    for (curves, _) in per_run {
        for (col, c) in columns.iter_mut().zip(curves) {
            col.push(c);
        }
    }
    let series = specs
        .iter()
        .zip(columns)
        .map(|(s, col)| mean_over_runs(s.name(), col))
        .collect::<Result<_>>()?;
    Ok((series, floor))
}

/// MSE in dB versus symbol index for the configured schemes, plus the MMSE
/// floor as a constant column.
pub fn run_mse_vs_symbols(cfg: &ExperimentConfig) -> Result<Curve> {
    cfg.validate()?;
    let specs = configured_algorithms(cfg);
    let (series, floor) = mse_curves(cfg, &specs)?;
    let mut curve = Curve::new("symbol", (0..cfg.num_symbols as u64).collect());
    curve.runs = cfg.num_runs;
    for s in series {
        curve.push(Series {
            values: s.values.iter().map(|&v| to_db(v)).collect(),
            ..s
        });
    }
    curve.push(Series::new("mmse", vec![to_db(floor); cfg.num_symbols]));
    Ok(curve)
}

/// Mean of the last [`STEADY_FRACTION`] of a linear curve.
pub fn steady_state(values: &[f64]) -> f64 {
    let n = ((values.len() as f64 * STEADY_FRACTION).ceil() as usize).clamp(1, values.len().max(1));
    let tail = &values[values.len() - n..];
    tail.iter().sum::<f64>() / n as f64
}

/// Centered moving average with half-width `half`, truncated at the ends.
pub fn moving_average(values: &[f64], half: usize) -> Vec<f64> {
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// First symbol at which the smoothed linear curve is within `margin_db` of
/// its steady state.
pub fn convergence_index(values: &[f64], margin_db: f64, half: usize) -> Option<usize> {
    let target = to_db(steady_state(values)) + margin_db;
    moving_average(values, half).iter().position(|&v| to_db(v) <= target)
}

/// Half-width of the smoothing applied before locating convergence.
pub const CONVERGENCE_SMOOTHING: usize = 25;

/// Outcome of [`compare_convergence`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedComparison {
    pub jio_steady_db: f64,
    pub jio_index: Option<usize>,
    pub fullrank_mu: f64,
    pub fullrank_steady_db: f64,
    pub fullrank_index: Option<usize>,
    pub jio_diverged: usize,
    pub fullrank_diverged: usize,
}

impl SpeedComparison {
    pub fn steady_gap_db(&self) -> f64 {
        (self.jio_steady_db - self.fullrank_steady_db).abs()
    }
}

/// Runs the joint scheme at the configured step sizes and full-rank LMS at
/// every candidate μ, picks the μ whose steady-state MSE is closest to the
/// joint scheme's, and reports when each curve first comes within 1 dB of
/// its own steady state.
pub fn compare_convergence(cfg: &ExperimentConfig, fullrank_candidates: &[f64]) -> Result<SpeedComparison> {
    cfg.validate()?;
    let mut specs = vec![AlgorithmSpec::Jio {
        rank: cfg.rank,
        mu: cfg.jio_mu,
        eta: cfg.jio_eta,
    }];
    specs.extend(fullrank_candidates.iter().map(|&mu| AlgorithmSpec::FullRank { mu }));
    let (series, _) = mse_curves(cfg, &specs)?;
    let jio = &series[0];
    let jio_ss = to_db(steady_state(&jio.values));
    let (best, fr) = series[1..]
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let gap = |s: &Series| (to_db(steady_state(&s.values)) - jio_ss).abs();
            gap(a.1).total_cmp(&gap(b.1))
        })
        .ok_or_else(|| HarnessError::InvalidConfig {
            field: "fullrank_mu",
            reason: "no candidate step sizes".into(),
        })?;
    Ok(SpeedComparison {
        jio_steady_db: jio_ss,
        jio_index: convergence_index(&jio.values, 1.0, CONVERGENCE_SMOOTHING),
        fullrank_mu: fullrank_candidates[best],
        fullrank_steady_db: to_db(steady_state(&fr.values)),
        fullrank_index: convergence_index(&fr.values, 1.0, CONVERGENCE_SMOOTHING),
        jio_diverged: jio.diverged,
        fullrank_diverged: fr.diverged,
    })
}

fn steady_of(spec: &AlgorithmSpec, run: &StaticRun) -> Result<Option<f64>> {
    Ok(squared_errors(spec, run)?.map(|v| steady_state(&v)))
}

struct RankRun {
    fullrank: Vec<Option<f64>>,
    /// `[rank][mu][eta]` flattened.
    jio: Vec<Option<f64>>,
    /// `[rank][mu]` flattened.
    krylov: Vec<Option<f64>>,
    mmse: f64,
}

/// Best mean steady state over grid points where no run diverged.
fn best_point(runs: &[RankRun], pick: impl Fn(&RankRun) -> &[Option<f64>], range: std::ops::Range<usize>) -> Option<(usize, f64)> {
    range
        .filter_map(|i| {
            let mut sum = 0.0;
            for r in runs {
                sum += pick(r)[i]?;
            }
            Some((i, sum / runs.len() as f64))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Steady-state MSE in dB versus rank `1..=max_rank`, each scheme at the
/// step sizes from [`STEP_GRID`] that minimize its run-averaged steady state.
/// Grid points with any diverged run are skipped. The chosen step sizes are
/// reported as extra columns.
pub fn run_mse_vs_rank(cfg: &ExperimentConfig) -> Result<Curve> {
    cfg.validate()?;
    let ranks: Vec<usize> = (1..=cfg.max_rank).collect();
    let g = STEP_GRID.len();
    let runs: Vec<RankRun> = (0..cfg.num_runs)
        .into_par_iter()
        .map(|j| {
            let run = static_run(cfg, j)?;
            let fullrank = STEP_GRID
                .iter()
                .map(|&mu| steady_of(&AlgorithmSpec::FullRank { mu }, &run))
                .collect::<Result<_>>()?;
            let mut jio = Vec::with_capacity(ranks.len() * g * g);
            let mut krylov = Vec::with_capacity(ranks.len() * g);
            for &rank in &ranks {
                for &mu in &STEP_GRID {
                    for &eta in &STEP_GRID {
                        jio.push(steady_of(&AlgorithmSpec::Jio { rank, mu, eta }, &run)?);
                    }
                    let refresh = cfg.krylov_refresh;
                    krylov.push(steady_of(&AlgorithmSpec::Krylov { rank, mu, refresh }, &run)?);
                }
            }
            Ok(RankRun {
                fullrank,
                jio,
                krylov,
                mmse: run.mmse,
            })
        })
        .collect::<Result<_>>()?;
    let none = |name: &str| HarnessError::AllRunsDiverged {
        algorithm: name.to_string(),
    };
    let floor = runs.iter().map(|r| r.mmse).sum::<f64>() / runs.len() as f64;
    let (fr_i, fr_mse) = best_point(&runs, |r| &r.fullrank, 0..g).ok_or_else(|| none("full-rank"))?;
    let n = ranks.len();
    let (mut jio, mut jio_mu, mut jio_eta) = (Vec::new(), Vec::new(), Vec::new());
    let (mut kry, mut kry_mu) = (Vec::new(), Vec::new());
    for d in 0..n {
        let (i, v) = best_point(&runs, |r| &r.jio, d * g * g..(d + 1) * g * g).ok_or_else(|| none("jio"))?;
        let i = i - d * g * g;
        jio.push(to_db(v));
        jio_mu.push(STEP_GRID[i / g]);
        jio_eta.push(STEP_GRID[i % g]);
        let (i, v) = best_point(&runs, |r| &r.krylov, d * g..(d + 1) * g).ok_or_else(|| none("krylov"))?;
        kry.push(to_db(v));
        kry_mu.push(STEP_GRID[i - d * g]);
    }
    let mut curve = Curve::new("rank", ranks.iter().map(|&d| d as u64).collect());
    curve.runs = cfg.num_runs;
    curve.push(Series::new("full-rank", vec![to_db(fr_mse); n]));
    curve.push(Series::new("jio", jio));
    curve.push(Series::new("krylov", kry));
    curve.push(Series::new("mmse", vec![to_db(floor); n]));
    curve.push(Series::new("full-rank-mu", vec![STEP_GRID[fr_i]; n]));
    curve.push(Series::new("jio-mu", jio_mu));
    curve.push(Series::new("jio-eta", jio_eta));
    curve.push(Series::new("krylov-mu", kry_mu));
    Ok(curve)
}

/// Decision errors of one fading run, per scheme, plus the oracle MMSE
/// receiver when requested.
#[derive(Debug, Clone)]
pub struct BerRun {
    /// `None` where the scheme diverged.
    pub errors: Vec<Option<Vec<bool>>>,
    pub oracle_errors: Option<Vec<bool>>,
}

/// Trains on the known symbol for `training` symbols, then feeds back the
/// filter's own decisions. The oracle receiver is the Wiener filter of the
/// true moments at each symbol; it needs a nonsingular covariance, so skip it
/// for noiseless links.
pub fn simulate_ber(
    mut link: CdmaLink,
    specs: &[AlgorithmSpec],
    num_symbols: usize,
    training: usize,
    with_oracle: bool,
) -> Result<BerRun> {
    let dim = link.scenario().observation_dim();
    let mut filters: Vec<Option<Box<dyn AdaptiveFilter<f64> + Send>>> =
        specs.iter().map(|s| s.build(dim).map(Some)).collect::<jointrank_core::Result<_>>()?;
    let mut errors: Vec<Vec<bool>> = vec![Vec::with_capacity(num_symbols); specs.len()];
    let mut oracle_errors = Vec::with_capacity(num_symbols);
    for i in 0..num_symbols {
        let frame = link.next_frame();
        let bit = frame.desired;
        for (slot, errs) in filters.iter_mut().zip(errors.iter_mut()) {
            let Some(filter) = slot else { continue };
            let step = if i < training {
                filter.step_known(&frame.received, C64::new(bit, 0.0))
            } else {
                filter.step_with(&frame.received, &mut |x| C64::new(detect_bpsk(x), 0.0))
            };
            match step {
                Ok(o) if o.x.re.is_finite() => errs.push(detect_bpsk(o.x) != bit),
                Ok(_) | Err(Error::Divergence { .. }) => *slot = None,
                Err(e) => return Err(e.into()),
            }
        }
        if with_oracle {
            let (w, _) = fullrank_mmse(&link.true_moments())?;
            oracle_errors.push(detect_bpsk(w.dot(&frame.received)?) != bit);
        }
    }
    let errors = filters
        .iter()
        .zip(errors)
        .map(|(f, e)| f.as_ref().map(|_| e))
        .collect();
    Ok(BerRun {
        errors,
        oracle_errors: with_oracle.then_some(oracle_errors),
    })
}

/// Trailing-window error rate; early symbols use the shorter window
/// available.
pub fn sliding_rate(rates: &[f64], window: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(rates.len());
    let mut acc = 0.0;
    for i in 0..rates.len() {
        acc += rates[i];
        if i >= window {
            acc -= rates[i - window];
        }
        out.push(acc / (i + 1).min(window) as f64);
    }
    out
}

fn as_rates(errs: Vec<bool>) -> Vec<f64> {
    errs.into_iter().map(|e| if e { 1.0 } else { 0.0 }).collect()
}

/// BER versus symbol index in Clarke fading, averaged over runs and
/// smoothed by a trailing [`BER_WINDOW`]-symbol window.
pub fn run_ber_vs_symbols(cfg: &ExperimentConfig) -> Result<Curve> {
    cfg.validate()?;
    if cfg.training_symbols >= cfg.num_symbols {
        return Err(HarnessError::InvalidConfig {
            field: "training_symbols",
            reason: format!(
                "the BER experiment needs decision-directed symbols after {} training symbols, got num_symbols = {}",
                cfg.training_symbols, cfg.num_symbols
            ),
        });
    }
    let specs = configured_algorithms(cfg);
    let kind = ChannelKind::Clarke {
        normalized_doppler: cfg.normalized_doppler,
    };
    let runs: Vec<BerRun> = (0..cfg.num_runs)
        .into_par_iter()
        .map(|j| {
            let seed = cfg.run_seed(j);
            let link = CdmaLink::new(CdmaScenario::draw(cfg.scenario, seed)?, kind, seed)?;
            simulate_ber(link, &specs, cfg.num_symbols, cfg.training_symbols, true)
        })
        .collect::<Result<_>>()?;
    let mut curve = Curve::new("symbol", (0..cfg.num_symbols as u64).collect());
    curve.runs = cfg.num_runs;
    let mut columns: Vec<Vec<Option<Vec<f64>>>> = vec![Vec::new(); specs.len()];
    let mut oracle = Vec::new();
    for run in runs {
        for (col, e) in columns.iter_mut().zip(run.errors) {
            col.push(e.map(as_rates));
        }
        oracle.push(run.oracle_errors.map(as_rates));
    }
    let named = specs.iter().map(|s| s.name()).zip(columns).chain([("mmse", oracle)]);
    for (name, col) in named {
        let mean = mean_over_runs(name, col)?;
        curve.push(Series {
            values: sliding_rate(&mean.values, BER_WINDOW),
            ..mean
        });
    }
    Ok(curve)
}
