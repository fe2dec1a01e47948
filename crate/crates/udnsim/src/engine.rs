//! Monte Carlo driver: seeded, reproducible sweeps over deployment density,
//! evaluating every access scheme on identical topology and channel draws.
//!
//! Reproducibility contract: trial (density_index, trial_index) always runs
//! on its own counter-derived generator substream, trials are merged in
//! trial-index order, and aggregation canonicalizes summation order, so
//! results are byte-identical for any worker count.

use crate::error::{Error, Result};
use crate::geometry::SectorGeometry;
use crate::links::{build_link_state, LinkState};
use crate::radio::RadioConfig;
use crate::schemes::{cell_sum_rate, Scheme, SchemeConfig};
use crate::topology::{build_topology, CellLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

/// Everything one sweep needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub densities_per_km2: Vec<f64>,
    pub trials: u64,
    pub base_seed: u64,
    pub schemes: Vec<SchemeConfig>,
    pub radio: RadioConfig,
    pub geometry: SectorGeometry,
    pub layout: CellLayout,
    /// Count own-cell uplink users as interference at full-duplex downlink
    /// victims.
    pub own_cell_uu_cci: bool,
    /// Worker threads for the trial loop; 0 picks the machine default.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            densities_per_km2: vec![10.0, 25.0, 50.0, 100.0, 200.0, 400.0, 700.0, 1000.0],
            trials: 1000,
            base_seed: 0,
            schemes: Scheme::ALL
                .iter()
                .map(|&s| SchemeConfig::defaults_for(s))
                .collect(),
            radio: RadioConfig::default(),
            geometry: SectorGeometry::default(),
            layout: CellLayout::default(),
            own_cell_uu_cci: true,
            workers: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        // trial indices share the substream word with the density index
        if self.trials >= (1 << 32) {
            return Err(Error::InvalidParameter(format!(
                "trials must fit in 32 bits, got {}",
                self.trials
            )));
        }
        if self.densities_per_km2.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one density is required".into(),
            ));
        }
        for &d in &self.densities_per_km2 {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "densities must be finite and >= 0, got {d}"
                )));
            }
        }
        for pair in self.densities_per_km2.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidParameter(format!(
                    "densities must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one scheme is required".into(),
            ));
        }
        for (i, s) in self.schemes.iter().enumerate() {
            s.validate()?;
            if self.schemes[..i].iter().any(|t| t.scheme == s.scheme) {
                return Err(Error::InvalidParameter(format!(
                    "scheme {} listed twice",
                    s.scheme
                )));
            }
        }
        self.radio.validate()?;
        self.geometry.validate()?;
        self.layout.validate()
    }
}

/// One aggregated (density, scheme) curve point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub density_per_km2: f64,
    pub scheme: Scheme,
    pub trials: u64,
    pub mean_sum_rate_bps: f64,
    pub std_dev_bps: f64,
    pub ci95_low_bps: f64,
    pub ci95_high_bps: f64,
}

/// Full sweep output: one row per (density, scheme), densities ascending,
/// schemes in configured order within each density.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Schemes in first-appearance order, for per-series consumers.
    pub fn schemes(&self) -> Vec<Scheme> {
        let mut out = Vec::new();
        for row in &self.rows {
            if !out.contains(&row.scheme) {
                out.push(row.scheme);
            }
        }
        out
    }
}

/// Sample statistics with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std_dev: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

/// Mean, unbiased standard deviation, and mean +/- 1.96 std/sqrt(n).
/// Sums run over value-sorted copies so any permutation of the input
/// produces bit-identical output.
pub fn aggregate(samples: &[f64]) -> Result<Stats> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot aggregate an empty sample set".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let std_dev = if sorted.len() < 2 {
        0.0
    } else {
        let ss: f64 = sorted.iter().map(|x| (x - mean) * (x - mean)).sum();
        (ss / (n - 1.0)).sqrt()
    };
    let half_width = 1.96 * std_dev / n.sqrt();
    Ok(Stats {
        mean,
        std_dev,
        ci95_low: mean - half_width,
        ci95_high: mean + half_width,
    })
}

/// Generator substream for one (density, trial) cell of the sweep.
fn trial_rng(base_seed: u64, density_index: usize, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(((density_index as u64) << 32) | trial_index);
    rng
}

/// Sector sum rate of every configured scheme over one prepared link state.
pub fn evaluate_link_state(
    links: &LinkState,
    schemes: &[SchemeConfig],
    radio: &RadioConfig,
    own_cell_uu_cci: bool,
) -> Result<Vec<f64>> {
    let mut totals = Vec::with_capacity(schemes.len());
    for cfg in schemes {
        let mut total = 0.0;
        for cell in 0..links.cells.len() {
            total += cell_sum_rate(links, cell, cfg, radio, own_cell_uu_cci)?.sum_bps;
        }
        totals.push(total);
    }
    Ok(totals)
}

/// One Monte Carlo trial: draw a topology and its links from the trial's
/// substream, then score every scheme on that same draw.
pub fn run_trial(cfg: &SweepConfig, density_index: usize, trial_index: u64) -> Result<Vec<f64>> {
    let density = *cfg.densities_per_km2.get(density_index).ok_or_else(|| {
        Error::InvalidParameter(format!("density index {density_index} out of range"))
    })?;
    let mut rng = trial_rng(cfg.base_seed, density_index, trial_index);
    let topology = build_topology(&cfg.geometry, density, &cfg.layout, &mut rng)?;
    let links = build_link_state(&topology, &cfg.radio, &mut rng)?;
    evaluate_link_state(&links, &cfg.schemes, &cfg.radio, cfg.own_cell_uu_cci)
}

fn run_density(cfg: &SweepConfig, density_index: usize) -> Result<Vec<SweepRow>> {
    let per_trial: Vec<Result<Vec<f64>>> = (0..cfg.trials as usize)
        .into_par_iter()
        .map(|t| run_trial(cfg, density_index, t as u64))
        .collect();
    let per_trial: Vec<Vec<f64>> = per_trial.into_iter().collect::<Result<_>>()?;

    let density = cfg.densities_per_km2[density_index];
    let mut rows = Vec::with_capacity(cfg.schemes.len());
    for (s, scheme_cfg) in cfg.schemes.iter().enumerate() {
        let samples: Vec<f64> = per_trial.iter().map(|v| v[s]).collect();
        let stats = aggregate(&samples)?;
        rows.push(SweepRow {
            density_per_km2: density,
            scheme: scheme_cfg.scheme,
            trials: cfg.trials,
            mean_sum_rate_bps: stats.mean,
            std_dev_bps: stats.std_dev,
            ci95_low_bps: stats.ci95_low,
            ci95_high_bps: stats.ci95_high,
        });
    }
    Ok(rows)
}

/// Runs the full density sweep. Densities execute in order; trials within a
/// density fan out across the worker pool.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let run_all = || -> Result<Vec<SweepRow>> {
        let mut rows = Vec::with_capacity(cfg.densities_per_km2.len() * cfg.schemes.len());
        for (i, &density) in cfg.densities_per_km2.iter().enumerate() {
            let started = Instant::now();
            rows.extend(run_density(cfg, i)?);
            log::info!(
                "density {density}/km2 done: {} trials in {:.1?}",
                cfg.trials,
                started.elapsed()
            );
        }
        Ok(rows)
    };
    let rows = if cfg.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot build worker pool: {e}")))?;
        pool.install(run_all)?
    } else {
        run_all()?
    };
    Ok(SweepResult { rows })
}
