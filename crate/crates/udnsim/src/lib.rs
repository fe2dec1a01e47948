//! Monte Carlo system simulator for ultra-dense mmWave small-cell networks.
//!
//! The library sweeps small-cell base station density over a sector of a
//! macro cell and reports the average cell sum rate achieved by three
//! access schemes: half-duplex OMA, half-duplex power-domain NOMA, and
//! full-duplex NOMA with residual self-interference. Every trial samples a
//! Poisson topology, draws blockage and multipath per link, runs beamspace
//! beam selection, and scores all schemes on the same link state so the
//! comparison is paired.
//!
//! ```
//! use udnsim::engine::{run_sweep, SweepConfig};
//!
//! let mut cfg = SweepConfig::default();
//! cfg.densities_per_km2 = vec![25.0, 100.0];
//! cfg.trials = 8;
//! let result = run_sweep(&cfg).unwrap();
//! assert_eq!(result.rows.len(), 2 * cfg.schemes.len());
//! assert!(result.rows.iter().all(|r| r.mean_sum_rate_bps.is_finite()));
//! ```

pub mod channel;
pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod links;
pub mod output;
pub mod radio;
pub mod schemes;
pub mod topology;

pub use error::{Error, Result};
