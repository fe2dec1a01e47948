//! Link-budget primitives: dBm/watt conversion and the dual-slope
//! log-distance path-loss law used for every link in the simulator.

use crate::error::{Error, Result};
use crate::topology::MIN_LINK_DISTANCE_M;

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Distance slopes in dB per decade.
const LOS_SLOPE_DB: f64 = 20.1;
const NLOS_SLOPE_DB: f64 = 34.0;

/// Radio-layer parameters shared by every link.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioConfig {
    pub fc_hz: f64,
    pub bandwidth_hz: f64,
    pub p_sbs_dbm: f64,
    pub p_user_dbm: f64,
    pub noise_power_dbm: f64,
    pub residual_si_dbm: f64,
    pub n_tx_sbs: usize,
    pub n_tx_user: usize,
    pub los_decay_m: f64,
    pub n_nlos_paths: usize,
}

impl Default for RadioConfig {
    fn default() -> Self {
        RadioConfig {
            fc_hz: 28e9,
            bandwidth_hz: 100e6,
            p_sbs_dbm: 24.0,
            p_user_dbm: 20.0,
            noise_power_dbm: -104.0,
            residual_si_dbm: -110.0,
            n_tx_sbs: 64,
            n_tx_user: 32,
            los_decay_m: 100.0,
            n_nlos_paths: 2,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.fc_hz.is_finite() || self.fc_hz <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "fc_hz must be finite and > 0, got {}",
                self.fc_hz
            )));
        }
        if !self.bandwidth_hz.is_finite() || self.bandwidth_hz <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "bandwidth_hz must be finite and > 0, got {}",
                self.bandwidth_hz
            )));
        }
        if self.n_tx_sbs < 1 || self.n_tx_user < 1 {
            return Err(Error::InvalidParameter(
                "antenna counts must be >= 1".into(),
            ));
        }
        if !self.los_decay_m.is_finite() || self.los_decay_m <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "los_decay_m must be finite and > 0, got {}",
                self.los_decay_m
            )));
        }
        // transmit and SI powers may be -inf dBm (exactly zero watts), but
        // the thermal noise floor must stay strictly positive
        for (name, v) in [
            ("p_sbs_dbm", self.p_sbs_dbm),
            ("p_user_dbm", self.p_user_dbm),
            ("residual_si_dbm", self.residual_si_dbm),
        ] {
            if v.is_nan() || v == f64::INFINITY {
                return Err(Error::InvalidParameter(format!(
                    "{name} must not be NaN or +inf"
                )));
            }
        }
        if !self.noise_power_dbm.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise_power_dbm must be finite, got {}",
                self.noise_power_dbm
            )));
        }
        Ok(())
    }
}

/// Converts a dBm level to watts.
pub fn dbm_to_watt(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

/// Inverse of [`dbm_to_watt`].
pub fn watt_to_dbm(watt: f64) -> f64 {
    10.0 * (watt * 1e3).log10()
}

/// Path loss in dB: a free-space constant at one metre plus a slope of
/// 20.1 dB/decade (LOS) or 34.0 dB/decade (NLOS). Distances below the
/// one-metre validity floor are clamped to it.
pub fn pathloss_db(d_m: f64, los: bool, fc_hz: f64) -> Result<f64> {
    if d_m.is_nan() || d_m <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "link distance must be > 0 m, got {d_m}"
        )));
    }
    let d = d_m.max(MIN_LINK_DISTANCE_M);
    let offset = 20.0 * (4.0 * std::f64::consts::PI * fc_hz / SPEED_OF_LIGHT_M_S).log10();
    let slope = if los { LOS_SLOPE_DB } else { NLOS_SLOPE_DB };
    Ok(offset + slope * d.log10())
}

/// Linear power gain of a link, `10^(-PL/10)`.
pub fn pathgain_linear(d_m: f64, los: bool, fc_hz: f64) -> Result<f64> {
    Ok(10f64.powf(-pathloss_db(d_m, los, fc_hz)? / 10.0))
}
