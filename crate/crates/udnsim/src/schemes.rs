//! Access-scheme rate logic: OMA and NOMA downlink rates, uplink SuIC
//! detection, and the interference bookkeeping that feeds them.
//!
//! All interference is treated as noise. Scheme differences reduce to which
//! transmitter categories count against a victim, how the cell's downlink
//! power is split, and whether the SBS receiver pays a self-interference
//! penalty for operating full duplex.

use crate::error::{Error, Result};
use crate::links::LinkState;
use crate::radio::{dbm_to_watt, RadioConfig};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    OmaHd,
    NomaHd,
    NomaFd,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::OmaHd, Scheme::NomaHd, Scheme::NomaFd];

    /// Stable machine token, used in CSV output and config files.
    pub fn token(self) -> &'static str {
        match self {
            Scheme::OmaHd => "OMA_HD",
            Scheme::NomaHd => "NOMA_HD",
            Scheme::NomaFd => "NOMA_FD",
        }
    }

    /// Human-facing label for plot legends.
    pub fn label(self) -> &'static str {
        match self {
            Scheme::OmaHd => "OMA-HD",
            Scheme::NomaHd => "NOMA-HD",
            Scheme::NomaFd => "NOMA-FD",
        }
    }

    pub fn is_full_duplex(self) -> bool {
        self == Scheme::NomaFd
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "OMA_HD" => Ok(Scheme::OmaHd),
            "NOMA_HD" => Ok(Scheme::NomaHd),
            "NOMA_FD" => Ok(Scheme::NomaFd),
            _ => Err(Error::InvalidParameter(format!(
                "unknown scheme {s:?} (expected OMA_HD, NOMA_HD or NOMA_FD)"
            ))),
        }
    }
}

/// A scheme plus its downlink power-split coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub alpha_weak: f64,
    pub alpha_strong: f64,
}

impl SchemeConfig {
    /// Default coefficients: 0.7/0.3 for the NOMA schemes, 0.5/0.5 for OMA.
    pub fn defaults_for(scheme: Scheme) -> Self {
        let (alpha_weak, alpha_strong) = match scheme {
            Scheme::OmaHd => (0.5, 0.5),
            Scheme::NomaHd | Scheme::NomaFd => (0.7, 0.3),
        };
        SchemeConfig {
            scheme,
            alpha_weak,
            alpha_strong,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha_weak.is_finite() || !self.alpha_strong.is_finite() {
            return Err(Error::InvalidParameter(
                "power coefficients must be finite".into(),
            ));
        }
        if ((self.alpha_weak + self.alpha_strong) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "power coefficients must sum to 1, got {} + {}",
                self.alpha_weak, self.alpha_strong
            )));
        }
        if self.alpha_strong < 0.0 || self.alpha_weak < self.alpha_strong {
            return Err(Error::InvalidParameter(format!(
                "need alpha_weak >= alpha_strong >= 0, got {} and {}",
                self.alpha_weak, self.alpha_strong
            )));
        }
        Ok(())
    }
}

/// Additive power budget at one receiver, all in watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrBreakdown {
    pub signal: f64,
    pub intra_cci: f64,
    pub inter_cci: f64,
    pub self_interference: f64,
    pub noise: f64,
}

impl SinrBreakdown {
    pub fn sinr(&self) -> f64 {
        self.signal / (self.intra_cci + self.inter_cci + self.self_interference + self.noise)
    }
}

/// Per-user rates of one cell under one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRates {
    pub dl_rates_bps: Vec<f64>,
    pub ul_rates_bps: Vec<f64>,
    pub sum_bps: f64,
}

/// `bandwidth * log2(1 + sinr)`.
pub fn shannon_rate(bandwidth_hz: f64, sinr: f64) -> Result<f64> {
    if bandwidth_hz.is_nan() || bandwidth_hz <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be > 0, got {bandwidth_hz}"
        )));
    }
    if sinr.is_nan() || sinr < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "SINR must be >= 0, got {sinr}"
        )));
    }
    Ok(bandwidth_hz * (1.0 + sinr).log2())
}

/// Orders a served pair by effective gain: returns (weak index, strong
/// index) into the two arguments, the first argument winning ties as weak.
pub fn classify_pair(g_a: f64, g_b: f64) -> (usize, usize) {
    if g_b < g_a {
        (1, 0)
    } else {
        (0, 1)
    }
}

/// Downlink NOMA pair rates. The weak user decodes its own signal treating
/// the strong user's superimposed share as noise; the strong user cancels
/// the weak user's share first.
#[allow(clippy::too_many_arguments)]
pub fn noma_dl_rates(
    g_w: f64,
    g_s: f64,
    p: f64,
    alpha: &SchemeConfig,
    i_w: f64,
    i_s: f64,
    noise: f64,
    bandwidth_hz: f64,
) -> Result<(f64, f64)> {
    if g_w > g_s {
        return Err(Error::NomaOrdering {
            g_weak: g_w,
            g_strong: g_s,
        });
    }
    let r_w = shannon_rate(
        bandwidth_hz,
        alpha.alpha_weak * p * g_w / (alpha.alpha_strong * p * g_w + i_w + noise),
    )?;
    let r_s = shannon_rate(bandwidth_hz, alpha.alpha_strong * p * g_s / (i_s + noise))?;
    Ok((r_w, r_s))
}

/// Downlink OMA pair rates: each user gets half the band and half the cell
/// power. Interference and noise prorate to the half band, so the power
/// halvings cancel inside the SINR.
pub fn oma_dl_rates(
    g_1: f64,
    g_2: f64,
    p: f64,
    i_1: f64,
    i_2: f64,
    noise: f64,
    bandwidth_hz: f64,
) -> Result<(f64, f64)> {
    let half_band = bandwidth_hz / 2.0;
    let r_1 = shannon_rate(half_band, p * g_1 / (i_1 + noise))?;
    let r_2 = shannon_rate(half_band, p * g_2 / (i_2 + noise))?;
    Ok((r_1, r_2))
}

/// Uplink SuIC rates. Users are decoded strongest-received first, each
/// treating the not-yet-decoded users as noise; decoded signals cancel
/// perfectly. Rates are returned in the callers' input order.
pub fn noma_ul_rates(
    received: &[f64],
    interference: f64,
    si: f64,
    noise: f64,
    bandwidth_hz: f64,
) -> Result<Vec<f64>> {
    for &s in received {
        if s.is_nan() || s < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "received power must be >= 0, got {s}"
            )));
        }
    }
    let mut order: Vec<usize> = (0..received.len()).collect();
    order.sort_by(|&a, &b| received[b].total_cmp(&received[a]));

    let floor = interference + si + noise;
    let mut rates = vec![0.0; received.len()];
    // walk the decode order backwards so the undecoded-power sum accumulates
    // instead of cancelling
    let mut undecoded = 0.0;
    for &k in order.iter().rev() {
        rates[k] = shannon_rate(bandwidth_hz, received[k] / (undecoded + floor))?;
        undecoded += received[k];
    }
    Ok(rates)
}

/// Receiver whose interference budget is being assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Victim {
    DlUser { cell: usize, user: usize },
    UlReceiver { cell: usize },
}

/// Collects one victim's power budget from the link state.
///
/// Downlink victims hear every other radiating SBS, and under full duplex
/// additionally every uplink user (the own-cell share of that is switchable
/// via `own_cell_uu_cci`). The intra-cell component is the NOMA
/// superposition share only. Uplink victims (SBS receivers) hear other
/// SBSs' downlink plus other cells' uplink users, and pay the residual
/// self-interference penalty when operating full duplex.
pub fn aggregate_interference(
    links: &LinkState,
    cfg: &SchemeConfig,
    victim: Victim,
    radio: &RadioConfig,
    own_cell_uu_cci: bool,
) -> Result<SinrBreakdown> {
    let p_sbs = dbm_to_watt(radio.p_sbs_dbm);
    let p_user = dbm_to_watt(radio.p_user_dbm);
    let noise = dbm_to_watt(radio.noise_power_dbm);

    let cell_links = |cell: usize| {
        links.cells.get(cell).ok_or_else(|| {
            Error::InconsistentState(format!(
                "cell {cell} out of range ({} cells)",
                links.cells.len()
            ))
        })
    };

    match victim {
        Victim::DlUser { cell, user } => {
            let cl = cell_links(cell)?;
            let link = cl.dl.get(user).ok_or_else(|| {
                Error::InconsistentState(format!(
                    "DL user {user} out of range in cell {cell} ({} users)",
                    cl.dl.len()
                ))
            })?;
            let mut inter = p_sbs * link.sbs_cci_gain;
            if cfg.scheme.is_full_duplex() {
                if own_cell_uu_cci {
                    inter += p_user * link.uu_cci_gain_own;
                }
                inter += p_user * link.uu_cci_gain_other;
            }
            let (signal, intra) = match cfg.scheme {
                Scheme::OmaHd => (p_sbs * link.gain, 0.0),
                Scheme::NomaHd | Scheme::NomaFd => {
                    if cl.dl.len() == 2 {
                        let (weak, _) = classify_pair(cl.dl[0].gain, cl.dl[1].gain);
                        if user == weak {
                            (
                                cfg.alpha_weak * p_sbs * link.gain,
                                cfg.alpha_strong * p_sbs * link.gain,
                            )
                        } else {
                            (cfg.alpha_strong * p_sbs * link.gain, 0.0)
                        }
                    } else {
                        // a lone user gets the whole cell power
                        (p_sbs * link.gain, 0.0)
                    }
                }
            };
            Ok(SinrBreakdown {
                signal,
                intra_cci: intra,
                inter_cci: inter,
                self_interference: 0.0,
                noise,
            })
        }
        Victim::UlReceiver { cell } => {
            let cl = cell_links(cell)?;
            let inter = p_sbs * cl.sbs_cci_gain + p_user * cl.ul_user_cci_gain;
            let si = if cfg.scheme.is_full_duplex() {
                dbm_to_watt(radio.residual_si_dbm)
            } else {
                0.0
            };
            Ok(SinrBreakdown {
                signal: 0.0,
                intra_cci: 0.0,
                inter_cci: inter,
                self_interference: si,
                noise,
            })
        }
    }
}

/// All rates of one cell under one scheme. Half-duplex schemes serve the
/// downlink pair only; full duplex adds the uplink SuIC group on the same
/// band.
pub fn cell_sum_rate(
    links: &LinkState,
    cell: usize,
    cfg: &SchemeConfig,
    radio: &RadioConfig,
    own_cell_uu_cci: bool,
) -> Result<CellRates> {
    let cl = links.cells.get(cell).ok_or_else(|| {
        Error::InconsistentState(format!(
            "cell {cell} out of range ({} cells)",
            links.cells.len()
        ))
    })?;
    let p_sbs = dbm_to_watt(radio.p_sbs_dbm);
    let noise = dbm_to_watt(radio.noise_power_dbm);
    let band = radio.bandwidth_hz;

    let inter_of = |user: usize| -> Result<f64> {
        Ok(aggregate_interference(
            links,
            cfg,
            Victim::DlUser { cell, user },
            radio,
            own_cell_uu_cci,
        )?
        .inter_cci)
    };

    let dl_rates_bps = match cl.dl.len() {
        0 => Vec::new(),
        1 => {
            let sinr = p_sbs * cl.dl[0].gain / (inter_of(0)? + noise);
            vec![shannon_rate(band, sinr)?]
        }
        2 => {
            let (weak, strong) = classify_pair(cl.dl[0].gain, cl.dl[1].gain);
            let mut rates = vec![0.0; 2];
            match cfg.scheme {
                Scheme::OmaHd => {
                    let (r_1, r_2) = oma_dl_rates(
                        cl.dl[0].gain,
                        cl.dl[1].gain,
                        p_sbs,
                        inter_of(0)?,
                        inter_of(1)?,
                        noise,
                        band,
                    )?;
                    rates = vec![r_1, r_2];
                }
                Scheme::NomaHd | Scheme::NomaFd => {
                    let (r_w, r_s) = noma_dl_rates(
                        cl.dl[weak].gain,
                        cl.dl[strong].gain,
                        p_sbs,
                        cfg,
                        inter_of(weak)?,
                        inter_of(strong)?,
                        noise,
                        band,
                    )?;
                    rates[weak] = r_w;
                    rates[strong] = r_s;
                }
            }
            rates
        }
        n => {
            return Err(Error::InconsistentState(format!(
                "cell {cell} carries {n} DL users; one RF chain serves at most a pair"
            )))
        }
    };

    let ul_rates_bps = if cfg.scheme.is_full_duplex() && !cl.ul_gains.is_empty() {
        let p_user = dbm_to_watt(radio.p_user_dbm);
        let received: Vec<f64> = cl.ul_gains.iter().map(|g| p_user * g).collect();
        let budget = aggregate_interference(
            links,
            cfg,
            Victim::UlReceiver { cell },
            radio,
            own_cell_uu_cci,
        )?;
        noma_ul_rates(
            &received,
            budget.inter_cci,
            budget.self_interference,
            noise,
            band,
        )?
    } else {
        Vec::new()
    };

    let mut sum_bps = 0.0;
    for r in &dl_rates_bps {
        sum_bps += r;
    }
    for r in &ul_rates_bps {
        sum_bps += r;
    }
    Ok(CellRates {
        dl_rates_bps,
        ul_rates_bps,
        sum_bps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::links::{CellLinks, DlUserLink};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Radio with powers chosen so p_sbs = noise = 1 W and bandwidth 1 Hz,
    /// making rates directly comparable to hand arithmetic.
    fn unit_radio() -> RadioConfig {
        RadioConfig {
            bandwidth_hz: 1.0,
            p_sbs_dbm: 30.0,
            p_user_dbm: 30.0,
            noise_power_dbm: 30.0,
            residual_si_dbm: f64::NEG_INFINITY,
            ..RadioConfig::default()
        }
    }

    fn dl_link(gain: f64) -> DlUserLink {
        DlUserLink {
            gain,
            sbs_cci_gain: 0.0,
            uu_cci_gain_own: 0.0,
            uu_cci_gain_other: 0.0,
        }
    }

    fn one_cell_state(g_a: f64, g_b: f64, ul_gains: Vec<f64>) -> LinkState {
        LinkState {
            cells: vec![CellLinks {
                dl_beam: Some(0),
                ul_beam: if ul_gains.is_empty() { None } else { Some(0) },
                dl: vec![dl_link(g_a), dl_link(g_b)],
                ul_gains,
                sbs_cci_gain: 0.0,
                ul_user_cci_gain: 0.0,
            }],
        }
    }

    #[test]
    fn shannon_rate_reference_points() {
        assert_eq!(shannon_rate(100e6, 0.0).unwrap(), 0.0);
        assert_eq!(shannon_rate(100e6, 1.0).unwrap(), 1e8);
        assert_eq!(shannon_rate(100e6, 15.0).unwrap(), 4e8);
        assert!(shannon_rate(100e6, -0.1).is_err());
        assert!(shannon_rate(0.0, 1.0).is_err());
        assert!(shannon_rate(100e6, f64::NAN).is_err());
    }

    #[test]
    fn pair_classification_breaks_ties_toward_the_first() {
        assert_eq!(classify_pair(1.0, 2.0), (0, 1));
        assert_eq!(classify_pair(2.0, 1.0), (1, 0));
        assert_eq!(classify_pair(1.0, 1.0), (0, 1));
    }

    #[test]
    fn noma_dl_reference_instance() {
        let alpha = SchemeConfig::defaults_for(Scheme::NomaHd);
        let (r_w, r_s) = noma_dl_rates(1.0, 10.0, 1.0, &alpha, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((r_w - 0.6214883767462701).abs() < 1e-15);
        assert_eq!(r_s, 2.0);

        let (r_w, r_s) = noma_dl_rates(0.0, 0.0, 1.0, &alpha, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!((r_w, r_s), (0.0, 0.0));

        assert!(matches!(
            noma_dl_rates(10.0, 1.0, 1.0, &alpha, 0.0, 0.0, 1.0, 1.0),
            Err(Error::NomaOrdering { .. })
        ));
    }

    #[test]
    fn oma_dl_reference_instance_and_scheme_comparison() {
        let (r_1, r_2) = oma_dl_rates(1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(r_1, 0.5);
        assert_eq!(r_2, 0.5);
        let (r, _) = oma_dl_rates(0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(r, 0.0);

        // same pair, both schemes: superposition beats the half-band split
        let alpha = SchemeConfig::defaults_for(Scheme::NomaHd);
        let (n_w, n_s) = noma_dl_rates(1.0, 10.0, 1.0, &alpha, 0.0, 0.0, 1.0, 1.0).unwrap();
        let (o_w, o_s) = oma_dl_rates(1.0, 10.0, 1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        let noma_sum = n_w + n_s;
        let oma_sum = o_w + o_s;
        assert!((noma_sum - 2.62148837674627).abs() < 1e-12);
        assert!((oma_sum - 2.2297158093186487).abs() < 1e-12);
        assert!(noma_sum > oma_sum);
    }

    #[test]
    fn ul_suic_reference_instance_keeps_input_order() {
        let rates = noma_ul_rates(&[3.0, 1.0], 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((rates[0] - 1.3219280948873624).abs() < 1e-15);
        assert_eq!(rates[1], 1.0);

        // same powers, swapped slots: each user keeps its own rate
        let rates = noma_ul_rates(&[1.0, 3.0], 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(
            rates[1],
            noma_ul_rates(&[3.0, 1.0], 0.0, 0.0, 1.0, 1.0).unwrap()[0]
        );
        assert_eq!(rates[0], 1.0);

        // single user degenerates to a plain Shannon rate
        let single = noma_ul_rates(&[3.0], 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(single, vec![2.0]);

        assert_eq!(
            noma_ul_rates(&[0.0, 0.0], 0.0, 0.0, 1.0, 1.0).unwrap(),
            vec![0.0, 0.0]
        );
        assert_eq!(
            noma_ul_rates(&[], 0.0, 0.0, 1.0, 1.0).unwrap(),
            Vec::<f64>::new()
        );
        assert!(noma_ul_rates(&[-1.0], 0.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn ul_suic_satisfies_the_sum_capacity_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=4);
            let received: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 10.0).collect();
            let interference = rng.gen::<f64>();
            let si = rng.gen::<f64>() * 0.1;
            let noise = 0.5 + rng.gen::<f64>();
            let b = 1e8;
            let rates = noma_ul_rates(&received, interference, si, noise, b).unwrap();
            let total: f64 = received.iter().sum();
            let capacity = b * (1.0 + total / (interference + si + noise)).log2();
            let sum: f64 = rates.iter().sum();
            assert!(
                (sum - capacity).abs() <= 1e-9 * capacity,
                "sum {sum} vs capacity {capacity}"
            );
        }
    }

    #[test]
    fn decoding_strongest_first_maximizes_the_first_stage() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let s_hi = 1.0 + rng.gen::<f64>() * 9.0;
            let s_lo = rng.gen::<f64>() * s_hi;
            let floor = 0.1 + rng.gen::<f64>();
            let strongest_first = (1.0 + s_hi / (s_lo + floor)).log2();
            let weakest_first = (1.0 + s_lo / (s_hi + floor)).log2();
            assert!(strongest_first >= weakest_first);
            // the implementation picks the strongest-first order
            let rates = noma_ul_rates(&[s_lo, s_hi], 0.0, 0.0, floor, 1.0).unwrap();
            assert_eq!(rates[1], strongest_first);
        }
    }

    #[test]
    fn rates_move_monotonically_with_signal_and_interference() {
        let alpha = SchemeConfig::defaults_for(Scheme::NomaHd);
        let base = noma_dl_rates(1.0, 10.0, 1.0, &alpha, 1.0, 1.0, 1.0, 1.0).unwrap();
        let more_i = noma_dl_rates(1.0, 10.0, 1.0, &alpha, 2.0, 3.0, 1.0, 1.0).unwrap();
        assert!(more_i.0 < base.0 && more_i.1 < base.1);
        let stronger = noma_dl_rates(2.0, 20.0, 1.0, &alpha, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(stronger.0 > base.0 && stronger.1 > base.1);

        let ul_stronger = noma_ul_rates(&[4.0, 1.0], 0.0, 0.0, 1.0, 1.0).unwrap();
        let ul_base = noma_ul_rates(&[3.0, 1.0], 0.0, 0.0, 1.0, 1.0).unwrap();
        let ul_noisy = noma_ul_rates(&[3.0, 1.0], 1.0, 0.5, 1.0, 1.0).unwrap();
        assert!(ul_stronger[0] > ul_base[0]);
        assert!(ul_noisy[0] < ul_base[0] && ul_noisy[1] < ul_base[1]);
    }

    #[test]
    fn scheme_tokens_parse_and_display() {
        for scheme in Scheme::ALL {
            assert_eq!(scheme.token().parse::<Scheme>().unwrap(), scheme);
            assert_eq!(scheme.label().parse::<Scheme>().unwrap(), scheme);
            assert_eq!(scheme.token(), scheme.to_string());
        }
        assert_eq!("noma_fd".parse::<Scheme>().unwrap(), Scheme::NomaFd);
        assert_eq!(" oma-hd ".parse::<Scheme>().unwrap(), Scheme::OmaHd);
        assert!("TDMA".parse::<Scheme>().is_err());
    }

    #[test]
    fn scheme_config_validation() {
        for scheme in Scheme::ALL {
            SchemeConfig::defaults_for(scheme).validate().unwrap();
        }
        let bad_sum = SchemeConfig {
            scheme: Scheme::NomaHd,
            alpha_weak: 0.6,
            alpha_strong: 0.5,
        };
        assert!(bad_sum.validate().is_err());
        let inverted = SchemeConfig {
            scheme: Scheme::NomaHd,
            alpha_weak: 0.3,
            alpha_strong: 0.7,
        };
        assert!(inverted.validate().is_err());
    }

    #[test]
    fn isolated_half_duplex_cell_has_empty_interference_budget() {
        let links = one_cell_state(1e-9, 5e-9, vec![]);
        let radio = RadioConfig::default();
        let cfg = SchemeConfig::defaults_for(Scheme::NomaHd);
        for user in 0..2 {
            let b = aggregate_interference(
                &links,
                &cfg,
                Victim::DlUser { cell: 0, user },
                &radio,
                true,
            )
            .unwrap();
            assert_eq!(b.inter_cci, 0.0);
            assert_eq!(b.self_interference, 0.0);
            assert_eq!(b.noise, dbm_to_watt(-104.0));
        }
    }

    #[test]
    fn full_duplex_ul_receiver_pays_the_residual_si() {
        let links = one_cell_state(1e-9, 5e-9, vec![1e-8, 2e-8]);
        let radio = RadioConfig::default();
        let fd = SchemeConfig::defaults_for(Scheme::NomaFd);
        let b = aggregate_interference(&links, &fd, Victim::UlReceiver { cell: 0 }, &radio, true)
            .unwrap();
        assert_eq!(b.self_interference, dbm_to_watt(-110.0));
        assert_eq!(b.self_interference, 1e-14);

        let hd = SchemeConfig::defaults_for(Scheme::NomaHd);
        let b = aggregate_interference(&links, &hd, Victim::UlReceiver { cell: 0 }, &radio, true)
            .unwrap();
        assert_eq!(b.self_interference, 0.0);
    }

    #[test]
    fn unit_cross_gain_converts_transmit_power_directly() {
        let mut links = one_cell_state(1e-9, 5e-9, vec![]);
        links.cells[0].dl[0].sbs_cci_gain = 1.0;
        let radio = RadioConfig::default();
        let cfg = SchemeConfig::defaults_for(Scheme::NomaHd);
        let b = aggregate_interference(
            &links,
            &cfg,
            Victim::DlUser { cell: 0, user: 0 },
            &radio,
            true,
        )
        .unwrap();
        assert_eq!(b.inter_cci, dbm_to_watt(24.0));
        assert!((b.inter_cci - 0.2512).abs() < 1e-4);
    }

    #[test]
    fn noma_breakdown_matches_the_rate_formula_bit_for_bit() {
        let links = one_cell_state(1.0, 10.0, vec![]);
        let radio = unit_radio();
        let cfg = SchemeConfig::defaults_for(Scheme::NomaHd);
        let (weak, strong) = classify_pair(links.cells[0].dl[0].gain, links.cells[0].dl[1].gain);
        let b_w = aggregate_interference(
            &links,
            &cfg,
            Victim::DlUser {
                cell: 0,
                user: weak,
            },
            &radio,
            true,
        )
        .unwrap();
        let b_s = aggregate_interference(
            &links,
            &cfg,
            Victim::DlUser {
                cell: 0,
                user: strong,
            },
            &radio,
            true,
        )
        .unwrap();
        let (r_w, r_s) =
            noma_dl_rates(1.0, 10.0, 1.0, &cfg, b_w.inter_cci, b_s.inter_cci, 1.0, 1.0).unwrap();
        assert_eq!(shannon_rate(1.0, b_w.sinr()).unwrap(), r_w);
        assert_eq!(shannon_rate(1.0, b_s.sinr()).unwrap(), r_s);
    }

    #[test]
    fn hand_checked_single_cell_sum_rates() {
        let links = one_cell_state(1.0, 10.0, vec![]);
        let radio = unit_radio();

        let noma = cell_sum_rate(
            &links,
            0,
            &SchemeConfig::defaults_for(Scheme::NomaHd),
            &radio,
            true,
        )
        .unwrap();
        assert!((noma.dl_rates_bps[0] - 0.6214883767462701).abs() < 1e-15);
        assert_eq!(noma.dl_rates_bps[1], 2.0);
        assert!((noma.sum_bps - 2.62148837674627).abs() < 1e-12);
        assert!(noma.ul_rates_bps.is_empty());

        let oma = cell_sum_rate(
            &links,
            0,
            &SchemeConfig::defaults_for(Scheme::OmaHd),
            &radio,
            true,
        )
        .unwrap();
        assert!((oma.sum_bps - 2.2297158093186487).abs() < 1e-12);

        // gains handed over in the reverse slot order land on the same users
        let flipped = one_cell_state(10.0, 1.0, vec![]);
        let noma_flipped = cell_sum_rate(
            &links,
            0,
            &SchemeConfig::defaults_for(Scheme::NomaHd),
            &radio,
            true,
        )
        .unwrap();
        let refd = cell_sum_rate(
            &flipped,
            0,
            &SchemeConfig::defaults_for(Scheme::NomaHd),
            &radio,
            true,
        )
        .unwrap();
        assert_eq!(refd.dl_rates_bps[1], noma_flipped.dl_rates_bps[0]);
        assert_eq!(refd.dl_rates_bps[0], noma_flipped.dl_rates_bps[1]);
        assert_eq!(refd.sum_bps, noma_flipped.sum_bps);
    }

    #[test]
    fn full_duplex_with_silenced_uplink_degenerates_to_half_duplex() {
        let mut links = one_cell_state(2e-9, 8e-9, vec![3e-8, 1e-8]);
        links.cells[0].dl[0].sbs_cci_gain = 4e-11;
        links.cells[0].dl[1].sbs_cci_gain = 2e-11;
        links.cells[0].dl[0].uu_cci_gain_own = 5e-12;
        links.cells[0].dl[0].uu_cci_gain_other = 7e-12;
        links.cells[0].dl[1].uu_cci_gain_own = 1e-12;
        links.cells[0].sbs_cci_gain = 9e-11;
        links.cells[0].ul_user_cci_gain = 2e-12;

        let radio = RadioConfig {
            p_user_dbm: f64::NEG_INFINITY,
            residual_si_dbm: f64::NEG_INFINITY,
            ..RadioConfig::default()
        };
        let fd = cell_sum_rate(
            &links,
            0,
            &SchemeConfig::defaults_for(Scheme::NomaFd),
            &radio,
            true,
        )
        .unwrap();
        let hd = cell_sum_rate(
            &links,
            0,
            &SchemeConfig::defaults_for(Scheme::NomaHd),
            &radio,
            true,
        )
        .unwrap();
        assert_eq!(fd.dl_rates_bps, hd.dl_rates_bps);
        assert_eq!(fd.sum_bps.to_bits(), hd.sum_bps.to_bits());
        assert_eq!(fd.ul_rates_bps, vec![0.0, 0.0]);
        assert!(hd.ul_rates_bps.is_empty());
    }

    #[test]
    fn uplink_rates_appear_only_under_full_duplex() {
        let links = one_cell_state(1e-9, 5e-9, vec![2e-8, 1e-8]);
        let radio = RadioConfig::default();
        let fd = cell_sum_rate(
            &links,
            0,
            &SchemeConfig::defaults_for(Scheme::NomaFd),
            &radio,
            true,
        )
        .unwrap();
        assert_eq!(fd.ul_rates_bps.len(), 2);
        assert!(fd.ul_rates_bps.iter().all(|&r| r > 0.0));
        for scheme in [Scheme::OmaHd, Scheme::NomaHd] {
            let hd = cell_sum_rate(&links, 0, &SchemeConfig::defaults_for(scheme), &radio, true)
                .unwrap();
            assert!(hd.ul_rates_bps.is_empty());
        }
    }

    #[test]
    fn lone_downlink_user_gets_the_full_band_and_power() {
        let links = LinkState {
            cells: vec![CellLinks {
                dl_beam: Some(0),
                ul_beam: None,
                dl: vec![dl_link(3.0)],
                ul_gains: vec![],
                sbs_cci_gain: 0.0,
                ul_user_cci_gain: 0.0,
            }],
        };
        let radio = unit_radio();
        for scheme in Scheme::ALL {
            let rates = cell_sum_rate(&links, 0, &SchemeConfig::defaults_for(scheme), &radio, true)
                .unwrap();
            assert_eq!(rates.dl_rates_bps, vec![2.0], "scheme {scheme}");
        }
    }

    #[test]
    fn out_of_range_victims_are_rejected() {
        let links = one_cell_state(1.0, 2.0, vec![]);
        let radio = RadioConfig::default();
        let cfg = SchemeConfig::defaults_for(Scheme::NomaHd);
        assert!(matches!(
            aggregate_interference(
                &links,
                &cfg,
                Victim::DlUser { cell: 1, user: 0 },
                &radio,
                true
            ),
            Err(Error::InconsistentState(_))
        ));
        assert!(matches!(
            aggregate_interference(
                &links,
                &cfg,
                Victim::DlUser { cell: 0, user: 2 },
                &radio,
                true
            ),
            Err(Error::InconsistentState(_))
        ));
        assert!(matches!(
            cell_sum_rate(&links, 3, &cfg, &radio, true),
            Err(Error::InconsistentState(_))
        ));
    }

    #[test]
    fn own_cell_user_interference_switch_changes_only_fd_downlink() {
        let mut links = one_cell_state(1e-9, 5e-9, vec![1e-8]);
        links.cells[0].dl[0].uu_cci_gain_own = 1e-10;
        links.cells[0].dl[1].uu_cci_gain_own = 2e-10;
        let radio = RadioConfig::default();

        let fd = SchemeConfig::defaults_for(Scheme::NomaFd);
        let with_own = cell_sum_rate(&links, 0, &fd, &radio, true).unwrap();
        let without_own = cell_sum_rate(&links, 0, &fd, &radio, false).unwrap();
        assert!(without_own.sum_bps > with_own.sum_bps);

        let hd = SchemeConfig::defaults_for(Scheme::NomaHd);
        let a = cell_sum_rate(&links, 0, &hd, &radio, true).unwrap();
        let b = cell_sum_rate(&links, 0, &hd, &radio, false).unwrap();
        assert_eq!(a, b);
    }
}
