//! Per-trial link bookkeeping: every desired link and every cross-link gain
//! a rate computation can ask for, built once per topology draw and shared
//! by all access schemes evaluated on it.
//!
//! Gains are stored pre-summed by interferer category so scheme logic only
//! decides which categories count and at what transmit power:
//!
//! * SBS-originated links (desired DL, SBS-to-user CCI, SBS-to-SBS CCI) are
//!   full vector channels scalarized through a beam. A cross link leaks
//!   through the interfering SBS's own serving beam; the victim side
//!   receives omnidirectionally.
//! * User-originated interference (user-to-user, user-to-SBS) is a scalar
//!   NLOS path-loss link with no array gain: handsets beamform at their own
//!   SBS, not at victims.

use crate::channel::{sample_blockage, sample_multipath, select_beam_dl, select_beam_ul};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::radio::{pathgain_linear, RadioConfig};
use crate::topology::{Topology, MIN_LINK_DISTANCE_M};
use rand::Rng;

/// Everything one downlink user's SINR depends on, as linear power gains.
#[derive(Debug, Clone, PartialEq)]
pub struct DlUserLink {
    /// Serving-SBS effective gain through the cell's downlink beam.
    pub gain: f64,
    /// Summed cross gains from every other radiating SBS.
    pub sbs_cci_gain: f64,
    /// Summed scalar gains from this cell's own uplink users.
    pub uu_cci_gain_own: f64,
    /// Summed scalar gains from all other cells' uplink users.
    pub uu_cci_gain_other: f64,
}

/// One cell's links: desired DL/UL gains plus the interference aggregates
/// its SBS receiver sees.
#[derive(Debug, Clone, PartialEq)]
pub struct CellLinks {
    /// Serving beam for the DL pair; `None` when the cell has no DL users
    /// or all their channels are dead, in which case the SBS stays silent.
    pub dl_beam: Option<usize>,
    /// Combining beam for the UL group; `None` when there is nothing to
    /// receive.
    pub ul_beam: Option<usize>,
    pub dl: Vec<DlUserLink>,
    /// Per-UL-user effective gain through `ul_beam`, user-side array gain
    /// included.
    pub ul_gains: Vec<f64>,
    /// Summed cross gains from other radiating SBSs into this SBS receiver.
    pub sbs_cci_gain: f64,
    /// Summed scalar gains from other cells' uplink users into this SBS.
    pub ul_user_cci_gain: f64,
}

/// All links of one topology draw, indexed like `topology.cells`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkState {
    pub cells: Vec<CellLinks>,
}

fn scalar_nlos_gain(a: Point2, b: Point2, fc_hz: f64) -> Result<f64> {
    pathgain_linear(a.distance(b).max(MIN_LINK_DISTANCE_M), false, fc_hz)
}

/// Draws a vector channel for one SBS-originated link and returns its
/// effective gain through `beam`.
fn cross_gain_through_beam<R: Rng + ?Sized>(
    from_sbs: Point2,
    to: Point2,
    beam: usize,
    radio: &RadioConfig,
    rng: &mut R,
) -> Result<f64> {
    let d = from_sbs.distance(to).max(MIN_LINK_DISTANCE_M);
    let los = sample_blockage(d, radio.los_decay_m, rng);
    let mut ch = sample_multipath(d, los, radio, rng)?;
    ch.apply_beam(beam);
    Ok(ch.effective_gain)
}

/// Builds the full link state for one topology draw.
///
/// Draw order is fixed: first every cell's own links (DL users then UL
/// users, one blockage draw then one channel draw per link), then the
/// SBS-originated cross links in victim-major order. Silent interferers
/// consume no randomness. User-originated scalar links are deterministic.
pub fn build_link_state<R: Rng + ?Sized>(
    topology: &Topology,
    radio: &RadioConfig,
    rng: &mut R,
) -> Result<LinkState> {
    let cells = &topology.cells;
    let mut out: Vec<CellLinks> = Vec::with_capacity(cells.len());

    // own-cell links and beam choices
    for cell in cells {
        let mut dl_channels = Vec::with_capacity(cell.dl_users.len());
        for user in &cell.dl_users {
            let d = cell.sbs.distance(*user);
            let los = sample_blockage(d, radio.los_decay_m, rng);
            dl_channels.push(sample_multipath(d, los, radio, rng)?);
        }
        let mut ul_channels = Vec::with_capacity(cell.ul_users.len());
        for user in &cell.ul_users {
            let d = cell.sbs.distance(*user);
            let los = sample_blockage(d, radio.los_decay_m, rng);
            ul_channels.push(sample_multipath(d, los, radio, rng)?);
        }

        let dl_beam = if dl_channels.is_empty() {
            None
        } else {
            let beamspaces: Vec<_> = dl_channels.iter().map(|c| c.beamspace()).collect();
            match select_beam_dl(&beamspaces) {
                Ok(b) => Some(b),
                Err(Error::DeadLink) => None,
                Err(e) => return Err(e),
            }
        };
        let ul_beam = if ul_channels.is_empty() {
            None
        } else {
            let beamspaces: Vec<_> = ul_channels.iter().map(|c| c.beamspace()).collect();
            match select_beam_ul(&beamspaces) {
                Ok(b) => Some(b),
                Err(Error::DeadLink) => None,
                Err(e) => return Err(e),
            }
        };

        let dl = dl_channels
            .iter_mut()
            .map(|ch| {
                if let Some(b) = dl_beam {
                    ch.apply_beam(b);
                }
                DlUserLink {
                    gain: ch.effective_gain,
                    sbs_cci_gain: 0.0,
                    uu_cci_gain_own: 0.0,
                    uu_cci_gain_other: 0.0,
                }
            })
            .collect();
        let ul_gains = ul_channels
            .iter_mut()
            .map(|ch| {
                if let Some(b) = ul_beam {
                    ch.apply_beam_ul(b, radio.n_tx_user);
                }
                ch.effective_gain
            })
            .collect();

        out.push(CellLinks {
            dl_beam,
            ul_beam,
            dl,
            ul_gains,
            sbs_cci_gain: 0.0,
            ul_user_cci_gain: 0.0,
        });
    }

    // SBS-originated cross links, keyed by the interferer's serving beam
    for i in 0..cells.len() {
        for j in 0..cells.len() {
            if j == i {
                continue;
            }
            let Some(beam_j) = out[j].dl_beam else {
                continue;
            };
            for (u, user) in cells[i].dl_users.iter().enumerate() {
                let g = cross_gain_through_beam(cells[j].sbs, *user, beam_j, radio, rng)?;
                out[i].dl[u].sbs_cci_gain += g;
            }
            let g = cross_gain_through_beam(cells[j].sbs, cells[i].sbs, beam_j, radio, rng)?;
            out[i].sbs_cci_gain += g;
        }
    }

    // user-originated scalar links
    for i in 0..cells.len() {
        for (u, user) in cells[i].dl_users.iter().enumerate() {
            let mut own = 0.0;
            let mut other = 0.0;
            for (j, cell_j) in cells.iter().enumerate() {
                for ul_user in &cell_j.ul_users {
                    let g = scalar_nlos_gain(*ul_user, *user, radio.fc_hz)?;
                    if j == i {
                        own += g;
                    } else {
                        other += g;
                    }
                }
            }
            out[i].dl[u].uu_cci_gain_own = own;
            out[i].dl[u].uu_cci_gain_other = other;
        }
        let mut at_sbs = 0.0;
        for (j, cell_j) in cells.iter().enumerate() {
            if j == i {
                continue;
            }
            for ul_user in &cell_j.ul_users {
                at_sbs += scalar_nlos_gain(*ul_user, cells[i].sbs, radio.fc_hz)?;
            }
        }
        out[i].ul_user_cci_gain = at_sbs;
    }

    Ok(LinkState { cells: out })
}
