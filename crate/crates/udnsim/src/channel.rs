//! Sparse multipath vector channels over a half-wavelength uniform linear
//! array, the unitary beamspace (DFT) transform, beam selection, and the
//! scalar effective gains the rate formulas consume.
//!
//! A link is one optional LOS path (subject to distance-dependent blockage)
//! plus a configurable number of Rayleigh NLOS paths. Each path contributes
//! `gain * sqrt(n) * a(theta)` to the antenna-domain channel, where `a` is
//! the unit-norm array response.

use crate::error::{Error, Result};
use crate::radio::{pathgain_linear, RadioConfig};
use crate::topology::MIN_LINK_DISTANCE_M;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};

/// One link's fading state: the raw paths, the antenna-domain vector, and
/// (once a beam has been chosen) the scalar power gain seen through it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Distance actually used (after the 1 m floor).
    pub link_distance_m: f64,
    pub los: bool,
    /// Complex path amplitudes, path loss included. The LOS path, when
    /// present, comes first.
    pub path_gains: Vec<Complex64>,
    pub path_angles: Vec<f64>,
    /// Antenna-domain channel, length `n_tx_sbs`.
    pub vector_channel: Vec<Complex64>,
    pub selected_beam: Option<usize>,
    pub effective_gain: f64,
}

impl ChannelRealization {
    /// Beamspace image of the vector channel.
    pub fn beamspace(&self) -> Vec<Complex64> {
        beamspace_transform(&self.vector_channel)
    }

    /// Fixes the serving beam and caches the scalar gain through it.
    pub fn apply_beam(&mut self, beam: usize) {
        self.selected_beam = Some(beam);
        self.effective_gain = effective_gain(&self.vector_channel, beam);
    }

    /// Uplink variant: adds the user-side matched-beamforming array gain.
    pub fn apply_beam_ul(&mut self, beam: usize, n_tx_user: usize) {
        self.selected_beam = Some(beam);
        self.effective_gain = effective_gain_ul(&self.vector_channel, beam, n_tx_user);
    }
}

/// Array response of an n-element half-wavelength ULA:
/// element k is `exp(j*pi*k*sin(theta)) / sqrt(n)`. Unit Euclidean norm.
pub fn steering_vector(n: usize, theta: f64) -> Vec<Complex64> {
    assert!(n >= 1, "array needs at least one element");
    let scale = 1.0 / (n as f64).sqrt();
    let step = Complex64::from_polar(1.0, PI * theta.sin());
    let mut v = Vec::with_capacity(n);
    let mut cur = Complex64::new(scale, 0.0);
    for _ in 0..n {
        v.push(cur);
        cur *= step;
    }
    v
}

/// sin(theta) of grid beam m out of n. The grid is uniform in sin space,
/// which makes the corresponding steering vectors an orthonormal basis.
pub fn grid_angle_sin(m: usize, n: usize) -> f64 {
    -1.0 + 2.0 * m as f64 / n as f64
}

/// Beamspace coefficient of `h` at one grid beam, shared by the full
/// transform and by `effective_gain` so the two agree bit for bit.
fn beam_coefficient(h: &[Complex64], beam: usize) -> Complex64 {
    let n = h.len();
    let step = Complex64::from_polar(1.0, -PI * grid_angle_sin(beam, n));
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = Complex64::new(1.0, 0.0);
    for &hk in h {
        acc += hk * w;
        w *= step;
    }
    acc / (n as f64).sqrt()
}

/// Projects an antenna-domain channel onto the orthonormal beam basis
/// (a unitary n-point DFT); Euclidean norm is preserved.
pub fn beamspace_transform(h: &[Complex64]) -> Vec<Complex64> {
    (0..h.len()).map(|m| beam_coefficient(h, m)).collect()
}

/// Squared magnitude of the beamspace coefficient at `beam`.
pub fn effective_gain(h: &[Complex64], beam: usize) -> f64 {
    assert!(
        beam < h.len(),
        "beam index {beam} out of range for {} beams",
        h.len()
    );
    beam_coefficient(h, beam).norm_sqr()
}

/// Uplink effective gain: the beamspace gain at `beam` times the flat
/// user-side array gain (the handset beamforms at its serving SBS).
pub fn effective_gain_ul(h: &[Complex64], beam: usize, n_tx_user: usize) -> f64 {
    effective_gain(h, beam) * n_tx_user as f64
}

/// Draws the LOS/NLOS state of a link: LOS with probability
/// `exp(-d / los_decay)`.
pub fn sample_blockage<R: Rng + ?Sized>(d_m: f64, los_decay_m: f64, rng: &mut R) -> bool {
    rng.gen::<f64>() < (-d_m / los_decay_m).exp()
}

/// Draws one link realization: an optional LOS path with deterministic
/// magnitude and uniform phase, plus `n_nlos_paths` complex-Gaussian paths,
/// all with angles uniform over the front half-plane.
pub fn sample_multipath<R: Rng + ?Sized>(
    d_m: f64,
    los: bool,
    cfg: &RadioConfig,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if d_m.is_nan() || d_m <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "link distance must be > 0 m, got {d_m}"
        )));
    }
    if d_m < MIN_LINK_DISTANCE_M {
        log::debug!("clamping sub-metre link distance {d_m} m to {MIN_LINK_DISTANCE_M} m");
    }
    let d = d_m.max(MIN_LINK_DISTANCE_M);

    let n_paths = usize::from(los) + cfg.n_nlos_paths;
    let mut path_gains = Vec::with_capacity(n_paths);
    let mut path_angles = Vec::with_capacity(n_paths);

    if los {
        let amp = pathgain_linear(d, true, cfg.fc_hz)?.sqrt();
        let phase = rng.gen::<f64>() * TAU;
        path_gains.push(Complex64::from_polar(amp, phase));
        path_angles.push(rng.gen_range(-FRAC_PI_2..FRAC_PI_2));
    }
    if cfg.n_nlos_paths > 0 {
        // complex Gaussian with E[|gain|^2] equal to the NLOS path gain
        let scale = pathgain_linear(d, false, cfg.fc_hz)?.sqrt() * FRAC_1_SQRT_2;
        for _ in 0..cfg.n_nlos_paths {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            path_gains.push(Complex64::new(re * scale, im * scale));
            path_angles.push(rng.gen_range(-FRAC_PI_2..FRAC_PI_2));
        }
    }

    let n = cfg.n_tx_sbs;
    let mut h = vec![Complex64::new(0.0, 0.0); n];
    for (g, theta) in path_gains.iter().zip(&path_angles) {
        // g * sqrt(n) * a(theta): the norm factors cancel, leaving
        // g * exp(j*pi*k*sin(theta)) per element
        let step = Complex64::from_polar(1.0, PI * theta.sin());
        let mut cur = *g;
        for hk in h.iter_mut() {
            *hk += cur;
            cur *= step;
        }
    }

    Ok(ChannelRealization {
        link_distance_m: d,
        los,
        path_gains,
        path_angles,
        vector_channel: h,
        selected_beam: None,
        effective_gain: 0.0,
    })
}

fn argmax_with_tie_to_lowest(values: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Downlink beam choice for a served group: the anchor is the user with the
/// largest single-beam power, and the pair is served on that user's best
/// beam. Ties go to the earlier user and the lower beam index.
pub fn select_beam_dl<V: AsRef<[Complex64]>>(beam_vectors: &[V]) -> Result<usize> {
    let mut anchor_beam = 0usize;
    let mut anchor_peak = f64::NEG_INFINITY;
    let mut any_energy = false;
    for bv in beam_vectors {
        let (beam, peak) = argmax_with_tie_to_lowest(bv.as_ref().iter().map(|c| c.norm_sqr()));
        if peak > 0.0 {
            any_energy = true;
        }
        if peak > anchor_peak {
            anchor_peak = peak;
            anchor_beam = beam;
        }
    }
    if !any_energy {
        return Err(Error::DeadLink);
    }
    Ok(anchor_beam)
}

/// Uplink beam choice: the beam maximizing the summed beamspace power of
/// all uplink users, ties toward the lowest index.
pub fn select_beam_ul<V: AsRef<[Complex64]>>(beam_vectors: &[V]) -> Result<usize> {
    let n = beam_vectors
        .first()
        .map(|v| v.as_ref().len())
        .ok_or(Error::DeadLink)?;
    let mut totals = vec![0.0f64; n];
    for bv in beam_vectors {
        debug_assert_eq!(bv.as_ref().len(), n);
        for (t, c) in totals.iter_mut().zip(bv.as_ref()) {
            *t += c.norm_sqr();
        }
    }
    let (beam, peak) = argmax_with_tie_to_lowest(totals.into_iter());
    if peak > 0.0 {
        Ok(beam)
    } else {
        Err(Error::DeadLink)
    }
}
