//! Random network topologies: small-cell base stations dropped as a Poisson
//! point process over the sector, each serving users scattered uniformly on
//! its coverage disc.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::geometry::{Point2, SectorGeometry};

/// Shortest link distance the path-loss law is valid for; user drops and
/// cross-link evaluations are floored here.
pub const MIN_LINK_DISTANCE_M: f64 = 1.0;

/// Per-cell layout: coverage-disc radius and scheduled user counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CellLayout {
    pub sc_radius_m: f64,
    pub n_dl_users: usize,
    pub n_ul_users: usize,
}

impl Default for CellLayout {
    fn default() -> Self {
        CellLayout {
            sc_radius_m: 100.0,
            n_dl_users: 2,
            n_ul_users: 2,
        }
    }
}

impl CellLayout {
    pub fn validate(&self) -> Result<()> {
        if !self.sc_radius_m.is_finite() || self.sc_radius_m < MIN_LINK_DISTANCE_M {
            return Err(Error::InvalidParameter(format!(
                "sc_radius_m must be finite and >= {MIN_LINK_DISTANCE_M}, got {}",
                self.sc_radius_m
            )));
        }
        // one RF chain serves at most a DL pair
        if self.n_dl_users > 2 {
            return Err(Error::InvalidParameter(format!(
                "n_dl_users must be <= 2, got {}",
                self.n_dl_users
            )));
        }
        Ok(())
    }
}

/// One small cell: base-station position plus its scheduled users.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub sbs: Point2,
    pub sc_radius_m: f64,
    pub dl_users: Vec<Point2>,
    pub ul_users: Vec<Point2>,
}

/// A full deployment draw for one Monte Carlo trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub geometry: SectorGeometry,
    pub density_per_km2: f64,
    pub cells: Vec<Cell>,
}

/// Draws base-station positions: a Poisson-distributed count with mean
/// `density x sector area`, positions uniform over the sector.
pub fn sample_sbs_positions(
    geometry: &SectorGeometry,
    density_per_km2: f64,
    rng: &mut impl Rng,
) -> Result<Vec<Point2>> {
    if !density_per_km2.is_finite() || density_per_km2 < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "density_per_km2 must be finite and >= 0, got {density_per_km2}"
        )));
    }
    let mean = density_per_km2 * geometry.area_km2();
    let count = if mean > 0.0 {
        let poisson = Poisson::new(mean)
            .map_err(|e| Error::InvalidParameter(format!("Poisson mean {mean}: {e}")))?;
        poisson.sample(rng) as usize
    } else {
        0
    };
    let mut positions = Vec::with_capacity(count);
    for _ in 0..count {
        // sqrt of a uniform draw keeps the point density uniform over area
        let r = geometry.macro_radius_m * rng.gen::<f64>().sqrt();
        let a = geometry.sector_angle_rad * rng.gen::<f64>();
        positions.push(Point2::new(
            geometry.apex.x + r * a.cos(),
            geometry.apex.y + r * a.sin(),
        ));
    }
    Ok(positions)
}

/// Scatters DL users, then UL users, uniformly on the coverage disc. The
/// radial coordinate is floored at [`MIN_LINK_DISTANCE_M`].
pub fn drop_users(sbs: Point2, layout: &CellLayout, rng: &mut impl Rng) -> Cell {
    let place = |rng: &mut dyn rand::RngCore| {
        let r = (layout.sc_radius_m * rng.gen::<f64>().sqrt()).max(MIN_LINK_DISTANCE_M);
        let a = TAU * rng.gen::<f64>();
        Point2::new(sbs.x + r * a.cos(), sbs.y + r * a.sin())
    };
    let dl_users = (0..layout.n_dl_users).map(|_| place(rng)).collect();
    let ul_users = (0..layout.n_ul_users).map(|_| place(rng)).collect();
    Cell {
        sbs,
        sc_radius_m: layout.sc_radius_m,
        dl_users,
        ul_users,
    }
}

/// One full topology draw: SBS positions first, then per-cell user drops in
/// base-station order, all from the caller's generator.
pub fn build_topology(
    geometry: &SectorGeometry,
    density_per_km2: f64,
    layout: &CellLayout,
    rng: &mut impl Rng,
) -> Result<Topology> {
    let cells = sample_sbs_positions(geometry, density_per_km2, rng)?
        .into_iter()
        .map(|sbs| drop_users(sbs, layout, rng))
        .collect();
    Ok(Topology {
        geometry: geometry.clone(),
        density_per_km2,
        cells,
    })
}
