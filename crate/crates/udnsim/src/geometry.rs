//! Planar geometry of the simulated region: one circular sector of a macro
//! cell with its apex at the origin. All coordinates are metres.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// 2-D point in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Circular sector hosting the deployment. The close-zone radius is
/// descriptive metadata for the region near the macro station; it does not
/// influence any link computation.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorGeometry {
    pub apex: Point2,
    pub macro_radius_m: f64,
    pub sector_angle_rad: f64,
    pub close_zone_radius_m: f64,
}

impl Default for SectorGeometry {
    fn default() -> Self {
        SectorGeometry {
            apex: Point2::ORIGIN,
            macro_radius_m: 500.0,
            sector_angle_rad: std::f64::consts::FRAC_PI_3,
            close_zone_radius_m: 250.0,
        }
    }
}

impl SectorGeometry {
    pub fn new(
        macro_radius_m: f64,
        sector_angle_rad: f64,
        close_zone_radius_m: f64,
    ) -> Result<Self> {
        let g = SectorGeometry {
            apex: Point2::ORIGIN,
            macro_radius_m,
            sector_angle_rad,
            close_zone_radius_m,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.macro_radius_m.is_finite() || self.macro_radius_m <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "macro_radius_m must be finite and > 0, got {}",
                self.macro_radius_m
            )));
        }
        if !self.sector_angle_rad.is_finite()
            || self.sector_angle_rad <= 0.0
            || self.sector_angle_rad > TAU
        {
            return Err(Error::InvalidParameter(format!(
                "sector_angle_rad must lie in (0, 2*pi], got {}",
                self.sector_angle_rad
            )));
        }
        if !self.close_zone_radius_m.is_finite()
            || self.close_zone_radius_m <= 0.0
            || self.close_zone_radius_m >= self.macro_radius_m
        {
            return Err(Error::InvalidParameter(format!(
                "close_zone_radius_m must lie in (0, macro_radius_m), got {}",
                self.close_zone_radius_m
            )));
        }
        Ok(())
    }

    /// Sector area in square metres.
    pub fn area_m2(&self) -> f64 {
        0.5 * self.sector_angle_rad * self.macro_radius_m * self.macro_radius_m
    }

    /// Sector area in square kilometres.
    pub fn area_km2(&self) -> f64 {
        self.area_m2() / 1e6
    }

    /// Closed-set membership test; boundary points count as inside.
    pub fn in_sector(&self, p: Point2) -> bool {
        let dx = p.x - self.apex.x;
        let dy = p.y - self.apex.y;
        let r = (dx * dx + dy * dy).sqrt();
        if r > self.macro_radius_m {
            return false;
        }
        if r == 0.0 {
            return true; // the apex belongs to the sector
        }
        let mut angle = dy.atan2(dx);
        if angle < 0.0 {
            angle += TAU;
        }
        angle <= self.sector_angle_rad
    }
}
