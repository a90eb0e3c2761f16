//! Computational evaluation agents: ray-cast cover analysis, choke points and
//! the playability gate.

mod choke;
mod playability;
mod raycast;

pub use choke::find_choke_points;
pub use playability::{gate_passes, playability, playability_with, PlayabilityReport};
pub use raycast::{cast_ray, cover_map, cover_score, CoverMap, RayHit};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub n_rays: usize,
    pub range_cells: usize,
    /// Walkable cells scoring below this are reported as exposed.
    pub exposure_threshold: f64,
    pub min_walkable_fraction: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { n_rays: 16, range_cells: 8, exposure_threshold: 0.125, min_walkable_fraction: 0.3 }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_rays == 0 || self.range_cells == 0 {
            return Err(Error::Config("n_rays and range_cells must be positive".into()));
        }
        if !self.exposure_threshold.is_finite() || !self.min_walkable_fraction.is_finite() {
            return Err(Error::Config("thresholds must be finite".into()));
        }
        Ok(())
    }
}
