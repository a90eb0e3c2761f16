use serde::{Deserialize, Serialize};

use super::{cover_map, find_choke_points, EvalConfig};
use crate::map::{Coord, MapLayout, CELL_COUNT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayabilityReport {
    pub spawns_reachable: bool,
    pub walkable_fraction: f64,
    /// Walkable cells with too little cover around them.
    pub exposed_cells: Vec<Coord>,
    pub choke_points: Vec<Coord>,
    pub passed: bool,
}

fn walkable_fraction(layout: &MapLayout) -> f64 {
    layout.walkable_count() as f64 / CELL_COUNT as f64
}

/// The pass/fail part of the report, without the cover and choke analysis.
pub fn gate_passes(layout: &MapLayout, config: &EvalConfig) -> bool {
    layout.spawns_connected() && walkable_fraction(layout) >= config.min_walkable_fraction
}

pub fn playability(layout: &MapLayout) -> PlayabilityReport {
    playability_with(layout, &EvalConfig::default())
}

pub fn playability_with(layout: &MapLayout, config: &EvalConfig) -> PlayabilityReport {
    let spawns_reachable = layout.spawns_connected();
    let walkable_fraction = walkable_fraction(layout);
    let cover = cover_map(layout, config.n_rays, config.range_cells);
    let exposed_cells = MapLayout::coords()
        .filter(|&c| cover.get(c).is_some_and(|s| s < config.exposure_threshold))
        .collect();
    PlayabilityReport {
        spawns_reachable,
        walkable_fraction,
        exposed_cells,
        choke_points: find_choke_points(layout),
        passed: spawns_reachable && walkable_fraction >= config.min_walkable_fraction,
    }
}
