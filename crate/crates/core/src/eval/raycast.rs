use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Coord, MapLayout, CELL_COUNT};

/// Two boundary crossings closer than this are one corner crossing.
const CORNER_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayHit {
    pub cell: Coord,
    /// Centre-to-centre distance between origin and hit cell, in cells.
    pub distance: f64,
}

/// Casts a sight ray from the centre of `origin` using grid DDA.
///
/// Angles are in radians with `0` pointing east (increasing column) and
/// `π/2` pointing south (increasing row). The first traversed cell whose
/// entry point lies within `range_cells` of the origin centre and that blocks
/// sight is the hit; the origin itself never blocks and leaving the grid ends
/// the ray.
pub fn cast_ray(layout: &MapLayout, origin: Coord, angle: f64, range_cells: usize) -> Result<Option<RayHit>> {
    if !layout.is_walkable(origin) {
        return Err(Error::Domain(format!("ray origin {origin} is not walkable")));
    }
    let (dy, dx) = angle.sin_cos();
    let axis = |d: f64| -> (isize, f64, f64) {
        if d > 0.0 {
            (1, 0.5 / d, 1.0 / d)
        } else if d < 0.0 {
            (-1, 0.5 / -d, 1.0 / -d)
        } else {
            (0, f64::INFINITY, f64::INFINITY)
        }
    };
    let (step_x, mut next_x, delta_x) = axis(dx);
    let (step_y, mut next_y, delta_y) = axis(dy);
    let (mut col, mut row) = (origin.col as isize, origin.row as isize);
    let range = range_cells as f64;
    loop {
        let t;
        if (next_x - next_y).abs() <= CORNER_EPS {
            t = next_x.min(next_y);
            col += step_x;
            row += step_y;
            next_x += delta_x;
            next_y += delta_y;
        } else if next_x < next_y {
            t = next_x;
            col += step_x;
            next_x += delta_x;
        } else {
            t = next_y;
            row += step_y;
            next_y += delta_y;
        }
        if t > range || !Coord::in_bounds(row, col) {
            return Ok(None);
        }
        let at = Coord::new(row as usize, col as usize);
        if layout.cell(at).blocks_rays() {
            let (dr, dc) = ((row - origin.row as isize) as f64, (col - origin.col as isize) as f64);
            return Ok(Some(RayHit { cell: at, distance: dr.hypot(dc) }));
        }
    }
}

/// Fraction of `n_rays` evenly spaced rays (angles `2πk/n`) that hit cover.
pub fn cover_score(layout: &MapLayout, cell: Coord, n_rays: usize, range_cells: usize) -> Result<f64> {
    let mut blocked = 0usize;
    for k in 0..n_rays {
        let angle = TAU * k as f64 / n_rays as f64;
        if cast_ray(layout, cell, angle, range_cells)?.is_some() {
            blocked += 1;
        }
    }
    Ok(blocked as f64 / n_rays as f64)
}

/// Cover scores for every walkable cell (`None` on blocked cells).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverMap {
    pub n_rays: usize,
    pub range_cells: usize,
    pub scores: Vec<Option<f64>>,
}

impl CoverMap {
    pub fn get(&self, at: Coord) -> Option<f64> {
        self.scores[at.index()]
    }
}

pub fn cover_map(layout: &MapLayout, n_rays: usize, range_cells: usize) -> CoverMap {
    let scores = (0..CELL_COUNT)
        .map(Coord::from_index)
        .map(|c| layout.is_walkable(c).then(|| cover_score(layout, c, n_rays, range_cells).expect("walkable")))
        .collect();
    CoverMap { n_rays, range_cells, scores }
}
