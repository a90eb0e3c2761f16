//! Level interchange: the `ufg-level/1` JSON document and an SVG preview.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Cell, CellKind, Coord, MapLayout, CANVAS_UNITS, CELL_UNITS, GENOME_LEN, GRID_SIDE, MARGIN_UNITS, PREFAB_COUNT};
use crate::error::{Error, Result};

pub const LEVEL_VERSION: &str = "ufg-level/1";

/// Provenance and encoding constants carried with an exported level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelMeta {
    pub canvas_units: u32,
    pub grid_cells: usize,
    pub genome_length: usize,
    pub prefab_count: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<usize>,
    /// SHA-256 over the selection history that produced the level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selector_digest: Option<String>,
}

impl Default for LevelMeta {
    fn default() -> Self {
        Self {
            canvas_units: CANVAS_UNITS,
            grid_cells: GRID_SIDE,
            genome_length: GENOME_LEN,
            prefab_count: PREFAB_COUNT,
            session: None,
            generation: None,
            candidate: None,
            selector_digest: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelDocument {
    pub version: String,
    /// Row-major rows of cells.
    pub grid: Vec<Vec<Cell>>,
    pub spawns: [Coord; 2],
    pub cell_size: u32,
    pub repair: Vec<Coord>,
    pub meta: LevelMeta,
}

impl LevelDocument {
    pub fn new(layout: &MapLayout, meta: LevelMeta) -> Self {
        Self {
            version: LEVEL_VERSION.to_string(),
            grid: layout.rows().map(<[Cell]>::to_vec).collect(),
            spawns: layout.spawns,
            cell_size: CELL_UNITS,
            repair: layout.repair_log.clone(),
            meta,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("level documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the layout, checking the schema constants and every layout invariant.
    pub fn to_layout(&self) -> Result<MapLayout> {
        let bad = |msg: String| Err(Error::InvalidLevel(msg));
        if self.version != LEVEL_VERSION {
            return bad(format!("unsupported version {:?}", self.version));
        }
        if self.cell_size != CELL_UNITS {
            return bad(format!("cell_size {} != {CELL_UNITS}", self.cell_size));
        }
        let m = &self.meta;
        if m.canvas_units != CANVAS_UNITS || m.grid_cells != GRID_SIDE || m.genome_length != GENOME_LEN || m.prefab_count != PREFAB_COUNT {
            return bad(format!("encoding constants do not match: {m:?}"));
        }
        if self.grid.len() != GRID_SIDE || self.grid.iter().any(|r| r.len() != GRID_SIDE) {
            return bad(format!("grid must be {GRID_SIDE}x{GRID_SIDE}"));
        }
        let mut layout = MapLayout::from_cells(self.grid.concat())?;
        layout.spawns = self.spawns;
        layout.repair_log = self.repair.clone();
        layout.validate()?;
        Ok(layout)
    }
}

fn building_fill(stories: u8) -> String {
    // darker with height
    let shade = 200 - 25 * stories.min(6) as u32;
    format!("rgb({shade},{},{})", shade.saturating_sub(20), shade.saturating_sub(40))
}

/// Top-down SVG in canvas units: streets grey, buildings shaded by height,
/// free ground pale green, props as dots and spawns as lettered markers.
pub fn render_svg(layout: &MapLayout) -> String {
    let size = CANVAS_UNITS;
    let cell = CELL_UNITS as f64;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let _ = writeln!(svg, r##"<rect width="{size}" height="{size}" fill="#202020"/>"##);
    for at in MapLayout::coords() {
        let c = layout.cell(at);
        let (x, y) = (MARGIN_UNITS + at.col as f64 * cell, MARGIN_UNITS + at.row as f64 * cell);
        let fill = match c.content {
            CellKind::Street => "#8a8a8a".to_string(),
            CellKind::Free => "#cfe3b4".to_string(),
            CellKind::Building => building_fill(c.height_stories),
        };
        let _ = writeln!(svg, r#"<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{fill}"/>"#);
        for p in &c.props {
            let _ = writeln!(svg, r##"<circle cx="{:.2}" cy="{:.2}" r="2" fill="#5a3d1e"/>"##, x + p.u * cell, y + p.v * cell);
        }
    }
    for (spawn, name, color) in [(layout.spawns[0], 'A', "#d33"), (layout.spawns[1], 'B', "#33d")] {
        let cx = MARGIN_UNITS + (spawn.col as f64 + 0.5) * cell;
        let cy = MARGIN_UNITS + (spawn.row as f64 + 0.5) * cell;
        let _ = writeln!(svg, r#"<circle cx="{cx}" cy="{cy}" r="10" fill="{color}"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{cx}" y="{}" font-size="12" text-anchor="middle" fill="white">{name}</text>"#,
            cy + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
