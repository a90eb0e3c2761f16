//! Map encoding: the real-coded genome, the decoded cell grid, connectivity
//! repair, feature extraction and the level interchange formats.

mod decode;
pub(crate) mod features;
mod genome;
mod layout;
pub mod level;
mod repair;

pub use decode::{decode, decode_with, DecodeConfig};
pub use features::{extract_features, extract_features_with, FeatureKind, FeatureVector};
pub use genome::MapGenome;
pub use layout::{Cell, CellKind, Coord, MapLayout, PropKind, PropPlacement};
pub use repair::{repair, street_components};

/// Side of the square level canvas, in world units.
pub const CANVAS_UNITS: u32 = 512;
/// Side of one street/building section, in world units.
pub const CELL_UNITS: u32 = 25;
/// Cells per grid side (`512 / 25`, the fractional remainder is an inert margin).
pub const GRID_SIDE: usize = (CANVAS_UNITS / CELL_UNITS) as usize;
pub const CELL_COUNT: usize = GRID_SIDE * GRID_SIDE;
/// Genes per cell: content, height, prefab, prop density.
pub const GENES_PER_CELL: usize = 4;
pub const GENOME_LEN: usize = CELL_COUNT * GENES_PER_CELL;
pub const PREFAB_COUNT: u8 = 12;
pub const MAX_STORIES: u8 = 6;
pub const MAX_PROPS: usize = 3;
/// Margin between the active grid and the canvas edge, per side.
pub const MARGIN_UNITS: f64 = (CANVAS_UNITS - CELL_UNITS * GRID_SIDE as u32) as f64 / 2.0;
