use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    repair, Cell, CellKind, MapGenome, MapLayout, PropKind, PropPlacement, CELL_COUNT, MAX_PROPS,
    MAX_STORIES, PREFAB_COUNT,
};
use crate::error::{Error, Result};
use crate::rng::{stream, KeyedRng};

/// Content-gene thresholds: `c < street_below` is street, `c < building_below`
/// is building, anything else is free space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecodeConfig {
    pub street_below: f64,
    pub building_below: f64,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self { street_below: 0.25, building_below: 0.55 }
    }
}

impl DecodeConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.street_below.is_finite()
            && self.building_below.is_finite()
            && 0.0 <= self.street_below
            && self.street_below <= self.building_below
            && self.building_below <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("bad content thresholds {self:?}")))
        }
    }
}

fn scaled_index(gene: f64, buckets: usize) -> usize {
    ((gene * buckets as f64).floor() as usize).min(buckets - 1)
}

fn decode_props(cell: usize, gene: f64) -> Vec<PropPlacement> {
    let count = ((gene * 4.0).floor() as usize).min(MAX_PROPS);
    let quantized = (gene * (1u64 << 32) as f64) as u64;
    let mut rng = KeyedRng::new(&[stream::PROPS, cell as u64, quantized]);
    (0..count)
        .map(|_| PropPlacement {
            kind: PropKind::ALL[rng.random_range(0..PropKind::ALL.len())],
            u: rng.random(),
            v: rng.random(),
        })
        .collect()
}

pub fn decode(genome: &MapGenome) -> Result<MapLayout> {
    decode_with(genome, &DecodeConfig::default())
}

/// Decodes a genome into a repaired layout with spawns placed. Pure: the
/// genome alone determines the result, prop sub-positions included.
pub fn decode_with(genome: &MapGenome, config: &DecodeConfig) -> Result<MapLayout> {
    // Re-check: the genome may have been built by hand through serde paths.
    let genome = MapGenome::new(genome.genes().to_vec())?;
    let cells = (0..CELL_COUNT)
        .map(|i| {
            let [content, height, prefab, props] = genome.cell_genes(i);
            let content = if content < config.street_below {
                CellKind::Street
            } else if content < config.building_below {
                CellKind::Building
            } else {
                CellKind::Free
            };
            Cell {
                content,
                height_stories: 1 + scaled_index(height, MAX_STORIES as usize) as u8,
                prefab_index: scaled_index(prefab, PREFAB_COUNT as usize) as u8,
                props: if content == CellKind::Free { decode_props(i, props) } else { Vec::new() },
            }
        })
        .collect();
    let mut layout = repair(MapLayout::from_cells(cells)?);
    layout.place_spawns();
    Ok(layout)
}
