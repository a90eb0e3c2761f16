use serde::{Deserialize, Serialize};

use super::{GENES_PER_CELL, GENOME_LEN};
use crate::error::{Error, Result};

/// The GA chromosome: 4 genes per cell, row-major, every gene in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MapGenome(Vec<f64>);

impl MapGenome {
    pub fn new(genes: Vec<f64>) -> Result<Self> {
        if genes.len() != GENOME_LEN {
            return Err(Error::Encoding(format!(
                "genome has {} genes, expected {GENOME_LEN}",
                genes.len()
            )));
        }
        if let Some((i, g)) = genes.iter().enumerate().find(|(_, g)| !(0.0..=1.0).contains(*g)) {
            return Err(Error::Encoding(format!("gene {i} = {g} outside [0, 1]")));
        }
        Ok(Self(genes))
    }

    /// Clamps every gene into `[0, 1]` (NaN becomes 0). Length is still checked.
    pub fn clamped(genes: Vec<f64>) -> Result<Self> {
        let genes = genes
            .into_iter()
            .map(|g| if g.is_nan() { 0.0 } else { g.clamp(0.0, 1.0) })
            .collect();
        Self::new(genes)
    }

    pub fn filled(value: f64) -> Result<Self> {
        Self::new(vec![value; GENOME_LEN])
    }

    pub fn genes(&self) -> &[f64] {
        &self.0
    }

    /// The `(content, height, prefab, prop)` genes of one cell.
    pub fn cell_genes(&self, cell: usize) -> [f64; GENES_PER_CELL] {
        let base = cell * GENES_PER_CELL;
        [self.0[base], self.0[base + 1], self.0[base + 2], self.0[base + 3]]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for MapGenome {
    type Error = Error;

    fn try_from(genes: Vec<f64>) -> Result<Self> {
        Self::new(genes)
    }
}

impl From<MapGenome> for Vec<f64> {
    fn from(genome: MapGenome) -> Self {
        genome.0
    }
}
