use serde::{Deserialize, Serialize};

use super::{CellKind, MapLayout, CELL_COUNT, MAX_PROPS, MAX_STORIES};
use crate::eval::{cover_score, EvalConfig};

/// Scalar map features used by the intent classifier and simulated designers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub free_ratio: f64,
    pub street_ratio: f64,
    pub building_ratio: f64,
    /// Stories, averaged over building cells; 0 without buildings.
    pub mean_building_height: f64,
    /// Total props over the 1200-prop maximum.
    pub prop_count_norm: f64,
    pub mean_cover: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    FreeRatio,
    StreetRatio,
    BuildingRatio,
    MeanBuildingHeight,
    PropCountNorm,
    MeanCover,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; FeatureVector::LEN] = [
        Self::FreeRatio,
        Self::StreetRatio,
        Self::BuildingRatio,
        Self::MeanBuildingHeight,
        Self::PropCountNorm,
        Self::MeanCover,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl FeatureVector {
    pub const LEN: usize = 6;

    pub fn from_array(v: [f64; Self::LEN]) -> Self {
        Self {
            free_ratio: v[0],
            street_ratio: v[1],
            building_ratio: v[2],
            mean_building_height: v[3],
            prop_count_norm: v[4],
            mean_cover: v[5],
        }
    }

    pub fn as_array(&self) -> [f64; Self::LEN] {
        [
            self.free_ratio,
            self.street_ratio,
            self.building_ratio,
            self.mean_building_height,
            self.prop_count_norm,
            self.mean_cover,
        ]
    }

    pub fn get(&self, kind: FeatureKind) -> f64 {
        self.as_array()[kind.index()]
    }

    /// Features on a common `[0, 1]` scale (height divided by the story cap),
    /// the space all feature distances are measured in.
    pub fn normalized(&self) -> [f64; Self::LEN] {
        let mut v = self.as_array();
        v[FeatureKind::MeanBuildingHeight.index()] /= MAX_STORIES as f64;
        v
    }

    pub fn distance(&self, other: &FeatureVector) -> f64 {
        euclidean(&self.normalized(), &other.normalized())
    }

    pub fn is_valid(&self) -> bool {
        let v = self.as_array();
        let sum = self.free_ratio + self.street_ratio + self.building_ratio;
        v.iter().all(|x| x.is_finite())
            && (sum - 1.0).abs() <= 1e-9
            && [self.free_ratio, self.street_ratio, self.building_ratio, self.prop_count_norm, self.mean_cover]
                .iter()
                .all(|x| (0.0..=1.0).contains(x))
            && self.mean_building_height >= 0.0
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn extract_features(layout: &MapLayout) -> FeatureVector {
    extract_features_with(layout, &EvalConfig::default())
}

/// Cell-type ratios, building height, prop density and the mean cover score
/// over every 4th walkable cell in row-major order.
pub fn extract_features_with(layout: &MapLayout, config: &EvalConfig) -> FeatureVector {
    let n = CELL_COUNT as f64;
    let buildings: Vec<_> = layout.cells().iter().filter(|c| c.content == CellKind::Building).collect();
    let mean_building_height = if buildings.is_empty() {
        0.0
    } else {
        buildings.iter().map(|c| c.height_stories as f64).sum::<f64>() / buildings.len() as f64
    };
    let props: usize = layout.cells().iter().map(|c| c.props.len()).sum();
    let sampled: Vec<f64> = MapLayout::coords()
        .filter(|&c| layout.is_walkable(c))
        .step_by(4)
        .map(|c| cover_score(layout, c, config.n_rays, config.range_cells).expect("walkable origin"))
        .collect();
    let mean_cover = if sampled.is_empty() { 0.0 } else { sampled.iter().sum::<f64>() / sampled.len() as f64 };
    FeatureVector {
        free_ratio: layout.count(CellKind::Free) as f64 / n,
        street_ratio: layout.count(CellKind::Street) as f64 / n,
        building_ratio: buildings.len() as f64 / n,
        mean_building_height,
        prop_count_norm: props as f64 / (CELL_COUNT * MAX_PROPS) as f64,
        mean_cover,
    }
}
