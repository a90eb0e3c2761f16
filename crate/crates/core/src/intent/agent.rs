use serde::{Deserialize, Serialize};

use super::{classify, DecisionTree};
use crate::error::{Error, Result};
use crate::evo::{Generation, CANDIDATES};
use crate::map::features::euclidean;

/// When the intent agent takes a selection round instead of the designer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentPolicy {
    /// Human rounds before the agent may act.
    pub warmup_generations: usize,
    /// Share of post-warmup rounds handled by the agent.
    pub assist_ratio: f64,
}

impl Default for AgentPolicy {
    fn default() -> Self {
        Self { warmup_generations: 3, assist_ratio: 0.5 }
    }
}

impl AgentPolicy {
    /// Designer-only policy.
    pub fn off() -> Self {
        Self { assist_ratio: 0.0, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.warmup_generations < 1 {
            return Err(Error::Config("warmup_generations must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.assist_ratio) {
            return Err(Error::Config("assist_ratio must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Whether the agent selects in round `generation_index`.
///
/// Never during warmup (fewer than `9 * warmup` samples); afterwards an
/// accumulator of `assist_ratio` fires whenever its ceiling steps up, so
/// 0.5 alternates agent/human starting with the agent.
pub fn should_agent_act(policy: &AgentPolicy, generation_index: usize, samples: usize) -> bool {
    let warmup = policy.warmup_generations;
    if generation_index < warmup || samples < CANDIDATES * warmup {
        return false;
    }
    let k = (generation_index - warmup) as f64;
    let r = policy.assist_ratio;
    ((k + 1.0) * r).ceil() > (k * r).ceil()
}

/// Two candidates ranked by preferred-confidence, then by closeness to the
/// preferred centroid, then by id.
pub fn agent_select(tree: &DecisionTree, gen: &Generation) -> Result<[usize; 2]> {
    if gen.candidates.len() < 2 {
        return Err(Error::Selection(format!("generation {} has fewer than 2 candidates", gen.index)));
    }
    let mut ranked: Vec<(f64, f64, usize)> = gen
        .candidates
        .iter()
        .map(|c| {
            let (_, confidence) = classify(tree, &c.features);
            let distance = tree
                .preferred_centroid
                .map_or(0.0, |centroid| euclidean(&c.features.normalized(), &centroid));
            (confidence, distance, c.id)
        })
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    Ok([ranked[0].2, ranked[1].2])
}
