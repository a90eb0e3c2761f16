//! Simulated designers and the batch experiment measuring how many selection
//! rounds the intent agent saves the designer.

use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evo::{GaParams, Generation};
use crate::intent::AgentPolicy;
use crate::map::{decode_with, extract_features_with, FeatureVector, MapGenome, GENES_PER_CELL, GENOME_LEN};
use crate::rng::{stream, unit, KeyedRng};
use crate::session::{Session, Status, Turn};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignerProfile {
    pub target: FeatureVector,
    /// Std-dev of the Gaussian noise added to each perceived distance.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl DesignerProfile {
    pub fn new(target: FeatureVector, noise_sigma: f64, seed: u64) -> Result<Self> {
        if !target.is_valid() {
            return Err(Error::Config(format!("invalid designer target {target:?}")));
        }
        if !noise_sigma.is_finite() || noise_sigma < 0.0 {
            return Err(Error::Config("noise_sigma must be finite and non-negative".into()));
        }
        Ok(Self { target, noise_sigma, seed })
    }

    /// A designer whose taste is an attainable but non-random map: each gene
    /// kind is drawn around its own style centre, then decoded.
    pub fn with_style(seed: u64, noise_sigma: f64, style: &StyleSpec, params: &GaParams) -> Result<Self> {
        let centers: Vec<f64> = (0..GENES_PER_CELL as u64)
            .map(|k| 0.5 + style.center_spread * (2.0 * unit(&[stream::STYLE, seed, k]) - 1.0))
            .collect();
        let mut rng = KeyedRng::new(&[stream::STYLE, seed, u64::MAX]);
        let genes = (0..GENOME_LEN)
            .map(|i| {
                let z: f64 = StandardNormal.sample(&mut rng);
                (centers[i % GENES_PER_CELL] + style.gene_sigma * z).clamp(0.0, 1.0)
            })
            .collect();
        let layout = decode_with(&MapGenome::new(genes)?, &params.decode)?;
        Self::new(extract_features_with(&layout, &params.eval), noise_sigma, seed)
    }

    /// Noise-free feature distance to the target.
    pub fn true_distance(&self, f: &FeatureVector) -> f64 {
        f.distance(&self.target)
    }
}

/// The designer's two picks: lowest perceived distance (true distance plus
/// per-candidate noise keyed by generation and id), ties by id.
pub fn simulated_select(profile: &DesignerProfile, gen: &Generation) -> Result<[usize; 2]> {
    if gen.candidates.len() < 2 {
        return Err(Error::Selection(format!("generation {} has fewer than 2 candidates", gen.index)));
    }
    let noise = (profile.noise_sigma > 0.0).then(|| Normal::new(0.0, profile.noise_sigma).expect("validated"));
    let mut scored: Vec<(f64, usize)> = gen
        .candidates
        .iter()
        .map(|c| {
            let mut d = profile.true_distance(&c.features);
            if let Some(noise) = &noise {
                let mut rng = KeyedRng::new(&[stream::DESIGNER, profile.seed, gen.index as u64, c.id as u64]);
                d += noise.sample(&mut rng);
            }
            (d, c.id)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok([scored[0].1, scored[1].1])
}

/// How far simulated designers' tastes sit from an unbiased random map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StyleSpec {
    /// Per-gene-kind centres are drawn from `0.5 ± center_spread`.
    pub center_spread: f64,
    pub gene_sigma: f64,
}

impl Default for StyleSpec {
    fn default() -> Self {
        Self { center_spread: 0.05, gene_sigma: 0.28 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seeds: Vec<u64>,
    /// Arms to run: `true` is assist on.
    pub arms: Vec<bool>,
    pub max_iterations: usize,
    pub noise_sigma: f64,
    /// A run converges once its best candidate is this close to the target.
    pub epsilon: f64,
    pub policy: AgentPolicy,
    pub style: StyleSpec,
    /// GA settings; `seed` and `max_iterations` are overridden per run.
    pub ga: GaParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seeds: (1..=20).collect(),
            arms: vec![false, true],
            max_iterations: 10,
            noise_sigma: 0.02,
            epsilon: 0.05,
            policy: AgentPolicy::default(),
            style: StyleSpec::default(),
            ga: GaParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.into()));
        if self.seeds.is_empty() {
            return bad("at least one seed is required");
        }
        if self.arms.is_empty() {
            return bad("at least one arm is required");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return bad("noise must be finite and non-negative");
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return bad("epsilon must be finite and non-negative");
        }
        self.policy.validate()?;
        self.ga.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub assist: bool,
    pub human_rounds: usize,
    pub generations: usize,
    pub final_distance: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmSummary {
    pub assist: bool,
    pub runs: usize,
    pub median_human_rounds: f64,
    pub median_generations: f64,
    pub median_final_distance: f64,
    pub converged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub runs: Vec<RunRecord>,
    pub arms: Vec<ArmSummary>,
}

impl ExperimentResult {
    pub fn arm(&self, assist: bool) -> Option<&ArmSummary> {
        self.arms.iter().find(|a| a.assist == assist)
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn best_distance(profile: &DesignerProfile, gen: &Generation) -> f64 {
    gen.candidates.iter().map(|c| profile.true_distance(&c.features)).fold(f64::INFINITY, f64::min)
}

/// One full designer loop for `(seed, arm)`.
pub fn run_single(config: &ExperimentConfig, seed: u64, assist: bool) -> Result<RunRecord> {
    let params = GaParams { seed, max_iterations: config.max_iterations, ..config.ga };
    let policy = if assist { config.policy } else { AgentPolicy { assist_ratio: 0.0, ..config.policy } };
    let profile = DesignerProfile::with_style(seed, config.noise_sigma, &config.style, &params)?;
    let mut session = Session::new(format!("run-{seed}-{assist}"), params, policy)?;
    let converged = loop {
        if best_distance(&profile, &session.current) <= config.epsilon {
            break true;
        }
        match session.turn() {
            Turn::Finished => break false,
            Turn::Agent => {
                session.apply_agent()?;
            }
            Turn::Human => {
                let pick = simulated_select(&profile, &session.current)?;
                session.apply_human(pick)?;
            }
        }
    };
    debug_assert!(converged || session.status == Status::Finished);
    Ok(RunRecord {
        seed,
        assist,
        human_rounds: session.human_rounds(),
        generations: session.current.index,
        final_distance: best_distance(&profile, &session.current),
        converged,
    })
}

/// Runs every `(seed, arm)` pair, in parallel, in a deterministic output order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let jobs: Vec<(u64, bool)> = config.seeds.iter().flat_map(|&s| config.arms.iter().map(move |&a| (s, a))).collect();
    let runs = jobs
        .into_par_iter()
        .map(|(seed, assist)| run_single(config, seed, assist))
        .collect::<Result<Vec<_>>>()?;
    let mut arms = Vec::new();
    for &assist in &config.arms {
        if arms.iter().any(|a: &ArmSummary| a.assist == assist) {
            continue;
        }
        let mine: Vec<&RunRecord> = runs.iter().filter(|r| r.assist == assist).collect();
        let col = |f: fn(&RunRecord) -> f64| median(&mine.iter().map(|r| f(r)).collect::<Vec<_>>());
        arms.push(ArmSummary {
            assist,
            runs: mine.len(),
            median_human_rounds: col(|r| r.human_rounds as f64),
            median_generations: col(|r| r.generations as f64),
            median_final_distance: col(|r| r.final_distance),
            converged: mine.iter().filter(|r| r.converged).count(),
        });
    }
    Ok(ExperimentResult { runs, arms })
}

#[derive(Serialize)]
struct CsvRow {
    seed: u64,
    assist: &'static str,
    human_rounds: usize,
    generations: usize,
    final_distance: f64,
}

/// Header `seed,assist,human_rounds,generations,final_distance`, one row per run.
pub fn write_csv<W: Write>(runs: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in runs {
        w.serialize(CsvRow {
            seed: r.seed,
            assist: if r.assist { "on" } else { "off" },
            human_rounds: r.human_rounds,
            generations: r.generations,
            final_distance: r.final_distance,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Random draws used by tests and tools that need synthetic designers.
pub fn random_target<R: Rng + ?Sized>(rng: &mut R) -> FeatureVector {
    let raw: [f64; 3] = [rng.random::<f64>() + 1e-3, rng.random::<f64>() + 1e-3, rng.random::<f64>() + 1e-3];
    let sum: f64 = raw.iter().sum();
    FeatureVector {
        free_ratio: raw[0] / sum,
        street_ratio: raw[1] / sum,
        building_ratio: 1.0 - raw[0] / sum - raw[1] / sum,
        mean_building_height: rng.random_range(0.0..6.0),
        prop_count_norm: rng.random(),
        mean_cover: rng.random(),
    }
}
