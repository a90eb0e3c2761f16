//! Real-coded GA: BLX-α crossover, Gaussian mutation and the 9-candidate,
//! 2-elite generational loop.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{gate_passes, EvalConfig};
use crate::map::{decode_with, extract_features_with, DecodeConfig, FeatureVector, MapGenome, MapLayout, GENOME_LEN};
use crate::rng::{stream, unit, KeyedRng};

pub const CANDIDATES: usize = 9;
pub const ELITES: usize = 2;
/// Redraws allowed for an offspring that fails the playability gate.
pub const GATE_RETRIES: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub blx_alpha: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    pub mutation_sigma: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub decode: DecodeConfig,
    pub eval: EvalConfig,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            blx_alpha: 0.5,
            mutation_rate: 0.05,
            mutation_sigma: 0.1,
            max_iterations: 10,
            seed: 0,
            decode: DecodeConfig::default(),
            eval: EvalConfig::default(),
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.into()));
        if !self.blx_alpha.is_finite() || self.blx_alpha < 0.0 {
            return bad("blx_alpha must be finite and non-negative");
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("mutation_rate must lie in [0, 1]");
        }
        if !self.mutation_sigma.is_finite() || self.mutation_sigma <= 0.0 {
            return bad("mutation_sigma must be finite and positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        self.decode.validate()?;
        self.eval.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: usize,
    pub genome: MapGenome,
    pub layout: MapLayout,
    pub features: FeatureVector,
    /// Set when the offspring still failed the playability gate after all redraws.
    #[serde(default)]
    pub gate_warning: bool,
}

impl Candidate {
    pub fn build(id: usize, genome: MapGenome, params: &GaParams) -> Result<Self> {
        let layout = decode_with(&genome, &params.decode)?;
        let features = extract_features_with(&layout, &params.eval);
        Ok(Self { id, genome, layout, features, gate_warning: false })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generation {
    pub index: usize,
    pub candidates: Vec<Candidate>,
    pub parent_ids: Option<[usize; 2]>,
}

impl Generation {
    pub fn candidate(&self, id: usize) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.id == id)
    }
}

/// Generation 0: every gene an independent uniform draw keyed by
/// `(seed, 0, candidate, gene)`.
pub fn init_population(params: &GaParams) -> Result<Generation> {
    params.validate()?;
    let candidates = (0..CANDIDATES)
        .into_par_iter()
        .map(|id| {
            let genes = (0..GENOME_LEN)
                .map(|g| unit(&[stream::INIT, params.seed, 0, id as u64, g as u64]))
                .collect();
            Candidate::build(id, MapGenome::new(genes)?, params)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Generation { index: 0, candidates, parent_ids: None })
}

/// BLX-α: each child gene is uniform on the parents' interval widened by
/// `alpha * |a - b|` on both sides, then clamped to `[0, 1]`.
pub fn blend_crossover<R: Rng + ?Sized>(a: &MapGenome, b: &MapGenome, alpha: f64, rng: &mut R) -> Result<MapGenome> {
    if a.len() != b.len() {
        return Err(Error::Encoding(format!("parent lengths differ: {} vs {}", a.len(), b.len())));
    }
    let genes = a
        .genes()
        .iter()
        .zip(b.genes())
        .map(|(&x, &y)| {
            let d = (x - y).abs();
            let lo = x.min(y) - alpha * d;
            let hi = x.max(y) + alpha * d;
            let u: f64 = rng.random();
            (lo + u * (hi - lo)).clamp(0.0, 1.0)
        })
        .collect();
    MapGenome::new(genes)
}

/// Adds `N(0, sigma²)` to each gene with probability `rate`, then clamps.
pub fn gaussian_mutate<R: Rng + ?Sized>(g: &MapGenome, rate: f64, sigma: f64, rng: &mut R) -> MapGenome {
    let noise = Normal::new(0.0, sigma).expect("sigma validated by GaParams");
    let genes = g
        .genes()
        .iter()
        .map(|&x| if rng.random::<f64>() < rate { (x + noise.sample(rng)).clamp(0.0, 1.0) } else { x })
        .collect();
    MapGenome::new(genes).expect("clamped genes stay valid")
}

fn check_selection(gen: &Generation, selected: [usize; 2]) -> Result<()> {
    let [a, b] = selected;
    if a == b {
        return Err(Error::Selection(format!("ids must be distinct, got ({a}, {b})")));
    }
    for id in selected {
        if gen.candidate(id).is_none() {
            return Err(Error::Selection(format!("no candidate {id} in generation {}", gen.index)));
        }
    }
    Ok(())
}

/// Steps the GA using the default keyed streams `(seed, generation, candidate, attempt)`.
pub fn next_generation(gen: &Generation, selected: [usize; 2], params: &GaParams) -> Result<Generation> {
    let seed = params.seed;
    next_generation_with(gen, selected, params, |index, id, attempt| {
        KeyedRng::new(&[stream::BREED, seed, index as u64, id as u64, attempt as u64])
    })
}

/// Elites keep ids 0 and 1 verbatim; ids 2..=8 are crossover + mutation
/// offspring of the two elites. An offspring failing the playability gate is
/// redrawn up to [`GATE_RETRIES`] times, then accepted with `gate_warning`.
///
/// `rng_for(next_index, candidate_id, attempt)` supplies the random stream
/// of every breeding attempt.
pub fn next_generation_with<R, F>(gen: &Generation, selected: [usize; 2], params: &GaParams, rng_for: F) -> Result<Generation>
where
    R: RngCore,
    F: Fn(usize, usize, u32) -> R + Sync,
{
    check_selection(gen, selected)?;
    let index = gen.index + 1;
    let elites = selected.map(|id| gen.candidate(id).expect("checked"));
    let mut candidates: Vec<Candidate> = elites
        .iter()
        .enumerate()
        .map(|(slot, e)| Candidate { id: slot, ..(*e).clone() })
        .collect();
    let offspring = (ELITES..CANDIDATES)
        .into_par_iter()
        .map(|id| {
            let mut attempt = 0;
            loop {
                let mut rng = rng_for(index, id, attempt);
                let child = blend_crossover(&elites[0].genome, &elites[1].genome, params.blx_alpha, &mut rng)?;
                let child = gaussian_mutate(&child, params.mutation_rate, params.mutation_sigma, &mut rng);
                let mut cand = Candidate::build(id, child, params)?;
                if gate_passes(&cand.layout, &params.eval) {
                    return Ok(cand);
                }
                if attempt == GATE_RETRIES {
                    cand.gate_warning = true;
                    return Ok(cand);
                }
                attempt += 1;
            }
        })
        .collect::<Result<Vec<_>>>()?;
    candidates.extend(offspring);
    Ok(Generation { index, candidates, parent_ids: Some(selected) })
}
