mod common;

use std::f64::consts::TAU;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use ufg_core::eval::{cast_ray, cover_score};
use ufg_core::evo::{init_population, next_generation, GaParams};
use ufg_core::intent::{agent_select, classify, should_agent_act, train, AgentPolicy, Label, TrainingSample};
use ufg_core::map::{decode, extract_features, Cell, CellKind, Coord, FeatureVector, MapGenome, MapLayout, GENOME_LEN};
use ufg_core::rng::KeyedRng;

fn rotate(c: Coord) -> Coord {
    Coord::new(c.col, N - 1 - c.row)
}

/// Random points labelled by a hidden rule: one or two axis thresholds.
fn separable_samples(seed: u64, n: usize) -> Vec<TrainingSample> {
    let mut rng = KeyedRng::new(&[0xC0, seed]);
    let (f1, f2) = (rng.random_range(0..6), rng.random_range(0..6));
    let (t1, t2): (f64, f64) = (rng.random_range(0.2..0.8), rng.random_range(0.2..0.8));
    let conjunction = rng.random::<bool>();
    (0..n)
        .map(|_| {
            let x: [f64; 6] = std::array::from_fn(|_| rng.random());
            let preferred = x[f1] > t1 && (!conjunction || x[f2] <= t2);
            let label = if preferred { Label::Preferred } else { Label::Rejected };
            TrainingSample { features: FeatureVector::from_array(x), label, generation: 0 }
        })
        .collect()
}

/// Random points with random labels (consistent: values are continuous and distinct).
fn noisy_samples(seed: u64, n: usize) -> Vec<TrainingSample> {
    let mut rng = KeyedRng::new(&[0xC1, seed]);
    (0..n)
        .map(|_| {
            let x: [f64; 6] = std::array::from_fn(|_| rng.random());
            let label = if rng.random::<f64>() < 0.3 { Label::Preferred } else { Label::Rejected };
            TrainingSample { features: FeatureVector::from_array(x), label, generation: 0 }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decode_is_pure(seed in any::<u64>()) {
        let g = random_genome(seed);
        let a = serde_json::to_string(&decode(&g).unwrap()).unwrap();
        let b = serde_json::to_string(&decode(&g.clone()).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clamped_decode_is_total(seed in any::<u64>(), scale in 0.5f64..50.0) {
        let mut rng = KeyedRng::new(&[seed]);
        let raw: Vec<f64> = (0..GENOME_LEN).map(|_| (rng.random::<f64>() - 0.5) * scale).collect();
        let layout = decode(&MapGenome::clamped(raw).unwrap()).unwrap();
        prop_assert!(layout.validate().is_ok());
    }

    #[test]
    fn decoded_streets_connected_and_spawns_reachable(seed in any::<u64>()) {
        let layout = decode(&random_genome(seed)).unwrap();
        prop_assert_eq!(street_component_count(&layout), 1);
        prop_assert!(reachable(&layout, layout.spawns[0], layout.spawns[1]));
        let f = extract_features(&layout);
        prop_assert!((f.free_ratio + f.street_ratio + f.building_ratio - 1.0).abs() <= 1e-9);
        prop_assert!(f.is_valid());
    }

    #[test]
    fn content_genes_zero_to_one_move_street_to_free(seed in any::<u64>()) {
        let base = random_genome(seed);
        let with_content = |v: f64| {
            let genes = base.genes().iter().enumerate().map(|(i, &g)| if i % 4 == 0 { v } else { g }).collect();
            decode(&MapGenome::new(genes).unwrap()).unwrap()
        };
        let low = with_content(0.0);
        let high = with_content(1.0);
        prop_assert!(low.cells().iter().all(|c| c.content == CellKind::Street));
        for at in MapLayout::coords() {
            if !high.repair_log.contains(&at) {
                prop_assert_eq!(high.cell(at).content, CellKind::Free);
            }
        }
    }

    #[test]
    fn ray_rotation_symmetry(seed in 0u64..10_000, k in 0usize..16) {
        let layout = random_raw_layout(seed, 0.2, 0.4);
        let rotated = layout.rotated_clockwise();
        let open: Vec<Coord> = MapLayout::coords().filter(|&c| layout.is_walkable(c)).collect();
        prop_assume!(!open.is_empty());
        let origin = open[(seed as usize) % open.len()];
        let angle = TAU * k as f64 / 16.0;
        let hit = cast_ray(&layout, origin, angle, 8).unwrap().map(|h| h.cell);
        let turned = cast_ray(&rotated, rotate(origin), angle + TAU / 4.0, 8).unwrap().map(|h| h.cell);
        prop_assert_eq!(hit.map(rotate), turned);
    }

    #[test]
    fn removing_a_building_never_adds_cover(seed in 0u64..10_000) {
        let layout = random_raw_layout(seed, 0.3, 0.3);
        let buildings: Vec<Coord> = MapLayout::coords().filter(|&c| layout.cell(c).content == CellKind::Building).collect();
        prop_assume!(!buildings.is_empty());
        let mut cleared = layout.clone();
        cleared.set_cell(buildings[(seed as usize) % buildings.len()], Cell::free());
        for at in MapLayout::coords().filter(|&c| layout.is_walkable(c)) {
            prop_assert!(cover_score(&cleared, at, 16, 8).unwrap() <= cover_score(&layout, at, 16, 8).unwrap());
        }
    }

    #[test]
    fn training_fits_separable_data(seed in any::<u64>(), n in 2usize..=64) {
        let samples = separable_samples(seed, n);
        let tree = train(&samples).unwrap();
        prop_assert!(tree.root.depth() <= 8);
        for s in &samples {
            prop_assert_eq!(classify(&tree, &s.features).0, s.label);
        }
    }

    #[test]
    fn training_ignores_sample_order(seed in any::<u64>(), n in 9usize..40, rot in 0usize..40) {
        let samples = noisy_samples(seed, n);
        let mut shuffled = samples.clone();
        shuffled.rotate_left(rot % n);
        shuffled.reverse();
        prop_assert_eq!(train(&samples).unwrap(), train(&shuffled).unwrap());
    }

    #[test]
    fn feature_scaling_keeps_labels(seed in any::<u64>(), feature in 0usize..6, scale in 0.01f64..100.0) {
        let samples = noisy_samples(seed, 30);
        let scaled = |f: &FeatureVector| {
            let mut x = f.as_array();
            x[feature] *= scale;
            FeatureVector::from_array(x)
        };
        let scaled_samples: Vec<_> = samples.iter().map(|s| TrainingSample { features: scaled(&s.features), ..*s }).collect();
        let a = train(&samples).unwrap();
        let b = train(&scaled_samples).unwrap();
        let queries = noisy_samples(seed ^ 0xFFFF, 50);
        for q in queries.iter().chain(&samples) {
            prop_assert_eq!(classify(&a, &q.features).0, classify(&b, &scaled(&q.features)).0);
        }
    }

    #[test]
    fn agent_pair_is_distinct_and_order_free(seed in 0u64..500) {
        let gen = init_population(&GaParams { seed, ..Default::default() }).unwrap();
        let samples: Vec<TrainingSample> = gen.candidates.iter().map(|c| TrainingSample {
            features: c.features,
            label: if c.id % 4 == 1 { Label::Preferred } else { Label::Rejected },
            generation: 0,
        }).collect();
        let tree = train(&samples).unwrap();
        let pick = agent_select(&tree, &gen).unwrap();
        prop_assert_ne!(pick[0], pick[1]);
        let mut reordered = gen.clone();
        reordered.candidates.reverse();
        prop_assert_eq!(agent_select(&tree, &reordered).unwrap(), pick);
    }

    #[test]
    fn elitism_and_gene_bounds(seed in 0u64..500, a in 0usize..9, b in 0usize..9) {
        prop_assume!(a != b);
        let params = GaParams { seed, ..Default::default() };
        let g0 = init_population(&params).unwrap();
        let g1 = next_generation(&g0, [a, b], &params).unwrap();
        prop_assert_eq!(&g1.candidates[0].genome, &g0.candidates[a].genome);
        prop_assert_eq!(&g1.candidates[1].genome, &g0.candidates[b].genome);
        prop_assert!(g1.candidates.iter().all(|c| c.genome.genes().iter().all(|g| (0.0..=1.0).contains(g))));
    }

    #[test]
    fn assist_never_adds_human_rounds(warmup in 1usize..6, ratio in 0.0f64..=1.0, generations in 0usize..40) {
        let policy = AgentPolicy { warmup_generations: warmup, assist_ratio: ratio };
        let mut samples = 0;
        let mut human = 0;
        for g in 0..generations {
            if !should_agent_act(&policy, g, samples) {
                human += 1;
                samples += 9;
            }
        }
        prop_assert!(human <= generations);
        prop_assert_eq!(human.min(warmup), warmup.min(generations));
    }
}
