//! Independent reference implementations used as test oracles. None of these
//! call into the code paths they check.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use ufg_core::map::{Cell, CellKind, Coord, MapGenome, MapLayout, PropKind, PropPlacement, GENOME_LEN};
use ufg_core::rng::KeyedRng;

pub const N: usize = 20;

pub fn random_genome(seed: u64) -> MapGenome {
    let mut rng = KeyedRng::new(&[0xDEC0DE, seed]);
    MapGenome::new((0..GENOME_LEN).map(|_| rng.random()).collect()).unwrap()
}

/// Straight-line per-gene content rule, before any repair.
pub fn reference_kinds(genome: &MapGenome) -> Vec<CellKind> {
    let g = genome.genes();
    let mut kinds = Vec::new();
    let mut i = 0;
    while i < g.len() {
        let c = g[i];
        let kind = if c < 0.25 {
            CellKind::Street
        } else if c < 0.55 {
            CellKind::Building
        } else {
            CellKind::Free
        };
        kinds.push(kind);
        i += 4;
    }
    kinds
}

/// Random raw grid (no repair), biased so pockets and corridors appear.
pub fn random_raw_layout(seed: u64, building_p: f64, prop_p: f64) -> MapLayout {
    let mut rng = KeyedRng::new(&[0x5EED, seed]);
    let cells = (0..N * N)
        .map(|_| {
            let r: f64 = rng.random();
            if r < building_p {
                Cell::building(rng.random_range(1..=6))
            } else if r < building_p + (1.0 - building_p) / 2.0 {
                Cell::street()
            } else {
                let mut cell = Cell::free();
                if rng.random::<f64>() < prop_p {
                    let n = rng.random_range(1..=3);
                    cell.props = (0..n)
                        .map(|_| PropPlacement { kind: PropKind::Plant, u: rng.random(), v: rng.random() })
                        .collect();
                }
                cell
            }
        })
        .collect();
    MapLayout::from_cells(cells).unwrap()
}

fn flood(n_cells: usize, start: usize, open: &dyn Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; n_cells];
    let mut q = VecDeque::new();
    seen[start] = true;
    q.push_back(start);
    while let Some(i) = q.pop_front() {
        let (r, c) = (i / N, i % N);
        let mut next = Vec::new();
        if r > 0 {
            next.push(i - N);
        }
        if r + 1 < N {
            next.push(i + N);
        }
        if c > 0 {
            next.push(i - 1);
        }
        if c + 1 < N {
            next.push(i + 1);
        }
        for j in next {
            if !seen[j] && open(j) {
                seen[j] = true;
                q.push_back(j);
            }
        }
    }
    seen
}

/// Number of 4-connected components among cells satisfying `open`.
pub fn count_components(open: &dyn Fn(usize) -> bool) -> usize {
    let mut done = vec![false; N * N];
    let mut count = 0;
    for i in 0..N * N {
        if done[i] || !open(i) {
            continue;
        }
        count += 1;
        for (j, s) in flood(N * N, i, open).into_iter().enumerate() {
            if s {
                done[j] = true;
            }
        }
    }
    count
}

pub fn street_component_count(layout: &MapLayout) -> usize {
    count_components(&|i| layout.cells()[i].content == CellKind::Street)
}

pub fn walkable(layout: &MapLayout, i: usize) -> bool {
    matches!(layout.cells()[i].content, CellKind::Street | CellKind::Free)
}

pub fn reachable(layout: &MapLayout, a: Coord, b: Coord) -> bool {
    let ia = a.row * N + a.col;
    walkable(layout, ia) && flood(N * N, ia, &|i| walkable(layout, i))[b.row * N + b.col]
}

/// Articulation points by deleting each walkable cell and recounting.
pub fn brute_force_cut_cells(layout: &MapLayout) -> Vec<Coord> {
    let base = count_components(&|i| walkable(layout, i));
    (0..N * N)
        .filter(|&x| walkable(layout, x))
        .filter(|&x| count_components(&|i| i != x && walkable(layout, i)) > base)
        .map(|x| Coord::new(x / N, x % N))
        .collect()
}

fn blocks(cell: &Cell) -> bool {
    cell.content == CellKind::Building || (cell.content == CellKind::Free && cell.props.len() >= 2)
}

/// Marches along the ray in 0.01-cell steps and reports the first blocking cell.
pub fn march_ray(layout: &MapLayout, origin: Coord, angle: f64, range: usize) -> Option<Coord> {
    let (x0, y0) = (origin.col as f64 + 0.5, origin.row as f64 + 0.5);
    let steps = range * 100;
    for k in 1..=steps {
        let t = k as f64 * 0.01;
        let (x, y) = (x0 + t * angle.cos(), y0 + t * angle.sin());
        if x < 0.0 || y < 0.0 || x >= N as f64 || y >= N as f64 {
            return None;
        }
        let at = Coord::new(y.floor() as usize, x.floor() as usize);
        if at != origin && blocks(layout.cell(at)) {
            return Some(at);
        }
    }
    None
}

pub fn march_cover(layout: &MapLayout, origin: Coord, n_rays: usize, range: usize) -> f64 {
    let hits = (0..n_rays)
        .filter(|&k| march_ray(layout, origin, std::f64::consts::TAU * k as f64 / n_rays as f64, range).is_some())
        .count();
    hits as f64 / n_rays as f64
}

/// Gain ratio from raw counts with natural logs.
pub fn brute_gain_ratio(left: (usize, usize), right: (usize, usize)) -> f64 {
    let h = |a: usize, b: usize| {
        let t = (a + b) as f64;
        [a, b].iter().filter(|&&x| x > 0).map(|&x| -(x as f64 / t) * (x as f64 / t).ln()).sum::<f64>()
    };
    let nl = (left.0 + left.1) as f64;
    let nr = (right.0 + right.1) as f64;
    let n = nl + nr;
    let gain = h(left.0 + right.0, left.1 + right.1) - nl / n * h(left.0, left.1) - nr / n * h(right.0, right.1);
    let split = -(nl / n) * (nl / n).ln() - (nr / n) * (nr / n).ln();
    gain / split
}

/// Every candidate split of `(features, preferred)` rows:
/// `(feature, threshold, gain_ratio)` with midpoint thresholds.
pub fn enumerate_splits(rows: &[([f64; 6], bool)]) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::new();
    for f in 0..6 {
        let values: BTreeSet<u64> = rows.iter().map(|r| r.0[f].to_bits()).collect();
        let mut sorted: Vec<f64> = values.into_iter().map(f64::from_bits).collect();
        sorted.sort_by(f64::total_cmp);
        for w in sorted.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let count = |pred: &dyn Fn(f64) -> bool, label: bool| rows.iter().filter(|r| pred(r.0[f]) && r.1 == label).count();
            let left = (count(&|v| v <= t, true), count(&|v| v <= t, false));
            let right = (count(&|v| v > t, true), count(&|v| v > t, false));
            out.push((f, t, brute_gain_ratio(left, right)));
        }
    }
    out
}
