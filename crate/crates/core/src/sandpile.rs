//! Sandpiles on a finite tiling window.
//!
//! Starting from the maximal stable configuration, one extra grain on a tile
//! sets off an avalanche whose first-toppling rounds trace the coronas of that
//! tile: a tile at graph distance `m` first topples in round `m + 1`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::dual::TilingWindow;
use crate::error::{Error, Result};
use crate::graph::{corona_sequence, neighbors, Patch};
use crate::multigrid::Crossing;

/// Toppled tiles must stay farther than this from the window boundary.
pub const BOUNDARY_MARGIN: usize = 2;

/// Grains per tile of a window, with the round at which each tile first toppled.
#[derive(Clone, Debug)]
pub struct SandpileConfig {
    tiles: Vec<Crossing>,
    index: HashMap<Crossing, usize>,
    adjacency: Vec<Vec<usize>>,
    /// Graph distance to the nearest tile missing a neighbor in the window.
    boundary_distance: Vec<usize>,
    grains: Vec<u32>,
    toppled_round: Vec<Option<usize>>,
    rounds_run: usize,
}

impl SandpileConfig {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn degree(&self, c: &Crossing) -> Option<usize> {
        self.index.get(c).map(|&k| self.adjacency[k].len())
    }

    pub fn grains(&self, c: &Crossing) -> Option<u32> {
        self.index.get(c).map(|&k| self.grains[k])
    }

    pub fn total_grains(&self) -> u64 {
        self.grains.iter().map(|&g| g as u64).sum()
    }

    pub fn toppled_round(&self, c: &Crossing) -> Option<usize> {
        self.index.get(c).and_then(|&k| self.toppled_round[k])
    }

    pub fn rounds_run(&self) -> usize {
        self.rounds_run
    }

    /// Tiles whose first toppling happened in a round `≤ round`.
    pub fn toppled_by(&self, round: usize) -> BTreeSet<Crossing> {
        self.tiles
            .iter()
            .zip(&self.toppled_round)
            .filter(|(_, r)| r.is_some_and(|r| r <= round))
            .map(|(c, _)| *c)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Crossing, u32)> {
        self.tiles.iter().zip(self.grains.iter().copied())
    }
}

/// Every tile holds one grain less than its number of neighbors in the window.
pub fn max_stable(window: &TilingWindow) -> Result<SandpileConfig> {
    let spec = window.spec();
    let tiles: Vec<Crossing> = window.tiles().keys().copied().collect();
    let index: HashMap<Crossing, usize> = tiles.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let mut adjacency = Vec::with_capacity(tiles.len());
    for c in &tiles {
        let ns = neighbors(spec, c)?;
        adjacency.push(ns.iter().filter_map(|n| index.get(n).copied()).collect::<Vec<_>>());
    }

    let mut boundary_distance = vec![usize::MAX; tiles.len()];
    let mut queue = VecDeque::new();
    for (k, adj) in adjacency.iter().enumerate() {
        if adj.len() < 4 {
            boundary_distance[k] = 0;
            queue.push_back(k);
        }
    }
    while let Some(k) = queue.pop_front() {
        for &n in &adjacency[k] {
            if boundary_distance[n] == usize::MAX {
                boundary_distance[n] = boundary_distance[k] + 1;
                queue.push_back(n);
            }
        }
    }

    let grains = adjacency.iter().map(|a| a.len().saturating_sub(1) as u32).collect();
    Ok(SandpileConfig {
        toppled_round: vec![None; tiles.len()],
        tiles,
        index,
        adjacency,
        boundary_distance,
        grains,
        rounds_run: 0,
    })
}

/// Adds one grain at `at` and runs `rounds` synchronous toppling rounds.
///
/// In each round every tile holding at least as many grains as neighbors
/// topples at once. Fails if a toppling tile comes within
/// [`BOUNDARY_MARGIN`] of the window boundary.
pub fn add_grain_and_topple(
    config: &SandpileConfig,
    at: &Crossing,
    rounds: usize,
) -> Result<SandpileConfig> {
    let mut cfg = config.clone();
    let &start = cfg
        .index
        .get(at)
        .ok_or_else(|| Error::NotInWindow(at.to_string()))?;
    if cfg.adjacency[start].len() < 4 {
        return Err(Error::InvalidArgument(format!("{at} is on the window boundary")));
    }
    cfg.grains[start] += 1;
    topple(&cfg, rounds)
}

/// Runs `rounds` further synchronous rounds without adding grains.
pub fn topple(config: &SandpileConfig, rounds: usize) -> Result<SandpileConfig> {
    let mut cfg = config.clone();
    for _ in 0..rounds {
        let round = cfg.rounds_run + 1;
        let toppling: Vec<usize> = (0..cfg.tiles.len())
            .filter(|&k| {
                let deg = cfg.adjacency[k].len();
                deg > 0 && cfg.grains[k] as usize >= deg
            })
            .collect();
        if toppling.iter().any(|&k| cfg.boundary_distance[k] <= BOUNDARY_MARGIN) {
            return Err(Error::BoundaryContamination(round));
        }
        for &k in &toppling {
            cfg.grains[k] -= cfg.adjacency[k].len() as u32;
            cfg.toppled_round[k].get_or_insert(round);
        }
        for &k in &toppling {
            for n in 0..cfg.adjacency[k].len() {
                let target = cfg.adjacency[k][n];
                cfg.grains[target] += 1;
            }
        }
        cfg.rounds_run = round;
    }
    Ok(cfg)
}

/// Comparison of toppling rounds with coronas of the seed tile.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceRow {
    pub round: usize,
    pub toppled: usize,
    pub corona_size: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub seed: Crossing,
    /// Tiles first-toppled by round `n + offset` are compared with `Pₙ`.
    pub offset: usize,
    pub rows: Vec<EquivalenceRow>,
}

impl EquivalenceReport {
    pub fn all_equal(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.equal)
    }
}

/// Runs the avalanche from `seed` and checks `toppled_by(n + 1) = Pₙ` for each round.
pub fn corona_equivalence(
    window: &TilingWindow,
    seed: &Crossing,
    rounds: usize,
) -> Result<EquivalenceReport> {
    let start = max_stable(window)?;
    let end = add_grain_and_topple(&start, seed, rounds)?;
    let seq = corona_sequence(window.spec(), &Patch::single(*seed), rounds.saturating_sub(1), usize::MAX)?;
    let rows = (1..=rounds)
        .map(|round| {
            let toppled = end.toppled_by(round);
            let corona: BTreeSet<Crossing> = seq.up_to(round - 1).copied().collect();
            EquivalenceRow {
                round,
                toppled: toppled.len(),
                corona_size: corona.len(),
                equal: toppled == corona,
            }
        })
        .collect();
    Ok(EquivalenceReport {
        seed: *seed,
        offset: 1,
        rows,
    })
}
