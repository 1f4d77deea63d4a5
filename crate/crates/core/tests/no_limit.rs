//! A tiling without a corona limit: vertical strips of 1×1 squares and of
//! 2×2 squares whose widths grow geometrically. Coronas cross a strip of
//! small squares at speed 1 and a strip of large squares at speed 2, so the
//! normalized reach keeps swinging instead of settling.
//!
//! This tiling is not edge-to-edge and not a multigrid dual; it is built here
//! on a unit-cell raster to show what the convergence tests rule out.

use std::collections::{HashMap, VecDeque};

/// (width, side of the squares) for each strip, left to right.
const STRIPS: [(i64, i64); 5] = [(4, 1), (16, 2), (64, 1), (256, 2), (8, 1)];
/// Half-height of the raster; paths that maximize horizontal reach stay level.
const HALF_HEIGHT: i64 = 8;

struct StripTiling {
    /// Tile id of each unit cell `(x, y)`.
    cell: HashMap<(i64, i64), usize>,
    /// Right edge of each tile.
    right: Vec<i64>,
}

fn build() -> StripTiling {
    let mut cell = HashMap::new();
    let mut right = Vec::new();
    let mut x0 = 0;
    for (width, side) in STRIPS {
        for x in (x0..x0 + width).step_by(side as usize) {
            for y in (-HALF_HEIGHT..HALF_HEIGHT).step_by(side as usize) {
                let id = right.len();
                right.push(x + side);
                for dx in 0..side {
                    for dy in 0..side {
                        cell.insert((x + dx, y + dy), id);
                    }
                }
            }
        }
        x0 += width;
    }
    StripTiling { cell, right }
}

/// Rightmost tile edge reached by the `n`-th corona, for every `n` up to `n_max`.
fn reach(t: &StripTiling, n_max: usize) -> Vec<i64> {
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); t.right.len()];
    for (&(x, y), &id) in &t.cell {
        for (dx, dy) in [(1, 0), (0, 1)] {
            if let Some(&other) = t.cell.get(&(x + dx, y + dy)) {
                if other != id && !adjacency[id].contains(&other) {
                    adjacency[id].push(other);
                    adjacency[other].push(id);
                }
            }
        }
    }
    let seed = t.cell[&(0, 0)];
    let mut dist = vec![usize::MAX; t.right.len()];
    dist[seed] = 0;
    let mut queue = VecDeque::from([seed]);
    let mut out = vec![0; n_max + 1];
    while let Some(id) = queue.pop_front() {
        let d = dist[id];
        if d > n_max {
            break;
        }
        out[d] = out[d].max(t.right[id]);
        for &m in &adjacency[id] {
            if dist[m] == usize::MAX {
                dist[m] = d + 1;
                queue.push_back(m);
            }
        }
    }
    for n in 1..=n_max {
        out[n] = out[n].max(out[n - 1]);
    }
    out
}

#[test]
fn normalized_reach_oscillates() {
    let t = build();
    let r = reach(&t, 210);
    let speed = |n: usize| r[n] as f64 / n as f64;
    // n = 76 ends the second small-square strip, n = 204 the second large one
    assert!(speed(76) < 1.15, "{}", speed(76));
    assert!(speed(204) > 1.6, "{}", speed(204));
    // the swing does not shrink with n, so Pₙ/n has no Hausdorff limit
    assert!(speed(12) - speed(76) > 0.5 && speed(204) - speed(76) > 0.5);
}
