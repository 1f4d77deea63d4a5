//! The multigrid as an infinite graph: crossings are vertices, consecutive
//! crossings along a line are edges. It is also the tile adjacency graph of
//! the dual tiling.
//!
//! Nothing is materialized up front; neighbors are computed on demand.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::multigrid::{walk_from, Crossing, CrossingKey, Direction, MultigridSpec};

/// Default cap on the number of crossings a single exploration may visit.
pub const DEFAULT_MAX_CROSSINGS: usize = 5_000_000;

/// The four neighbors of `c`: forward and backward along `c.a`, then along `c.b`.
pub fn neighbors(spec: &MultigridSpec, c: &Crossing) -> Result<[Crossing; 4]> {
    Ok([
        walk_from(spec, c.a, c, Direction::Forward, 1)?,
        walk_from(spec, c.a, c, Direction::Backward, 1)?,
        walk_from(spec, c.b, c, Direction::Forward, 1)?,
        walk_from(spec, c.b, c, Direction::Backward, 1)?,
    ])
}

/// A finite connected set of crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    crossings: BTreeSet<Crossing>,
}

impl Patch {
    /// Validates non-emptiness and connectivity.
    pub fn new(spec: &MultigridSpec, crossings: impl IntoIterator<Item = Crossing>) -> Result<Self> {
        let crossings: BTreeSet<Crossing> = crossings.into_iter().collect();
        let Some(first) = crossings.first().copied() else {
            return Err(Error::EmptyPatch);
        };
        let mut seen = HashSet::from([first.key()]);
        let mut queue = VecDeque::from([first]);
        while let Some(c) = queue.pop_front() {
            for n in neighbors(spec, &c)? {
                if crossings.contains(&n) && seen.insert(n.key()) {
                    queue.push_back(n);
                }
            }
        }
        if seen.len() != crossings.len() {
            return Err(Error::DisconnectedPatch);
        }
        Ok(Patch { crossings })
    }

    pub fn single(c: Crossing) -> Self {
        Patch {
            crossings: BTreeSet::from([c]),
        }
    }

    pub fn crossings(&self) -> &BTreeSet<Crossing> {
        &self.crossings
    }

    pub fn iter(&self) -> impl Iterator<Item = &Crossing> + Clone {
        self.crossings.iter()
    }

    pub fn contains(&self, c: &Crossing) -> bool {
        self.crossings.contains(c)
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn points(&self) -> Vec<Point> {
        self.crossings.iter().map(|c| c.point).collect()
    }
}

/// `p ∪ {t : t ∼ p}`.
pub fn corona_step(spec: &MultigridSpec, p: &Patch) -> Result<Patch> {
    let mut crossings = p.crossings.clone();
    for c in &p.crossings {
        crossings.extend(neighbors(spec, c)?);
    }
    Ok(Patch { crossings })
}

/// Coronas `P₀ ⊆ P₁ ⊆ …` stored as BFS frontiers.
#[derive(Clone, Debug)]
pub struct CoronaSequence {
    base: Patch,
    frontiers: Vec<Vec<Crossing>>,
}

impl CoronaSequence {
    pub fn base(&self) -> &Patch {
        &self.base
    }

    pub fn n_max(&self) -> usize {
        self.frontiers.len() - 1
    }

    /// Crossings at graph distance exactly `n` from the base (`n = 0` is the base).
    pub fn frontier(&self, n: usize) -> &[Crossing] {
        &self.frontiers[n]
    }

    pub fn frontiers(&self) -> &[Vec<Crossing>] {
        &self.frontiers
    }

    /// `|Pₙ|`.
    pub fn size(&self, n: usize) -> usize {
        self.frontiers[..=n].iter().map(Vec::len).sum()
    }

    /// Crossings of `Pₙ`.
    pub fn up_to(&self, n: usize) -> impl Iterator<Item = &Crossing> + Clone {
        self.frontiers[..=n].iter().flatten()
    }

    pub fn patch(&self, n: usize) -> Patch {
        Patch {
            crossings: self.up_to(n).copied().collect(),
        }
    }

    /// Graph distance from the base, if explored.
    pub fn index_of(&self, c: &Crossing) -> Option<usize> {
        self.frontiers.iter().position(|f| f.contains(c))
    }
}

/// Frontier BFS up to `n_max`. Fails once more than `cap` crossings are held.
pub fn corona_sequence(
    spec: &MultigridSpec,
    p: &Patch,
    n_max: usize,
    cap: usize,
) -> Result<CoronaSequence> {
    if p.len() > cap {
        return Err(Error::ResourceLimit(cap));
    }
    let mut visited: HashSet<CrossingKey> = p.crossings.iter().map(Crossing::key).collect();
    let mut frontiers = vec![p.crossings.iter().copied().collect::<Vec<_>>()];
    for _ in 0..n_max {
        let mut next = Vec::new();
        for c in frontiers.last().expect("base frontier") {
            for n in neighbors(spec, c)? {
                if visited.insert(n.key()) {
                    next.push(n);
                }
            }
        }
        if visited.len() > cap {
            return Err(Error::ResourceLimit(cap));
        }
        next.sort();
        frontiers.push(next);
    }
    Ok(CoronaSequence {
        base: p.clone(),
        frontiers,
    })
}

/// Exact graph distance by bidirectional BFS; `Unreachable` beyond `cap`.
pub fn graph_distance(spec: &MultigridSpec, a: &Crossing, b: &Crossing, cap: usize) -> Result<usize> {
    if a == b {
        return Ok(0);
    }
    struct Side {
        dist: HashMap<CrossingKey, usize>,
        frontier: Vec<Crossing>,
        radius: usize,
    }
    let side = |c: &Crossing| Side {
        dist: HashMap::from([(c.key(), 0)]),
        frontier: vec![*c],
        radius: 0,
    };
    let (mut sa, mut sb) = (side(a), side(b));
    while sa.radius + sb.radius < cap {
        let (grow, other) = if sa.frontier.len() <= sb.frontier.len() {
            (&mut sa, &sb)
        } else {
            (&mut sb, &sa)
        };
        let level = grow.radius + 1;
        let mut next = Vec::new();
        let mut best: Option<usize> = None;
        for c in &grow.frontier {
            for n in neighbors(spec, c)? {
                if grow.dist.contains_key(&n.key()) {
                    continue;
                }
                grow.dist.insert(n.key(), level);
                if let Some(&d) = other.dist.get(&n.key()) {
                    best = Some(best.map_or(level + d, |b| b.min(level + d)));
                }
                next.push(n);
            }
        }
        grow.frontier = next;
        grow.radius = level;
        if let Some(d) = best {
            return if d <= cap { Ok(d) } else { Err(Error::Unreachable(cap)) };
        }
    }
    Err(Error::Unreachable(cap))
}

/// BFS ball of radius `radius` around `c` with distances.
pub fn ball(spec: &MultigridSpec, c: &Crossing, radius: usize) -> Result<HashMap<Crossing, usize>> {
    let mut dist = HashMap::from([(*c, 0)]);
    let mut frontier = vec![*c];
    for level in 1..=radius {
        let mut next = Vec::new();
        for x in &frontier {
            for n in neighbors(spec, x)? {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(n) {
                    e.insert(level);
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigrid::{crossings_in_disk, crossings_on_segment, LineId};

    fn square() -> MultigridSpec {
        MultigridSpec::square([0.0, 0.0]).unwrap()
    }

    fn sq_crossing(x: i64, y: i64) -> Crossing {
        Crossing::new(&square(), LineId::new(0, x), LineId::new(1, y)).unwrap()
    }

    #[test]
    fn square_neighbors() {
        let mut got: Vec<_> = neighbors(&square(), &sq_crossing(2, 3))
            .unwrap()
            .iter()
            .map(|c| (c.a.k, c.b.k))
            .collect();
        got.sort();
        assert_eq!(got, vec![(1, 3), (2, 2), (2, 4), (3, 3)]);
    }

    #[test]
    fn pentagrid_neighbors_are_symmetric_and_consecutive() {
        let spec = MultigridSpec::pentagrid(0.5).unwrap();
        for c in crossings_in_disk(&spec, 6.0).unwrap() {
            let ns = neighbors(&spec, &c).unwrap();
            for n in ns {
                assert!(neighbors(&spec, &n).unwrap().contains(&c), "{c} -> {n}");
            }
            // consecutive: nothing strictly between c and its successor on each line
            for (line, succ) in [(c.a, ns[0]), (c.b, ns[2])] {
                let t0 = spec.param(line, c.point);
                let t1 = spec.param(line, succ.point);
                assert!(t1 > t0);
                let between = crossings_on_segment(&spec, line, t0 + 1e-9, t1 - 1e-9).unwrap();
                assert!(between.is_empty());
            }
        }
    }

    #[test]
    fn square_coronas_are_diamonds() {
        let spec = square();
        let p = Patch::single(sq_crossing(0, 0));
        assert_eq!(corona_step(&spec, &p).unwrap().len(), 5);
        let seq = corona_sequence(&spec, &p, 12, DEFAULT_MAX_CROSSINGS).unwrap();
        for n in 0..=12 {
            assert_eq!(seq.size(n), 2 * n * n + 2 * n + 1);
            assert!(seq
                .frontier(n)
                .iter()
                .all(|c| (c.a.k.abs() + c.b.k.abs()) as usize == n));
        }
        assert_eq!(seq.patch(3), {
            let mut q = p.clone();
            for _ in 0..3 {
                q = corona_step(&spec, &q).unwrap();
            }
            q
        });
    }

    #[test]
    fn zero_step_sequence_is_base() {
        let spec = square();
        let p = Patch::single(sq_crossing(4, 4));
        let seq = corona_sequence(&spec, &p, 0, 10).unwrap();
        assert_eq!(seq.n_max(), 0);
        assert_eq!(seq.frontier(0), &[sq_crossing(4, 4)]);
        assert_eq!(
            corona_sequence(&spec, &p, 20, 50).unwrap_err(),
            Error::ResourceLimit(50)
        );
    }

    #[test]
    fn patch_validation() {
        let spec = square();
        assert_eq!(Patch::new(&spec, []).unwrap_err(), Error::EmptyPatch);
        assert_eq!(
            Patch::new(&spec, [sq_crossing(0, 0), sq_crossing(2, 0)]).unwrap_err(),
            Error::DisconnectedPatch
        );
        assert_eq!(
            Patch::new(&spec, [sq_crossing(0, 0), sq_crossing(1, 0), sq_crossing(2, 0)])
                .unwrap()
                .len(),
            3
        );
    }

    #[test]
    fn distance_examples() {
        let spec = square();
        let a = sq_crossing(0, 0);
        assert_eq!(graph_distance(&spec, &a, &a, 0).unwrap(), 0);
        assert_eq!(graph_distance(&spec, &a, &sq_crossing(1, 0), 5).unwrap(), 1);
        assert_eq!(graph_distance(&spec, &a, &sq_crossing(3, -4), 50).unwrap(), 7);
        assert_eq!(graph_distance(&spec, &a, &sq_crossing(3, -4), 7).unwrap(), 7);
        assert_eq!(
            graph_distance(&spec, &a, &sq_crossing(3, -4), 6).unwrap_err(),
            Error::Unreachable(6)
        );

        let penta = MultigridSpec::pentagrid(0.5).unwrap();
        let line = LineId::new(2, 1);
        let on_line = crossings_on_segment(&penta, line, -5.0, 5.0).unwrap();
        let (a, b) = (on_line[3], on_line[20]);
        assert_eq!(graph_distance(&penta, &a, &b, 100).unwrap(), 17);
    }

    #[test]
    fn bfs_distances_agree_with_ball() {
        let spec = MultigridSpec::dfold(7, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]).unwrap();
        let c = crossings_in_disk(&spec, 1.0).unwrap()[0];
        let b = ball(&spec, &c, 6).unwrap();
        for (x, &d) in b.iter().take(200) {
            assert_eq!(graph_distance(&spec, &c, x, 10).unwrap(), d);
        }
    }
}
