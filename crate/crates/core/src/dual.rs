//! Dualization: multigrid cells become tiling vertices, crossings become
//! rhombus tiles.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Point, EPS_GEOM};
use crate::multigrid::{crossings_in_disk, Crossing, MultigridSpec, EPS_SINGULAR};

/// A vertex of the dual tiling, identified by its integer key `Kᵢ = ⌈z·ζᵢ − γᵢ⌉`.
///
/// Equality and hashing use the key only.
#[derive(Clone, Debug, Serialize)]
pub struct TilingVertex {
    pub key: Vec<i64>,
    pub position: Point,
}

impl TilingVertex {
    pub fn from_key(spec: &MultigridSpec, key: Vec<i64>) -> Self {
        let position = key
            .iter()
            .zip(spec.normals())
            .fold(Point::ZERO, |acc, (&k, &z)| acc + z * k as f64);
        TilingVertex { key, position }
    }

    fn shifted(&self, spec: &MultigridSpec, grids: &[usize]) -> Self {
        let mut key = self.key.clone();
        for &g in grids {
            key[g] += 1;
        }
        Self::from_key(spec, key)
    }
}

impl PartialEq for TilingVertex {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for TilingVertex {}

impl Hash for TilingVertex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

/// The dualization map `F(z) = Σ ⌈z·ζᵢ − γᵢ⌉ ζᵢ`, defined on open cells.
pub fn dualize_f(spec: &MultigridSpec, z: Point) -> Result<TilingVertex> {
    let mut key = Vec::with_capacity(spec.d());
    for g in 0..spec.d() {
        let level = spec.level(g, z);
        if (level - level.round()).abs() <= EPS_GEOM {
            return Err(Error::OnGridLine(z));
        }
        key.push(level.ceil() as i64);
    }
    Ok(TilingVertex::from_key(spec, key))
}

/// The linear companion `𝓕(z) = Σ (z·ζᵢ) ζᵢ`.
pub fn linear_dual(spec: &MultigridSpec, z: Point) -> Point {
    spec.normals()
        .iter()
        .fold(Point::ZERO, |acc, &n| acc + n * crate::geom::scalar_product(z, n))
}

/// The rhombus dual to a crossing of type `(i, j)`.
#[derive(Clone, Debug, Serialize)]
pub struct Tile {
    pub crossing: Crossing,
    /// `base`, `base + ζᵢ`, `base + ζᵢ + ζⱼ`, `base + ζⱼ`, in boundary order.
    pub vertices: [TilingVertex; 4],
}

impl Tile {
    pub fn base(&self) -> &TilingVertex {
        &self.vertices[0]
    }

    pub fn points(&self) -> [Point; 4] {
        [
            self.vertices[0].position,
            self.vertices[1].position,
            self.vertices[2].position,
            self.vertices[3].position,
        ]
    }

    pub fn center(&self) -> Point {
        (self.vertices[0].position + self.vertices[2].position) * 0.5
    }

    /// Edges as unordered key pairs (smaller key first).
    pub fn edge_keys(&self) -> [(Vec<i64>, Vec<i64>); 4] {
        std::array::from_fn(|k| {
            let (a, b) = (&self.vertices[k].key, &self.vertices[(k + 1) % 4].key);
            if a <= b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            }
        })
    }
}

/// Builds the tile of crossing `c`.
///
/// The four cells around `c` differ only in the levels of the two lines
/// through it, so their `F`-keys are computed directly: grids other than
/// `i, j` take `⌈level⌉` at the crossing point, and grids `i, j` take `kᵢ`
/// (negative side) or `kᵢ + 1` (positive side).
pub fn tile_of_crossing(spec: &MultigridSpec, c: &Crossing) -> Result<Tile> {
    let (i, j) = c.types();
    let mut key = Vec::with_capacity(spec.d());
    for g in 0..spec.d() {
        if g == i {
            key.push(c.a.k);
        } else if g == j {
            key.push(c.b.k);
        } else {
            let level = spec.level(g, c.point);
            if (level - level.round()).abs() < EPS_SINGULAR {
                return Err(Error::SingularMultigrid(c.point));
            }
            key.push(level.ceil() as i64);
        }
    }
    let base = TilingVertex::from_key(spec, key);
    let vi = base.shifted(spec, &[i]);
    let vij = base.shifted(spec, &[i, j]);
    let vj = base.shifted(spec, &[j]);
    Ok(Tile {
        crossing: *c,
        vertices: [base, vi, vij, vj],
    })
}

/// Tiles of every crossing within `radius` of the origin.
#[derive(Clone, Debug)]
pub struct TilingWindow {
    spec: MultigridSpec,
    radius: f64,
    tiles: BTreeMap<Crossing, Tile>,
}

impl TilingWindow {
    pub fn spec(&self) -> &MultigridSpec {
        &self.spec
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn tiles(&self) -> &BTreeMap<Crossing, Tile> {
        &self.tiles
    }

    pub fn get(&self, c: &Crossing) -> Option<&Tile> {
        self.tiles.get(c)
    }

    pub fn contains(&self, c: &Crossing) -> bool {
        self.tiles.contains_key(c)
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// The crossing of the window nearest to `z`.
    pub fn nearest(&self, z: Point) -> Option<Crossing> {
        self.tiles
            .keys()
            .min_by(|a, b| a.point.dist(z).total_cmp(&b.point.dist(z)))
            .copied()
    }

    /// One export record per tile, in crossing-key order.
    pub fn records(&self) -> Vec<TileRecord> {
        self.tiles.values().map(TileRecord::from).collect()
    }
}

pub fn tiling_window(spec: &MultigridSpec, radius: f64) -> Result<TilingWindow> {
    if !(radius >= 0.0) {
        return Err(Error::InvalidArgument(format!("window radius must be non-negative, got {radius}")));
    }
    let tiles = crossings_in_disk(spec, radius)?
        .into_iter()
        .map(|c| tile_of_crossing(spec, &c).map(|t| (c, t)))
        .collect::<Result<_>>()?;
    Ok(TilingWindow {
        spec: spec.clone(),
        radius,
        tiles,
    })
}

/// Serialized form of a tile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TileRecord {
    pub grids: [usize; 2],
    pub lines: [i64; 2],
    pub keys: [Vec<i64>; 4],
    pub positions: [[f64; 2]; 4],
}

impl From<&Tile> for TileRecord {
    fn from(t: &Tile) -> Self {
        TileRecord {
            grids: [t.crossing.a.grid, t.crossing.b.grid],
            lines: [t.crossing.a.k, t.crossing.b.k],
            keys: std::array::from_fn(|k| t.vertices[k].key.clone()),
            positions: std::array::from_fn(|k| [t.vertices[k].position.re, t.vertices[k].position.im]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::scalar_product;
    use crate::multigrid::LineId;
    use std::f64::consts::PI;

    #[test]
    fn dualize_examples() {
        let penta = MultigridSpec::pentagrid(0.5).unwrap();
        let v = dualize_f(&penta, Point::ZERO).unwrap();
        assert_eq!(v.key, vec![0; 5]);
        assert!(v.position.norm() < 1e-15);

        let sq = MultigridSpec::square([0.0, 0.0]).unwrap();
        let v = dualize_f(&sq, Point::new(0.5, 0.5)).unwrap();
        assert_eq!(v.key, vec![1, 1]);
        assert_eq!(v.position, Point::new(1.0, 1.0));

        assert!(matches!(dualize_f(&sq, Point::new(1.0, 0.5)), Err(Error::OnGridLine(_))));
    }

    #[test]
    fn linear_dual_examples() {
        let penta = MultigridSpec::pentagrid(0.5).unwrap();
        assert_eq!(linear_dual(&penta, Point::ZERO), Point::ZERO);
        let v = linear_dual(&penta, Point::new(1.0, 0.0));
        assert!((v - Point::new(2.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn square_tile() {
        let sq = MultigridSpec::square([0.0, 0.0]).unwrap();
        let c = Crossing::new(&sq, LineId::new(0, 2), LineId::new(1, 3)).unwrap();
        let t = tile_of_crossing(&sq, &c).unwrap();
        let mut pts: Vec<(f64, f64)> = t.points().iter().map(|p| (p.re, p.im)).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pts, vec![(2.0, 3.0), (2.0, 4.0), (3.0, 3.0), (3.0, 4.0)]);
    }

    fn interior_angle(t: &Tile) -> f64 {
        let p = t.points();
        let (u, v) = (p[1] - p[0], p[3] - p[0]);
        scalar_product(u, v).clamp(-1.0, 1.0).acos()
    }

    #[test]
    fn penrose_rhombus_shapes() {
        let penta = MultigridSpec::pentagrid(0.5).unwrap();
        let fat = Crossing::new(&penta, LineId::new(0, 0), LineId::new(1, 0)).unwrap();
        let thin = Crossing::new(&penta, LineId::new(0, 0), LineId::new(2, 0)).unwrap();
        let a = interior_angle(&tile_of_crossing(&penta, &fat).unwrap());
        assert!((a - 2.0 * PI / 5.0).abs() < 1e-12);
        let a = interior_angle(&tile_of_crossing(&penta, &thin).unwrap());
        assert!((a - 4.0 * PI / 5.0).abs() < 1e-12);
        // acute angle 36° for the thin rhombus
        assert!((PI - a - PI / 5.0).abs() < 1e-12);
    }

    #[test]
    fn tile_keys_match_sampled_cells() {
        // oracle: sample F in the four cells around the crossing
        let penta = MultigridSpec::dfold(5, vec![0.13, 0.71, 0.42, 0.05, 0.93]).unwrap();
        for c in crossings_in_disk(&penta, 4.0).unwrap() {
            let t = tile_of_crossing(&penta, &c).unwrap();
            let (zi, zj) = (penta.normal(c.a.grid), penta.normal(c.b.grid));
            let eps = 1e-6;
            for (si, sj) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
                // move off both lines: z·ζᵢ shifts by si·eps, z·ζⱼ by sj·eps
                let det = zi.re * zj.im - zi.im * zj.re;
                let (ri, rj) = (si * eps, sj * eps);
                let dz = Point::new((ri * zj.im - rj * zi.im) / det, (zi.re * rj - zj.re * ri) / det);
                let v = dualize_f(&penta, c.point + dz).unwrap();
                assert!(t.vertices.contains(&v), "{c}: {:?}", v.key);
            }
        }
    }

    #[test]
    fn square_window_is_block_of_unit_squares() {
        let sq = MultigridSpec::square([0.5, 0.5]).unwrap();
        let w = tiling_window(&sq, 3.6).unwrap();
        // crossings at half-integers within the disk of radius 3.6
        let expected = (-4..4)
            .flat_map(|x| (-4..4).map(move |y| (x as f64 + 0.5, y as f64 + 0.5)))
            .filter(|(x, y)| x.hypot(*y) <= 3.6)
            .count();
        assert_eq!(w.len(), expected);
        for t in w.tiles().values() {
            let p = t.points();
            assert!((p[0].dist(p[2]) - 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn record_shape() {
        let penta = MultigridSpec::pentagrid(0.5).unwrap();
        let w = tiling_window(&penta, 1.0).unwrap();
        let r = w.records();
        assert_eq!(r.len(), w.len());
        assert!(r.iter().all(|rec| rec.keys.iter().all(|k| k.len() == 5)));
    }
}
