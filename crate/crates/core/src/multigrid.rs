//! Multigrids: families of evenly spaced parallel lines, their crossings, and
//! walks along individual lines.
//!
//! Line `(i, k)` is `{z : z·ζᵢ − γᵢ = k}`. Its point at parameter `t` is
//! `(γᵢ + k)ζᵢ + t·ζᵢ⊥`, so the parameter of any point `z` of the line is
//! `z·ζᵢ⊥`.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{scalar_product, Point, EPS_GEOM};

/// Distance under which a third line through a crossing is treated as singular.
pub const EPS_SINGULAR: f64 = 1e-7;

/// Normal vectors and offsets of a multigrid. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultigridSpec {
    normals: Vec<Point>,
    offsets: Vec<f64>,
}

impl MultigridSpec {
    pub fn new(normals: Vec<Point>, offsets: Vec<f64>) -> Result<Self> {
        if normals.is_empty() {
            return Err(Error::InvalidSpec("at least one grid is required".into()));
        }
        if normals.len() != offsets.len() {
            return Err(Error::InvalidSpec(format!(
                "{} normals but {} offsets",
                normals.len(),
                offsets.len()
            )));
        }
        for (i, z) in normals.iter().enumerate() {
            if !z.is_finite() || (z.norm() - 1.0).abs() > EPS_GEOM {
                return Err(Error::InvalidSpec(format!("normal {i} = {z} is not a unit vector")));
            }
        }
        for (i, g) in offsets.iter().enumerate() {
            if !(0.0..1.0).contains(g) {
                return Err(Error::InvalidSpec(format!("offset {i} = {g} is outside [0, 1)")));
            }
        }
        for i in 0..normals.len() {
            for j in i + 1..normals.len() {
                if scalar_product(normals[i].perp(), normals[j]).abs() <= EPS_GEOM {
                    return Err(Error::InvalidSpec(format!("directions {i} and {j} are parallel")));
                }
            }
        }
        Ok(MultigridSpec { normals, offsets })
    }

    /// The `d`-fold multigrid `ζₖ = e^{2πik/d}`.
    pub fn dfold(d: usize, offsets: Vec<f64>) -> Result<Self> {
        let normals = (0..d)
            .map(|k| Point::from_angle(TAU * k as f64 / d as f64))
            .collect();
        Self::new(normals, offsets)
    }

    /// The pentagrid with all offsets equal to `offset`.
    pub fn pentagrid(offset: f64) -> Result<Self> {
        Self::dfold(5, vec![offset; 5])
    }

    /// Normals given by their angles in degrees.
    pub fn from_angles_degrees(angles: &[f64], offsets: Vec<f64>) -> Result<Self> {
        let normals = angles
            .iter()
            .map(|a| Point::from_angle(a * PI / 180.0))
            .collect();
        Self::new(normals, offsets)
    }

    /// The square grid `ζ = (1, i)`.
    pub fn square(offsets: [f64; 2]) -> Result<Self> {
        Self::new(vec![Point::new(1.0, 0.0), Point::new(0.0, 1.0)], offsets.to_vec())
    }

    pub fn d(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn normal(&self, grid: usize) -> Point {
        self.normals[grid]
    }

    pub fn offset(&self, grid: usize) -> f64 {
        self.offsets[grid]
    }

    /// `z·ζᵢ − γᵢ`; integer exactly on the lines of grid `i`.
    pub fn level(&self, grid: usize, z: Point) -> f64 {
        scalar_product(z, self.normals[grid]) - self.offsets[grid]
    }

    pub fn foot(&self, line: LineId) -> Point {
        self.normals[line.grid] * (self.offsets[line.grid] + line.k as f64)
    }

    pub fn line_point(&self, line: LineId, t: f64) -> Point {
        self.foot(line) + self.normals[line.grid].perp() * t
    }

    pub fn param(&self, line: LineId, z: Point) -> f64 {
        scalar_product(z, self.normals[line.grid].perp())
    }

    /// `ζᵢ⊥·ζⱼ`: crossing frequency of `j`-lines along an `i`-line (signed).
    pub fn frequency(&self, i: usize, j: usize) -> f64 {
        scalar_product(self.normals[i].perp(), self.normals[j])
    }

    /// Level of grid `j` at parameter `t` on `line`.
    fn level_along(&self, line: LineId, j: usize, t: f64) -> f64 {
        let i = line.grid;
        (self.offsets[i] + line.k as f64) * scalar_product(self.normals[i], self.normals[j])
            + t * self.frequency(i, j)
            - self.offsets[j]
    }

    /// Parameter on `line` of its crossing with `other`.
    fn crossing_param(&self, line: LineId, other: LineId) -> f64 {
        let (i, j) = (line.grid, other.grid);
        (other.k as f64 + self.offsets[j]
            - (self.offsets[i] + line.k as f64) * scalar_product(self.normals[i], self.normals[j]))
            / self.frequency(i, j)
    }

    fn check_grid(&self, grid: usize) -> Result<()> {
        if grid < self.d() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("grid index {grid} out of range for d = {}", self.d())))
        }
    }

    fn check_on_line(&self, line: LineId, z: Point) -> Result<()> {
        self.check_grid(line.grid)?;
        if (self.level(line.grid, z) - line.k as f64).abs() > EPS_GEOM * (1.0 + z.norm()) {
            return Err(Error::NotOnLine(z, line));
        }
        Ok(())
    }

    /// Another line through `z` (a point of `line`), if any.
    fn line_through(&self, line: LineId, z: Point) -> Option<LineId> {
        (0..self.d()).filter(|&j| j != line.grid).find_map(|j| {
            let l = self.level(j, z);
            let m = l.round();
            ((l - m).abs() <= EPS_GEOM * (1.0 + z.norm())).then_some(LineId::new(j, m as i64))
        })
    }
}

/// The line `{z : z·ζ_grid − γ_grid = k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineId {
    pub grid: usize,
    pub k: i64,
}

impl LineId {
    pub const fn new(grid: usize, k: i64) -> Self {
        LineId { grid, k }
    }
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.grid, self.k)
    }
}

/// Exact identity of a crossing: `(i, kᵢ, j, kⱼ)` with `i < j`.
pub type CrossingKey = (usize, i64, usize, i64);

/// The intersection of two lines of different grids; a vertex of the
/// multigrid graph and the dual of one tile.
///
/// Equality, ordering and hashing use the integer key only.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Crossing {
    pub a: LineId,
    pub b: LineId,
    pub point: Point,
}

impl Crossing {
    pub fn new(spec: &MultigridSpec, l1: LineId, l2: LineId) -> Result<Self> {
        let point = crossing_point(spec, l1, l2)?;
        let (a, b) = if l1.grid < l2.grid { (l1, l2) } else { (l2, l1) };
        Ok(Crossing { a, b, point })
    }

    pub fn key(&self) -> CrossingKey {
        (self.a.grid, self.a.k, self.b.grid, self.b.k)
    }

    pub fn from_key(spec: &MultigridSpec, key: CrossingKey) -> Result<Self> {
        spec.check_grid(key.0)?;
        spec.check_grid(key.2)?;
        Self::new(spec, LineId::new(key.0, key.1), LineId::new(key.2, key.3))
    }

    /// Grid pair `(i, j)` with `i < j`.
    pub fn types(&self) -> (usize, usize) {
        (self.a.grid, self.b.grid)
    }

    pub fn lines(&self) -> [LineId; 2] {
        [self.a, self.b]
    }

    pub fn line_on_grid(&self, grid: usize) -> Option<LineId> {
        [self.a, self.b].into_iter().find(|l| l.grid == grid)
    }

    /// The line of the crossing other than `line`.
    pub fn other(&self, line: LineId) -> Option<LineId> {
        if self.a == line {
            Some(self.b)
        } else if self.b == line {
            Some(self.a)
        } else {
            None
        }
    }
}

impl PartialEq for Crossing {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Crossing {}

impl Hash for Crossing {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Crossing {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Crossing {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.a, self.b)
    }
}

/// Direction of travel along a line: `Forward` is `+ζᵢ⊥`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Direction::Forward),
            -1 => Ok(Direction::Backward),
            s => Err(Error::InvalidArgument(format!("direction must be ±1, got {s}"))),
        }
    }
}

/// Intersection point of two lines of different grids.
pub fn crossing_point(spec: &MultigridSpec, a: LineId, b: LineId) -> Result<Point> {
    spec.check_grid(a.grid)?;
    spec.check_grid(b.grid)?;
    if a.grid == b.grid {
        return Err(Error::ParallelLines(a, b));
    }
    let (za, zb) = (spec.normal(a.grid), spec.normal(b.grid));
    let ra = spec.offset(a.grid) + a.k as f64;
    let rb = spec.offset(b.grid) + b.k as f64;
    let det = za.re * zb.im - za.im * zb.re;
    Ok(Point::new(
        (ra * zb.im - rb * za.im) / det,
        (za.re * rb - zb.re * ra) / det,
    ))
}

/// Next crossing on `line` strictly after parameter `t` in direction `dir`.
///
/// `at` is the other line of the crossing sitting at `t`, when there is one;
/// its next level is taken in closed form so no crossing is revisited.
pub(crate) fn next_on_line(
    spec: &MultigridSpec,
    line: LineId,
    t: f64,
    dir: Direction,
    at: Option<LineId>,
) -> Result<(Crossing, f64)> {
    let i = line.grid;
    let sign = dir.sign();
    let mut best: Option<(f64, LineId, f64)> = None;
    let mut second = f64::INFINITY;
    for j in (0..spec.d()).filter(|&j| j != i) {
        let s = spec.frequency(i, j);
        let rising = s * sign > 0.0;
        let next_level = match at {
            Some(l) if l.grid == j => {
                if rising {
                    l.k + 1
                } else {
                    l.k - 1
                }
            }
            _ => {
                let level = spec.level_along(line, j, t);
                if at.is_some() && (level - level.round()).abs() < EPS_SINGULAR {
                    return Err(Error::SingularMultigrid(spec.line_point(line, t)));
                }
                let mut m = if rising {
                    level.floor() as i64 + 1
                } else {
                    level.ceil() as i64 - 1
                };
                // floating guard: never return a level at or behind t
                if (spec.crossing_param(line, LineId::new(j, m)) - t) * sign <= 0.0 {
                    m += if rising { 1 } else { -1 };
                }
                m
            }
        };
        let other = LineId::new(j, next_level);
        let tn = spec.crossing_param(line, other);
        let step = (tn - t) * sign;
        match best {
            Some((bs, _, _)) if step >= bs => second = second.min(step),
            _ => {
                if let Some((bs, _, _)) = best {
                    second = second.min(bs);
                }
                best = Some((step, other, tn));
            }
        }
    }
    let (step, other, tn) = best.ok_or_else(|| {
        Error::InvalidArgument("a line of a single-grid multigrid has no crossings".into())
    })?;
    if second - step < EPS_SINGULAR {
        return Err(Error::SingularMultigrid(spec.line_point(line, tn)));
    }
    Ok((Crossing::new(spec, line, other)?, tn))
}

/// Parameter of crossing `c` along its line `line`.
pub(crate) fn param_of(spec: &MultigridSpec, line: LineId, c: &Crossing) -> f64 {
    let other = c.other(line).expect("crossing lies on line");
    spec.crossing_param(line, other)
}

/// Walks `n` crossings along `line` starting at crossing `from` (which lies on `line`).
pub(crate) fn walk_from(
    spec: &MultigridSpec,
    line: LineId,
    from: &Crossing,
    dir: Direction,
    n: usize,
) -> Result<Crossing> {
    let mut cur = *from;
    let mut t = param_of(spec, line, from);
    for _ in 0..n {
        let at = cur.other(line);
        let (next, tn) = next_on_line(spec, line, t, dir, at)?;
        cur = next;
        t = tn;
    }
    Ok(cur)
}

/// All crossings of `line` with parameter in `(t0, t1]`, sorted by parameter.
pub fn crossings_on_segment(
    spec: &MultigridSpec,
    line: LineId,
    t0: f64,
    t1: f64,
) -> Result<Vec<Crossing>> {
    spec.check_grid(line.grid)?;
    if !(t1 >= t0) {
        return Err(Error::InvalidArgument(format!("empty parameter range ({t0}, {t1}]")));
    }
    let mut found: Vec<(f64, Crossing)> = Vec::new();
    for j in (0..spec.d()).filter(|&j| j != line.grid) {
        let (l0, l1) = (spec.level_along(line, j, t0), spec.level_along(line, j, t1));
        let lo = l0.min(l1).floor() as i64 - 1;
        let hi = l0.max(l1).ceil() as i64 + 1;
        for m in lo..=hi {
            let other = LineId::new(j, m);
            let t = spec.crossing_param(line, other);
            if t > t0 && t <= t1 {
                found.push((t, Crossing::new(spec, line, other)?));
            }
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in found.windows(2) {
        if w[1].0 - w[0].0 < EPS_SINGULAR {
            return Err(Error::SingularMultigrid(w[0].1.point));
        }
    }
    Ok(found.into_iter().map(|(_, c)| c).collect())
}

/// Number of type-`(line.grid, j)` crossings on the half-open segment
/// `(z, z + α·ζᵢ⊥]` of `line`.
pub fn count_crossings_cj(
    spec: &MultigridSpec,
    line: LineId,
    z: Point,
    alpha: f64,
    j: usize,
) -> Result<u64> {
    spec.check_on_line(line, z)?;
    spec.check_grid(j)?;
    if j == line.grid {
        return Err(Error::SameGrid(j));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("segment length must be positive, got {alpha}")));
    }
    let t0 = spec.param(line, z);
    let (l0, l1) = (
        spec.level_along(line, j, t0),
        spec.level_along(line, j, t0 + alpha),
    );
    let count = if spec.frequency(line.grid, j) > 0.0 {
        l1.floor() - l0.floor()
    } else {
        l0.ceil() - l1.ceil()
    };
    Ok(count as u64)
}

/// The `n`-th crossing from `start` along `line` in direction `dir`.
///
/// `n = 0` returns the crossing at `start`, which must then be one.
pub fn nth_crossing(
    spec: &MultigridSpec,
    line: LineId,
    start: Point,
    dir: Direction,
    n: usize,
) -> Result<Crossing> {
    spec.check_on_line(line, start)?;
    match spec.line_through(line, start) {
        Some(other) => {
            let c = Crossing::new(spec, line, other)?;
            walk_from(spec, line, &c, dir, n)
        }
        None if n == 0 => Err(Error::NotACrossing(start, line)),
        None => {
            let t = spec.param(line, start);
            let (mut cur, mut t) = next_on_line(spec, line, t, dir, None)?;
            for _ in 1..n {
                let (next, tn) = next_on_line(spec, line, t, dir, cur.other(line))?;
                cur = next;
                t = tn;
            }
            Ok(cur)
        }
    }
}

/// Singular point found by [`check_regular`]: three lines of distinct grids
/// passing within `EPS_SINGULAR` of a common point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularTriple {
    pub point: Point,
    pub lines: [LineId; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub radius: f64,
    pub crossings_examined: usize,
    pub triples: Vec<SingularTriple>,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.triples.is_empty()
    }
}

/// Lines of `grid` meeting the disk of radius `radius` about the origin.
pub(crate) fn lines_in_disk(spec: &MultigridSpec, grid: usize, radius: f64) -> std::ops::RangeInclusive<i64> {
    let g = spec.offset(grid);
    ((-radius - g).ceil() as i64)..=((radius - g).floor() as i64)
}

/// Every crossing with `|point| ≤ radius`, sorted by key.
pub fn crossings_in_disk(spec: &MultigridSpec, radius: f64) -> Result<Vec<Crossing>> {
    let mut out = Vec::new();
    for i in 0..spec.d() {
        for j in i + 1..spec.d() {
            for ki in lines_in_disk(spec, i, radius) {
                for kj in lines_in_disk(spec, j, radius) {
                    let c = Crossing::new(spec, LineId::new(i, ki), LineId::new(j, kj))?;
                    if c.point.norm() <= radius {
                        out.push(c);
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Looks for points of the disk where three lines of distinct grids meet.
pub fn check_regular(spec: &MultigridSpec, window_radius: f64) -> Result<RegularityReport> {
    if !(window_radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "window radius must be positive, got {window_radius}"
        )));
    }
    let crossings = crossings_in_disk(spec, window_radius)?;
    let mut triples = Vec::new();
    for c in &crossings {
        for g in c.b.grid + 1..spec.d() {
            let level = spec.level(g, c.point);
            if (level - level.round()).abs() < EPS_SINGULAR {
                triples.push(SingularTriple {
                    point: c.point,
                    lines: [c.a, c.b, LineId::new(g, level.round() as i64)],
                });
            }
        }
    }
    Ok(RegularityReport {
        radius: window_radius,
        crossings_examined: crossings.len(),
        triples,
    })
}

/// One chosen line per grid direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominantLines {
    pub lines: Vec<LineId>,
}

/// For each grid, the line through the patch closest to the origin
/// (smallest `|γᵢ + k|`, ties to the smaller `k`).
pub fn dominant_lines<'a, I>(spec: &MultigridSpec, patch: I) -> Result<DominantLines>
where
    I: IntoIterator<Item = &'a Crossing>,
{
    let mut best: Vec<Option<LineId>> = vec![None; spec.d()];
    let mut empty = true;
    for c in patch {
        empty = false;
        for l in c.lines() {
            let dist = |l: LineId| (spec.offset(l.grid) + l.k as f64).abs();
            let slot = &mut best[l.grid];
            let better = match *slot {
                None => true,
                Some(cur) => match dist(l).total_cmp(&dist(cur)) {
                    Ordering::Less => true,
                    Ordering::Equal => l.k < cur.k,
                    Ordering::Greater => false,
                },
            };
            if better {
                *slot = Some(l);
            }
        }
    }
    if empty {
        return Err(Error::EmptyPatch);
    }
    let missing: Vec<usize> = (0..spec.d()).filter(|&i| best[i].is_none()).collect();
    if !missing.is_empty() {
        return Err(Error::GridNotRepresented(missing));
    }
    Ok(DominantLines {
        lines: best.into_iter().flatten().collect(),
    })
}

/// Endpoints `E_n`: per dominant line, the crossings `n` steps beyond the
/// patch in both directions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Endpoints {
    pub n: usize,
    /// `(e⁺, e⁻)` per grid.
    pub pairs: Vec<(Crossing, Crossing)>,
}

impl Endpoints {
    pub fn points(&self) -> Vec<Point> {
        self.pairs
            .iter()
            .flat_map(|(p, m)| [p.point, m.point])
            .collect()
    }
}

pub fn endpoints<'a, I>(
    spec: &MultigridSpec,
    dominant: &DominantLines,
    patch: I,
    n: usize,
) -> Result<Endpoints>
where
    I: IntoIterator<Item = &'a Crossing> + Clone,
{
    let mut pairs = Vec::with_capacity(dominant.lines.len());
    for &line in &dominant.lines {
        let on_line: Vec<(f64, &Crossing)> = patch
            .clone()
            .into_iter()
            .filter(|c| c.line_on_grid(line.grid) == Some(line))
            .map(|c| (param_of(spec, line, c), c))
            .collect();
        let hi = on_line.iter().max_by(|a, b| a.0.total_cmp(&b.0));
        let lo = on_line.iter().min_by(|a, b| a.0.total_cmp(&b.0));
        let (Some(&(_, hi)), Some(&(_, lo))) = (hi, lo) else {
            return Err(Error::GridNotRepresented(vec![line.grid]));
        };
        pairs.push((
            walk_from(spec, line, hi, Direction::Forward, n)?,
            walk_from(spec, line, lo, Direction::Backward, n)?,
        ));
    }
    Ok(Endpoints { n, pairs })
}

/// Pairs of adjacent directions: consecutive when the normals, flipped into
/// the upper half-plane, are sorted by argument (cyclically).
pub fn adjacent_directions(spec: &MultigridSpec) -> Vec<(usize, usize)> {
    let mut dirs: Vec<(f64, usize)> = spec
        .normals()
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let a = z.arg();
            (if a >= PI { a - PI } else { a }, i)
        })
        .collect();
    dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = dirs.len();
    if n < 2 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(dirs[0].1, dirs[1].1)];
    }
    (0..n).map(|k| (dirs[k].1, dirs[(k + 1) % n].1)).collect()
}
