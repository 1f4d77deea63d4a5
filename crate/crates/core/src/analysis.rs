//! Characteristic polygons and limit-shape measurements.
//!
//! Patch shapes are measured through the convex hull of their points: crossing
//! positions on the multigrid side, dual tile vertices on the tiling side.

use std::fmt;

use serde::Serialize;

use crate::dual::{linear_dual, tile_of_crossing};
use crate::error::{Error, Result};
use crate::geom::{
    convex_hull, hausdorff_distance, hausdorff_hulls, hull_points, scalar_product, Point, Polygon,
};
use crate::graph::{corona_sequence, corona_step, CoronaSequence, Patch};
use crate::multigrid::{dominant_lines, endpoints, Crossing, MultigridSpec};

/// How a patch is turned into a polygon. Only the convex hull is implemented.
pub const SHAPE_KIND: &str = "convex_hull";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Multigrid,
    Tiling,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Multigrid => "multigrid",
            Side::Tiling => "tiling",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multigrid" => Ok(Side::Multigrid),
            "tiling" => Ok(Side::Tiling),
            other => Err(Error::InvalidArgument(format!("unknown side {other:?}"))),
        }
    }
}

/// The `2d`-gon `χ` (multigrid side) or `χ̃` (tiling side).
#[derive(Clone, Debug, Serialize)]
pub struct CharPolygon {
    pub side: Side,
    /// `χᵢ` on the multigrid side, `|χ̃ᵢ|` on the tiling side.
    pub radii: Vec<f64>,
    /// One vertex per grid: `χᵢζᵢ⊥` or `χ̃ᵢ`. The others are their negatives.
    pub generators: Vec<Point>,
    pub polygon: Polygon,
}

impl CharPolygon {
    pub fn vertices(&self) -> &[Point] {
        self.polygon.vertices()
    }
}

/// `χᵢ = (Σⱼ |ζᵢ⊥·ζⱼ|)⁻¹`: mean spacing of crossings along an `i`-line.
pub fn chi_radius(spec: &MultigridSpec, i: usize) -> f64 {
    let total: f64 = (0..spec.d()).map(|j| spec.frequency(i, j).abs()).sum();
    1.0 / total
}

fn symmetric_polygon(generators: &[Point]) -> Result<Polygon> {
    let pts: Vec<Point> = generators.iter().flat_map(|&g| [g, -g]).collect();
    convex_hull(&pts)
}

pub fn char_polygon_chi(spec: &MultigridSpec) -> Result<CharPolygon> {
    let radii: Vec<f64> = (0..spec.d()).map(|i| chi_radius(spec, i)).collect();
    let generators: Vec<Point> = radii
        .iter()
        .zip(spec.normals())
        .map(|(&r, &z)| z.perp() * r)
        .collect();
    Ok(CharPolygon {
        side: Side::Multigrid,
        polygon: symmetric_polygon(&generators)?,
        radii,
        generators,
    })
}

/// `χ̃ᵢ = χᵢ Σⱼ (ζᵢ⊥·ζⱼ) ζⱼ`.
pub fn char_polygon_chi_dual(spec: &MultigridSpec) -> Result<CharPolygon> {
    let generators: Vec<Point> = (0..spec.d())
        .map(|i| {
            let zp = spec.normal(i).perp();
            let sum = spec
                .normals()
                .iter()
                .fold(Point::ZERO, |acc, &z| acc + z * scalar_product(zp, z));
            sum * chi_radius(spec, i)
        })
        .collect();
    Ok(CharPolygon {
        side: Side::Tiling,
        radii: generators.iter().map(|g| g.norm()).collect(),
        polygon: symmetric_polygon(&generators)?,
        generators,
    })
}

pub fn char_polygon(spec: &MultigridSpec, side: Side) -> Result<CharPolygon> {
    match side {
        Side::Multigrid => char_polygon_chi(spec),
        Side::Tiling => char_polygon_chi_dual(spec),
    }
}

/// Points representing a set of crossings on the requested side.
pub fn shape_points<'a>(
    spec: &MultigridSpec,
    crossings: impl IntoIterator<Item = &'a Crossing>,
    side: Side,
) -> Result<Vec<Point>> {
    let mut pts = Vec::new();
    for c in crossings {
        match side {
            Side::Multigrid => pts.push(c.point),
            Side::Tiling => pts.extend(tile_of_crossing(spec, c)?.points()),
        }
    }
    Ok(pts)
}

/// `hull(Pₙ)/n` about the origin.
pub fn normalized_shape<'a>(
    spec: &MultigridSpec,
    crossings: impl IntoIterator<Item = &'a Crossing>,
    n: usize,
    side: Side,
) -> Result<Polygon> {
    if n == 0 {
        return Err(Error::InvalidArgument("normalization needs n ≥ 1".into()));
    }
    let pts = shape_points(spec, crossings, side)?;
    let scaled: Vec<Point> = hull_points(&pts).into_iter().map(|p| p * (1.0 / n as f64)).collect();
    convex_hull(&scaled)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub side: Side,
    /// Always [`SHAPE_KIND`].
    pub shape: &'static str,
    /// Hull of `Pₙ` (unnormalized).
    pub hull: Polygon,
    pub h_n: f64,
}

impl ConvergenceRow {
    pub fn n_times_h(&self) -> f64 {
        self.n as f64 * self.h_n
    }

    pub fn hull_vertices(&self) -> usize {
        self.hull.len()
    }
}

/// Rows of `h_n = Hausdorff(hull(Pₙ)/n, target)` from an existing sequence.
pub fn convergence_rows(
    spec: &MultigridSpec,
    seq: &CoronaSequence,
    ns: &[usize],
    side: Side,
) -> Result<Vec<ConvergenceRow>> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n values must be strictly ascending".into()));
    }
    if let Some(&n) = ns.last() {
        if n > seq.n_max() {
            return Err(Error::InvalidArgument(format!(
                "n = {n} exceeds the explored {} coronas",
                seq.n_max()
            )));
        }
    }
    if ns.first() == Some(&0) {
        return Err(Error::InvalidArgument("normalization needs n ≥ 1".into()));
    }
    let target = char_polygon(spec, side)?;
    let mut rows = Vec::with_capacity(ns.len());
    let mut hull: Vec<Point> = Vec::new();
    let mut done = 0usize;
    for (k, &n) in ns.iter().enumerate() {
        // incremental hull: hull(Pₙ) = hull(hull(P_m) ∪ frontiers m+1..=n)
        let from = if k == 0 { 0 } else { done + 1 };
        let mut pts = hull.clone();
        for f in &seq.frontiers()[from..=n] {
            pts.extend(shape_points(spec, f, side)?);
        }
        hull = hull_points(&pts);
        done = n;
        let polygon = convex_hull(&hull)?;
        let scaled: Vec<Point> = hull.iter().map(|&p| p * (1.0 / n as f64)).collect();
        let h_n = hausdorff_hulls(&scaled, target.vertices());
        rows.push(ConvergenceRow {
            n,
            side,
            shape: SHAPE_KIND,
            hull: polygon,
            h_n,
        });
    }
    Ok(rows)
}

/// Grows coronas of `patch` to `max(ns)` and measures convergence.
pub fn convergence_table(
    spec: &MultigridSpec,
    patch: &Patch,
    ns: &[usize],
    side: Side,
    cap: usize,
) -> Result<Vec<ConvergenceRow>> {
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let seq = corona_sequence(spec, patch, n_max, cap)?;
    convergence_rows(spec, &seq, ns, side)
}

/// Measured sandwich `(n − inner)χ ∩ H ⊆ Cₙ ⊆ (n + outer)χ` on the multigrid side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sandwich {
    pub n: usize,
    pub inner: f64,
    pub outer: f64,
}

impl Sandwich {
    pub fn deviation(&self) -> f64 {
        self.inner.max(self.outer)
    }
}

/// Sandwich constants for each `n < seq.n_max()`.
///
/// `outer` is `max gauge(Cₙ) − n`. `inner` is `n − min gauge` over explored
/// crossings outside `Cₙ` (frontiers `n+1..=n_max`), so `seq` should extend
/// well past the largest `n` of interest.
pub fn sandwich(spec: &MultigridSpec, seq: &CoronaSequence) -> Result<Vec<Sandwich>> {
    let chi = char_polygon_chi(spec)?;
    let gauges: Vec<(f64, f64)> = seq
        .frontiers()
        .iter()
        .map(|f| {
            f.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), c| {
                let g = chi.polygon.gauge(c.point);
                (lo.min(g), hi.max(g))
            })
        })
        .collect();
    let mut out = Vec::new();
    let mut max_in = 0.0f64;
    for n in 0..seq.n_max() {
        max_in = max_in.max(gauges[n].1);
        let min_out = gauges[n + 1..].iter().map(|g| g.0).fold(f64::INFINITY, f64::min);
        out.push(Sandwich {
            n,
            inner: n as f64 - min_out,
            outer: max_in - n as f64,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EndpointRow {
    pub n: usize,
    pub h: f64,
    pub hull_vertices: usize,
}

impl EndpointRow {
    pub fn n_times_h(&self) -> f64 {
        self.n as f64 * self.h
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EndpointsDiagnostic {
    /// Corona steps applied to the seed before every grid met the patch.
    pub grown_by: usize,
    pub rows: Vec<EndpointRow>,
}

impl EndpointsDiagnostic {
    /// `max n·h` over the rows.
    pub fn sandwich_constant(&self) -> f64 {
        self.rows.iter().map(EndpointRow::n_times_h).fold(0.0, f64::max)
    }
}

/// `Hausdorff(hull(Eₙ)/n, χ)` for each `n`; `n = 0` is left unnormalized.
pub fn endpoints_diagnostic(
    spec: &MultigridSpec,
    patch: &Patch,
    ns: &[usize],
) -> Result<EndpointsDiagnostic> {
    const MAX_GROWTH: usize = 1000;
    let chi = char_polygon_chi(spec)?;
    let mut patch = patch.clone();
    let mut grown_by = 0;
    let dominant = loop {
        match dominant_lines(spec, patch.iter()) {
            Ok(d) => break d,
            Err(Error::GridNotRepresented(_)) if grown_by < MAX_GROWTH => {
                patch = corona_step(spec, &patch)?;
                grown_by += 1;
            }
            Err(e) => return Err(e),
        }
    };
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let e = endpoints(spec, &dominant, patch.iter(), n)?;
        let hull = hull_points(&e.points());
        let scale = 1.0 / n.max(1) as f64;
        let scaled: Vec<Point> = hull.iter().map(|&p| p * scale).collect();
        rows.push(EndpointRow {
            n,
            h: hausdorff_hulls(&scaled, chi.vertices()),
            hull_vertices: hull.len(),
        });
    }
    Ok(EndpointsDiagnostic { grown_by, rows })
}

/// `𝓕` applied to `χ`, used to cross-check `χ̃`.
pub fn linear_dual_of_chi(spec: &MultigridSpec) -> Result<Vec<Point>> {
    let chi = char_polygon_chi(spec)?;
    Ok(chi.generators.iter().map(|&g| linear_dual(spec, g)).collect())
}

/// Hausdorff distance between two characteristic polygons.
pub fn char_distance(a: &CharPolygon, b: &CharPolygon) -> f64 {
    hausdorff_distance(&a.polygon, &b.polygon)
}
