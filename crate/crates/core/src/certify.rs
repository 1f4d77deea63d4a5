//! The acceptance criteria as runnable checks.
//!
//! Each check returns a [`CriterionResult`] instead of panicking so the CLI
//! can report every line and the test harness can assert on all of them.
//! Random sampling uses a seeded ChaCha generator; seed 0 is the default.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    char_polygon_chi, char_polygon_chi_dual, convergence_rows, endpoints_diagnostic, Side,
};
use crate::dual::{dualize_f, linear_dual, tiling_window, Tile};
use crate::error::{Error, Result};
use crate::geom::{hausdorff_hulls, scalar_product, Point};
use crate::graph::{corona_sequence, graph_distance, Patch};
use crate::multigrid::{
    adjacent_directions, check_regular, count_crossings_cj, crossings_in_disk, crossings_on_segment, Crossing, LineId,
    MultigridSpec,
};
use crate::sandpile::corona_equivalence;

pub const DEFAULT_SEED: u64 = 0;

/// Exploration cap used by every check.
const CAP: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionResult {
    pub fn within_limit(&self) -> bool {
        self.elapsed <= self.limit
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({:.3} s, limit {} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs_f64(),
            self.detail
        )
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

type Check = fn(&mut ChaCha8Rng) -> Result<Outcome>;

const CRITERIA: [(u8, &str, f64, Check); 10] = [
    (1, "pentagrid characteristic radii", 0.001, c1_radii),
    (2, "almost-linearity of the dualization", 1.0, c2_almost_linear),
    (3, "crossing-count bound", 1.0, c3_crossing_count),
    (4, "shortest-path lemmas", 30.0, c4_shortest_paths),
    (5, "edge-to-edge rhombus tiling", 10.0, c5_edge_to_edge),
    (6, "corona limit is the characteristic polygon", 60.0, c6_main_theorem),
    (7, "square grid diamond", 5.0, c7_square_diamond),
    (8, "endpoints limit", 10.0, c8_endpoints),
    (9, "sandpile avalanche equals coronas", 10.0, c9_sandpile),
    (10, "singularity detection", 5.0, c10_singularity),
];

pub fn criterion_ids() -> impl Iterator<Item = u8> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs one criterion. A criterion passes only if its check holds and it
/// finishes within its runtime limit.
pub fn run(id: u8, seed: u64) -> Result<CriterionResult> {
    let &(id, name, limit, check) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(id as u64));
    let start = Instant::now();
    let outcome = check(&mut rng);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs_f64(limit);
    let (ok, mut detail) = match outcome {
        Ok(o) => (o.ok, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > limit {
        detail.push_str("; over the runtime limit");
    }
    Ok(CriterionResult {
        id,
        name,
        passed: ok && elapsed <= limit,
        detail,
        elapsed,
        limit,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    criterion_ids()
        .map(|id| run(id, seed).expect("known criterion"))
        .collect()
}

fn outcome(ok: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { ok, detail })
}

/// A `d`-grid with random directions at least 3° from parallel and random offsets.
pub fn random_multigrid(rng: &mut impl Rng, d: usize) -> MultigridSpec {
    let min_gap = 3f64.to_radians();
    loop {
        let mut angles: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..PI)).collect();
        angles.sort_by(f64::total_cmp);
        let mut gaps: Vec<f64> = angles.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.push(angles[0] + PI - angles[d - 1]);
        if gaps.iter().any(|&g| g < min_gap) {
            continue;
        }
        let offsets = (0..d).map(|_| rng.gen_range(0.0..1.0)).collect();
        let normals = angles.iter().map(|&a| Point::from_angle(a)).collect();
        if let Ok(spec) = MultigridSpec::new(normals, offsets) {
            return spec;
        }
    }
}

/// Crossing closest to the origin.
pub fn crossing_near_origin(spec: &MultigridSpec) -> Result<Crossing> {
    let mut r = 1.0;
    loop {
        let cs = crossings_in_disk(spec, r)?;
        if let Some(c) = cs.into_iter().min_by(|a, b| a.point.norm().total_cmp(&b.point.norm())) {
            return Ok(c);
        }
        r *= 2.0;
    }
}

fn c1_radii(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = MultigridSpec::pentagrid(0.5)?;
    let expected = 1.0 / (2.0 * (2.0 * PI / 5.0).sin() + 2.0 * (4.0 * PI / 5.0).sin());
    let chi = char_polygon_chi(&spec)?;
    let chid = char_polygon_chi_dual(&spec)?;
    let chi0 = chi.radii[0];
    let chid0 = chid.generators[0].norm();
    let mut ok = (chi0 - expected).abs() <= 1e-6 && (chid0 - 2.5 * expected).abs() <= 1e-6;
    let mut worst_radius: f64 = 0.0;
    let mut worst_angle: f64 = 0.0;
    for p in [&chi, &chid] {
        let v = p.vertices();
        ok &= v.len() == 10;
        let r0 = v[0].norm();
        for k in 0..v.len() {
            worst_radius = worst_radius.max((v[k].norm() - r0).abs());
            let step = (v[(k + 1) % v.len()].arg() - v[k].arg()).rem_euclid(TAU);
            worst_angle = worst_angle.max((step - TAU / 10.0).abs());
        }
    }
    ok &= worst_radius <= 1e-9 && worst_angle <= 1e-9;
    outcome(
        ok,
        format!(
            "chi0 = {chi0:.9} (closed form {expected:.9}), |chi~0| = {chid0:.9}, decagon radius spread {worst_radius:.1e}, angle error {worst_angle:.1e}"
        ),
    )
}

fn c2_almost_linear(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let specs = [MultigridSpec::pentagrid(0.5)?, random_multigrid(rng, 7)];
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in &specs {
        let bound = 2.0 * spec.d() as f64;
        let mut worst: f64 = 0.0;
        let mut taken = 0;
        while taken < 10_000 {
            let r = 1000.0 * rng.gen::<f64>().sqrt();
            let z = Point::from_angle(rng.gen_range(0.0..TAU)) * r;
            let f = match dualize_f(spec, z) {
                Ok(v) => v.position,
                Err(Error::OnGridLine(_)) => continue,
                Err(e) => return Err(e),
            };
            worst = worst.max(f.dist(linear_dual(spec, z)));
            taken += 1;
        }
        ok &= worst <= bound;
        parts.push(format!("d = {}: max |F - linear| = {worst:.4} <= {bound}", spec.d()));
    }
    outcome(ok, parts.join("; "))
}

fn c3_crossing_count(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let specs = [MultigridSpec::pentagrid(0.5)?, random_multigrid(rng, 7)];
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in &specs {
        let d = spec.d();
        let mut worst: f64 = 0.0;
        let mut mismatches = 0;
        for sample in 0..1000 {
            let i = rng.gen_range(0..d);
            let line = LineId::new(i, rng.gen_range(-100..=100));
            let t = rng.gen_range(-1000.0..1000.0);
            let z = spec.line_point(line, t);
            let alpha = 1000.0 * (1.0 - rng.gen::<f64>());
            let j = (i + rng.gen_range(1..d)) % d;
            let c = count_crossings_cj(spec, line, z, alpha, j)?;
            worst = worst.max((c as f64 - alpha * spec.frequency(i, j).abs()).abs());
            // enumeration cross-check on a tenth of the samples
            if sample % 10 == 0 {
                let listed = crossings_on_segment(spec, line, t, t + alpha)?
                    .iter()
                    .filter(|x| x.line_on_grid(j).is_some())
                    .count() as u64;
                if listed != c {
                    mismatches += 1;
                }
            }
        }
        ok &= worst <= 2.0 && mismatches == 0;
        parts.push(format!(
            "d = {d}: max |c_j - alpha*freq| = {worst:.4}, enumeration mismatches {mismatches}"
        ));
    }
    outcome(ok, parts.join("; "))
}

/// Crossings of `line` inside the disk of radius `r`, in order along the line.
fn line_in_disk(spec: &MultigridSpec, line: LineId, r: f64) -> Result<Vec<Crossing>> {
    let h2 = r * r - spec.foot(line).norm_sqr();
    if h2 <= 0.0 {
        return Ok(Vec::new());
    }
    let h = h2.sqrt();
    crossings_on_segment(spec, line, -h, h)
}

fn position(list: &[Crossing], c: &Crossing) -> usize {
    list.iter().position(|x| x == c).expect("crossing lies on its own line")
}

fn c4_shortest_paths(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    const R: f64 = 30.0;
    let spec = MultigridSpec::pentagrid(0.5)?;
    let all = crossings_in_disk(&spec, R)?;
    let mut same_bad = 0;
    for _ in 0..100 {
        let c = all[rng.gen_range(0..all.len())];
        let line = c.lines()[rng.gen_range(0..2)];
        let on = line_in_disk(&spec, line, R)?;
        let a = rng.gen_range(0..on.len());
        let mut b = rng.gen_range(0..on.len() - 1);
        if b >= a {
            b += 1;
        }
        let between = a.abs_diff(b) - 1;
        if graph_distance(&spec, &on[a], &on[b], CAP)? != between + 1 {
            same_bad += 1;
        }
    }
    // the corner C must join two adjacent directions
    let adjacent: Vec<(usize, usize)> = adjacent_directions(&spec)
        .into_iter()
        .map(|(i, j)| (i.min(j), i.max(j)))
        .collect();
    let corners: Vec<Crossing> = all.iter().filter(|c| adjacent.contains(&c.types())).copied().collect();
    let mut pair_bad = 0;
    let mut rejected = 0;
    let mut done = 0;
    while done < 100 {
        let c = corners[rng.gen_range(0..corners.len())];
        let (la, lb) = (line_in_disk(&spec, c.a, R)?, line_in_disk(&spec, c.b, R)?);
        let a = la[rng.gen_range(0..la.len())];
        let b = lb[rng.gen_range(0..lb.len())];
        if a == c || b == c || scalar_product(c.point - a.point, b.point - c.point) < 0.0 {
            rejected += 1;
            continue;
        }
        done += 1;
        let dac = position(&la, &a).abs_diff(position(&la, &c));
        let dcb = position(&lb, &c).abs_diff(position(&lb, &b));
        let dab = graph_distance(&spec, &a, &b, CAP)?;
        if dab != dac + dcb {
            pair_bad += 1;
        }
    }
    outcome(
        same_bad == 0 && pair_bad == 0,
        format!(
            "same-line violations {same_bad}/100, two-line additivity violations {pair_bad}/100 ({rejected} pairs rejected by the angle condition)"
        ),
    )
}

/// Interiors of two convex polygons overlap by more than `eps` along every axis.
fn interiors_overlap(p: &[Point], q: &[Point], eps: f64) -> bool {
    for poly in [p, q] {
        for k in 0..poly.len() {
            let e = poly[(k + 1) % poly.len()] - poly[k];
            let axis = e.perp();
            let proj = |s: &[Point]| {
                s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    let x = scalar_product(v, axis);
                    (lo.min(x), hi.max(x))
                })
            };
            let ((a0, a1), (b0, b1)) = (proj(p), proj(q));
            if a1.min(b1) - a0.max(b0) <= eps {
                return false;
            }
        }
    }
    true
}

fn is_unit_rhombus(t: &Tile) -> bool {
    let p = t.points();
    let sides: Vec<Point> = (0..4).map(|k| p[(k + 1) % 4] - p[k]).collect();
    sides.iter().all(|s| (s.norm() - 1.0).abs() <= 1e-9)
        && (sides[0] + sides[2]).norm() <= 1e-9
        && (sides[1] + sides[3]).norm() <= 1e-9
        && (sides[0].re * sides[1].im - sides[0].im * sides[1].re).abs() > 1e-9
}

fn c5_edge_to_edge(_: &mut ChaCha8Rng) -> Result<Outcome> {
    const R: f64 = 12.0;
    let spec = MultigridSpec::pentagrid(0.5)?;
    let window = tiling_window(&spec, R)?;
    let tiles: Vec<&Tile> = window.tiles().values().collect();
    let not_rhombi = tiles.iter().filter(|t| !is_unit_rhombus(t)).count();

    // spatial hash on tile centers; overlapping unit rhombi have centers closer than 2
    let cell = |p: Point| ((p.re / 2.0).floor() as i64, (p.im / 2.0).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, t) in tiles.iter().enumerate() {
        buckets.entry(cell(t.center())).or_default().push(k);
    }
    let mut overlaps = 0;
    for (k, t) in tiles.iter().enumerate() {
        let (cx, cy) = cell(t.center());
        let pk = t.points();
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &m in buckets.get(&(cx + dx, cy + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                    if m > k && interiors_overlap(&pk, &tiles[m].points(), 1e-9) {
                        overlaps += 1;
                    }
                }
            }
        }
    }

    // edges keyed by their endpoint positions, rounded well below the unit edge length
    let snap = |p: Point| ((p.re * 1e6).round() as i64, (p.im * 1e6).round() as i64);
    let mut edges: HashMap<[(i64, i64); 2], usize> = HashMap::new();
    for t in &tiles {
        let p = t.points();
        for k in 0..4 {
            let mut e = [snap(p[k]), snap(p[(k + 1) % 4])];
            e.sort();
            *edges.entry(e).or_default() += 1;
        }
    }
    // an edge within this radius of the origin has both its tiles in the window
    let d = spec.d() as f64;
    let interior = d / 2.0 * R - 2.0 * d - 2.0;
    let mut interior_edges = 0;
    let mut bad_interior = 0;
    let over_shared = edges.values().filter(|&&n| n > 2).count();
    for (e, &n) in &edges {
        let mid = Point::new(e[0].0 as f64 + e[1].0 as f64, e[0].1 as f64 + e[1].1 as f64) * 0.5e-6;
        if mid.norm() <= interior {
            interior_edges += 1;
            if n != 2 {
                bad_interior += 1;
            }
        }
    }
    outcome(
        not_rhombi == 0 && overlaps == 0 && over_shared == 0 && bad_interior == 0 && interior_edges > 0,
        format!(
            "{} tiles: {not_rhombi} not unit rhombi, {overlaps} overlapping pairs, {over_shared} edges on more than 2 tiles, {bad_interior} of {interior_edges} interior edges not shared by exactly 2",
            tiles.len()
        ),
    )
}

const THEOREM_NS: [usize; 4] = [10, 20, 40, 80];

/// `h_n` of the tiling-side coronas of `spec`, measured against `target`.
fn corona_limit_rows(spec: &MultigridSpec, target: &[Point]) -> Result<Vec<(usize, f64)>> {
    let seed = crossing_near_origin(spec)?;
    let seq = corona_sequence(spec, &Patch::single(seed), 80, CAP)?;
    let rows = convergence_rows(spec, &seq, &THEOREM_NS, Side::Tiling)?;
    Ok(rows
        .iter()
        .map(|r| {
            let scaled: Vec<Point> = r.hull.vertices().iter().map(|&p| p * (1.0 / r.n as f64)).collect();
            (r.n, hausdorff_hulls(&scaled, target))
        })
        .collect())
}

fn c6_main_theorem(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let half = MultigridSpec::pentagrid(0.5)?;
    let offsets = loop {
        let g: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..1.0)).collect();
        let frac = g.iter().sum::<f64>().fract();
        if (0.1..=0.9).contains(&frac) {
            break g;
        }
    };
    let random = MultigridSpec::dfold(5, offsets.clone())?;
    let target = char_polygon_chi_dual(&half)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, spec) in [("offsets 1/2", &half), ("random offsets", &random)] {
        let rows = corona_limit_rows(spec, target.vertices())?;
        let h10 = rows[0].1;
        let h80 = rows[3].1;
        ok &= h80 < h10 && h80 <= 0.1;
        let hs: Vec<String> = rows.iter().map(|(n, h)| format!("h_{n} = {h:.4}")).collect();
        parts.push(format!("{label}: {}", hs.join(", ")));
    }
    outcome(ok, format!("{} (random offsets {offsets:.3?})", parts.join("; ")))
}

fn c7_square_diamond(_: &mut ChaCha8Rng) -> Result<Outcome> {
    const N: usize = 50;
    let spec = MultigridSpec::square([0.5, 0.5])?;
    let seed = Crossing::from_key(&spec, (0, 0, 1, 0))?;
    let seq = corona_sequence(&spec, &Patch::single(seed), N, CAP)?;
    let mut count_bad = 0;
    for n in 0..=N {
        let lattice = (-(n as i64)..=n as i64)
            .map(|x| 2 * (n as i64 - x.abs()) + 1)
            .sum::<i64>() as usize;
        if seq.size(n) != 2 * n * n + 2 * n + 1 || seq.size(n) != lattice {
            count_bad += 1;
        }
    }
    let ns: Vec<usize> = (1..=N).collect();
    let rows = convergence_rows(&spec, &seq, &ns, Side::Multigrid)?;
    let worst = rows.iter().map(|r| r.n_times_h()).fold(0.0, f64::max);
    outcome(
        count_bad == 0 && worst <= 2.0,
        format!("{count_bad} size mismatches for n <= {N}, max n*h_n = {worst:.6}"),
    )
}

fn c8_endpoints(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = MultigridSpec::pentagrid(0.5)?;
    let seed = crossing_near_origin(&spec)?;
    let ns = [5, 10, 20, 40, 80];
    let diag = endpoints_diagnostic(&spec, &Patch::single(seed), &ns)?;
    let h = |n: usize| diag.rows.iter().find(|r| r.n == n).map(|r| r.h).unwrap_or(f64::NAN);
    let early = diag
        .rows
        .iter()
        .filter(|r| r.n <= 40)
        .map(|r| r.n_times_h())
        .fold(0.0, f64::max);
    let constant = diag.sandwich_constant();
    let late = 80.0 * h(80);
    let ok = h(80) < h(20) && constant.is_finite() && late <= 2.0 * early;
    outcome(
        ok,
        format!(
            "h_20 = {:.4}, h_80 = {:.4}, max n*h = {constant:.4} (n <= 40: {early:.4}, n = 80: {late:.4})",
            h(20),
            h(80)
        ),
    )
}

fn c9_sandpile(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = MultigridSpec::pentagrid(0.5)?;
    let window = tiling_window(&spec, 14.0)?;
    let seed = crossing_near_origin(&spec)?;
    let report = corona_equivalence(&window, &seed, 10)?;
    let sizes: Vec<String> = report.rows.iter().map(|r| r.toppled.to_string()).collect();
    outcome(
        report.all_equal(),
        format!(
            "toppled by round n+1 = corona n for {} of {} rounds; sizes {}",
            report.rows.iter().filter(|r| r.equal).count(),
            report.rows.len(),
            sizes.join(",")
        ),
    )
}

fn c10_singularity(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let zero = MultigridSpec::pentagrid(0.0)?;
    let report = check_regular(&zero, 1.0)?;
    let at_origin = report.triples.iter().any(|t| t.point.norm() <= 1e-9);
    let half = MultigridSpec::pentagrid(0.5)?;
    let regular = check_regular(&half, 20.0)?;
    outcome(
        at_origin && regular.is_regular(),
        format!(
            "zero offsets: {} singular triples near the origin (origin flagged: {at_origin}); offsets 1/2: {} crossings examined, {} triples",
            report.triples.len(),
            regular.crossings_examined,
            regular.triples.len()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion() {
        assert!(run(11, 0).is_err());
    }

    #[test]
    fn random_multigrid_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(random_multigrid(&mut rng, 7).d(), 7);
        }
    }

    #[test]
    fn overlap_predicate() {
        let sq = |x: f64| {
            [
                Point::new(x, 0.0),
                Point::new(x + 1.0, 0.0),
                Point::new(x + 1.0, 1.0),
                Point::new(x, 1.0),
            ]
        };
        assert!(interiors_overlap(&sq(0.0), &sq(0.5), 1e-9));
        assert!(!interiors_overlap(&sq(0.0), &sq(1.0), 1e-9));
        assert!(!interiors_overlap(&sq(0.0), &sq(2.0), 1e-9));
    }
}
