//! Distance and density statements checked against breadth-first search.

use corona_core::certify::{crossing_near_origin, random_multigrid};
use corona_core::graph::{ball, corona_sequence, graph_distance, Patch};
use corona_core::multigrid::{
    adjacent_directions, crossings_in_disk, crossings_on_segment, dominant_lines, Crossing, LineId, MultigridSpec,
};
use corona_core::geom::scalar_product;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = 10_000;

fn specs() -> Vec<MultigridSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    vec![MultigridSpec::pentagrid(0.5).unwrap(), random_multigrid(&mut rng, 7)]
}

/// Crossings of `line` with parameter in `(t - half, t + half]`.
fn around(spec: &MultigridSpec, line: LineId, t: f64, half: f64) -> Vec<Crossing> {
    crossings_on_segment(spec, line, t - half, t + half).unwrap()
}

#[test]
fn straight_paths_along_a_line_are_shortest() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for spec in specs() {
        let pool = crossings_in_disk(&spec, 15.0).unwrap();
        for _ in 0..100 {
            let c = pool[rng.gen_range(0..pool.len())];
            let line = c.lines()[rng.gen_range(0..2)];
            let on = around(&spec, line, spec.param(line, c.point), 12.0);
            let a = rng.gen_range(0..on.len());
            let b = rng.gen_range(0..on.len());
            let between = a.abs_diff(b).saturating_sub(1);
            let expected = if a == b { 0 } else { between + 1 };
            assert_eq!(graph_distance(&spec, &on[a], &on[b], CAP).unwrap(), expected, "{} to {}", on[a], on[b]);
        }
    }
}

#[test]
fn corners_of_adjacent_dominant_lines_split_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for spec in specs() {
        let seed = crossing_near_origin(&spec).unwrap();
        let seq = corona_sequence(&spec, &Patch::single(seed), 12, CAP * 100).unwrap();
        let dominant = dominant_lines(&spec, seq.up_to(12)).unwrap();
        let line = |g: usize| *dominant.lines.iter().find(|l| l.grid == g).unwrap();
        let pairs = adjacent_directions(&spec);
        let mut checked = 0;
        let mut rejected = 0;
        while checked < 100 {
            let (i, j) = pairs[checked % pairs.len()];
            let (li, lj) = (line(i), line(j));
            let c = Crossing::new(&spec, li, lj).unwrap();
            let on_i = around(&spec, li, spec.param(li, c.point), 10.0);
            let on_j = around(&spec, lj, spec.param(lj, c.point), 10.0);
            let a = on_i[rng.gen_range(0..on_i.len())];
            let b = on_j[rng.gen_range(0..on_j.len())];
            if scalar_product(c.point - a.point, b.point - c.point) < 0.0 {
                rejected += 1;
                assert!(rejected < 10_000);
                continue;
            }
            checked += 1;
            let ab = graph_distance(&spec, &a, &b, CAP).unwrap();
            let ac = graph_distance(&spec, &a, &c, CAP).unwrap();
            let cb = graph_distance(&spec, &c, &b, CAP).unwrap();
            assert_eq!(ab, ac + cb, "A = {a}, C = {c}, B = {b}");
        }
    }
}

#[test]
fn every_type_is_found_nearby() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let heptagrid = MultigridSpec::dfold(7, (0..7).map(|_| rng.gen_range(0.0..1.0)).collect()).unwrap();
    for spec in [MultigridSpec::pentagrid(0.5).unwrap(), heptagrid] {
        let d = spec.d();
        let mut r1: f64 = 0.0;
        for i in 0..d {
            for j in (0..d).filter(|&j| j != i) {
                r1 = r1.max(1.0 / spec.frequency(i, j).abs());
            }
        }
        let r = 2.0 * r1;
        let k_r = 2 * (d - 1) * r1.ceil() as usize;
        let pool = crossings_in_disk(&spec, 20.0).unwrap();
        for _ in 0..100 {
            let z = pool[rng.gen_range(0..pool.len())];
            let near = ball(&spec, &z, k_r).unwrap();
            for i in 0..d {
                for j in i + 1..d {
                    assert!(
                        near.keys().any(|c| c.types() == (i, j) && c.point.dist(z.point) <= r),
                        "no ({i}, {j}) crossing within {r} and {k_r} steps of {z}"
                    );
                }
            }
        }
    }
}

#[test]
fn frontiers_grow_linearly() {
    let spec = MultigridSpec::pentagrid(0.5).unwrap();
    let seed = crossing_near_origin(&spec).unwrap();
    let seq = corona_sequence(&spec, &Patch::single(seed), 160, 5_000_000).unwrap();
    for n in [40, 50, 60, 70, 80] {
        let ratio = seq.frontier(2 * n).len() as f64 / seq.frontier(n).len() as f64;
        assert!((ratio - 2.0).abs() <= 0.3, "frontier({})/frontier({n}) = {ratio}", 2 * n);
    }
}
