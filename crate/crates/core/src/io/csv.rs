//! CSV tables. Header row, `.` decimals, `\n` line endings.

use crate::analysis::{CharPolygon, ConvergenceRow, EndpointsDiagnostic, Sandwich};
use crate::graph::CoronaSequence;
use crate::sandpile::EquivalenceReport;

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    // writing into memory cannot fail
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Fixed decimals, with values that round to zero written without a sign.
fn fixed(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// `n,side,h_n,n_times_h_n,hull_vertices`
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    table(
        &["n", "side", "h_n", "n_times_h_n", "hull_vertices"],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.side.to_string(),
                fixed(r.h_n, 9),
                fixed(r.n_times_h(), 9),
                r.hull_vertices().to_string(),
            ]
        }),
    )
}

/// Size of each frontier and of the patch up to it.
pub fn frontier_csv(seq: &CoronaSequence) -> String {
    table(
        &["n", "frontier", "patch"],
        (0..=seq.n_max()).map(|n| {
            vec![n.to_string(), seq.frontier(n).len().to_string(), seq.size(n).to_string()]
        }),
    )
}

/// One row per vertex of each polygon.
pub fn charpoly_csv(polygons: &[&CharPolygon]) -> String {
    table(
        &["side", "vertex", "radius", "x", "y"],
        polygons.iter().flat_map(|p| {
            p.vertices().iter().enumerate().map(move |(k, v)| {
                vec![p.side.to_string(), k.to_string(), fixed(v.norm(), 6), fixed(v.re, 6), fixed(v.im, 6)]
            })
        }),
    )
}

pub fn endpoints_csv(diag: &EndpointsDiagnostic) -> String {
    table(
        &["n", "h_n", "n_times_h_n", "hull_vertices"],
        diag.rows.iter().map(|r| {
            vec![r.n.to_string(), fixed(r.h, 9), fixed(r.n_times_h(), 9), r.hull_vertices.to_string()]
        }),
    )
}

pub fn sandwich_csv(rows: &[Sandwich]) -> String {
    table(
        &["n", "inner", "outer", "deviation"],
        rows.iter().map(|s| {
            vec![s.n.to_string(), fixed(s.inner, 9), fixed(s.outer, 9), fixed(s.deviation(), 9)]
        }),
    )
}

pub fn equivalence_csv(report: &EquivalenceReport) -> String {
    table(
        &["round", "corona", "toppled", "corona_size", "equal"],
        report.rows.iter().map(|r| {
            vec![
                r.round.to_string(),
                (r.round - report.offset).to_string(),
                r.toppled.to_string(),
                r.corona_size.to_string(),
                r.equal.to_string(),
            ]
        }),
    )
}
