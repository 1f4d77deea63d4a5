//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p corona-core --test acceptance -- --nocapture`.
//! Tolerances and runtime limits are fixed in `corona_core::certify`.

use corona_core::certify::{run_all, DEFAULT_SEED};

#[test]
fn acceptance_criteria() {
    let results = run_all(DEFAULT_SEED);
    assert_eq!(results.len(), 10);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
