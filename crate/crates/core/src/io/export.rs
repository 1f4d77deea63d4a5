//! Tiling export as JSON Lines: one [`TileRecord`] per line.

use crate::dual::{TileRecord, TilingWindow};

pub fn tiles_jsonl(window: &TilingWindow) -> String {
    records_jsonl(&window.records())
}

pub fn records_jsonl(records: &[TileRecord]) -> String {
    let mut out = String::new();
    for r in records {
        // TileRecord holds only integers and finite floats
        out.push_str(&serde_json::to_string(r).expect("tile record serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::tiling_window;
    use crate::multigrid::MultigridSpec;

    #[test]
    fn one_record_per_tile() {
        let spec = MultigridSpec::pentagrid(0.5).unwrap();
        let w = tiling_window(&spec, 3.0).unwrap();
        let text = tiles_jsonl(&w);
        assert_eq!(text.lines().count(), w.len());
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["keys"].as_array().unwrap().len(), 4);
        assert_eq!(first["keys"][0].as_array().unwrap().len(), 5);
        assert_eq!(first["positions"].as_array().unwrap().len(), 4);
    }
}
