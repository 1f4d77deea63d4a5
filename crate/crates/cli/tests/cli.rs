use std::fs;

use corona_cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("corona").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn charpoly_prints_pentagrid_radii() {
    let (code, out, _) = run(&["charpoly", "--dfold", "5"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("side,vertex,radius,x,y\n"));
    assert!(out.contains("0.324920"));
    assert!(out.contains("0.812299"));
}

#[test]
fn converge_decreases() {
    let (code, out, _) = run(&["converge", "--dfold", "5", "--offsets", "0.5", "--n", "10,20,40,80"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,side,h_n,n_times_h_n,hull_vertices");
    let h: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(h.len(), 4);
    assert!(h.iter().all(|&x| x > 0.0));
    assert!(h[3] < h[0]);
}

#[test]
fn parallel_angles_exit_2() {
    let (code, _, err) = run(&["gen", "--angles", "0,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("validation error"), "{err}");
}

#[test]
fn malformed_input_exit_2() {
    assert_eq!(run(&["gen"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["converge", "--dfold", "5", "--n", "20,10"]).0, 2);
    assert_eq!(run(&["corona", "--dfold", "5", "--tile", "0,0,1,1"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "dfold: 5\nradius 3\n").unwrap();
    let (code, _, err) = run(&["gen", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn runtime_failure_exit_1() {
    // window too small for ten rounds
    let (code, _, err) = run(&["sandpile", "--dfold", "5", "--radius", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("boundary"), "{err}");
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("penta.cfg");
    fs::write(&cfg, "# pentagrid\ndfold: 5\noffsets: [0.5 x 5]\nn: [5, 10]\nside: multigrid\n").unwrap();
    let (code, out, _) = run(&["converge", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert!(out.contains("\n10,multigrid,"));
}

#[test]
fn artifacts_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let d = dir.path().to_str().unwrap();
        assert_eq!(run(&["gen", "--dfold", "5", "--radius", "4", "--out", d]).0, 0);
        assert_eq!(run(&["corona", "--dfold", "5", "--n", "8", "--out", d]).0, 0);
        assert_eq!(run(&["charpoly", "--dfold", "5", "--out", d]).0, 0);
        assert_eq!(run(&["sandpile", "--dfold", "5", "--out", d]).0, 0);
    }
    let names = [
        "tiles.jsonl",
        "tiling.svg",
        "frontier.csv",
        "corona.svg",
        "charpoly.csv",
        "charpoly.svg",
        "sandpile.csv",
    ];
    for name in names {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty(), "{name} is empty");
        assert_eq!(x, y, "{name} differs between runs");
    }
}

#[test]
fn seeds_by_tile_and_ball() {
    let (code, out, _) = run(&["corona", "--dfold", "5", "--tile", "0,1,0,0", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n,frontier,patch\n0,1,1\n"));
    let (code, out, _) = run(&["corona", "--dfold", "5", "--ball", "2", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n,frontier,patch\n0,12,12\n"), "{out}");
}

#[test]
fn certify_subset_passes() {
    let (code, out, _) = run(&["certify", "--only", "1,7,10"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
}

#[test]
fn cap_from_environment() {
    // run in a child so the variable does not leak into other tests
    let exe = env!("CARGO_BIN_EXE_corona");
    let status = std::process::Command::new(exe)
        .args(["corona", "--dfold", "5", "--n", "40"])
        .env("CORONA_MAX_CROSSINGS", "100")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&status.stderr).contains("cap of 100"));
}
