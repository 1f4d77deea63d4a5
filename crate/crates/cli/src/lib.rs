//! The `corona` command line.
//!
//! Every subcommand builds a multigrid from `--config` and/or `--dfold`,
//! `--angles`, `--offsets`, then writes its artifacts into `--out` (a
//! directory) or, without `--out`, prints its main table to stdout.
//!
//! Exit status: 0 on success, 1 on failed certification or a runtime error,
//! 2 on malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use corona_core::analysis::{char_polygon_chi, char_polygon_chi_dual, convergence_rows, endpoints_diagnostic, Side};
use corona_core::certify::{self, crossing_near_origin};
use corona_core::dual::tiling_window;
use corona_core::graph::{corona_sequence, Patch, DEFAULT_MAX_CROSSINGS};
use corona_core::io::config::{build_spec, Seed};
use corona_core::io::{self, svg};
use corona_core::multigrid::{Crossing, MultigridSpec};
use corona_core::sandpile::corona_equivalence;
use corona_core::{Error, Point};

/// Environment variable bounding the number of explored crossings.
pub const CAP_ENV: &str = "CORONA_MAX_CROSSINGS";

#[derive(Debug, Parser)]
#[command(name = "corona", version, about = "Multigrid tilings, coronas and their limit shapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tiles of a window around the origin: JSON Lines export and SVG.
    Gen {
        #[command(flatten)]
        spec: SpecArgs,
        /// Window radius in multigrid coordinates [default: 10]
        #[arg(long)]
        radius: Option<f64>,
        /// Directory for all artifacts; without it the first one goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coronas of a seed patch: SVG shaded by corona index and frontier sizes.
    Corona {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        seed: SeedArgs,
        /// Last corona index [default: 20]
        #[arg(long)]
        n: Option<usize>,
        /// Directory for all artifacts; without it the first one goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertices of the two characteristic polygons.
    Charpoly {
        #[command(flatten)]
        spec: SpecArgs,
        /// Directory for all artifacts; without it the first one goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hausdorff distance of the normalized coronas to the characteristic polygon.
    Converge {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        seed: SeedArgs,
        /// Ascending corona indices [default: 10,20,40,80]
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// multigrid or tiling [default: tiling]
        #[arg(long)]
        side: Option<Side>,
        /// Directory for all artifacts; without it the first one goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hull of the dominant-line endpoints against the characteristic polygon.
    Endpoints {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        seed: SeedArgs,
        /// Corona indices [default: 10,20,40,80]
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Directory for all artifacts; without it the first one goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Avalanche from a max-stable sandpile compared with the coronas.
    Sandpile {
        #[command(flatten)]
        spec: SpecArgs,
        /// Seed crossing [default: the one nearest the origin]
        #[arg(long, value_parser = parse_tile)]
        tile: Option<Seed>,
        /// Window radius [default: 14]
        #[arg(long)]
        radius: Option<f64>,
        /// Toppling rounds
        #[arg(long, default_value_t = 10)]
        rounds: usize,
        /// Directory for all artifacts; without it the first one goes to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the acceptance checks; exit status 1 if any fails.
    Certify {
        /// Seed of the random samples
        #[arg(long, default_value_t = certify::DEFAULT_SEED)]
        seed: u64,
        /// Only these criteria
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// Configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// d directions evenly spread around the circle
    #[arg(long, conflicts_with = "angles")]
    dfold: Option<usize>,
    /// Normal angles in degrees
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Option<Vec<f64>>,
    /// One offset for every grid, or one per grid
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    offsets: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct SeedArgs {
    /// Single crossing `i,j,ki,kj`
    #[arg(long, value_parser = parse_tile, conflicts_with = "ball")]
    tile: Option<Seed>,
    /// k-th corona of the crossing nearest the origin
    #[arg(long)]
    ball: Option<usize>,
}

fn parse_tile(s: &str) -> Result<Seed, String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [i, j, ki, kj] = parts[..] else {
        return Err("expected i,j,ki,kj".into());
    };
    if i < 0 || j < 0 || i == j {
        return Err("grids must be distinct and non-negative".into());
    }
    let (i, j) = (i as usize, j as usize);
    Ok(Seed::Tile(if i < j { (i, ki, j, kj) } else { (j, kj, i, ki) }))
}

/// Failure of a command, carrying its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Validation(_) | Error::InvalidArgument(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

struct Context<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Spec plus the run parameters from the configuration file, if any.
struct Loaded {
    spec: MultigridSpec,
    run: io::RunParams,
}

fn load(args: &SpecArgs, ctx: &mut Context) -> Result<Loaded, Failure> {
    let config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure {
                code: 2,
                message: format!("{}: {e}", path.display()),
            })?;
            Some(io::parse_spec(&text)?)
        }
        None => None,
    };
    let mut warnings = Vec::new();
    let spec = match (&config, args.dfold, &args.angles) {
        (_, Some(_), _) | (_, _, Some(_)) => {
            build_spec(args.dfold, args.angles.clone(), None, args.offsets.clone(), &mut warnings)?
        }
        (Some(c), None, None) => match &args.offsets {
            Some(o) => build_spec(None, None, Some(c.spec.normals().to_vec()), Some(o.clone()), &mut warnings)?,
            None => c.spec.clone(),
        },
        (None, None, None) => {
            return Err(Error::Validation("no multigrid given: use --dfold, --angles or --config".into()).into())
        }
    };
    if let Some(c) = &config {
        warnings.extend(c.warnings.iter().cloned());
    }
    for w in warnings {
        writeln!(ctx.err, "warning: {w}")?;
    }
    Ok(Loaded {
        spec,
        run: config.map(|c| c.run).unwrap_or_default(),
    })
}

fn cap(run: &io::RunParams) -> Result<usize, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("{CAP_ENV} must be a positive integer, got {v:?}")).into()),
        Err(_) => Ok(run.cap.unwrap_or(DEFAULT_MAX_CROSSINGS)),
    }
}

fn seed_patch(spec: &MultigridSpec, seed: Option<Seed>, cap: usize) -> Result<Patch, Failure> {
    match seed {
        Some(Seed::Tile(key)) => Ok(Patch::single(Crossing::from_key(spec, key)?)),
        Some(Seed::Ball(k)) => {
            let c = crossing_near_origin(spec)?;
            Ok(corona_sequence(spec, &Patch::single(c), k, cap)?.patch(k))
        }
        None => Ok(Patch::single(crossing_near_origin(spec)?)),
    }
}

fn choose_seed(args: &SeedArgs, run: &io::RunParams) -> Option<Seed> {
    args.tile.or(args.ball.map(Seed::Ball)).or(run.seed)
}

/// Writes `files` into `dir`, or prints the first one when there is no directory.
fn emit(ctx: &mut Context, dir: Option<&Path>, files: &[(&str, &str)]) -> CmdResult {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for (name, body) in files {
                let path = dir.join(name);
                fs::write(&path, body)?;
                writeln!(ctx.out, "wrote {}", path.display())?;
            }
        }
        None => {
            if let Some((_, body)) = files.first() {
                ctx.out.write_all(body.as_bytes())?;
            }
        }
    }
    Ok(0)
}

fn render(scene: &svg::SceneSpec) -> Result<String, Failure> {
    Ok(io::render_svg(scene)?)
}

fn execute(cli: Cli, ctx: &mut Context) -> CmdResult {
    match cli.command {
        Command::Gen { spec, radius, out } => {
            let l = load(&spec, ctx)?;
            let radius = radius.or(l.run.radius).unwrap_or(10.0);
            let window = tiling_window(&l.spec, radius)?;
            let jsonl = io::tiles_jsonl(&window);
            let svg = if window.is_empty() {
                None
            } else {
                Some(render(&svg::tiling_scene(&window))?)
            };
            let mut files = vec![("tiles.jsonl", jsonl.as_str())];
            if let Some(s) = &svg {
                files.push(("tiling.svg", s.as_str()));
            }
            emit(ctx, out.as_deref(), &files)
        }
        Command::Corona { spec, seed, n, out } => {
            let l = load(&spec, ctx)?;
            let cap = cap(&l.run)?;
            let n = n.or(l.run.n.last().copied()).unwrap_or(20);
            let patch = seed_patch(&l.spec, choose_seed(&seed, &l.run), cap)?;
            let seq = corona_sequence(&l.spec, &patch, n, cap)?;
            let csv = io::frontier_csv(&seq);
            let chid = char_polygon_chi_dual(&l.spec)?;
            let overlay: Vec<Point> = chid.vertices().iter().map(|&p| p * n.max(1) as f64).collect();
            let svg = render(&svg::corona_scene(&l.spec, &seq, n, &[overlay])?)?;
            emit(ctx, out.as_deref(), &[("frontier.csv", &csv), ("corona.svg", &svg)])
        }
        Command::Charpoly { spec, out } => {
            let l = load(&spec, ctx)?;
            let chi = char_polygon_chi(&l.spec)?;
            let chid = char_polygon_chi_dual(&l.spec)?;
            let csv = io::charpoly_csv(&[&chi, &chid]);
            let svg = render(&svg::polygons_scene(&[&chi, &chid]))?;
            emit(ctx, out.as_deref(), &[("charpoly.csv", &csv), ("charpoly.svg", &svg)])
        }
        Command::Converge { spec, seed, n, side, out } => {
            let l = load(&spec, ctx)?;
            let cap = cap(&l.run)?;
            let ns = pick_ns(n, &l.run);
            let side = side.or(l.run.side).unwrap_or(Side::Tiling);
            let patch = seed_patch(&l.spec, choose_seed(&seed, &l.run), cap)?;
            let n_max = ns.iter().copied().max().unwrap_or(0);
            let seq = corona_sequence(&l.spec, &patch, n_max, cap)?;
            let rows = convergence_rows(&l.spec, &seq, &ns, side)?;
            emit(ctx, out.as_deref(), &[("convergence.csv", &io::convergence_csv(&rows))])
        }
        Command::Endpoints { spec, seed, n, out } => {
            let l = load(&spec, ctx)?;
            let cap = cap(&l.run)?;
            let ns = pick_ns(n, &l.run);
            let patch = seed_patch(&l.spec, choose_seed(&seed, &l.run), cap)?;
            let diag = endpoints_diagnostic(&l.spec, &patch, &ns)?;
            if diag.grown_by > 0 {
                writeln!(ctx.err, "note: seed grown by {} coronas to meet every grid", diag.grown_by)?;
            }
            emit(ctx, out.as_deref(), &[("endpoints.csv", &io::endpoints_csv(&diag))])
        }
        Command::Sandpile { spec, tile, radius, rounds, out } => {
            let l = load(&spec, ctx)?;
            let radius = radius.or(l.run.radius).unwrap_or(14.0);
            let window = tiling_window(&l.spec, radius)?;
            let seed = match tile.or(l.run.seed) {
                Some(Seed::Tile(key)) => Crossing::from_key(&l.spec, key)?,
                Some(Seed::Ball(_)) => {
                    return Err(Error::Validation("the sandpile seed must be a single tile".into()).into())
                }
                None => crossing_near_origin(&l.spec)?,
            };
            let report = corona_equivalence(&window, &seed, rounds)?;
            let code = emit(ctx, out.as_deref(), &[("sandpile.csv", &io::equivalence_csv(&report))])?;
            writeln!(
                ctx.err,
                "toppled by round n+1 {} corona n for all {} rounds",
                if report.all_equal() { "equals" } else { "differs from" },
                rounds
            )?;
            Ok(code)
        }
        Command::Certify { seed, only } => {
            let ids: Vec<u8> = if only.is_empty() { certify::criterion_ids().collect() } else { only };
            let mut failed = 0;
            for id in ids {
                let r = certify::run(id, seed)?;
                writeln!(ctx.out, "{r}")?;
                if !r.passed {
                    failed += 1;
                }
            }
            writeln!(ctx.out, "{}", if failed == 0 { "all criteria passed".to_string() } else { format!("{failed} criteria failed") })?;
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn pick_ns(flag: Vec<usize>, run: &io::RunParams) -> Vec<usize> {
    if !flag.is_empty() {
        flag
    } else if !run.n.is_empty() {
        run.n.clone()
    } else {
        vec![10, 20, 40, 80]
    }
}

/// Runs the command line `argv` (including the program name), writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Context { out, err };
    match execute(cli, &mut ctx) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.err, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs `argv` against stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
