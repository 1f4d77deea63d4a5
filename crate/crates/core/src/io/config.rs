//! Plain-text key/value configuration.
//!
//! ```text
//! # pentagrid of offsets ½
//! dfold: 5
//! offsets: [0.5 x 5]
//! n: [10, 20, 40, 80]
//! ```
//!
//! Grammar:
//!
//! ```text
//! document := (item (NEWLINE | ',')*)*
//! item     := KEY (':' | '=') value
//! value    := NUMBER | NUMBER ('x' | '*' | '×') INTEGER | WORD | '[' (value (',' value)*)? ']'
//! ```
//!
//! `#` starts a comment. A repeated number (`0.5 x 5`) expands to that many
//! copies inside a list. Keys:
//!
//! | key       | value                                  |
//! |-----------|----------------------------------------|
//! | `dfold`   | integer `d`: normals `e^{2πik/d}`       |
//! | `angles`  | list of normal angles in degrees       |
//! | `normals` | list of `[re, im]` unit vectors        |
//! | `offsets` | list, or one number for every grid (default ½) |
//! | `radius`  | window radius                          |
//! | `n`       | number or list of corona indices       |
//! | `tile`    | seed crossing `[i, j, ki, kj]`         |
//! | `ball`    | seed = `k`-th corona of the crossing nearest the origin |
//! | `cap`     | maximum explored crossings             |
//! | `side`    | `multigrid` or `tiling`                |
//!
//! Exactly one of `dfold`, `angles`, `normals` is required.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::analysis::Side;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::multigrid::{CrossingKey, MultigridSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Number(f64),
    Word(String),
    List(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    value: Value,
    line: usize,
    column: usize,
}

/// How the initial patch is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Seed {
    /// A single crossing.
    Tile(CrossingKey),
    /// The `k`-th corona of the crossing nearest the origin.
    Ball(usize),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunParams {
    pub radius: Option<f64>,
    pub n: Vec<usize>,
    pub seed: Option<Seed>,
    pub cap: Option<usize>,
    pub side: Option<Side>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub spec: MultigridSpec,
    pub run: RunParams,
    pub warnings: Vec<String>,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            _src: src,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Skips blanks and comments; newlines too when `newlines` is set.
    fn skip(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            match c {
                '#' => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                '\n' if !newlines => break,
                c if c.is_whitespace() => {
                    self.bump();
                }
                _ => break,
            }
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '+' | '.') {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn document(&mut self) -> Result<BTreeMap<String, Entry>> {
        let mut out = BTreeMap::new();
        loop {
            self.skip(true);
            while self.peek() == Some(',') {
                self.bump();
                self.skip(true);
            }
            if self.peek().is_none() {
                return Ok(out);
            }
            let (line, column) = (self.line, self.column);
            let key = self.word();
            if key.is_empty() {
                return self.error(format!("expected a key, found {:?}", self.peek().unwrap_or(' ')));
            }
            self.skip(false);
            match self.peek() {
                Some(':') | Some('=') => {
                    self.bump();
                }
                _ => return self.error(format!("expected ':' after key {key:?}")),
            }
            self.skip(false);
            let value = self.value(false)?;
            if out.contains_key(&key) {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("duplicate key {key:?}"),
                });
            }
            out.insert(key, Entry { value, line, column });
            self.skip(false);
            match self.peek() {
                None | Some('\n') | Some(',') => {}
                Some(c) => return self.error(format!("unexpected {c:?} after value")),
            }
        }
    }

    fn value(&mut self, in_list: bool) -> Result<Value> {
        match self.peek() {
            Some('[') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip(true);
                    if self.peek() == Some(']') {
                        self.bump();
                        return Ok(Value::List(items));
                    }
                    match self.value(true)? {
                        Value::List(inner) if matches!(inner.first(), Some(Value::Word(w)) if w == "__repeat__") => {
                            items.extend(inner.into_iter().skip(1));
                        }
                        v => items.push(v),
                    }
                    self.skip(true);
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                        }
                        Some(']') => {}
                        Some(c) => return self.error(format!("expected ',' or ']', found {c:?}")),
                        None => return self.error("unterminated list"),
                    }
                }
            }
            Some(_) => {
                let w = self.word();
                if w.is_empty() {
                    return self.error(format!("expected a value, found {:?}", self.peek().unwrap_or(' ')));
                }
                let Ok(x) = w.parse::<f64>() else {
                    return Ok(Value::Word(w));
                };
                if in_list {
                    self.skip(false);
                    if matches!(self.peek(), Some('x') | Some('*') | Some('×')) {
                        self.bump();
                        self.skip(false);
                        let count = self.word();
                        let Ok(count) = count.parse::<usize>() else {
                            return self.error(format!("expected a repeat count, found {count:?}"));
                        };
                        let mut items = vec![Value::Word("__repeat__".into())];
                        items.extend(std::iter::repeat_n(Value::Number(x), count));
                        return Ok(Value::List(items));
                    }
                }
                Ok(Value::Number(x))
            }
            None => self.error("expected a value"),
        }
    }
}

fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

fn as_number(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Number(x) => Ok(*x),
        other => validation(format!("{key}: expected a number, found {other:?}")),
    }
}

fn as_count(key: &str, v: &Value) -> Result<usize> {
    let x = as_number(key, v)?;
    if x < 0.0 || x.fract() != 0.0 || x > u32::MAX as f64 {
        return validation(format!("{key}: expected a non-negative integer, found {x}"));
    }
    Ok(x as usize)
}

fn as_numbers(key: &str, v: &Value) -> Result<Vec<f64>> {
    match v {
        Value::List(items) => items.iter().map(|x| as_number(key, x)).collect(),
        other => Ok(vec![as_number(key, other)?]),
    }
}

/// Offsets reduced into `[0, 1)`.
pub fn normalize_offset(g: f64) -> f64 {
    let r = g.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Builds a spec from optional pieces; offsets default to ½ and one offset is
/// broadcast to every grid. Offsets outside `[0, 1)` are reduced with a warning.
pub fn build_spec(
    dfold: Option<usize>,
    angles: Option<Vec<f64>>,
    normals: Option<Vec<Point>>,
    offsets: Option<Vec<f64>>,
    warnings: &mut Vec<String>,
) -> Result<MultigridSpec> {
    let normals = match (dfold, angles, normals) {
        (Some(d), None, None) => {
            if d == 0 {
                return validation("dfold must be at least 1");
            }
            (0..d)
                .map(|k| Point::from_angle(std::f64::consts::TAU * k as f64 / d as f64))
                .collect::<Vec<_>>()
        }
        (None, Some(a), None) => a
            .iter()
            .map(|deg| Point::from_angle(deg.to_radians()))
            .collect(),
        (None, None, Some(n)) => n,
        (None, None, None) => return validation("one of dfold, angles or normals is required"),
        _ => return validation("dfold, angles and normals are mutually exclusive"),
    };
    let d = normals.len();
    let raw = offsets.unwrap_or_else(|| vec![0.5]);
    let raw = if raw.len() == 1 { vec![raw[0]; d] } else { raw };
    if raw.len() != d {
        return validation(format!("{} offsets given for {d} grids", raw.len()));
    }
    let offsets = raw
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            if !g.is_finite() {
                return validation(format!("offset {i} is not finite"));
            }
            let r = normalize_offset(g);
            if r != g {
                warnings.push(format!("offset {i} = {g} reduced to {r}"));
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    MultigridSpec::new(normals, offsets).map_err(|e| match e {
        Error::InvalidSpec(m) => Error::Validation(m),
        other => other,
    })
}

/// Parses a configuration document.
pub fn parse_spec(text: &str) -> Result<Config> {
    let entries = Parser::new(text).document()?;
    let known = [
        "dfold", "angles", "normals", "offsets", "radius", "n", "tile", "ball", "cap", "side",
    ];
    if let Some((k, e)) = entries.iter().find(|(k, _)| !known.contains(&k.as_str())) {
        return Err(Error::Parse {
            line: e.line,
            column: e.column,
            message: format!("unknown key {k:?}"),
        });
    }
    let get = |k: &str| entries.get(k).map(|e| &e.value);

    let dfold = get("dfold").map(|v| as_count("dfold", v)).transpose()?;
    let angles = get("angles").map(|v| as_numbers("angles", v)).transpose()?;
    let normals = get("normals")
        .map(|v| match v {
            Value::List(items) => items
                .iter()
                .map(|p| match as_numbers("normals", p)?.as_slice() {
                    [re, im] => Ok(Point::new(*re, *im)),
                    _ => validation("normals: each entry must be [re, im]"),
                })
                .collect::<Result<Vec<_>>>(),
            _ => validation("normals: expected a list of [re, im]"),
        })
        .transpose()?;
    let offsets = get("offsets").map(|v| as_numbers("offsets", v)).transpose()?;

    let mut warnings = Vec::new();
    let spec = build_spec(dfold, angles, normals, offsets, &mut warnings)?;

    let mut run = RunParams::default();
    if let Some(v) = get("radius") {
        let r = as_number("radius", v)?;
        if !(r > 0.0) {
            return validation(format!("radius must be positive, got {r}"));
        }
        run.radius = Some(r);
    }
    if let Some(v) = get("n") {
        run.n = match v {
            Value::List(items) => items.iter().map(|x| as_count("n", x)).collect::<Result<_>>()?,
            x => vec![as_count("n", x)?],
        };
    }
    match (get("tile"), get("ball")) {
        (Some(_), Some(_)) => return validation("tile and ball are mutually exclusive"),
        (Some(v), None) => {
            let parts: Vec<f64> = as_numbers("tile", v)?;
            let [i, j, ki, kj] = parts.as_slice() else {
                return validation("tile must be [i, j, ki, kj]");
            };
            if [i, j, ki, kj].iter().any(|x| x.fract() != 0.0) || *i < 0.0 || *j < 0.0 {
                return validation("tile entries must be integers with non-negative grids");
            }
            let (i, j) = (*i as usize, *j as usize);
            if i >= spec.d() || j >= spec.d() || i == j {
                return validation(format!("tile grids ({i}, {j}) invalid for d = {}", spec.d()));
            }
            let key = if i < j {
                (i, *ki as i64, j, *kj as i64)
            } else {
                (j, *kj as i64, i, *ki as i64)
            };
            run.seed = Some(Seed::Tile(key));
        }
        (None, Some(v)) => run.seed = Some(Seed::Ball(as_count("ball", v)?)),
        (None, None) => {}
    }
    if let Some(v) = get("cap") {
        run.cap = Some(as_count("cap", v)?);
    }
    if let Some(v) = get("side") {
        run.side = Some(match v {
            Value::Word(w) => w.parse().map_err(|_| Error::Validation(format!("unknown side {w:?}")))?,
            other => return validation(format!("side: expected a word, found {other:?}")),
        });
    }
    Ok(Config { spec, run, warnings })
}

/// Writes a spec so that [`parse_spec`] gives it back exactly.
pub fn serialize_spec(spec: &MultigridSpec) -> String {
    let mut out = String::from("normals: [");
    for (k, z) in spec.normals().iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "[{:?}, {:?}]", z.re, z.im);
    }
    out.push_str("]\noffsets: [");
    for (k, g) in spec.offsets().iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{g:?}");
    }
    out.push_str("]\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dfold_with_repeated_offsets() {
        let cfg = parse_spec("dfold: 5, offsets: [0.5×5]").unwrap();
        assert_eq!(cfg.spec, MultigridSpec::pentagrid(0.5).unwrap());
        let cfg = parse_spec("dfold: 5\noffsets: [0.5 x 5]\n").unwrap();
        assert_eq!(cfg.spec, MultigridSpec::pentagrid(0.5).unwrap());
        assert!(cfg.warnings.is_empty());
    }

    #[test]
    fn angle_list() {
        let cfg = parse_spec("angles: [0, 45, 90, 135], offsets: [0.5*4]").unwrap();
        assert_eq!(cfg.spec.d(), 4);
        assert!((cfg.spec.normal(1) - Point::from_angle(std::f64::consts::FRAC_PI_4)).norm() < 1e-15);
    }

    #[test]
    fn parallel_angles_rejected() {
        let err = parse_spec("angles: [0, 0]").unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("parallel")), "{err}");
    }

    #[test]
    fn offsets_are_reduced_with_warning() {
        let cfg = parse_spec("dfold: 3\noffsets: [1.25, -0.5, 0.5]").unwrap();
        assert_eq!(cfg.spec.offsets(), &[0.25, 0.5, 0.5]);
        assert_eq!(cfg.warnings.len(), 2);
    }

    #[test]
    fn run_parameters() {
        let cfg = parse_spec(
            "# run\ndfold: 5 # pentagrid\noffsets: 0.5\nradius = 12\nn: [10, 20]\ntile: [1, 0, 3, -2]\ncap: 1000\nside: tiling\n",
        )
        .unwrap();
        assert_eq!(cfg.run.radius, Some(12.0));
        assert_eq!(cfg.run.n, vec![10, 20]);
        assert_eq!(cfg.run.seed, Some(Seed::Tile((0, -2, 1, 3))));
        assert_eq!(cfg.run.cap, Some(1000));
        assert_eq!(cfg.run.side, Some(Side::Tiling));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_spec("dfold: 5\nbogus: 3\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 1)),
            other => panic!("{other:?}"),
        }
        match parse_spec("dfold 5") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 7)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_spec("offsets: [0.5, 0.5"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("dfold: 5\ndfold: 3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_spec("offsets: [0.5]"), Err(Error::Validation(_))));
        assert!(matches!(parse_spec("dfold: 5, angles: [0, 30]"), Err(Error::Validation(_))));
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(
            angles in proptest::collection::vec(0.0f64..180.0, 2..8),
            offsets in proptest::collection::vec(0.0f64..1.0, 8),
        ) {
            let d = angles.len();
            if let Ok(spec) = MultigridSpec::from_angles_degrees(&angles, offsets[..d].to_vec()) {
                let back = parse_spec(&serialize_spec(&spec)).unwrap();
                prop_assert_eq!(back.spec, spec);
            }
        }
    }
}
