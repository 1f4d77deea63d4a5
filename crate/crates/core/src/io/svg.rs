//! Deterministic SVG 1.1 rendering.
//!
//! World coordinates are mapped into a `2r × 2r` view box around the
//! viewport center with the y axis pointing up. All numbers are written with
//! four decimals so the same scene always gives the same bytes.

use std::fmt::Write;

use crate::analysis::CharPolygon;
use crate::dual::{tile_of_crossing, TilingWindow};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::graph::CoronaSequence;
use crate::multigrid::{lines_in_disk, LineId, MultigridSpec};

/// A filled polygon with an index into the palette.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadedPolygon {
    pub points: Vec<Point>,
    pub shade: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Layer {
    /// Line segments such as multigrid lines.
    Lines(Vec<(Point, Point)>),
    /// Closed tiles filled from the palette.
    Tiles(Vec<ShadedPolygon>),
    /// Unfilled closed outline drawn over everything below it.
    Overlay { points: Vec<Point>, color: String },
    /// Small dots.
    Markers { points: Vec<Point>, color: String },
}

impl Layer {
    fn is_empty(&self) -> bool {
        match self {
            Layer::Lines(v) => v.is_empty(),
            Layer::Tiles(v) => v.is_empty(),
            Layer::Overlay { points, .. } | Layer::Markers { points, .. } => points.is_empty(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub center: Point,
    pub radius: f64,
}

impl Viewport {
    /// Smallest origin-centered viewport holding `points`, plus a 5% margin.
    pub fn around(points: impl IntoIterator<Item = Point>) -> Self {
        let r = points.into_iter().map(Point::norm).fold(0.0, f64::max);
        Viewport {
            center: Point::ZERO,
            radius: if r > 0.0 { r * 1.05 } else { 1.0 },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Style {
    /// Fill colors indexed by [`ShadedPolygon::shade`].
    pub palette: Vec<String>,
    pub tile_stroke: f64,
    pub line_stroke: f64,
    pub overlay_stroke: f64,
    pub marker_radius: f64,
    /// Output width and height in pixels.
    pub size: u32,
}

impl Style {
    /// Greyscale ramp from dark to light with `levels` entries.
    pub fn greyscale(levels: usize) -> Self {
        let levels = levels.max(1);
        let palette = (0..levels)
            .map(|k| {
                let t = if levels == 1 { 0.0 } else { k as f64 / (levels - 1) as f64 };
                let v = (40.0 + 200.0 * t).round() as u8;
                format!("#{v:02x}{v:02x}{v:02x}")
            })
            .collect();
        Style {
            palette,
            tile_stroke: 0.02,
            line_stroke: 0.01,
            overlay_stroke: 0.05,
            marker_radius: 0.08,
            size: 800,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneSpec {
    pub layers: Vec<Layer>,
    pub viewport: Viewport,
    pub style: Style,
}

struct Frame {
    left: f64,
    top: f64,
}

impl Frame {
    fn map(&self, p: Point) -> (f64, f64) {
        (p.re - self.left, self.top - p.im)
    }
}

fn path_data(frame: &Frame, points: &[Point], out: &mut String) {
    for (k, &p) in points.iter().enumerate() {
        let (x, y) = frame.map(p);
        let _ = write!(out, "{}{x:.4} {y:.4} ", if k == 0 { "M" } else { "L" });
    }
    out.push('Z');
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(scene: &SceneSpec) -> Result<String> {
    if scene.layers.iter().all(Layer::is_empty) {
        return Err(Error::EmptyScene);
    }
    let r = scene.viewport.radius;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("viewport radius must be positive, got {r}")));
    }
    let style = &scene.style;
    let max_shade = scene
        .layers
        .iter()
        .filter_map(|l| match l {
            Layer::Tiles(t) => t.iter().map(|s| s.shade).max(),
            _ => None,
        })
        .max();
    if let Some(m) = max_shade {
        if m >= style.palette.len() {
            return Err(Error::InvalidArgument(format!(
                "palette has {} entries, shade {m} requested",
                style.palette.len()
            )));
        }
    }
    let frame = Frame {
        left: scene.viewport.center.re - r,
        top: scene.viewport.center.im + r,
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {w:.4} {w:.4}\">",
        s = style.size,
        w = 2.0 * r
    );
    for layer in &scene.layers {
        match layer {
            Layer::Lines(segments) => {
                let _ = writeln!(
                    out,
                    "<g stroke=\"#888888\" stroke-width=\"{:.4}\" fill=\"none\">",
                    style.line_stroke
                );
                for &(a, b) in segments {
                    let ((x1, y1), (x2, y2)) = (frame.map(a), frame.map(b));
                    let _ = writeln!(
                        out,
                        "<line x1=\"{x1:.4}\" y1=\"{y1:.4}\" x2=\"{x2:.4}\" y2=\"{y2:.4}\"/>"
                    );
                }
                out.push_str("</g>\n");
            }
            Layer::Tiles(tiles) => {
                let _ = writeln!(
                    out,
                    "<g stroke=\"#000000\" stroke-width=\"{:.4}\" stroke-linejoin=\"round\">",
                    style.tile_stroke
                );
                for t in tiles {
                    let mut d = String::new();
                    path_data(&frame, &t.points, &mut d);
                    let _ = writeln!(
                        out,
                        "<path d=\"{d}\" fill=\"{}\"/>",
                        escape(&style.palette[t.shade])
                    );
                }
                out.push_str("</g>\n");
            }
            Layer::Overlay { points, color } => {
                let mut d = String::new();
                path_data(&frame, points, &mut d);
                let _ = writeln!(
                    out,
                    "<path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.4}\"/>",
                    escape(color),
                    style.overlay_stroke
                );
            }
            Layer::Markers { points, color } => {
                let _ = writeln!(out, "<g fill=\"{}\">", escape(color));
                for &p in points {
                    let (x, y) = frame.map(p);
                    let _ = writeln!(
                        out,
                        "<circle cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"{:.4}\"/>",
                        style.marker_radius
                    );
                }
                out.push_str("</g>\n");
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Tiles of a window, shaded by tile type.
pub fn tiling_scene(window: &TilingWindow) -> SceneSpec {
    let d = window.spec().d();
    let type_index = |i: usize, j: usize| i * d + j;
    let tiles: Vec<ShadedPolygon> = window
        .tiles()
        .values()
        .map(|t| {
            let (i, j) = t.crossing.types();
            ShadedPolygon {
                points: t.points().to_vec(),
                shade: type_index(i, j),
            }
        })
        .collect();
    let viewport = Viewport::around(tiles.iter().flat_map(|t| t.points.iter().copied()));
    SceneSpec {
        layers: vec![Layer::Tiles(tiles)],
        viewport,
        style: Style::greyscale(d * d),
    }
}

/// Multigrid lines clipped to the disk of radius `radius`, with crossings of `marked` as dots.
pub fn multigrid_scene(spec: &MultigridSpec, radius: f64, marked: &[Point]) -> Result<SceneSpec> {
    let mut segments = Vec::new();
    for line in (0..spec.d()).flat_map(|g| lines_in_disk(spec, g, radius).map(move |k| LineId::new(g, k))) {
        let foot = spec.foot(line);
        let h = radius * radius - foot.norm_sqr();
        if h <= 0.0 {
            continue;
        }
        let h = h.sqrt();
        segments.push((spec.line_point(line, -h), spec.line_point(line, h)));
    }
    let mut layers = vec![Layer::Lines(segments)];
    if !marked.is_empty() {
        layers.push(Layer::Markers {
            points: marked.to_vec(),
            color: "#c00000".into(),
        });
    }
    Ok(SceneSpec {
        layers,
        viewport: Viewport {
            center: Point::ZERO,
            radius,
        },
        style: Style::greyscale(1),
    })
}

/// Tiles of `P_n` shaded by corona index, with optional overlays (e.g. `n·χ̃`).
pub fn corona_scene(
    spec: &MultigridSpec,
    seq: &CoronaSequence,
    n: usize,
    overlays: &[Vec<Point>],
) -> Result<SceneSpec> {
    let mut tiles = Vec::with_capacity(seq.size(n));
    for (m, frontier) in seq.frontiers()[..=n].iter().enumerate() {
        for c in frontier {
            tiles.push(ShadedPolygon {
                points: tile_of_crossing(spec, c)?.points().to_vec(),
                shade: m,
            });
        }
    }
    let mut all: Vec<Point> = tiles.iter().flat_map(|t| t.points.iter().copied()).collect();
    all.extend(overlays.iter().flatten().copied());
    let viewport = Viewport::around(all);
    let mut layers = vec![Layer::Tiles(tiles)];
    for o in overlays {
        layers.push(Layer::Overlay {
            points: o.clone(),
            color: "#d00000".into(),
        });
    }
    Ok(SceneSpec {
        layers,
        viewport,
        style: Style::greyscale(n + 1),
    })
}

/// Outlines of characteristic polygons with their vertices marked.
pub fn polygons_scene(polygons: &[&CharPolygon]) -> SceneSpec {
    const COLORS: [&str; 4] = ["#0050c0", "#d00000", "#008000", "#a000a0"];
    let mut layers = Vec::new();
    for (k, p) in polygons.iter().enumerate() {
        let color = COLORS[k % COLORS.len()].to_string();
        layers.push(Layer::Overlay {
            points: p.vertices().to_vec(),
            color: color.clone(),
        });
        layers.push(Layer::Markers {
            points: p.vertices().to_vec(),
            color,
        });
    }
    let viewport = Viewport::around(polygons.iter().flat_map(|p| p.vertices().iter().copied()));
    let mut style = Style::greyscale(1);
    style.overlay_stroke = viewport.radius * 0.005;
    style.marker_radius = viewport.radius * 0.01;
    SceneSpec {
        layers,
        viewport,
        style,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::analysis::{char_polygon_chi, char_polygon_chi_dual};
    use crate::dual::tiling_window;
    use crate::graph::{corona_sequence, Patch};

    /// Structural check: one root element, every tag closed in order.
    pub(crate) fn well_formed(svg: &str) -> bool {
        let body = svg.trim_start();
        let body = match body.strip_prefix("<?xml") {
            Some(rest) => match rest.find("?>") {
                Some(k) => &rest[k + 2..],
                None => return false,
            },
            None => body,
        };
        let mut stack: Vec<&str> = Vec::new();
        let mut roots = 0;
        let mut rest = body;
        while let Some(start) = rest.find('<') {
            if !stack.is_empty() || rest[..start].trim().is_empty() {
            } else {
                return false;
            }
            let Some(len) = rest[start..].find('>') else {
                return false;
            };
            let tag = &rest[start + 1..start + len];
            rest = &rest[start + len + 1..];
            if let Some(name) = tag.strip_prefix('/') {
                if stack.pop() != Some(name.trim()) {
                    return false;
                }
            } else {
                let name = tag.split_whitespace().next().unwrap_or("");
                if name.is_empty() {
                    return false;
                }
                if stack.is_empty() {
                    roots += 1;
                }
                if !tag.ends_with('/') {
                    stack.push(name);
                }
            }
        }
        stack.is_empty() && roots == 1 && rest.trim().is_empty()
    }

    #[test]
    fn single_square_tile() {
        let scene = SceneSpec {
            layers: vec![Layer::Tiles(vec![ShadedPolygon {
                points: vec![
                    Point::new(0.0, 0.0),
                    Point::new(1.0, 0.0),
                    Point::new(1.0, 1.0),
                    Point::new(0.0, 1.0),
                ],
                shade: 0,
            }])],
            viewport: Viewport {
                center: Point::ZERO,
                radius: 2.0,
            },
            style: Style::greyscale(1),
        };
        let svg = render_svg(&scene).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        let d = svg.split("d=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(d.matches('M').count() + d.matches('L').count(), 4);
        assert!(d.ends_with('Z'));
        // y axis flipped: world (0, 1) is at view y = 1
        assert!(d.contains("M2.0000 2.0000 L3.0000 2.0000 L3.0000 1.0000"));
        assert!(well_formed(&svg));
    }

    #[test]
    fn empty_scene() {
        let scene = SceneSpec {
            layers: vec![Layer::Tiles(vec![])],
            viewport: Viewport {
                center: Point::ZERO,
                radius: 1.0,
            },
            style: Style::greyscale(1),
        };
        assert_eq!(render_svg(&scene), Err(Error::EmptyScene));
    }

    #[test]
    fn short_palette_rejected() {
        let scene = SceneSpec {
            layers: vec![Layer::Tiles(vec![ShadedPolygon {
                points: vec![Point::ZERO, Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
                shade: 3,
            }])],
            viewport: Viewport {
                center: Point::ZERO,
                radius: 1.0,
            },
            style: Style::greyscale(2),
        };
        assert!(matches!(render_svg(&scene), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn corona_with_overlay_is_deterministic() {
        let spec = MultigridSpec::pentagrid(0.5).unwrap();
        let seed = crate::multigrid::Crossing::from_key(&spec, (0, 0, 1, 0)).unwrap();
        let seq = corona_sequence(&spec, &Patch::single(seed), 6, usize::MAX).unwrap();
        let chi = char_polygon_chi_dual(&spec).unwrap();
        let overlay: Vec<Point> = chi.vertices().iter().map(|&p| p * 6.0).collect();
        let scene = corona_scene(&spec, &seq, 6, &[overlay]).unwrap();
        let a = render_svg(&scene).unwrap();
        let b = render_svg(&scene.clone()).unwrap();
        assert_eq!(a, b);
        assert!(well_formed(&a));
        assert_eq!(a.matches("<path").count(), seq.size(6) + 1);
    }

    #[test]
    fn other_scenes_are_well_formed() {
        let spec = MultigridSpec::pentagrid(0.5).unwrap();
        let w = tiling_window(&spec, 4.0).unwrap();
        assert!(well_formed(&render_svg(&tiling_scene(&w)).unwrap()));
        let pts: Vec<Point> = w.tiles().keys().map(|c| c.point).collect();
        assert!(well_formed(&render_svg(&multigrid_scene(&spec, 4.0, &pts).unwrap()).unwrap()));
        let chi = char_polygon_chi(&spec).unwrap();
        let chid = char_polygon_chi_dual(&spec).unwrap();
        assert!(well_formed(&render_svg(&polygons_scene(&[&chi, &chid])).unwrap()));
    }

    #[test]
    fn checker_rejects_broken_documents() {
        assert!(!well_formed("<svg><g></svg>"));
        assert!(!well_formed("<svg/><svg/>"));
        assert!(!well_formed("<svg>"));
        assert!(well_formed("<svg><g><path d=\"M0 0Z\"/></g></svg>"));
    }
}
