//! Planar primitives shared by the rest of the crate.
//!
//! The plane is identified with the complex numbers: a [`Point`] is `re + i·im`.
//! Polygons are convex, counterclockwise, and start at the vertex of smallest
//! argument so that two equal polygons compare equal vertex by vertex.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for point equality and hull collinearity.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl Point {
    pub const ZERO: Point = Point { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Point { re, im }
    }

    /// `e^{iθ}`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point::new(c, s)
    }

    /// Rotation by a quarter turn counterclockwise (multiplication by `i`).
    pub fn perp(self) -> Self {
        Point::new(-self.im, self.re)
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// Argument in `[0, 2π)`.
    pub fn arg(self) -> f64 {
        let a = self.im.atan2(self.re);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Complex product.
    pub fn cmul(self, other: Point) -> Self {
        Point::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.re, -self.im)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.re * s, self.im * s)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        p * self
    }
}

/// `Re(a · conj(b))`.
pub fn scalar_product(a: Point, b: Point) -> f64 {
    a.re * b.re + a.im * b.im
}

fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Signed doubled area of the triangle `(o, a, b)`; positive for a left turn.
fn orient(o: Point, a: Point, b: Point) -> f64 {
    cross(a - o, b - o)
}

/// A convex polygon, counterclockwise, starting at its vertex of smallest argument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Builds a polygon from the convex hull of `points`.
    pub fn hull_of(points: &[Point]) -> Result<Self> {
        convex_hull(points)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        self.edges().map(|(a, b)| cross(a, b)).sum::<f64>() / 2.0
    }

    /// Closed-region membership with tolerance `EPS_GEOM`.
    pub fn contains(&self, p: Point) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            cross(e, p - a) >= -EPS_GEOM * e.norm()
        })
    }

    /// Euclidean distance from `p` to the filled polygon (zero inside).
    pub fn distance_to(&self, p: Point) -> f64 {
        distance_to_hull(&self.vertices, p)
    }

    /// Smallest `λ ≥ 0` with `p ∈ λ·self`. Requires the origin strictly inside.
    pub fn gauge(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| {
                // outward normal (b - a) rotated clockwise; offset a·n > 0 when origin inside
                let n = Point::new((b - a).im, -(b - a).re);
                scalar_product(p, n) / scalar_product(a, n)
            })
            .fold(0.0, f64::max)
    }

    /// Rotates the vertex list so it starts at the vertex of smallest argument.
    fn canonicalize(mut vertices: Vec<Point>) -> Vec<Point> {
        let start = vertices
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.arg().total_cmp(&b.arg()))
            .map(|(k, _)| k)
            .unwrap_or(0);
        vertices.rotate_left(start);
        vertices
    }
}

/// Convex hull vertices (CCW) of an arbitrary finite point set.
///
/// Never fails: degenerate inputs yield one or two points. Collinear points
/// within `EPS_GEOM` are dropped.
pub fn hull_points(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| a.dist(*b) <= EPS_GEOM);
    if pts.len() <= 2 {
        return pts;
    }

    // Andrew's monotone chain
    let turn_tol = |a: Point, b: Point| EPS_GEOM * a.dist(b).max(1.0);
    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 {
            let (o, a) = (lower[lower.len() - 2], lower[lower.len() - 1]);
            if orient(o, a, p) <= turn_tol(o, p) {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 {
            let (o, a) = (upper[upper.len() - 2], upper[upper.len() - 1]);
            if orient(o, a, p) <= turn_tol(o, p) {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Minimal convex polygon containing every input point.
pub fn convex_hull(points: &[Point]) -> Result<Polygon> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput("non-finite point".into()));
    }
    let hull = hull_points(points);
    if hull.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "{} input points span fewer than 3 hull vertices",
            points.len()
        )));
    }
    Ok(Polygon {
        vertices: Polygon::canonicalize(hull),
    })
}

fn distance_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (scalar_product(p - a, ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Distance from `p` to the convex hull given by its CCW vertices (1, 2 or more).
fn distance_to_hull(hull: &[Point], p: Point) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => p.dist(hull[0]),
        2 => distance_to_segment(p, hull[0], hull[1]),
        n => {
            let mut inside = true;
            let mut best = f64::INFINITY;
            for k in 0..n {
                let (a, b) = (hull[k], hull[(k + 1) % n]);
                if orient(a, b, p) < 0.0 {
                    inside = false;
                }
                best = best.min(distance_to_segment(p, a, b));
            }
            if inside {
                0.0
            } else {
                best
            }
        }
    }
}

/// Hausdorff distance between the convex hulls of two vertex chains.
///
/// Exact for convex bodies: the directed distance from a convex set to a
/// convex set is attained at one of its vertices.
pub fn hausdorff_hulls(a: &[Point], b: &[Point]) -> f64 {
    let directed = |from: &[Point], to: &[Point]| {
        from.iter()
            .map(|&p| distance_to_hull(to, p))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Symmetric Hausdorff distance between two filled convex polygons.
pub fn hausdorff_distance(a: &Polygon, b: &Polygon) -> f64 {
    hausdorff_hulls(&a.vertices, &b.vertices)
}

/// Homothety of center `center` and ratio `ratio`.
pub fn scale_polygon(p: &Polygon, ratio: f64, center: Point) -> Result<Polygon> {
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::NonPositiveRatio(ratio));
    }
    let vertices = p
        .vertices
        .iter()
        .map(|&v| center + (v - center) * ratio)
        .collect();
    Ok(Polygon {
        vertices: Polygon::canonicalize(vertices),
    })
}
