use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::SmoothError;

/// Gap allowed between consecutive segment ends.
const JOINT_TOL: f64 = 1e-9;

/// A chart point. Planar points carry `z = 0`; files hold 2 or 3 numbers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(pub [f64; 3]);

impl TryFrom<Vec<f64>> for Point {
    type Error = String;
    fn try_from(v: Vec<f64>) -> Result<Self, String> {
        match v.as_slice() {
            [x, y] => Ok(Point([*x, *y, 0.0])),
            [x, y, z] => Ok(Point([*x, *y, *z])),
            _ => Err(format!("a point has 2 or 3 coordinates, got {}", v.len())),
        }
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        if p.0[2] == 0.0 {
            vec![p.0[0], p.0[1]]
        } else {
            p.0.to_vec()
        }
    }
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point([x, y, 0.0])
    }

    pub fn add(&self, d: &[f64; 3]) -> Point {
        Point([self.0[0] + d[0], self.0[1] + d[1], self.0[2] + d[2]])
    }

    pub fn sub(&self, o: &Point) -> [f64; 3] {
        [self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]]
    }

    pub fn dist(&self, o: &Point) -> f64 {
        let d = self.sub(o);
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    fn lerp(&self, o: &Point, t: f64) -> Point {
        Point([
            self.0[0] + t * (o.0[0] - self.0[0]),
            self.0[1] + t * (o.0[1] - self.0[1]),
            self.0[2] + t * (o.0[2] - self.0[2]),
        ])
    }
}

/// An analytic piece, parameterized over `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Segment {
    Line {
        from: Point,
        to: Point,
    },
    /// Circular arc in the plane `z = center.z`, angles in radians.
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        end: f64,
    },
    /// Cubic Bézier curve.
    Cubic {
        p0: Point,
        p1: Point,
        p2: Point,
        p3: Point,
    },
}

impl Segment {
    pub fn at(&self, t: f64) -> Point {
        match self {
            Segment::Line { from, to } => from.lerp(to, t),
            Segment::Arc { center, radius, start, end } => {
                let th = start + t * (end - start);
                center.add(&[radius * th.cos(), radius * th.sin(), 0.0])
            }
            Segment::Cubic { p0, p1, p2, p3 } => {
                let s = 1.0 - t;
                let (a, b, c, d) = (s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t);
                Point(std::array::from_fn(|k| a * p0.0[k] + b * p1.0[k] + c * p2.0[k] + d * p3.0[k]))
            }
        }
    }

    pub fn start(&self) -> Point {
        self.at(0.0)
    }

    pub fn end(&self) -> Point {
        self.at(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line { from: *to, to: *from },
            Segment::Arc { center, radius, start, end } => {
                Segment::Arc { center: *center, radius: *radius, start: *end, end: *start }
            }
            Segment::Cubic { p0, p1, p2, p3 } => Segment::Cubic { p0: *p3, p1: *p2, p2: *p1, p3: *p0 },
        }
    }

    /// The pieces over `[0, s]` and `[s, 1]`.
    pub fn split(&self, s: f64) -> (Segment, Segment) {
        match self {
            Segment::Line { from, to } => {
                let m = from.lerp(to, s);
                (Segment::Line { from: *from, to: m }, Segment::Line { from: m, to: *to })
            }
            Segment::Arc { center, radius, start, end } => {
                let mid = start + s * (end - start);
                (
                    Segment::Arc { center: *center, radius: *radius, start: *start, end: mid },
                    Segment::Arc { center: *center, radius: *radius, start: mid, end: *end },
                )
            }
            Segment::Cubic { p0, p1, p2, p3 } => {
                // de Casteljau
                let (a, b, c) = (p0.lerp(p1, s), p1.lerp(p2, s), p2.lerp(p3, s));
                let (d, e) = (a.lerp(&b, s), b.lerp(&c, s));
                let m = d.lerp(&e, s);
                (Segment::Cubic { p0: *p0, p1: a, p2: d, p3: m }, Segment::Cubic { p0: m, p1: e, p2: c, p3: *p3 })
            }
        }
    }

    /// True when the segment does not move.
    pub fn is_degenerate(&self) -> bool {
        match self {
            Segment::Line { from, to } => from == to,
            Segment::Arc { radius, start, end, .. } => *radius == 0.0 || start == end,
            Segment::Cubic { p0, p1, p2, p3 } => p0 == p1 && p1 == p2 && p2 == p3,
        }
    }

    fn is_finite(&self) -> bool {
        let pts: Vec<f64> = match self {
            Segment::Line { from, to } => [from.0, to.0].concat(),
            Segment::Arc { center, radius, start, end } => [&center.0[..], &[*radius, *start, *end]].concat(),
            Segment::Cubic { p0, p1, p2, p3 } => [p0.0, p1.0, p2.0, p3.0].concat(),
        };
        pts.iter().all(|c| c.is_finite())
    }
}

/// A continuous chain of segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct Curve {
    segments: Vec<Segment>,
}

impl TryFrom<Vec<Segment>> for Curve {
    type Error = SmoothError;
    fn try_from(v: Vec<Segment>) -> Result<Self, SmoothError> {
        Curve::new(v)
    }
}

impl From<Curve> for Vec<Segment> {
    fn from(c: Curve) -> Vec<Segment> {
        c.segments
    }
}

impl Curve {
    pub fn new(segments: Vec<Segment>) -> Result<Self, SmoothError> {
        if segments.is_empty() {
            return Err(SmoothError::Curve("no segments".into()));
        }
        if let Some(i) = segments.iter().position(|s| !s.is_finite()) {
            return Err(SmoothError::Curve(format!("segment {i} has non-finite data")));
        }
        for (i, w) in segments.windows(2).enumerate() {
            let gap = w[0].end().dist(&w[1].start());
            if gap > JOINT_TOL {
                return Err(SmoothError::Curve(format!("gap {gap:e} between segments {i} and {}", i + 1)));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> Point {
        self.segments[0].start()
    }

    pub fn end(&self) -> Point {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn is_closed(&self) -> bool {
        self.start().dist(&self.end()) <= JOINT_TOL
    }

    pub fn line(from: Point, to: Point) -> Self {
        Curve { segments: vec![Segment::Line { from, to }] }
    }

    /// Straight segments through `points` in order.
    pub fn polygon(points: &[Point]) -> Result<Self, SmoothError> {
        Curve::new(points.windows(2).map(|w| Segment::Line { from: w[0], to: w[1] }).collect())
    }

    /// The axis-aligned rectangle, counter-clockwise from `(x0, y0)`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let p = [Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1), Point::new(x0, y0)];
        Curve::polygon(&p).expect("closed chain")
    }

    /// Counter-clockwise circle through `base` with centre `base + r·(cos φ, sin φ)`.
    pub fn circle_through(base: Point, r: f64, phi: f64) -> Self {
        let center = base.add(&[r * phi.cos(), r * phi.sin(), 0.0]);
        let start = phi + std::f64::consts::PI;
        Curve { segments: vec![Segment::Arc { center, radius: r, start, end: start + TAU }] }
    }

    /// Traverses `self`, then `next`.
    pub fn then(&self, next: &Curve) -> Result<Curve, SmoothError> {
        Curve::new(self.segments.iter().chain(&next.segments).cloned().collect())
    }

    pub fn invert(&self) -> Curve {
        Curve { segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    /// The curve with segment `i` cut at parameter `s`.
    pub fn split_at(&self, i: usize, s: f64) -> Curve {
        let mut segments = self.segments.clone();
        let (a, b) = segments[i].split(s);
        segments.splice(i..=i, [a, b]);
        Curve { segments }
    }

    /// Inserts a straight excursion to `p + d` and back at the end of segment `i`.
    pub fn with_spur(&self, i: usize, d: [f64; 3]) -> Curve {
        let p = self.segments[i].end();
        let q = p.add(&d);
        let mut segments = self.segments.clone();
        segments.splice(i + 1..i + 1, [Segment::Line { from: p, to: q }, Segment::Line { from: q, to: p }]);
        Curve { segments }
    }

    /// `from -> p`, then `lp` translated to start at `p`, then back.
    pub fn lasso(from: Point, lp: &Curve) -> Result<Curve, SmoothError> {
        let p = lp.start();
        let out = Curve::line(from, p);
        out.then(lp)?.then(&out.invert())
    }

    pub fn translated(&self, d: [f64; 3]) -> Curve {
        let t = |p: &Point| p.add(&d);
        Curve {
            segments: self
                .segments
                .iter()
                .map(|s| match s {
                    Segment::Line { from, to } => Segment::Line { from: t(from), to: t(to) },
                    Segment::Arc { center, radius, start, end } => {
                        Segment::Arc { center: t(center), radius: *radius, start: *start, end: *end }
                    }
                    Segment::Cubic { p0, p1, p2, p3 } => Segment::Cubic { p0: t(p0), p1: t(p1), p2: t(p2), p3: t(p3) },
                })
                .collect(),
        }
    }
}
