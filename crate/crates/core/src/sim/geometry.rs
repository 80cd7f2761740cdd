//! Ray casting against line segments.

/// A point in the plane, metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A wall segment, optionally labelled with the feature it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
    pub label: Option<String>,
}

impl Segment {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self {
            start: Point::new(x1, y1),
            end: Point::new(x2, y2),
            label: None,
        }
    }

    pub fn labelled(x1: f64, y1: f64, x2: f64, y2: f64, label: &str) -> Self {
        Self {
            label: Some(label.to_string()),
            ..Self::new(x1, y1, x2, y2)
        }
    }

    /// Distance along the ray from `origin` in unit direction `dir` to this
    /// segment, if they intersect in front of the origin.
    pub fn ray_hit(&self, origin: Point, dir: (f64, f64)) -> Option<f64> {
        let e = (self.end.x - self.start.x, self.end.y - self.start.y);
        let denom = cross(dir, e);
        if denom.abs() < 1e-12 {
            // Parallel; a grazing collinear ray sees the segment edge-on.
            return None;
        }
        let op = (self.start.x - origin.x, self.start.y - origin.y);
        let t = cross(op, e) / denom;
        let s = cross(op, dir) / denom;
        (t >= 0.0 && (0.0..=1.0).contains(&s)).then_some(t)
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Distance from `origin` along `bearing` (radians, counter-clockwise from +x)
/// to the nearest segment, or `r_max` if nothing is hit within range.
pub fn ray_cast<'a>(
    segments: impl IntoIterator<Item = &'a Segment>,
    origin: Point,
    bearing: f64,
    r_max: f64,
) -> f64 {
    let dir = (bearing.cos(), bearing.sin());
    segments
        .into_iter()
        .filter_map(|s| s.ray_hit(origin, dir))
        .fold(r_max, f64::min)
}
