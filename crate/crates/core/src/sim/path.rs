use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;

use super::geometry::Point;
use crate::error::{Error, Result};

/// Robot position and heading (radians, counter-clockwise from +x, in `[0, 2pi)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: heading.rem_euclid(TAU),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Default spacing between raw scans along a path.
pub const DEFAULT_SCAN_INTERVAL: f64 = 0.02;

/// A scripted route: a polyline of poses sampled every `scan_interval` metres.
#[derive(Debug, Clone, PartialEq)]
pub struct PathScript {
    pub waypoints: Vec<Pose>,
    pub scan_interval: f64,
}

impl PathScript {
    pub fn new(waypoints: Vec<Pose>, scan_interval: f64) -> Result<Self> {
        if !(scan_interval.is_finite() && scan_interval > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scan interval must be positive, got {scan_interval}"
            )));
        }
        if waypoints
            .iter()
            .any(|p| !(p.x.is_finite() && p.y.is_finite() && p.heading.is_finite()))
        {
            return Err(Error::InvalidParameter("non-finite waypoint".into()));
        }
        Ok(Self {
            waypoints,
            scan_interval,
        })
    }

    /// A straight run along +x starting at `(x0, y)`.
    pub fn straight(x0: f64, y: f64, length: f64) -> Result<Self> {
        Self::new(
            vec![Pose::new(x0, y, 0.0), Pose::new(x0 + length, y, 0.0)],
            DEFAULT_SCAN_INTERVAL,
        )
    }

    /// Parses `x y heading` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut waypoints = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let vals = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::format(i + 1, format!("cannot parse `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let [x, y, h] = vals[..] else {
                return Err(Error::format(i + 1, "expected `x y heading`"));
            };
            waypoints.push(Pose::new(x, y, h));
        }
        Self::new(waypoints, DEFAULT_SCAN_INTERVAL)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for p in &self.waypoints {
            writeln!(out, "{} {} {}", p.x, p.y, p.heading).unwrap();
        }
        out
    }

    /// Total translational length.
    pub fn length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| w[0].position().distance(w[1].position()))
            .sum()
    }

    pub fn reversed(&self) -> Self {
        Self {
            waypoints: self.waypoints.iter().rev().copied().collect(),
            scan_interval: self.scan_interval,
        }
    }

    /// Poses at every `scan_interval` along the polyline, plus the end point
    /// when the length is not a whole number of intervals. Headings are
    /// interpolated along the shorter arc between consecutive waypoints.
    pub fn sample(&self) -> Result<Vec<(f64, Pose)>> {
        let total = self.length();
        if self.waypoints.len() < 2 || total <= 0.0 {
            return Err(Error::InvalidParameter("path has zero length".into()));
        }
        let steps = (total / self.scan_interval + 1e-9).floor() as usize;
        let mut distances: Vec<f64> = (0..=steps)
            .map(|k| (k as f64 * self.scan_interval).min(total))
            .collect();
        if total - distances[steps] > 1e-9 {
            distances.push(total);
        }
        distances.dedup();

        let mut out = Vec::with_capacity(distances.len());
        let mut seg = 0;
        let mut seg_start = 0.0;
        let legs: Vec<f64> = self
            .waypoints
            .windows(2)
            .map(|w| w[0].position().distance(w[1].position()))
            .collect();
        for d in distances {
            while seg + 1 < legs.len() && d > seg_start + legs[seg] {
                seg_start += legs[seg];
                seg += 1;
            }
            let (a, b) = (self.waypoints[seg], self.waypoints[seg + 1]);
            let t = if legs[seg] > 0.0 {
                ((d - seg_start) / legs[seg]).clamp(0.0, 1.0)
            } else {
                1.0
            };
            let mut turn = (b.heading - a.heading).rem_euclid(TAU);
            if turn > PI {
                turn -= TAU;
            }
            out.push((
                d,
                Pose::new(
                    a.x + t * (b.x - a.x),
                    a.y + t * (b.y - a.y),
                    a.heading + t * turn,
                ),
            ));
        }
        Ok(out)
    }
}
