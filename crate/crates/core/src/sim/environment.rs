//! Wall-segment environments.
//!
//! The built-in corridors are parametric reconstructions stored as fixture
//! files: `A` and `B` are 1.7 m corridors with inset doors, `C` is 2.1 m wide
//! with a deep doorway and wall-mounted boards, `A_star` is `A` with door F
//! opened, and `control` is an open 10 m x 9 m arena.

use std::fmt::Write as _;
use std::path::Path;

use super::geometry::Segment;
use super::path::PathScript;
use crate::error::{Error, Result};

const FIXTURE_A: &str = include_str!("../../fixtures/A.env");
const FIXTURE_B: &str = include_str!("../../fixtures/B.env");
const FIXTURE_C: &str = include_str!("../../fixtures/C.env");
const FIXTURE_CONTROL: &str = include_str!("../../fixtures/control.env");
const PATH_CORRIDOR: &str = include_str!("../../fixtures/corridor.path");
const PATH_CONTROL: &str = include_str!("../../fixtures/control.path");

/// Label of the door panel removed to turn `A` into `A_star`.
pub const OPENED_DOOR: &str = "door_F";

/// Names accepted by [`Environment::builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["A", "A_star", "B", "C", "control"];

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub name: String,
    pub segments: Vec<Segment>,
}

impl Environment {
    pub fn new(name: impl Into<String>, segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidParameter(
                "environment has no segments".into(),
            ));
        }
        let finite = segments.iter().all(|s| {
            [s.start.x, s.start.y, s.end.x, s.end.y]
                .iter()
                .all(|v| v.is_finite())
        });
        if !finite {
            return Err(Error::InvalidParameter(
                "non-finite segment coordinate".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            segments,
        })
    }

    /// One of the frozen environments in [`BUILTIN_NAMES`].
    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "A" | "A_star" | "A*" => FIXTURE_A,
            "B" => FIXTURE_B,
            "C" => FIXTURE_C,
            "control" => FIXTURE_CONTROL,
            _ => return Err(Error::UnknownEnvironment(name.to_string())),
        };
        let env = Self::parse(name, text)?;
        if matches!(name, "A_star" | "A*") {
            return Ok(env.without_label("A_star", OPENED_DOOR));
        }
        Ok(env)
    }

    /// A built-in name, or else a path to an environment file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        match Self::builtin(name_or_path) {
            Err(Error::UnknownEnvironment(_)) if Path::new(name_or_path).is_file() => {
                Self::load(name_or_path)
            }
            other => other,
        }
    }

    /// Copy with every segment carrying `label` removed.
    pub fn without_label(&self, name: &str, label: &str) -> Self {
        Self {
            name: name.to_string(),
            segments: self
                .segments
                .iter()
                .filter(|s| s.label.as_deref() != Some(label))
                .cloned()
                .collect(),
        }
    }

    /// Parses `x1 y1 x2 y2 [label]` lines; `#` starts a comment.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut segments = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !(4..=5).contains(&toks.len()) {
                return Err(Error::format(i + 1, "expected `x1 y1 x2 y2 [label]`"));
            }
            let mut c = [0.0f64; 4];
            for (slot, tok) in c.iter_mut().zip(&toks) {
                *slot = tok
                    .parse()
                    .map_err(|_| Error::format(i + 1, format!("cannot parse `{tok}`")))?;
                if !slot.is_finite() {
                    return Err(Error::format(i + 1, "non-finite coordinate"));
                }
            }
            let mut s = Segment::new(c[0], c[1], c[2], c[3]);
            s.label = toks.get(4).map(|l| l.to_string());
            segments.push(s);
        }
        Self::new(name, segments)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::parse(&name, &text)
    }

    /// Serialises in the environment file format with round-trip precision.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for s in &self.segments {
            write!(out, "{} {} {} {}", s.start.x, s.start.y, s.end.x, s.end.y).unwrap();
            if let Some(l) = &s.label {
                write!(out, " {l}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// The scripted route used for this built-in environment.
    pub fn default_path(&self) -> PathScript {
        let text = if self.name == "control" {
            PATH_CONTROL
        } else {
            PATH_CORRIDOR
        };
        PathScript::parse(text).expect("built-in path fixtures are valid")
    }

    /// Width of a corridor: distance between the right wall (`y = 0`) and the
    /// longest wall parallel to it.
    pub fn corridor_width(&self) -> Option<f64> {
        self.segments
            .iter()
            .filter(|s| {
                s.label.as_deref() == Some("wall") && s.start.y == s.end.y && s.start.y > 0.0
            })
            .max_by(|a, b| {
                let la = (a.end.x - a.start.x).abs();
                let lb = (b.end.x - b.start.x).abs();
                la.total_cmp(&lb)
            })
            .map(|s| s.start.y)
    }
}
