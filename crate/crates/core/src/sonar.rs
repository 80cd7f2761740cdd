//! Sonar preprocessing: clamp at the maximum range, average over each 10 cm
//! of travel, then invert and normalise so nearer echoes give larger values.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Number of sonar beams around the robot.
pub const BEAM_COUNT: usize = 16;
/// Ranges beyond this are treated as "nothing seen".
pub const DEFAULT_MAX_RANGE: f64 = 4.0;
/// Distance travelled between presentations.
pub const DEFAULT_SEGMENT_LENGTH: f64 = 0.10;

// Distances are accumulated from floating point deltas; 2 cm steps must
// still cross a 10 cm boundary on the fifth step.
const DISTANCE_EPS: f64 = 1e-9;

/// One ring of range readings, metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawScan {
    ranges: [f64; BEAM_COUNT],
}

impl RawScan {
    pub fn new(ranges: [f64; BEAM_COUNT]) -> Result<Self> {
        if let Some(r) = ranges.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::OutOfRange(format!(
                "sonar range {r} must be finite and non-negative"
            )));
        }
        Ok(Self { ranges })
    }

    pub fn from_slice(ranges: &[f64]) -> Result<Self> {
        let ranges: [f64; BEAM_COUNT] =
            ranges.try_into().map_err(|_| Error::DimensionMismatch {
                expected: BEAM_COUNT,
                got: ranges.len(),
            })?;
        Self::new(ranges)
    }

    pub fn ranges(&self) -> &[f64; BEAM_COUNT] {
        &self.ranges
    }
}

/// Normalised, inverted sonar input in `[0, 1]^16`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perception {
    values: [f64; BEAM_COUNT],
}

impl Perception {
    pub fn values(&self) -> &[f64; BEAM_COUNT] {
        &self.values
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// `1 - min(range, r_max) / r_max` per beam.
pub fn normalize(raw: &RawScan, r_max: f64) -> Perception {
    Perception {
        values: raw.ranges.map(|r| invert(r, r_max)),
    }
}

fn invert(range: f64, r_max: f64) -> f64 {
    1.0 - range.min(r_max) / r_max
}

/// Collects raw scans over one segment of travel and emits their smoothed perception.
#[derive(Debug, Clone)]
pub struct SegmentAccumulator {
    segment_length: f64,
    r_max: f64,
    accumulated: f64,
    buffer: Vec<RawScan>,
}

impl Default for SegmentAccumulator {
    fn default() -> Self {
        Self {
            segment_length: DEFAULT_SEGMENT_LENGTH,
            r_max: DEFAULT_MAX_RANGE,
            accumulated: 0.0,
            buffer: Vec::new(),
        }
    }
}

impl SegmentAccumulator {
    pub fn new(segment_length: f64, r_max: f64) -> Result<Self> {
        if !(segment_length.is_finite() && segment_length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "segment length must be positive, got {segment_length}"
            )));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "r_max must be positive, got {r_max}"
            )));
        }
        Ok(Self {
            segment_length,
            r_max,
            ..Self::default()
        })
    }

    pub fn accumulated_distance(&self) -> f64 {
        self.accumulated
    }

    pub fn buffered(&self) -> usize {
        self.buffer.len()
    }

    /// Buffers `scan`, taken `distance_delta` metres after the previous one.
    ///
    /// Returns a perception once the accumulated distance reaches the segment
    /// length. Overshoot is carried into the next segment, which then starts
    /// with the scan that crossed the boundary.
    pub fn push_scan(&mut self, scan: RawScan, distance_delta: f64) -> Result<Option<Perception>> {
        if !(distance_delta.is_finite() && distance_delta >= 0.0) {
            return Err(Error::OutOfRange(format!(
                "distance delta {distance_delta} must be finite and non-negative"
            )));
        }
        self.buffer.push(scan);
        self.accumulated += distance_delta;
        if self.accumulated + DISTANCE_EPS < self.segment_length {
            return Ok(None);
        }

        let n = self.buffer.len() as f64;
        let mut mean = [0.0; BEAM_COUNT];
        for s in &self.buffer {
            for (m, r) in mean.iter_mut().zip(&s.ranges) {
                *m += r.min(self.r_max);
            }
        }
        let values = mean.map(|sum| invert(sum / n, self.r_max));

        // A single push can span several segments; one perception is emitted
        // and the remainder kept below one segment.
        let overshoot = (self.accumulated - self.segment_length).max(0.0) % self.segment_length;
        self.buffer.clear();
        if overshoot > DISTANCE_EPS {
            self.accumulated = overshoot;
            self.buffer.push(scan);
        } else {
            self.accumulated = 0.0;
        }
        Ok(Some(Perception { values }))
    }
}

/// A raw scan tagged with the cumulative distance travelled when it was taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSample {
    pub distance_m: f64,
    pub scan: RawScan,
}

fn scan_header() -> Vec<String> {
    std::iter::once("distance_m".to_string())
        .chain((0..BEAM_COUNT).map(|i| format!("r{i}")))
        .collect()
}

/// Writes samples as `distance_m,r0,...,r15` rows with round-trip precision.
pub fn write_scan_csv<W: Write>(writer: W, samples: &[ScanSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(scan_header())?;
    for s in samples {
        let mut row = Vec::with_capacity(BEAM_COUNT + 1);
        row.push(s.distance_m.to_string());
        row.extend(s.scan.ranges.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<scan csv>", e))?;
    Ok(())
}

pub fn read_scan_csv<R: Read>(reader: R) -> Result<Vec<ScanSample>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header != scan_header() {
        return Err(Error::format(
            1,
            format!("unexpected scan header `{}`", header.join(",")),
        ));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        let values = rec
            .iter()
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::format(line, format!("cannot parse `{v}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != BEAM_COUNT + 1 {
            return Err(Error::format(
                line,
                format!("expected {} fields", BEAM_COUNT + 1),
            ));
        }
        let scan =
            RawScan::from_slice(&values[1..]).map_err(|e| Error::format(line, e.to_string()))?;
        out.push(ScanSample {
            distance_m: values[0],
            scan,
        });
    }
    Ok(out)
}
