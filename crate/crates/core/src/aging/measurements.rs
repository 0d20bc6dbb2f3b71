//! Display measurement time series: CSV ingestion, normalization and
//! piecewise-linear interpolation in time.

use std::fmt::Write as _;
use std::io::Read;

use crate::colorimetry::Xyy;
use crate::error::{Error, Result};

use super::ColorPoint;

/// Header of the measurement CSV, in column order.
pub const CSV_HEADER: [&str; 13] = [
    "hours", "x_w", "y_w", "Y_w", "x_r", "y_r", "Y_r", "x_g", "y_g", "Y_g", "x_b", "y_b", "Y_b",
];

/// One measurement session: white and the three primary tips at a given age.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRecord {
    pub hours: f64,
    /// Indexed by [`ColorPoint::index`].
    pub points: [Xyy; 4],
}

impl MeasurementRecord {
    pub fn new(hours: f64, white: Xyy, red: Xyy, green: Xyy, blue: Xyy) -> Self {
        Self {
            hours,
            points: [white, red, green, blue],
        }
    }

    pub fn point(&self, p: ColorPoint) -> Xyy {
        self.points[p.index()]
    }

    /// Copy with every luminance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            hours: self.hours,
            points: self.points.map(|c| c.scaled(factor)),
        }
    }
}

/// Time-ordered measurements with luminance normalized so that the earliest
/// white has `Y = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSeries {
    records: Vec<MeasurementRecord>,
    white_reference: f64,
}

impl MeasurementSeries {
    /// Validates raw records (luminance in cd/m²) and normalizes them.
    pub fn new(records: Vec<MeasurementRecord>) -> Result<Self> {
        if records.len() < 2 {
            return Err(Error::TooFewRecords(records.len()));
        }
        for (i, rec) in records.iter().enumerate() {
            if !rec.hours.is_finite() || rec.hours < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "record {i}: hours must be finite and non-negative, got {}",
                    rec.hours
                )));
            }
            if i > 0 && rec.hours <= records[i - 1].hours {
                return Err(Error::NonIncreasingHours {
                    source_name: "<records>".into(),
                    line: i as u64 + 1,
                    hours: rec.hours,
                    previous: records[i - 1].hours,
                });
            }
            for c in &rec.points {
                c.validate()?;
            }
        }
        let white_reference = records[0].point(ColorPoint::White).luminance;
        if !(white_reference > 0.0) {
            return Err(Error::InvalidArgument(
                "earliest white luminance must be positive".into(),
            ));
        }
        let records = records
            .into_iter()
            .map(|r| r.scaled(1.0 / white_reference))
            .collect();
        Ok(Self {
            records,
            white_reference,
        })
    }

    /// Normalized records.
    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    /// Earliest white luminance in the ingestion units.
    pub fn white_reference(&self) -> f64 {
        self.white_reference
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn first_hours(&self) -> f64 {
        self.records[0].hours
    }

    pub fn last_hours(&self) -> f64 {
        self.records[self.records.len() - 1].hours
    }

    /// Piecewise-linear interpolation of every x, y and Y independently.
    /// Times outside the measured range clamp to the nearest endpoint.
    pub fn interpolate_at(&self, hours: f64) -> MeasurementRecord {
        let recs = &self.records;
        if hours <= recs[0].hours {
            return recs[0];
        }
        let last = recs[recs.len() - 1];
        if hours >= last.hours {
            return last;
        }
        // First record strictly after `hours`; 1..len-1 given the guards above.
        let upper = recs.partition_point(|r| r.hours <= hours);
        let lo = recs[upper - 1];
        if lo.hours == hours {
            return lo;
        }
        let hi = recs[upper];
        let s = (hours - lo.hours) / (hi.hours - lo.hours);
        let lerp = |a: f64, b: f64| a + (b - a) * s;
        let mut points = lo.points;
        for (p, q) in points.iter_mut().zip(hi.points.iter()) {
            *p = Xyy::new(lerp(p.x, q.x), lerp(p.y, q.y), lerp(p.luminance, q.luminance));
        }
        MeasurementRecord { hours, points }
    }

    /// Serializes back to the CSV format with luminance in the original units.
    pub fn to_csv(&self) -> String {
        let mut out = CSV_HEADER.join(",");
        out.push('\n');
        for rec in &self.records {
            let _ = write!(out, "{}", rec.hours);
            for c in &rec.points {
                let _ = write!(out, ",{},{},{}", c.x, c.y, c.luminance * self.white_reference);
            }
            out.push('\n');
        }
        out
    }
}

/// Parses a measurement CSV. `source_name` is used in error messages.
pub fn load_measurements<R: Read>(source: R, source_name: &str) -> Result<MeasurementSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let parse_err = |line: u64, message: String| Error::Parse {
        source_name: source_name.to_owned(),
        line,
        message,
    };

    let header = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.is_empty() {
        return Err(parse_err(1, "missing header".into()));
    }
    let found: Vec<&str> = header.iter().collect();
    if found != CSV_HEADER {
        return Err(parse_err(
            header.position().map_or(1, |p| p.line()),
            format!("expected header `{}`, found `{}`", CSV_HEADER.join(","), found.join(",")),
        ));
    }

    let mut raw: Vec<(u64, MeasurementRecord)> = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != CSV_HEADER.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", CSV_HEADER.len(), row.len()),
            ));
        }
        let mut values = [0.0f64; 13];
        for (i, (field, name)) in row.iter().zip(CSV_HEADER).enumerate() {
            values[i] = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("field `{name}`: cannot parse `{field}` as a number")))?;
        }
        let hours = values[0];
        if hours < 0.0 {
            return Err(parse_err(line, format!("field `hours`: negative value {hours}")));
        }
        let mut points = [Xyy::new(0.0, 0.0, 0.0); 4];
        for p in ColorPoint::ALL {
            let base = 1 + 3 * p.index();
            let c = Xyy::new(values[base], values[base + 1], values[base + 2]);
            check_point(c, p, line, source_name)?;
            points[p.index()] = c;
        }
        if let Some((_, prev)) = raw.last() {
            if hours <= prev.hours {
                return Err(Error::NonIncreasingHours {
                    source_name: source_name.to_owned(),
                    line,
                    hours,
                    previous: prev.hours,
                });
            }
        }
        raw.push((line, MeasurementRecord { hours, points }));
    }

    if raw.len() < 2 {
        return Err(parse_err(
            0,
            format!("at least 2 measurement rows are required, found {}", raw.len()),
        ));
    }
    MeasurementSeries::new(raw.into_iter().map(|(_, r)| r).collect())
}

fn check_point(c: Xyy, p: ColorPoint, line: u64, source_name: &str) -> Result<()> {
    let s = p.suffix();
    let fail = |field: String, message: String| {
        Err(Error::InvalidMeasurement {
            source_name: source_name.to_owned(),
            line,
            field,
            message,
        })
    };
    if c.y <= 0.0 {
        return fail(format!("y_{s}"), format!("y must be positive, got {}", c.y));
    }
    if c.x < 0.0 {
        return fail(format!("x_{s}"), format!("x must be non-negative, got {}", c.x));
    }
    if c.x + c.y > 1.0 {
        return fail(format!("x_{s}+y_{s}"), format!("x + y must not exceed 1, got {}", c.x + c.y));
    }
    if c.luminance < 0.0 {
        return fail(format!("Y_{s}"), format!("luminance must be non-negative, got {}", c.luminance));
    }
    if p == ColorPoint::White && c.luminance == 0.0 {
        return fail(format!("Y_{s}"), "white luminance must be positive".into());
    }
    Ok(())
}
