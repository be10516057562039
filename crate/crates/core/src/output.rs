//! Result files: self-describing CSV, a JSON summary and an SVG band diagram.
//!
//! The CSV starts with `# key = value` metadata lines followed by a header
//! row and one row per `(sample, mode)`:
//!
//! ```text
//! # format = phonobands-dispersion-v1
//! # c_ref = 3155.9...
//! # l_ref = 1
//! # config_hash = 9f2c...
//! # provenance = {"cell":{...},...}
//! path_coordinate,k_x,k_y,mode_index,omega,omega_normalized
//! 0,0,0,1,0,0
//! ```
//!
//! Floats are written in shortest round-trip form, so [`read_csv`] recovers
//! the result bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bloch::WaveVector;
use crate::sweep::{
    complete_gaps, parse_vertices, CompleteGap, DispersionResult, DispersionSample, ErrorMetric,
    ErrorReport, Normalization, PathPoint, Provenance,
};
use crate::{Error, Result};

pub const CSV_FORMAT: &str = "phonobands-dispersion-v1";
pub const CSV_COLUMNS: [&str; 6] = ["path_coordinate", "k_x", "k_y", "mode_index", "omega", "omega_normalized"];

const COLUMN_NOTES: &str = "\
# columns: path_coordinate = arc length along the wave-vector path [rad/m]
#          k_x, k_y = wave vector [rad/m]
#          mode_index = branch number, 1 = lowest
#          omega = angular frequency [rad/s]
#          omega_normalized = omega * l_ref / (pi * c_ref)
";

/// A parsed result file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultFile {
    pub result: DispersionResult,
    pub config_hash: Option<String>,
}

pub fn write_csv<W: Write>(out: W, result: &DispersionResult, config_hash: Option<&str>) -> Result<()> {
    let mut out = out;
    let norm = result.normalization;
    writeln!(out, "# format = {CSV_FORMAT}")?;
    writeln!(out, "# c_ref = {}", norm.c_ref)?;
    writeln!(out, "# l_ref = {}", norm.l_ref)?;
    if let Some(hash) = config_hash {
        writeln!(out, "# config_hash = {hash}")?;
    }
    writeln!(out, "# provenance = {}", serde_json::to_string(&result.provenance)?)?;
    out.write_all(COLUMN_NOTES.as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for s in &result.samples {
        for (j, &omega) in s.omegas.iter().enumerate() {
            w.write_record([
                float(s.point.coordinate),
                float(s.point.k.kx),
                float(s.point.k.ky),
                (j + 1).to_string(),
                float(omega),
                float(norm.frequency(omega)),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip text; exponent form outside `[1e-4, 1e16)`.
pub fn float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn csv_string(result: &DispersionResult, config_hash: Option<&str>) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, result, config_hash)?;
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

pub fn read_csv<R: BufRead>(input: R) -> Result<ResultFile> {
    let mut meta = BTreeMap::new();
    let mut body = String::new();
    for line in input.lines() {
        let line = line?;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                let key = k.trim();
                if !key.contains(' ') && !key.contains(':') {
                    meta.insert(key.to_string(), v.trim().to_string());
                }
            }
        } else {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let get = |key: &str| meta.get(key).ok_or_else(|| Error::Format(format!("missing `# {key} = ...` line")));
    if get("format")? != CSV_FORMAT {
        return Err(Error::Format(format!("expected format {CSV_FORMAT}")));
    }
    let float = |key: &str| -> Result<f64> {
        get(key)?.parse().map_err(|_| Error::Format(format!("`{key}` is not a number")))
    };
    let normalization = Normalization::new(float("c_ref")?, float("l_ref")?)
        .map_err(|e| Error::Format(e.to_string()))?;
    let provenance: Provenance = serde_json::from_str(get("provenance")?)?;

    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(Error::Format(format!("unexpected columns {header:?}")));
    }
    let mut samples: Vec<DispersionSample> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let num = |i: usize| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|_| Error::Format(format!("row {}: bad {}", line + 1, CSV_COLUMNS[i])))
        };
        let mode: usize = record[3]
            .parse()
            .map_err(|_| Error::Format(format!("row {}: bad mode_index", line + 1)))?;
        let point = PathPoint {
            k: WaveVector::new(num(1)?, num(2)?),
            coordinate: num(0)?,
        };
        if mode == 1 {
            samples.push(DispersionSample { point, omegas: Vec::new() });
        }
        let current = samples
            .last_mut()
            .filter(|s| s.point == point && s.omegas.len() + 1 == mode)
            .ok_or_else(|| Error::Format(format!("row {}: modes out of order", line + 1)))?;
        current.omegas.push(num(4)?);
    }
    Ok(ResultFile {
        result: DispersionResult {
            samples,
            normalization,
            provenance,
        },
        config_hash: meta.get("config_hash").cloned(),
    })
}

pub fn parse_csv(text: &str) -> Result<ResultFile> {
    read_csv(text.as_bytes())
}

/// Frequency range covered by one branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRange {
    pub branch: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub normalized_min: f64,
    pub normalized_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchErrorSummary {
    pub branch: usize,
    pub max: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub metric: ErrorMetric,
    pub branches: Vec<BranchErrorSummary>,
}

impl From<&ErrorReport> for ErrorSummary {
    fn from(r: &ErrorReport) -> Self {
        Self {
            metric: r.metric,
            branches: r
                .branches
                .iter()
                .map(|b| BranchErrorSummary {
                    branch: b.branch,
                    max: b.max,
                    median: b.median,
                })
                .collect(),
        }
    }
}

/// Machine-readable digest of a run. Contains nothing time dependent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Resolved configuration, when the run came from a config file.
    pub config: Option<serde_json::Value>,
    pub config_hash: Option<String>,
    pub normalization: Normalization,
    pub provenance: Provenance,
    pub n_samples: usize,
    pub branches: Vec<BranchRange>,
    pub complete_gaps: Vec<CompleteGap>,
    pub errors: Option<ErrorSummary>,
}

/// Gaps narrower than this fraction of their center frequency are ignored.
pub const GAP_RELATIVE_WIDTH: f64 = 1e-3;

pub fn summarize(
    result: &DispersionResult,
    config: Option<serde_json::Value>,
    config_hash: Option<String>,
    errors: Option<&ErrorReport>,
) -> Summary {
    let norm = result.normalization;
    let branches = (0..result.n_branches())
        .map(|j| {
            let b = result.branch(j);
            let lo = b.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            BranchRange {
                branch: j + 1,
                omega_min: lo,
                omega_max: hi,
                normalized_min: norm.frequency(lo),
                normalized_max: norm.frequency(hi),
            }
        })
        .collect();
    Summary {
        config,
        config_hash,
        normalization: norm,
        provenance: result.provenance.clone(),
        n_samples: result.samples.len(),
        branches,
        complete_gaps: complete_gaps(result, GAP_RELATIVE_WIDTH),
        errors: errors.map(ErrorSummary::from),
    }
}

pub fn summary_json(summary: &Summary) -> Result<String> {
    Ok(serde_json::to_string_pretty(summary)? + "\n")
}

/// Band diagram: normalized frequency against path coordinate, one
/// polyline per branch, vertical rules at zone vertices.
pub fn band_diagram_svg(result: &DispersionResult) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const LEFT: f64 = 64.0;
    const RIGHT: f64 = 16.0;
    const TOP: f64 = 16.0;
    const BOTTOM: f64 = 48.0;
    let norm = result.normalization;
    let x_max = result.samples.last().map(|s| s.point.coordinate).unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let y_max = result
        .samples
        .iter()
        .flat_map(|s| s.omegas.iter())
        .map(|&w| norm.frequency(w))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
        * 1.05;
    let px = |x: f64| LEFT + x / x_max * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - y / y_max * (H - TOP - BOTTOM);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    for (label, x) in vertex_ticks(result) {
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{TOP}" x2="{0:.2}" y2="{1:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
            px(x),
            H - BOTTOM
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
            px(x),
            H - BOTTOM + 16.0
        );
    }
    let step = nice_step(y_max / 6.0);
    let mut tick = 0.0;
    while tick <= y_max {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(tick) + 4.0,
            format_tick(tick)
        );
        tick += step;
    }
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">Ω = ω L / (π c)</text>"#,
        H / 2.0,
        H / 2.0
    );
    for j in 0..result.n_branches() {
        let points: Vec<String> = result
            .samples
            .iter()
            .map(|s| format!("{:.2},{:.2}", px(s.point.coordinate), py(norm.frequency(s.omegas[j]))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn vertex_ticks(result: &DispersionResult) -> Vec<(&'static str, f64)> {
    let Ok(vertices) = parse_vertices(&result.provenance.path) else {
        return Vec::new();
    };
    let cell = &result.provenance.cell;
    let mut out = Vec::new();
    let mut acc = 0.0;
    for (i, v) in vertices.iter().enumerate() {
        if i > 0 {
            let a = vertices[i - 1].wave_vector(cell);
            let b = v.wave_vector(cell);
            acc += (b.kx - a.kx).hypot(b.ky - a.ky);
        }
        let label = match v {
            crate::sweep::Vertex::Gamma => "Γ",
            crate::sweep::Vertex::X => "X",
            crate::sweep::Vertex::M => "M",
            crate::sweep::Vertex::Y => "Y",
        };
        out.push((label, acc));
    }
    out
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn format_tick(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
