//! CSV and JSON input/output.
//!
//! Every CSV written here has a header row whose column names end in a unit
//! suffix (`_hz`, `_gauss`, `_s`, `_v_per_cm`, `_deg`, or `_1` for
//! dimensionless). Files are written to a temporary sibling and renamed into
//! place, so readers never observe a partial file.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use serde::Serialize;

use crate::calibration::{AlignmentScan, PolarData};
use crate::error::{Error, Result};
use crate::protocols::PiecewiseConstant;

/// Output encoding for tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Named numeric columns sharing one row count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the column count.
    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::invalid("table", e.to_string());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_float(*v))).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| Error::invalid("table", e.to_string()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        to_json_bytes(self)
    }

    pub fn encode(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Reads a headed numeric CSV and checks the header against `expected`.
/// `optional` trailing columns may be absent. Parse errors carry the
/// 1-based line number of the offending record.
fn read_numeric(path: &Path, expected: &[&str], optional: usize) -> Result<(usize, Vec<Vec<f64>>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(BufReader::new(file));
    let parse = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let from_csv = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line());
        match e.kind() {
            csv::ErrorKind::Io(_) => Error::io(path, std::io::Error::other(e.to_string())),
            _ => parse(line, e.to_string()),
        }
    };
    let header = reader.headers().map_err(from_csv)?.clone();
    let names: Vec<&str> = header.iter().collect();
    let required = expected.len() - optional;
    let width = names.len();
    if width < required || width > expected.len() || names[..] != expected[..width] {
        return Err(parse(
            1,
            format!("header {:?} does not match expected {:?}", names, expected),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(from_csv)?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse(line, format!("column `{}`: `{field}` is not a finite number", names[j])))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse(1, "no data rows".into()));
    }
    Ok((width, rows))
}

/// Polar pattern CSV with columns `phi_b_deg, delta_omega_hz[, sigma_hz]`.
pub fn read_polar_data(path: &Path) -> Result<PolarData> {
    let (width, rows) = read_numeric(path, &["phi_b_deg", "delta_omega_hz", "sigma_hz"], 1)?;
    Ok(PolarData {
        phi_b: rows.iter().map(|r| r[0].to_radians()).collect(),
        delta_omega: rows.iter().map(|r| r[1]).collect(),
        sigma: (width == 3).then(|| rows.iter().map(|r| r[2]).collect()),
    })
}

pub fn polar_data_table(data: &PolarData) -> Table {
    let mut t = match data.sigma {
        Some(_) => Table::new(&["phi_b_deg", "delta_omega_hz", "sigma_hz"]),
        None => Table::new(&["phi_b_deg", "delta_omega_hz"]),
    };
    for (k, (&phi, &d)) in data.phi_b.iter().zip(&data.delta_omega).enumerate() {
        let mut row = vec![phi.to_degrees(), d];
        if let Some(s) = &data.sigma {
            row.push(s[k]);
        }
        t.push(row);
    }
    t
}

/// Alignment scan CSV with columns `control, splitting_hz`.
pub fn read_alignment_scan(path: &Path) -> Result<AlignmentScan> {
    let (_, rows) = read_numeric(path, &["control", "splitting_hz"], 0)?;
    Ok(AlignmentScan {
        control: rows.iter().map(|r| r[0]).collect(),
        splitting_hz: rows.iter().map(|r| r[1]).collect(),
        true_b_z: None,
    })
}

pub fn alignment_scan_table(scan: &AlignmentScan) -> Table {
    let mut t = Table::new(&["control", "splitting_hz"]);
    for (&c, &s) in scan.control.iter().zip(&scan.splitting_hz) {
        t.push(vec![c, s]);
    }
    t
}

/// Waveform CSV with columns `time_s, e_perp_v_per_cm`. Row `k` gives the
/// field held from `time_s[k]` until the next row; the last row only closes
/// the final interval and its field value is ignored.
pub fn read_waveform(path: &Path) -> Result<PiecewiseConstant> {
    let (_, rows) = read_numeric(path, &["time_s", "e_perp_v_per_cm"], 0)?;
    if rows.len() < 2 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 2,
            message: "a waveform needs at least two rows".into(),
        });
    }
    let breakpoints = rows.iter().map(|r| r[0]).collect();
    let values = rows[..rows.len() - 1].iter().map(|r| r[1]).collect();
    PiecewiseConstant::new(breakpoints, values)
}

pub fn waveform_table(w: &PiecewiseConstant) -> Table {
    let mut t = Table::new(&["time_s", "e_perp_v_per_cm"]);
    let values = w.values();
    for (k, &b) in w.breakpoints().iter().enumerate() {
        let v = values.get(k).or(values.last()).copied().unwrap_or(0.0);
        t.push(vec![b, v]);
    }
    t
}
