//! Matrix file formats.
//!
//! CSV: newline-separated rows, comma-separated cells, no header. A cell is
//! a complex literal over the grammar
//!
//! ```text
//! FLOAT | FLOAT(+|-)FLOATi | FLOATi | i | -i
//! ```
//!
//! with whitespace ignored anywhere inside the cell and a bare `i` standing
//! for a unit imaginary part (`2+i`, `-i` are accepted).
//!
//! JSON: `{"rows": m, "cols": n, "entries": [[re, im], ...]}` row-major.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    /// Pick a format from the file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> FileFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => FileFormat::Json,
            _ => FileFormat::Csv,
        }
    }
}

/// A matrix location on disk: where and in which format.
#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub format: FileFormat,
    pub path: PathBuf,
}

impl MatrixFile {
    pub fn new(path: impl Into<PathBuf>, format: Option<FileFormat>) -> MatrixFile {
        let path = path.into();
        let format = format.unwrap_or_else(|| FileFormat::from_path(&path));
        MatrixFile { format, path }
    }
}

/// File-level failures. All of them are usage errors from the CLI's point
/// of view (exit code 2).
#[derive(Debug)]
pub enum FileError {
    Io { path: PathBuf, source: std::io::Error },
    Parse { row: usize, col: usize, message: String },
    Ragged { row: usize, expected: usize, got: usize },
    Empty,
    BadJson(String),
    Invalid(String),
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Io { path, source } => write!(f, "{}: {}", path.display(), source),
            FileError::Parse { row, col, message } => {
                write!(f, "parse error at row {row}, column {col}: {message}")
            }
            FileError::Ragged { row, expected, got } => write!(
                f,
                "ragged rows: row {row} has {got} cells, expected {expected}"
            ),
            FileError::Empty => write!(f, "matrix file holds no entries"),
            FileError::BadJson(msg) => write!(f, "bad json matrix: {msg}"),
            FileError::Invalid(msg) => write!(f, "invalid matrix: {msg}"),
        }
    }
}

impl std::error::Error for FileError {}

/// Parse one complex cell. Whitespace-tolerant; rejects `nan`/`inf` so the
/// finite-entries invariant holds at the boundary.
pub fn parse_complex(cell: &str) -> Result<Complex64, String> {
    let s: String = cell.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty cell".into());
    }
    let parse_float = |text: &str| -> Result<f64, String> {
        let v: f64 = text
            .parse()
            .map_err(|_| format!("invalid float literal {text:?}"))?;
        if !v.is_finite() {
            return Err(format!("non-finite literal {text:?}"));
        }
        Ok(v)
    };
    // Bare unit imaginary parts.
    let parse_imag = |text: &str| -> Result<f64, String> {
        match text {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => parse_float(other),
        }
    };

    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the sign separating real and imaginary parts: the last +/-
        // that is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let ch = bytes[k];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re = parse_float(&body[..k])?;
                let im = parse_imag(&body[k..])?;
                Ok(Complex64::new(re, im))
            }
            None => Ok(Complex64::new(0.0, parse_imag(body)?)),
        }
    } else {
        Ok(Complex64::new(parse_float(&s)?, 0.0))
    }
}

/// Render one complex entry with `precision` significant digits. Purely real
/// entries print as a single float so common matrices stay hand-readable.
pub fn render_complex(z: Complex64, precision: usize) -> String {
    let digits = precision.max(1) - 1;
    if z.im == 0.0 {
        format!("{:.*e}", digits, z.re)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("{:.*e}{}{:.*e}i", digits, z.re, sign, digits, z.im.abs())
    }
}

/// Parse CSV text into a matrix. Errors carry 1-based row/column positions.
pub fn parse_csv(text: &str) -> Result<ComplexMatrix, FileError> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut width = 0usize;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (j, cell) in line.split(',').enumerate() {
            let z = parse_complex(cell).map_err(|message| FileError::Parse {
                row: i + 1,
                col: j + 1,
                message,
            })?;
            row.push(z);
        }
        if rows.is_empty() {
            width = row.len();
        } else if row.len() != width {
            return Err(FileError::Ragged {
                row: i + 1,
                expected: width,
                got: row.len(),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() || width == 0 {
        return Err(FileError::Empty);
    }
    let m = rows.len();
    let entries: Vec<Complex64> = rows.into_iter().flatten().collect();
    ComplexMatrix::new(m, width, entries).map_err(|e| FileError::Invalid(e.to_string()))
}

/// Render a matrix as CSV text.
pub fn render_csv(m: &ComplexMatrix, precision: usize) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let cells: Vec<String> = (0..m.cols())
            .map(|j| render_complex(m.get(i, j), precision))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

/// Parse the JSON matrix object.
pub fn parse_json(text: &str) -> Result<ComplexMatrix, FileError> {
    let raw: JsonMatrix =
        serde_json::from_str(text).map_err(|e| FileError::BadJson(e.to_string()))?;
    let entries: Vec<Complex64> = raw
        .entries
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::new(raw.rows, raw.cols, entries).map_err(|e| FileError::BadJson(e.to_string()))
}

/// Render the JSON matrix object. JSON floats are written with the shortest
/// round-trip representation, so precision is exact regardless of the CSV
/// precision setting.
pub fn render_json(m: &ComplexMatrix) -> String {
    let raw = JsonMatrix {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&raw).expect("plain struct serializes")
}

/// Read a matrix file in its declared format.
pub fn read_matrix(file: &MatrixFile) -> Result<ComplexMatrix, FileError> {
    let text = std::fs::read_to_string(&file.path).map_err(|source| FileError::Io {
        path: file.path.clone(),
        source,
    })?;
    match file.format {
        FileFormat::Csv => parse_csv(&text),
        FileFormat::Json => parse_json(&text),
    }
}

/// Write a matrix file in its declared format. CSV carries `precision`
/// significant digits per component; 17 round-trips `f64` exactly.
pub fn write_matrix(
    m: &ComplexMatrix,
    file: &MatrixFile,
    precision: usize,
) -> Result<(), FileError> {
    let text = match file.format {
        FileFormat::Csv => render_csv(m, precision),
        FileFormat::Json => render_json(m),
    };
    std::fs::write(&file.path, text).map_err(|source| FileError::Io {
        path: file.path.clone(),
        source,
    })
}
