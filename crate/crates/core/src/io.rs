//! On-disk formats: JSON files for triangulations, coordinates, and curves;
//! CSV for deformation-ray tables. Numbers are rendered with at most twelve
//! significant digits so identical inputs give byte-identical files.

use crate::deform::RayTable;
use crate::surface::{build_triangulation, Triangulation, TriangulationError};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: declared genus {declared_g}, marked {declared_n} but faces give genus {got_g}, marked {got_n}")]
    TypeMismatch {
        path: String,
        declared_g: usize,
        declared_n: usize,
        got_g: usize,
        got_n: usize,
    },
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error("{path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

/// `{"genus": g, "marked": n, "faces": [[±e1, ±e2, ±e3], ...]}` with
/// 1-based signed edge indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub genus: usize,
    pub marked: usize,
    pub faces: Vec<[i64; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightsFile {
    pub edge_weights: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricFile {
    pub edge_lengths: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShearRadiusFile {
    pub shears: Vec<f64>,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShearsFile {
    pub shears: Vec<f64>,
}

/// `{"curves": [{"name": ..., "steps": [[edge, face], ...]}]}` with 1-based
/// edge and face indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvesFile {
    pub curves: Vec<CurveEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveEntry {
    pub name: String,
    pub steps: Vec<[i64; 2]>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    std::fs::write(path, text + "\n").map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Load and validate a triangulation file, cross-checking the declared
/// surface type against the face data.
pub fn load_triangulation(path: &Path) -> Result<Triangulation, IoError> {
    let file: TriangulationFile = read_json(path)?;
    let tri = build_triangulation(&file.faces)?;
    if tri.genus() != file.genus || tri.num_vertices() != file.marked {
        return Err(IoError::TypeMismatch {
            path: path.display().to_string(),
            declared_g: file.genus,
            declared_n: file.marked,
            got_g: tri.genus(),
            got_n: tri.num_vertices(),
        });
    }
    Ok(tri)
}

/// Render with at most 12 significant digits, using the shortest
/// representation that round-trips within that budget.
pub fn fmt_f64_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let shortest = format!("{x}");
    if significant_digits(&shortest) <= 12 {
        return shortest;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float literal");
    format!("{rounded}")
}

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = digits.trim_start_matches('0');
    trimmed.len()
}

impl RayTable {
    /// CSV with header
    /// `t,L_1..L_E,theta_1..theta_n,s_1..s_E,r_1..r_n,len_<name>...,flags`.
    pub fn to_csv(&self) -> String {
        let mut header: Vec<String> = vec!["t".to_string()];
        header.extend((1..=self.num_edges).map(|e| format!("L_{e}")));
        header.extend((1..=self.num_vertices).map(|v| format!("theta_{v}")));
        header.extend((1..=self.num_edges).map(|e| format!("s_{e}")));
        header.extend((1..=self.num_vertices).map(|v| format!("r_{v}")));
        header.extend(self.curve_names.iter().map(|n| format!("len_{n}")));
        header.push("flags".to_string());
        let mut out = header.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut cells: Vec<String> = vec![fmt_f64_sig12(row.t)];
            cells.extend(row.lengths.iter().map(|&x| fmt_f64_sig12(x)));
            cells.extend(row.angles.iter().map(|&x| fmt_f64_sig12(x)));
            cells.extend(row.shears.iter().map(|&x| fmt_f64_sig12(x)));
            cells.extend(row.radii.iter().map(|&x| fmt_f64_sig12(x)));
            cells.extend(
                row.curve_lengths
                    .iter()
                    .map(|l| l.map_or("nan".to_string(), fmt_f64_sig12)),
            );
            cells.push(row.flags.join(";"));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}
