//! Command-line front end: validation, coordinate conversion, deformation
//! rays, flips, limits, and maximal-angle reports over flat JSON/CSV files.
//!
//! Exit codes: 0 on success, 2 for validation or domain errors, 3 for
//! numeric or geometric failures. Every error path prints a single
//! `ERROR <code>: <detail>` line on stderr.

use clap::{Parser, Subcommand, ValueEnum};
use conesurf::deform::{self, StretchMode};
use conesurf::foliation::{self, ShearRadius};
use conesurf::io::{
    self, fmt_f64_sig12, CurveEntry, CurvesFile, MetricFile, ShearRadiusFile, ShearsFile,
    TriangulationFile, WeightsFile,
};
use conesurf::metric::{self, ConeSurface, MetricError};
use conesurf::{validate_curve, CurveClass, CuspedSurface, Triangulation};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "conesurf",
    about = "Coordinates and deformations of hyperbolic cone-surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordKind {
    Edges,
    Sr,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Per,
    Int,
}

impl From<Mode> for StretchMode {
    fn from(m: Mode) -> StretchMode {
        match m {
            Mode::Per => StretchMode::Peripheral,
            Mode::Int => StretchMode::Interior,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a triangulation file and report its surface type.
    Validate { tri: PathBuf },
    /// Convert between edge-weight and shear-radius coordinate files.
    Coords {
        tri: PathBuf,
        data: PathBuf,
        #[arg(long, value_enum)]
        from: CoordKind,
        #[arg(long, value_enum)]
        to: CoordKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report cone angles, Gauss-Bonnet area, and the angle bound per vertex.
    Angles { tri: PathBuf, metric: PathBuf },
    /// Apply one (anti-)stretch and write the deformed metric.
    Stretch {
        tri: PathBuf,
        metric: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a deformation ray into a CSV table.
    Ray {
        tri: PathBuf,
        metric: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Curve lengths on the cusped surface with the given shears.
    Cusped {
        tri: PathBuf,
        shears: PathBuf,
        curves: PathBuf,
    },
    /// Geodesic flip of one edge; optionally write the new files.
    Flip {
        tri: PathBuf,
        metric: PathBuf,
        /// 1-based edge index.
        #[arg(long)]
        edge: usize,
        #[arg(long)]
        out_tri: Option<PathBuf>,
        #[arg(long)]
        out_metric: Option<PathBuf>,
    },
    /// Cone angle of the chart-boundary sequence at one vertex.
    Maxangle {
        tri: PathBuf,
        /// 1-based vertex index.
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        n: u64,
    },
}

struct CmdError {
    exit: u8,
    code: &'static str,
    detail: String,
}

impl CmdError {
    fn validation(code: &'static str, detail: impl ToString) -> CmdError {
        CmdError {
            exit: EXIT_VALIDATION,
            code,
            detail: detail.to_string(),
        }
    }

    fn numeric(code: &'static str, detail: impl ToString) -> CmdError {
        CmdError {
            exit: EXIT_NUMERIC,
            code,
            detail: detail.to_string(),
        }
    }
}

impl From<io::IoError> for CmdError {
    fn from(e: io::IoError) -> CmdError {
        CmdError::validation("io", e)
    }
}

impl From<MetricError> for CmdError {
    fn from(e: MetricError) -> CmdError {
        match e {
            MetricError::GeodesicFlip { .. }
            | MetricError::EllipticHolonomy { .. }
            | MetricError::AxisMissesEdge { .. } => CmdError::numeric("geometry", e),
            other => CmdError::validation("domain", other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("ERROR {}: {}", err.code, err.detail);
            ExitCode::from(err.exit)
        }
    }
}

fn load_surface(tri_path: &Path, metric_path: &Path) -> Result<ConeSurface, CmdError> {
    let tri = io::load_triangulation(tri_path)?;
    let metric: MetricFile = io::read_json(metric_path)?;
    ConeSurface::new(tri, metric.edge_lengths).map_err(CmdError::from)
}

fn load_curves(tri: &Triangulation, path: &Path) -> Result<Vec<(String, CurveClass)>, CmdError> {
    let file: CurvesFile = io::read_json(path)?;
    file.curves
        .iter()
        .map(|CurveEntry { name, steps }| {
            validate_curve(tri, steps)
                .map(|c| (name.clone(), c))
                .map_err(|e| CmdError::validation("curve", format!("{name}: {e}")))
        })
        .collect()
}

fn run(cmd: Cmd) -> Result<(), CmdError> {
    match cmd {
        Cmd::Validate { tri } => {
            let t = io::load_triangulation(&tri)?;
            println!(
                "V={} E={} F={} g={} n={}",
                t.num_vertices(),
                t.num_edges(),
                t.num_faces(),
                t.genus(),
                t.num_vertices()
            );
            for v in 0..t.num_vertices() {
                let star = t
                    .vertex_star(v)
                    .map_err(|e| CmdError::validation("index", e))?;
                let faces = t
                    .faces_at_vertex(v)
                    .map_err(|e| CmdError::validation("index", e))?;
                println!(
                    "vertex {}: star={} faces={} max_angle_bound={}",
                    v + 1,
                    star.len(),
                    faces,
                    fmt_f64_sig12(std::f64::consts::PI * faces as f64)
                );
            }
            println!("ok");
            Ok(())
        }
        Cmd::Coords {
            tri,
            data,
            from,
            to,
            out,
        } => {
            let t = io::load_triangulation(&tri)?;
            let weights = match from {
                CoordKind::Edges => {
                    let w: WeightsFile = io::read_json(&data)?;
                    foliation::validate_admissible(&t, &w.edge_weights)
                        .map_err(|e| CmdError::validation("admissibility", e))?;
                    w.edge_weights
                }
                CoordKind::Sr => {
                    let srf: ShearRadiusFile = io::read_json(&data)?;
                    let sr = ShearRadius {
                        shears: srf.shears,
                        radii: srf.radii,
                    };
                    foliation::reconstruct(&t, &sr)
                        .map_err(|e| CmdError::validation("balance", e))?
                }
            };
            match to {
                CoordKind::Edges => {
                    let file = WeightsFile {
                        edge_weights: round_vec(&weights),
                    };
                    emit_json(out.as_deref(), &file)
                }
                CoordKind::Sr => {
                    let sr = foliation::shear_radius(&t, &weights)
                        .map_err(|e| CmdError::numeric("numeric", e))?;
                    let file = ShearRadiusFile {
                        shears: round_vec(&sr.shears),
                        radii: round_vec(&sr.radii),
                    };
                    emit_json(out.as_deref(), &file)
                }
            }
        }
        Cmd::Angles { tri, metric } => {
            let x = load_surface(&tri, &metric)?;
            let angles = metric::cone_angles(&x);
            for (v, theta) in angles.iter().enumerate() {
                println!("theta_{}={}", v + 1, fmt_f64_sig12(*theta));
            }
            println!("area={}", fmt_f64_sig12(metric::area(&x)));
            Ok(())
        }
        Cmd::Stretch {
            tri,
            metric,
            mode,
            t,
            out,
        } => {
            let x = load_surface(&tri, &metric)?;
            let y = deform::stretch(&x, mode.into(), t);
            let file = MetricFile {
                edge_lengths: round_vec(y.lengths()),
            };
            emit_json(out.as_deref(), &file)
        }
        Cmd::Ray {
            tri,
            metric,
            mode,
            t0,
            t1,
            steps,
            curves,
            out,
        } => {
            let x = load_surface(&tri, &metric)?;
            let curve_list = match curves {
                Some(path) => load_curves(x.tri(), &path)?,
                None => Vec::new(),
            };
            let table = deform::sample_ray(&x, mode.into(), t0, t1, steps, &curve_list)
                .map_err(|e| CmdError::validation("ray", e))?;
            std::fs::write(&out, table.to_csv())
                .map_err(|e| CmdError::numeric("write", format!("{}: {e}", out.display())))?;
            println!("wrote {} rows to {}", table.rows.len(), out.display());
            Ok(())
        }
        Cmd::Cusped {
            tri,
            shears,
            curves,
        } => {
            let t = io::load_triangulation(&tri)?;
            let sf: ShearsFile = io::read_json(&shears)?;
            let y =
                CuspedSurface::new(t, sf.shears).map_err(|e| CmdError::validation("balance", e))?;
            let curve_list = load_curves(y.tri(), &curves)?;
            for (name, c) in &curve_list {
                let len = y
                    .length(c)
                    .map_err(|e| CmdError::numeric("holonomy", format!("{name}: {e}")))?;
                println!("{name} length {}", fmt_f64_sig12(len));
            }
            Ok(())
        }
        Cmd::Flip {
            tri,
            metric,
            edge,
            out_tri,
            out_metric,
        } => {
            let x = load_surface(&tri, &metric)?;
            if edge == 0 || edge > x.tri().num_edges() {
                return Err(CmdError::validation(
                    "index",
                    format!("edge {edge} out of range (1-based)"),
                ));
            }
            let (y, new_len) = metric::geodesic_flip(&x, edge - 1)?;
            println!("edge {edge} new_length {}", fmt_f64_sig12(new_len));
            if let Some(path) = out_tri {
                let file = TriangulationFile {
                    genus: y.tri().genus(),
                    marked: y.tri().num_vertices(),
                    faces: y
                        .tri()
                        .faces()
                        .iter()
                        .map(|f| {
                            [0, 1, 2].map(|p| {
                                let se = f[p];
                                let idx = (se.edge + 1) as i64;
                                if se.positive {
                                    idx
                                } else {
                                    -idx
                                }
                            })
                        })
                        .collect(),
                };
                io::write_json(&path, &file)?;
            }
            if let Some(path) = out_metric {
                let file = MetricFile {
                    edge_lengths: round_vec(y.lengths()),
                };
                io::write_json(&path, &file)?;
            }
            Ok(())
        }
        Cmd::Maxangle { tri, vertex, n } => {
            let t = io::load_triangulation(&tri)?;
            if vertex == 0 || vertex > t.num_vertices() {
                return Err(CmdError::validation(
                    "index",
                    format!("vertex {vertex} out of range (1-based)"),
                ));
            }
            let p = vertex - 1;
            let x = metric::max_angle_sequence(&t, p, n)?;
            let theta = metric::cone_angles(&x)[p];
            let faces = t
                .faces_at_vertex(p)
                .map_err(|e| CmdError::validation("index", e))?;
            let bound = std::f64::consts::PI * faces as f64;
            println!(
                "theta={} bound={} deficit={}",
                fmt_f64_sig12(theta),
                fmt_f64_sig12(bound),
                fmt_f64_sig12(bound - theta)
            );
            Ok(())
        }
    }
}

/// Round to the 12-significant-digit grid used by the file formats so that
/// converting back and forth reproduces files byte for byte.
fn round_vec(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&x| fmt_f64_sig12(x).parse().unwrap_or(x))
        .collect()
}

fn emit_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<(), CmdError> {
    match out {
        Some(path) => {
            io::write_json(path, value)?;
            Ok(())
        }
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("serialization cannot fail")
            );
            Ok(())
        }
    }
}
