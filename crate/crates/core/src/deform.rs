//! Peripheral and interior (anti-)stretch deformations, deformation-ray
//! sampling, and the cusped and circle-packed limit data.
//!
//! Both stretches act diagonally in shear-radius coordinates, so they are
//! implemented through the exact closed forms on the interior/peripheral
//! decomposition of the edge lengths: peripheral scales the radii by `e^t`
//! keeping shears fixed, interior scales the interior weights (hence the
//! shears) by `e^t` keeping radii fixed.

use crate::foliation;
use crate::metric::{self, ConeSurface, MetricError};
use crate::surface::CurveClass;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StretchMode {
    Peripheral,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformError {
    #[error("ray needs t0 < t1 and steps >= 2 (got t0={t0}, t1={t1}, steps={steps})")]
    BadGrid { t0: f64, t1: f64, steps: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Interior/peripheral decomposition of a surface's edge lengths.
fn split(surface: &ConeSurface) -> (Vec<f64>, Vec<f64>) {
    foliation::decompose(surface.tri(), surface.lengths())
        .expect("a valid cone-surface is admissible")
}

fn assemble(
    surface: &ConeSurface,
    w0: &[f64],
    radii: &[f64],
    scale_w0: f64,
    scale_r: f64,
) -> ConeSurface {
    let tri = surface.tri();
    let lengths = (0..tri.num_edges())
        .map(|e| {
            let (tail, head) = tri.endpoints(e);
            scale_w0 * w0[e] + scale_r * (radii[tail] + radii[head])
        })
        .collect();
    ConeSurface::new(tri.clone(), lengths).expect("stretched lengths stay in the admissible cone")
}

/// Partial (anti-)stretch by parameter `t` (stretch for `t > 0`,
/// anti-stretch for `t < 0`).
pub fn stretch(surface: &ConeSurface, mode: StretchMode, t: f64) -> ConeSurface {
    let (w0, radii) = split(surface);
    match mode {
        StretchMode::Peripheral => assemble(surface, &w0, &radii, 1.0, t.exp()),
        StretchMode::Interior => assemble(surface, &w0, &radii, t.exp(), 1.0),
    }
}

/// The limit of the interior anti-stretch ray: every edge length is the sum
/// of its endpoint radii and all shears vanish.
pub fn circle_packed_limit(surface: &ConeSurface) -> ConeSurface {
    let (w0, radii) = split(surface);
    assemble(surface, &w0, &radii, 0.0, 1.0)
}

/// Shear coordinates of the cusped limit of the peripheral stretch ray.
pub fn cusped_target(surface: &ConeSurface) -> Vec<f64> {
    metric::shear_radius_coords(surface).shears
}

/// One sampled row of a deformation ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayRow {
    pub t: f64,
    pub lengths: Vec<f64>,
    pub angles: Vec<f64>,
    pub shears: Vec<f64>,
    pub radii: Vec<f64>,
    /// One entry per requested curve; `None` when the holonomy is not
    /// hyperbolic at this row.
    pub curve_lengths: Vec<Option<f64>>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayTable {
    pub rows: Vec<RayRow>,
    pub curve_names: Vec<String>,
    pub num_edges: usize,
    pub num_vertices: usize,
}

fn ray_row(
    surface: &ConeSurface,
    mode: StretchMode,
    w0: &[f64],
    radii0: &[f64],
    shears0: &[f64],
    t: f64,
    curves: &[(String, CurveClass)],
) -> RayRow {
    let row_surface = match mode {
        StretchMode::Peripheral => assemble(surface, w0, radii0, 1.0, t.exp()),
        StretchMode::Interior => assemble(surface, w0, radii0, t.exp(), 1.0),
    };
    let angles = metric::cone_angles(&row_surface);
    let (shears, radii) = match mode {
        StretchMode::Peripheral => (
            shears0.to_vec(),
            radii0.iter().map(|r| r * t.exp()).collect(),
        ),
        StretchMode::Interior => (
            shears0.iter().map(|s| s * t.exp()).collect(),
            radii0.to_vec(),
        ),
    };
    let mut flags = Vec::new();
    if angles.iter().any(|&a| a >= PI) {
        flags.push("angle_ge_pi".to_string());
    }
    let mut curve_lengths = Vec::with_capacity(curves.len());
    for (name, curve) in curves {
        match metric::curve_length(&row_surface, curve) {
            Ok(len) => curve_lengths.push(Some(len)),
            Err(MetricError::EllipticHolonomy { .. }) => {
                flags.push(format!("elliptic:{name}"));
                curve_lengths.push(None);
            }
            Err(_) => {
                flags.push(format!("invalid:{name}"));
                curve_lengths.push(None);
            }
        }
    }
    RayRow {
        t,
        lengths: row_surface.lengths().to_vec(),
        angles,
        shears,
        radii,
        curve_lengths,
        flags,
    }
}

fn grid(t0: f64, t1: f64, steps: usize) -> Result<Vec<f64>, DeformError> {
    if steps < 2 || !(t0 < t1) {
        return Err(DeformError::BadGrid { t0, t1, steps });
    }
    let h = (t1 - t0) / (steps - 1) as f64;
    Ok((0..steps).map(|k| t0 + h * k as f64).collect())
}

/// Sample a deformation ray on a uniform grid. Rows are independent and are
/// evaluated in parallel when the `parallel` feature is enabled; the table
/// is assembled in grid order either way.
pub fn sample_ray(
    surface: &ConeSurface,
    mode: StretchMode,
    t0: f64,
    t1: f64,
    steps: usize,
    curves: &[(String, CurveClass)],
) -> Result<RayTable, DeformError> {
    let ts = grid(t0, t1, steps)?;
    let (w0, radii0) = split(surface);
    let shears0 = cusped_target(surface);
    let rows = crate::exec::map_values(&ts, |&t| {
        ray_row(surface, mode, &w0, &radii0, &shears0, t, curves)
    });
    Ok(table(surface, curves, rows))
}

/// Sequential reference implementation of [`sample_ray`]; the benchmark
/// suite compares the two.
pub fn sample_ray_seq(
    surface: &ConeSurface,
    mode: StretchMode,
    t0: f64,
    t1: f64,
    steps: usize,
    curves: &[(String, CurveClass)],
) -> Result<RayTable, DeformError> {
    let ts = grid(t0, t1, steps)?;
    let (w0, radii0) = split(surface);
    let shears0 = cusped_target(surface);
    let rows = ts
        .iter()
        .map(|&t| ray_row(surface, mode, &w0, &radii0, &shears0, t, curves))
        .collect();
    Ok(table(surface, curves, rows))
}

fn table(surface: &ConeSurface, curves: &[(String, CurveClass)], rows: Vec<RayRow>) -> RayTable {
    RayTable {
        rows,
        curve_names: curves.iter().map(|(n, _)| n.clone()).collect(),
        num_edges: surface.tri().num_edges(),
        num_vertices: surface.tri().num_vertices(),
    }
}
