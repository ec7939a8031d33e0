//! Length spectra of complete cusped hyperbolic surfaces described by
//! vertex-balanced shear coordinates on a triangulation: the limit objects
//! of peripheral stretch rays.
//!
//! The holonomy word is the ideal-triangle limit of the tangency-frame
//! developing map of the metric module: the per-face turn matrices use the
//! ideal inradius `artanh(1/2)` and central angle `2 pi / 3`, and each edge
//! crossing slides by the shear before reversing direction. By construction
//! the word is the pointwise limit of the cone-surface words along a
//! peripheral stretch ray.

use crate::foliation::{self};
use crate::hyperbolic::{translation_length, Isometry, IsometryClass};
use crate::metric::{cross_matrix, turn_matrix};
use crate::surface::{CurveClass, CurveError, Side, Triangulation};
use std::f64::consts::PI;
use thiserror::Error;

/// Inputs farther than this from the balance subspace are rejected; nearer
/// ones are orthogonally projected onto it.
pub const PROJECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CuspedError {
    #[error("vertex {vertex} violates the balance condition: star sum {sum}")]
    Balance { vertex: usize, sum: f64 },
    #[error("expected {expected} shears, got {got}")]
    Length { expected: usize, got: usize },
    #[error("peripheral class: |trace| = 2, no closed geodesic")]
    ParabolicClass,
    #[error("elliptic holonomy (|trace| = {trace_abs} < 2): not realized on a cusped surface")]
    Elliptic { trace_abs: f64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A complete cusped hyperbolic surface in balanced shear coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspedSurface {
    tri: Triangulation,
    shears: Vec<f64>,
}

impl CuspedSurface {
    /// Build from shears, projecting inputs within [`PROJECTION_TOL`] of the
    /// balance subspace onto it and rejecting anything farther.
    pub fn new(tri: Triangulation, shears: Vec<f64>) -> Result<Self, CuspedError> {
        if shears.len() != tri.num_edges() {
            return Err(CuspedError::Length {
                expected: tri.num_edges(),
                got: shears.len(),
            });
        }
        for (v, &sum) in foliation::star_sums(&tri, &shears).iter().enumerate() {
            if sum.abs() > PROJECTION_TOL {
                return Err(CuspedError::Balance { vertex: v, sum });
            }
        }
        let shears = foliation::project_balanced(&tri, &shears);
        Ok(CuspedSurface { tri, shears })
    }

    pub fn tri(&self) -> &Triangulation {
        &self.tri
    }

    pub fn shears(&self) -> &[f64] {
        &self.shears
    }

    /// Ideal inradius of every face.
    pub fn ideal_inradius() -> f64 {
        0.5_f64.atanh()
    }

    /// Holonomy of a closed chain of entry sides.
    pub fn chain_holonomy(&self, chain: &[Side]) -> Result<Isometry, CuspedError> {
        let tri = &self.tri;
        let m = chain.len();
        if m == 0 {
            return Err(CuspedError::Curve(CurveError::EmptyCurve));
        }
        let r = Self::ideal_inradius();
        let beta = PI / 3.0;
        let mut w = Isometry::IDENTITY;
        for k in 0..m {
            let entry = chain[k];
            let next_entry = chain[(k + 1) % m];
            let exit = tri.twin(next_entry);
            if exit.face != entry.face {
                return Err(CuspedError::Curve(CurveError::Adjacency {
                    step: (k + 1) % m,
                    edge: tri.edge_of(next_entry) + 1,
                    face: entry.face + 1,
                }));
            }
            if exit == entry {
                return Err(CuspedError::Curve(CurveError::Transport(
                    "chain exits through the side it entered".into(),
                )));
            }
            let dphi = match (exit.pos + 3 - entry.pos) % 3 {
                1 => 2.0 * beta,
                2 => 4.0 * beta,
                _ => unreachable!(),
            };
            // Tangency feet on the shared edge sit at signed offset -shear
            // from each other, exactly as in the finite-triangle word.
            let delta = -self.shears[tri.edge_of(next_entry)];
            w = w * turn_matrix(dphi, r) * cross_matrix(delta);
        }
        Ok(w)
    }

    pub fn holonomy(&self, curve: &CurveClass) -> Result<Isometry, CuspedError> {
        let chain = curve.side_chain(&self.tri)?;
        self.chain_holonomy(&chain)
    }

    /// Geodesic length `2 arcosh(|tr| / 2)`; vertex links and other
    /// peripheral classes are parabolic and carry no closed geodesic.
    pub fn length(&self, curve: &CurveClass) -> Result<f64, CuspedError> {
        let h = self.holonomy(curve)?;
        match translation_length(&h) {
            IsometryClass::Hyperbolic { length } => Ok(length),
            IsometryClass::Parabolic => Err(CuspedError::ParabolicClass),
            IsometryClass::Elliptic { .. } => Err(CuspedError::Elliptic {
                trace_abs: h.trace().abs(),
            }),
        }
    }
}
