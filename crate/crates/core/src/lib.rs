//! Coordinate charts and deformation theory for hyperbolic cone-surfaces.
//!
//! A closed oriented surface with marked points is triangulated by arcs
//! between the marked points; assigning admissible edge lengths (strict
//! triangle inequalities on every face) produces a hyperbolic cone-surface.
//! This crate realizes the resulting coordinate systems and deformations:
//!
//! - [`surface`]: triangulation combinatorics, flips, curve crossing
//!   sequences;
//! - [`hyperbolic`]: scalar trigonometry, triangle solvers, canonical
//!   placement, isometries of the upper half-plane;
//! - [`foliation`]: edge-weight coordinates, corner weights, shear and
//!   radius maps, the vertex-balanced cone, and reconstruction;
//! - [`metric`]: cone angles, the circular foliation, shear-radius charts,
//!   geodesic flips, and curve lengths via developing maps;
//! - [`deform`]: peripheral and interior (anti-)stretch rays and their
//!   sampled tables;
//! - [`cusped`]: length spectra of the cusped surfaces that peripheral
//!   stretch rays converge to;
//! - [`io`]: JSON/CSV file formats with reproducible number formatting.
//!
//! Ray sampling is data-parallel via rayon under the default `parallel`
//! feature and falls back to sequential evaluation without it.

pub mod cusped;
pub mod deform;
mod exec;
pub mod foliation;
pub mod hyperbolic;
pub mod io;
pub mod metric;
pub mod surface;

pub use cusped::CuspedSurface;
pub use foliation::ShearRadius;
pub use hyperbolic::{Isometry, IsometryClass, PointH2, TriangleLengths};
pub use metric::ConeSurface;
pub use surface::{build_triangulation, validate_curve, CurveClass, Side, Triangulation};
