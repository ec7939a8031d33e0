//! Hyperbolic cone-surfaces as edge-length vectors in the admissible cone:
//! cone angles, Gauss-Bonnet area, the circular foliation, shear-radius
//! charts, geodesic flips, and curve lengths via developing maps.
//!
//! Holonomy is accumulated in frames based at the incircle tangency points
//! of the crossed edges. Each step factors into a turn about the incenter of
//! the current face and a slide along the crossed edge by the offset between
//! the two adjacent tangency points (the shear of the circular foliation).
//! All frame parameters stay bounded when edge lengths blow up, so curve
//! lengths remain computable arbitrarily far along deformation rays.

use crate::foliation::{self, FoliationError, ShearRadius};
use crate::hyperbolic::{
    translation_length, BoundaryPoint, DomainError, Isometry, IsometryClass, TriangleLengths,
};
use crate::surface::{CurveClass, CurveError, Side, Triangulation, TriangulationError};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error(transparent)]
    Admissibility(#[from] FoliationError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Combinatorics(#[from] TriangulationError),
    #[error("edge {edge} is not flippable: both sides lie in one face")]
    Unflippable { edge: usize },
    #[error("no embedded geodesic flip: angle sum {angle_sum} at a diagonal endpoint is >= pi")]
    GeodesicFlip { angle_sum: f64 },
    #[error("holonomy is not hyperbolic (|trace| = {trace_abs}): no smooth closed geodesic")]
    EllipticHolonomy { trace_abs: f64 },
    #[error("the holonomy axis does not cross the developed edge line at crossing {crossing}")]
    AxisMissesEdge { crossing: usize },
    #[error("index out of range: {0}")]
    Index(String),
}

/// A hyperbolic cone-surface: a triangulation with admissible edge lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSurface {
    tri: Triangulation,
    lengths: Vec<f64>,
}

impl ConeSurface {
    pub fn new(tri: Triangulation, lengths: Vec<f64>) -> Result<Self, MetricError> {
        foliation::validate_admissible(&tri, &lengths)?;
        Ok(ConeSurface { tri, lengths })
    }

    pub fn tri(&self) -> &Triangulation {
        &self.tri
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Side lengths of face `f` in side order.
    pub fn face_side_lengths(&self, f: usize) -> [f64; 3] {
        [0, 1, 2].map(|p| self.lengths[self.tri.edge_of(Side::new(f, p))])
    }

    /// The face as a triangle: vertex `k` of the triangle is corner `k` of
    /// the face, so the side opposite vertex `k` is face side `k + 1`.
    pub fn face_triangle(&self, f: usize) -> TriangleLengths {
        let g = self.face_side_lengths(f);
        TriangleLengths::new([g[1], g[2], g[0]])
            .expect("admissible faces satisfy the triangle inequalities")
    }
}

/// Per-face geometry for the frame-based developing map. All quantities are
/// bounded uniformly in the edge lengths.
#[derive(Debug, Clone, Copy)]
struct FaceGeometry {
    /// Incircle radius.
    inradius: f64,
    /// Half central angles at the three corners.
    beta: [f64; 3],
    /// Corner weights (incircle tangency offsets from each corner).
    offset: [f64; 3],
}

impl FaceGeometry {
    fn of(surface: &ConeSurface, f: usize) -> FaceGeometry {
        let t = surface.face_triangle(f);
        FaceGeometry {
            inradius: t.inradius(),
            beta: t.half_central_angles(),
            offset: t.offsets(),
        }
    }
}

/// Turn about the incenter: conjugate a rotation by `dphi` at the incenter
/// into the tangency frame at distance `r`.
pub(crate) fn turn_matrix(dphi: f64, r: f64) -> Isometry {
    let (s, c) = (0.5 * dphi).sin_cos();
    let (sh, ch) = (r.sinh(), r.cosh());
    Isometry {
        m: [[c + s * sh, s * ch], [-s * ch, c - s * sh]],
    }
}

/// Slide along the crossed edge by `delta`, then reverse direction into the
/// entered face's frame.
pub(crate) fn cross_matrix(delta: f64) -> Isometry {
    Isometry::move_up(delta) * Isometry::half_turn()
}

/// Cone angle at each vertex: the sum of its corner angles.
pub fn cone_angles(surface: &ConeSurface) -> Vec<f64> {
    let tri = surface.tri();
    let mut theta = vec![0.0; tri.num_vertices()];
    for f in 0..tri.num_faces() {
        let ang = surface.face_triangle(f).angles();
        for p in 0..3 {
            theta[tri.corner_vertex(f, p)] += ang[p];
        }
    }
    theta
}

/// Total area: the sum of the per-face angle deficits,
/// `(4g - 4 + 2n) pi - sum theta`.
pub fn area(surface: &ConeSurface) -> f64 {
    let f = surface.tri().num_faces() as f64;
    f * PI - cone_angles(surface).iter().sum::<f64>()
}

/// True when some cone angle is `>= pi`; curve lengths outside this regime
/// may not be realized by smooth geodesics.
pub fn has_wide_cone_angle(surface: &ConeSurface) -> bool {
    cone_angles(surface).iter().any(|&t| t >= PI)
}

/// The circular foliation of a cone-surface: edge weights equal to the edge
/// lengths, incircle tangency offsets per corner, and the inradius per face.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularFoliationData {
    pub edge_weights: Vec<f64>,
    /// `offsets[f][p]`: distance from corner `p` of face `f` to the incircle
    /// tangency points on its two adjacent sides.
    pub offsets: Vec<[f64; 3]>,
    pub inradius: Vec<f64>,
}

pub fn circular_foliation(surface: &ConeSurface) -> CircularFoliationData {
    let tri = surface.tri();
    let mut offsets = Vec::with_capacity(tri.num_faces());
    let mut inradius = Vec::with_capacity(tri.num_faces());
    for f in 0..tri.num_faces() {
        let t = surface.face_triangle(f);
        offsets.push(t.offsets());
        inradius.push(t.inradius());
    }
    CircularFoliationData {
        edge_weights: surface.lengths().to_vec(),
        offsets,
        inradius,
    }
}

/// Shear-radius coordinates of the cone-surface.
pub fn shear_radius_coords(surface: &ConeSurface) -> ShearRadius {
    foliation::shear_radius(surface.tri(), surface.lengths())
        .expect("a valid cone-surface is admissible")
}

/// Inverse chart: the cone-surface with the given shear-radius coordinates.
pub fn from_shear_radius(
    tri: &Triangulation,
    sr: &ShearRadius,
) -> Result<ConeSurface, MetricError> {
    let lengths = foliation::reconstruct(tri, sr)?;
    ConeSurface::new(tri.clone(), lengths)
}

/// Geodesic flip of edge `e`: replace it by the geodesic diagonal of the
/// quadrilateral formed by its two adjacent triangles. Returns the new
/// surface and the new diagonal length.
pub fn geodesic_flip(surface: &ConeSurface, e: usize) -> Result<(ConeSurface, f64), MetricError> {
    let tri = surface.tri();
    if e >= tri.num_edges() {
        return Err(MetricError::Index(format!("edge {e} out of range")));
    }
    let hp = tri.side_of_edge(e, true);
    let hn = tri.side_of_edge(e, false);
    if hp.face == hn.face {
        return Err(MetricError::Unflippable { edge: e });
    }
    // Quad corners at the two endpoints of e; angle sums must stay below pi
    // for the diagonal to have an embedded geodesic realization.
    let ang_a = surface.face_triangle(hp.face).angles();
    let ang_b = surface.face_triangle(hn.face).angles();
    // corner of face A at the tail resp. head of e
    let tail_a = ang_a[hp.pos];
    let head_a = ang_a[(hp.pos + 1) % 3];
    let tail_b = ang_b[(hn.pos + 1) % 3];
    let head_b = ang_b[hn.pos];
    let at_tail = tail_a + tail_b;
    let at_head = head_a + head_b;
    for sum in [at_tail, at_head] {
        if sum >= PI {
            return Err(MetricError::GeodesicFlip { angle_sum: sum });
        }
    }
    // Diagonal from the apexes P (of A) and Q (of B) via the law of cosines
    // at the tail: sides P->v and v->Q with included angle at_tail.
    let a = surface.lengths[tri.edge_of(tri.prev(hp))]; // P -> v
    let b = surface.lengths[tri.edge_of(tri.next(hn))]; // v -> Q
    let cosh_d = a.cosh() * b.cosh() - a.sinh() * b.sinh() * at_tail.cos();
    let d = cosh_d.max(1.0).acosh();
    let new_tri = tri.flip(e).map_err(|err| match err {
        crate::surface::FlipError::Unflippable(e) => MetricError::Unflippable { edge: e },
        crate::surface::FlipError::Index(e) => MetricError::Index(format!("edge {e}")),
    })?;
    let mut lengths = surface.lengths.clone();
    lengths[e] = d;
    Ok((ConeSurface::new(new_tri, lengths)?, d))
}

/// The development of a closed crossing chain: partial transfer isometries
/// from the frame of crossing 0 to the frame of each crossing, and the full
/// holonomy.
#[derive(Debug, Clone)]
pub struct CurveDevelopment {
    /// `frames[k]` maps the frame of crossing `k` into the frame of
    /// crossing 0; `frames[0]` is the identity.
    pub frames: Vec<Isometry>,
    pub holonomy: Isometry,
}

/// Develop a closed chain of entry sides.
///
/// The frame of crossing `k` is based at the incircle tangency point of the
/// entered face on the crossed edge, directed along the entered face's
/// boundary orientation.
pub fn develop_chain(
    surface: &ConeSurface,
    chain: &[Side],
) -> Result<CurveDevelopment, MetricError> {
    let tri = surface.tri();
    let m = chain.len();
    if m == 0 {
        return Err(MetricError::Curve(CurveError::EmptyCurve));
    }
    let mut frames = Vec::with_capacity(m);
    let mut w = Isometry::IDENTITY;
    frames.push(w);
    for k in 0..m {
        let entry = chain[k];
        let next_entry = chain[(k + 1) % m];
        let exit = tri.twin(next_entry);
        if exit.face != entry.face {
            return Err(MetricError::Curve(CurveError::Adjacency {
                step: (k + 1) % m,
                edge: tri.edge_of(next_entry) + 1,
                face: entry.face + 1,
            }));
        }
        if exit == entry {
            return Err(MetricError::Curve(CurveError::Transport(
                "chain exits through the side it entered".into(),
            )));
        }
        let geom = FaceGeometry::of(surface, entry.face);
        // Counterclockwise central angle from the entry tangency to the exit
        // tangency: 2 beta of each corner passed.
        let dphi = match (exit.pos + 3 - entry.pos) % 3 {
            1 => 2.0 * geom.beta[(entry.pos + 1) % 3],
            2 => 2.0 * (geom.beta[(entry.pos + 1) % 3] + geom.beta[(entry.pos + 2) % 3]),
            _ => unreachable!("exit == entry handled above"),
        };
        let turn = turn_matrix(dphi, geom.inradius);
        // Slide from the exit tangency to the entered face's tangency on the
        // shared edge; the signed offset is the difference of the two corner
        // weights at the far end of the exit side.
        let geom_next = FaceGeometry::of(surface, next_entry.face);
        let delta = geom.offset[(exit.pos + 1) % 3] - geom_next.offset[next_entry.pos];
        w = w * turn * cross_matrix(delta);
        if k + 1 < m {
            frames.push(w);
        }
    }
    Ok(CurveDevelopment {
        frames,
        holonomy: w,
    })
}

/// Holonomy of a validated curve class.
pub fn curve_holonomy(surface: &ConeSurface, curve: &CurveClass) -> Result<Isometry, MetricError> {
    let chain = curve.side_chain(surface.tri())?;
    Ok(develop_chain(surface, &chain)?.holonomy)
}

/// Geodesic length of a curve class; errors when the holonomy is not
/// hyperbolic.
pub fn curve_length(surface: &ConeSurface, curve: &CurveClass) -> Result<f64, MetricError> {
    let h = curve_holonomy(surface, curve)?;
    match translation_length(&h) {
        IsometryClass::Hyperbolic { length } => Ok(length),
        _ => Err(MetricError::EllipticHolonomy {
            trace_abs: h.trace().abs(),
        }),
    }
}

/// Length attached to a chain of entry sides (used for vertex links and
/// other internally generated chains).
pub fn chain_holonomy(surface: &ConeSurface, chain: &[Side]) -> Result<Isometry, MetricError> {
    Ok(develop_chain(surface, chain)?.holonomy)
}

/// Per-crossing distance along the developed edge line between the holonomy
/// axis and the incircle tangency point of the entered face.
pub fn tangency_deviation(
    surface: &ConeSurface,
    curve: &CurveClass,
) -> Result<Vec<f64>, MetricError> {
    let chain = curve.side_chain(surface.tri())?;
    let dev = develop_chain(surface, &chain)?;
    let h = dev.holonomy;
    if !matches!(translation_length(&h), IsometryClass::Hyperbolic { .. }) {
        return Err(MetricError::EllipticHolonomy {
            trace_abs: h.trace().abs(),
        });
    }
    let (fp1, fp2) = h.boundary_fixed_points();
    let mut out = Vec::with_capacity(chain.len());
    for (k, wk) in dev.frames.iter().enumerate() {
        let inv = wk.inverse();
        let a = inv.apply_boundary(fp1);
        let b = inv.apply_boundary(fp2);
        // In frame k the crossed edge is the imaginary axis; the axis of the
        // holonomy crosses it at i * sqrt(-a b) when a and b straddle zero.
        let u = match (a, b) {
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) if a * b < 0.0 => {
                0.5 * (-a * b).ln()
            }
            _ => return Err(MetricError::AxisMissesEdge { crossing: k }),
        };
        out.push(u.abs());
    }
    Ok(out)
}

/// The edge-length vector of the chart-boundary sequence at vertex `p`:
/// interior weights `1/n` (both endpoints at `p`), `1 + 1/n` (one endpoint),
/// `2` (otherwise), with radius `1/n` at `p` and `n` elsewhere.
pub fn max_angle_sequence(
    tri: &Triangulation,
    p: usize,
    n: u64,
) -> Result<ConeSurface, MetricError> {
    if p >= tri.num_vertices() {
        return Err(MetricError::Index(format!("vertex {p} out of range")));
    }
    if n == 0 {
        return Err(MetricError::Index("n must be at least 1".into()));
    }
    let inv = 1.0 / n as f64;
    let big = n as f64;
    let lengths = (0..tri.num_edges())
        .map(|e| {
            let (tail, head) = tri.endpoints(e);
            let ends_at_p = usize::from(tail == p) + usize::from(head == p);
            let w0 = match ends_at_p {
                2 => inv,
                1 => 1.0 + inv,
                _ => 2.0,
            };
            let r = |v: usize| if v == p { inv } else { big };
            w0 + r(tail) + r(head)
        })
        .collect();
    ConeSurface::new(tri.clone(), lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_triangulation, validate_curve, vertex_link_sides};

    fn torus_surface(l: [f64; 3]) -> ConeSurface {
        let t = build_triangulation(&[[1, 2, 3], [-1, -2, -3]]).unwrap();
        ConeSurface::new(t, l.to_vec()).unwrap()
    }

    fn sphere_surface(l: [f64; 3]) -> ConeSurface {
        let t = build_triangulation(&[[1, 2, 3], [-1, -3, -2]]).unwrap();
        ConeSurface::new(t, l.to_vec()).unwrap()
    }

    #[test]
    fn cone_angle_values() {
        let l = 3.0_f64.acosh();
        let x = torus_surface([l, l, l]);
        let theta = cone_angles(&x);
        let expect = 6.0 * (0.75_f64).acos();
        assert!((theta[0] - expect).abs() < 1e-12);
        assert!((expect - 4.33640).abs() < 1e-5);
        // tiny lengths: Euclidean limit
        let eps = torus_surface([1e-6, 1e-6, 1e-6]);
        let t = cone_angles(&eps)[0];
        assert!(t < 2.0 * PI && t > 2.0 * PI - 1e-9);
    }

    #[test]
    fn gauss_bonnet() {
        let x = torus_surface([2.0, 2.0, 3.0]);
        let theta: f64 = cone_angles(&x).iter().sum();
        assert!(theta < 2.0 * PI);
        let a = area(&x);
        assert!(a > 0.0);
        assert!((a - (2.0 * PI - theta)).abs() < 1e-12);
        let l = 3.0_f64.acosh();
        let eq = torus_surface([l, l, l]);
        let deficit = 2.0 * PI - 6.0 * (0.75_f64).acos();
        assert!((area(&eq) - deficit).abs() < 1e-12);
        assert!((area(&eq) - 1.946780).abs() < 2e-6);
    }

    #[test]
    fn circular_foliation_data() {
        let x = sphere_surface([2.0, 3.0, 4.0]);
        let c = circular_foliation(&x);
        assert_eq!(c.edge_weights, x.lengths());
        // face 0 side weights (2,3,4): offsets per corner
        assert_eq!(c.offsets[0], [1.5, 0.5, 2.5]);
        // offsets flanking each side sum to its length
        let g = x.face_side_lengths(0);
        for p in 0..3 {
            let s = c.offsets[0][p] + c.offsets[0][(p + 1) % 3];
            assert!((s - g[p]).abs() < 1e-12);
        }
    }

    #[test]
    fn chart_roundtrip() {
        let x = torus_surface([2.0, 2.0, 3.0]);
        let sr = shear_radius_coords(&x);
        assert!((sr.radii[0] - 0.5).abs() < 1e-12);
        let back = from_shear_radius(x.tri(), &sr).unwrap();
        for e in 0..3 {
            assert!((back.lengths()[e] - x.lengths()[e]).abs() < 1e-12);
        }
        // zero shears, unit radii
        let sr0 = ShearRadius {
            shears: vec![0.0; 3],
            radii: vec![1.0],
        };
        let y = from_shear_radius(x.tri(), &sr0).unwrap();
        assert_eq!(y.lengths(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn doubled_equilateral_flip() {
        let l = 3.0_f64.acosh();
        let x = sphere_surface([l, l, l]);
        let (y, d) = geodesic_flip(&x, 0).unwrap();
        assert!((d - 8.0_f64.acosh()).abs() < 1e-10);
        // flip back restores the length
        let (z, d2) = geodesic_flip(&y, 0).unwrap();
        assert!((d2 - l).abs() < 1e-10);
        for e in 0..3 {
            assert!((z.lengths()[e] - x.lengths()[e]).abs() < 1e-10);
        }
        // cone angles preserved (compare as sorted multisets; vertex ids may
        // be permuted by the rebuild)
        let mut before = cone_angles(&x);
        let mut after = cone_angles(&y);
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn reflex_quad_flip_rejected() {
        let x = sphere_surface([1.0, 2.9, 2.2]);
        match geodesic_flip(&x, 0) {
            Err(MetricError::GeodesicFlip { angle_sum }) => assert!(angle_sum >= PI),
            other => panic!("expected geodesic flip error, got {other:?}"),
        }
    }

    #[test]
    fn self_folded_flip_rejected() {
        let t = build_triangulation(&[[1, -1, 2], [-2, 3, -3]]).unwrap();
        let x = ConeSurface::new(t, vec![1.0, 1.5, 1.0]).unwrap();
        assert!(matches!(
            geodesic_flip(&x, 0),
            Err(MetricError::Unflippable { edge: 0 })
        ));
    }

    #[test]
    fn vertex_link_rotation_is_cone_angle() {
        for lengths in [[2.0, 2.0, 3.0], [1.3, 1.9, 2.4], [4.0, 4.0, 4.0]] {
            let x = torus_surface(lengths);
            let link = vertex_link_sides(x.tri(), 0).unwrap();
            let h = chain_holonomy(&x, &link).unwrap();
            let theta = cone_angles(&x)[0];
            let reduced = theta.rem_euclid(2.0 * PI);
            let folded = reduced.min(2.0 * PI - reduced);
            match translation_length(&h) {
                IsometryClass::Elliptic { angle } => {
                    assert!(
                        (angle - folded).abs() < 1e-9,
                        "lengths {lengths:?}: angle {angle} vs cone angle {theta}"
                    );
                }
                other => panic!("expected elliptic vertex link, got {other:?}"),
            }
        }
    }

    #[test]
    fn vertex_link_rotation_on_spheres() {
        let x = sphere_surface([2.0, 2.5, 3.2]);
        for v in 0..3 {
            let link = vertex_link_sides(x.tri(), v).unwrap();
            let h = chain_holonomy(&x, &link).unwrap();
            let theta = cone_angles(&x)[v];
            let folded = theta.min(2.0 * PI - theta);
            match translation_length(&h) {
                IsometryClass::Elliptic { angle } => {
                    assert!((angle - folded).abs() < 1e-9);
                }
                other => panic!("expected elliptic, got {other:?}"),
            }
        }
    }

    #[test]
    fn curve_length_reversal_invariance() {
        let x = torus_surface([2.0, 2.0, 3.0]);
        let c = validate_curve(x.tri(), &[[2, 1], [3, 2]]).unwrap();
        let l1 = curve_length(&x, &c).unwrap();
        let rev = c.reversed(x.tri()).unwrap();
        let l2 = curve_length(&x, &rev).unwrap();
        assert!((l1 - l2).abs() < 1e-10);
        assert!(l1 > 0.0);
    }

    #[test]
    fn symmetric_curve_has_equal_deviations() {
        let x = torus_surface([2.5, 2.5, 3.0]);
        let c = validate_curve(x.tri(), &[[1, 1], [2, 2]]).unwrap();
        if let Ok(dev) = tangency_deviation(&x, &c) {
            assert_eq!(dev.len(), 2);
            assert!((dev[0] - dev[1]).abs() < 1e-9);
        } else {
            panic!("expected hyperbolic holonomy");
        }
    }

    #[test]
    fn max_angle_sequence_values() {
        let t = build_triangulation(&[[1, 2, 3], [-1, -2, -3]]).unwrap();
        let x1 = max_angle_sequence(&t, 0, 1).unwrap();
        // all edges are loops at the unique vertex: 1/n + 2/n = 3
        assert_eq!(x1.lengths(), &[3.0, 3.0, 3.0]);
        let theta1 = cone_angles(&x1)[0];
        let c3 = 3.0_f64.cosh();
        let expect = 6.0 * (c3 / (c3 + 1.0)).acos();
        assert!((theta1 - expect).abs() < 1e-12);
        // strictly increasing toward 2 pi |F_p|/2 = 2 pi
        let mut prev = theta1;
        for n in [10u64, 100, 1000, 10_000] {
            let xn = max_angle_sequence(&t, 0, n).unwrap();
            let th = cone_angles(&xn)[0];
            assert!(th > prev);
            assert!(th < 2.0 * PI);
            prev = th;
        }
        assert!(2.0 * PI - prev < 0.1);
    }

    #[test]
    fn max_angle_single_face_star() {
        let t = build_triangulation(&[[1, -1, 2], [-2, 3, -3]]).unwrap();
        // find a vertex with a single incident face
        let p = (0..3)
            .find(|&v| t.faces_at_vertex(v).unwrap() == 1)
            .unwrap();
        let x = max_angle_sequence(&t, p, 10_000).unwrap();
        let theta = cone_angles(&x)[p];
        assert!(theta < PI);
        assert!(PI - theta < 0.1);
    }
}
