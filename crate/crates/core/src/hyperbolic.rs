//! Scalar hyperbolic trigonometry, triangle solvers, canonical placement in
//! the upper half-plane, and the isometry algebra shared by the geometric
//! modules.
//!
//! Everything here works in the upper half-plane model. The base point is
//! `i = (0, 1)` and the reference direction is "up" (along the positive
//! imaginary axis). Isometries are unit-determinant 2x2 real matrices acting
//! by Moebius transformations, identified with their negatives.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::ops::Mul;
use thiserror::Error;

/// Tolerance for the unit-determinant invariant of [`Isometry`].
pub const DET_TOL: f64 = 1e-9;

/// Guard band for clamping arguments of `acos`/`asin` into `[-1, 1]`.
const CLAMP_GUARD: f64 = 1e-12;

/// Trace tolerance separating parabolic from hyperbolic/elliptic isometries.
pub const TRACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("side lengths ({0}, {1}, {2}) violate the strict triangle inequalities")]
    TriangleInequality(f64, f64, f64),
    #[error("{what} must be positive and finite, got {value}")]
    NotPositive { what: &'static str, value: f64 },
    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("matrix determinant {0} is not a positive unit within tolerance")]
    Determinant(f64),
}

/// Clamp into `[-1, 1]`, rejecting values farther than the guard band.
fn clamped_unit(x: f64, what: &'static str) -> Result<f64, DomainError> {
    if !x.is_finite() || x > 1.0 + CLAMP_GUARD || x < -1.0 - CLAMP_GUARD {
        return Err(DomainError::OutOfRange {
            what,
            value: x,
            lo: -1.0,
            hi: 1.0,
        });
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// `ln(sinh x)` for `x > 0`, stable across the whole positive range.
pub(crate) fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

/// Hyperbolic distance between two upper half-plane points.
pub fn distance(p: PointH2, q: PointH2) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    (1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y)).acosh()
}

/// A point of the upper half-plane model (`y > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointH2 {
    pub x: f64,
    pub y: f64,
}

impl PointH2 {
    pub fn new(x: f64, y: f64) -> Result<Self, DomainError> {
        if !(y > 0.0) || !y.is_finite() || !x.is_finite() {
            return Err(DomainError::NotPositive {
                what: "imaginary part of a half-plane point",
                value: y,
            });
        }
        Ok(Self { x, y })
    }

    /// The base point `i`.
    pub const BASE: PointH2 = PointH2 { x: 0.0, y: 1.0 };

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Result<Self, DomainError> {
        Self::new(z.re, z.im)
    }
}

/// A boundary point of the half-plane: a real number or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

/// Orientation-preserving isometry of the upper half-plane: a real 2x2
/// matrix of determinant one, identified with its negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub m: [[f64; 2]; 2],
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    /// Build from matrix entries, renormalizing to unit determinant.
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self, DomainError> {
        let mut iso = Isometry { m };
        let det = iso.det();
        if !det.is_finite() || det <= 0.0 {
            return Err(DomainError::Determinant(det));
        }
        iso.renormalize();
        Ok(iso)
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Rescale so that the determinant is exactly one. Keeps drift over long
    /// products below [`DET_TOL`].
    fn renormalize(&mut self) {
        let det = self.det();
        debug_assert!(det > 0.0, "isometry determinant must stay positive");
        let s = det.sqrt().recip();
        for row in &mut self.m {
            row[0] *= s;
            row[1] *= s;
        }
    }

    pub fn inverse(&self) -> Isometry {
        let [[a, b], [c, d]] = self.m;
        let mut iso = Isometry {
            m: [[d, -b], [-c, a]],
        };
        iso.renormalize();
        iso
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let [[a, b], [c, d]] = self.m;
        (z * a + b) / (z * c + d)
    }

    pub fn apply_point(&self, p: PointH2) -> PointH2 {
        let z = self.apply(p.to_complex());
        PointH2 { x: z.re, y: z.im }
    }

    /// Image of a boundary point under the Moebius action.
    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        let [[a, b], [c, d]] = self.m;
        match p {
            BoundaryPoint::Infinity => {
                if c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(a / c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = c * x + d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((a * x + b) / den)
                }
            }
        }
    }

    /// Translation by hyperbolic distance `d` along the upward geodesic
    /// through `i` (negative `d` moves down).
    pub fn move_up(d: f64) -> Isometry {
        Isometry {
            m: [[(0.5 * d).exp(), 0.0], [0.0, (-0.5 * d).exp()]],
        }
    }

    /// Rotation about the base point `i` by angle `theta` (counterclockwise).
    pub fn rotation(theta: f64) -> Isometry {
        let (s, c) = (0.5 * theta).sin_cos();
        Isometry {
            m: [[c, s], [-s, c]],
        }
    }

    /// Rotation by pi about `i` (`z -> -1/z`); reverses the frame direction.
    pub fn half_turn() -> Isometry {
        Isometry {
            m: [[0.0, 1.0], [-1.0, 0.0]],
        }
    }

    /// The isometry taking `p` to the base point `i` and the ray `p -> q`
    /// to the upward ray at `i`. Requires `p != q`.
    pub fn two_point_normalizer(p: PointH2, q: PointH2) -> Isometry {
        // First move p to i by z -> (z - p.x)/p.y.
        let s = p.y.sqrt();
        let a1 = Isometry {
            m: [[1.0 / s, -p.x / s], [0.0, s]],
        };
        let w = a1.apply(q.to_complex());
        // In the disk model centered at i, the upward ray maps to the
        // positive real axis; rotate the image of q onto it.
        let u = (w - Complex64::i()) / (w + Complex64::i());
        let theta = u.arg();
        Isometry::rotation(-theta) * a1
    }

    /// The unique orientation-preserving isometry with `p1 -> q1`,
    /// `p2 -> q2`. The distances `d(p1,p2)` and `d(q1,q2)` must agree;
    /// no check is performed beyond debug assertions.
    pub fn mapping_segment(p1: PointH2, p2: PointH2, q1: PointH2, q2: PointH2) -> Isometry {
        debug_assert!((distance(p1, p2) - distance(q1, q2)).abs() < 1e-7);
        Isometry::two_point_normalizer(q1, q2).inverse() * Isometry::two_point_normalizer(p1, p2)
    }

    /// Fixed points on the boundary for non-elliptic isometries.
    pub fn boundary_fixed_points(&self) -> (BoundaryPoint, BoundaryPoint) {
        let [[a, b], [c, d]] = self.m;
        let disc = (self.trace() * self.trace() - 4.0).max(0.0).sqrt();
        if c.abs() > 1e-300 {
            let x1 = ((a - d) + disc) / (2.0 * c);
            let x2 = ((a - d) - disc) / (2.0 * c);
            (BoundaryPoint::Finite(x1), BoundaryPoint::Finite(x2))
        } else if (d - a).abs() > 1e-300 {
            (BoundaryPoint::Finite(b / (d - a)), BoundaryPoint::Infinity)
        } else {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity)
        }
    }
}

impl Mul for Isometry {
    type Output = Isometry;

    /// Composition: `(a * b).apply(z) == a.apply(b.apply(z))`.
    fn mul(self, rhs: Isometry) -> Isometry {
        let a = self.m;
        let b = rhs.m;
        let mut out = Isometry {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        };
        out.renormalize();
        out
    }
}

/// Classification of an isometry by its trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsometryClass {
    /// Closed geodesic of the given translation length.
    Hyperbolic { length: f64 },
    /// `|tr| = 2` within [`TRACE_TOL`]; zero translation length.
    Parabolic,
    /// Rotation by the given angle in `(0, pi]`.
    Elliptic { angle: f64 },
}

/// Classify `m` and report its translation length or rotation angle.
pub fn translation_length(m: &Isometry) -> IsometryClass {
    let t = m.trace().abs();
    if (t - 2.0).abs() <= TRACE_TOL {
        IsometryClass::Parabolic
    } else if t > 2.0 {
        IsometryClass::Hyperbolic {
            length: 2.0 * (t / 2.0).acosh(),
        }
    } else {
        IsometryClass::Elliptic {
            angle: 2.0 * (t / 2.0).acos(),
        }
    }
}

/// Side lengths of a hyperbolic triangle; `l[k]` is opposite vertex `k`,
/// vertices are in counterclockwise order, and edge `k` is parametrized
/// from vertex `k+1` to vertex `k+2` (indices mod 3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleLengths {
    l: [f64; 3],
}

impl TriangleLengths {
    pub fn new(l: [f64; 3]) -> Result<Self, DomainError> {
        for &x in &l {
            if !(x > 0.0) || !x.is_finite() {
                return Err(DomainError::NotPositive {
                    what: "triangle side length",
                    value: x,
                });
            }
        }
        for k in 0..3 {
            if l[(k + 1) % 3] + l[(k + 2) % 3] <= l[k] {
                return Err(DomainError::TriangleInequality(l[0], l[1], l[2]));
            }
        }
        Ok(Self { l })
    }

    pub fn sides(&self) -> [f64; 3] {
        self.l
    }

    pub fn semiperimeter(&self) -> f64 {
        0.5 * (self.l[0] + self.l[1] + self.l[2])
    }

    /// Incircle tangency offsets: `t[k]` is the distance from vertex `k` to
    /// the tangency points on its two adjacent sides.
    pub fn offsets(&self) -> [f64; 3] {
        let l = self.l;
        [
            0.5 * (l[1] + l[2] - l[0]),
            0.5 * (l[2] + l[0] - l[1]),
            0.5 * (l[0] + l[1] - l[2]),
        ]
    }

    /// Interior angles, `angles()[k]` at vertex `k`. Uses the half-angle
    /// form `tan^2(a/2) = sinh t_{k+1} sinh t_{k+2} / (sinh s sinh t_k)`,
    /// which stays stable for side lengths far beyond the overflow range of
    /// `cosh`.
    pub fn angles(&self) -> [f64; 3] {
        let t = self.offsets();
        let ln_s = ln_sinh(self.semiperimeter());
        let lt = [ln_sinh(t[0]), ln_sinh(t[1]), ln_sinh(t[2])];
        let mut a = [0.0; 3];
        for k in 0..3 {
            let half = 0.5 * (lt[(k + 1) % 3] + lt[(k + 2) % 3] - ln_s - lt[k]);
            a[k] = 2.0 * half.exp().atan();
        }
        a
    }

    /// Inradius, from `tanh r = sqrt( prod_k sinh t_k / sinh s )`.
    pub fn inradius(&self) -> f64 {
        let t = self.offsets();
        let ln_tanh =
            0.5 * (ln_sinh(t[0]) + ln_sinh(t[1]) + ln_sinh(t[2]) - ln_sinh(self.semiperimeter()));
        ln_tanh.exp().atanh()
    }

    /// Half central angles: `beta[k]` is the angle at the incenter between
    /// the ray to vertex `k` and the ray to either adjacent tangency point.
    pub fn half_central_angles(&self) -> [f64; 3] {
        let r = self.inradius();
        let sh = r.sinh();
        self.offsets().map(|t| (t.tanh() / sh).atan())
    }

    /// Distance from the incenter to vertex `k`.
    fn center_to_vertex(&self) -> [f64; 3] {
        let r = self.inradius();
        self.offsets().map(|t| {
            if t > 300.0 {
                // cosh(t) would overflow; acosh(cosh t cosh r) ~ t + ln cosh r
                t + r.cosh().ln()
            } else {
                (t.cosh() * r.cosh()).acosh()
            }
        })
    }
}

/// A canonically placed hyperbolic triangle: incircle centered at the base
/// point `i` and vertex 0 on the upward reference ray, vertices in
/// counterclockwise order.
#[derive(Debug, Clone, Copy)]
pub struct Placement {
    pub vertices: [PointH2; 3],
    pub incenter: PointH2,
    pub inradius: f64,
    /// Angles at the incenter of the rays to the three vertices, measured
    /// counterclockwise from the reference ray.
    pub vertex_angles: [f64; 3],
}

impl Placement {
    /// Central angle from the ray to vertex `k` to the ray to vertex `k+1`.
    pub fn central_angle(&self, k: usize) -> f64 {
        let a = self.vertex_angles[(k + 1) % 3] - self.vertex_angles[k % 3];
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    }
}

/// Canonical placement of a triangle with the given side lengths.
///
/// The vertex coordinates grow like `exp` of the side lengths, so this is
/// meant for moderate triangles; the frame-based holonomy machinery avoids
/// placements entirely.
pub fn canonical_placement(lengths: &TriangleLengths) -> Placement {
    let beta = lengths.half_central_angles();
    let d = lengths.center_to_vertex();
    let phi = [0.0, beta[0] + beta[1], beta[0] + 2.0 * beta[1] + beta[2]];
    let mut vertices = [PointH2::BASE; 3];
    for k in 0..3 {
        let iso = Isometry::rotation(phi[k]) * Isometry::move_up(d[k]);
        vertices[k] = iso.apply_point(PointH2::BASE);
    }
    Placement {
        vertices,
        incenter: PointH2::BASE,
        inradius: lengths.inradius(),
        vertex_angles: phi,
    }
}

/// Point at arc-length fraction `t` along the geodesic from `p` to `q`.
pub fn geodesic_point(p: PointH2, q: PointH2, t: f64) -> PointH2 {
    let n = Isometry::two_point_normalizer(p, q);
    let d = distance(p, q);
    n.inverse().apply_point(PointH2 {
        x: 0.0,
        y: (t * d).exp(),
    })
}

/// Length of the geodesic arc inside a triangle with boundary endpoints
/// `p = (edge i, t_p)` and `q = (edge j, t_q)`, with `t` proportional to
/// arc length along each edge (edge `k` runs from vertex `k+1` to `k+2`).
pub fn arc_length_in_triangle(
    lengths: &TriangleLengths,
    p: (usize, f64),
    q: (usize, f64),
) -> Result<f64, DomainError> {
    let (i, tp) = p;
    let (j, tq) = q;
    for &(idx, t) in &[(i, tp), (j, tq)] {
        if idx > 2 {
            return Err(DomainError::OutOfRange {
                what: "edge index",
                value: idx as f64,
                lo: 0.0,
                hi: 2.0,
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(DomainError::OutOfRange {
                what: "boundary coordinate",
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    let l = lengths.sides();
    if i == j {
        return Ok((tp - tq).abs() * l[i]);
    }
    // Edges i and j share vertex k, the remaining index; the law of cosines
    // there needs cos of that interior angle.
    let k = 3 - i - j;
    let zeta = lengths.angles()[k].cos();
    // Distances from p and q to the shared vertex along their edges.
    let (a, b) = if j == (i + 1) % 3 {
        // shared vertex = end of edge i = start of edge j
        ((1.0 - tp) * l[i], tq * l[j])
    } else {
        // j == i + 2: shared vertex = start of edge i = end of edge j
        (tp * l[i], (1.0 - tq) * l[j])
    };
    let c = a.cosh() * b.cosh() - a.sinh() * b.sinh() * zeta;
    Ok(c.max(1.0).acosh())
}

/// The angle of parallelism `arcsin(1 / cosh d)` at distance `d >= 0`.
pub fn angle_of_parallelism(d: f64) -> f64 {
    let c = d.cosh();
    if c.is_infinite() {
        0.0
    } else {
        (1.0 / c).asin()
    }
}

/// Distance between the two off-foot points `p(r, x)` and `q(theta, r, y)`.
///
/// `p` sits at signed offset `x` on the geodesic orthogonal to the reference
/// ray at distance `r` from the base point; `q` sits at signed offset `y` on
/// the orthogonal geodesic of the ray rotated by `theta`. Positive offsets
/// are to the left of the outgoing ray.
pub fn foot_offset_distance(r: f64, x: f64, theta: f64, y: f64) -> Result<f64, DomainError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(DomainError::NotPositive {
            what: "foot distance r",
            value: r,
        });
    }
    if !(theta > -PI && theta < PI) {
        return Err(DomainError::OutOfRange {
            what: "angle theta",
            value: theta,
            lo: -PI,
            hi: PI,
        });
    }
    let offset_point = |along: Isometry, off: f64| -> PointH2 {
        let side = if off >= 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 };
        (along * Isometry::rotation(side) * Isometry::move_up(off.abs())).apply_point(PointH2::BASE)
    };
    let p = offset_point(Isometry::move_up(r), x);
    let q = offset_point(Isometry::rotation(theta) * Isometry::move_up(r), y);
    Ok(distance(p, q))
}

/// `acos` that clamps arguments within the guard band of `[-1, 1]` and
/// rejects anything farther out.
pub fn guarded_acos(x: f64) -> Result<f64, DomainError> {
    Ok(clamped_unit(x, "acos argument")?.acos())
}
