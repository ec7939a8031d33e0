//! Edge-weight coordinates on the admissible cone, corner weights, singular
//! feet, signed and arc intersection numbers, the shear and radius maps, the
//! vertex-balanced cone, and the reconstruction of edge weights from
//! shear-radius data.
//!
//! Edge weights double as measured-foliation intersection numbers and as
//! hyperbolic edge lengths; everything in this module is linear algebra over
//! the triangulation combinatorics.

use crate::surface::{Side, Triangulation};
use thiserror::Error;

/// Absolute tolerance on vertex star sums of shears.
pub const BALANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoliationError {
    #[error("face {face} violates the strict triangle inequalities (slack {slack})")]
    Admissibility { face: usize, slack: f64 },
    #[error("edge weight {value} at edge {edge} must be positive and finite")]
    NonPositiveWeight { edge: usize, value: f64 },
    #[error("vertex {vertex} violates the balance condition: star sum {sum}")]
    Balance { vertex: usize, sum: f64 },
    #[error("radius {value} at vertex {vertex} must be positive")]
    Positivity { vertex: usize, value: f64 },
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
}

/// Shear vector over edges plus a positive radius per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearRadius {
    pub shears: Vec<f64>,
    pub radii: Vec<f64>,
}

/// One weight per corner; `weights[f][p]` is the corner at position `p` of
/// face `f` (the corner between sides `p-1` and `p`, opposite side `p+1`).
#[derive(Debug, Clone, PartialEq)]
pub struct CornerWeights {
    pub weights: Vec<[f64; 3]>,
}

impl CornerWeights {
    pub fn at(&self, s: Side) -> f64 {
        self.weights[s.face][s.pos]
    }
}

fn check_len(expected: usize, got: usize) -> Result<(), FoliationError> {
    if expected != got {
        Err(FoliationError::Length { expected, got })
    } else {
        Ok(())
    }
}

/// Side weights of face `f` in side order.
fn face_weights(tri: &Triangulation, w: &[f64], f: usize) -> [f64; 3] {
    [0, 1, 2].map(|p| w[tri.signed_edge(Side::new(f, p)).edge])
}

/// Verify membership of `w` in the admissible cone: positive weights and
/// strict triangle inequalities on every face.
pub fn validate_admissible(tri: &Triangulation, w: &[f64]) -> Result<(), FoliationError> {
    check_len(tri.num_edges(), w.len())?;
    for (e, &x) in w.iter().enumerate() {
        if !(x > 0.0) || !x.is_finite() {
            return Err(FoliationError::NonPositiveWeight { edge: e, value: x });
        }
    }
    for f in 0..tri.num_faces() {
        let g = face_weights(tri, w, f);
        for p in 0..3 {
            let slack = g[p] + g[(p + 1) % 3] - g[(p + 2) % 3];
            if slack <= 0.0 {
                return Err(FoliationError::Admissibility { face: f, slack });
            }
        }
    }
    Ok(())
}

/// Corner weights `a_f(v) = (adjacent + adjacent - opposite) / 2`.
pub fn corner_weights(tri: &Triangulation, w: &[f64]) -> Result<CornerWeights, FoliationError> {
    validate_admissible(tri, w)?;
    let weights = (0..tri.num_faces())
        .map(|f| {
            let g = face_weights(tri, w, f);
            [0, 1, 2].map(|p| 0.5 * (g[(p + 2) % 3] + g[p] - g[(p + 1) % 3]))
        })
        .collect();
    Ok(CornerWeights { weights })
}

fn validate_face_triple(g: [f64; 3]) -> Result<(), FoliationError> {
    for (e, &x) in g.iter().enumerate() {
        if !(x > 0.0) || !x.is_finite() {
            return Err(FoliationError::NonPositiveWeight { edge: e, value: x });
        }
    }
    for p in 0..3 {
        let slack = g[p] + g[(p + 1) % 3] - g[(p + 2) % 3];
        if slack <= 0.0 {
            return Err(FoliationError::Admissibility { face: 0, slack });
        }
    }
    Ok(())
}

/// Boundary coordinates of the three singular feet of a face with side
/// weights `(w_0, w_1, w_2)`: `t_j = (w_{j+2} + w_j - w_{j+1}) / (2 w_j)`.
pub fn feet_coordinates(g: [f64; 3]) -> Result<[f64; 3], FoliationError> {
    validate_face_triple(g)?;
    Ok([0, 1, 2].map(|j| (g[(j + 2) % 3] + g[j] - g[(j + 1) % 3]) / (2.0 * g[j])))
}

/// Signed intersection number of the boundary point `(edge j, t_p)` of a
/// face: `I_p = (t_p - t_j) w_j`.
pub fn signed_intersection(g: [f64; 3], j: usize, t_p: f64) -> Result<f64, FoliationError> {
    let t = feet_coordinates(g)?;
    Ok((t_p - t[j]) * g[j])
}

/// Geometric intersection number of the arc with boundary endpoints
/// `p = (edge i, t_p)` and `q = (edge j, t_q)` inside one face.
pub fn arc_intersection(
    g: [f64; 3],
    p: (usize, f64),
    q: (usize, f64),
) -> Result<f64, FoliationError> {
    let feet = feet_coordinates(g)?;
    let (i, tp) = p;
    let (j, tq) = q;
    let ip = (tp - feet[i]) * g[i];
    let iq = (tq - feet[j]) * g[j];
    // Region of a boundary point: the vertex side of the tripod it lies on.
    // On edge k (running corner k+1 -> corner k+2 of the based triangle),
    // t < t_k is the corner-(k+1) region and t > t_k the corner-(k+2) one.
    let region = |k: usize, s: f64| -> Option<usize> {
        if s > 0.0 {
            Some((k + 2) % 3)
        } else if s < 0.0 {
            Some((k + 1) % 3)
        } else {
            None
        }
    };
    let same_side = match (region(i, ip), region(j, iq)) {
        (Some(a), Some(b)) => a == b,
        // a point exactly on a singular foot contributes zero either way
        _ => true,
    };
    Ok(if same_side {
        (ip.abs() - iq.abs()).abs()
    } else {
        ip.abs() + iq.abs()
    })
}

/// Shear of the normal-form foliation along each edge, from corner-weight
/// differences at the tail: left-face corner minus right-face corner.
pub fn shear_map(tri: &Triangulation, w: &[f64]) -> Result<Vec<f64>, FoliationError> {
    let a = corner_weights(tri, w)?;
    Ok(shears_from_corners(tri, &a))
}

fn shears_from_corners(tri: &Triangulation, a: &CornerWeights) -> Vec<f64> {
    (0..tri.num_edges())
        .map(|e| {
            let h = tri.side_of_edge(e, true);
            let d_plus = a.at(h) - a.at(tri.next(tri.twin(h)));
            let g = tri.side_of_edge(e, false);
            let d_minus = a.at(g) - a.at(tri.next(tri.twin(g)));
            // The two orientations agree by the switch identity; keep the
            // check cheap and the value symmetric.
            debug_assert!((d_plus - d_minus).abs() <= 1e-9 * (1.0 + d_plus.abs()));
            0.5 * (d_plus + d_minus)
        })
        .collect()
}

/// Radius at each vertex: the minimum corner weight over its corners.
pub fn radius_map(tri: &Triangulation, w: &[f64]) -> Result<Vec<f64>, FoliationError> {
    let a = corner_weights(tri, w)?;
    Ok(radii_from_corners(tri, &a))
}

fn radii_from_corners(tri: &Triangulation, a: &CornerWeights) -> Vec<f64> {
    let mut r = vec![f64::INFINITY; tri.num_vertices()];
    for f in 0..tri.num_faces() {
        for p in 0..3 {
            let v = tri.corner_vertex(f, p);
            r[v] = r[v].min(a.weights[f][p]);
        }
    }
    r
}

/// The full shear-radius chart.
pub fn shear_radius(tri: &Triangulation, w: &[f64]) -> Result<ShearRadius, FoliationError> {
    let a = corner_weights(tri, w)?;
    Ok(ShearRadius {
        shears: shears_from_corners(tri, &a),
        radii: radii_from_corners(tri, &a),
    })
}

/// Star sums of a shear vector (loop edges counted twice).
pub fn star_sums(tri: &Triangulation, shears: &[f64]) -> Vec<f64> {
    (0..tri.num_vertices())
        .map(|v| {
            tri.vertex_star(v)
                .unwrap()
                .iter()
                .map(|h| shears[tri.edge_of(*h)])
                .sum()
        })
        .collect()
}

/// Orthogonal projection of a shear vector onto the balance subspace
/// (star sums zero at every vertex).
pub fn project_balanced(tri: &Triangulation, shears: &[f64]) -> Vec<f64> {
    let nv = tri.num_vertices();
    let ne = tri.num_edges();
    // Incidence with multiplicity: b[v][e] = number of star occurrences.
    let mut b = vec![vec![0.0f64; ne]; nv];
    for (v, row) in b.iter_mut().enumerate() {
        for h in tri.vertex_star(v).unwrap() {
            row[tri.edge_of(*h)] += 1.0;
        }
    }
    // Solve (B B^T) lambda = B s, then s <- s - B^T lambda.
    let mut gram = vec![vec![0.0f64; nv + 1]; nv];
    for i in 0..nv {
        for j in 0..nv {
            gram[i][j] = (0..ne).map(|e| b[i][e] * b[j][e]).sum();
        }
        gram[i][nv] = (0..ne).map(|e| b[i][e] * shears[e]).sum();
    }
    let lambda = solve_dense(&mut gram);
    let mut out = shears.to_vec();
    for (e, x) in out.iter_mut().enumerate() {
        for v in 0..nv {
            *x -= b[v][e] * lambda[v];
        }
    }
    out
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(aug: &mut [Vec<f64>]) -> Vec<f64> {
    let n = aug.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().partial_cmp(&aug[j][col].abs()).unwrap())
            .unwrap();
        aug.swap(col, pivot);
        let p = aug[col][col];
        assert!(p.abs() > 1e-12, "balance system is singular");
        for row in 0..n {
            if row != col {
                let factor = aug[row][col] / p;
                for k in col..=n {
                    aug[row][k] -= factor * aug[col][k];
                }
            }
        }
    }
    (0..n).map(|i| aug[i][n] / aug[i][i]).collect()
}

/// Recover edge weights from vertex-balanced shear-radius data.
///
/// Per vertex, partial sums of the shears along the cyclic star are shifted
/// so their minimum is zero and offset by the radius; the resulting corner
/// weights are summed in pairs across each edge.
pub fn reconstruct(tri: &Triangulation, sr: &ShearRadius) -> Result<Vec<f64>, FoliationError> {
    check_len(tri.num_edges(), sr.shears.len())?;
    check_len(tri.num_vertices(), sr.radii.len())?;
    for (v, &r) in sr.radii.iter().enumerate() {
        if !(r > 0.0) || !r.is_finite() {
            return Err(FoliationError::Positivity {
                vertex: v,
                value: r,
            });
        }
    }
    for (v, &sum) in star_sums(tri, &sr.shears).iter().enumerate() {
        if sum.abs() > BALANCE_TOL {
            return Err(FoliationError::Balance { vertex: v, sum });
        }
    }
    // Re-project so the star sums are zero to rounding before the partial
    // sums are formed.
    let shears = project_balanced(tri, &sr.shears);

    let mut corner = vec![[0.0f64; 3]; tri.num_faces()];
    for v in 0..tri.num_vertices() {
        let star = tri.vertex_star(v).unwrap();
        let mut partial = Vec::with_capacity(star.len());
        let mut acc = 0.0;
        for h in star {
            acc += shears[tri.edge_of(*h)];
            partial.push(acc);
        }
        let min = partial.iter().copied().fold(f64::INFINITY, f64::min);
        // Corner between star entries h_k and h_{k+1} is the corner of
        // face(h_k) at the origin of h_k.
        for (k, h) in star.iter().enumerate() {
            corner[h.face][h.pos] = sr.radii[v] + (partial[k] - min);
        }
    }
    let weights: Vec<f64> = (0..tri.num_edges())
        .map(|e| {
            let h = tri.side_of_edge(e, true);
            let w_plus = corner[h.face][h.pos] + corner[h.face][(h.pos + 1) % 3];
            if cfg!(debug_assertions) {
                let g = tri.side_of_edge(e, false);
                let w_minus = corner[g.face][g.pos] + corner[g.face][(g.pos + 1) % 3];
                debug_assert!(
                    (w_plus - w_minus).abs() <= 1e-9 * (1.0 + w_plus.abs()),
                    "edge weight must not depend on the chosen face"
                );
            }
            w_plus
        })
        .collect();
    validate_admissible(tri, &weights)?;
    Ok(weights)
}

/// Split edge weights into the interior component and the peripheral radii:
/// `w = w0 + r_tail + r_head` with `w0 >= 0` and at least one zero interior
/// corner weight per vertex.
pub fn decompose(tri: &Triangulation, w: &[f64]) -> Result<(Vec<f64>, Vec<f64>), FoliationError> {
    let a = corner_weights(tri, w)?;
    let r = radii_from_corners(tri, &a);
    let w0 = (0..tri.num_edges())
        .map(|e| {
            let h = tri.side_of_edge(e, true);
            let c1 = tri.next(h);
            let v0 = tri.origin(h);
            let v1 = tri.origin(c1);
            // Summing the reduced corner parts keeps the result nonnegative
            // in floating point.
            (a.at(h) - r[v0]) + (a.weights[c1.face][c1.pos] - r[v1])
        })
        .collect();
    Ok((w0, r))
}
