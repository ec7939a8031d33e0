//! Shared fixtures, random samplers, and independent oracles for the
//! integration suites. The developing map here places whole triangles with
//! two-point gluing isometries, deliberately avoiding the frame-word
//! machinery of the library so it can serve as an oracle for it.

#![allow(dead_code)]

use conesurf::foliation::{self, ShearRadius};
use conesurf::hyperbolic::{canonical_placement, distance, Isometry, PointH2};
use conesurf::metric::{self, ConeSurface};
use conesurf::surface::{build_triangulation, Side, Triangulation};
use rand::rngs::StdRng;
use rand::Rng;

pub fn torus() -> Triangulation {
    build_triangulation(&[[1, 2, 3], [-1, -2, -3]]).unwrap()
}

pub fn sphere3() -> Triangulation {
    build_triangulation(&[[1, 2, 3], [-1, -3, -2]]).unwrap()
}

pub fn sphere3_folded() -> Triangulation {
    build_triangulation(&[[1, -1, 2], [-2, 3, -3]]).unwrap()
}

/// Genus-2 surface with one marked point: fan triangulation of the standard
/// octagon.
pub fn genus2() -> Triangulation {
    build_triangulation(&[
        [1, 2, -5],
        [5, -1, -6],
        [6, -2, -7],
        [7, 3, -8],
        [8, 4, -9],
        [9, -3, -4],
    ])
    .unwrap()
}

/// The three standard triangulations the acceptance criteria quantify over.
pub fn standard_triangulations() -> Vec<(&'static str, Triangulation)> {
    vec![("1,1", torus()), ("0,3", sphere3()), ("2,1", genus2())]
}

/// Uniform rejection sampling from the admissible cone.
pub fn random_admissible(rng: &mut StdRng, tri: &Triangulation, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..tri.num_edges())
            .map(|_| rng.gen_range(lo..hi))
            .collect();
        if foliation::validate_admissible(tri, &w).is_ok() {
            return w;
        }
    }
}

/// Random vertex-balanced shear-radius data.
pub fn random_balanced_sr(rng: &mut StdRng, tri: &Triangulation, shear_scale: f64) -> ShearRadius {
    let raw: Vec<f64> = (0..tri.num_edges())
        .map(|_| shear_scale * (rng.gen_range(-1.0..1.0) + rng.gen_range(-1.0..1.0)))
        .collect();
    let shears = foliation::project_balanced(tri, &raw);
    let radii = (0..tri.num_vertices())
        .map(|_| rng.gen_range(-1.0..1.0f64).exp())
        .collect();
    ShearRadius { shears, radii }
}

/// Random balanced shear vector alone.
pub fn random_balanced_shears(rng: &mut StdRng, tri: &Triangulation, scale: f64) -> Vec<f64> {
    random_balanced_sr(rng, tri, scale).shears
}

/// Random cone-surface with every cone angle below pi.
pub fn random_narrow_surface(
    rng: &mut StdRng,
    tri: &Triangulation,
    lo: f64,
    hi: f64,
) -> ConeSurface {
    loop {
        let w = random_admissible(rng, tri, lo, hi);
        let x = ConeSurface::new(tri.clone(), w).unwrap();
        if metric::cone_angles(&x)
            .iter()
            .all(|&t| t < std::f64::consts::PI)
        {
            return x;
        }
    }
}

/// Development by explicit triangle placement: returns the developed entry
/// edge (as an endpoint pair) of every crossing and the holonomy. This is a
/// from-scratch implementation of "place each successive face by the unique
/// orientation-preserving isometry matching the shared edge with reversed
/// direction"; it shares no code with the library's frame word.
pub fn develop_by_placement(
    x: &ConeSurface,
    chain: &[Side],
) -> (Vec<(PointH2, PointH2)>, Isometry) {
    let tri = x.tri();
    let m = chain.len();
    assert!(m >= 1);
    let place = |f: usize| canonical_placement(&x.face_triangle(f)).vertices;

    let mut lines = Vec::with_capacity(m);
    let mut g = Isometry::IDENTITY;
    let mut verts = place(chain[0].face);
    lines.push((verts[chain[0].pos], verts[(chain[0].pos + 1) % 3]));
    for k in 0..m {
        let entry = chain[k];
        let next_entry = chain[(k + 1) % m];
        let exit = tri.twin(next_entry);
        assert_eq!(exit.face, entry.face, "chain not adjacent");
        let p = g.apply_point(verts[exit.pos]);
        let q = g.apply_point(verts[(exit.pos + 1) % 3]);
        let nverts = place(next_entry.face);
        let a = nverts[next_entry.pos];
        let b = nverts[(next_entry.pos + 1) % 3];
        // glue the next face across the exit side, reversing direction
        g = Isometry::mapping_segment(a, b, q, p);
        verts = nverts;
        if k + 1 < m {
            lines.push((
                g.apply_point(verts[next_entry.pos]),
                g.apply_point(verts[(next_entry.pos + 1) % 3]),
            ));
        }
    }
    (lines, g)
}

/// Total length of the closed broken geodesic through one point per
/// developed edge line, minimized by coordinate descent. For hyperbolic
/// holonomy whose axis crosses every line this converges to the geodesic
/// length of the class, independently of any trace formula.
pub fn polyline_shortened_length(lines: &[(PointH2, PointH2)], holonomy: &Isometry) -> f64 {
    polyline_shortened(lines, holonomy).0
}

/// As [`polyline_shortened_length`], also reporting whether the optimal
/// polyline crosses every line transversally (neighbors on opposite sides).
/// When it instead reflects off some line the combinatorial chain is not
/// realized tautly by the geodesic and the minimum exceeds the class length.
pub fn polyline_shortened(lines: &[(PointH2, PointH2)], holonomy: &Isometry) -> (f64, bool) {
    let m = lines.len();
    let norms: Vec<Isometry> = lines
        .iter()
        .map(|(p, q)| Isometry::two_point_normalizer(*p, *q))
        .collect();
    let inv_norms: Vec<Isometry> = norms.iter().map(|n| n.inverse()).collect();
    let pt =
        |k: usize, u: f64| -> PointH2 { inv_norms[k].apply_point(PointH2 { x: 0.0, y: u.exp() }) };
    let hol_inv = holonomy.inverse();

    // Minimize f(u) = d(line_k(u), a) + d(line_k(u), b). In normalized
    // coordinates d(i e^u, z) = arcosh(A cosh(u - b)) with A = |z| / Im z and
    // b = ln |z|; f is convex with monotone derivative, solved by
    // bisection-safeguarded Newton between the two perpendicular feet.
    let update = |k: usize, a: PointH2, b: PointH2| -> f64 {
        let params = |z: PointH2| {
            let r = (z.x * z.x + z.y * z.y).sqrt();
            (r / z.y, r.ln())
        };
        let (aa, ba) = params(norms[k].apply_point(a));
        let (ab, bb) = params(norms[k].apply_point(b));
        let dterm = |amp: f64, off: f64, u: f64| -> (f64, f64) {
            // (derivative, second derivative) of arcosh(amp cosh(u - off))
            let w = u - off;
            let c = amp * w.cosh();
            let den = (c * c - 1.0).max(1e-300).sqrt();
            let d1 = amp * w.sinh() / den;
            let d2 = amp * w.cosh() * (amp * amp - 1.0).max(0.0) / den.powi(3);
            (d1, d2)
        };
        let mut lo = ba.min(bb);
        let mut hi = ba.max(bb);
        if hi - lo < 1e-15 {
            return 0.5 * (lo + hi);
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..60 {
            let (g1a, g2a) = dterm(aa, ba, u);
            let (g1b, g2b) = dterm(ab, bb, u);
            let g1 = g1a + g1b;
            let g2 = g2a + g2b;
            if g1 > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let newton = u - g1 / g2;
            u = if g2 > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-15 {
                break;
            }
        }
        u
    };

    // Neighbors on opposite sides of the (normalized, vertical) line mean
    // the polyline crosses it; equal signs mean it bounces off.
    let transversal_at = |k: usize, a: PointH2, b: PointH2| -> bool {
        let xa = norms[k].apply_point(a).x;
        let xb = norms[k].apply_point(b).x;
        xa * xb < 0.0 && xa.abs() > 1e-12 && xb.abs() > 1e-12
    };

    let mut u = vec![0.0f64; m];
    if m == 1 {
        // single line: minimize the displacement d(p(u), M p(u))
        let mut lo = -60.0;
        let mut hi = 60.0;
        let eval = |v: f64| {
            let p = pt(0, v);
            distance(p, holonomy.apply_point(p))
        };
        for _ in 0..300 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if eval(m1) <= eval(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let best = 0.5 * (lo + hi);
        let p = pt(0, best);
        let taut = transversal_at(0, hol_inv.apply_point(p), holonomy.apply_point(p));
        return (eval(best), taut);
    }

    let total_length = |u: &[f64]| -> f64 {
        let mut total = 0.0;
        for k in 0..m - 1 {
            total += distance(pt(k, u[k]), pt(k + 1, u[k + 1]));
        }
        total + distance(pt(m - 1, u[m - 1]), holonomy.apply_point(pt(0, u[0])))
    };

    let mut iterations = 0usize;
    let mut prev_len = total_length(&u);
    loop {
        let before_pass = u.clone();
        let mut max_move = 0.0f64;
        for k in 0..m {
            let a = if k == 0 {
                hol_inv.apply_point(pt(m - 1, u[m - 1]))
            } else {
                pt(k - 1, u[k - 1])
            };
            let b = if k == m - 1 {
                holonomy.apply_point(pt(0, u[0]))
            } else {
                pt(k + 1, u[k + 1])
            };
            let fresh = update(k, a, b);
            max_move = max_move.max((fresh - u[k]).abs());
            u[k] = fresh;
            iterations += 1;
        }
        let mut len = total_length(&u);
        // Cyclic coordinate descent zigzags on ill-conditioned chains; an
        // over-relaxed pass along the pass direction is accepted whenever it
        // keeps decreasing the length, so the result stays an upper bound.
        for factor in [8.0, 4.0, 2.0] {
            let trial: Vec<f64> = u
                .iter()
                .zip(&before_pass)
                .map(|(cur, old)| cur + factor * (cur - old))
                .collect();
            let tlen = total_length(&trial);
            if tlen < len {
                u = trial;
                len = tlen;
                break;
            }
        }
        let stalled = prev_len - len < 1e-13;
        prev_len = len;
        if max_move < 1e-11 || stalled || iterations > 100_000 {
            break;
        }
    }
    let mut taut = true;
    for k in 0..m {
        let a = if k == 0 {
            hol_inv.apply_point(pt(m - 1, u[m - 1]))
        } else {
            pt(k - 1, u[k - 1])
        };
        let b = if k == m - 1 {
            holonomy.apply_point(pt(0, u[0]))
        } else {
            pt(k + 1, u[k + 1])
        };
        taut &= transversal_at(k, a, b);
    }
    (total_length(&u), taut)
}

/// Crossing sequences (1-based `[edge, face]` pairs) of valid classes per
/// triangulation, used for holonomy cross-validation.
pub fn curve_library(label: &str) -> Vec<Vec<[i64; 2]>> {
    match label {
        "1,1" => vec![
            vec![[2, 1], [3, 2]],
            vec![[1, 1], [3, 2]],
            vec![[1, 1], [2, 2]],
            vec![[2, 1], [3, 2], [2, 1], [3, 2]],
            vec![[1, 1], [2, 2], [1, 1], [3, 2]],
        ],
        "0,3" => vec![
            vec![[1, 1], [2, 2], [1, 1], [3, 2]],
            vec![[2, 1], [3, 2], [2, 1], [1, 2]],
            vec![[1, 1], [2, 2], [3, 1], [1, 2], [2, 1], [3, 2]],
        ],
        "2,1" => vec![
            vec![[1, 1], [2, 3], [6, 2]],
            vec![[8, 5], [9, 6], [3, 4]],
            vec![[1, 1], [5, 2]],
        ],
        other => panic!("no curve library for {other}"),
    }
}

/// Classes whose combinatorial chain is realized tautly by the geodesic on
/// every narrow-angle metric tried, so the shortening oracle and the trace
/// length agree: simple classes and their powers on the torus, and the
/// double-equator classes (each edge crossed twice, cyclically) on the
/// three-marked sphere.
pub fn taut_curve_library(label: &str) -> Vec<Vec<[i64; 2]>> {
    match label {
        "1,1" => vec![
            vec![[2, 1], [3, 2]],
            vec![[1, 1], [3, 2]],
            vec![[1, 1], [2, 2]],
            vec![[2, 1], [3, 2], [2, 1], [3, 2]],
        ],
        "0,3" => vec![
            vec![[1, 1], [2, 2], [3, 1], [1, 2], [2, 1], [3, 2]],
            vec![[1, 1], [3, 2], [2, 1], [1, 2], [3, 1], [2, 2]],
        ],
        other => panic!("no taut curve library for {other}"),
    }
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{what}: {a} vs {b} (difference {}, tolerance {tol})",
        (a - b).abs()
    );
}

/// Relative agreement with an absolute floor of one.
pub fn assert_rel(a: f64, b: f64, tol: f64, what: &str) {
    let scale = 1.0_f64.max(a.abs()).max(b.abs());
    assert!(
        (a - b).abs() <= tol * scale,
        "{what}: {a} vs {b} (relative {}, tolerance {tol})",
        (a - b).abs() / scale
    );
}
