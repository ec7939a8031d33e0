//! Triangulations of a closed oriented surface with marked vertices, encoded
//! as oriented face-gluing data, together with combinatorial flips and curve
//! crossing sequences.
//!
//! Each face has three sides indexed 0..2 in counterclockwise boundary
//! order. A side carries a signed edge index: positive when the side
//! traverses the edge in its intrinsic (tail to head) orientation. Every
//! edge appears exactly twice over all sides, once with each sign; a side is
//! therefore the same thing as a half-edge. The corner at position `p` of a
//! face sits at the origin of side `p`, flanked by the incoming side `p-1`
//! and the outgoing side `p`, with opposite side `p+1`.

use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangulationError {
    #[error("orientability violated: {0}")]
    Orientability(String),
    #[error("Euler count violated: {0}")]
    Euler(String),
    #[error("degenerate surface type: 2g - 2 + n = {0} must be positive")]
    Degenerate(i64),
    #[error("index out of range: {0}")]
    Index(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlipError {
    #[error("edge {0} is not flippable: both sides lie in the same face")]
    Unflippable(usize),
    #[error("edge index {0} out of range")]
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("curve has no crossings left after normalization")]
    EmptyCurve,
    #[error("adjacency violated at step {step}: edge {edge} is not a side of face {face}")]
    Adjacency {
        step: usize,
        edge: usize,
        face: usize,
    },
    #[error("index out of range at step {step}: {what}")]
    Index { step: usize, what: String },
    #[error("curve is not transportable through the flipped quadrilateral: {0}")]
    Transport(String),
}

/// A face side, i.e. a half-edge. `pos` is the position 0..2 inside `face`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub face: usize,
    pub pos: usize,
}

impl Side {
    pub fn new(face: usize, pos: usize) -> Self {
        debug_assert!(pos < 3);
        Side { face, pos }
    }
}

/// A signed edge index carried by a face side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub edge: usize,
    pub positive: bool,
}

impl SignedEdge {
    fn reversed(self) -> Self {
        SignedEdge {
            edge: self.edge,
            positive: !self.positive,
        }
    }
}

/// Triangulation of a closed oriented surface with all vertices marked.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    faces: Vec<[SignedEdge; 3]>,
    num_edges: usize,
    num_vertices: usize,
    genus: usize,
    /// Per edge: the side carrying it with `+` resp. `-` sign.
    pos_side: Vec<Side>,
    neg_side: Vec<Side>,
    /// Vertex id at each corner (`vertex_of_corner[f][p]` = origin of side p).
    vertex_of_corner: Vec<[usize; 3]>,
    /// Per vertex: cyclic counterclockwise list of outgoing half-edges.
    stars: Vec<Vec<Side>>,
}

/// Build a triangulation from faces given as triples of 1-based signed edge
/// indices (the on-disk convention).
pub fn build_triangulation(faces: &[[i64; 3]]) -> Result<Triangulation, TriangulationError> {
    Triangulation::from_signed_faces(faces)
}

impl Triangulation {
    pub fn from_signed_faces(raw: &[[i64; 3]]) -> Result<Self, TriangulationError> {
        if raw.is_empty() {
            return Err(TriangulationError::Index("no faces given".into()));
        }
        let mut max_edge = 0usize;
        for (f, tri) in raw.iter().enumerate() {
            for (p, &s) in tri.iter().enumerate() {
                if s == 0 {
                    return Err(TriangulationError::Index(format!(
                        "face {f} side {p}: edge index 0 (indices are 1-based, signed)"
                    )));
                }
                max_edge = max_edge.max(s.unsigned_abs() as usize);
            }
        }
        let num_edges = max_edge;
        let faces: Vec<[SignedEdge; 3]> = raw
            .iter()
            .map(|tri| {
                [0, 1, 2].map(|p| SignedEdge {
                    edge: tri[p].unsigned_abs() as usize - 1,
                    positive: tri[p] > 0,
                })
            })
            .collect();

        // Each edge must occur exactly twice, once with each sign.
        let mut pos_side = vec![None; num_edges];
        let mut neg_side = vec![None; num_edges];
        for (f, tri) in faces.iter().enumerate() {
            for (p, se) in tri.iter().enumerate() {
                let slot = if se.positive {
                    &mut pos_side[se.edge]
                } else {
                    &mut neg_side[se.edge]
                };
                if slot.is_some() {
                    let sign = if se.positive { '+' } else { '-' };
                    return Err(TriangulationError::Orientability(format!(
                        "edge {} appears more than once with sign {sign}",
                        se.edge + 1
                    )));
                }
                *slot = Some(Side::new(f, p));
            }
        }
        let mut pos_out = Vec::with_capacity(num_edges);
        let mut neg_out = Vec::with_capacity(num_edges);
        for e in 0..num_edges {
            match (pos_side[e], neg_side[e]) {
                (Some(p), Some(n)) => {
                    pos_out.push(p);
                    neg_out.push(n);
                }
                _ => {
                    return Err(TriangulationError::Orientability(format!(
                        "edge {} does not appear exactly once with each sign",
                        e + 1
                    )))
                }
            }
        }

        let mut tri = Triangulation {
            faces,
            num_edges,
            num_vertices: 0,
            genus: 0,
            pos_side: pos_out,
            neg_side: neg_out,
            vertex_of_corner: Vec::new(),
            stars: Vec::new(),
        };
        tri.compute_vertices()?;
        Ok(tri)
    }

    /// Vertex orbits of the counterclockwise rotation `h -> twin(prev(h))`
    /// on outgoing half-edges; each orbit is the star of one vertex.
    fn compute_vertices(&mut self) -> Result<(), TriangulationError> {
        let nf = self.faces.len();
        self.vertex_of_corner = vec![[usize::MAX; 3]; nf];
        self.stars.clear();
        for f in 0..nf {
            for p in 0..3 {
                if self.vertex_of_corner[f][p] != usize::MAX {
                    continue;
                }
                let v = self.stars.len();
                let start = Side::new(f, p);
                let mut star = Vec::new();
                let mut h = start;
                loop {
                    if self.vertex_of_corner[h.face][h.pos] != usize::MAX {
                        return Err(TriangulationError::Euler(
                            "half-edge rotation is not a permutation".into(),
                        ));
                    }
                    self.vertex_of_corner[h.face][h.pos] = v;
                    star.push(h);
                    h = self.twin(self.prev(h));
                    if h == start {
                        break;
                    }
                }
                self.stars.push(star);
            }
        }
        self.num_vertices = self.stars.len();
        let v = self.num_vertices as i64;
        let e = self.num_edges as i64;
        let f = self.faces.len() as i64;
        if 2 * e != 3 * f {
            return Err(TriangulationError::Euler(format!(
                "2E = {} != 3F = {}",
                2 * e,
                3 * f
            )));
        }
        let chi = v - e + f;
        if chi % 2 != 0 || chi > 2 {
            return Err(TriangulationError::Euler(format!(
                "Euler characteristic {chi} is not 2 - 2g for integer g >= 0"
            )));
        }
        let g = (2 - chi) / 2;
        if e != 6 * g - 6 + 3 * v || f != 4 * g - 4 + 2 * v {
            return Err(TriangulationError::Euler(format!(
                "edge/face counts (E={e}, F={f}) do not match genus {g} with {v} vertices"
            )));
        }
        if 2 * g - 2 + v <= 0 {
            return Err(TriangulationError::Degenerate(2 * g - 2 + v));
        }
        self.genus = g as usize;
        Ok(())
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn faces(&self) -> &[[SignedEdge; 3]] {
        &self.faces
    }

    /// The signed edge carried by a side.
    pub fn signed_edge(&self, s: Side) -> SignedEdge {
        self.faces[s.face][s.pos]
    }

    pub fn edge_of(&self, s: Side) -> usize {
        self.signed_edge(s).edge
    }

    pub fn next(&self, s: Side) -> Side {
        Side::new(s.face, (s.pos + 1) % 3)
    }

    pub fn prev(&self, s: Side) -> Side {
        Side::new(s.face, (s.pos + 2) % 3)
    }

    /// The other side carrying the same edge.
    pub fn twin(&self, s: Side) -> Side {
        let se = self.signed_edge(s);
        if se.positive {
            self.neg_side[se.edge]
        } else {
            self.pos_side[se.edge]
        }
    }

    /// The side carrying edge `e` with the requested sign.
    pub fn side_of_edge(&self, e: usize, positive: bool) -> Side {
        if positive {
            self.pos_side[e]
        } else {
            self.neg_side[e]
        }
    }

    /// Vertex at the origin of side `s` (= corner `s.pos` of its face).
    pub fn origin(&self, s: Side) -> usize {
        self.vertex_of_corner[s.face][s.pos]
    }

    /// Vertex at the corner `(f, p)`.
    pub fn corner_vertex(&self, f: usize, p: usize) -> usize {
        self.vertex_of_corner[f][p]
    }

    /// Tail and head vertices of edge `e` in its intrinsic orientation.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let h = self.pos_side[e];
        (self.origin(h), self.origin(self.next(h)))
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (t, h) = self.endpoints(e);
        t == h
    }

    /// Counterclockwise cyclic star of outgoing half-edges at vertex `v`.
    /// A loop edge contributes two entries.
    pub fn vertex_star(&self, v: usize) -> Result<&[Side], TriangulationError> {
        self.stars
            .get(v)
            .map(|s| s.as_slice())
            .ok_or_else(|| TriangulationError::Index(format!("vertex {v} out of range")))
    }

    /// The sides of face `f` carrying edge `e` (one entry normally, two for
    /// an edge appearing twice in the same face).
    pub fn sides_of_edge_in_face(&self, e: usize, f: usize) -> Vec<Side> {
        [self.pos_side[e], self.neg_side[e]]
            .into_iter()
            .filter(|s| s.face == f)
            .collect()
    }

    /// Number of distinct faces incident to vertex `v`.
    pub fn faces_at_vertex(&self, v: usize) -> Result<usize, TriangulationError> {
        let star = self.vertex_star(v)?;
        let mut fs: Vec<usize> = star.iter().map(|s| s.face).collect();
        fs.sort_unstable();
        fs.dedup();
        Ok(fs.len())
    }

    /// Combinatorial flip of edge `e`: replace it by the opposite diagonal of
    /// the quadrilateral formed by its two adjacent faces. Edge and face
    /// indices are stable: the flipped edge keeps its index.
    pub fn flip(&self, e: usize) -> Result<Triangulation, FlipError> {
        if e >= self.num_edges {
            return Err(FlipError::Index(e));
        }
        let hp = self.pos_side[e];
        let hn = self.neg_side[e];
        if hp.face == hn.face {
            return Err(FlipError::Unflippable(e));
        }
        // Face A holds the positive side (edge runs v -> w), face B the
        // negative one. Quad corners: v, w and the apexes P (of A), Q (of B).
        let x = self.signed_edge(self.next(hp)); // w -> P
        let y = self.signed_edge(self.prev(hp)); // P -> v
        let z = self.signed_edge(self.next(hn)); // v -> Q
        let u = self.signed_edge(self.prev(hn)); // Q -> w
        let eplus = SignedEdge {
            edge: e,
            positive: true,
        };
        let mut faces = self.faces.clone();
        // New diagonal oriented P -> Q.
        faces[hp.face] = [y, z, eplus.reversed()]; // (P v Q)
        faces[hn.face] = [u, x, eplus]; // (Q w P)
        let raw: Vec<[i64; 3]> = faces
            .iter()
            .map(|tri| {
                [0, 1, 2].map(|p| {
                    let se = tri[p];
                    let idx = (se.edge + 1) as i64;
                    if se.positive {
                        idx
                    } else {
                        -idx
                    }
                })
            })
            .collect();
        Ok(Triangulation::from_signed_faces(&raw)
            .expect("flip of a valid triangulation stays valid"))
    }

    /// Canonical encoding up to orientation-preserving relabeling of faces
    /// and edges. Two triangulations are combinatorially isomorphic exactly
    /// when their canonical forms agree.
    pub fn canonical_form(&self) -> Vec<i64> {
        let mut best: Option<Vec<i64>> = None;
        for f in 0..self.faces.len() {
            for p in 0..3 {
                let enc = self.encoding_from(Side::new(f, p));
                if best.as_ref().map_or(true, |b| enc < *b) {
                    best = Some(enc);
                }
            }
        }
        best.unwrap()
    }

    fn encoding_from(&self, root: Side) -> Vec<i64> {
        let nf = self.faces.len();
        let mut face_id = vec![usize::MAX; nf];
        let mut face_start = vec![0usize; nf];
        let mut edge_id = vec![usize::MAX; self.num_edges];
        let mut edge_sign = vec![true; self.num_edges];
        let mut queue = VecDeque::new();
        face_id[root.face] = 0;
        face_start[root.face] = root.pos;
        queue.push_back(root.face);
        let mut next_face = 1usize;
        let mut next_edge = 0usize;
        let mut out = Vec::with_capacity(3 * nf);
        while let Some(f) = queue.pop_front() {
            for k in 0..3 {
                let s = Side::new(f, (face_start[f] + k) % 3);
                let se = self.signed_edge(s);
                if edge_id[se.edge] == usize::MAX {
                    edge_id[se.edge] = next_edge;
                    edge_sign[se.edge] = se.positive;
                    next_edge += 1;
                }
                let signed = if se.positive == edge_sign[se.edge] {
                    (edge_id[se.edge] + 1) as i64
                } else {
                    -((edge_id[se.edge] + 1) as i64)
                };
                out.push(signed);
                let t = self.twin(s);
                if face_id[t.face] == usize::MAX {
                    face_id[t.face] = next_face;
                    face_start[t.face] = t.pos;
                    queue.push_back(t.face);
                    next_face += 1;
                }
            }
        }
        out
    }
}

/// One crossing of a curve: the edge crossed and the face entered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurveStep {
    pub edge: usize,
    pub face: usize,
}

/// A free homotopy class encoded as a cyclic crossing sequence, normalized:
/// adjacency verified, immediate backtracks removed, lexicographically
/// minimal rotation. The resolved entry sides are stored alongside the
/// steps: the on-disk `(edge, face)` format cannot distinguish the two
/// sides of an edge appearing twice in one face, but internally generated
/// curves (flip transport in particular) carry exact sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    steps: Vec<CurveStep>,
    sides: Vec<Side>,
}

impl CurveClass {
    pub fn steps(&self) -> &[CurveStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Entry sides of the normalized crossing sequence.
    pub fn side_chain(&self, _tri: &Triangulation) -> Result<Vec<Side>, CurveError> {
        Ok(self.sides.clone())
    }

    /// Normalize a chain of entry sides into a class: verifies adjacency,
    /// removes immediate backtracks, and rotates to the canonical start.
    pub fn from_sides(tri: &Triangulation, sides: Vec<Side>) -> Result<CurveClass, CurveError> {
        let mut sides = sides;
        if sides.is_empty() {
            return Err(CurveError::EmptyCurve);
        }
        // Adjacency: the next crossing's edge must be reachable from inside
        // the current face.
        let check = |sides: &[Side]| -> Result<(), CurveError> {
            let m = sides.len();
            for k in 0..m {
                let exit = tri.twin(sides[(k + 1) % m]);
                if exit.face != sides[k].face {
                    return Err(CurveError::Adjacency {
                        step: (k + 1) % m,
                        edge: tri.edge_of(sides[(k + 1) % m]) + 1,
                        face: sides[k].face + 1,
                    });
                }
            }
            Ok(())
        };
        check(&sides)?;
        // Remove immediate backtracks: exiting through the side just entered.
        loop {
            let m = sides.len();
            let mut removed = false;
            for k in 0..m {
                if tri.twin(sides[(k + 1) % m]) == sides[k] {
                    let keep: Vec<Side> = sides
                        .iter()
                        .enumerate()
                        .filter(|(idx, _)| *idx != k && *idx != (k + 1) % m)
                        .map(|(_, s)| *s)
                        .collect();
                    sides = keep;
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
            if sides.is_empty() {
                return Err(CurveError::EmptyCurve);
            }
            check(&sides)?;
        }
        // Lexicographically minimal rotation.
        let m = sides.len();
        let mut best = 0usize;
        for r in 1..m {
            for k in 0..m {
                let a = sides[(r + k) % m];
                let b = sides[(best + k) % m];
                if a < b {
                    best = r;
                    break;
                }
                if a > b {
                    break;
                }
            }
        }
        let rotated: Vec<Side> = (0..m).map(|k| sides[(best + k) % m]).collect();
        let steps = rotated
            .iter()
            .map(|s| CurveStep {
                edge: tri.edge_of(*s),
                face: s.face,
            })
            .collect();
        Ok(CurveClass {
            steps,
            sides: rotated,
        })
    }

    /// The same class traversed in the opposite direction: the reversed
    /// curve enters each face through the side the forward curve left by.
    pub fn reversed(&self, tri: &Triangulation) -> Result<CurveClass, CurveError> {
        let m = self.sides.len();
        let rev: Vec<Side> = (0..m)
            .map(|j| tri.twin(self.sides[(m + 1 - j) % m]))
            .collect();
        CurveClass::from_sides(tri, rev)
    }
}

/// Validate and normalize a raw crossing sequence given as 1-based
/// `[edge, face]` pairs.
pub fn validate_curve(tri: &Triangulation, raw: &[[i64; 2]]) -> Result<CurveClass, CurveError> {
    if raw.is_empty() {
        return Err(CurveError::EmptyCurve);
    }
    let mut steps = Vec::with_capacity(raw.len());
    for (k, &[e, f]) in raw.iter().enumerate() {
        if e < 1 || e as usize > tri.num_edges() {
            return Err(CurveError::Index {
                step: k,
                what: format!("edge {e}"),
            });
        }
        if f < 1 || f as usize > tri.num_faces() {
            return Err(CurveError::Index {
                step: k,
                what: format!("face {f}"),
            });
        }
        steps.push(CurveStep {
            edge: e as usize - 1,
            face: f as usize - 1,
        });
    }
    let sides = resolve_sides(tri, &steps)?;
    CurveClass::from_sides(tri, sides)
}

/// Resolve a step sequence into entry sides. When an edge has both sides in
/// the entered face the choice is ambiguous; the side that does not undo
/// the previous crossing is preferred, then the positive side. Two passes
/// settle the cyclic dependency at step 0.
fn resolve_sides(tri: &Triangulation, steps: &[CurveStep]) -> Result<Vec<Side>, CurveError> {
    let m = steps.len();
    let mut chain: Vec<Option<Side>> = vec![None; m];
    for pass in 0..2 {
        for (k, s) in steps.iter().enumerate() {
            let cands = tri.sides_of_edge_in_face(s.edge, s.face);
            let side = match cands.len() {
                0 => {
                    return Err(CurveError::Adjacency {
                        step: k,
                        edge: s.edge + 1,
                        face: s.face + 1,
                    })
                }
                1 => cands[0],
                _ => {
                    let bad = chain[(k + m - 1) % m].map(|p| tri.twin(p));
                    *cands.iter().find(|&&c| Some(c) != bad).unwrap_or(&cands[0])
                }
            };
            chain[k] = Some(side);
        }
        if pass == 0 && m > 0 {
            // re-resolve step 0 now that the last entry is known
            continue;
        }
    }
    Ok(chain.into_iter().map(|s| s.unwrap()).collect())
}

/// Entry-side chain of the loop around vertex `v`, crossing each star
/// half-edge once, staying inside the corner faces.
pub fn vertex_link_sides(tri: &Triangulation, v: usize) -> Result<Vec<Side>, TriangulationError> {
    Ok(tri.vertex_star(v)?.to_vec())
}

/// Rewrite a curve on `old` as a curve on `new = old.flip(e)`.
///
/// Crossings of edges other than `e` keep their sides (only the two faces of
/// the flipped quadrilateral change); crossings of `e` are re-derived from
/// which boundary sides of the quadrilateral the curve passes between.
pub fn transport_curve(
    old: &Triangulation,
    e: usize,
    new: &Triangulation,
    curve: &CurveClass,
) -> Result<CurveClass, CurveError> {
    let hp = old.side_of_edge(e, true);
    let hn = old.side_of_edge(e, false);
    if hp.face == hn.face {
        return Err(CurveError::Transport(format!(
            "edge {} is not flippable",
            e + 1
        )));
    }
    let quad = [hp.face, hn.face];
    let chain = curve.side_chain(old)?;
    // Boundary crossings: all crossings of edges other than e. For each we
    // remember the entered quad face when the curve enters the quad there.
    let m = chain.len();
    let boundary: Vec<Side> = chain
        .iter()
        .copied()
        .filter(|s| old.edge_of(*s) != e)
        .collect();
    if boundary.is_empty() {
        return Err(CurveError::Transport(
            "curve crosses only the flipped edge".into(),
        ));
    }
    // Inside the quad disk a reduced arc crosses e at most once; two
    // consecutive e-crossings indicate a curve this rewrite cannot handle.
    for k in 0..m {
        if old.edge_of(chain[k]) == e && old.edge_of(chain[(k + 1) % m]) == e {
            return Err(CurveError::Transport(
                "curve crosses the flipped edge twice in a row".into(),
            ));
        }
    }

    // Boundary sides keep their signed edge; look the side up in the new
    // face lists to learn which of the two new triangles it bounds. Working
    // with sides keeps the transport exact even when the flip creates
    // self-folded faces, where (edge, face) steps alone are ambiguous.
    let locate = |se: SignedEdge| new.side_of_edge(se.edge, se.positive);
    let mut out: Vec<Side> = Vec::new();
    let nb = boundary.len();
    for k in 0..nb {
        let cur = boundary[k];
        let nxt = boundary[(k + 1) % nb];
        let cur_new = locate(old.signed_edge(cur));
        out.push(cur_new);
        // A diagonal crossing is needed only for segments through the quad
        // whose entry and exit sides end up in different new triangles.
        let inside_quad = quad.contains(&cur.face);
        let next_exit_face = new.twin(locate(old.signed_edge(nxt))).face;
        if inside_quad && cur_new.face != next_exit_face {
            let diag = new.sides_of_edge_in_face(e, next_exit_face);
            debug_assert_eq!(diag.len(), 1, "the new diagonal is never doubled");
            out.push(diag[0]);
        }
    }
    CurveClass::from_sides(new, out)
}
