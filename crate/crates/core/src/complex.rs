//! Closed oriented surfaces as Δ-complexes: triangular faces with an explicit
//! gluing of their directed edge slots.
//!
//! Slot `i` of a face is the directed edge from corner `i` to corner
//! `(i + 1) % 3`. Slot `s` of face `f` is also addressed as the dart
//! `3 * f + s`, which is the numbering the dual ribbon graph inherits.

use std::collections::VecDeque;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::rational::{format_q, frac, q, Q};

/// Vertex labels run over `1..=vertex_count`.
pub type Label = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub face: usize,
    pub index: u8,
}

impl Slot {
    pub fn new(face: usize, index: u8) -> Self {
        Slot { face, index }
    }

    pub fn dart(self) -> usize {
        3 * self.face + self.index as usize
    }

    pub fn from_dart(d: usize) -> Self {
        Slot::new(d / 3, (d % 3) as u8)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(face {}, slot {})", self.face, self.index)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("a triangulation needs at least one face and one vertex")]
    Empty,
    #[error("face {face} carries vertex label {label}, outside 1..={vertex_count}")]
    LabelOutOfRange {
        face: usize,
        label: Label,
        vertex_count: usize,
    },
    #[error("gluing refers to nonexistent slot {0}")]
    SlotOutOfRange(Slot),
    #[error("slot {0} is glued more than once")]
    SlotGluedTwice(Slot),
    #[error("slot {0} is not glued")]
    UnmatchedSlot(Slot),
    #[error("gluing {0} to {1} does not match the vertex pair with reversed orientation")]
    VertexPairMismatch(Slot, Slot),
    #[error("face {0} is glued to itself")]
    SelfGluedFace(usize),
    #[error("the complex is disconnected")]
    Disconnected,
    #[error("Euler characteristic {0} does not correspond to a closed orientable surface")]
    NonIntegerGenus(i64),
    #[error("vertex label {0} occurs in no corner")]
    UnusedVertex(Label),
    #[error("vertex label {0} is carried by more than one vertex of the glued complex")]
    SplitVertex(Label),
}

/// A validated closed oriented triangulated surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    vertex_count: usize,
    faces: Vec<[Label; 3]>,
    partner: Vec<usize>,
    genus: u32,
}

impl Triangulation {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        3 * self.faces.len() / 2
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    pub fn faces(&self) -> &[[Label; 3]] {
        &self.faces
    }

    /// Partner of a slot under the gluing.
    pub fn glued_to(&self, slot: Slot) -> Slot {
        Slot::from_dart(self.partner[slot.dart()])
    }

    /// Dart-indexed gluing involution.
    pub fn partner_darts(&self) -> &[usize] {
        &self.partner
    }

    /// Glued slot pairs, each listed once with the smaller dart first.
    pub fn gluing(&self) -> Vec<(Slot, Slot)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(d, &p)| d < p)
            .map(|(d, &p)| (Slot::from_dart(d), Slot::from_dart(p)))
            .collect()
    }

    /// Label of the vertex at corner `i` of `face`.
    pub fn corner_label(&self, face: usize, corner: usize) -> Label {
        self.faces[face][corner % 3]
    }
}

/// Validate face corner labels and a slot gluing into a [`Triangulation`].
pub fn build_triangulation(
    vertex_count: usize,
    faces: Vec<[Label; 3]>,
    gluing: &[(Slot, Slot)],
) -> Result<Triangulation, TriangulationError> {
    if faces.is_empty() || vertex_count == 0 {
        return Err(TriangulationError::Empty);
    }
    for (f, face) in faces.iter().enumerate() {
        for &label in face {
            if label == 0 || label as usize > vertex_count {
                return Err(TriangulationError::LabelOutOfRange {
                    face: f,
                    label,
                    vertex_count,
                });
            }
        }
    }

    let darts = 3 * faces.len();
    let mut partner = vec![usize::MAX; darts];
    for &(a, b) in gluing {
        for s in [a, b] {
            if s.face >= faces.len() || s.index > 2 {
                return Err(TriangulationError::SlotOutOfRange(s));
            }
        }
        if a.face == b.face {
            return Err(TriangulationError::SelfGluedFace(a.face));
        }
        for s in [a, b] {
            if partner[s.dart()] != usize::MAX {
                return Err(TriangulationError::SlotGluedTwice(s));
            }
        }
        partner[a.dart()] = b.dart();
        partner[b.dart()] = a.dart();
    }
    if let Some(d) = partner.iter().position(|&p| p == usize::MAX) {
        return Err(TriangulationError::UnmatchedSlot(Slot::from_dart(d)));
    }

    let label = |d: usize| faces[d / 3][d % 3];
    let head = |d: usize| faces[d / 3][(d % 3 + 1) % 3];
    for d in 0..darts {
        let p = partner[d];
        if label(d) != head(p) || head(d) != label(p) {
            return Err(TriangulationError::VertexPairMismatch(
                Slot::from_dart(d),
                Slot::from_dart(p),
            ));
        }
    }

    // Connectivity over faces.
    let mut seen = vec![false; faces.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        for s in 0..3 {
            let g = partner[3 * f + s] / 3;
            if !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(TriangulationError::Disconnected);
    }

    // Vertices of the glued complex are the orbits of d -> next(partner(d)),
    // which rotates around the common tail vertex.
    let mut orbit_of = vec![usize::MAX; darts];
    let mut orbit_label: Vec<Label> = Vec::new();
    for start in 0..darts {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbit_label.len();
        let mut d = start;
        loop {
            orbit_of[d] = id;
            let p = partner[d];
            d = 3 * (p / 3) + (p % 3 + 1) % 3;
            if d == start {
                break;
            }
        }
        orbit_label.push(label(start));
    }
    let mut owner: Vec<Option<usize>> = vec![None; vertex_count + 1];
    for (id, &l) in orbit_label.iter().enumerate() {
        if owner[l as usize].is_some() {
            return Err(TriangulationError::SplitVertex(l));
        }
        owner[l as usize] = Some(id);
    }
    if let Some(l) = (1..=vertex_count).find(|&l| owner[l].is_none()) {
        return Err(TriangulationError::UnusedVertex(l as Label));
    }

    let chi = vertex_count as i64 - (darts / 2) as i64 + faces.len() as i64;
    if chi > 2 || (2 - chi) % 2 != 0 {
        return Err(TriangulationError::NonIntegerGenus(chi));
    }

    Ok(Triangulation {
        vertex_count,
        faces,
        partner,
        genus: ((2 - chi) / 2) as u32,
    })
}

/// A rational multiple of π.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiMultiple(pub Q);

impl PiMultiple {
    pub fn coefficient(&self) -> &Q {
        &self.0
    }

    pub fn radians(&self) -> f64 {
        crate::numeric::rational::to_f64(&self.0) * std::f64::consts::PI
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}*pi", format_q(&self.0))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureData {
    pub q: Vec<u32>,
    pub deficits: Vec<PiMultiple>,
    pub divisor_coeffs: Vec<Q>,
    pub degree: Q,
    pub euler_number: Q,
}

/// Number of face corners at each vertex, indexed by `label - 1`.
pub fn curvature_assignments(t: &Triangulation) -> Vec<u32> {
    let mut q = vec![0u32; t.vertex_count];
    for face in &t.faces {
        for &l in face {
            q[l as usize - 1] += 1;
        }
    }
    q
}

/// Equilateral deficit angles `2π - q(k)·π/3`.
pub fn deficit_angles(t: &Triangulation) -> Vec<PiMultiple> {
    curvature_assignments(t)
        .into_iter()
        .map(|qk| PiMultiple(q(2) - frac(qk as i64, 3)))
        .collect()
}

pub fn divisor(t: &Triangulation) -> CurvatureData {
    let qv = curvature_assignments(t);
    let divisor_coeffs: Vec<Q> = qv.iter().map(|&qk| frac(qk as i64, 6) - q(1)).collect();
    let degree = divisor_coeffs.iter().fold(Q::zero(), |a, c| a + c);
    let euler_number = q(t.euler_characteristic()) + &degree;
    CurvatureData {
        deficits: deficit_angles(t),
        q: qv,
        divisor_coeffs,
        degree,
        euler_number,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussBonnet {
    pub total: PiMultiple,
    pub expected: PiMultiple,
    pub pass: bool,
}

/// Total deficit against `2π·χ`, exactly.
pub fn gauss_bonnet_check(t: &Triangulation) -> GaussBonnet {
    let total = deficit_angles(t)
        .into_iter()
        .fold(Q::zero(), |acc, r| acc + r.0);
    let expected = q(2 * t.euler_characteristic());
    GaussBonnet {
        pass: total == expected,
        total: PiMultiple(total),
        expected: PiMultiple(expected),
    }
}

/// Small named complexes used throughout tests and examples.
pub mod fixtures {
    use super::*;

    fn s(f: usize, i: u8) -> Slot {
        Slot::new(f, i)
    }

    /// Boundary of the tetrahedron, faces oriented outward.
    pub fn tetrahedron() -> Triangulation {
        let faces = vec![[1, 2, 3], [1, 3, 4], [1, 4, 2], [2, 4, 3]];
        let gluing = [
            (s(0, 0), s(2, 2)), // 1-2 / 2-1
            (s(0, 1), s(3, 2)), // 2-3 / 3-2
            (s(0, 2), s(1, 0)), // 3-1 / 1-3
            (s(1, 1), s(3, 1)), // 3-4 / 4-3
            (s(1, 2), s(2, 0)), // 4-1 / 1-4
            (s(2, 1), s(3, 0)), // 4-2 / 2-4
        ];
        build_triangulation(4, faces, &gluing).expect("tetrahedron")
    }

    /// Two triangles on vertices 1, 2, 3 glued along all three edges.
    pub fn double_triangle() -> Triangulation {
        let faces = vec![[1, 2, 3], [1, 3, 2]];
        let gluing = [(s(0, 0), s(1, 2)), (s(0, 1), s(1, 1)), (s(0, 2), s(1, 0))];
        build_triangulation(3, faces, &gluing).expect("double triangle")
    }

    /// The one-vertex torus: a square cut along its diagonal with opposite sides identified.
    pub fn two_triangle_torus() -> Triangulation {
        let faces = vec![[1, 1, 1], [1, 1, 1]];
        let gluing = [(s(0, 0), s(1, 0)), (s(0, 1), s(1, 1)), (s(0, 2), s(1, 2))];
        build_triangulation(1, faces, &gluing).expect("torus")
    }
}
