//! Trivalent ribbon graphs: the 1-skeleton of the barycentric dual of a
//! triangulation, with boundary cycles labelled by triangulation vertices.
//!
//! A ribbon graph is a pair of dart permutations: the vertex rotation `σ`
//! (all cycles of length 3) and the fixed-point-free edge involution `α`.
//! Boundary cycles are the orbits of the face permutation `φ = σ∘α`, that is
//! `φ(d) = σ(α(d))`. Every side ordering in the crate follows this convention.

use std::collections::VecDeque;

use thiserror::Error;

use crate::complex::{Label, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RibbonError {
    #[error("rotation is not a permutation of {0} darts")]
    NotPermutation(usize),
    #[error("vertex rotation has a cycle of length {0}; the graph must be trivalent")]
    NotTrivalent(usize),
    #[error("edge involution fixes or mis-pairs dart {0}")]
    BadInvolution(usize),
    #[error("the ribbon graph is disconnected")]
    Disconnected,
    #[error("{labels} boundary labels given for {cycles} boundary cycles")]
    LabelCount { labels: usize, cycles: usize },
    #[error("boundary labels must be a permutation of 1..={0}")]
    BadLabels(usize),
    #[error("V - E + F = {0} is not 2 - 2g for an integer g >= 0")]
    NonIntegerGenus(i64),
}

/// One boundary cycle: darts in face-permutation order starting at the smallest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryCycle {
    pub darts: Vec<usize>,
    pub label: Label,
}

impl BoundaryCycle {
    pub fn sides(&self) -> usize {
        self.darts.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    /// Boundary label per dart (label of the φ-cycle through the dart).
    dart_label: Vec<Label>,
    /// Boundary cycle index per dart; cycles ordered by smallest dart.
    dart_cycle: Vec<usize>,
    cycle_labels: Vec<Label>,
}

fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut d = s;
        while !seen[d] {
            seen[d] = true;
            c.push(d);
            d = perm[d];
        }
        out.push(c);
    }
    out
}

impl RibbonGraph {
    /// Validate a rotation system with one label per boundary cycle
    /// (cycles indexed by their smallest dart, ascending).
    pub fn new(sigma: Vec<usize>, alpha: Vec<usize>, cycle_labels: Vec<Label>) -> Result<Self, RibbonError> {
        let n = sigma.len();
        let is_perm = |p: &[usize]| {
            let mut seen = vec![false; n];
            p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        };
        if n == 0 || !is_perm(&sigma) || !is_perm(&alpha) {
            return Err(RibbonError::NotPermutation(n));
        }
        for c in cycles_of(&sigma) {
            if c.len() != 3 {
                return Err(RibbonError::NotTrivalent(c.len()));
            }
        }
        for d in 0..n {
            if alpha[d] == d || alpha[alpha[d]] != d {
                return Err(RibbonError::BadInvolution(d));
            }
        }

        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(d) = queue.pop_front() {
            for e in [sigma[d], alpha[d]] {
                if !seen[e] {
                    seen[e] = true;
                    queue.push_back(e);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(RibbonError::Disconnected);
        }

        let phi: Vec<usize> = (0..n).map(|d| sigma[alpha[d]]).collect();
        let cycles = cycles_of(&phi);
        if cycles.len() != cycle_labels.len() {
            return Err(RibbonError::LabelCount {
                labels: cycle_labels.len(),
                cycles: cycles.len(),
            });
        }
        let mut sorted = cycle_labels.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
            return Err(RibbonError::BadLabels(cycle_labels.len()));
        }
        let v = n as i64 / 3;
        let e = n as i64 / 2;
        let chi = v - e + cycles.len() as i64;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(RibbonError::NonIntegerGenus(chi));
        }

        let mut dart_cycle = vec![0; n];
        let mut dart_label = vec![0; n];
        for (i, c) in cycles.iter().enumerate() {
            for &d in c {
                dart_cycle[d] = i;
                dart_label[d] = cycle_labels[i];
            }
        }
        Ok(RibbonGraph {
            sigma,
            alpha,
            dart_label,
            dart_cycle,
            cycle_labels,
        })
    }

    pub fn dart_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.sigma.len() / 3
    }

    pub fn edge_count(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn boundary_count(&self) -> usize {
        self.cycle_labels.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn phi(&self, d: usize) -> usize {
        self.sigma[self.alpha[d]]
    }

    pub fn dart_label(&self, d: usize) -> Label {
        self.dart_label[d]
    }

    /// Labels of boundary cycles in cycle-index order.
    pub fn cycle_labels(&self) -> &[Label] {
        &self.cycle_labels
    }

    pub fn vertex_cycles(&self) -> Vec<Vec<usize>> {
        cycles_of(&self.sigma)
    }

    /// Edge index of a dart; edges are numbered by their smaller dart, ascending.
    pub fn edge_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.dart_count()];
        let mut next = 0;
        for d in 0..self.dart_count() {
            if idx[d] == usize::MAX {
                idx[d] = next;
                idx[self.alpha[d]] = next;
                next += 1;
            }
        }
        idx
    }

    /// Same graph with the boundary labels replaced through `relabel[old - 1] = new`.
    pub fn relabelled(&self, relabel: &[Label]) -> Result<RibbonGraph, RibbonError> {
        let labels = self.cycle_labels.iter().map(|&l| relabel[l as usize - 1]).collect();
        RibbonGraph::new(self.sigma.clone(), self.alpha.clone(), labels)
    }

    /// Conjugate by a dart permutation: dart `d` becomes `perm[d]`.
    pub fn renumbered(&self, perm: &[usize]) -> RibbonGraph {
        let n = self.dart_count();
        let mut sigma = vec![0; n];
        let mut alpha = vec![0; n];
        for d in 0..n {
            sigma[perm[d]] = perm[self.sigma[d]];
            alpha[perm[d]] = perm[self.alpha[d]];
        }
        let mut label_at = vec![0; n];
        for d in 0..n {
            label_at[perm[d]] = self.dart_label[d];
        }
        let phi: Vec<usize> = (0..n).map(|d| sigma[alpha[d]]).collect();
        let labels = cycles_of(&phi).iter().map(|c| label_at[c[0]]).collect();
        RibbonGraph::new(sigma, alpha, labels).expect("renumbering preserves validity")
    }

    /// The orientation-reversed map: every rotation inverted, labels kept.
    pub fn mirror(&self) -> RibbonGraph {
        let n = self.dart_count();
        let mut sigma = vec![0; n];
        for d in 0..n {
            sigma[self.sigma[d]] = d;
        }
        // A boundary of the mirror traverses the original boundary backwards,
        // shifted by one rotation step: σ⁻¹α(d) lies on the original cycle of α(d).
        let alpha = self.alpha.clone();
        let phi: Vec<usize> = (0..n).map(|d| sigma[alpha[d]]).collect();
        let labels = cycles_of(&phi)
            .iter()
            .map(|c| self.dart_label[self.alpha[c[0]]])
            .collect();
        RibbonGraph::new(sigma, alpha, labels).expect("mirror preserves validity")
    }
}

/// Dual ribbon graph of a triangulation: dart `3f + i` is slot `i` of face `f`.
pub fn dualize(t: &Triangulation) -> RibbonGraph {
    let n = 3 * t.face_count();
    let sigma: Vec<usize> = (0..n).map(|d| 3 * (d / 3) + (d % 3 + 1) % 3).collect();
    let alpha = t.partner_darts().to_vec();
    let phi: Vec<usize> = (0..n).map(|d| sigma[alpha[d]]).collect();
    // φ fixes the tail vertex of a slot, so each cycle carries one corner label.
    let labels = cycles_of(&phi)
        .iter()
        .map(|c| t.corner_label(c[0] / 3, c[0] % 3))
        .collect();
    RibbonGraph::new(sigma, alpha, labels).expect("dual of a valid triangulation")
}

pub fn boundary_cycles(g: &RibbonGraph) -> Vec<BoundaryCycle> {
    let mut out: Vec<BoundaryCycle> = g
        .cycle_labels
        .iter()
        .map(|&label| BoundaryCycle {
            darts: Vec::new(),
            label,
        })
        .collect();
    let mut seen = vec![false; g.dart_count()];
    for s in 0..g.dart_count() {
        if seen[s] {
            continue;
        }
        let c = g.dart_cycle[s];
        let mut d = s;
        while !seen[d] {
            seen[d] = true;
            out[c].darts.push(d);
            d = g.phi(d);
        }
    }
    out
}

/// Genus from `2 - 2g = V - E + |∂|`.
pub fn graph_genus(vertices: usize, edges: usize, boundaries: usize) -> Result<u32, RibbonError> {
    let chi = vertices as i64 - edges as i64 + boundaries as i64;
    if chi > 2 || (2 - chi) % 2 != 0 {
        return Err(RibbonError::NonIntegerGenus(chi));
    }
    Ok(((2 - chi) / 2) as u32)
}

pub fn genus(g: &RibbonGraph) -> u32 {
    graph_genus(g.vertex_count(), g.edge_count(), g.boundary_count()).expect("validated on construction")
}

/// The graph with a degree-2 vertex inserted at every edge midpoint.
/// Vertices `0..V` are the trivalent ones (σ-cycles by smallest dart), `V..V+E` the midpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRefinement {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub degrees: Vec<usize>,
}

impl EdgeRefinement {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

pub fn edge_refinement(g: &RibbonGraph) -> EdgeRefinement {
    let mut vertex_of = vec![0; g.dart_count()];
    for (v, c) in g.vertex_cycles().iter().enumerate() {
        for &d in c {
            vertex_of[d] = v;
        }
    }
    let v = g.vertex_count();
    let edge = g.edge_index();
    let edges: Vec<(usize, usize)> = (0..g.dart_count()).map(|d| (vertex_of[d], v + edge[d])).collect();
    let mut degrees = vec![0; v + g.edge_count()];
    for &(a, b) in &edges {
        degrees[a] += 1;
        degrees[b] += 1;
    }
    EdgeRefinement {
        vertex_count: v + g.edge_count(),
        edges,
        degrees,
    }
}

/// Extend `base -> image` to a map automorphism, if one exists.
///
/// A connected map is generated by σ and α from any dart, so the image of one
/// dart determines the whole candidate bijection.
fn extend_from(g: &RibbonGraph, base: usize, image: usize, keep_labels: bool) -> Option<Vec<usize>> {
    let n = g.dart_count();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[base] = image;
    used[image] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(d) = queue.pop_front() {
        let md = map[d];
        if keep_labels && g.dart_label[d] != g.dart_label[md] {
            return None;
        }
        for (e, me) in [(g.sigma[d], g.sigma[md]), (g.alpha[d], g.alpha[md])] {
            if map[e] == usize::MAX {
                if used[me] {
                    return None;
                }
                map[e] = me;
                used[me] = true;
                queue.push_back(e);
            } else if map[e] != me {
                return None;
            }
        }
    }
    Some(map)
}

/// Automorphism group of a ribbon graph, all elements listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismGroup {
    pub elements: Vec<Vec<usize>>,
    pub generators: Vec<Vec<usize>>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a ∘ b)(d) = a(b(d))
    b.iter().map(|&x| a[x]).collect()
}

fn closure(gens: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let c = compose(g, &elems[i]);
            if !elems.contains(&c) {
                elems.push(c);
            }
        }
        i += 1;
    }
    elems
}

fn automorphisms(g: &RibbonGraph, keep_labels: bool) -> AutomorphismGroup {
    // Pruning: an automorphism preserves the boundary label and the side count
    // of the boundary through each dart.
    let sides: Vec<usize> = {
        let cycles = boundary_cycles(g);
        (0..g.dart_count()).map(|d| cycles[g.dart_cycle[d]].sides()).collect()
    };
    let base = 0;
    let elements: Vec<Vec<usize>> = (0..g.dart_count())
        .filter(|&r| sides[r] == sides[base])
        .filter(|&r| !keep_labels || g.dart_label[r] == g.dart_label[base])
        .filter_map(|r| extend_from(g, base, r, keep_labels))
        .collect();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut generated = 1;
    for e in &elements {
        if generated == elements.len() {
            break;
        }
        let mut trial = generators.clone();
        trial.push(e.clone());
        let size = closure(&trial, g.dart_count()).len();
        if size > generated {
            generators = trial;
            generated = size;
        }
    }
    AutomorphismGroup { elements, generators }
}

/// Orientation-preserving automorphisms fixing every boundary label.
pub fn aut_boundary(g: &RibbonGraph) -> AutomorphismGroup {
    automorphisms(g, true)
}

/// All orientation-preserving map automorphisms, boundary labels ignored.
pub fn aut_map(g: &RibbonGraph) -> AutomorphismGroup {
    automorphisms(g, false)
}

/// Breadth-first renumbering from a root dart; the root's σ-cycle becomes
/// darts 0, 1, 2 and each newly reached σ-cycle gets the next block of three.
fn rooted_code(g: &RibbonGraph, root: usize, with_labels: bool) -> Vec<u16> {
    let n = g.dart_count();
    let mut new = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let push_block = |d: usize, new: &mut Vec<usize>, order: &mut Vec<usize>| {
        let mut x = d;
        for _ in 0..3 {
            new[x] = order.len();
            order.push(x);
            x = g.sigma[x];
        }
    };
    push_block(root, &mut new, &mut order);
    let mut code = Vec::with_capacity(2 * n + 1);
    code.push(n as u16);
    let mut i = 0;
    while i < order.len() {
        let a = g.alpha[order[i]];
        if new[a] == usize::MAX {
            push_block(a, &mut new, &mut order);
        }
        code.push(new[a] as u16);
        i += 1;
    }
    if with_labels {
        code.extend(order.iter().map(|&d| g.dart_label[d] as u16));
    }
    code
}

fn encode(code: &[u16]) -> Vec<u8> {
    code.iter().flat_map(|x| x.to_be_bytes()).collect()
}

/// Canonical form of the oriented, boundary-labelled ribbon graph: equal codes
/// iff an orientation- and label-preserving isomorphism exists.
pub fn canonical_code(g: &RibbonGraph) -> Vec<u8> {
    // Isomorphisms preserve labels, so roots can be restricted to label 1.
    let best = (0..g.dart_count())
        .filter(|&d| g.dart_label[d] == 1)
        .map(|r| rooted_code(g, r, true))
        .min()
        .expect("label 1 is present");
    encode(&best)
}

/// Canonical form ignoring boundary labels.
pub fn unlabelled_code(g: &RibbonGraph) -> Vec<u8> {
    let best = (0..g.dart_count())
        .map(|r| rooted_code(g, r, false))
        .min()
        .expect("nonempty graph");
    encode(&best)
}

/// Short hex rendering of a canonical code.
pub fn code_hex(code: &[u8]) -> String {
    hex::encode(code)
}

/// Named graphs, the duals of [`crate::complex::fixtures`].
pub mod fixtures {
    use super::*;
    use crate::complex::fixtures as tri;

    pub fn theta_sphere() -> RibbonGraph {
        dualize(&tri::double_triangle())
    }

    pub fn k4() -> RibbonGraph {
        dualize(&tri::tetrahedron())
    }

    pub fn theta_torus() -> RibbonGraph {
        dualize(&tri::two_triangle_torus())
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn counts(g: &RibbonGraph) -> (usize, usize, usize) {
        (g.vertex_count(), g.edge_count(), g.boundary_count())
    }

    #[test]
    fn dual_counts() {
        assert_eq!(counts(&k4()), (4, 6, 4));
        assert_eq!(counts(&theta_sphere()), (2, 3, 3));
        assert_eq!(counts(&theta_torus()), (2, 3, 1));
    }

    #[test]
    fn boundary_side_counts() {
        let sides = |g: &RibbonGraph| boundary_cycles(g).iter().map(BoundaryCycle::sides).collect::<Vec<_>>();
        assert_eq!(sides(&theta_sphere()), vec![2, 2, 2]);
        assert_eq!(sides(&k4()), vec![3, 3, 3, 3]);
        assert_eq!(sides(&theta_torus()), vec![6]);
    }

    #[test]
    fn torus_boundary_word() {
        let g = theta_torus();
        let edge = g.edge_index();
        let c = &boundary_cycles(&g)[0];
        let word: Vec<usize> = c.darts.iter().map(|&d| edge[d]).collect();
        assert_eq!(&word[..3], &word[3..]);
        let mut first = word[..3].to_vec();
        first.sort_unstable();
        assert_eq!(first, vec![0, 1, 2]);
    }

    #[test]
    fn genus_formula() {
        assert_eq!(graph_genus(2, 3, 3), Ok(0));
        assert_eq!(graph_genus(2, 3, 1), Ok(1));
        assert_eq!(graph_genus(4, 6, 4), Ok(0));
        assert!(graph_genus(2, 3, 2).is_err());
        assert_eq!(genus(&theta_torus()), 1);
    }

    #[test]
    fn refinement_counts() {
        let r = edge_refinement(&theta_sphere());
        assert_eq!((r.vertex_count, r.edge_count()), (5, 6));
        let r = edge_refinement(&k4());
        assert_eq!((r.vertex_count, r.edge_count()), (10, 12));
        let mut degs = r.degrees.clone();
        degs.sort_unstable();
        degs.dedup();
        assert_eq!(degs, vec![2, 3]);
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(aut_boundary(&theta_sphere()).order(), 1);
        assert_eq!(aut_boundary(&k4()).order(), 1);
        assert_eq!(aut_boundary(&theta_torus()).order(), 6);
        assert_eq!(aut_map(&k4()).order(), 12);
        assert_eq!(aut_map(&theta_sphere()).order(), 6);
        let g = aut_boundary(&theta_torus());
        assert_eq!(closure(&g.generators, 6).len(), 6);
    }

    #[test]
    fn codes() {
        let k = k4();
        let perm: Vec<usize> = (0..12).rev().collect();
        assert_eq!(canonical_code(&k), canonical_code(&k.renumbered(&perm)));
        assert_ne!(canonical_code(&k), canonical_code(&k.mirror()));
        let t = theta_sphere();
        assert_eq!(canonical_code(&t), canonical_code(&t.mirror()));
    }

    #[test]
    fn rejects_invalid_graphs() {
        assert_eq!(
            RibbonGraph::new(vec![1, 0], vec![1, 0], vec![1]),
            Err(RibbonError::NotTrivalent(2))
        );
        assert_eq!(
            RibbonGraph::new(vec![1, 2, 0, 4, 5, 3], vec![0, 4, 5, 3, 1, 2], vec![1]),
            Err(RibbonError::BadInvolution(0))
        );
        let t = theta_sphere();
        assert!(matches!(
            RibbonGraph::new(t.sigma().to_vec(), t.alpha().to_vec(), vec![1, 2]),
            Err(RibbonError::LabelCount { .. })
        ));
        assert_eq!(
            RibbonGraph::new(t.sigma().to_vec(), t.alpha().to_vec(), vec![1, 1, 2]),
            Err(RibbonError::BadLabels(3))
        );
    }
}
