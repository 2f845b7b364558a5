//! Catalogs of oriented, vertex-labelled triangulations with prescribed
//! curvature assignments, up to orientation- and label-preserving isomorphism.
//!
//! Generation works on the dual side. Faces are σ-blocks of three darts and a
//! triangulation is a gluing involution α. Maps are grown in breadth-first
//! canonical order: the smallest unglued dart is matched either to an open dart
//! of another existing face or to the first dart of a fresh face. Every rooted
//! map then arises exactly once, and isomorphic roots are merged by canonical
//! code. Face-permutation cycles are tracked while gluing so that closed cycles
//! must match a still-unused curvature value.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{
    build_triangulation, curvature_assignments, gauss_bonnet_check, Label, Slot, Triangulation, TriangulationError,
};
use crate::ribbon::{
    aut_boundary, aut_map, boundary_cycles, canonical_code, code_hex, dualize, genus, unlabelled_code, RibbonGraph,
};

pub const DEFAULT_MAX_FACES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("infeasible key: {0}")]
    Infeasible(String),
    #[error("{faces} faces exceed the cap of {cap}")]
    ResourceCap { faces: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub max_faces: usize,
    pub parallel: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            max_faces: DEFAULT_MAX_FACES,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub triangulation: Triangulation,
    pub graph: RibbonGraph,
    pub aut_order: usize,
    pub code: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub genus: u32,
    pub vertices: usize,
    pub q: Vec<u32>,
    /// Sorted by canonical code.
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn cardinality(&self) -> usize {
        self.entries.len()
    }

    pub fn codes(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.code.clone()).collect()
    }

    /// Re-run the catalog invariants: distinct codes, Gauss–Bonnet, genus and
    /// curvature consistency, and agreement of every stored derived value.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        for (i, e) in self.entries.iter().enumerate() {
            let t = &e.triangulation;
            if !seen.insert(e.code.clone()) {
                return Err(format!("entry {i}: duplicate canonical code"));
            }
            if t.genus() != self.genus || t.vertex_count() != self.vertices {
                return Err(format!("entry {i}: genus or vertex count mismatch"));
            }
            if curvature_assignments(t) != self.q {
                return Err(format!("entry {i}: curvature assignments differ from key"));
            }
            if !gauss_bonnet_check(t).pass {
                return Err(format!("entry {i}: Gauss-Bonnet fails"));
            }
            let g = dualize(t);
            if g != e.graph {
                return Err(format!("entry {i}: stored graph is not the dual"));
            }
            if genus(&g) != self.genus {
                return Err(format!("entry {i}: dual genus mismatch"));
            }
            if code_hex(&canonical_code(&g)) != e.code {
                return Err(format!("entry {i}: canonical code mismatch"));
            }
            if aut_boundary(&g).order() != e.aut_order {
                return Err(format!("entry {i}: automorphism order mismatch"));
            }
        }
        if self.entries.windows(2).any(|w| w[0].code >= w[1].code) {
            return Err("entries not sorted by code".into());
        }
        Ok(())
    }
}

/// `N2 = 2(N0 + 2g - 2)`, required positive.
pub fn face_count(g: u32, n0: usize) -> Result<usize, EnumError> {
    let n2 = 2 * (n0 as i64 + 2 * g as i64 - 2);
    if n0 == 0 || n2 <= 0 {
        return Err(EnumError::Infeasible(format!(
            "no closed genus-{g} triangulation has {n0} vertices"
        )));
    }
    Ok(n2 as usize)
}

pub fn check_feasible(g: u32, n0: usize, q: &[u32]) -> Result<usize, EnumError> {
    let n2 = face_count(g, n0)?;
    if q.len() != n0 {
        return Err(EnumError::Infeasible(format!("{} curvature values for {n0} vertices", q.len())));
    }
    if let Some(bad) = q.iter().find(|&&x| x < 2) {
        return Err(EnumError::Infeasible(format!("curvature assignment {bad} < 2")));
    }
    let sum: u64 = q.iter().map(|&x| x as u64).sum();
    if sum != 3 * n2 as u64 {
        return Err(EnumError::Infeasible(format!(
            "sum of q is {sum} but {n2} faces require {}",
            3 * n2
        )));
    }
    Ok(n2)
}

/// All labelled curvature vectors admitted by `(g, N0)`: compositions of `3 N2`
/// into `N0` parts, each at least 2, in lexicographic order.
pub fn feasible_q_vectors(g: u32, n0: usize) -> Result<Vec<Vec<u32>>, EnumError> {
    let n2 = face_count(g, n0)?;
    let total = 3 * n2 as u32;
    let mut out = Vec::new();
    fn go(left: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut x = 2;
        while x + 2 * (parts as u32 - 1) <= left {
            cur.push(x);
            go(left - x, parts - 1, cur, out);
            cur.pop();
            x += 1;
        }
    }
    go(total, n0, &mut Vec::new(), &mut out);
    Ok(out)
}

const UNSET: usize = usize::MAX;

fn sigma(d: usize) -> usize {
    3 * (d / 3) + (d % 3 + 1) % 3
}

fn sigma_inv(d: usize) -> usize {
    3 * (d / 3) + (d % 3 + 2) % 3
}

/// Partial breadth-first map.
#[derive(Clone)]
struct State {
    alpha: Vec<usize>,
    blocks: usize,
    /// Remaining multiplicity of each cycle length, when a curvature multiset is prescribed.
    remaining: Option<Vec<u32>>,
    closed: usize,
}

struct Search {
    faces: usize,
    cycles: usize,
    /// Admit faces glued to themselves (dual loops).
    loops: bool,
}

enum Step {
    Done,
    Branch(usize),
}

impl Search {
    fn new_state(&self, target: Option<&[u32]>) -> State {
        let remaining = target.map(|q| {
            let max = q.iter().copied().max().unwrap_or(0) as usize;
            let mut r = vec![0u32; max + 1];
            for &x in q {
                r[x as usize] += 1;
            }
            r
        });
        State {
            alpha: vec![UNSET; 3 * self.faces],
            blocks: 1,
            remaining,
            closed: 0,
        }
    }

    fn next_open(&self, s: &State) -> Step {
        match (0..3 * s.blocks).find(|&d| s.alpha[d] == UNSET) {
            Some(d) => Step::Branch(d),
            None => Step::Done,
        }
    }

    /// Partner candidates for `d`: open darts in other existing faces, then a fresh face.
    fn candidates(&self, s: &State, d: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (d + 1..3 * s.blocks)
            .filter(|&e| (self.loops || e / 3 != d / 3) && s.alpha[e] == UNSET)
            .collect();
        if s.blocks < self.faces {
            out.push(3 * s.blocks);
        }
        out
    }

    /// Glue `d` to `e`, updating cycle bookkeeping; `None` when pruned.
    fn glue(&self, s: &State, d: usize, e: usize) -> Option<State> {
        let mut t = s.clone();
        if e == 3 * t.blocks {
            t.blocks += 1;
        }
        t.alpha[d] = e;
        t.alpha[e] = d;
        let max_left = t
            .remaining
            .as_ref()
            .map(|r| r.iter().rposition(|&c| c > 0).unwrap_or(0));
        let mut closed_here: Vec<usize> = Vec::new();
        for x in [d, e] {
            if closed_here.contains(&x) {
                continue;
            }
            // forward along φ(y) = σ(α(y))
            let mut path = vec![x];
            let mut y = x;
            let mut cycle = false;
            while t.alpha[y] != UNSET {
                let z = sigma(t.alpha[y]);
                if z == x {
                    cycle = true;
                    break;
                }
                path.push(z);
                y = z;
            }
            let mut len = path.len();
            if cycle {
                closed_here.extend(path);
                t.closed += 1;
                if t.closed > self.cycles {
                    return None;
                }
                if let Some(r) = t.remaining.as_mut() {
                    if len >= r.len() || r[len] == 0 {
                        return None;
                    }
                    r[len] -= 1;
                }
                continue;
            }
            // backward along φ⁻¹(y) = α(σ⁻¹(y))
            let mut y = x;
            while t.alpha[sigma_inv(y)] != UNSET {
                y = t.alpha[sigma_inv(y)];
                len += 1;
            }
            if max_left.is_some_and(|m| len > m) {
                return None;
            }
        }
        Some(t)
    }

    fn finish(&self, s: &State) -> bool {
        s.blocks == self.faces
            && s.closed == self.cycles
            && s.remaining.as_ref().is_none_or(|r| r.iter().all(|&c| c == 0))
    }

    fn run(&self, s: State, out: &mut BTreeMap<Vec<u8>, RibbonGraph>) {
        match self.next_open(&s) {
            Step::Done => {
                if self.finish(&s) {
                    let g = self.to_graph(&s);
                    out.entry(unlabelled_code(&g)).or_insert(g);
                }
            }
            Step::Branch(d) => {
                for e in self.candidates(&s, d) {
                    if let Some(t) = self.glue(&s, d, e) {
                        self.run(t, out);
                    }
                }
            }
        }
    }

    /// Partial states after `depth` gluings, for splitting the search.
    fn prefixes(&self, s: State, depth: usize, out: &mut Vec<State>) {
        if depth == 0 {
            out.push(s);
            return;
        }
        match self.next_open(&s) {
            Step::Done => out.push(s),
            Step::Branch(d) => {
                for e in self.candidates(&s, d) {
                    if let Some(t) = self.glue(&s, d, e) {
                        self.prefixes(t, depth - 1, out);
                    }
                }
            }
        }
    }

    fn to_graph(&self, s: &State) -> RibbonGraph {
        let n = 3 * self.faces;
        let sig: Vec<usize> = (0..n).map(sigma).collect();
        let labels: Vec<Label> = (1..=self.cycles as Label).collect();
        RibbonGraph::new(sig, s.alpha.clone(), labels).expect("complete gluing is a valid map")
    }
}

/// Unlabelled maps with `N2` trivalent vertices, `N0` boundaries, no face
/// glued to itself, optionally with a prescribed multiset of boundary sizes.
/// Keyed and ordered by unlabelled canonical code.
pub fn unlabelled_maps(
    g: u32,
    n0: usize,
    sizes: Option<&[u32]>,
    opts: EnumOptions,
) -> Result<Vec<RibbonGraph>, EnumError> {
    search_maps(g, n0, sizes, false, opts)
}

/// Every connected trivalent map of genus `g` with `N0` boundaries, loops
/// included. These are the cells of the full combinatorial moduli space;
/// the ones without loops are exactly the triangulation duals.
pub fn all_trivalent_maps(g: u32, n0: usize, opts: EnumOptions) -> Result<Vec<RibbonGraph>, EnumError> {
    search_maps(g, n0, None, true, opts)
}

fn search_maps(
    g: u32,
    n0: usize,
    sizes: Option<&[u32]>,
    loops: bool,
    opts: EnumOptions,
) -> Result<Vec<RibbonGraph>, EnumError> {
    let faces = face_count(g, n0)?;
    if faces > opts.max_faces {
        return Err(EnumError::ResourceCap {
            faces,
            cap: opts.max_faces,
        });
    }
    let search = Search { faces, cycles: n0, loops };
    let root = search.new_state(sizes);
    let mut found = BTreeMap::new();
    if opts.parallel {
        let mut pre = Vec::new();
        search.prefixes(root, 4, &mut pre);
        let parts: Vec<BTreeMap<Vec<u8>, RibbonGraph>> = pre
            .into_par_iter()
            .map(|s| {
                let mut m = BTreeMap::new();
                search.run(s, &mut m);
                m
            })
            .collect();
        for m in parts {
            for (k, v) in m {
                found.entry(k).or_insert(v);
            }
        }
    } else {
        search.run(root, &mut found);
    }
    Ok(found.into_values().collect())
}

/// Labelled triangulation whose dual is `g`. For a graph numbered like
/// [`dualize`](crate::ribbon::dualize)'s output, corner `i` of face `f` is the boundary through dart
/// `3f + i`; other numberings are first brought to that form.
///
/// Fails on graphs with loops, whose duals have self-glued faces.
pub fn triangulation_of(g: &RibbonGraph) -> Result<Triangulation, TriangulationError> {
    let standard = (0..g.dart_count()).all(|d| g.sigma()[d] == 3 * (d / 3) + (d % 3 + 1) % 3);
    let owned;
    let g = if standard {
        g
    } else {
        let mut perm = vec![usize::MAX; g.dart_count()];
        let mut next = 0;
        for d in 0..g.dart_count() {
            if perm[d] != usize::MAX {
                continue;
            }
            let mut e = d;
            for i in 0..3 {
                perm[e] = next + i;
                e = g.sigma()[e];
            }
            next += 3;
        }
        owned = g.renumbered(&perm);
        &owned
    };
    let faces: Vec<[Label; 3]> = (0..g.vertex_count())
        .map(|f| [g.dart_label(3 * f), g.dart_label(3 * f + 1), g.dart_label(3 * f + 2)])
        .collect();
    let gluing: Vec<(Slot, Slot)> = (0..g.dart_count())
        .filter(|&d| d < g.alpha()[d])
        .map(|d| (Slot::from_dart(d), Slot::from_dart(g.alpha()[d])))
        .collect();
    build_triangulation(g.boundary_count(), faces, &gluing)
}

fn entry_of(graph: RibbonGraph) -> CatalogEntry {
    let triangulation = triangulation_of(&graph).expect("enumerated maps have no loops");
    CatalogEntry {
        aut_order: aut_boundary(&graph).order(),
        code: code_hex(&canonical_code(&graph)),
        triangulation,
        graph,
    }
}

/// Labellings of `map`'s boundaries (cycle `c` gets `labels[c]`), one per orbit
/// of the map's automorphism group, restricted by `allowed(cycle, label)`.
pub fn labelling_orbits(map: &RibbonGraph, allowed: impl Fn(usize, Label) -> bool) -> Vec<Vec<Label>> {
    let cycles = boundary_cycles(map);
    let n0 = cycles.len();
    let mut cycle_of = vec![0; map.dart_count()];
    for (i, c) in cycles.iter().enumerate() {
        for &d in &c.darts {
            cycle_of[d] = i;
        }
    }
    let actions: Vec<Vec<usize>> = aut_map(map)
        .elements
        .iter()
        .map(|a| cycles.iter().map(|c| cycle_of[a[c.darts[0]]]).collect())
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<Label> = Vec::with_capacity(n0);
    let mut used = vec![false; n0 + 1];
    fn go(
        cur: &mut Vec<Label>,
        used: &mut Vec<bool>,
        n0: usize,
        allowed: &dyn Fn(usize, Label) -> bool,
        actions: &[Vec<usize>],
        out: &mut Vec<Vec<Label>>,
    ) {
        if cur.len() == n0 {
            let minimal = actions.iter().all(|a| {
                let moved: Vec<Label> = a.iter().map(|&c| cur[c]).collect();
                *cur <= moved
            });
            if minimal {
                out.push(cur.clone());
            }
            return;
        }
        for l in 1..=n0 as Label {
            if !used[l as usize] && allowed(cur.len(), l) {
                used[l as usize] = true;
                cur.push(l);
                go(cur, used, n0, allowed, actions, out);
                cur.pop();
                used[l as usize] = false;
            }
        }
    }
    go(&mut cur, &mut used, n0, &allowed, &actions, &mut out);
    out
}

pub fn label_map(map: &RibbonGraph, labels: &[Label]) -> RibbonGraph {
    // maps from the generator carry label c + 1 on cycle c
    map.relabelled(labels).expect("bijective labelling")
}

fn enumerate_sorted(g: u32, n0: usize, q_sorted: &[u32], opts: EnumOptions) -> Result<Catalog, EnumError> {
    let maps = unlabelled_maps(g, n0, Some(q_sorted), opts)?;
    let build = |map: &RibbonGraph| -> Vec<CatalogEntry> {
        let sides: Vec<usize> = boundary_cycles(map).iter().map(|c| c.sides()).collect();
        labelling_orbits(map, |c, l| sides[c] == q_sorted[l as usize - 1] as usize)
            .iter()
            .map(|lab| entry_of(label_map(map, lab)))
            .collect()
    };
    let lists: Vec<Vec<CatalogEntry>> = if opts.parallel {
        maps.par_iter().map(build).collect()
    } else {
        maps.iter().map(build).collect()
    };
    let mut entries: Vec<CatalogEntry> = lists.into_iter().flatten().collect();
    entries.sort_by(|a, b| a.code.cmp(&b.code));
    entries.dedup_by(|a, b| a.code == b.code);
    Ok(Catalog {
        genus: g,
        vertices: n0,
        q: q_sorted.to_vec(),
        entries,
    })
}

/// Permutation sorting `q` ascending (stable): `sorted[i] = q[perm[i]]`.
pub fn sorting_permutation(q: &[u32]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..q.len()).collect();
    perm.sort_by_key(|&i| q[i]);
    perm
}

/// Transport a catalog keyed by sorted `q` to the labelling of `q`.
pub fn relabel_catalog(sorted: &Catalog, q: &[u32]) -> Catalog {
    let perm = sorting_permutation(q);
    // sorted label i + 1 becomes original label perm[i] + 1
    let relabel: Vec<Label> = perm.iter().map(|&p| p as Label + 1).collect();
    let mut entries: Vec<CatalogEntry> = sorted
        .entries
        .iter()
        .map(|e| entry_of(e.graph.relabelled(&relabel).expect("bijective relabelling")))
        .collect();
    entries.sort_by(|a, b| a.code.cmp(&b.code));
    Catalog {
        genus: sorted.genus,
        vertices: sorted.vertices,
        q: q.to_vec(),
        entries,
    }
}

pub fn enumerate_triangulations(g: u32, n0: usize, q: &[u32], opts: EnumOptions) -> Result<Catalog, EnumError> {
    check_feasible(g, n0, q)?;
    let perm = sorting_permutation(q);
    let sorted: Vec<u32> = perm.iter().map(|&i| q[i]).collect();
    let cat = enumerate_sorted(g, n0, &sorted, opts)?;
    if sorted == q {
        return Ok(cat);
    }
    Ok(relabel_catalog(&cat, q))
}

/// Every labelled triangulation of `(g, N0)`, grouped by curvature vector.
pub fn enumerate_all(g: u32, n0: usize, opts: EnumOptions) -> Result<BTreeMap<Vec<u32>, Catalog>, EnumError> {
    let maps = unlabelled_maps(g, n0, None, opts)?;
    let build = |map: &RibbonGraph| -> Vec<CatalogEntry> {
        labelling_orbits(map, |_, _| true)
            .iter()
            .map(|lab| entry_of(label_map(map, lab)))
            .collect()
    };
    let lists: Vec<Vec<CatalogEntry>> = if opts.parallel {
        maps.par_iter().map(build).collect()
    } else {
        maps.iter().map(build).collect()
    };
    let mut out: BTreeMap<Vec<u32>, Catalog> = BTreeMap::new();
    for e in lists.into_iter().flatten() {
        let q = curvature_assignments(&e.triangulation);
        out.entry(q.clone())
            .or_insert_with(|| Catalog {
                genus: g,
                vertices: n0,
                q,
                entries: Vec::new(),
            })
            .entries
            .push(e);
    }
    for c in out.values_mut() {
        c.entries.sort_by(|a, b| a.code.cmp(&b.code));
        c.entries.dedup_by(|a, b| a.code == b.code);
    }
    Ok(out)
}
