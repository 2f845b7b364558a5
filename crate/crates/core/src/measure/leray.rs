//! Leray volume of `{L ≥ 0, A L = b}`: the measure `μ` with
//! `μ ∧ dη_1 ∧ … ∧ dη_m = dL_1 ∧ … ∧ dL_n`, where `η = A L`.
//!
//! Kernel coordinates `L = L_0 + K t` turn the polytope into a full-dimensional
//! one in `t`, and `μ = |det[K | W]| / |det(A W)| dt` for any complement `W`.
//! The `t`-polytope is measured exactly by a pulling triangulation built on the
//! face lattice cut out by the coordinate hyperplanes `L_j = 0`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::incidence::ConstraintSystem;
use crate::numeric::matrix::{int_to_q, QMatrix};
use crate::numeric::rational::{factorial, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LerayError {
    #[error("constraint matrix has rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("constraint polytope is unbounded")]
    Unbounded,
    #[error("chosen complement columns do not span the constraint directions")]
    BadComplement,
    #[error("column permutation is not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error("kernel transform is not an invertible {0}x{0} matrix")]
    SingularTransform(usize),
}

/// Alternative choices that must not change the volume.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LerayOptions {
    /// Replace the kernel basis `K` by `K M`.
    pub kernel_transform: Option<Vec<Vec<i64>>>,
    /// Columns spanning the complement `W`; defaults to the pivot columns of `A`.
    pub complement: Option<Vec<usize>>,
    /// Reorder edges: new column `c` is old column `perm[c]`.
    pub column_permutation: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LerayVolume {
    #[serde(with = "crate::io::serde_q")]
    pub volume: Q,
    pub dim: usize,
    /// Vertices of the polytope in the original edge coordinates.
    #[serde(with = "crate::io::serde_q::nested")]
    pub vertices: Vec<Vec<Q>>,
}

pub fn leray_volume(c: &ConstraintSystem) -> Result<LerayVolume, LerayError> {
    leray_volume_with(c, &LerayOptions::default())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        go(0, n, k, &mut cur, &mut out);
    }
    out
}

/// Basic feasible solutions of `A x = b, x ≥ 0` with `A` of full row rank.
fn basic_feasible_solutions(a: &QMatrix, b: &[Q]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for s in subsets(a.cols, a.rows) {
        let sub = a.select_columns(&s);
        if sub.determinant().is_zero() {
            continue;
        }
        let x = sub.solve(b).expect("invertible basis");
        if x.iter().any(Signed::is_negative) {
            continue;
        }
        let mut v = vec![Q::zero(); a.cols];
        for (&j, xj) in s.iter().zip(x) {
            v[j] = xj;
        }
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort();
    out
}

/// `{r ≥ 0, A r = 0}` is trivial iff the slice `Σ r = 1` is empty.
fn is_bounded(a: &QMatrix) -> bool {
    let rows: Vec<Vec<Q>> = (0..=a.rows)
        .map(|i| {
            let mut r = if i < a.rows { a.row(i).to_vec() } else { vec![q(1); a.cols] };
            r.push(if i < a.rows { Q::zero() } else { q(1) });
            r
        })
        .collect();
    let (r, pivots) = QMatrix::from_rows(&rows).rref();
    if pivots.last() == Some(&a.cols) {
        return true;
    }
    // Full-row-rank equivalent system from the reduced rows.
    let k = pivots.len();
    let lhs: Vec<Vec<Q>> = (0..k).map(|i| r.row(i)[..a.cols].to_vec()).collect();
    let rhs: Vec<Q> = (0..k).map(|i| r.get(i, a.cols).clone()).collect();
    basic_feasible_solutions(&QMatrix::from_rows(&lhs), &rhs).is_empty()
}

fn affine_rank(points: &[&Vec<Q>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0].iter()).map(|(x, y)| x - y).collect())
        .collect();
    QMatrix::from_rows(&rows).rank()
}

struct Triangulator<'a> {
    /// Polytope vertices in edge coordinates (for tightness).
    verts: &'a [Vec<Q>],
    /// Same vertices in kernel coordinates (for dimension).
    coords: &'a [Vec<Q>],
    memo: HashMap<Vec<usize>, Vec<Vec<usize>>>,
}

impl Triangulator<'_> {
    fn dim(&self, face: &[usize]) -> usize {
        let pts: Vec<&Vec<Q>> = face.iter().map(|&i| &self.coords[i]).collect();
        affine_rank(&pts)
    }

    fn facets(&self, face: &[usize], k: usize) -> Vec<Vec<usize>> {
        let n = self.verts[0].len();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for j in 0..n {
            let tight: Vec<usize> = face.iter().copied().filter(|&v| self.verts[v][j].is_zero()).collect();
            if tight.is_empty() || tight.len() == face.len() || out.contains(&tight) {
                continue;
            }
            if self.dim(&tight) + 1 == k {
                out.push(tight);
            }
        }
        out
    }

    /// Pulling triangulation from the lowest-indexed vertex.
    fn triangulate(&mut self, face: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![face[0]]];
        }
        if let Some(t) = self.memo.get(face) {
            return t.clone();
        }
        let apex = face[0];
        let mut out = Vec::new();
        for facet in self.facets(face, k) {
            if facet.contains(&apex) {
                continue;
            }
            for mut s in self.triangulate(&facet, k - 1) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        self.memo.insert(face.to_vec(), out.clone());
        out
    }
}

fn simplex_volume(coords: &[Vec<Q>], simplex: &[usize], d: usize) -> Q {
    let rows: Vec<Vec<Q>> = simplex[1..]
        .iter()
        .map(|&i| coords[i].iter().zip(&coords[simplex[0]]).map(|(x, y)| x - y).collect())
        .collect();
    QMatrix::from_rows(&rows).determinant().abs() / int_to_q(&factorial(d as u32))
}

pub fn leray_volume_with(c: &ConstraintSystem, opts: &LerayOptions) -> Result<LerayVolume, LerayError> {
    let n = c.cols();
    let m = c.rows();
    let perm: Vec<usize> = match &opts.column_permutation {
        Some(p) => {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(LerayError::BadPermutation(n));
            }
            p.clone()
        }
        None => (0..n).collect(),
    };
    let a = c.to_qmatrix().select_columns(&perm);
    let (_, pivots) = a.rref();
    if pivots.len() < m {
        return Err(LerayError::RankDeficient { rank: pivots.len(), rows: m });
    }
    if !is_bounded(&a) {
        return Err(LerayError::Unbounded);
    }
    let d = n - m;
    let unpermute = |v: &Vec<Q>| -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (c_new, &c_old) in perm.iter().enumerate() {
            out[c_old] = v[c_new].clone();
        }
        out
    };

    let verts = basic_feasible_solutions(&a, &c.rhs);
    let mut report_vertices: Vec<Vec<Q>> = verts.iter().map(unpermute).collect();
    report_vertices.sort();
    let empty = LerayVolume {
        volume: Q::zero(),
        dim: d,
        vertices: report_vertices.clone(),
    };
    if verts.is_empty() {
        return Ok(empty);
    }

    let mut kernel: Vec<Vec<BigInt>> = a.integer_kernel();
    if let Some(t) = &opts.kernel_transform {
        if t.len() != d || t.iter().any(|r| r.len() != d) {
            return Err(LerayError::SingularTransform(d));
        }
        if d > 0 && QMatrix::from_int_rows(t).determinant().is_zero() {
            return Err(LerayError::SingularTransform(d));
        }
        kernel = (0..d)
            .map(|j| {
                (0..n)
                    .map(|i| (0..d).map(|k| &kernel[k][i] * BigInt::from(t[k][j])).sum())
                    .collect()
            })
            .collect();
    }
    let kernel_q: Vec<Vec<Q>> = kernel.iter().map(|v| v.iter().map(int_to_q).collect()).collect();

    let w_cols = opts.complement.clone().unwrap_or(pivots);
    if w_cols.len() != m || w_cols.iter().any(|&j| j >= n) {
        return Err(LerayError::BadComplement);
    }
    let aw = a.select_columns(&w_cols).determinant();
    if aw.is_zero() {
        return Err(LerayError::BadComplement);
    }
    let mut frame = kernel_q.clone();
    for &j in &w_cols {
        let mut e = vec![Q::zero(); n];
        e[j] = q(1);
        frame.push(e);
    }
    let kw = QMatrix::from_columns(&frame).determinant();
    if kw.is_zero() {
        return Err(LerayError::BadComplement);
    }
    let density = kw.abs() / aw.abs();

    if d == 0 {
        return Ok(LerayVolume {
            volume: density,
            dim: 0,
            vertices: report_vertices,
        });
    }

    let kmat = QMatrix::from_columns(&kernel_q);
    let coords: Vec<Vec<Q>> = verts
        .iter()
        .map(|v| {
            let diff: Vec<Q> = v.iter().zip(&verts[0]).map(|(x, y)| x - y).collect();
            kmat.solve(&diff).expect("vertex differences lie in the kernel")
        })
        .collect();
    let all: Vec<usize> = (0..verts.len()).collect();
    let mut tri = Triangulator {
        verts: &verts,
        coords: &coords,
        memo: HashMap::new(),
    };
    if tri.dim(&all) < d {
        return Ok(empty);
    }
    let lebesgue = tri
        .triangulate(&all, d)
        .iter()
        .fold(Q::zero(), |acc, s| acc + simplex_volume(&coords, s, d));
    Ok(LerayVolume {
        volume: density * lebesgue,
        dim: d,
        vertices: report_vertices,
    })
}
