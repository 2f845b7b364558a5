use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::complex::Triangulation;
use crate::geometry::dual_edge_jacobian;
use crate::numeric::rational::{frac, q, Q};
use crate::polygon::polygon_two_form;
use crate::ribbon::{boundary_cycles, RibbonGraph};

/// Integer skew form `Ω = Σ_{i<j} B[i][j] dL_i ∧ dL_j` on edge coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewForm {
    pub dim: usize,
    pub entries: Vec<Vec<i64>>,
    /// Edge index of each side, per boundary label, in face-permutation order.
    pub side_edges: Vec<Vec<usize>>,
}

impl SkewForm {
    pub fn is_skew(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.entries[i][j] == -self.entries[j][i]))
    }
}

/// `Ω = Σ_k Σ_{α<β≤q(k)-1} dL_{e(α)} ∧ dL_{e(β)}` where `e(α)` is the edge
/// under side `α` of boundary `k`. Sides sharing an edge add their
/// coefficients, and repeated edges cancel.
pub fn total_form(g: &RibbonGraph) -> SkewForm {
    let edge = g.edge_index();
    let n = g.edge_count();
    let mut b = vec![vec![0i64; n]; n];
    let mut side_edges = vec![Vec::new(); g.boundary_count()];
    for c in boundary_cycles(g) {
        let sides: Vec<usize> = c.darts.iter().map(|&d| edge[d]).collect();
        let used = &sides[..sides.len() - 1];
        for (a, &ea) in used.iter().enumerate() {
            for &eb in &used[a + 1..] {
                b[ea][eb] += 1;
                b[eb][ea] -= 1;
            }
        }
        side_edges[c.label as usize - 1] = sides;
    }
    SkewForm {
        dim: n,
        entries: b,
        side_edges,
    }
}

fn congruence(j: &[Vec<Q>], b: &[Vec<Q>], scale: &Q) -> Vec<Vec<Q>> {
    let rows = j.len();
    let cols = j.first().map_or(0, Vec::len);
    let mut out = vec![vec![Q::zero(); cols]; cols];
    for (a, ja) in j.iter().enumerate() {
        for (c, jc) in j.iter().enumerate().take(rows) {
            let w = &b[a][c];
            if w.is_zero() {
                continue;
            }
            for x in 0..cols {
                if ja[x].is_zero() {
                    continue;
                }
                let wx = w * &ja[x];
                for y in 0..cols {
                    if !jc[y].is_zero() {
                        out[x][y] += &wx * &jc[y];
                    }
                }
            }
        }
    }
    out.iter_mut()
        .for_each(|r| r.iter_mut().for_each(|v| *v *= scale));
    out
}

/// Pullback of a polygon's `ϖ` through the linearized dual-edge map at the
/// equilateral fan, on `(dl_1..dl_q, dl_{1,2}..dl_{q,1})`. Each dual edge
/// carries a factor `1/(3√3)`, so the pullback picks up `1/27` and stays rational.
pub fn pullback_polygon_form(q_: usize) -> Vec<Vec<Q>> {
    if q_ < 2 {
        return Vec::new();
    }
    let w = polygon_two_form(q_);
    let j: Vec<Vec<Q>> = dual_edge_jacobian(q_).into_iter().take(q_ - 1).collect();
    congruence(&j, &w, &frac(1, 27))
}

/// Linearized dual edge lengths in triangulation edge lengths, in units of
/// `1/(3√3)`: the dual edge across triangulation edge `e` reads `-dl_e` plus the
/// other two edges of each adjacent face.
pub fn dual_edge_matrix(t: &Triangulation, edge_of_dart: &[usize]) -> Vec<Vec<Q>> {
    let n = t.edge_count();
    let partner = t.partner_darts();
    let mut j = vec![vec![Q::zero(); n]; n];
    for d in 0..partner.len() {
        let e = edge_of_dart[d];
        if d > partner[d] {
            continue;
        }
        j[e][e] -= q(1);
        for side in [d, partner[d]] {
            let f = side / 3;
            for k in 1..3 {
                j[e][edge_of_dart[3 * f + (side % 3 + k) % 3]] += q(1);
            }
        }
    }
    j
}

/// `Ω` pulled back to the triangulation's own edge lengths at the equilateral
/// point. Dual edges and triangulation edges share the numbering of the dual
/// ribbon graph.
pub fn pullback_to_triangulation(t: &Triangulation, omega: &SkewForm) -> Vec<Vec<Q>> {
    let g = crate::ribbon::dualize(t);
    let j = dual_edge_matrix(t, &g.edge_index());
    let b: Vec<Vec<Q>> = omega
        .entries
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
    congruence(&j, &b, &frac(1, 27))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures as tri;
    use crate::numeric::matrix::QMatrix;
    use crate::ribbon::{dualize, fixtures};

    #[test]
    fn torus_word_form() {
        let f = total_form(&fixtures::theta_torus());
        assert!(f.is_skew());
        assert_eq!(f.side_edges[0].len(), 6);
        let nonzero: Vec<(usize, usize, i64)> = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter_map(|(i, j)| (f.entries[i][j] != 0).then_some((i, j, f.entries[i][j])))
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].2.abs(), 2);
    }

    #[test]
    fn two_gons_contribute_nothing() {
        let f = total_form(&fixtures::theta_sphere());
        assert!(f.entries.iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn k4_form_is_skew() {
        let f = total_form(&fixtures::k4());
        assert!(f.is_skew());
        // three sides per boundary, one pair each
        let pairs: i64 = f.entries.iter().flatten().map(|x| x.abs()).sum();
        assert!(pairs <= 8 && pairs > 0);
    }

    #[test]
    fn polygon_pullbacks() {
        assert!(pullback_polygon_form(2).iter().flatten().all(Zero::is_zero));
        for q_ in 3..=7 {
            let p = pullback_polygon_form(q_);
            for i in 0..2 * q_ {
                for j in 0..2 * q_ {
                    assert_eq!(p[i][j], -p[j][i].clone());
                }
            }
            let w = polygon_two_form(q_);
            let rank_w = QMatrix::from_rows(&w).rank();
            assert!(QMatrix::from_rows(&p).rank() <= rank_w);
        }
    }

    #[test]
    fn global_pullback_is_skew() {
        for t in [tri::tetrahedron(), tri::two_triangle_torus(), tri::double_triangle()] {
            let omega = total_form(&dualize(&t));
            let p = pullback_to_triangulation(&t, &omega);
            let n = p.len();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(p[i][j], -p[j][i].clone());
                }
            }
        }
    }

    #[test]
    fn dual_edge_rows_have_five_terms() {
        let t = tri::tetrahedron();
        let g = dualize(&t);
        let j = dual_edge_matrix(&t, &g.edge_index());
        for row in &j {
            assert_eq!(row.iter().filter(|x| **x == q(-1)).count(), 1);
            assert_eq!(row.iter().filter(|x| **x == q(1)).count(), 4);
        }
        // the double triangle's faces share every edge, so coefficients stack
        let d = tri::double_triangle();
        let jd = dual_edge_matrix(&d, &dualize(&d).edge_index());
        for (e, row) in jd.iter().enumerate() {
            assert_eq!(row[e], q(-1));
            assert_eq!(row.iter().filter(|x| **x == q(2)).count(), 2);
        }
    }
}
