//! Euclidean `q`-gons dual to a vertex, charted by their first `q - 1` complex
//! edge vectors. The `q`-th edge closes the polygon and is `-Σ Z^α`.
//!
//! Lengths are in units `u = (√3/3)a = 1`, so the isoperimetric perimeter of a
//! `q`-gon is `q`.

use num_complex::Complex;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::numeric::matrix::QMatrix;
use crate::numeric::rational::{cos_sin_turn, q, sqrt_approx, Precision, Q};

pub type CQ = Complex<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("a polygon needs at least 2 sides, got {0}")]
    TooFewSides(usize),
    #[error("all chart edges are zero")]
    AllZero,
    #[error("edge {0} has zero length")]
    ZeroEdge(usize),
    #[error("tangent vector has {got} components, chart has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonChart {
    edges: Vec<CQ>,
}

impl PolygonChart {
    pub fn new(edges: Vec<CQ>) -> Result<Self, PolygonError> {
        if edges.is_empty() {
            return Err(PolygonError::TooFewSides(edges.len() + 1));
        }
        if edges.iter().all(|z| z.is_zero()) {
            return Err(PolygonError::AllZero);
        }
        Ok(PolygonChart { edges })
    }

    /// Convenience constructor from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(Q, Q)]) -> Result<Self, PolygonError> {
        PolygonChart::new(pairs.iter().map(|(x, y)| Complex::new(x.clone(), y.clone())).collect())
    }

    /// Regular `q`-gon with unit sides, `Z^α = exp(2πiα/q)`, approximated at `prec`.
    pub fn regular(q_: usize, prec: Precision) -> Result<Self, PolygonError> {
        if q_ < 2 {
            return Err(PolygonError::TooFewSides(q_));
        }
        let edges = (1..q_)
            .map(|a| {
                let (c, s) = cos_sin_turn(a as i64, q_ as i64, prec);
                Complex::new(c, s)
            })
            .collect();
        PolygonChart::new(edges)
    }

    /// Number of sides `q`.
    pub fn sides(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn edges(&self) -> &[CQ] {
        &self.edges
    }

    pub fn closing_edge(&self) -> CQ {
        -self.edges.iter().fold(CQ::zero(), |acc, z| acc + z)
    }

    pub fn scaled(&self, lambda: &CQ) -> PolygonChart {
        PolygonChart {
            edges: self.edges.iter().map(|z| z * lambda).collect(),
        }
    }

    fn check_tangent(&self, xi: &[CQ]) -> Result<(), PolygonError> {
        if xi.len() != self.edges.len() {
            return Err(PolygonError::DimensionMismatch {
                expected: self.edges.len(),
                got: xi.len(),
            });
        }
        Ok(())
    }
}

/// `Re[Z ξ̄]`.
fn re_dot(z: &CQ, xi: &CQ) -> Q {
    &z.re * &xi.re + &z.im * &xi.im
}

/// Exact squared side lengths, the closing side last.
pub fn edge_length_sq(p: &PolygonChart) -> Vec<Q> {
    p.edges
        .iter()
        .chain(std::iter::once(&p.closing_edge()))
        .map(|z| z.norm_sqr())
        .collect()
}

/// `(|Z^1|, ..., |Z^{q-1}|, |Σ Z^α|)`.
pub fn edge_length_map(p: &PolygonChart, prec: Precision) -> Vec<Q> {
    edge_length_sq(p).iter().map(|x| sqrt_approx(x, prec)).collect()
}

/// Isoperimetric length map: the first `q - 1` sides as charted, the last side
/// absorbing the perimeter deficit `perimeter - Σ |Z^α|`.
pub fn isoperimetric_length_map(p: &PolygonChart, perimeter: &Q, prec: Precision) -> Vec<Q> {
    let mut out: Vec<Q> = p.edges.iter().map(|z| sqrt_approx(&z.norm_sqr(), prec)).collect();
    let used = out.iter().fold(Q::zero(), |acc, x| acc + x);
    out.push(perimeter - used);
    out
}

fn edge_differentials(p: &PolygonChart, xi: &[CQ], prec: Precision) -> Result<Vec<Option<Q>>, PolygonError> {
    p.check_tangent(xi)?;
    Ok(p.edges
        .iter()
        .zip(xi)
        .map(|(z, x)| {
            let n2 = z.norm_sqr();
            (!n2.is_zero()).then(|| prec.round(&(re_dot(z, x) / sqrt_approx(&n2, prec))))
        })
        .collect())
}

/// `(Re[Z^α ξ̄^α]/|Z^α|)_α` followed by minus their sum.
pub fn tangent_map(p: &PolygonChart, xi: &[CQ], prec: Precision) -> Result<Vec<Q>, PolygonError> {
    let d = edge_differentials(p, xi, prec)?;
    let mut out = Vec::with_capacity(p.sides());
    for (a, v) in d.into_iter().enumerate() {
        out.push(v.ok_or(PolygonError::ZeroEdge(a))?);
    }
    let s = out.iter().fold(Q::zero(), |acc, x| acc + x);
    out.push(-s);
    Ok(out)
}

/// Real `q × 2(q-1)` matrix of the tangent map on `(Re ξ^α, Im ξ^α)` coordinates,
/// with each column pair rescaled by `|Z^α|`. The rescaling is invertible, so
/// rank and kernel dimension are those of the tangent map, and all entries
/// stay exact.
pub fn tangent_matrix_scaled(p: &PolygonChart) -> Result<QMatrix, PolygonError> {
    let n = p.edges.len();
    let mut m = QMatrix::zeros(n + 1, 2 * n);
    for (a, z) in p.edges.iter().enumerate() {
        if z.is_zero() {
            return Err(PolygonError::ZeroEdge(a));
        }
        m.set(a, 2 * a, z.re.clone());
        m.set(a, 2 * a + 1, z.im.clone());
        m.set(n, 2 * a, -z.re.clone());
        m.set(n, 2 * a + 1, -z.im.clone());
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub sides: usize,
    pub rank: usize,
    pub kernel_dim: usize,
}

/// Exact rank of the tangent map at the regular `q`-gon.
pub fn rank_at_regular(q_: usize, prec: Precision) -> Result<RankReport, PolygonError> {
    let m = tangent_matrix_scaled(&PolygonChart::regular(q_, prec)?)?;
    let rank = m.rank();
    Ok(RankReport {
        sides: q_,
        rank,
        kernel_dim: m.cols - rank,
    })
}

/// `ψ(ξ) = -P⁻² Σ_α |Z^α| Σ_{β≤α} d|Z^β|(ξ)` with `P = q`; zero-length
/// edges drop out of both sums.
pub fn connection_form(p: &PolygonChart, xi: &[CQ], prec: Precision) -> Result<Q, PolygonError> {
    let d = edge_differentials(p, xi, prec)?;
    let perimeter = q(p.sides() as i64);
    let mut partial = Q::zero();
    let mut total = Q::zero();
    for (z, dz) in p.edges.iter().zip(&d) {
        let Some(dz) = dz else { continue };
        partial += dz;
        total += sqrt_approx(&z.norm_sqr(), prec) * &partial;
    }
    Ok(prec.round(&(-total / (&perimeter * &perimeter))))
}

/// Coefficients of `ϖ = P⁻² Σ_{α<β≤q-1} d|Z^α| ∧ d|Z^β|` on the chart edges,
/// as a skew matrix with `P = q`.
pub fn polygon_two_form(q_: usize) -> Vec<Vec<Q>> {
    let n = q_.saturating_sub(1);
    let c = Q::new(1.into(), ((q_ * q_) as i64).into());
    let mut m = vec![vec![Q::zero(); n]; n];
    for a in 0..n {
        for b in a + 1..n {
            m[a][b] = c.clone();
            m[b][a] = -c.clone();
        }
    }
    m
}

/// `ϖ(ξ, η)` on a chart.
pub fn evaluate_two_form(p: &PolygonChart, xi: &[CQ], eta: &[CQ], prec: Precision) -> Result<Q, PolygonError> {
    let dx = edge_differentials(p, xi, prec)?;
    let de = edge_differentials(p, eta, prec)?;
    let w = polygon_two_form(p.sides());
    let mut acc = Q::zero();
    for a in 0..dx.len() {
        for b in 0..dx.len() {
            if let (Some(x), Some(e)) = (&dx[a], &de[b]) {
                acc += &w[a][b] * x * e;
            }
        }
    }
    Ok(prec.round(&acc))
}

/// True when every edge is a real multiple of one direction.
pub fn is_degenerate(p: &PolygonChart) -> bool {
    let all: Vec<CQ> = p.edges.iter().cloned().chain(std::iter::once(p.closing_edge())).collect();
    all.iter().enumerate().all(|(i, a)| {
        all[i + 1..]
            .iter()
            .all(|b| (&a.im * &b.re - &a.re * &b.im).is_zero())
    })
}

/// Largest absolute entry difference, for approximate comparisons.
pub fn max_abs_diff(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(Q::zero(), |m, d| if d > m { d } else { m })
}
