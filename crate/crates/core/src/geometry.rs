//! Metric dictionary between a Regge triangulation and its barycentric dual.
//!
//! Around a vertex `k` the star is split open into a fan of `q` triangles
//! `Δ_α = (O, V_α, V_{α+1})` with spokes `l_α = |O V_α|` and links
//! `l_{α,α+1} = |V_α V_{α+1}|`, indices cyclic. All relations are rational in
//! squared lengths, which are the primitive inputs here.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::numeric::qsqrt3::{QSqrt3, QSqrt3Matrix};
use crate::numeric::rational::{frac, q, to_f64, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("a fan needs at least two triangles, got {0}")]
    TooFewTriangles(usize),
    #[error("{spokes} spokes but {links} links")]
    LengthMismatch { spokes: usize, links: usize },
    #[error("triangle {0} of the fan is degenerate or violates the triangle inequality")]
    DegenerateTriangle(usize),
    #[error("squared lengths must be positive")]
    NonPositiveLength,
}

/// The split-open star of a vertex, by squared edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerFan {
    spokes_sq: Vec<Q>,
    links_sq: Vec<Q>,
}

impl CornerFan {
    /// `spokes_sq[α] = l_α²`, `links_sq[α] = l_{α,α+1}²`.
    pub fn new(spokes_sq: Vec<Q>, links_sq: Vec<Q>) -> Result<Self, GeometryError> {
        let n = spokes_sq.len();
        if n < 2 {
            return Err(GeometryError::TooFewTriangles(n));
        }
        if links_sq.len() != n {
            return Err(GeometryError::LengthMismatch {
                spokes: n,
                links: links_sq.len(),
            });
        }
        if spokes_sq.iter().chain(&links_sq).any(|x| !x.is_positive()) {
            return Err(GeometryError::NonPositiveLength);
        }
        let fan = CornerFan { spokes_sq, links_sq };
        for a in 0..n {
            if !fan.triangle_is_proper(a) {
                return Err(GeometryError::DegenerateTriangle(a));
            }
        }
        Ok(fan)
    }

    /// Equilateral fan of `q` triangles with edge length `a` (given as `a²`).
    pub fn equilateral(q_: usize, a_sq: Q) -> Result<Self, GeometryError> {
        CornerFan::new(vec![a_sq.clone(); q_], vec![a_sq; q_])
    }

    pub fn len(&self) -> usize {
        self.spokes_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spokes_sq.is_empty()
    }

    pub fn spoke_sq(&self, a: usize) -> &Q {
        &self.spokes_sq[a % self.len()]
    }

    pub fn link_sq(&self, a: usize) -> &Q {
        &self.links_sq[a % self.len()]
    }

    /// Strict triangle inequality for triangle `a`, via Heron's form
    /// `16·Area² = 2(xy + yz + zx) - (x² + y² + z²)` on squared sides.
    fn triangle_is_proper(&self, a: usize) -> bool {
        let (x, y, z) = (self.spoke_sq(a), self.spoke_sq(a + 1), self.link_sq(a));
        let s = q(2) * (x * y + y * z + z * x) - (x * x + y * y + z * z);
        s.is_positive()
    }
}

/// Squared dual half-edge lengths per corner, exactly.
///
/// For triangle `α`: `plus[α] = (L⁺_α)²`, the barycenter of `Δ_α` to the midpoint
/// of `O V_{α+1}`; `minus[α] = (L⁻_α)²`, the barycenter of `Δ_{α+1}` to the same
/// midpoint; `link[α] = (L⁻_{α,α+1})²`, the barycenter of `Δ_α` to the midpoint
/// of the link edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualLengths {
    pub plus_sq: Vec<Q>,
    pub minus_sq: Vec<Q>,
    pub link_sq: Vec<Q>,
}

impl DualLengths {
    /// `L_α = L⁻_α + L⁺_α`, the full dual edge crossing spoke `α + 1`.
    pub fn dual_edge(&self, a: usize) -> f64 {
        to_f64(&self.minus_sq[a]).sqrt() + to_f64(&self.plus_sq[a]).sqrt()
    }

    pub fn plus(&self, a: usize) -> f64 {
        to_f64(&self.plus_sq[a]).sqrt()
    }

    pub fn minus(&self, a: usize) -> f64 {
        to_f64(&self.minus_sq[a]).sqrt()
    }

    pub fn link(&self, a: usize) -> f64 {
        to_f64(&self.link_sq[a]).sqrt()
    }

    /// Perimeter of the dual polygon, `Σ_α L_α`.
    pub fn perimeter(&self) -> f64 {
        (0..self.plus_sq.len()).map(|a| self.dual_edge(a)).sum()
    }
}

pub fn half_edge_lengths(fan: &CornerFan) -> Result<DualLengths, GeometryError> {
    let n = fan.len();
    let by36 = |x: Q| x / q(36);
    let two = q(2);
    let mut out = DualLengths {
        plus_sq: Vec::with_capacity(n),
        minus_sq: Vec::with_capacity(n),
        link_sq: Vec::with_capacity(n),
    };
    for a in 0..n {
        let plus = by36(&two * fan.spoke_sq(a) + &two * fan.link_sq(a) - fan.spoke_sq(a + 1));
        let minus = by36(&two * fan.spoke_sq(a + 2) + &two * fan.link_sq(a + 1) - fan.spoke_sq(a + 1));
        let link = by36(&two * fan.spoke_sq(a) + &two * fan.spoke_sq(a + 1) - fan.link_sq(a));
        if !plus.is_positive() || !link.is_positive() {
            return Err(GeometryError::DegenerateTriangle(a));
        }
        if !minus.is_positive() {
            return Err(GeometryError::DegenerateTriangle((a + 1) % n));
        }
        out.plus_sq.push(plus);
        out.minus_sq.push(minus);
        out.link_sq.push(link);
    }
    Ok(out)
}

/// Deficit angle `2π - Σ θ_{α,α+1}` at the fan's center, in radians.
pub fn vertex_deficit(fan: &CornerFan) -> f64 {
    let total: f64 = (0..fan.len())
        .map(|a| {
            let x = to_f64(fan.spoke_sq(a));
            let y = to_f64(fan.spoke_sq(a + 1));
            let z = to_f64(fan.link_sq(a));
            let cos = (x + y - z) / (2.0 * (x * y).sqrt());
            cos.clamp(-1.0, 1.0).acos()
        })
        .sum();
    2.0 * std::f64::consts::PI - total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianCheck {
    pub residual: Q,
    pub pass: bool,
}

/// `Σ_α [(L⁻_{α-1})² - (L⁺_α)²] = 0`, exactly on squared lengths.
pub fn median_identity_check(d: &DualLengths) -> MedianCheck {
    let n = d.plus_sq.len();
    let residual = (0..n).fold(Q::zero(), |acc, a| {
        acc + &d.minus_sq[(a + n - 1) % n] - &d.plus_sq[a]
    });
    MedianCheck {
        pass: residual.is_zero(),
        residual,
    }
}

/// `1/(3√3) = √3/9`.
fn inv_three_sqrt3() -> QSqrt3 {
    QSqrt3::new(Q::zero(), frac(1, 9))
}

/// Per-corner linearization at the equilateral point, rows
/// `(dL⁺_α, dL⁻_{α-1}, dL⁻_{α,α+1})`, columns `(dl_α, dl_{α+1}, dl_{α,α+1})`.
pub fn linearized_map_at_equilateral() -> QSqrt3Matrix {
    let c = inv_three_sqrt3();
    let h = frac(-1, 2);
    let raw = [
        [q(1), h.clone(), q(1)],
        [h.clone(), q(1), q(1)],
        [q(1), q(1), h],
    ];
    QSqrt3Matrix::from_rows(
        raw.iter()
            .map(|row| row.iter().map(|x| c.scale(x)).collect())
            .collect(),
    )
}

/// Jacobian of the full dual edges `L_α = L⁻_α + L⁺_α` at the equilateral fan,
/// as a `q × 2q` matrix over columns `(dl_1..dl_q, dl_{1,2}..dl_{q,1})`.
///
/// Row `α` reads `(1/(3√3))[dl_α - dl_{α+1} + dl_{α+2} + dl_{α,α+1} + dl_{α+1,α+2}]`.
/// Entries are returned as rational multiples of `1/(3√3)`.
pub fn dual_edge_jacobian(q_: usize) -> Vec<Vec<Q>> {
    let mut rows = vec![vec![Q::zero(); 2 * q_]; q_];
    for (a, row) in rows.iter_mut().enumerate() {
        // dL⁺_α from triangle α.
        row[a] += q(1);
        row[(a + 1) % q_] += frac(-1, 2);
        row[q_ + a] += q(1);
        // dL⁻_α from triangle α + 1.
        row[(a + 2) % q_] += q(1);
        row[(a + 1) % q_] += frac(-1, 2);
        row[q_ + (a + 1) % q_] += q(1);
    }
    rows
}

/// Per-vertex Jacobian of all half-edges `(dL⁺_α, dL⁻_{α-1}, dL⁻_{α,α+1})` for
/// `α = 1..q` against `(dl_1..dl_q, dl_{1,2}..dl_{q,1})`, assembled from the
/// corner matrix.
pub fn assembled_jacobian(q_: usize) -> Vec<Vec<QSqrt3>> {
    let corner = linearized_map_at_equilateral();
    let mut rows = vec![vec![QSqrt3::zero(); 2 * q_]; 3 * q_];
    for a in 0..q_ {
        let cols = [a, (a + 1) % q_, q_ + a];
        for r in 0..3 {
            for (c, &col) in cols.iter().enumerate() {
                rows[3 * a + r][col] = &rows[3 * a + r][col] + corner.get(r, c);
            }
        }
    }
    rows
}
