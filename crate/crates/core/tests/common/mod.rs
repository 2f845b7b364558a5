//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use dt_regge::measure::{incidence_matrix, total_form};
use dt_regge::RibbonGraph;

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------- exterior algebra

/// Forms as `mask -> coefficient` over generators `e_0..e_{n-1}`.
pub type Form = HashMap<u64, BigInt>;

fn wedge_sign(s: u64, t: u64) -> i64 {
    let mut inv = 0u32;
    let mut rest = t;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inv += (s >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn wedge(a: &Form, b: &Form) -> Form {
    let mut out = Form::new();
    for (&s, x) in a {
        for (&t, y) in b {
            if s & t != 0 {
                continue;
            }
            *out.entry(s | t).or_insert_with(BigInt::zero) += x * y * BigInt::from(wedge_sign(s, t));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn two_form(b: &[Vec<i64>]) -> Form {
    let mut f = Form::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if b[i][j] != 0 {
                f.insert((1 << i) | (1 << j), BigInt::from(b[i][j]));
            }
        }
    }
    f
}

fn one_form(coeffs: &[i64]) -> Form {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (1u64 << i, BigInt::from(c)))
        .collect()
}

fn unit() -> Form {
    Form::from([(0u64, BigInt::one())])
}

fn power(f: &Form, k: usize) -> Form {
    (0..k).fold(unit(), |acc, _| wedge(&acc, f))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// `Pf(B)` as the top coefficient of `ω^m / m!`.
pub fn wedge_pfaffian(b: &[Vec<i64>]) -> BigInt {
    let n = b.len();
    if n % 2 == 1 {
        return BigInt::zero();
    }
    let top = power(&two_form(b), n / 2);
    top.get(&((1u64 << n) - 1)).cloned().unwrap_or_default() / factorial(n / 2)
}

/// Top coefficient of `dη_1 ∧ … ∧ dη_{N0} ∧ Ω^D`.
pub fn wedge_kontsevich(g: &RibbonGraph) -> BigInt {
    let a = incidence_matrix(g);
    let omega = total_form(g);
    let n1 = g.edge_count();
    let d = (n1 - g.boundary_count()) / 2;
    let mut acc = unit();
    for row in &a.matrix {
        acc = wedge(&acc, &one_form(row));
    }
    acc = wedge(&acc, &power(&two_form(&omega.entries), d));
    acc.get(&((1u64 << n1) - 1)).cloned().unwrap_or_default()
}

// ---------------------------------------------------------------- hand-parametrized volumes

fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return qi(1);
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<Q>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let s = if j % 2 == 0 { qi(1) } else { qi(-1) };
            s * &m[0][j] * det(&minor)
        })
        .fold(Q::zero(), |a, b| a + b)
}

/// Solve `m x = b` by Cramer's rule.
fn cramer(m: &[Vec<Q>], b: &[Q]) -> Vec<Q> {
    let d = det(m);
    (0..m.len())
        .map(|j| {
            let mj: Vec<Vec<Q>> = m
                .iter()
                .zip(b)
                .map(|(r, bi)| r.iter().enumerate().map(|(c, x)| if c == j { bi.clone() } else { x.clone() }).collect())
                .collect();
            det(&mj) / &d
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `∫ δ(A L - b) dL` over `L ≥ 0` for polytopes of dimension at most 2:
/// solve for a basic set of columns, then take the exact area of the
/// feasible polygon in the two free coordinates.
pub fn hand_volume(a: &[Vec<i64>], b: &[Q]) -> Q {
    let rows = a.len();
    let cols = a[0].len();
    let am: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
    // Drop dependent rows.
    let mut keep: Vec<usize> = Vec::new();
    for r in 0..rows {
        let mut trial = keep.clone();
        trial.push(r);
        if subsets(cols, trial.len()).iter().any(|s| {
            let m: Vec<Vec<Q>> = trial.iter().map(|&i| s.iter().map(|&j| am[i][j].clone()).collect()).collect();
            !det(&m).is_zero()
        }) {
            keep = trial;
        }
    }
    let k = keep.len();
    let free_dim = cols - k;
    assert!(free_dim <= 2, "hand oracle covers dimension <= 2");
    let basis = subsets(cols, k)
        .into_iter()
        .find(|s| {
            let m: Vec<Vec<Q>> = keep.iter().map(|&i| s.iter().map(|&j| am[i][j].clone()).collect()).collect();
            !det(&m).is_zero()
        })
        .unwrap();
    let free: Vec<usize> = (0..cols).filter(|c| !basis.contains(c)).collect();
    let ab: Vec<Vec<Q>> = keep.iter().map(|&i| basis.iter().map(|&j| am[i][j].clone()).collect()).collect();
    let jac = det(&ab).abs();
    let bk: Vec<Q> = keep.iter().map(|&i| b[i].clone()).collect();
    // Every coordinate as an affine function c0 + c·x of the free coordinates.
    let base = cramer(&ab, &bk);
    let mut affine: Vec<(Q, Vec<Q>)> = vec![(Q::zero(), vec![Q::zero(); free_dim]); cols];
    for (t, &f) in free.iter().enumerate() {
        affine[f].1[t] = qi(1);
    }
    for (i, &bc) in basis.iter().enumerate() {
        affine[bc].0 = base[i].clone();
    }
    for (t, &f) in free.iter().enumerate() {
        let rhs: Vec<Q> = keep.iter().map(|&i| -&am[i][f]).collect();
        let sol = cramer(&ab, &rhs);
        for (i, &bc) in basis.iter().enumerate() {
            affine[bc].1[t] = sol[i].clone();
        }
    }
    let feasible = |x: &[Q]| {
        affine.iter().all(|(c0, c)| {
            let v = c.iter().zip(x).fold(c0.clone(), |acc, (ci, xi)| acc + ci * xi);
            !v.is_negative()
        })
    };
    match free_dim {
        0 => {
            if feasible(&[]) {
                qi(1) / jac
            } else {
                Q::zero()
            }
        }
        1 => {
            let mut pts: Vec<Q> = affine
                .iter()
                .filter(|(_, c)| !c[0].is_zero())
                .map(|(c0, c)| -c0 / &c[0])
                .filter(|x| feasible(std::slice::from_ref(x)))
                .collect();
            pts.sort();
            match (pts.first(), pts.last()) {
                (Some(lo), Some(hi)) => (hi - lo) / jac,
                _ => Q::zero(),
            }
        }
        _ => {
            let mut pts: Vec<(Q, Q)> = Vec::new();
            for i in 0..cols {
                for j in i + 1..cols {
                    let (c0, c) = &affine[i];
                    let (d0, d) = &affine[j];
                    let m = vec![c.clone(), d.clone()];
                    if det(&m).is_zero() {
                        continue;
                    }
                    let x = cramer(&m, &[-c0, -d0]);
                    if feasible(&x) {
                        let p = (x[0].clone(), x[1].clone());
                        if !pts.contains(&p) {
                            pts.push(p);
                        }
                    }
                }
            }
            if pts.len() < 3 {
                return Q::zero();
            }
            // Sort around the centroid by exact half-plane/cross-product order.
            let n = qi(pts.len() as i64);
            let cx = pts.iter().fold(Q::zero(), |a, p| a + &p.0) / &n;
            let cy = pts.iter().fold(Q::zero(), |a, p| a + &p.1) / &n;
            let half = |p: &(Q, Q)| {
                let (dx, dy) = (&p.0 - &cx, &p.1 - &cy);
                if dy.is_positive() || (dy.is_zero() && dx.is_positive()) {
                    0
                } else {
                    1
                }
            };
            pts.sort_by(|p, r| {
                half(p).cmp(&half(r)).then_with(|| {
                    let cross = (&p.0 - &cx) * (&r.1 - &cy) - (&p.1 - &cy) * (&r.0 - &cx);
                    Q::zero().cmp(&cross)
                })
            });
            let mut twice = Q::zero();
            for i in 0..pts.len() {
                let (p, r) = (&pts[i], &pts[(i + 1) % pts.len()]);
                twice += &p.0 * &r.1 - &p.1 * &r.0;
            }
            twice.abs() / qi(2) / jac
        }
    }
}

