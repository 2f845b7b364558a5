//! The quadratic field ℚ[√3], elements `a + b√3` with rational `a`, `b`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{format_q, q, to_f64, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub rational: Q,
    pub surd: Q,
}

impl QSqrt3 {
    pub fn new(rational: Q, surd: Q) -> Self {
        QSqrt3 { rational, surd }
    }

    pub fn from_q(x: Q) -> Self {
        QSqrt3::new(x, Q::zero())
    }

    pub fn sqrt3() -> Self {
        QSqrt3::new(Q::zero(), Q::one())
    }

    pub fn zero() -> Self {
        QSqrt3::from_q(Q::zero())
    }

    pub fn one() -> Self {
        QSqrt3::from_q(Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    /// Galois conjugate `a - b√3`.
    pub fn conjugate(&self) -> Self {
        QSqrt3::new(self.rational.clone(), -self.surd.clone())
    }

    /// Field norm `a² - 3b²`, nonzero for every nonzero element since √3 is irrational.
    pub fn norm(&self) -> Q {
        &self.rational * &self.rational - q(3) * &self.surd * &self.surd
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(QSqrt3::new(c.rational / &n, c.surd / &n))
    }

    pub fn scale(&self, k: &Q) -> Self {
        QSqrt3::new(&self.rational * k, &self.surd * k)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.rational) + to_f64(&self.surd) * 3f64.sqrt()
    }
}

impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.surd.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", format_q(&self.rational)),
            (true, false) => write!(f, "({})*sqrt(3)", format_q(&self.surd)),
            (false, false) => write!(
                f,
                "{} + ({})*sqrt(3)",
                format_q(&self.rational),
                format_q(&self.surd)
            ),
        }
    }
}

impl Add for QSqrt3 {
    type Output = QSqrt3;
    fn add(self, rhs: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.rational + rhs.rational, self.surd + rhs.surd)
    }
}

impl<'a> Add<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn add(self, rhs: &QSqrt3) -> QSqrt3 {
        QSqrt3::new(&self.rational + &rhs.rational, &self.surd + &rhs.surd)
    }
}

impl Sub for QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, rhs: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.rational - rhs.rational, self.surd - rhs.surd)
    }
}

impl<'a> Sub<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, rhs: &QSqrt3) -> QSqrt3 {
        QSqrt3::new(&self.rational - &rhs.rational, &self.surd - &rhs.surd)
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3::new(-self.rational, -self.surd)
    }
}

impl<'a> Mul<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, rhs: &QSqrt3) -> QSqrt3 {
        QSqrt3::new(
            &self.rational * &rhs.rational + q(3) * &self.surd * &rhs.surd,
            &self.rational * &rhs.surd + &self.surd * &rhs.rational,
        )
    }
}

impl Mul for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, rhs: QSqrt3) -> QSqrt3 {
        &self * &rhs
    }
}

/// Dense square matrix over ℚ[√3].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSqrt3Matrix {
    pub n: usize,
    pub entries: Vec<QSqrt3>,
}

impl QSqrt3Matrix {
    pub fn from_rows(rows: Vec<Vec<QSqrt3>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        QSqrt3Matrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![QSqrt3::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = QSqrt3::one();
        }
        QSqrt3Matrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &QSqrt3 {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &QSqrt3Matrix) -> QSqrt3Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = QSqrt3::zero();
                for k in 0..n {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                entries.push(acc);
            }
        }
        QSqrt3Matrix { n, entries }
    }

    /// Gauss–Jordan elimination; returns `(determinant, inverse)`.
    fn eliminate(&self) -> (QSqrt3, Option<QSqrt3Matrix>) {
        let n = self.n;
        let mut a: Vec<Vec<QSqrt3>> = (0..n)
            .map(|i| self.entries[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut inv = QSqrt3Matrix::identity(n);
        let mut inv_rows: Vec<Vec<QSqrt3>> = (0..n)
            .map(|i| inv.entries[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut det = QSqrt3::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return (QSqrt3::zero(), None);
            };
            if pivot != col {
                a.swap(pivot, col);
                inv_rows.swap(pivot, col);
                det = -det;
            }
            det = &det * &a[col][col];
            let p_inv = a[col][col].inverse().expect("nonzero pivot");
            for j in 0..n {
                a[col][j] = &a[col][j] * &p_inv;
                inv_rows[col][j] = &inv_rows[col][j] * &p_inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &t;
                    let t = &f * &inv_rows[col][j];
                    inv_rows[r][j] = &inv_rows[r][j] - &t;
                }
            }
        }
        inv.entries = inv_rows.into_iter().flatten().collect();
        (det, Some(inv))
    }

    pub fn determinant(&self) -> QSqrt3 {
        self.eliminate().0
    }

    pub fn inverse(&self) -> Option<QSqrt3Matrix> {
        self.eliminate().1
    }
}
