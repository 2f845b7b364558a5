use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::forms::total_form;
use super::incidence::incidence_matrix;
use super::pfaffian::{PfaffianCache, PfaffianError};
use crate::numeric::matrix::int_determinant;
use crate::numeric::rational::factorial;
use crate::ribbon::{canonical_code, code_hex, genus, RibbonGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KontsevichError {
    #[error("2D + N0 = {lhs} does not match N1 = {edges}")]
    DimensionMismatch { lhs: usize, edges: usize },
    #[error(transparent)]
    Pfaffian(#[from] PfaffianError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KontsevichReport {
    pub graph: String,
    /// Coefficient of `dL_1 ∧ … ∧ dL_{N1}` in `∏ dη(k) ∧ Ω^D`.
    #[serde(with = "crate::io::serde_bigint")]
    pub coefficient: BigInt,
    /// `2^(2N0+5g-5) · D!`.
    #[serde(with = "crate::io::serde_bigint")]
    pub expected: BigInt,
    /// Same coefficient against `Ω^D / D!`, i.e. `coefficient / D!`.
    #[serde(with = "crate::io::serde_bigint")]
    pub normalized: BigInt,
    pub pass: bool,
}

/// Sign of the permutation listing `subset` (ascending) followed by its complement.
fn shuffle_sign(subset: &[usize]) -> i64 {
    let inversions: usize = subset.iter().enumerate().map(|(i, &s)| s - i).sum();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

/// `(D, Σ_S sign(S)·det(A[:,S])·Pf(B[Sᶜ]))`, the coefficient against `Ω^D / D!`.
fn pfaffian_sum(g: &RibbonGraph) -> Result<(usize, BigInt), KontsevichError> {
    let a = incidence_matrix(g);
    let b = total_form(g);
    let n0 = a.rows();
    let n1 = a.cols();
    let gen = genus(g) as usize;
    let d = 3 * gen + n0 - 3;
    if 2 * d + n0 != n1 {
        return Err(KontsevichError::DimensionMismatch { lhs: 2 * d + n0, edges: n1 });
    }
    let mut cache = PfaffianCache::new(&b.entries)?;
    let full: u64 = (1u64 << n1) - 1;
    let mut total = BigInt::zero();
    let mut err = None;
    for_each_subset(n1, n0, &mut |s| {
        let minor: Vec<Vec<BigInt>> = a
            .matrix
            .iter()
            .map(|row| s.iter().map(|&j| BigInt::from(row[j])).collect())
            .collect();
        let det = int_determinant(&minor);
        if det.is_zero() {
            return;
        }
        let mask = s.iter().fold(full, |m, &j| m & !(1u64 << j));
        match cache.of_subset(mask) {
            Ok(pf) => total += det * pf * BigInt::from(shuffle_sign(s)),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok((d, total))
}

pub fn kontsevich_coefficient(g: &RibbonGraph) -> Result<BigInt, KontsevichError> {
    let (d, s) = pfaffian_sum(g)?;
    Ok(s * factorial(d as u32))
}

pub fn expected_coefficient(genus: u32, n0: usize) -> BigInt {
    let d = 3 * genus as usize + n0 - 3;
    let exp = 2 * n0 + 5 * genus as usize - 5;
    (BigInt::one() << exp) * factorial(d as u32)
}

pub fn kontsevich_check(g: &RibbonGraph) -> Result<KontsevichReport, KontsevichError> {
    let (d, normalized) = pfaffian_sum(g)?;
    let coefficient = &normalized * factorial(d as u32);
    let expected = expected_coefficient(genus(g), g.boundary_count());
    Ok(KontsevichReport {
        graph: code_hex(&canonical_code(g)),
        pass: coefficient.abs() == expected,
        coefficient,
        expected,
        normalized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::fixtures;

    #[test]
    fn anchors() {
        for (g, want) in [(fixtures::theta_sphere(), 2), (fixtures::theta_torus(), 4), (fixtures::k4(), 8)] {
            let r = kontsevich_check(&g).unwrap();
            assert_eq!(r.coefficient.abs(), BigInt::from(want));
            assert!(r.pass);
        }
    }

    #[test]
    fn shuffle_signs() {
        assert_eq!(shuffle_sign(&[0, 1]), 1);
        assert_eq!(shuffle_sign(&[1]), -1);
        assert_eq!(shuffle_sign(&[2]), 1);
        assert_eq!(shuffle_sign(&[1, 3]), -1);
        assert_eq!(shuffle_sign(&[0, 2]), -1);
    }
}
