use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfaffianError {
    #[error("Pfaffian of an odd-dimensional matrix ({0})")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("dimension {0} exceeds the 64-index limit")]
    TooLarge(usize),
}

/// Pfaffian of the principal submatrix of a skew matrix on `indices`.
pub struct PfaffianCache<'a> {
    b: &'a [Vec<i64>],
    memo: HashMap<u64, BigInt>,
}

impl<'a> PfaffianCache<'a> {
    pub fn new(b: &'a [Vec<i64>]) -> Result<Self, PfaffianError> {
        let n = b.len();
        if n > 64 {
            return Err(PfaffianError::TooLarge(n));
        }
        if !(0..n).all(|i| b[i].len() == n && (0..n).all(|j| b[i][j] == -b[j][i])) {
            return Err(PfaffianError::NotSkew);
        }
        Ok(PfaffianCache { b, memo: HashMap::new() })
    }

    pub fn of_subset(&mut self, mask: u64) -> Result<BigInt, PfaffianError> {
        let k = mask.count_ones() as usize;
        if k % 2 == 1 {
            return Err(PfaffianError::OddDimension(k));
        }
        Ok(self.eval(mask))
    }

    /// Expansion along the lowest index: `Pf = Σ_k (-1)^(k+1) b[s0][sk] Pf(rest)`.
    fn eval(&mut self, mask: u64) -> BigInt {
        if mask == 0 {
            return BigInt::one();
        }
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << i);
        let mut acc = BigInt::zero();
        let mut sign = 1i64;
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            let bij = self.b[i][j];
            if bij != 0 {
                let sub = self.eval(rest & !(1u64 << j));
                acc += sub * BigInt::from(sign * bij);
            }
            sign = -sign;
        }
        self.memo.insert(mask, acc.clone());
        acc
    }
}

pub fn pfaffian(b: &[Vec<i64>]) -> Result<BigInt, PfaffianError> {
    let n = b.len();
    if n % 2 == 1 {
        return Err(PfaffianError::OddDimension(n));
    }
    let mut cache = PfaffianCache::new(b)?;
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    cache.of_subset(mask)
}
