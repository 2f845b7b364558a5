//! Exact rationals and rational approximations of irrational reals.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Q = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Machine form of an exact rational: `"p/q"`, or `"p"` when integral.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err())?;
    let d = BigInt::from_str(d).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Q::new(n, d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Number of decimal digits carried by rational approximations of reals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision(pub u32);

impl Default for Precision {
    fn default() -> Self {
        Precision(50)
    }
}

impl Precision {
    fn guard(self) -> u32 {
        self.0 + 10
    }

    /// 10^-(digits + guard), the rounding grid for intermediate values.
    fn epsilon(self) -> Q {
        Q::new(BigInt::one(), BigInt::from(10).pow(self.guard()))
    }

    pub fn round(self, x: &Q) -> Q {
        let scale = BigInt::from(10).pow(self.guard());
        let scaled = x * Q::from_integer(scale.clone());
        Q::new(scaled.round().to_integer(), scale)
    }
}

/// Square root of a nonnegative rational, correct to the requested precision.
pub fn sqrt_approx(x: &Q, prec: Precision) -> Q {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return Q::zero();
    }
    let eps = prec.epsilon();
    let mut y = Q::from_float(to_f64(x).sqrt()).unwrap_or_else(Q::one);
    if y.is_zero() {
        y = Q::one();
    }
    let two = q(2);
    loop {
        let next = prec.round(&((&y + x / &y) / &two));
        if (&next - &y).abs() <= eps {
            return next;
        }
        y = next;
    }
}

/// Exact integer square root when `x` is a perfect square of a rational.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

fn arctan_inverse(k: i64, prec: Precision) -> Q {
    // arctan(1/k) by its alternating series.
    let eps = prec.epsilon();
    let x = frac(1, k);
    let x2 = &x * &x;
    let mut term = x.clone();
    let mut sum = Q::zero();
    let mut n = 0i64;
    loop {
        let t = &term / q(2 * n + 1);
        if t.abs() < eps {
            return prec.round(&sum);
        }
        if n.is_even() {
            sum += t;
        } else {
            sum -= t;
        }
        term = prec.round(&(&term * &x2));
        n += 1;
    }
}

pub fn pi_approx(prec: Precision) -> Q {
    // Machin: pi/4 = 4 arctan(1/5) - arctan(1/239).
    let pi = (arctan_inverse(5, prec) * q(4) - arctan_inverse(239, prec)) * q(4);
    prec.round(&pi)
}

/// `(cos θ, sin θ)` for θ = 2π·num/den, as rational approximations.
pub fn cos_sin_turn(num: i64, den: i64, prec: Precision) -> (Q, Q) {
    let r = num.rem_euclid(den);
    // Exact values on the quarter turns keep symmetric charts exact where possible.
    if (4 * r) % den == 0 {
        return match 4 * r / den {
            0 => (q(1), q(0)),
            1 => (q(0), q(1)),
            2 => (q(-1), q(0)),
            _ => (q(0), q(-1)),
        };
    }
    let theta = pi_approx(prec) * frac(2 * r, den);
    let eps = prec.epsilon();
    let mut cos = Q::zero();
    let mut sin = Q::zero();
    let mut term = Q::one();
    let mut k = 0i64;
    loop {
        // term = θ^k / k!
        if term.abs() < eps && k > 2 {
            break;
        }
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
        term = prec.round(&(&term * &theta / q(k)));
    }
    (prec.round(&cos), prec.round(&sin))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}
