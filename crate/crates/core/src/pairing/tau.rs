//! Intersection numbers `⟨τ_{d_1} … τ_{d_n}⟩_g` on the moduli space of curves.
//!
//! Genus 0 uses the multinomial closed form, genus 1 reduces by the string and
//! dilaton equations to `⟨τ_1⟩_1 = 1/24`. Higher genus needs the `dvv` feature.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::numeric::rational::{factorial, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TauError {
    #[error("genus {0} needs the DVV recursion (build with the `dvv` feature and enable it)")]
    UnsupportedGenus(u32),
    #[error("no stable moduli space for genus {g} with {n} points")]
    Unstable { g: u32, n: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TauOptions {
    /// Allow genus >= 2 through the DVV recursion (requires the `dvv` feature).
    pub enable_dvv: bool,
}

fn on_shell(g: u32, d: &[u32]) -> bool {
    let s: i64 = d.iter().map(|&x| x as i64).sum();
    s == d.len() as i64 + 3 * g as i64 - 3
}

fn stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// `⟨τ_d⟩_0 = (n-3)! / ∏ d_i!` on shell.
pub fn genus0_closed_form(d: &[u32]) -> Q {
    if d.len() < 3 || !on_shell(0, d) {
        return Q::zero();
    }
    let den = d.iter().fold(num_bigint::BigInt::one(), |acc, &x| acc * factorial(x));
    Q::new(factorial(d.len() as u32 - 3), den)
}

fn sorted_key(d: &[u32]) -> Vec<u32> {
    let mut k = d.to_vec();
    k.sort_unstable();
    k
}

/// String equation: `⟨τ_0 ∏ τ_{d_i}⟩ = Σ_j ⟨τ_{d_j - 1} ∏_{i≠j} τ_{d_i}⟩`.
fn string_step(rest: &[u32], mut eval: impl FnMut(&[u32]) -> Q) -> Q {
    let mut acc = Q::zero();
    for j in 0..rest.len() {
        if rest[j] == 0 {
            continue;
        }
        let mut v = rest.to_vec();
        v[j] -= 1;
        acc += eval(&v);
    }
    acc
}

/// Genus-0 evaluation by repeated string reduction to `⟨τ_0^3⟩_0 = 1`.
pub fn genus0_by_string(d: &[u32]) -> Q {
    fn go(d: Vec<u32>, memo: &mut HashMap<Vec<u32>, Q>) -> Q {
        if d.len() < 3 || !on_shell(0, &d) {
            return Q::zero();
        }
        if d.len() == 3 {
            return Q::one();
        }
        if let Some(v) = memo.get(&d) {
            return v.clone();
        }
        let i = d.iter().position(|&x| x == 0).expect("on-shell genus 0 with n > 3 has a τ_0");
        let mut rest = d.clone();
        rest.remove(i);
        let v = string_step(&rest, |v| go(sorted_key(v), memo));
        memo.insert(d, v.clone());
        v
    }
    go(sorted_key(d), &mut HashMap::new())
}

/// Genus-1 evaluation by string and dilaton reduction to `⟨τ_1⟩_1 = 1/24`.
pub fn genus1(d: &[u32]) -> Q {
    fn go(d: Vec<u32>, memo: &mut HashMap<Vec<u32>, Q>) -> Q {
        if d.is_empty() || !on_shell(1, &d) {
            return Q::zero();
        }
        if d == [1] {
            return Q::new(1.into(), 24.into());
        }
        if let Some(v) = memo.get(&d) {
            return v.clone();
        }
        let v = if let Some(i) = d.iter().position(|&x| x == 0) {
            let mut rest = d.clone();
            rest.remove(i);
            string_step(&rest, |v| go(sorted_key(v), memo))
        } else {
            // on shell with every d_i >= 1 forces all d_i = 1: dilaton
            let i = d.iter().position(|&x| x == 1).expect("on-shell genus 1 has a τ_1");
            let mut rest = d.clone();
            rest.remove(i);
            q(rest.len() as i64) * go(rest, memo)
        };
        memo.insert(d, v.clone());
        v
    }
    go(sorted_key(d), &mut HashMap::new())
}

pub fn intersection_number(g: u32, d: &[u32], opts: TauOptions) -> Result<Q, TauError> {
    if !on_shell(g, d) {
        return Ok(Q::zero());
    }
    if !stable(g, d.len()) {
        return Err(TauError::Unstable { g, n: d.len() });
    }
    match g {
        0 => Ok(genus0_closed_form(d)),
        1 => Ok(genus1(d)),
        _ if opts.enable_dvv => dvv_or_error(g, d),
        _ => Err(TauError::UnsupportedGenus(g)),
    }
}

#[cfg(feature = "dvv")]
fn dvv_or_error(g: u32, d: &[u32]) -> Result<Q, TauError> {
    Ok(dvv::intersection(g, d))
}

#[cfg(not(feature = "dvv"))]
fn dvv_or_error(g: u32, _d: &[u32]) -> Result<Q, TauError> {
    Err(TauError::UnsupportedGenus(g))
}

#[cfg(feature = "dvv")]
pub mod dvv {
    //! Dijkgraaf–Verlinde–Verlinde recursion in Witten's normalization.
    use super::*;

    fn double_factorial_odd(k: i64) -> Q {
        // (2m+1)!! with (-1)!! = 1
        let mut acc = num_bigint::BigInt::one();
        let mut x = k;
        while x > 1 {
            acc *= x;
            x -= 2;
        }
        Q::from_integer(acc)
    }

    pub fn intersection(g: u32, d: &[u32]) -> Q {
        let mut memo = HashMap::new();
        eval(g, sorted_key(d), &mut memo)
    }

    fn eval(g: u32, d: Vec<u32>, memo: &mut HashMap<(u32, Vec<u32>), Q>) -> Q {
        if !on_shell(g, &d) || !stable(g, d.len()) {
            return Q::zero();
        }
        if g == 0 && d.len() == 3 {
            return Q::one();
        }
        if g == 1 && d == [1] {
            return Q::new(1.into(), 24.into());
        }
        let key = (g, d.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let v = if let Some(i) = d.iter().position(|&x| x == 0) {
            let mut rest = d.clone();
            rest.remove(i);
            string_step(&rest, |v| eval(g, sorted_key(v), memo))
        } else {
            // pull out the largest exponent as τ_{k+1}
            let top = *d.last().expect("nonempty");
            let k = top as i64 - 1;
            let rest: Vec<u32> = d[..d.len() - 1].to_vec();
            let mut acc = Q::zero();
            for j in 0..rest.len() {
                let dj = rest[j] as i64;
                let mut v = rest.clone();
                v[j] = (dj + k) as u32;
                let coef = double_factorial_odd(2 * k + 2 * dj + 1) / double_factorial_odd(2 * dj - 1);
                acc += coef * eval(g, sorted_key(&v), memo);
            }
            let half = Q::new(1.into(), 2.into());
            for a in 0..k {
                let b = k - 1 - a;
                let coef = double_factorial_odd(2 * a + 1) * double_factorial_odd(2 * b + 1) * &half;
                if g > 0 {
                    let mut v = rest.clone();
                    v.push(a as u32);
                    v.push(b as u32);
                    acc += &coef * eval(g - 1, sorted_key(&v), memo);
                }
                let n = rest.len();
                for mask in 0..(1u64 << n) {
                    let (mut left, mut right) = (vec![a as u32], vec![b as u32]);
                    for (i, &x) in rest.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            left.push(x);
                        } else {
                            right.push(x);
                        }
                    }
                    for g1 in 0..=g {
                        let l = eval(g1, sorted_key(&left), memo);
                        if l.is_zero() {
                            continue;
                        }
                        acc += &coef * l * eval(g - g1, sorted_key(&right), memo);
                    }
                }
            }
            acc / double_factorial_odd(2 * k + 3)
        };
        memo.insert(key, v.clone());
        v
    }
}

/// All `δ` with `Σ δ_i = total`, in lexicographic order.
pub fn exponent_vectors(n: usize, total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn go(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=left {
            cur.push(x);
            go(n, left - x, cur, out);
            cur.pop();
        }
    }
    go(n, total, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `F_g(q) = Σ_{Σδ = N0+3g-3} ∏ q_i^{2δ_i}/δ_i! ⟨τ_δ⟩_g`, in units `u = 1`.
pub fn generating_f(g: u32, q_: &[u32], opts: TauOptions) -> Result<Q, TauError> {
    let n = q_.len();
    let total = n as i64 + 3 * g as i64 - 3;
    if total < 0 {
        return Err(TauError::Unstable { g, n });
    }
    let mut acc = Q::zero();
    for delta in exponent_vectors(n, total as u32) {
        let tau = intersection_number(g, &delta, opts)?;
        if tau.is_zero() {
            continue;
        }
        let weight = q_.iter().zip(&delta).fold(Q::one(), |w, (&qi, &di)| {
            w * Q::from_integer(num_bigint::BigInt::from(qi).pow(2 * di)) / Q::from_integer(factorial(di))
        });
        acc += weight * tau;
    }
    Ok(acc)
}
