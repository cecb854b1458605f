//! Change-of-variable and change-of-basis maps.

use num_traits::One;

use super::Polynomial;
use crate::combinat;
use crate::error::{invalid, Result};
use crate::exact::{self, Rational};

/// `(1-t)^d f(t/(1-t))`, requiring `deg f <= d`.
pub fn moebius_substitute(f: &Polynomial, d: usize) -> Result<Polynomial> {
    weighted_binomial_sum(f, d, -1)
}

/// `(1+t)^d h(t/(1+t))`, the inverse of [`moebius_substitute`] at the same `d`.
pub fn moebius_unsubstitute(h: &Polynomial, d: usize) -> Result<Polynomial> {
    weighted_binomial_sum(h, d, 1)
}

/// `Σ c_i t^i (1 + s t)^{d-i}` for `s = ±1`.
fn weighted_binomial_sum(f: &Polynomial, d: usize, s: i64) -> Result<Polynomial> {
    if let Some(deg) = f.degree() {
        if deg > d {
            return Err(invalid(format!("degree {deg} exceeds the substitution degree {d}")));
        }
    }
    let base = Polynomial::new(vec![Rational::one(), exact::int(s)]);
    let mut out = Polynomial::zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        out = &out + &base.pow(d - i).shift(i).scale(c);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `(t)_k ↦ t^k`
    Forward,
    /// `t^k ↦ (t)_k`
    Inverse,
}

/// `(t)_k = t(t-1)⋯(t-k+1)`
pub fn falling_factorial(k: usize) -> Polynomial {
    (0..k).fold(Polynomial::one(), |acc, j| &acc * &Polynomial::linear(exact::int(-(j as i64))))
}

/// The Stirling operator `S` and its inverse.
pub fn falling_transform(f: &Polynomial, direction: Direction) -> Polynomial {
    let Some(d) = f.degree() else {
        return Polynomial::zero();
    };
    let mut out = vec![Rational::from_integer(0.into()); d + 1];
    match direction {
        Direction::Forward => {
            // t^n = Σ_k S(n,k) (t)_k
            let s2 = combinat::stirling2_table(d);
            for (n, c) in f.coeffs().iter().enumerate() {
                for (k, s) in s2[n].iter().enumerate() {
                    out[k] += c * exact::big(s);
                }
            }
        }
        Direction::Inverse => {
            // (t)_k = Σ_j s(k,j) t^j
            let s1 = combinat::stirling1_signed_table(d);
            for (k, c) in f.coeffs().iter().enumerate() {
                for (j, s) in s1[k].iter().enumerate() {
                    out[j] += c * exact::big(s);
                }
            }
        }
    }
    Polynomial::new(out)
}
