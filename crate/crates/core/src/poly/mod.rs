//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree with no trailing zeros; the zero
//! polynomial is the empty coefficient list. All arithmetic is exact.

mod roots;
mod transform;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exact::{self, Rational};

pub use roots::{
    interlaces, interlaces_roots, is_interlacing_sequence, is_real_rooted_in, isolate_roots, sturm_count, Bound,
    IsolatedRoot, RealRoots, RootInterval, RootIsolation,
};
pub use transform::{falling_factorial, falling_transform, moebius_substitute, moebius_unsubstitute, Direction};

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "RawPolynomial")]
pub struct Polynomial {
    #[serde(with = "exact::vec_str")]
    coeffs: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawPolynomial {
    #[serde(with = "exact::vec_str")]
    coeffs: Vec<Rational>,
}

impl From<RawPolynomial> for Polynomial {
    fn from(raw: RawPolynomial) -> Self {
        Polynomial::new(raw.coeffs)
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c t^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `t^k`
    pub fn t_pow(k: usize) -> Self {
        Self::monomial(Rational::one(), k)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| exact::int(c)).collect())
    }

    /// `t + c`
    pub fn linear(c: Rational) -> Self {
        Self::new(vec![c, Rational::one()])
    }

    /// Monic polynomial with the given roots (with repetition).
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear(-r.clone()))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Multiplicity of the root `0`, i.e. the largest `k` with `t^k | f`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&exact::int(x))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `t^k f(t)`
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// `f(t) / t^k`, requiring exact divisibility.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(invalid(format!("t^{k} does not divide {self}")));
        }
        Ok(Self::new(self.coeffs.iter().skip(k).cloned().collect()))
    }

    /// `f(c t)`
    pub fn scale_var(&self, c: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Self::new(out)
    }

    /// `f(g(t))` by Horner's rule.
    pub fn compose(&self, g: &Polynomial) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * exact::int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.leading().recip();
        self.scale(&lc)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient when `d` divides `self` exactly, otherwise `None`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic square-free part `f / gcd(f, f')`.
    pub fn squarefree(&self) -> Polynomial {
        if self.degree().unwrap_or(0) == 0 {
            return if self.is_zero() { Self::zero() } else { Self::one() };
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Yun's square-free decomposition: monic pairwise coprime `s_1, s_2, ...`
    /// with `f = c * s_1 * s_2^2 * s_3^3 * ...`. Entry `i` holds `s_{i+1}`.
    pub fn squarefree_decomposition(&self) -> Vec<Polynomial> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = df.div_exact(&a0).unwrap();
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_exact(&a).unwrap();
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_exact(&a).unwrap();
            d = &c - &b.derivative();
        }
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    /// Lagrange interpolation through `(xs[i], ys[i])` with distinct `xs`.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Self {
        let mut out = Self::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::one();
            let mut denom = Rational::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    basis = &basis * &Self::linear(-xj.clone());
                    denom *= xi - xj;
                }
            }
            out = &out + &basis.scale(&(yi / denom));
        }
        out
    }

    /// Reverse the coefficient list relative to degree `d`: `t^d f(1/t)`.
    pub fn reversed(&self, d: usize) -> Result<Self> {
        match self.degree() {
            None => Ok(Self::zero()),
            Some(deg) if deg > d => Err(invalid(format!("degree {deg} exceeds {d}"))),
            Some(_) => {
                let mut c = self.coeffs.clone();
                c.resize(d + 1, Rational::zero());
                c.reverse();
                Ok(Self::new(c))
            }
        }
    }

    /// Clears denominators and content: a primitive integer multiple with
    /// positive leading coefficient. Root structure is unchanged.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut l = num_bigint::BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<num_bigint::BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * exact::big(&l)).to_integer())
            .collect();
        let mut g = num_bigint::BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let body = match (i, abs.is_one()) {
                (0, _) => exact::format(&abs),
                (_, true) => String::new(),
                (_, false) if exact::is_integer(&abs) => exact::format(&abs),
                (_, false) => format!("{}*", exact::format(&abs)),
            };
            write!(f, "{body}")?;
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::zero(), |a, b| &a + &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn display_ascending() {
        assert_eq!(p(&[0, 1, 6, 6]).to_string(), "t+6t^2+6t^3");
        assert_eq!(p(&[1, -1]).to_string(), "1-t");
        assert_eq!(Polynomial::new(vec![ratio(1, 2), int(0), ratio(-3, 4)]).to_string(), "1/2-3/4*t^2");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn division_and_gcd() {
        let f = p(&[0, 1, 1]); // t(1+t)
        let g = p(&[1, 2, 1]); // (1+t)^2
        assert_eq!(f.gcd(&g), p(&[1, 1]));
        let (q, r) = p(&[1, 0, 0, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[1, -1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[1, 0, 1]).div_rem(&p(&[0, 1])).1, p(&[1]));
    }

    #[test]
    fn yun_decomposition() {
        // t^3 (t+1)^2 (t-2)
        let f = &(&Polynomial::t_pow(3) * &p(&[1, 1]).pow(2)) * &p(&[-2, 1]);
        let parts = f.squarefree_decomposition();
        assert_eq!(parts, vec![p(&[-2, 1]), p(&[1, 1]), p(&[0, 1])]);
        assert_eq!(f.squarefree(), p(&[0, -2, -1, 1]));
    }

    #[test]
    fn composition_and_scaling() {
        let f = p(&[1, 1, 1]);
        assert_eq!(f.compose(&p(&[1, 1])), p(&[3, 3, 1]));
        assert_eq!(f.scale_var(&int(2)), p(&[1, 2, 4]));
        assert_eq!(p(&[0, 0, 3]).unshift(2).unwrap(), p(&[3]));
        assert!(p(&[1, 0, 3]).unshift(1).is_err());
    }

    #[test]
    fn interpolation() {
        let xs: Vec<Rational> = (0..4).map(int).collect();
        let ys: Vec<Rational> = (0..4).map(|x| int(x * x - x + 1)).collect();
        assert_eq!(Polynomial::interpolate(&xs, &ys), p(&[1, -1, 1]));
    }

    #[test]
    fn primitive_keeps_roots() {
        let f = Polynomial::new(vec![ratio(-1, 2), ratio(-3, 4)]);
        assert_eq!(f.primitive(), p(&[2, 3]));
    }

    #[test]
    fn serde_shape() {
        let f = Polynomial::new(vec![int(1), ratio(1, 2)]);
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(js, r#"{"coeffs":["1","1/2"]}"#);
        let back: Polynomial = serde_json::from_str(r#"{"coeffs":["1","1/2", 0]}"#).unwrap();
        assert_eq!(back, f);
    }
}
