//! Pólya frequency sequences from generating functions
//! `C x^N e^{γx} Π(1+α_i x) / Π(1-β_i x)`, and the real-rooted polynomial
//! families they induce.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::poly::{self, Bound, Polynomial, RealRoots};
use crate::tnmat::{self, LowerTriMatrix};

/// Finite generating-function data; all parameters nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PFGenFun {
    #[serde(rename = "C", with = "exact::one_str")]
    pub c: Rational,
    #[serde(rename = "N", default)]
    pub shift: usize,
    #[serde(with = "exact::one_str", default = "Rational::zero")]
    pub gamma: Rational,
    #[serde(with = "exact::vec_str", default)]
    pub alphas: Vec<Rational>,
    #[serde(with = "exact::vec_str", default)]
    pub betas: Vec<Rational>,
}

impl PFGenFun {
    pub fn new(c: Rational, shift: usize, gamma: Rational, alphas: Vec<Rational>, betas: Vec<Rational>) -> Result<Self> {
        let f = PFGenFun { c, shift, gamma, alphas, betas };
        f.validate()?;
        Ok(f)
    }

    /// `1 / (1 - x)`
    pub fn geometric() -> Self {
        PFGenFun {
            c: Rational::one(),
            shift: 0,
            gamma: Rational::zero(),
            alphas: vec![],
            betas: vec![Rational::one()],
        }
    }

    /// `e^x`
    pub fn exponential() -> Self {
        PFGenFun {
            c: Rational::one(),
            shift: 0,
            gamma: Rational::one(),
            alphas: vec![],
            betas: vec![],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let neg = |x: &Rational| x.is_negative();
        if neg(&self.c) || neg(&self.gamma) || self.alphas.iter().any(neg) || self.betas.iter().any(neg) {
            return Err(invalid("generating-function parameters must be nonnegative"));
        }
        Ok(())
    }
}

fn convolve(a: &[Rational], b: &[Rational], upto: usize) -> Vec<Rational> {
    (0..=upto)
        .map(|n| (0..=n).map(|k| &a[k] * &b[n - k]).sum())
        .collect()
}

/// `a_0, …, a_upto` of the generating function.
pub fn series_coeffs(f: &PFGenFun, upto: usize) -> Result<Vec<Rational>> {
    f.validate()?;
    let len = upto + 1;
    let mut acc: Vec<Rational> = (0..len).map(|n| if n == 0 { f.c.clone() } else { Rational::zero() }).collect();
    // e^{γx}
    let mut e = vec![Rational::one()];
    for n in 1..len {
        let next = &e[n - 1] * &f.gamma / exact::int(n as i64);
        e.push(next);
    }
    acc = convolve(&acc, &e, upto);
    for a in &f.alphas {
        let fac: Vec<Rational> = (0..len)
            .map(|n| match n {
                0 => Rational::one(),
                1 => a.clone(),
                _ => Rational::zero(),
            })
            .collect();
        acc = convolve(&acc, &fac, upto);
    }
    for b in &f.betas {
        let geo: Vec<Rational> = (0..len).map(|n| exact::pow(b, n as i64)).collect();
        acc = convolve(&acc, &geo, upto);
    }
    let mut out = vec![Rational::zero(); f.shift.min(len)];
    out.extend(acc.into_iter().take(len.saturating_sub(f.shift)));
    Ok(out)
}

/// `r_0 = 1`, `r_n = t Σ_{k<n} a_{n-k} r_k`: the coefficients of
/// `1 / (1 - t(f(x) - a_0))`. No condition on `a_0`.
pub fn series_chain_polys(a: &[Rational], upto: usize) -> Result<Vec<Polynomial>> {
    if a.len() <= upto {
        return Err(invalid(format!("need {} series coefficients", upto + 1)));
    }
    let mut r = vec![Polynomial::one()];
    for n in 1..=upto {
        let s: Polynomial = (0..n).map(|k| r[k].scale(&a[n - k])).sum();
        r.push(s.shift(1));
    }
    Ok(r)
}

/// A real-rooted family with its root-location and interlacing verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCertificate {
    pub polys: Vec<Polynomial>,
    /// Every member real-rooted inside the stated location.
    pub roots_located: bool,
    /// `f_n ≺ f_{n+1}` for every consecutive pair.
    pub consecutive_interlacing: bool,
}

fn certify(polys: Vec<Polynomial>, located: impl Fn(&Polynomial) -> bool) -> Result<FamilyCertificate> {
    let roots_located = polys.iter().all(&located);
    let mut consecutive_interlacing = roots_located;
    if roots_located {
        let rr: Vec<Option<RealRoots>> = polys
            .iter()
            .map(|f| if f.is_zero() { Ok(None) } else { RealRoots::of(f).map(Some) })
            .collect::<Result<_>>()?;
        consecutive_interlacing = rr.windows(2).all(|w| match (&w[0], &w[1]) {
            (Some(a), Some(b)) => poly::interlaces_roots(a, b),
            _ => true,
        });
    }
    Ok(FamilyCertificate { polys, roots_located, consecutive_interlacing })
}

/// The family `r_n(t)` of a PF generating function with `f(0) ≠ 0`; roots
/// are certified to lie in `[-1/f(0), 0]`.
pub fn pft_family(f: &PFGenFun, upto: usize) -> Result<FamilyCertificate> {
    let a = series_coeffs(f, upto.max(1))?;
    if a[0].is_zero() {
        return Err(Error::ShiftRequired);
    }
    let polys = series_chain_polys(&a, upto)?;
    let lo = Bound::Finite(-a[0].recip());
    certify(polys, |p| poly::is_real_rooted_in(p, &lo, &Bound::from(0)))
}

/// Power-series inverse of a polynomial with nonzero constant term.
pub fn series_inverse(q: &Polynomial, upto: usize) -> Result<Vec<Rational>> {
    let q0 = q.coeff(0);
    if q0.is_zero() {
        return Err(invalid("series inverse needs a nonzero constant term"));
    }
    let mut out: Vec<Rational> = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        let mut s = if n == 0 { Rational::one() } else { Rational::zero() };
        for j in 1..=n {
            s -= q.coeff(j) * &out[n - j];
        }
        out.push(s / &q0);
    }
    Ok(out)
}

/// `q_n(t)` from `Σ q_n x^n = 1 / (Q(x) - t x^r)`, for `Q(0) > 0` with only
/// real positive roots and `r ≥ 1`; roots certified real and negative.
pub fn forgacs_tran(q: &Polynomial, r: usize, upto: usize) -> Result<FamilyCertificate> {
    if r == 0 {
        return Err(invalid("r = 0 does not give polynomials"));
    }
    if !q.coeff(0).is_positive() {
        return Err(invalid("Q(0) must be positive"));
    }
    if !poly::is_real_rooted_in(q, &Bound::from(0), &Bound::PosInf) {
        return Err(invalid("Q must have only real positive zeros"));
    }
    let q0 = q.coeff(0);
    let mut qs: Vec<Polynomial> = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        let mut s = if n == 0 { Polynomial::one() } else { Polynomial::zero() };
        if n >= r {
            s = &s + &qs[n - r].shift(1);
        }
        for j in 1..=n {
            let c = q.coeff(j);
            if !c.is_zero() {
                s = &s - &qs[n - j].scale(&c);
            }
        }
        qs.push(s.scale(&q0.recip()));
    }
    certify(qs, |p| {
        p.is_zero() || (!p.coeff(0).is_zero() && poly::is_real_rooted_in(p, &Bound::NegInf, &Bound::from(0)))
    })
}

/// `h(x) = (1-x)^{d+1} Σ_{n≤d} P(n) x^n` truncated to degree `d`, so that
/// `Σ P(n) x^n = h(x)/(1-x)^{d+1}`; PF iff all zeros of `h` are real and `≤ 0`.
pub fn is_pf_polynomial_values(p: &Polynomial) -> Result<(bool, Polynomial)> {
    let d = p.degree().ok_or_else(|| invalid("the zero polynomial has no value sequence"))?;
    let vals = Polynomial::new((0..=d).map(|n| p.eval_int(n as i64)).collect());
    let prod = &vals * &Polynomial::from_ints(&[1, -1]).pow(d + 1);
    let h = Polynomial::new(prod.coeffs().iter().take(d + 1).cloned().collect());
    let ok = poly::is_real_rooted_in(&h, &Bound::NegInf, &Bound::from(0));
    Ok((ok, h))
}

/// The Toeplitz matrix `(a_{i-j})_{i,j=0..N}`, requiring `a_0 = 1`; missing
/// trailing entries are zero.
pub fn toeplitz(a: &[Rational], order: usize) -> Result<LowerTriMatrix> {
    if a.first().is_none_or(|x| !x.is_one()) {
        return Err(invalid("toeplitz needs a_0 = 1"));
    }
    Ok(LowerTriMatrix::from_fn(order, |i, j| a.get(i - j).cloned().unwrap_or_else(Rational::zero)))
}

/// Whether the sequence is PF up to order `N`: its normalized Toeplitz
/// truncation is TN.
pub fn is_pf_up_to(a: &[Rational], order: usize) -> Result<bool> {
    let a0 = a.first().cloned().unwrap_or_else(Rational::zero);
    if !a0.is_positive() {
        return Err(invalid("PF test needs a_0 > 0"));
    }
    let scaled: Vec<Rational> = a.iter().map(|x| x / &a0).collect();
    Ok(tnmat::whitney_reduce(&toeplitz(&scaled, order)?)?.is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn series_examples() {
        let e = series_coeffs(&PFGenFun::exponential(), 3).unwrap();
        assert_eq!(e, vec![int(1), int(1), ratio(1, 2), ratio(1, 6)]);
        assert_eq!(series_coeffs(&PFGenFun::geometric(), 3).unwrap(), vec![int(1); 4]);
        let f = PFGenFun::new(int(1), 1, int(0), vec![int(1), int(1)], vec![]).unwrap();
        assert_eq!(series_coeffs(&f, 5).unwrap(), [0, 1, 2, 1, 0, 0].map(int).to_vec());
    }

    #[test]
    fn pft_examples() {
        let fam = pft_family(&PFGenFun::geometric(), 6).unwrap();
        assert!(fam.roots_located && fam.consecutive_interlacing);
        assert_eq!(fam.polys[0], p(&[1]));
        assert_eq!(fam.polys[4], &Polynomial::t() * &p(&[1, 1]).pow(3));
        let fam = pft_family(&PFGenFun::exponential(), 12).unwrap();
        assert!(fam.roots_located && fam.consecutive_interlacing);
        let shifted = PFGenFun::new(int(1), 1, int(0), vec![], vec![]).unwrap();
        assert_eq!(pft_family(&shifted, 3), Err(Error::ShiftRequired));
    }

    #[test]
    fn forgacs_tran_examples() {
        let fam = forgacs_tran(&p(&[1, -1]), 1, 5).unwrap();
        for (n, q) in fam.polys.iter().enumerate() {
            assert_eq!(q, &p(&[1, 1]).pow(n));
        }
        let fam = forgacs_tran(&p(&[1, -2, 1]), 1, 4).unwrap();
        assert_eq!(fam.polys[2], p(&[3, 4, 1]));
        assert!(fam.roots_located && fam.consecutive_interlacing);
        assert_eq!(forgacs_tran(&p(&[1, -1]), 2, 0).unwrap().polys, vec![p(&[1])]);
        assert!(forgacs_tran(&p(&[1, -1]), 0, 3).is_err());
        assert!(forgacs_tran(&p(&[1, 1]), 1, 3).is_err());
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(is_pf_polynomial_values(&p(&[0, 0, 1])).unwrap(), (true, p(&[0, 1, 1])));
        assert_eq!(is_pf_polynomial_values(&p(&[1])).unwrap(), (true, p(&[1])));
        assert_eq!(is_pf_polynomial_values(&p(&[1, -1, 1])).unwrap(), (false, p(&[1, -2, 3])));
    }

    #[test]
    fn toeplitz_examples() {
        assert!(is_pf_up_to(&vec![int(1); 6], 5).unwrap());
        assert!(is_pf_up_to(&[1, 2, 1, 0, 0, 0].map(int), 5).unwrap());
        assert!(!is_pf_up_to(&[1, 0, 1, 0, 1, 0].map(int), 5).unwrap());
        assert!(toeplitz(&[int(2)], 1).is_err());
    }
}
