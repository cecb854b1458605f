//! Chain polynomials of a unit lower-triangular matrix, the subdivision
//! operator, zeta polynomials, rank-selected Möbius values and flag h-numbers.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::linalg::bareiss_det;
use crate::pfseq;
use crate::poly::{self, moebius_substitute, Bound, Polynomial, RealRoots, RootIsolation};
use crate::tnmat::{self, minor, LowerTriMatrix};

/// `p_0, …, p_N` with `p_0 = 1` and `p_n = t Σ_{k<n} r_{n,k} p_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFamily {
    pub source: LowerTriMatrix,
    pub polys: Vec<Polynomial>,
}

impl ChainFamily {
    pub fn p(&self, n: usize) -> &Polynomial {
        &self.polys[n]
    }
}

fn check_upto(r: &LowerTriMatrix, upto: usize) -> Result<()> {
    if upto > r.order() {
        return Err(Error::DegreeTooLarge { degree: upto, bound: r.order() });
    }
    Ok(())
}

pub fn chain_polynomials(r: &LowerTriMatrix, upto: usize) -> Result<ChainFamily> {
    r.ensure_unit_diagonal()?;
    check_upto(r, upto)?;
    let mut polys = vec![Polynomial::one()];
    for n in 1..=upto {
        let sum: Polynomial = (0..n).map(|k| polys[k].scale(&r.get(n, k))).sum();
        polys.push(sum.shift(1));
    }
    Ok(ChainFamily { source: r.clone(), polys })
}

/// `(-1)^n det(R(t)[{1..n},{0..n-1}])` with `R(t) = I - t(R - I)`.
pub fn chain_poly_det(r: &LowerTriMatrix, n: usize) -> Result<Polynomial> {
    r.ensure_unit_diagonal()?;
    check_upto(r, n)?;
    let neg_t = Polynomial::monomial(-Rational::one(), 1);
    let entry = |i: usize, j: usize| -> Polynomial {
        if i == j {
            Polynomial::one()
        } else {
            neg_t.scale(&r.get(i, j))
        }
    };
    let m: Vec<Vec<Polynomial>> = (1..=n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    let d = bareiss_det(&m);
    Ok(if n % 2 == 1 { -&d } else { d })
}

/// The subdivision operator: the linear map `t^n ↦ p_n`.
pub fn subdivision(r: &LowerTriMatrix, f: &Polynomial) -> Result<Polynomial> {
    let d = f.degree().unwrap_or(0);
    check_upto(r, d)?;
    let fam = chain_polynomials(r, d)?;
    Ok(apply_subdivision(&fam, f))
}

/// `E(f)` for a precomputed family (`deg f` must not exceed the family length).
pub fn apply_subdivision(fam: &ChainFamily, f: &Polynomial) -> Polynomial {
    f.coeffs().iter().enumerate().map(|(n, c)| fam.polys[n].scale(c)).sum()
}

/// Checks `E(t^n) = t E(R_n(t) - t^n)` for every `n` in the family.
pub fn subdivision_self_check(fam: &ChainFamily) -> bool {
    (0..fam.polys.len()).all(|n| {
        if n == 0 {
            return fam.polys[0] == Polynomial::one();
        }
        let rn = &fam.source.row_polynomial(n) - &Polynomial::t_pow(n);
        fam.polys[n] == apply_subdivision(fam, &rn).shift(1)
    })
}

/// Root-location and interlacing verdicts for row `n` of a TN matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterlacingCertificate {
    pub n: usize,
    /// `E(R_{n,k})` for `k = 0..=n`.
    pub polys: Vec<Polynomial>,
    /// Isolating intervals per entry of `polys` (`None` for the zero polynomial).
    pub roots: Vec<Option<RootIsolation>>,
    pub p_n: Polynomial,
    pub p_next: Option<Polynomial>,
    pub roots_in_interval: bool,
    pub sequence_interlacing: bool,
    /// `p_n ≺ p_{n+1}`, absent when `n = N`.
    pub consecutive_interlacing: Option<bool>,
}

impl InterlacingCertificate {
    pub fn passed(&self) -> bool {
        self.roots_in_interval && self.sequence_interlacing && self.consecutive_interlacing != Some(false)
    }
}

/// Builds and checks the certificate for row `n`. A TN input that fails a
/// check is reported as an invariant violation (it cannot happen mathematically).
pub fn interlacing_certificate(r: &LowerTriMatrix, n: usize) -> Result<InterlacingCertificate> {
    let cert = match tnmat::whitney_reduce(r)? {
        Ok(c) => c,
        Err(w) => return Err(Error::NotTotallyNonnegative(w.to_string())),
    };
    check_upto(r, n)?;
    let top = (n + 1).min(r.order());
    let fam = chain_polynomials(r, top)?;
    let out = certify_row(&fam, &cert.rnk[n], n)?;
    if !out.passed() {
        return Err(Error::InvariantViolation(format!("interlacing certificate failed for n = {n}")));
    }
    Ok(out)
}

/// The certificate for every row `0..=N` of a TN matrix, sharing one family.
pub fn interlacing_certificates(r: &LowerTriMatrix) -> Result<Vec<InterlacingCertificate>> {
    let cert = match tnmat::whitney_reduce(r)? {
        Ok(c) => c,
        Err(w) => return Err(Error::NotTotallyNonnegative(w.to_string())),
    };
    let fam = chain_polynomials(r, r.order())?;
    (0..=r.order())
        .map(|n| {
            let out = certify_row(&fam, &cert.rnk[n], n)?;
            if !out.passed() {
                return Err(Error::InvariantViolation(format!("interlacing certificate failed for n = {n}")));
            }
            Ok(out)
        })
        .collect()
}

fn certify_row(fam: &ChainFamily, rnk_row: &[Polynomial], n: usize) -> Result<InterlacingCertificate> {
    let polys: Vec<Polynomial> = rnk_row.iter().map(|f| apply_subdivision(fam, f)).collect();
    let (lo, hi) = (Bound::from(-1), Bound::from(0));
    let roots_in_interval = polys.iter().all(|f| poly::is_real_rooted_in(f, &lo, &hi));
    let (sequence_interlacing, roots) = if roots_in_interval {
        let rr: Vec<Option<RealRoots>> = polys
            .iter()
            .map(|f| if f.is_zero() { Ok(None) } else { RealRoots::of(f).map(Some) })
            .collect::<Result<_>>()?;
        let mut ok = true;
        'outer: for i in 0..rr.len() {
            for j in i + 1..rr.len() {
                if let (Some(a), Some(b)) = (&rr[i], &rr[j]) {
                    if !poly::interlaces_roots(a, b) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        (ok, rr.iter().map(|r| r.as_ref().map(|r| r.isolation())).collect())
    } else {
        (false, vec![None; polys.len()])
    };
    let p_n = fam.polys[n].clone();
    let p_next = fam.polys.get(n + 1).cloned();
    let consecutive_interlacing = match &p_next {
        Some(q) => Some(poly::interlaces(&p_n, q)?),
        None => None,
    };
    Ok(InterlacingCertificate {
        n,
        polys,
        roots,
        p_n,
        p_next,
        roots_in_interval,
        sequence_interlacing,
        consecutive_interlacing,
    })
}

/// The polynomial `P` in `n` with `P(m) = (R^m)_{i,j}` for all `m ≥ 0`.
pub fn zeta_polynomial(r: &LowerTriMatrix, i: usize, j: usize) -> Result<Polynomial> {
    r.ensure_unit_diagonal()?;
    if j > i {
        return Err(invalid(format!("zeta polynomial needs i ≥ j, got ({i},{j})")));
    }
    check_upto(r, i)?;
    // column j of R^m restricted to rows j..=i
    let size = i - j + 1;
    let mut col: Vec<Rational> = (0..size).map(|a| if a == 0 { Rational::one() } else { Rational::zero() }).collect();
    let mut values = Vec::with_capacity(size + 1);
    for _ in 0..=size {
        values.push(col[size - 1].clone());
        col = (0..size)
            .map(|a| (0..=a).map(|b| r.get(j + a, j + b) * &col[b]).sum())
            .collect();
    }
    let xs: Vec<Rational> = (0..size).map(|m| exact::int(m as i64)).collect();
    let p = Polynomial::interpolate(&xs, &values[..size]);
    if p.eval_int(size as i64) != values[size] {
        return Err(Error::InvariantViolation("zeta interpolation does not verify".into()));
    }
    Ok(p)
}

/// `h_i = (1-t)^i p_i(t/(1-t))` and whether its roots are all real and `≤ 0`.
pub fn zeta_is_pf(r: &LowerTriMatrix, i: usize) -> Result<(bool, Polynomial)> {
    let fam = chain_polynomials(r, i)?;
    let h = moebius_substitute(&fam.polys[i], i)?;
    let ok = poly::is_real_rooted_in(&h, &Bound::NegInf, &Bound::from(0));
    Ok((ok, h))
}

fn check_rank_set(s: &[usize], r: &LowerTriMatrix) -> Result<()> {
    if s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("rank set must be strictly increasing"));
    }
    if s.last().is_some_and(|&x| x > r.order()) {
        return Err(Error::DegreeTooLarge { degree: *s.last().unwrap(), bound: r.order() });
    }
    Ok(())
}

/// `μ_S(n) = (-1)^n det R[{s_1..s_n},{s_0..s_{n-1}}]` for `S = {0 = s_0 < s_1 < ⋯}`.
pub fn mobius_rank_selected(r: &LowerTriMatrix, s: &[usize], n: usize) -> Result<Rational> {
    r.ensure_unit_diagonal()?;
    if s.first() != Some(&0) {
        return Err(invalid("the rank set must contain 0"));
    }
    if s.len() <= n {
        return Err(invalid(format!("rank set has no element s_{n}")));
    }
    check_rank_set(&s[..=n], r)?;
    let d = minor(r, &s[1..=n], &s[..n])?;
    Ok(if n % 2 == 1 { -d } else { d })
}

/// `β(S) = det R[{s_1..s_k, n},{0, s_1..s_k}]` for `S ⊆ {1..n-1}`.
pub fn flag_h(r: &LowerTriMatrix, s: &[usize], n: usize) -> Result<Rational> {
    r.ensure_unit_diagonal()?;
    if s.iter().any(|&x| x == 0 || x >= n) {
        return Err(invalid(format!("flag set must lie in 1..{n}")));
    }
    check_rank_set(s, r)?;
    check_upto(r, n)?;
    let mut rows = s.to_vec();
    rows.push(n);
    let mut cols = vec![0];
    cols.extend_from_slice(s);
    minor(r, &rows, &cols)
}

/// Chain polynomials of the Toeplitz up-count matrix `(r_{n-k})`, with the
/// interlacing certificates attached when that matrix is TN.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UphoFamily {
    pub family: ChainFamily,
    pub certificates: Option<Vec<InterlacingCertificate>>,
}

pub fn upho_chain_polynomials(rank_seq: &[Rational], upto: usize) -> Result<UphoFamily> {
    if rank_seq.first().is_none_or(|a| !a.is_one()) {
        return Err(invalid("rank sequence must start with 1"));
    }
    if let Some(i) = rank_seq.iter().position(|a| !a.is_positive()) {
        return Err(invalid(format!("rank sequence entry {i} is not positive")));
    }
    if rank_seq.len() <= upto {
        return Err(invalid(format!("rank sequence needs {} entries", upto + 1)));
    }
    let m = pfseq::toeplitz(rank_seq, upto)?;
    let family = chain_polynomials(&m, upto)?;
    let certificates = match tnmat::whitney_reduce(&m)? {
        Ok(_) => Some(interlacing_certificates(&m)?),
        Err(_) => None,
    };
    Ok(UphoFamily { family, certificates })
}
