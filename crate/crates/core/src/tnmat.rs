//! Unit lower-triangular matrices: total nonnegativity, Whitney reduction to
//! the weight array `λ`, the resolving polynomials `R_{n,k}` and reconstruction.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat;
use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::linalg::bareiss_det;
use crate::poly::Polynomial;

/// Default largest order `N` accepted by [`is_tn_bruteforce`].
pub const DEFAULT_MINOR_CAP: usize = 8;

/// A lower-triangular matrix `(r_{n,k})_{0≤k≤n≤N}` stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LowerTriMatrix {
    rows: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    #[serde(rename = "N")]
    n: usize,
    #[serde(with = "exact::rows_str")]
    rows: Vec<Vec<Rational>>,
}

impl Serialize for LowerTriMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { n: self.order(), rows: self.rows.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LowerTriMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.rows.len() != raw.n + 1 {
            return Err(serde::de::Error::custom(format!(
                "N = {} but {} rows given",
                raw.n,
                raw.rows.len()
            )));
        }
        LowerTriMatrix::from_rows(raw.rows).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for LowerTriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(exact::format).collect()).collect();
        write!(f, "LowerTriMatrix{rows:?}")
    }
}

impl LowerTriMatrix {
    /// Rows must have lengths `1, 2, ..., N+1`. The diagonal is not checked;
    /// see [`LowerTriMatrix::new`].
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("a matrix needs at least one row"));
        }
        for (n, r) in rows.iter().enumerate() {
            if r.len() != n + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "row {n} has {} entries, expected {}",
                    r.len(),
                    n + 1
                )));
            }
        }
        Ok(LowerTriMatrix { rows })
    }

    /// Like [`LowerTriMatrix::from_rows`] but also requires a unit diagonal.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = Self::from_rows(rows)?;
        m.ensure_unit_diagonal()?;
        Ok(m)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| exact::int(x)).collect()).collect())
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |n, k| if n == k { Rational::one() } else { Rational::zero() })
    }

    pub fn pascal(order: usize) -> Self {
        Self::from_fn(order, |n, k| exact::big(&combinat::binomial(n, k)))
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        LowerTriMatrix {
            rows: (0..=order).map(|n| (0..=n).map(|k| f(n, k)).collect()).collect(),
        }
    }

    /// The truncation order `N` (the matrix is `(N+1) × (N+1)`).
    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    /// `r_{n,k}`, zero above the diagonal.
    pub fn get(&self, n: usize, k: usize) -> Rational {
        if k > n {
            Rational::zero()
        } else {
            self.rows[n][k].clone()
        }
    }

    pub fn is_unit_diagonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(n, r)| r[n].is_one())
    }

    pub fn ensure_unit_diagonal(&self) -> Result<()> {
        match self.rows.iter().enumerate().find(|(n, r)| !r[*n].is_one()) {
            Some((row, _)) => Err(Error::NonUnitDiagonal { row }),
            None => Ok(()),
        }
    }

    /// Row generating polynomial `R_n(t) = Σ_k r_{n,k} t^k`.
    pub fn row_polynomial(&self, n: usize) -> Polynomial {
        Polynomial::new(self.rows[n].clone())
    }

    /// Leading principal truncation to order `order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(invalid(format!("cannot truncate order {} to {order}", self.order())));
        }
        Ok(LowerTriMatrix { rows: self.rows[..=order].to_vec() })
    }

    /// `R[S,S]` for a strictly increasing index list.
    pub fn principal_submatrix(&self, s: &[usize]) -> Result<Self> {
        check_indices(s, self.size())?;
        if s.is_empty() {
            return Err(invalid("empty index set"));
        }
        Ok(LowerTriMatrix {
            rows: s
                .iter()
                .enumerate()
                .map(|(i, &a)| s[..=i].iter().map(|&b| self.get(a, b)).collect())
                .collect(),
        })
    }

    /// Full square form, for determinant work.
    pub fn dense(&self) -> Vec<Vec<Rational>> {
        let n = self.size();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }
}

fn check_indices(idx: &[usize], bound: usize) -> Result<()> {
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DimensionMismatch("indices must be strictly increasing".into()));
    }
    if idx.last().is_some_and(|&i| i >= bound) {
        return Err(Error::DimensionMismatch(format!("index out of range for a {bound}×{bound} matrix")));
    }
    Ok(())
}

/// `det R[rows, cols]` by fraction-free elimination.
pub fn minor(r: &LowerTriMatrix, rows: &[usize], cols: &[usize]) -> Result<Rational> {
    if rows.len() != cols.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but {} columns selected",
            rows.len(),
            cols.len()
        )));
    }
    check_indices(rows, r.size())?;
    check_indices(cols, r.size())?;
    let sub: Vec<Vec<Rational>> = rows.iter().map(|&i| cols.iter().map(|&j| r.get(i, j)).collect()).collect();
    Ok(bareiss_det(&sub))
}

/// Total nonnegativity by checking every minor. Exponential; an oracle only.
pub fn is_tn_bruteforce(r: &LowerTriMatrix, cap: usize) -> Result<bool> {
    if r.order() > cap {
        return Err(Error::CapExceeded {
            what: "matrix order",
            value: r.order() as u128,
            cap: cap as u128,
            hint: "use whitney_reduce for large matrices",
        });
    }
    let n = r.size();
    for k in 1..=n {
        let subsets = combinat::subsets_of_size(n, k);
        for rows in &subsets {
            for cols in &subsets {
                // a row index below its column partner forces a zero block
                if rows.iter().zip(cols).any(|(a, b)| a < b) {
                    continue;
                }
                if minor(r, rows, cols)?.is_negative() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The resolution data of a TN matrix: weights `λ_{n,k}` (`0 ≤ k ≤ n < N`)
/// and polynomials `R_{n,k}(t)` (`0 ≤ k ≤ n ≤ N`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionCertificate {
    #[serde(with = "exact::rows_str")]
    pub lambda: Vec<Vec<Rational>>,
    pub rnk: Vec<Vec<Polynomial>>,
}

impl ResolutionCertificate {
    /// Build `R_{n,k}` from `λ` via `R_{n,n} = t^n`,
    /// `R_{n+1,k} = R_{n+1,k+1} + λ_{n,k} R_{n,k}`.
    pub fn from_lambda(lambda: Vec<Vec<Rational>>) -> Result<Self> {
        for (n, row) in lambda.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::DimensionMismatch(format!("λ row {n} has {} entries", row.len())));
            }
            if let Some(k) = row.iter().position(|x| x.is_negative()) {
                return Err(invalid(format!("λ_{{{n},{k}}} is negative")));
            }
        }
        let order = lambda.len();
        let mut rnk: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one()]];
        for n in 0..order {
            let mut next = vec![Polynomial::zero(); n + 2];
            next[n + 1] = Polynomial::t_pow(n + 1);
            for k in (0..=n).rev() {
                next[k] = &next[k + 1] + &rnk[n][k].scale(&lambda[n][k]);
            }
            rnk.push(next);
        }
        Ok(ResolutionCertificate { lambda, rnk })
    }

    pub fn order(&self) -> usize {
        self.lambda.len()
    }

    /// `λ_{n,k} = 0` implies `λ_{n+1,k} = 0`.
    pub fn is_normalized(&self) -> bool {
        self.lambda
            .windows(2)
            .all(|w| w[0].iter().enumerate().all(|(k, x)| !x.is_zero() || w[1][k].is_zero()))
    }

    pub fn lambda_at(&self, n: usize, k: usize) -> &Rational {
        &self.lambda[n][k]
    }

    pub fn r(&self, n: usize, k: usize) -> &Polynomial {
        &self.rnk[n][k]
    }

    /// The diagonal operator weights `α_{i,k} = λ_{k+i-1,k}` (`1 ≤ i ≤ N`),
    /// returned with `i` shifted to start at index 0.
    pub fn alpha(&self) -> Vec<Vec<Rational>> {
        let order = self.order();
        (1..=order)
            .map(|i| (0..=order - i).map(|k| self.lambda[k + i - 1][k].clone()).collect())
            .collect()
    }
}

/// The first violated condition found by the Whitney reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WhitneyFailure {
    /// The first column of the depth-`depth` deflated matrix has a negative entry.
    NegativeEntry {
        depth: usize,
        row: usize,
        #[serde(with = "exact::one_str")]
        value: Rational,
    },
    /// A nonzero first-column entry below the first zero.
    ZeroPattern {
        depth: usize,
        first_zero: usize,
        row: usize,
        #[serde(with = "exact::one_str")]
        value: Rational,
    },
}

impl fmt::Display for WhitneyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = |depth: usize| if depth == 0 { "entry" } else { "deflated entry" };
        match self {
            WhitneyFailure::NegativeEntry { depth, row, value } => {
                write!(f, "{} ({row},0) = {}", prefix(*depth), exact::format(value))?;
                if *depth > 0 {
                    write!(f, " at reduction depth {depth}")?;
                }
                Ok(())
            }
            WhitneyFailure::ZeroPattern { depth, first_zero, row, value } => write!(
                f,
                "{} ({row},0) = {} is nonzero below the zero at ({first_zero},0){}",
                prefix(*depth),
                exact::format(value),
                if *depth > 0 { format!(" at reduction depth {depth}") } else { String::new() }
            ),
        }
    }
}

/// Whitney reduction. Returns the unique normalized resolution of a TN matrix,
/// or the first failing condition.
pub fn whitney_reduce(r: &LowerTriMatrix) -> Result<std::result::Result<ResolutionCertificate, WhitneyFailure>> {
    r.ensure_unit_diagonal()?;
    let order = r.order();
    let mut lambda: Vec<Vec<Rational>> = (0..order).map(|n| vec![Rational::zero(); n + 1]).collect();
    let mut cur: Vec<Vec<Rational>> = r.rows.clone();
    for depth in 0..order {
        let size = cur.len(); // order of cur is size - 1 = order - depth
        let col: Vec<&Rational> = cur.iter().map(|row| &row[0]).collect();
        let first_zero = (1..size).find(|&j| col[j].is_zero());
        let m = first_zero.map_or(size - 1, |z| z - 1);
        for (n, v) in col.iter().enumerate().take(m + 1) {
            if v.is_negative() {
                return Ok(Err(WhitneyFailure::NegativeEntry { depth, row: n, value: (*v).clone() }));
            }
        }
        if let Some(z) = first_zero {
            if let Some(j) = (z + 1..size).find(|&j| !col[j].is_zero()) {
                return Ok(Err(WhitneyFailure::ZeroPattern {
                    depth,
                    first_zero: z,
                    row: j,
                    value: col[j].clone(),
                }));
            }
        }
        let mu: Vec<Rational> = (0..size - 1)
            .map(|n| if n < m { col[n + 1] / col[n] } else { Rational::zero() })
            .collect();
        for (n, x) in mu.iter().enumerate() {
            lambda[n + depth][depth] = x.clone();
        }
        let next: Vec<Vec<Rational>> = (0..size - 1)
            .map(|n| (0..=n).map(|k| &cur[n + 1][k + 1] - &mu[n] * get(&cur, n, k + 1)).collect())
            .collect();
        cur = next;
    }
    let cert = ResolutionCertificate::from_lambda(lambda)?;
    for n in 0..=order {
        if cert.rnk[n][0] != r.row_polynomial(n) {
            return Err(Error::InvariantViolation(format!("R_{{{n},0}} differs from row {n}")));
        }
    }
    Ok(Ok(cert))
}

fn get(rows: &[Vec<Rational>], n: usize, k: usize) -> Rational {
    if k > n {
        Rational::zero()
    } else {
        rows[n][k].clone()
    }
}

/// `R` from its resolution: the rows are the coefficient lists of `R_{n,0}`.
pub fn reconstruct(cert: &ResolutionCertificate) -> Result<LowerTriMatrix> {
    let fresh = ResolutionCertificate::from_lambda(cert.lambda.clone())?;
    if !cert.rnk.is_empty() && cert.rnk != fresh.rnk {
        return Err(invalid("certificate polynomials do not match its λ array"));
    }
    let rows = fresh
        .rnk
        .iter()
        .enumerate()
        .map(|(n, row)| (0..=n).map(|k| row[0].coeff(k)).collect())
        .collect();
    LowerTriMatrix::new(rows)
}

/// `r_{n,k} = e_{n-k}(x_1, …, x_n)`, `0 ≤ n ≤ len(xs)`: row polynomial
/// `(t+x_1)⋯(t+x_n)`.
pub fn elementary_symmetric_matrix(xs: &[Rational]) -> Result<LowerTriMatrix> {
    if let Some(i) = xs.iter().position(|x| x.is_negative()) {
        return Err(invalid(format!("x_{} is negative", i + 1)));
    }
    let mut rows = vec![vec![Rational::one()]];
    let mut poly = Polynomial::one();
    for x in xs {
        poly = &poly * &Polynomial::linear(x.clone());
        let d = poly.degree().unwrap();
        rows.push((0..=d).map(|k| poly.coeff(k)).collect());
    }
    LowerTriMatrix::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn bad() -> LowerTriMatrix {
        LowerTriMatrix::from_ints(&[&[1], &[1, 1], &[3, 1, 1]]).unwrap()
    }

    #[test]
    fn minors() {
        let p = LowerTriMatrix::pascal(3);
        assert_eq!(minor(&p, &[1, 3], &[0, 1]).unwrap(), int(2));
        assert_eq!(minor(&p, &[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap(), int(1));
        assert_eq!(minor(&bad(), &[1, 2], &[0, 1]).unwrap(), int(-2));
        assert!(minor(&p, &[1, 0], &[0, 1]).is_err());
        assert!(minor(&p, &[1], &[0, 1]).is_err());
    }

    #[test]
    fn brute_force_tn() {
        assert!(is_tn_bruteforce(&LowerTriMatrix::pascal(4), 8).unwrap());
        assert!(!is_tn_bruteforce(&bad(), 8).unwrap());
        assert!(is_tn_bruteforce(&LowerTriMatrix::identity(4), 8).unwrap());
        assert!(matches!(is_tn_bruteforce(&LowerTriMatrix::pascal(9), 8), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn pascal_reduces_to_ones() {
        let cert = whitney_reduce(&LowerTriMatrix::pascal(5)).unwrap().unwrap();
        assert!(cert.lambda.iter().flatten().all(|x| x.is_one()));
        let expect = &Polynomial::t() * &Polynomial::from_ints(&[1, 1]);
        assert_eq!(cert.r(2, 1), &expect);
    }

    #[test]
    fn constant_column_example() {
        // r_{n,k} = x_k for k < n with x = (1, 2, 3, ...)
        let m = LowerTriMatrix::from_fn(5, |n, k| if n == k { int(1) } else { int(k as i64 + 1) });
        let cert = whitney_reduce(&m).unwrap().unwrap();
        for n in 0..5 {
            for k in 0..=n {
                let expect = if k == 0 {
                    int(1)
                } else if k < n {
                    int(0)
                } else {
                    int(n as i64) // x_n - 1
                };
                assert_eq!(cert.lambda[n][k], expect, "λ_({n},{k})");
            }
        }
        // R_{n,k} = t^n + (x_{n-1} - 1) t^{n-1} for 1 ≤ k ≤ n-1
        assert_eq!(cert.r(4, 2), &Polynomial::from_ints(&[0, 0, 0, 3, 1]));
    }

    #[test]
    fn failure_witness() {
        let f = whitney_reduce(&bad()).unwrap().unwrap_err();
        assert_eq!(f, WhitneyFailure::NegativeEntry { depth: 1, row: 1, value: int(-2) });
        assert!(f.to_string().starts_with("deflated entry (1,0) = -2"));
        let z = LowerTriMatrix::from_ints(&[&[1], &[0, 1], &[1, 0, 1]]).unwrap();
        assert!(matches!(whitney_reduce(&z).unwrap().unwrap_err(), WhitneyFailure::ZeroPattern { row: 2, .. }));
    }

    #[test]
    fn reconstruction() {
        let ones: Vec<Vec<Rational>> = (0..4).map(|n| vec![int(1); n + 1]).collect();
        let cert = ResolutionCertificate::from_lambda(ones).unwrap();
        assert_eq!(reconstruct(&cert).unwrap(), LowerTriMatrix::pascal(4));
        let zeros: Vec<Vec<Rational>> = (0..4).map(|n| vec![int(0); n + 1]).collect();
        let cert = ResolutionCertificate::from_lambda(zeros).unwrap();
        assert_eq!(reconstruct(&cert).unwrap(), LowerTriMatrix::identity(4));
        let q: Vec<Vec<Rational>> = (0..2).map(|n| (0..=n).map(|k| int(1 << k)).collect()).collect();
        let m = reconstruct(&ResolutionCertificate::from_lambda(q).unwrap()).unwrap();
        assert_eq!(m, LowerTriMatrix::from_ints(&[&[1], &[1, 1], &[1, 3, 1]]).unwrap());
    }

    #[test]
    fn elementary_symmetric() {
        let ones = elementary_symmetric_matrix(&[int(1), int(1), int(1)]).unwrap();
        assert_eq!(ones, LowerTriMatrix::pascal(3));
        assert_eq!(elementary_symmetric_matrix(&[int(0), int(0)]).unwrap(), LowerTriMatrix::identity(2));
        let xs = [int(1), int(2), int(5)];
        let m = elementary_symmetric_matrix(&xs).unwrap();
        assert_eq!(m.row(2), &[int(2), int(3), int(1)]);
        let cert = whitney_reduce(&m).unwrap().unwrap();
        // R_{n,k} = t^k (t+x_1)⋯(t+x_{n-k})
        let expect = &Polynomial::t() * &(&Polynomial::linear(int(1)) * &Polynomial::linear(int(2)));
        assert_eq!(cert.r(3, 1), &expect);
        assert!(elementary_symmetric_matrix(&[int(-1)]).is_err());
    }

    #[test]
    fn json_shape() {
        let m = LowerTriMatrix::from_ints(&[&[1], &[2, 1]]).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"N":1,"rows":[["1"],["2","1"]]}"#);
        let back: LowerTriMatrix = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<LowerTriMatrix>(r#"{"N":2,"rows":[["1"],["2","1"]]}"#).is_err());
    }
}
