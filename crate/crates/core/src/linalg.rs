//! Exact linear algebra: fraction-free determinants over any exact ring and
//! rational linear solves with a uniqueness verdict.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::poly::Polynomial;

/// A commutative ring with exact division by known divisors.
pub trait ExactRing: Clone {
    fn additive_identity() -> Self;
    fn multiplicative_identity() -> Self;
    fn is_additive_identity(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / o`, where `o` is known to divide `self`.
    fn div_exact(&self, o: &Self) -> Self;
}

impl ExactRing for Rational {
    fn additive_identity() -> Self {
        Zero::zero()
    }
    fn multiplicative_identity() -> Self {
        One::one()
    }
    fn is_additive_identity(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactRing for Polynomial {
    fn additive_identity() -> Self {
        Polynomial::zero()
    }
    fn multiplicative_identity() -> Self {
        Polynomial::one()
    }
    fn is_additive_identity(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        Polynomial::div_exact(self, o).expect("Bareiss quotient is exact")
    }
}

/// Determinant of a square matrix by Bareiss fraction-free elimination.
/// The empty matrix has determinant one.
pub fn bareiss_det<T: ExactRing>(m: &[Vec<T>]) -> T {
    let n = m.len();
    if n == 0 {
        return T::multiplicative_identity();
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = T::multiplicative_identity();
    for k in 0..n - 1 {
        if a[k][k].is_additive_identity() {
            match (k + 1..n).find(|&i| !a[i][k].is_additive_identity()) {
                Some(i) => {
                    a.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return T::additive_identity(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionStatus {
    Unique,
    NonUnique,
    NotExpandable,
}

/// Outcome of solving `A x = b`. For `non_unique` the reported solution sets
/// every free variable to zero; for `not_expandable` it is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub status: ExpansionStatus,
    pub values: Vec<Rational>,
}

/// Solve `A x = b` for an `m × n` rational matrix by exact row reduction.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for x in aug[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=n {
                    let v = &f * &aug[r][j];
                    aug[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if aug[r..].iter().any(|row| !row[n].is_zero()) {
        return Solution { status: ExpansionStatus::NotExpandable, values: Vec::new() };
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    let status = if pivots.len() == n { ExpansionStatus::Unique } else { ExpansionStatus::NonUnique };
    Solution { status, values: x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn naive_det(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 0 {
            return int(1);
        }
        let mut acc = int(0);
        for j in 0..n {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * naive_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn determinants_agree_with_cofactor_expansion() {
        let m = mat(&[&[0, 2, 1, 3], &[1, 0, 4, 1], &[2, 5, 0, 0], &[1, 1, 1, 7]]);
        assert_eq!(bareiss_det(&m), naive_det(&m));
        assert_eq!(bareiss_det(&mat(&[&[1, 1], &[3, 1]])), int(-2));
        assert_eq!(bareiss_det(&mat(&[&[1, 2], &[2, 4]])), int(0));
    }

    #[test]
    fn polynomial_determinant() {
        let t = Polynomial::t();
        let one = Polynomial::one();
        // det [[t, 1], [1, t]] = t^2 - 1
        let m = vec![vec![t.clone(), one.clone()], vec![one, t]];
        assert_eq!(bareiss_det(&m), Polynomial::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn solve_statuses() {
        let a = mat(&[&[1, 0], &[3, 2], &[1, 1]]);
        let s = solve(&a, &[int(1), int(5), int(2)]);
        assert_eq!(s.status, ExpansionStatus::Unique);
        assert_eq!(s.values, vec![int(1), int(1)]);
        let s = solve(&a, &[int(1), int(5), int(3)]);
        assert_eq!(s.status, ExpansionStatus::NotExpandable);
        let a = mat(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[int(2), int(2)]).status, ExpansionStatus::NonUnique);
    }
}
