//! Integer sequences used across the families: binomials, Stirling numbers,
//! factorials and their q-analogues.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::Rational;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Rows `0..=n` of the Stirling numbers of the second kind, `S(m,k)` at `[m][k]`.
pub fn stirling2_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut t: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=n {
        let prev = &t[m - 1];
        let row: Vec<BigInt> = (0..=m)
            .map(|k| {
                let a = if k >= 1 { prev.get(k - 1).cloned().unwrap_or_default() } else { BigInt::zero() };
                let b = prev.get(k).cloned().unwrap_or_default() * BigInt::from(k);
                a + b
            })
            .collect();
        t.push(row);
    }
    t
}

pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    stirling2_table(n)[n][k].clone()
}

/// Signed Stirling numbers of the first kind: `(t)_m = Σ_k s(m,k) t^k`.
pub fn stirling1_signed_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut t: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=n {
        let prev = &t[m - 1];
        let row: Vec<BigInt> = (0..=m)
            .map(|k| {
                let a = if k >= 1 { prev.get(k - 1).cloned().unwrap_or_default() } else { BigInt::zero() };
                let b = prev.get(k).cloned().unwrap_or_default() * BigInt::from(m - 1);
                a - b
            })
            .collect();
        t.push(row);
    }
    t
}

/// Gaussian binomial `(n choose k)_q` by the q-Pascal rule.
pub fn q_binomial(n: usize, k: usize, q: &Rational) -> Rational {
    if k > n {
        return Rational::zero();
    }
    q_binomial_table(n, q)[n][k].clone()
}

/// Rows `0..=n` of Gaussian binomials: `(m choose k)_q = (m-1 choose k-1)_q + q^k (m-1 choose k)_q`.
pub fn q_binomial_table(n: usize, q: &Rational) -> Vec<Vec<Rational>> {
    let mut t: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for m in 1..=n {
        let prev = &t[m - 1];
        let mut qk = Rational::one();
        let mut row = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let a = if k >= 1 { prev.get(k - 1).cloned().unwrap_or_else(Rational::zero) } else { Rational::zero() };
            let b = prev.get(k).cloned().unwrap_or_else(Rational::zero) * &qk;
            row.push(a + b);
            qk *= q;
        }
        t.push(row);
    }
    t
}

/// `[n]_q! = Π_{i≤n} (1 + q + ⋯ + q^{i-1})`
pub fn q_factorial(n: usize, q: &Rational) -> Rational {
    let mut acc = Rational::one();
    for i in 1..=n {
        let mut s = Rational::zero();
        let mut p = Rational::one();
        for _ in 0..i {
            s += &p;
            p *= q;
        }
        acc *= s;
    }
    acc
}

pub fn bell(n: usize) -> BigInt {
    stirling2_table(n)[n].iter().sum()
}

/// All `k`-element subsets of `0..n`, each sorted, in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All set partitions of `0..n` as restricted growth strings: entry `i` is
/// the block of element `i`, blocks numbered by first appearance.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut word = vec![0usize; n];
    fn rec(i: usize, blocks: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == word.len() {
            out.push(word.clone());
            return;
        }
        for b in 0..=blocks {
            word[i] = b;
            rec(i + 1, blocks.max(b + 1), word, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(1, 1, &mut word, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn tables() {
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        assert_eq!(stirling2(7, 3), BigInt::from(301));
        assert_eq!(stirling1_signed_table(3)[3], vec![0, 2, -3, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(bell(4), BigInt::from(15));
        assert_eq!(q_binomial(4, 2, &int(2)), int(35));
        assert_eq!(q_factorial(3, &int(2)), int(21));
        assert_eq!(subsets_of_size(4, 2).len(), 6);
        assert_eq!(subsets_of_size(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets_of_size(3, 3), vec![vec![0, 1, 2]]);
        for n in 0..=6 {
            assert_eq!(BigInt::from(set_partitions(n).len()), bell(n));
        }
    }
}
