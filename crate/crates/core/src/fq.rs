//! Linear algebra over a prime field `F_p`: reduced row echelon forms,
//! canonical subspaces, and enumeration of subspaces and projective points.

use std::cmp::Ordering;

use crate::error::{invalid, Error, Result};

/// Largest `p^n` for which whole-space enumeration is attempted.
pub const DEFAULT_SPACE_CAP: u64 = 1 << 16;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(invalid(format!("q = {p} is not prime; only prime fields are supported")))
    }
}

fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn sub(a: u32, b: u32, p: u32) -> u32 {
    (a + p - b) % p
}

pub fn inverse(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "zero has no inverse");
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

pub fn dot(u: &[u32], v: &[u32], p: u32) -> u32 {
    u.iter().zip(v).fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p as u64) as u32
}

/// Reduced row echelon form, zero rows dropped.
pub fn rref(rows: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut lead = 0;
    for c in 0..cols {
        let Some(piv) = (lead..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(lead, piv);
        let inv = inverse(m[lead][c], p);
        for x in m[lead].iter_mut() {
            *x = mul(*x, inv, p);
        }
        for i in 0..m.len() {
            if i != lead && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    let v = mul(f, m[lead][j], p);
                    m[i][j] = sub(m[i][j], v, p);
                }
            }
        }
        lead += 1;
    }
    m.truncate(lead);
    m
}

pub fn rank(rows: &[Vec<u32>], p: u32) -> usize {
    rref(rows, p).len()
}

/// Scale so the first nonzero coordinate is 1; `None` for the zero vector.
pub fn projective_normalize(v: &[u32], p: u32) -> Option<Vec<u32>> {
    let first = v.iter().find(|&&x| x % p != 0)?;
    let inv = inverse(*first % p, p);
    Some(v.iter().map(|&x| mul(x % p, inv, p)).collect())
}

fn check_space_size(p: u32, n: usize, cap: u64) -> Result<()> {
    let size = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if size > cap {
        return Err(Error::CapExceeded {
            what: "field space size q^n",
            value: size as u128,
            cap: cap as u128,
            hint: "raise the space cap or use a smaller field or dimension",
        });
    }
    Ok(())
}

/// All vectors of `F_p^n` in lexicographic order (last coordinate fastest).
pub fn all_vectors(p: u32, n: usize) -> Result<Vec<Vec<u32>>> {
    check_space_size(p, n, DEFAULT_SPACE_CAP)?;
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    Ok(out)
}

/// Canonical representatives of the points of projective space `P(F_p^n)`.
pub fn projective_points(p: u32, n: usize) -> Result<Vec<Vec<u32>>> {
    Ok(all_vectors(p, n)?
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect())
}

/// A subspace of `F_p^n`, stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    n: usize,
    basis: Vec<Vec<u32>>,
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dimension first, then the echelon basis; a total order for storage only.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.n, self.dim(), &self.basis).cmp(&(other.p, other.n, other.dim(), &other.basis))
    }
}

impl Subspace {
    pub fn span(p: u32, n: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("vector of length {} in F_{p}^{n}", v.len())));
        }
        Ok(Subspace { p, n, basis: rref(vectors, p) })
    }

    pub fn zero(p: u32, n: usize) -> Self {
        Subspace { p, n, basis: Vec::new() }
    }

    pub fn full(p: u32, n: usize) -> Self {
        let basis = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        Subspace { p, n, basis }
    }

    pub fn field(&self) -> u32 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect()
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots().iter().map(|&c| v[c] % self.p).collect();
        let mut w = vec![0u32; self.n];
        for (c, row) in coords.iter().zip(&self.basis) {
            for j in 0..self.n {
                w[j] = (w[j] + mul(*c, row[j], self.p)) % self.p;
            }
        }
        let matches = w.iter().zip(v).all(|(a, b)| *a == b % self.p);
        matches.then_some(coords)
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `self ≤ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.basis.iter().all(|b| other.contains_vector(b))
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace { p: self.p, n: self.n, basis: rref(&rows, self.p) }
    }

    /// The annihilator under the standard dot product.
    pub fn orthogonal(&self) -> Subspace {
        let piv = self.pivots();
        let free: Vec<usize> = (0..self.n).filter(|c| !piv.contains(c)).collect();
        let vectors: Vec<Vec<u32>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u32; self.n];
                v[f] = 1;
                for (row, &pc) in self.basis.iter().zip(&piv) {
                    v[pc] = sub(0, row[f], self.p);
                }
                v
            })
            .collect();
        Subspace { p: self.p, n: self.n, basis: rref(&vectors, self.p) }
    }

    pub fn meet(&self, other: &Subspace) -> Subspace {
        self.orthogonal().join(&other.orthogonal()).orthogonal()
    }

    /// The quotient map `F_p^n → F_p^n / self ≅ F_p^{n - dim}`: subtract the
    /// pivot components, then drop the pivot coordinates.
    pub fn quotient_image(&self, v: &[u32]) -> Vec<u32> {
        let piv = self.pivots();
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        for (row, &pc) in self.basis.iter().zip(&piv) {
            let c = w[pc];
            if c != 0 {
                for j in 0..self.n {
                    w[j] = sub(w[j], mul(c, row[j], self.p), self.p);
                }
            }
        }
        (0..self.n).filter(|c| !piv.contains(c)).map(|c| w[c]).collect()
    }
}

/// Every subspace of `F_p^n`, by dimension then echelon basis.
pub fn all_subspaces(p: u32, n: usize) -> Result<Vec<Subspace>> {
    check_prime(p)?;
    check_space_size(p, n, DEFAULT_SPACE_CAP)?;
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in crate::combinat::subsets_of_size(n, k) {
            // free slots: (row, column) right of the row's pivot, not a pivot column
            let slots: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &pc)| (pc + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            let total = (p as u64).pow(slots.len() as u32);
            for code in 0..total {
                let mut basis: Vec<Vec<u32>> = pivots
                    .iter()
                    .map(|&pc| {
                        let mut r = vec![0u32; n];
                        r[pc] = 1;
                        r
                    })
                    .collect();
                let mut c = code;
                for &(i, col) in &slots {
                    basis[i][col] = (c % p as u64) as u32;
                    c /= p as u64;
                }
                out.push(Subspace { p, n, basis });
            }
        }
    }
    out.sort();
    Ok(out)
}
