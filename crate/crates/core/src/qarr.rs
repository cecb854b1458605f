//! Hyperplane arrangements over prime fields: characteristic polynomials,
//! the `χ^q_{n,k}` basis and θ-expansions, the critical problem by brute force,
//! and the `D_n` and `R^q` operators.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::families::rogers_szego;
use crate::fq::{self, Subspace};
use crate::poly::Polynomial;

/// Largest number of normals for the subset-sum characteristic polynomial.
pub const DEFAULT_SUBSET_CAP: usize = 22;
/// Largest `q^{nm}` for the brute-force hom count.
pub const DEFAULT_HOM_CAP: u64 = 1 << 24;

/// An arrangement in `F_q^n`, stored as its set of projectively normalized
/// normals in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FqArrangement {
    q: u32,
    n: usize,
    normals: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct ArrangementJson {
    q: u32,
    n: usize,
    normals: Vec<Vec<u32>>,
}

impl<'de> Deserialize<'de> for FqArrangement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ArrangementJson::deserialize(d)?;
        FqArrangement::new(raw.q, raw.n, raw.normals).map_err(serde::de::Error::custom)
    }
}

impl FqArrangement {
    /// Normals are normalized so the first nonzero coordinate is 1; repeated
    /// hyperplanes collapse to one.
    pub fn new(q: u32, n: usize, normals: Vec<Vec<u32>>) -> Result<Self> {
        fq::check_prime(q)?;
        let mut set = BTreeSet::new();
        for v in &normals {
            if v.len() != n {
                return Err(Error::DimensionMismatch(format!("normal {v:?} does not lie in F_{q}^{n}")));
            }
            let w = fq::projective_normalize(v, q).ok_or_else(|| invalid("the zero vector is not a normal"))?;
            set.insert(w);
        }
        Ok(FqArrangement { q, n, normals: set.into_iter().collect() })
    }

    pub fn empty(q: u32, n: usize) -> Result<Self> {
        Self::new(q, n, Vec::new())
    }

    /// All hyperplanes whose normal lies in `u`.
    pub fn from_subspace(u: &Subspace) -> Result<Self> {
        let pts = fq::projective_points(u.field(), u.ambient())?;
        Self::new(u.field(), u.ambient(), pts.into_iter().filter(|v| u.contains_vector(v)).collect())
    }

    /// The graphic arrangement `x_i = x_j` of a graph on `vertices` vertices.
    pub fn graphic(q: u32, vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let normals = edges
            .iter()
            .map(|&(i, j)| {
                if i >= vertices || j >= vertices || i == j {
                    return Err(invalid(format!("edge ({i},{j}) is not valid on {vertices} vertices")));
                }
                let mut v = vec![0u32; vertices];
                v[i] = 1;
                v[j] = q - 1;
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, vertices, normals)
    }

    pub fn field(&self) -> u32 {
        self.q
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn normals(&self) -> &[Vec<u32>] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    fn select(&self, idx: &[usize]) -> Vec<Vec<u32>> {
        idx.iter().map(|&i| self.normals[i].clone()).collect()
    }

    pub fn rank_of(&self, idx: &[usize]) -> usize {
        fq::rank(&self.select(idx), self.q)
    }

    /// The sub-arrangement on `idx`, in the same ambient space.
    pub fn restrict(&self, idx: &[usize]) -> FqArrangement {
        FqArrangement { q: self.q, n: self.n, normals: self.select(idx) }
    }

    pub fn delete(&self, e: usize) -> FqArrangement {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| i != e).collect();
        self.restrict(&idx)
    }

    /// `M/F` realized in `F_q^n / ⟨F⟩ ≅ F_q^{n - r(F)}`. Images that vanish
    /// (elements of the closure of `F`) are dropped.
    pub fn contract(&self, idx: &[usize]) -> FqArrangement {
        let span = Subspace::span(self.q, self.n, &self.select(idx)).expect("normals have the ambient length");
        let images = self
            .normals
            .iter()
            .map(|v| span.quotient_image(v))
            .filter(|w| w.iter().any(|&x| x != 0))
            .collect();
        FqArrangement::new(self.q, self.n - span.dim(), images).expect("quotient images are valid normals")
    }

    /// Index sets `F` with `F = M ∩ ⟨F⟩`, by rank then lexicographically.
    pub fn flats(&self) -> Result<Vec<Vec<usize>>> {
        check_subset_cap(self.len(), DEFAULT_SUBSET_CAP)?;
        let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for mask in 0u64..1 << self.len() {
            let idx = mask_indices(mask, self.len());
            let span = Subspace::span(self.q, self.n, &self.select(&idx)).expect("normals have the ambient length");
            let closure: Vec<usize> = (0..self.len()).filter(|&i| span.contains_vector(&self.normals[i])).collect();
            seen.insert((span.dim(), closure));
        }
        Ok(seen.into_iter().map(|(_, f)| f).collect())
    }
}

fn mask_indices(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|i| mask >> i & 1 == 1).collect()
}

fn check_subset_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::CapExceeded {
            what: "number of hyperplanes",
            value: m as u128,
            cap: cap as u128,
            hint: "use char_poly_deletion_contraction",
        });
    }
    Ok(())
}

/// `χ_M(t) = Σ_{A ⊆ M} (-1)^{|A|} t^{n - rank A}` by subset enumeration.
pub fn char_poly(a: &FqArrangement) -> Result<Polynomial> {
    char_poly_capped(a, DEFAULT_SUBSET_CAP)
}

/// [`char_poly`] with an explicit bound on the number of hyperplanes (at most 63).
pub fn char_poly_capped(a: &FqArrangement, cap: usize) -> Result<Polynomial> {
    check_subset_cap(a.len(), cap.min(63))?;
    let mut coeffs = vec![0i64; a.n + 1];
    for mask in 0u64..1 << a.len() {
        let idx = mask_indices(mask, a.len());
        let sign = if idx.len().is_multiple_of(2) { 1 } else { -1 };
        coeffs[a.n - a.rank_of(&idx)] += sign;
    }
    Ok(Polynomial::from_ints(&coeffs))
}

/// `χ_M = χ_{M∖e} − χ_{M/e}`, memoized on the normalized arrangement.
pub fn char_poly_deletion_contraction(a: &FqArrangement) -> Polynomial {
    fn rec(a: &FqArrangement, memo: &mut HashMap<FqArrangement, Polynomial>) -> Polynomial {
        if a.is_empty() {
            return Polynomial::t_pow(a.n);
        }
        if let Some(p) = memo.get(a) {
            return p.clone();
        }
        let last = a.len() - 1;
        let del = rec(&a.delete(last), memo);
        let con = rec(&a.contract(&[last]), memo);
        let out = del - con;
        memo.insert(a.clone(), out.clone());
        out
    }
    rec(a, &mut HashMap::new())
}

/// `χ^q_{n,k}(t) = t^{n-k}(t-1)(t-q)⋯(t-q^{k-1})`.
pub fn chi_basis(n: usize, k: usize, q: &Rational) -> Result<Polynomial> {
    if k > n {
        return Err(invalid(format!("need k ≤ n, got n = {n}, k = {k}")));
    }
    let prod = (0..k).fold(Polynomial::one(), |acc, i| acc * Polynomial::linear(-exact::pow(q, i as i64)));
    Ok(prod.shift(n - k))
}

/// Coordinates `θ_0..θ_n` of a monic degree-`n` polynomial in the `χ^q_{n,k}`
/// basis, by back-substitution from the constant term upward.
pub fn theta_expansion(chi: &Polynomial, n: usize, q: &Rational) -> Result<Vec<Rational>> {
    if chi.degree() != Some(n) {
        return Err(invalid(format!("expected a polynomial of degree {n}")));
    }
    if !chi.is_monic() {
        return Err(invalid("characteristic polynomials are monic"));
    }
    if !q.is_positive() {
        return Err(invalid("θ-expansion needs q > 0"));
    }
    let basis: Vec<Polynomial> = (0..=n).map(|k| chi_basis(n, k, q)).collect::<Result<_>>()?;
    let mut theta = vec![Rational::zero(); n + 1];
    for j in 0..=n {
        let k = n - j;
        let known: Rational = (k + 1..=n).map(|i| &theta[i] * basis[i].coeff(j)).sum();
        theta[k] = (chi.coeff(j) - known) / basis[k].coeff(j);
    }
    Ok(theta)
}

/// θ-expansion of an arrangement together with the three checks on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    pub chi: Polynomial,
    #[serde(with = "exact::vec_str")]
    pub theta: Vec<Rational>,
    pub nonnegative: bool,
    pub sums_to_one: bool,
    pub theta0_is_chi_at_one: bool,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.nonnegative && self.sums_to_one && self.theta0_is_chi_at_one
    }
}

pub fn arrangement_theta(a: &FqArrangement) -> Result<ThetaReport> {
    arrangement_theta_capped(a, DEFAULT_SUBSET_CAP)
}

pub fn arrangement_theta_capped(a: &FqArrangement, cap: usize) -> Result<ThetaReport> {
    let chi = char_poly_capped(a, cap)?;
    let q = exact::int(a.q as i64);
    let theta = theta_expansion(&chi, a.n, &q)?;
    let expected_theta0 = if a.is_empty() { Rational::one() } else { Rational::zero() };
    Ok(ThetaReport {
        nonnegative: theta.iter().all(exact::is_nonnegative),
        sums_to_one: theta.iter().sum::<Rational>().is_one(),
        theta0_is_chi_at_one: theta[0] == chi.eval(&Rational::one()) && theta[0] == expected_theta0,
        chi,
        theta,
    })
}

/// Number of linear maps `φ : F_q^n → F_q^m` for each kernel pattern
/// `ker φ ∩ M`, keyed by the sorted index set.
pub fn kernel_pattern_counts(a: &FqArrangement, m: usize) -> Result<BTreeMap<Vec<usize>, u64>> {
    kernel_pattern_counts_capped(a, m, DEFAULT_HOM_CAP)
}

/// [`kernel_pattern_counts`] with an explicit bound on `q^{nm}`.
pub fn kernel_pattern_counts_capped(a: &FqArrangement, m: usize, cap: u64) -> Result<BTreeMap<Vec<usize>, u64>> {
    let total = (a.q as u64).checked_pow((a.n * m) as u32).unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::CapExceeded {
            what: "hom-space size q^(nm)",
            value: total as u128,
            cap: cap as u128,
            hint: "lower m or n",
        });
    }
    if a.len() > 64 {
        return Err(Error::CapExceeded { what: "number of hyperplanes", value: a.len() as u128, cap: 64, hint: "" });
    }
    // each row of φ is a functional; record which normals it kills
    let rows = fq::all_vectors(a.q, a.n)?;
    let kills: Vec<u64> = rows
        .iter()
        .map(|w| (0..a.len()).filter(|&i| fq::dot(w, &a.normals[i], a.q) == 0).fold(0u64, |acc, i| acc | 1 << i))
        .collect();
    let full = if a.is_empty() { 0 } else { u64::MAX >> (64 - a.len()) };
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut odometer = vec![0usize; m];
    loop {
        let mask = odometer.iter().fold(full, |acc, &r| acc & kills[r]);
        *counts.entry(mask).or_insert(0) += 1;
        let Some(pos) = (0..m).rev().find(|&i| odometer[i] + 1 < rows.len()) else {
            break;
        };
        odometer[pos] += 1;
        for x in odometer.iter_mut().skip(pos + 1) {
            *x = 0;
        }
    }
    Ok(counts.into_iter().map(|(mask, c)| (mask_indices(mask, a.len()), c)).collect())
}

/// `|{φ ∈ Hom(F_q^n, F_q^m) : ker φ ∩ M = ∅}|` by enumeration.
pub fn critical_count(a: &FqArrangement, m: usize) -> Result<u64> {
    critical_count_capped(a, m, DEFAULT_HOM_CAP)
}

pub fn critical_count_capped(a: &FqArrangement, m: usize, cap: u64) -> Result<u64> {
    Ok(kernel_pattern_counts_capped(a, m, cap)?.get(&Vec::new()).copied().unwrap_or(0))
}

/// Checks `χ_M(q^m)` against the hom count and, for every flat `F`,
/// `χ_{M/F}(q^m)` against the maps with `ker φ ∩ M = F`.
pub fn critical_problem_check(a: &FqArrangement, m: usize) -> Result<bool> {
    let counts = kernel_pattern_counts(a, m)?;
    let qm = exact::pow(&exact::int(a.q as i64), m as i64);
    for f in a.flats()? {
        let expected = char_poly(&a.contract(&f))?.eval(&qm);
        let got = exact::int(counts.get(&f).copied().unwrap_or(0) as i64);
        if expected != got {
            return Ok(false);
        }
    }
    let flats: BTreeSet<Vec<usize>> = a.flats()?.into_iter().collect();
    Ok(counts.keys().all(|k| flats.contains(k)))
}

/// `(D_n f)(t) = f(qt) − q^n f(t)`.
pub fn dn_operator(f: &Polynomial, n: usize, q: &Rational) -> Polynomial {
    f.scale_var(q) - f.scale(&exact::pow(q, n as i64))
}

/// The linear map `t^n ↦ R^q_n(t)`.
pub fn rq_map(f: &Polynomial, q: &Rational) -> Result<Polynomial> {
    let mut acc = Polynomial::zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = acc + rogers_szego(i, q)?.scale(c);
        }
    }
    Ok(acc)
}

/// Both sides of `D_n χ_M = Σ_F χ_{M/F}(q)(χ_F − χ_M)` over all flats.
pub fn dn_flat_identity(a: &FqArrangement) -> Result<(Polynomial, Polynomial)> {
    let q = exact::int(a.q as i64);
    let chi = char_poly(a)?;
    let lhs = dn_operator(&chi, a.n, &q);
    let mut rhs = Polynomial::zero();
    for f in a.flats()? {
        let weight = char_poly(&a.contract(&f))?.eval(&q);
        let diff = char_poly(&a.restrict(&f))? - chi.clone();
        rhs = rhs + diff.scale(&weight);
    }
    Ok((lhs, rhs))
}
