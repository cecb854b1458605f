//! r-cubical posets: Adin's cubical h-vector, the r-cubical h-vector, and
//! shelling checks with step types.
//!
//! A complex is given by facet charts. The chart of a rank-`n` facet lists
//! the global labels of its `r^{n-1}` vertices, the vertex with coordinates
//! `(v_1, …, v_{n-1}) ∈ [r]^{n-1}` in lexicographic position. A face is then
//! determined by its vertex set, and faces of different facets are glued
//! when their vertex sets agree.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::families::{cube_elements, cube_le, family_certificate, FamilyKind, FamilySpec};
use crate::poly::Polynomial;
use crate::poset::{self, FinitePoset, HVector};

/// The linear operator `H` with `(1+t) H(f) = (-1)^n f(-1) t^{n+1}
/// + f(0)(1 − ((1−t)/2)^n) + ((1−t)/2)^n f(2t/(1−t))`.
pub fn adin_operator(f: &Polynomial, n: usize) -> Result<Polynomial> {
    if f.degree().is_some_and(|d| d > n) {
        return Err(Error::DegreeTooLarge { degree: f.degree().unwrap(), bound: n });
    }
    let one_minus_t = Polynomial::from_ints(&[1, -1]);
    let half = exact::ratio(1, 2);
    let sign = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let mut rhs = Polynomial::monomial(sign * f.eval(&-Rational::one()), n + 1);
    let f0 = f.coeff(0);
    rhs = rhs + (Polynomial::one() - one_minus_t.scale(&half).pow(n)).scale(&f0);
    // ((1−t)/2)^n · (2t/(1−t))^i = 2^{i−n} t^i (1−t)^{n−i}
    for (i, c) in f.coeffs().iter().enumerate() {
        if !c.is_zero() {
            let w = exact::pow(&exact::int(2), i as i64 - n as i64) * c;
            rhs = rhs + one_minus_t.pow(n - i).shift(i).scale(&w);
        }
    }
    rhs.div_exact(&Polynomial::from_ints(&[1, 1])).ok_or(Error::NotCubicalFPolynomial)
}

/// Adin's cubical h-polynomial from an f-polynomial of rank `n` with `f(0) = 1`.
pub fn adin_h_from_f(f: &Polynomial, n: usize) -> Result<Polynomial> {
    if !f.coeff(0).is_one() {
        return Err(Error::NotCubicalFPolynomial);
    }
    adin_operator(f, n)
}

/// Adin's cubical h-polynomial of a poset with `0̂`.
pub fn adin_h(p: &FinitePoset) -> Result<Polynomial> {
    if p.least().is_none() {
        return Err(invalid("a cubical poset has a least element"));
    }
    let f = poset::rank_generating(p);
    adin_h_from_f(&f, f.degree().unwrap_or(0))
}

fn cubical_certificate(r: u32, rank: usize) -> Result<crate::tnmat::ResolutionCertificate> {
    let kind = FamilyKind::Cubical { r };
    if kind.is_degenerate_basis() {
        return Err(Error::DegenerateBasis("for r = 1 the polynomials R_{n,k} are not a basis".into()));
    }
    family_certificate(&FamilySpec::new(kind, rank + 1)?)
}

/// The expansion of `f_P` in the r-cubical `R_{n,k}`.
pub fn r_cubical_h(p: &FinitePoset, r: u32) -> Result<HVector> {
    let rank = poset::rank_generating(p).degree().unwrap_or(0);
    poset::h_vector(p, &cubical_certificate(r, rank)?)
}

/// Result of comparing Adin's h with the 2-cubical h.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdinComparison {
    #[serde(with = "exact::vec_str")]
    pub adin: Vec<Rational>,
    #[serde(with = "exact::vec_str")]
    pub r_cubical: Vec<Rational>,
    pub consistent: bool,
}

/// Checks `adin_k = h_k / 2` for `0 < k < n` and `adin_k = h_k` otherwise.
pub fn adin_equivalence_from_f(f: &Polynomial, n: usize) -> Result<AdinComparison> {
    let adin = adin_h_from_f(f, n)?;
    let cert = cubical_certificate(2, n)?;
    let a: Vec<Vec<Rational>> = (0..=n).map(|d| (0..=n).map(|k| cert.r(n, k).coeff(d)).collect()).collect();
    let b: Vec<Rational> = (0..=n).map(|d| f.coeff(d)).collect();
    let h = crate::linalg::solve(&a, &b).values;
    let adin: Vec<Rational> = (0..=n).map(|k| adin.coeff(k)).collect();
    let half = exact::ratio(1, 2);
    let consistent =
        (0..=n).all(|k| if k > 0 && k < n { adin[k] == &h[k] * &half } else { adin[k] == h[k] });
    Ok(AdinComparison { adin, r_cubical: h, consistent })
}

pub fn adin_equivalence_check(p: &FinitePoset) -> Result<AdinComparison> {
    let f = poset::rank_generating(p);
    let n = f.degree().unwrap_or(0);
    check_combinatorial_cubical(p, 2, n)?;
    adin_equivalence_from_f(&f, n)
}

fn check_combinatorial_cubical(p: &FinitePoset, r: u32, rank: usize) -> Result<()> {
    poset::check_combinatorial(p, &cubical_certificate(r, rank)?)
}

/// A pure r-cubical complex given by vertex charts of its facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicalComplex {
    r: u32,
    n: usize,
    #[serde(serialize_with = "charts_json")]
    facets: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct Chart {
    chart: Vec<u64>,
}

fn charts_json<S: serde::Serializer>(facets: &[Vec<u64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    facets.iter().map(|c| Chart { chart: c.clone() }).collect::<Vec<_>>().serialize(s)
}

#[derive(Deserialize)]
struct ComplexJson {
    r: u32,
    n: usize,
    facets: Vec<Chart>,
}

impl<'de> Deserialize<'de> for CubicalComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexJson::deserialize(d)?;
        CubicalComplex::new(raw.r, raw.n, raw.facets.into_iter().map(|c| c.chart).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl CubicalComplex {
    /// Needs `r ≥ 2` so that faces are determined by their vertex sets.
    pub fn new(r: u32, n: usize, facets: Vec<Vec<u64>>) -> Result<Self> {
        if r < 2 {
            return Err(Error::DegenerateBasis("vertex charts need r ≥ 2".into()));
        }
        if n == 0 || facets.is_empty() {
            return Err(invalid("a complex needs rank ≥ 1 and at least one facet"));
        }
        let size = (r as u64).checked_pow(n as u32 - 1).filter(|&s| s <= 1 << 16);
        let Some(size) = size else {
            return Err(Error::CapExceeded { what: "vertices per facet", value: u128::MAX, cap: 1 << 16, hint: "" });
        };
        let mut seen = BTreeSet::new();
        for (i, c) in facets.iter().enumerate() {
            if c.len() as u64 != size {
                return Err(invalid(format!("facet {i} lists {} vertices, a rank-{n} {r}-cube has {size}", c.len())));
            }
            let set: BTreeSet<u64> = c.iter().copied().collect();
            if set.len() != c.len() {
                return Err(invalid(format!("facet {i} repeats a vertex")));
            }
            if !seen.insert(set) {
                return Err(invalid(format!("facet {i} repeats an earlier facet")));
            }
        }
        let cx = CubicalComplex { r, n, facets };
        check_combinatorial_cubical(&cx.to_poset()?, r, n)
            .map_err(|e| invalid(format!("charts do not glue to an r-cubical poset: {e}")))?;
        Ok(cx)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[Vec<u64>] {
        &self.facets
    }

    /// Cube elements of a facet with their global vertex sets; `0̂` maps to `∅`.
    fn faces_of(&self, chart: &[u64]) -> Vec<(Option<Vec<u32>>, Vec<u64>)> {
        let r = self.r as usize;
        cube_elements(self.r, self.n)
            .into_iter()
            .map(|x| {
                let verts = match &x {
                    None => Vec::new(),
                    Some(c) => {
                        let mut vs: Vec<u64> = (0..chart.len())
                            .filter(|&idx| {
                                // digits of idx in base r, most significant first
                                let mut rest = idx;
                                let mut ok = true;
                                for pos in (0..c.len()).rev() {
                                    let digit = (rest % r) as u32 + 1;
                                    rest /= r;
                                    ok &= c[pos] == 0 || c[pos] == digit;
                                }
                                ok
                            })
                            .map(|idx| chart[idx])
                            .collect();
                        vs.sort_unstable();
                        vs
                    }
                };
                (x, verts)
            })
            .collect()
    }

    /// The face poset with `0̂` first; labels list vertex sets.
    pub fn to_poset(&self) -> Result<FinitePoset> {
        let faces: BTreeSet<Vec<u64>> =
            self.facets.iter().flat_map(|c| self.faces_of(c)).map(|(_, v)| v).collect();
        let mut faces: Vec<Vec<u64>> = faces.into_iter().collect();
        faces.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let labels = faces
            .iter()
            .map(|v| if v.is_empty() { "0̂".to_string() } else { format!("{v:?}") })
            .collect();
        let subset = |a: &Vec<u64>, b: &Vec<u64>| a.iter().all(|x| b.binary_search(x).is_ok());
        FinitePoset::from_order(faces.len(), |i, j| subset(&faces[i], &faces[j]), Some(labels))
    }
}

/// One step of a shelling check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicalStepType {
    /// `a_j` = number of free coordinates with exactly `j` covered values.
    pub a: Vec<usize>,
    /// `A_i ⊆ [r]` for each free coordinate.
    pub positions: Vec<Vec<u32>>,
    pub s1: bool,
    pub s2: bool,
    /// `f_{P_k} − f_{P_{k-1}} = t ∏_i (t + r − |A_i|)`.
    pub increment_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicalShelling {
    pub is_shelling: bool,
    /// Types of steps `2..=m` in order, up to the first failure.
    pub steps: Vec<CubicalStepType>,
    /// 0-based position of the first failing facet.
    pub failing_step: Option<usize>,
    /// The r-cubical h-vector, reported when the order is a shelling.
    pub h: Option<HVector>,
}

/// Checks (S1) and (S2) for `order` (indices into the facet list).
///
/// (S2) is read over the `n − 1` free coordinates of a rank-`n` cube:
/// some coordinate has exactly one covered value, or every coordinate is
/// fully covered.
pub fn cubical_shelling_check(cx: &CubicalComplex, order: &[usize]) -> Result<CubicalShelling> {
    let m = cx.facets.len();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..m).collect::<Vec<_>>() {
        return Err(invalid(format!("order must be a permutation of 0..{m}")));
    }
    let r = cx.r;
    let n = cx.n;
    let mut covered: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut steps = Vec::new();
    for (k, &fi) in order.iter().enumerate() {
        let faces = cx.faces_of(&cx.facets[fi]);
        let rank = |x: &Option<Vec<u32>>| x.as_ref().map_or(0, |c| 1 + c.iter().filter(|&&v| v == 0).count());
        let increment: Polynomial =
            faces.iter().filter(|(_, v)| !covered.contains(v)).map(|(x, _)| Polynomial::t_pow(rank(x))).sum();
        if k > 0 {
            let inside: Vec<&Option<Vec<u32>>> =
                faces.iter().filter(|(_, v)| covered.contains(v)).map(|(x, _)| x).collect();
            let maximal: Vec<&Option<Vec<u32>>> = inside
                .iter()
                .copied()
                .filter(|x| !inside.iter().any(|y| x != y && cube_le(x.as_deref(), y.as_deref())))
                .collect();
            let s1 = maximal.iter().all(|x| rank(x) == n - 1);
            let mut positions: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n - 1];
            for c in maximal.iter().filter_map(|x| x.as_ref()) {
                for (i, &v) in c.iter().enumerate() {
                    if v != 0 {
                        positions[i].insert(v);
                    }
                }
            }
            let mut a = vec![0usize; r as usize + 1];
            for s in &positions {
                a[s.len()] += 1;
            }
            let s2 = a[1] >= 1 || a[r as usize] == n - 1;
            let expected = positions
                .iter()
                .fold(Polynomial::t(), |acc, s| acc * Polynomial::linear(exact::int((r as usize - s.len()) as i64)));
            steps.push(CubicalStepType {
                a,
                positions: positions.into_iter().map(|s| s.into_iter().collect()).collect(),
                s1,
                s2,
                increment_matches: s1 && increment == expected,
            });
            if !(s1 && s2) {
                return Ok(CubicalShelling { is_shelling: false, steps, failing_step: Some(k), h: None });
            }
        }
        covered.extend(faces.into_iter().map(|(_, v)| v));
    }
    let h = r_cubical_h(&cx.to_poset()?, r)?;
    if !h.is_nonnegative() {
        return Err(Error::InvariantViolation(format!("a shelling produced a negative h-vector {:?}", h.values)));
    }
    Ok(CubicalShelling { is_shelling: true, steps, failing_step: None, h: Some(h) })
}

/// `R_{n,k}` images under the Adin operator: `t^k/2` inside, `t^k` at the ends.
pub fn adin_basis_images(n: usize) -> Result<BTreeMap<usize, Polynomial>> {
    let cert = cubical_certificate(2, n)?;
    (0..=n).map(|k| Ok((k, adin_operator(cert.r(n, k), n)?))).collect()
}
