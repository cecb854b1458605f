//! q-posets as order ideals of subspaces: shellings, q-h-vectors and the
//! independent spaces of q-matroids.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact;
use crate::families::{family_certificate, FamilyKind, FamilySpec};
use crate::fq::{self, Subspace};
use crate::poly::Polynomial;
use crate::poset::{self, FinitePoset, HVector};
use crate::qarr::{char_poly, rq_map, FqArrangement};

/// Exhaustive shelling search is used up to this many facets.
pub const EXHAUSTIVE_FACETS: usize = 8;
/// Largest number of subspaces of the ambient space for q-matroid tables.
pub const DEFAULT_LATTICE_CAP: usize = 128;

/// A finite set of subspaces of `F_q^n` closed under taking subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoset {
    q: u32,
    n: usize,
    spaces: Vec<Subspace>,
}

#[derive(Serialize, Deserialize)]
struct QPosetJson {
    q: u32,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spaces: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    facets: Option<Vec<Vec<Vec<u32>>>>,
}

impl Serialize for QPoset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QPosetJson {
            q: self.q,
            n: self.n,
            spaces: Some(self.spaces.iter().map(|x| x.basis().to_vec()).collect()),
            facets: None,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = QPosetJson::deserialize(d)?;
        let spans = |rows: Vec<Vec<Vec<u32>>>| {
            rows.into_iter().map(|b| Subspace::span(raw.q, raw.n, &b)).collect::<Result<Vec<_>>>()
        };
        let built = match (raw.spaces.clone(), raw.facets.clone()) {
            (Some(s), None) => spans(s).and_then(|s| QPoset::from_spaces(raw.q, raw.n, s)),
            (None, Some(f)) => spans(f).and_then(|f| QPoset::from_facets(raw.q, raw.n, f)),
            _ => Err(invalid("give exactly one of \"spaces\" or \"facets\"")),
        };
        built.map_err(D::Error::custom)
    }
}

impl QPoset {
    /// Validates that `spaces` is a nonempty order ideal of `B_n(q)`.
    pub fn from_spaces(q: u32, n: usize, spaces: Vec<Subspace>) -> Result<Self> {
        fq::check_prime(q)?;
        let set: BTreeSet<Subspace> = spaces.into_iter().collect();
        if let Some(x) = set.iter().find(|x| x.field() != q || x.ambient() != n) {
            return Err(Error::DimensionMismatch(format!("subspace of F_{}^{}", x.field(), x.ambient())));
        }
        if !set.contains(&Subspace::zero(q, n)) {
            return Err(invalid("a q-poset contains the zero space"));
        }
        let p = QPoset { q, n, spaces: set.into_iter().collect() };
        let all = fq::all_subspaces(q, n)?;
        for y in &p.spaces {
            if let Some(x) = all.iter().find(|x| x.is_subspace_of(y) && !p.contains(x)) {
                return Err(invalid(format!("not an order ideal: {:?} lies below {:?}", x.basis(), y.basis())));
            }
        }
        Ok(p)
    }

    /// The order ideal generated by `facets`.
    pub fn from_facets(q: u32, n: usize, facets: Vec<Subspace>) -> Result<Self> {
        if facets.is_empty() {
            return Err(invalid("at least one facet is required"));
        }
        let all = fq::all_subspaces(q, n)?;
        let spaces = all.into_iter().filter(|x| facets.iter().any(|f| x.is_subspace_of(f))).collect();
        Self::from_spaces(q, n, spaces)
    }

    pub fn field(&self) -> u32 {
        self.q
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Sorted by dimension, then echelon basis.
    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn contains(&self, x: &Subspace) -> bool {
        self.spaces.binary_search(x).is_ok()
    }

    pub fn rank(&self) -> usize {
        self.spaces.last().map_or(0, Subspace::dim)
    }

    pub fn facets(&self) -> Vec<Subspace> {
        self.spaces
            .iter()
            .filter(|x| !self.spaces.iter().any(|y| y.dim() > x.dim() && x.is_subspace_of(y)))
            .cloned()
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        let r = self.rank();
        self.facets().iter().all(|f| f.dim() == r)
    }

    pub fn rank_generating(&self) -> Polynomial {
        self.spaces.iter().map(|x| Polynomial::t_pow(x.dim())).sum()
    }

    /// The containment order as a [`FinitePoset`], indexed like [`spaces`](Self::spaces).
    pub fn to_poset(&self) -> Result<FinitePoset> {
        let s = &self.spaces;
        let mut covers = Vec::new();
        for (i, x) in s.iter().enumerate() {
            for (j, y) in s.iter().enumerate() {
                if y.dim() == x.dim() + 1 && x.is_subspace_of(y) {
                    covers.push((i, j));
                }
            }
        }
        let labels = s.iter().map(|x| format!("{:?}", x.basis())).collect();
        FinitePoset::new(s.len(), covers, Some(labels))
    }
}

/// Outcome of checking one facet order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellingVerdict {
    pub is_shelling: bool,
    /// 0-based position of the first facet whose intersection with the
    /// earlier ones is not pure of rank `n − 1`.
    pub failing_step: Option<usize>,
    /// A maximal element of that intersection of the wrong dimension.
    pub offending: Option<Subspace>,
}

/// Maximal elements of `(⟨F_1⟩ ∪ ⋯ ∪ ⟨F_{k-1}⟩) ∩ ⟨F_k⟩`.
fn intersection_facets(earlier: &[&Subspace], fk: &Subspace) -> Vec<Subspace> {
    let meets: BTreeSet<Subspace> = earlier.iter().map(|f| f.meet(fk)).collect();
    meets
        .iter()
        .filter(|x| !meets.iter().any(|y| y.dim() > x.dim() && x.is_subspace_of(y)))
        .cloned()
        .collect()
}

fn step_offender(earlier: &[&Subspace], fk: &Subspace) -> Option<Subspace> {
    if earlier.is_empty() {
        return None;
    }
    let target = fk.dim() - 1;
    intersection_facets(earlier, fk).into_iter().find(|x| x.dim() != target)
}

fn check_pure(p: &QPoset) -> Result<Vec<Subspace>> {
    if !p.is_pure() {
        return Err(Error::NotPure("facets of different dimensions".into()));
    }
    let facets = p.facets();
    if p.rank() == 0 {
        return Err(invalid("shellings need rank at least 1"));
    }
    Ok(facets)
}

/// Checks the order `order` (indices into [`QPoset::facets`]).
pub fn is_shelling(p: &QPoset, order: &[usize]) -> Result<ShellingVerdict> {
    let facets = check_pure(p)?;
    let mut seen = order.to_vec();
    seen.sort_unstable();
    if seen != (0..facets.len()).collect::<Vec<_>>() {
        return Err(invalid(format!("order must be a permutation of 0..{}", facets.len())));
    }
    let ordered: Vec<&Subspace> = order.iter().map(|&i| &facets[i]).collect();
    for k in 1..ordered.len() {
        if let Some(x) = step_offender(&ordered[..k], ordered[k]) {
            return Ok(ShellingVerdict { is_shelling: false, failing_step: Some(k), offending: Some(x) });
        }
    }
    Ok(ShellingVerdict { is_shelling: true, failing_step: None, offending: None })
}

/// Result of [`find_shelling`]. `None` with `exhaustive` certifies that no
/// shelling exists; greedy failures certify nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellingSearch {
    pub order: Option<Vec<usize>>,
    pub exhaustive: bool,
}

/// Backtracking search over all orders up to [`EXHAUSTIVE_FACETS`] facets;
/// beyond that, greedily appends the first facet that keeps the condition.
pub fn find_shelling(p: &QPoset) -> Result<ShellingSearch> {
    let facets = check_pure(p)?;
    let m = facets.len();
    if m <= EXHAUSTIVE_FACETS {
        fn extend(facets: &[Subspace], order: &mut Vec<usize>, used: &mut [bool]) -> bool {
            if order.len() == facets.len() {
                return true;
            }
            for i in 0..facets.len() {
                if used[i] {
                    continue;
                }
                let earlier: Vec<&Subspace> = order.iter().map(|&j| &facets[j]).collect();
                if step_offender(&earlier, &facets[i]).is_none() {
                    used[i] = true;
                    order.push(i);
                    if extend(facets, order, used) {
                        return true;
                    }
                    order.pop();
                    used[i] = false;
                }
            }
            false
        }
        let mut order = Vec::new();
        let found = extend(&facets, &mut order, &mut vec![false; m]);
        return Ok(ShellingSearch { order: found.then_some(order), exhaustive: true });
    }
    let mut order = vec![0];
    let mut used = vec![false; m];
    used[0] = true;
    while order.len() < m {
        let earlier: Vec<&Subspace> = order.iter().map(|&j| &facets[j]).collect();
        match (0..m).find(|&i| !used[i] && step_offender(&earlier, &facets[i]).is_none()) {
            Some(i) => {
                used[i] = true;
                order.push(i);
            }
            None => return Ok(ShellingSearch { order: None, exhaustive: false }),
        }
    }
    Ok(ShellingSearch { order: Some(order), exhaustive: false })
}

/// The h-vector of `P` against the Gaussian family `R^q_{n,k}`.
pub fn q_h_vector(p: &QPoset) -> Result<HVector> {
    let spec = FamilySpec::new(FamilyKind::Gaussian { q: exact::int(p.q as i64) }, p.rank() + 1)?;
    poset::h_vector(&p.to_poset()?, &family_certificate(&spec)?)
}

/// Per-step check of `f_{P_k} − f_{P_{k-1}} = R^q(χ_H)(t)`, where `H` is the
/// arrangement in `F_k ≅ F_q^n` cut out by the facets of the intersection.
/// The order must be a shelling.
pub fn shelling_increments(p: &QPoset, order: &[usize]) -> Result<Vec<bool>> {
    let verdict = is_shelling(p, order)?;
    if !verdict.is_shelling {
        return Err(invalid(format!("not a shelling: step {} fails", verdict.failing_step.unwrap())));
    }
    let facets = p.facets();
    let q = exact::int(p.q as i64);
    let mut covered: BTreeSet<Subspace> = BTreeSet::new();
    let mut out = Vec::with_capacity(order.len());
    for (k, &i) in order.iter().enumerate() {
        let fk = &facets[i];
        let new: Vec<&Subspace> = p.spaces.iter().filter(|x| x.is_subspace_of(fk) && !covered.contains(*x)).collect();
        let increment: Polynomial = new.iter().map(|x| Polynomial::t_pow(x.dim())).sum();
        let earlier: Vec<&Subspace> = order[..k].iter().map(|&j| &facets[j]).collect();
        let hyperplanes = if k == 0 { Vec::new() } else { intersection_facets(&earlier, fk) };
        // normals in the coordinates of the facet's echelon basis
        let normals = hyperplanes
            .iter()
            .map(|h| {
                let coords: Vec<Vec<u32>> = h.basis().iter().map(|v| fk.coordinates(v).unwrap()).collect();
                let local = Subspace::span(p.q, fk.dim(), &coords)?;
                Ok(local.orthogonal().basis()[0].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let arrangement = FqArrangement::new(p.q, fk.dim(), normals)?;
        out.push(increment == rq_map(&char_poly(&arrangement)?, &q)?);
        covered.extend(new.into_iter().cloned());
    }
    Ok(out)
}

/// A rank function on `B_n(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QMatroid {
    /// `φ(x) = min(dim x, r)`.
    Uniform { q: u32, n: usize, r: usize },
    Table { q: u32, n: usize, rank: BTreeMap<Subspace, usize> },
}

#[derive(Serialize, Deserialize)]
struct UniformJson {
    q: u32,
    n: usize,
    r: usize,
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    space: Vec<Vec<u32>>,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    q: u32,
    n: usize,
    entries: Vec<TableEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum QMatroidJson {
    Uniform(UniformJson),
    Table(TableJson),
}

impl Serialize for QMatroid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QMatroid::Uniform { q, n, r } => QMatroidJson::Uniform(UniformJson { q: *q, n: *n, r: *r }),
            QMatroid::Table { q, n, rank } => QMatroidJson::Table(TableJson {
                q: *q,
                n: *n,
                entries: rank.iter().map(|(x, &r)| TableEntry { space: x.basis().to_vec(), rank: r }).collect(),
            }),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatroid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let built = match QMatroidJson::deserialize(d)? {
            QMatroidJson::Uniform(u) => QMatroid::uniform(u.q, u.n, u.r),
            QMatroidJson::Table(t) => t
                .entries
                .into_iter()
                .map(|e| Ok((Subspace::span(t.q, t.n, &e.space)?, e.rank)))
                .collect::<Result<BTreeMap<_, _>>>()
                .and_then(|rank| QMatroid::table(t.q, t.n, rank)),
        };
        built.map_err(D::Error::custom)
    }
}

impl QMatroid {
    pub fn uniform(q: u32, n: usize, r: usize) -> Result<Self> {
        fq::check_prime(q)?;
        if r > n {
            return Err(invalid(format!("uniform q-matroid needs r ≤ n, got r = {r}, n = {n}")));
        }
        Ok(QMatroid::Uniform { q, n, r })
    }

    /// A full table: every subspace of `F_q^n` must have a value.
    pub fn table(q: u32, n: usize, rank: BTreeMap<Subspace, usize>) -> Result<Self> {
        let all = lattice(q, n)?;
        if let Some(x) = all.iter().find(|x| !rank.contains_key(x)) {
            return Err(invalid(format!("rank table misses the subspace {:?}", x.basis())));
        }
        if rank.len() != all.len() {
            return Err(invalid("rank table has entries outside the ambient space"));
        }
        Ok(QMatroid::Table { q, n, rank })
    }

    /// Tabulates `f` over every subspace.
    pub fn from_fn(q: u32, n: usize, f: impl Fn(&Subspace) -> usize) -> Result<Self> {
        let rank = lattice(q, n)?.into_iter().map(|x| {
            let r = f(&x);
            (x, r)
        });
        Self::table(q, n, rank.collect())
    }

    pub fn field(&self) -> u32 {
        match self {
            QMatroid::Uniform { q, .. } | QMatroid::Table { q, .. } => *q,
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            QMatroid::Uniform { n, .. } | QMatroid::Table { n, .. } => *n,
        }
    }

    pub fn rank_of(&self, x: &Subspace) -> usize {
        match self {
            QMatroid::Uniform { r, .. } => x.dim().min(*r),
            QMatroid::Table { rank, .. } => rank[x],
        }
    }
}

fn lattice(q: u32, n: usize) -> Result<Vec<Subspace>> {
    let all = fq::all_subspaces(q, n)?;
    if all.len() > DEFAULT_LATTICE_CAP {
        return Err(Error::CapExceeded {
            what: "number of subspaces",
            value: all.len() as u128,
            cap: DEFAULT_LATTICE_CAP as u128,
            hint: "q-matroid tables are checked exhaustively over subspace pairs",
        });
    }
    Ok(all)
}

/// A violated q-matroid axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `φ(x) > dim x`.
    Bounded { x: Subspace },
    /// `x ≤ y` but `φ(x) > φ(y)`.
    Monotone { x: Subspace, y: Subspace },
    /// `φ(x ∨ y) + φ(x ∧ y) > φ(x) + φ(y)`.
    Submodular { x: Subspace, y: Subspace },
}

/// Checks the three axioms over all subspaces and pairs.
pub fn verify_q_matroid(m: &QMatroid) -> Result<Option<AxiomViolation>> {
    let all = lattice(m.field(), m.ambient())?;
    let phi: Vec<usize> = all.iter().map(|x| m.rank_of(x)).collect();
    let index: BTreeMap<&Subspace, usize> = all.iter().enumerate().map(|(i, x)| (x, i)).collect();
    if let Some(i) = (0..all.len()).find(|&i| phi[i] > all[i].dim()) {
        return Ok(Some(AxiomViolation::Bounded { x: all[i].clone() }));
    }
    for (i, x) in all.iter().enumerate() {
        for (j, y) in all.iter().enumerate() {
            if x.is_subspace_of(y) && phi[i] > phi[j] {
                return Ok(Some(AxiomViolation::Monotone { x: x.clone(), y: y.clone() }));
            }
        }
    }
    for (i, x) in all.iter().enumerate() {
        for (j, y) in all.iter().enumerate().skip(i + 1) {
            let join = phi[index[&x.join(y)]];
            let meet = phi[index[&x.meet(y)]];
            if join + meet > phi[i] + phi[j] {
                return Ok(Some(AxiomViolation::Submodular { x: x.clone(), y: y.clone() }));
            }
        }
    }
    Ok(None)
}

/// `P(φ) = {x : φ(x) = dim x}`, checked to be a pure order ideal.
pub fn independent_spaces(m: &QMatroid) -> Result<QPoset> {
    let spaces = fq::all_subspaces(m.field(), m.ambient())?.into_iter().filter(|x| m.rank_of(x) == x.dim()).collect();
    let p = QPoset::from_spaces(m.field(), m.ambient(), spaces)
        .map_err(|e| Error::InvariantViolation(format!("independent spaces: {e}")))?;
    if !p.is_pure() {
        return Err(Error::InvariantViolation("independent spaces are not pure".into()));
    }
    Ok(p)
}
