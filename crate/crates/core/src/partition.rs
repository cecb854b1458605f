//! Partition posets: set partitions under reverse refinement, the lex order
//! `<_ℓ` and its graphs `G(π)`, falling-factorial expansions of chromatic
//! polynomials, and shelling checks.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::combinat::{self, set_partitions};
use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::families::{family_certificate, family_rnk, FamilyKind, FamilySpec};
use crate::graph::{is_chordal, sigma_poly, SimpleGraph};
use crate::linalg;
use crate::poly::{falling_factorial, falling_transform, Direction, Polynomial};
use crate::poset::{self, FinitePoset, HVector};

/// Largest ground set for which posets of partitions are built explicitly.
pub const DEFAULT_GROUND_CAP: usize = 9;

/// A partition of `{1, …, n}`. Blocks are kept in canonical order: sorted by
/// maximum, each block listed in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct PartitionJson {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PartitionJson::deserialize(d)?;
        SetPartition::new(raw.n, raw.blocks).map_err(serde::de::Error::custom)
    }
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for b in &blocks {
            if b.is_empty() {
                return Err(invalid("blocks are nonempty"));
            }
            for &x in b {
                if x == 0 || x > n {
                    return Err(invalid(format!("element {x} is outside 1..={n}")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(invalid(format!("element {x} appears twice")));
                }
            }
        }
        if let Some(x) = (1..=n).find(|&x| !seen[x]) {
            return Err(invalid(format!("element {x} is in no block")));
        }
        let mut blocks = blocks;
        for b in blocks.iter_mut() {
            b.sort_unstable_by(|a, b| b.cmp(a));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// From a block label per element (`labels[i]` is the block of `i + 1`).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(i + 1);
        }
        SetPartition::new(labels.len(), groups.into_values().collect()).expect("labels define a partition")
    }

    /// Every partition of `[n]` into `k` blocks, in `<_ℓ` order.
    pub fn all_with_blocks(n: usize, k: usize) -> Vec<SetPartition> {
        let mut out: Vec<SetPartition> =
            set_partitions(n).iter().filter(|w| block_count(w) == k).map(|w| Self::from_labels(w)).collect();
        out.sort_by_key(SetPartition::word);
        out
    }

    pub fn ground(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `σ(π) = v_1 v_2 ⋯ v_k` as a sequence of integers.
    pub fn word(&self) -> Vec<usize> {
        self.blocks.concat()
    }

    /// Restricted growth labels: the block index of each element by first
    /// appearance, a unique key per partition.
    pub fn labels(&self) -> Vec<usize> {
        let mut owner = vec![0usize; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                owner[x - 1] = i;
            }
        }
        relabel(&owner)
    }

    /// `π[v_i, v_j]`, with blocks indexed canonically.
    pub fn merge(&self, i: usize, j: usize) -> SetPartition {
        let mut blocks: Vec<Vec<usize>> =
            self.blocks.iter().enumerate().filter(|&(b, _)| b != i && b != j).map(|(_, b)| b.clone()).collect();
        blocks.push([self.blocks[i].clone(), self.blocks[j].clone()].concat());
        SetPartition::new(self.n, blocks).unwrap()
    }

    /// `self ≤ other` in the dual order: `other` refines `self`.
    pub fn below(&self, other: &SetPartition) -> bool {
        let mine = self.labels();
        other.blocks.iter().all(|b| b.iter().all(|&x| mine[x - 1] == mine[b[0] - 1]))
    }

    /// The meet in the dual order: the finest common coarsening.
    pub fn meet(&self, other: &SetPartition) -> SetPartition {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for b in self.blocks.iter().chain(&other.blocks) {
            for &x in &b[1..] {
                let (a, c) = (find(&mut parent, b[0] - 1), find(&mut parent, x - 1));
                parent[a] = c;
            }
        }
        let roots: Vec<usize> = (0..self.n).map(|x| find(&mut parent, x)).collect();
        Self::from_labels(&roots)
    }

    /// The partition of `[n]` obtained by merging blocks as `grouping` groups
    /// their indices.
    fn coarsen(&self, grouping: &[usize]) -> SetPartition {
        let mut owner = vec![0usize; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                owner[x - 1] = grouping[i];
            }
        }
        Self::from_labels(&owner)
    }

    /// Everything below `self` in the dual order.
    pub fn coarsenings(&self) -> Vec<SetPartition> {
        set_partitions(self.block_count()).iter().map(|g| self.coarsen(g)).collect()
    }
}

fn block_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

fn relabel(owner: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    owner
        .iter()
        .map(|&o| {
            let next = map.len();
            *map.entry(o).or_insert(next)
        })
        .collect()
}

/// Compares `σ(π)` and `σ(ρ)` lexicographically.
pub fn lex_order(pi: &SetPartition, rho: &SetPartition) -> Result<Ordering> {
    if pi.n != rho.n || pi.block_count() != rho.block_count() {
        return Err(invalid(format!(
            "lex order compares partitions of the same [n] into the same number of blocks, got {}/{} and {}/{}",
            pi.n,
            pi.block_count(),
            rho.n,
            rho.block_count()
        )));
    }
    Ok(pi.word().cmp(&rho.word()))
}

/// `G(π)` on the block indices `0..k`: `{i, j}` with `i < j` is a non-edge
/// iff `v_1, …, v_i` are singletons and `v_i` lies below every later block.
pub fn g_graph(pi: &SetPartition) -> SimpleGraph {
    let b = &pi.blocks;
    let k = b.len();
    let free = |i: usize| b[..=i].iter().all(|v| v.len() == 1) && b[i + 1..].iter().all(|v| b[i][0] < *v.last().unwrap());
    let edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, _)| !free(i)).collect();
    SimpleGraph::new(k, edges).unwrap()
}

/// `G(π)` from its definition: `{v_i, v_j}` is an edge iff some
/// `π′ <_ℓ π` with the same number of blocks has `π ∧ π′ = π[v_i, v_j]`.
pub fn g_graph_definitional(pi: &SetPartition) -> Result<SimpleGraph> {
    if pi.n > 8 {
        return Err(Error::CapExceeded { what: "ground set", value: pi.n as u128, cap: 8, hint: "use g_graph" });
    }
    let k = pi.block_count();
    let word = pi.word();
    let meets: BTreeSet<SetPartition> = SetPartition::all_with_blocks(pi.n, k)
        .into_iter()
        .filter(|other| other.word() < word)
        .map(|other| pi.meet(&other))
        .collect();
    let edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| meets.contains(&pi.merge(i, j)));
    SimpleGraph::new(k, edges.collect())
}

/// Which falling-factorial family to expand in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FallingVariant {
    /// `t^{n−k} (t)_k`, `k = 1..=n`, for a polynomial of degree `n`.
    K,
    /// `t^{n−k} (t)_{k+1}`, `k = 0..=n`, for a polynomial of degree `n + 1`.
    KPlusOne,
}

/// Coordinates of `chi` in the chosen family. With [`FallingVariant::K`]
/// entry `i` belongs to `k = i + 1`; with [`FallingVariant::KPlusOne`] to `k = i`.
pub fn falling_basis_expansion(chi: &Polynomial, n: usize, variant: FallingVariant) -> Result<HVector> {
    let (degree, basis): (usize, Vec<Polynomial>) = match variant {
        FallingVariant::K => (n, (1..=n).map(|k| falling_factorial(k).shift(n - k)).collect()),
        FallingVariant::KPlusOne => (n + 1, (0..=n).map(|k| falling_factorial(k + 1).shift(n - k)).collect()),
    };
    if chi.degree() != Some(degree) {
        return Err(Error::DimensionMismatch(format!(
            "expected a polynomial of degree {degree} for n = {n}, got {:?}",
            chi.degree()
        )));
    }
    let a: Vec<Vec<Rational>> = (0..=degree).map(|d| basis.iter().map(|b| b.coeff(d)).collect()).collect();
    let rhs: Vec<Rational> = (0..=degree).map(|d| chi.coeff(d)).collect();
    let sol = linalg::solve(&a, &rhs);
    Ok(HVector { values: sol.values, status: sol.status })
}

/// A pure partition poset: the order ideal of the dual partition lattice on
/// `[ground]` generated by facets with equal block counts. Each facet's
/// blocks serve as its coordinates in `Π′_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionComplex {
    ground: usize,
    facets: Vec<SetPartition>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    n: usize,
    facets: Vec<Vec<Vec<usize>>>,
}

impl Serialize for PartitionComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson { n: self.ground, facets: self.facets.iter().map(|f| f.blocks.clone()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartitionComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexJson::deserialize(d)?;
        raw.facets
            .into_iter()
            .map(|b| SetPartition::new(raw.n, b))
            .collect::<Result<Vec<_>>>()
            .and_then(PartitionComplex::new)
            .map_err(serde::de::Error::custom)
    }
}

impl PartitionComplex {
    pub fn new(facets: Vec<SetPartition>) -> Result<Self> {
        let first = facets.first().ok_or_else(|| invalid("at least one facet is required"))?;
        let (ground, k) = (first.n, first.block_count());
        if ground > DEFAULT_GROUND_CAP {
            return Err(Error::CapExceeded {
                what: "ground set",
                value: ground as u128,
                cap: DEFAULT_GROUND_CAP as u128,
                hint: "partition posets are built explicitly",
            });
        }
        if facets.iter().any(|f| f.n != ground) {
            return Err(Error::DimensionMismatch("facets partition different ground sets".into()));
        }
        if facets.iter().any(|f| f.block_count() != k) {
            return Err(Error::NotPure("facets have different numbers of blocks".into()));
        }
        if facets.iter().collect::<BTreeSet<_>>().len() != facets.len() {
            return Err(invalid("facets are listed twice"));
        }
        Ok(PartitionComplex { ground, facets })
    }

    /// `⟨Π_n^k⟩` with facets in `<_ℓ` order.
    pub fn lex(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(invalid(format!("need 1 ≤ k ≤ n, got n = {n}, k = {k}")));
        }
        Self::new(SetPartition::all_with_blocks(n, k))
    }

    pub fn facets(&self) -> &[SetPartition] {
        &self.facets
    }

    pub fn rank(&self) -> usize {
        self.facets[0].block_count() - 1
    }

    /// The poset of all coarsenings of facets, covers by merging two blocks.
    pub fn to_poset(&self) -> Result<FinitePoset> {
        let mut elements: BTreeSet<SetPartition> = BTreeSet::new();
        for f in &self.facets {
            elements.extend(f.coarsenings());
        }
        let elements: Vec<SetPartition> = elements.into_iter().collect();
        let index: HashMap<&SetPartition, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut covers = Vec::new();
        for (hi, e) in elements.iter().enumerate() {
            let k = e.block_count();
            let lows: BTreeSet<usize> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| index[&e.merge(i, j)]).collect();
            covers.extend(lows.into_iter().map(|lo| (lo, hi)));
        }
        let labels = elements
            .iter()
            .map(|e| e.blocks.iter().map(|b| b.iter().rev().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join("|"))
            .collect();
        FinitePoset::new(elements.len(), covers, Some(labels))
    }
}

/// The h-vector of a partition poset against the partition family.
pub fn partition_h_vector(p: &FinitePoset) -> Result<HVector> {
    let rank = poset::rank_generating(p).degree().unwrap_or(0);
    poset::h_vector(p, &family_certificate(&FamilySpec::new(FamilyKind::Partition, rank + 1)?)?)
}

/// One step of a partition shelling check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionStep {
    pub s1: bool,
    /// `G(F_k)` on the block indices of `F_k`.
    pub graph: SimpleGraph,
    pub chordal: bool,
    /// `f_{P_k} − f_{P_{k-1}} = σ_G(t)/t`.
    pub increment_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionShelling {
    pub is_shelling: bool,
    /// Steps `2..=m` in order, up to the first failure.
    pub steps: Vec<PartitionStep>,
    pub failing_step: Option<usize>,
    pub h: Option<HVector>,
}

/// Checks (S1) and chordality (C) for `order` (indices into the facets).
pub fn partition_shelling_check(p: &PartitionComplex, order: &[usize]) -> Result<PartitionShelling> {
    let m = p.facets.len();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..m).collect::<Vec<_>>() {
        return Err(invalid(format!("order must be a permutation of 0..{m}")));
    }
    let mut covered: BTreeSet<SetPartition> = BTreeSet::new();
    let mut steps = Vec::new();
    for (k, &fi) in order.iter().enumerate() {
        let f = &p.facets[fi];
        let faces = f.coarsenings();
        if k > 0 {
            let blocks = f.block_count();
            let meets: BTreeSet<SetPartition> = order[..k].iter().map(|&j| f.meet(&p.facets[j])).collect();
            let maximal: Vec<&SetPartition> =
                meets.iter().filter(|x| !meets.iter().any(|y| *x != y && x.below(y))).collect();
            let s1 = maximal.iter().all(|x| x.block_count() + 1 == blocks);
            let edges: Vec<(usize, usize)> = (0..blocks)
                .flat_map(|i| (i + 1..blocks).map(move |j| (i, j)))
                .filter(|&(i, j)| maximal.contains(&&f.merge(i, j)))
                .collect();
            let graph = SimpleGraph::new(blocks, edges)?;
            let chordal = is_chordal(&graph).chordal;
            let increment: Polynomial =
                faces.iter().filter(|x| !covered.contains(*x)).map(|x| Polynomial::t_pow(x.block_count() - 1)).sum();
            let increment_matches = s1 && increment == sigma_poly(&graph)?.unshift(1)?;
            steps.push(PartitionStep { s1, graph, chordal, increment_matches });
            if !(s1 && chordal) {
                return Ok(PartitionShelling { is_shelling: false, steps, failing_step: Some(k), h: None });
            }
        }
        covered.extend(faces);
    }
    let h = partition_h_vector(&p.to_poset()?)?;
    if !h.is_nonnegative() {
        return Err(Error::InvariantViolation(format!("a shelling produced a negative h-vector {:?}", h.values)));
    }
    Ok(PartitionShelling { is_shelling: true, steps, failing_step: None, h: Some(h) })
}

/// The h-vector of `⟨Π_{n+1}^{k+1}⟩` by the closed form `((i+1) S(n−k+i, i+1))_i`
/// and by direct expansion of the explicit poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiNkH {
    #[serde(with = "exact::vec_str")]
    pub closed_form: Vec<Rational>,
    pub direct: HVector,
    pub agree: bool,
}

pub fn pi_nk_h_vector(n: usize, k: usize) -> Result<PiNkH> {
    if k >= n || n > DEFAULT_GROUND_CAP - 1 {
        return Err(invalid(format!("need 0 ≤ k < n ≤ {}, got n = {n}, k = {k}", DEFAULT_GROUND_CAP - 1)));
    }
    let closed_form: Vec<Rational> =
        (0..=k).map(|i| exact::big(&(combinat::stirling2(n - k + i, i + 1) * (i as u64 + 1)))).collect();
    let ideal = PartitionComplex::lex(n + 1, k + 1)?;
    let direct = partition_h_vector(&ideal.to_poset()?)?;
    let agree = direct.values == closed_form;
    Ok(PiNkH { closed_form, direct, agree })
}

/// `R_{n,k} = σ_{B_{n+1,k+1}}(t)/t = S(t^{n−k}(t)_{k+1})/t` and
/// `R_{n+1,k} = R_{n+1,k+1} + (k+1) R_{n,k}` for all `k ≤ n ≤ n_max`.
pub fn partition_rnk_identities(n_max: usize) -> Result<bool> {
    let spec = FamilySpec::new(FamilyKind::Partition, n_max + 1)?;
    for n in 0..=n_max {
        for k in 0..=n {
            let r = family_rnk(&spec, n, k)?;
            let via_s = falling_transform(&falling_factorial(k + 1).shift(n - k), Direction::Forward).unshift(1)?;
            let via_graph = sigma_poly(&SimpleGraph::clique_plus_isolated(n + 1, k + 1))?.unshift(1)?;
            if r != via_s || r != via_graph {
                return Ok(false);
            }
            if n < n_max {
                let lhs = family_rnk(&spec, n + 1, k)?;
                let rhs = family_rnk(&spec, n + 1, k + 1)? + r.scale(&exact::int(k as i64 + 1));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
