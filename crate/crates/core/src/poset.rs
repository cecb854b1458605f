//! Finite posets: quasi-rank, matrix extraction, rank selection, chain and
//! Möbius oracles, h-vectors, and the realization of admissible matrices.

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::linalg::{self, ExpansionStatus};
use crate::poly::Polynomial;
use crate::tnmat::{LowerTriMatrix, ResolutionCertificate};

/// Default largest element count produced by [`poset_from_matrix`].
pub const DEFAULT_ELEMENT_CAP: usize = 50_000;

/// A finite poset given by its cover relations, with cached down-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    covers: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
    lower: Vec<Vec<usize>>,
    topo: Vec<usize>,
    down: Vec<FixedBitSet>,
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    size: usize,
    covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Serialize for FinitePoset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetJson {
            size: self.size(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinitePoset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PosetJson::deserialize(d)?;
        FinitePoset::new(raw.size, raw.covers.iter().map(|c| (c[0], c[1])).collect(), raw.labels)
            .map_err(serde::de::Error::custom)
    }
}

impl FinitePoset {
    /// Build from cover pairs `(lower, upper)`. The pairs must form an acyclic
    /// relation with no cover implied by the others.
    pub fn new(size: usize, covers: Vec<(usize, usize)>, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != size {
                return Err(Error::DimensionMismatch(format!("{} labels for {size} elements", l.len())));
            }
        }
        let mut lower = vec![Vec::new(); size];
        let mut upper_count = vec![0usize; size];
        for &(a, b) in &covers {
            if a >= size || b >= size {
                return Err(invalid(format!("cover ({a},{b}) names an element outside 0..{size}")));
            }
            if a == b {
                return Err(invalid(format!("cover ({a},{a}) is a loop")));
            }
            if lower[b].contains(&a) {
                return Err(invalid(format!("cover ({a},{b}) is listed twice")));
            }
            lower[b].push(a);
            upper_count[a] += 1;
        }
        // Kahn's algorithm from the top, then reversed
        let mut pending = upper_count;
        let mut stack: Vec<usize> = (0..size).filter(|&x| pending[x] == 0).collect();
        let mut topo = Vec::with_capacity(size);
        while let Some(x) = stack.pop() {
            topo.push(x);
            for &a in &lower[x] {
                pending[a] -= 1;
                if pending[a] == 0 {
                    stack.push(a);
                }
            }
        }
        if topo.len() != size {
            return Err(invalid("cover relation contains a cycle"));
        }
        topo.reverse();
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        for &x in &topo {
            let mut set = FixedBitSet::with_capacity(size);
            set.insert(x);
            for &a in &lower[x] {
                set.union_with(&down[a]);
            }
            down[x] = set;
        }
        for (b, lows) in lower.iter().enumerate() {
            for &a in lows {
                if lows.iter().any(|&c| c != a && down[c].contains(a)) {
                    return Err(invalid(format!("cover ({a},{b}) is implied by other covers")));
                }
            }
        }
        Ok(FinitePoset { covers, labels, lower, topo, down })
    }

    /// Build from an order predicate `le(a, b)`, computing the covers.
    pub fn from_order(size: usize, le: impl Fn(usize, usize) -> bool, labels: Option<Vec<String>>) -> Result<Self> {
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        for b in 0..size {
            for a in 0..size {
                if a != b && le(a, b) {
                    down[b].insert(a);
                    up[a].insert(b);
                }
            }
        }
        let mut covers = Vec::new();
        for b in 0..size {
            for a in down[b].ones() {
                if down[b].is_disjoint(&up[a]) {
                    covers.push((a, b));
                }
            }
        }
        Self::new(size, covers, labels)
    }

    pub fn empty() -> Self {
        Self::new(0, Vec::new(), None).expect("the empty poset is valid")
    }

    pub fn chain(length: usize) -> Self {
        Self::new(length + 1, (0..length).map(|i| (i, i + 1)).collect(), None).expect("a chain is valid")
    }

    pub fn antichain(size: usize) -> Self {
        Self::new(size, Vec::new(), None).expect("an antichain is valid")
    }

    pub fn size(&self) -> usize {
        self.lower.len()
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.le(x, y)
    }

    /// `{z : z ≤ x}`, ascending.
    pub fn down_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.down[x].ones()
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// Every element appears after all elements below it.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.lower[x].is_empty()).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        let mut has_upper = vec![false; self.size()];
        for &(a, _) in &self.covers {
            has_upper[a] = true;
        }
        (0..self.size()).filter(|&x| !has_upper[x]).collect()
    }

    pub fn least(&self) -> Option<usize> {
        match self.minimal().as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }

    pub fn greatest(&self) -> Option<usize> {
        match self.maximal().as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }

    /// The induced subposet on `elements`, renumbered in the given order.
    pub fn induced(&self, elements: &[usize]) -> Result<Self> {
        if let Some(&x) = elements.iter().find(|&&x| x >= self.size()) {
            return Err(invalid(format!("element {x} is outside the poset")));
        }
        let labels = Some(elements.iter().map(|&x| self.label(x)).collect());
        Self::from_order(elements.len(), |a, b| self.le(elements[a], elements[b]), labels)
    }

    fn check_element(&self, x: usize) -> Result<()> {
        if x >= self.size() {
            return Err(invalid(format!("element {x} is outside the poset of size {}", self.size())));
        }
        Ok(())
    }
}

/// `ρ(x)`: the length of the longest chain ending at `x`.
pub fn quasi_rank(p: &FinitePoset) -> Vec<usize> {
    let mut rho = vec![0; p.size()];
    for &x in p.topological_order() {
        rho[x] = p.lower_covers(x).iter().map(|&c| rho[c] + 1).max().unwrap_or(0);
    }
    rho
}

fn rank_profile(p: &FinitePoset, rho: &[usize], x: usize) -> Vec<usize> {
    let mut counts = vec![0; rho[x] + 1];
    for z in p.down_set(x) {
        counts[rho[z]] += 1;
    }
    counts
}

/// `R(P)` with `r_{n,k} = |{z ≤ x : ρ(z) = k}|` for any `x` of quasi-rank `n`.
/// Fails with [`Error::NonUniform`] naming two elements that disagree.
pub fn extract_matrix(p: &FinitePoset) -> Result<LowerTriMatrix> {
    if p.size() == 0 {
        return Err(invalid("the empty poset has no matrix"));
    }
    let rho = quasi_rank(p);
    let top = *rho.iter().max().unwrap();
    let mut reps: Vec<Option<(usize, Vec<usize>)>> = vec![None; top + 1];
    for x in 0..p.size() {
        let prof = rank_profile(p, &rho, x);
        match &reps[rho[x]] {
            None => reps[rho[x]] = Some((x, prof)),
            Some((y, q)) => {
                if let Some(at) = (0..prof.len()).find(|&k| prof[k] != q[k]) {
                    return Err(Error::NonUniform { x: *y, y: x, rank: rho[x], at });
                }
            }
        }
    }
    let rows = reps
        .into_iter()
        .map(|r| r.expect("every rank below the top is attained").1.iter().map(|&c| exact::int(c as i64)).collect())
        .collect();
    LowerTriMatrix::new(rows)
}

/// `P_S`, the induced subposet on elements whose quasi-rank lies in `S`.
pub fn rank_select(p: &FinitePoset, s: &[usize]) -> Result<FinitePoset> {
    if s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("rank set must be strictly increasing"));
    }
    let rho = quasi_rank(p);
    let elements: Vec<usize> = (0..p.size()).filter(|&x| s.binary_search(&rho[x]).is_ok()).collect();
    let sel = p.induced(&elements)?;
    let rho_s = quasi_rank(&sel);
    for (i, &x) in elements.iter().enumerate() {
        if s[rho_s[i]] != rho[x] {
            return Err(Error::InvariantViolation(format!(
                "rank selection moved element {x} from rank {} to position {}",
                rho[x], rho_s[i]
            )));
        }
    }
    if let (Ok(full), Ok(sub)) = (extract_matrix(p), extract_matrix(&sel)) {
        let present: Vec<usize> = s.iter().copied().filter(|&k| k <= full.order()).collect();
        if full.principal_submatrix(&present)? != sub {
            return Err(Error::InvariantViolation("rank-selected matrix is not the principal submatrix".into()));
        }
    }
    Ok(sel)
}

/// `Σ_j |{x_0 < ⋯ < x_j = x : ρ(x_0) = 0}| t^j` by enumeration.
pub fn chains_direct(p: &FinitePoset, x: usize) -> Result<Polynomial> {
    p.check_element(x)?;
    let rho = quasi_rank(p);
    let mut g: Vec<Option<Polynomial>> = vec![None; p.size()];
    for &z in p.topological_order() {
        if !p.le(z, x) {
            continue;
        }
        let below: Polynomial = p.down_set(z).filter(|&w| w != z).map(|w| g[w].clone().unwrap()).sum();
        let base = if rho[z] == 0 { Polynomial::one() } else { Polynomial::zero() };
        g[z] = Some(base + below.shift(1));
    }
    Ok(g[x].take().unwrap())
}

/// `c_Q(t) = Σ_C t^{|C|}` over all chains, the empty chain included.
pub fn chain_polynomial_poset(q: &FinitePoset) -> Polynomial {
    let mut e: Vec<Polynomial> = vec![Polynomial::zero(); q.size()];
    for &z in q.topological_order() {
        let below: Polynomial = q.down_set(z).filter(|&w| w != z).map(|w| e[w].clone()).sum();
        e[z] = (Polynomial::one() + below).shift(1);
    }
    Polynomial::one() + e.into_iter().sum::<Polynomial>()
}

/// `μ(x, y)` by the defining recursion over `[x, y]`.
pub fn mobius_direct(p: &FinitePoset, x: usize, y: usize) -> Result<Rational> {
    p.check_element(x)?;
    p.check_element(y)?;
    if !p.le(x, y) {
        return Err(invalid(format!("{} is not below {}", p.label(x), p.label(y))));
    }
    let mut mu: Vec<Rational> = vec![Rational::zero(); p.size()];
    for &z in p.topological_order() {
        if !p.le(x, z) || !p.le(z, y) {
            continue;
        }
        mu[z] = if z == x {
            Rational::one()
        } else {
            -p.down_set(z).filter(|&w| w != z && p.le(x, w)).map(|w| mu[w].clone()).sum::<Rational>()
        };
    }
    Ok(mu[y].clone())
}

/// A quasi-rank uniform poset with a greatest element realizing `R`, built
/// layer by layer: each new rank adds twins of a fixed element per rank,
/// new minimal elements and a new top.
pub fn poset_from_matrix(r: &LowerTriMatrix) -> Result<FinitePoset> {
    poset_from_matrix_capped(r, DEFAULT_ELEMENT_CAP)
}

pub fn poset_from_matrix_capped(r: &LowerTriMatrix, cap: usize) -> Result<FinitePoset> {
    r.ensure_unit_diagonal()?;
    let mut counts: Vec<Vec<usize>> = Vec::with_capacity(r.size());
    for (n, row) in r.rows().iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (k, x) in row.iter().enumerate() {
            if !exact::is_integer(x) || x.is_negative() {
                return Err(invalid(format!(
                    "entry ({n},{k}) = {} is not a nonnegative integer",
                    exact::format(x)
                )));
            }
            let v = usize::try_from(x.to_integer()).ok().filter(|&v| v <= cap).ok_or(Error::CapExceeded {
                what: "matrix entry",
                value: u128::try_from(x.to_integer()).unwrap_or(u128::MAX),
                cap: cap as u128,
                hint: "the realization has at least that many elements",
            })?;
            out.push(v);
        }
        counts.push(out);
    }
    for n in 0..r.order() {
        for k in 0..=n {
            if counts[n][k] > counts[n + 1][k] {
                return Err(invalid(format!(
                    "column {k} decreases: entry ({n},{k}) = {} exceeds entry ({},{k}) = {}",
                    counts[n][k],
                    n + 1,
                    counts[n + 1][k]
                )));
            }
        }
    }
    let total: usize = counts[r.order()].iter().sum();
    if total > cap {
        return Err(Error::CapExceeded {
            what: "element count",
            value: total as u128,
            cap: cap as u128,
            hint: "reduce the matrix order or its entries",
        });
    }
    // strict down-sets, indexed by creation order
    let mut below: Vec<Vec<usize>> = vec![Vec::new()];
    let mut first_at_rank: Vec<usize> = vec![0];
    for n in 0..r.order() {
        let existing = below.len();
        for k in 0..=n {
            let fresh = counts[n + 1][k] - counts[n][k];
            for _ in 0..fresh {
                let twin = if k == 0 { Vec::new() } else { below[first_at_rank[k]].clone() };
                below.push(twin);
            }
        }
        let top = below.len();
        below.push((0..top).collect());
        first_at_rank.push(top);
        debug_assert!(below.len() > existing);
    }
    let size = below.len();
    let mut strict = vec![FixedBitSet::with_capacity(size); size];
    for (y, set) in below.iter().enumerate() {
        for &x in set {
            strict[y].insert(x);
        }
    }
    FinitePoset::from_order(size, |a, b| strict[b].contains(a), None)
}

/// Coordinates of `f_Q` in the basis `R_{r,0}, …, R_{r,r}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVector {
    #[serde(with = "exact::vec_str")]
    pub values: Vec<Rational>,
    pub status: ExpansionStatus,
}

impl HVector {
    /// True when an expansion exists and the reported one is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.status != ExpansionStatus::NotExpandable && self.values.iter().all(exact::is_nonnegative)
    }
}

/// The rank generating polynomial `f_Q(t) = Σ_x t^{ν(x)}`.
pub fn rank_generating(q: &FinitePoset) -> Polynomial {
    quasi_rank(q).into_iter().map(Polynomial::t_pow).sum()
}

/// Check `Σ_{x ≤ y} t^{ν(x)} = R_{ν(y),0}(t)` for every `y`.
pub fn check_combinatorial(q: &FinitePoset, family: &ResolutionCertificate) -> Result<()> {
    let nu = quasi_rank(q);
    for y in 0..q.size() {
        if nu[y] > family.order() {
            return Err(Error::DegreeTooLarge { degree: nu[y], bound: family.order() });
        }
        let ideal: Polynomial = q.down_set(y).map(|x| Polynomial::t_pow(nu[x])).sum();
        if &ideal != family.r(nu[y], 0) {
            return Err(Error::NotCombinatorial { element: y });
        }
    }
    Ok(())
}

/// Solve `f_Q(t) = Σ_k h_k R_{r,k}(t)` with `r` the rank of `Q`.
pub fn h_vector(q: &FinitePoset, family: &ResolutionCertificate) -> Result<HVector> {
    if q.size() == 0 {
        return Err(invalid("the empty poset has no h-vector"));
    }
    check_combinatorial(q, family)?;
    let f = rank_generating(q);
    let r = f.degree().unwrap();
    let a: Vec<Vec<Rational>> = (0..=r).map(|d| (0..=r).map(|k| family.r(r, k).coeff(d)).collect()).collect();
    let b: Vec<Rational> = (0..=r).map(|d| f.coeff(d)).collect();
    let sol = linalg::solve(&a, &b);
    Ok(HVector { values: sol.values, status: sol.status })
}

/// `P̂`: `P` with a new element above everything.
pub fn hat(p: &FinitePoset) -> FinitePoset {
    let n = p.size();
    let mut covers = p.covers().to_vec();
    covers.extend(p.maximal().into_iter().map(|m| (m, n)));
    let labels = p.labels().map(|l| {
        let mut l = l.to_vec();
        l.push("1̂".to_string());
        l
    });
    FinitePoset::new(n + 1, covers, labels).expect("adjoining a top keeps the cover relation valid")
}

/// `R̄(P)` with `r̄_{n,k} = |{z ≥ x : ρ(z) = n}|` for any `x` of quasi-rank `k`,
/// read off a finite truncation closed downward.
pub fn wupho_matrix(p: &FinitePoset) -> Result<LowerTriMatrix> {
    if p.size() == 0 {
        return Err(invalid("the empty poset has no matrix"));
    }
    let rho = quasi_rank(p);
    let top = *rho.iter().max().unwrap();
    let up_profile = |x: usize| -> Vec<usize> {
        let mut counts = vec![0; top + 1];
        for z in 0..p.size() {
            if p.le(x, z) {
                counts[rho[z]] += 1;
            }
        }
        counts
    };
    let mut reps: Vec<Option<(usize, Vec<usize>)>> = vec![None; top + 1];
    for x in 0..p.size() {
        let prof = up_profile(x);
        match &reps[rho[x]] {
            None => reps[rho[x]] = Some((x, prof)),
            Some((y, q)) => {
                if let Some(at) = (rho[x]..=top).find(|&n| prof[n] != q[n]) {
                    return Err(Error::NonUniform { x: *y, y: x, rank: rho[x], at });
                }
            }
        }
    }
    let cols: Vec<Vec<usize>> = reps.into_iter().map(|r| r.unwrap().1).collect();
    let rows = (0..=top).map(|n| (0..=n).map(|k| exact::int(cols[k][n] as i64)).collect()).collect();
    LowerTriMatrix::new(rows)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::chain;
    use crate::exact::int;
    use crate::tnmat::whitney_reduce;

    /// The 11-element quasi-rank uniform poset a..k.
    pub(crate) fn figure_two() -> FinitePoset {
        let names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k"];
        let idx = |s: &str| names.iter().position(|&n| n == s).unwrap();
        let pairs = [
            ("a", "b"),
            ("a", "c"),
            ("a", "f"),
            ("a", "g"),
            ("c", "d"),
            ("d", "e"),
            ("b", "e"),
            ("g", "h"),
            ("h", "i"),
            ("f", "i"),
            ("e", "j"),
            ("i", "j"),
            ("i", "k"),
            ("e", "k"),
        ];
        let covers = pairs.iter().map(|&(x, y)| (idx(x), idx(y))).collect();
        FinitePoset::new(11, covers, Some(names.iter().map(|s| s.to_string()).collect())).unwrap()
    }

    pub(crate) fn boolean(n: usize) -> FinitePoset {
        FinitePoset::from_order(1 << n, |a, b| a & b == a, None).unwrap()
    }

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn construction_rejects_bad_covers() {
        assert!(FinitePoset::new(2, vec![(0, 1), (1, 0)], None).is_err());
        assert!(FinitePoset::new(3, vec![(0, 1), (1, 2), (0, 2)], None).is_err());
        assert!(FinitePoset::new(2, vec![(0, 2)], None).is_err());
        assert!(FinitePoset::new(2, vec![(0, 1), (0, 1)], None).is_err());
    }

    #[test]
    fn quasi_rank_examples() {
        let fig = figure_two();
        assert_eq!(quasi_rank(&fig), vec![0, 1, 1, 2, 3, 1, 1, 2, 3, 4, 4]);
        assert_eq!(quasi_rank(&FinitePoset::antichain(4)), vec![0; 4]);
        assert_eq!(quasi_rank(&FinitePoset::chain(3)), vec![0, 1, 2, 3]);
    }

    #[test]
    fn extract_examples() {
        assert_eq!(extract_matrix(&boolean(3)).unwrap(), LowerTriMatrix::pascal(3));
        let fig = LowerTriMatrix::from_ints(&[&[1], &[1, 1], &[1, 1, 1], &[1, 2, 1, 1], &[1, 4, 2, 2, 1]]).unwrap();
        assert_eq!(extract_matrix(&figure_two()).unwrap(), fig);
        let v = FinitePoset::new(3, vec![(0, 2), (1, 2)], None).unwrap();
        assert_eq!(extract_matrix(&v).unwrap(), LowerTriMatrix::from_ints(&[&[1], &[2, 1]]).unwrap());
        // one element of rank 1 sees a single minimal element, another sees two
        let bad = FinitePoset::new(5, vec![(0, 3), (1, 4), (2, 4)], None).unwrap();
        assert_eq!(extract_matrix(&bad), Err(Error::NonUniform { x: 3, y: 4, rank: 1, at: 0 }));
    }

    #[test]
    fn rank_select_examples() {
        let sel = rank_select(&boolean(4), &[0, 2, 4]).unwrap();
        assert_eq!(extract_matrix(&sel).unwrap(), LowerTriMatrix::from_ints(&[&[1], &[1, 1], &[1, 6, 1]]).unwrap());
        let fig = figure_two();
        assert_eq!(rank_select(&fig, &[0, 1, 2, 3, 4]).unwrap(), fig.induced(&(0..11).collect::<Vec<_>>()).unwrap());
        let short = rank_select(&FinitePoset::chain(2), &[0, 2]).unwrap();
        assert_eq!(short.size(), 2);
        assert_eq!(short.covers(), &[(0, 1)]);
    }

    #[test]
    fn chains_examples() {
        let b3 = boolean(3);
        assert_eq!(chains_direct(&b3, 7).unwrap(), p(&[0, 1, 6, 6]));
        assert_eq!(chains_direct(&b3, 0).unwrap(), Polynomial::one());
        let fig = figure_two();
        let fam = chain::chain_polynomials(&extract_matrix(&fig).unwrap(), 4).unwrap();
        let rho = quasi_rank(&fig);
        for x in 0..fig.size() {
            assert_eq!(&chains_direct(&fig, x).unwrap(), fam.p(rho[x]));
        }
    }

    #[test]
    fn chain_polynomial_examples() {
        assert_eq!(chain_polynomial_poset(&FinitePoset::antichain(1)), p(&[1, 1]));
        assert_eq!(chain_polynomial_poset(&FinitePoset::antichain(2)), p(&[1, 2]));
        let b2 = boolean(2);
        assert_eq!(chain_polynomial_poset(&b2), p(&[1, 4, 5, 2]));
        // c_Q = t^{-1}(1+t) p_{n+1} of Q̂
        let m = extract_matrix(&hat(&b2)).unwrap();
        let fam = chain::chain_polynomials(&m, m.order()).unwrap();
        let expected = (p(&[1, 1]) * fam.p(m.order()).clone()).unshift(1).unwrap();
        assert_eq!(chain_polynomial_poset(&b2), expected);
    }

    #[test]
    fn mobius_examples() {
        let b3 = boolean(3);
        assert_eq!(mobius_direct(&b3, 0, 7).unwrap(), int(-1));
        assert_eq!(mobius_direct(&b3, 3, 3).unwrap(), int(1));
        assert!(mobius_direct(&b3, 1, 2).is_err());
        let fig = figure_two();
        let m = extract_matrix(&fig).unwrap();
        let rho = quasi_rank(&fig);
        let all: Vec<usize> = (0..=4).collect();
        for x in 0..fig.size() {
            assert_eq!(mobius_direct(&fig, 0, x).unwrap(), chain::mobius_rank_selected(&m, &all, rho[x]).unwrap());
        }
    }

    #[test]
    fn realization_round_trips() {
        for m in [
            LowerTriMatrix::pascal(2),
            LowerTriMatrix::pascal(4),
            LowerTriMatrix::from_ints(&[&[1], &[2, 1], &[2, 3, 1]]).unwrap(),
            extract_matrix(&figure_two()).unwrap(),
        ] {
            let poset = poset_from_matrix(&m).unwrap();
            assert_eq!(extract_matrix(&poset).unwrap(), m);
            assert!(poset.greatest().is_some());
        }
    }

    #[test]
    fn realization_rejects_bad_matrices() {
        // the identity drops from r_{0,0} = 1 to r_{1,0} = 0
        let err = poset_from_matrix(&LowerTriMatrix::identity(2)).unwrap_err();
        assert!(err.to_string().contains("entry (0,0) = 1 exceeds entry (1,0) = 0"), "{err}");
        let half = LowerTriMatrix::new(vec![vec![int(1)], vec![exact::ratio(1, 2), int(1)]]).unwrap();
        assert!(poset_from_matrix(&half).unwrap_err().to_string().contains("entry (1,0)"));
    }

    #[test]
    fn h_vector_examples() {
        let pascal = whitney_reduce(&LowerTriMatrix::pascal(3)).unwrap().unwrap();
        let h = h_vector(&boolean(3), &pascal).unwrap();
        assert_eq!(h.values, vec![int(1), int(0), int(0), int(0)]);
        assert_eq!(h.status, ExpansionStatus::Unique);
        // boundary of a square: 0̂, four vertices, four edges
        let covers = vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 5), (2, 6), (3, 6), (3, 7), (4, 7), (4, 8), (1, 8)];
        let square = FinitePoset::new(9, covers, None).unwrap();
        let cubical = LowerTriMatrix::from_ints(&[&[1], &[1, 1], &[1, 2, 1]]).unwrap();
        let cert = whitney_reduce(&cubical).unwrap().unwrap();
        let h = h_vector(&square, &cert).unwrap();
        assert_eq!(h.values, vec![int(1), int(2), int(1)]);
        assert!(h.is_nonnegative());
        // the filled square is not a Boolean complex
        let filled = hat(&square);
        assert_eq!(h_vector(&filled, &pascal), Err(Error::NotCombinatorial { element: 9 }));
    }

    #[test]
    fn hat_and_tn_equivalence() {
        let v = hat(&FinitePoset::antichain(2));
        assert_eq!(v.covers(), &[(0, 2), (1, 2)]);
        assert_eq!(hat(&FinitePoset::empty()).size(), 1);
        let b3 = hat(&boolean(3));
        assert_eq!(extract_matrix(&b3).unwrap().row(4), &[int(1), int(3), int(3), int(1), int(1)]);
        // P-positive iff the hat is TN
        let pascal = whitney_reduce(&LowerTriMatrix::pascal(4)).unwrap().unwrap();
        let q = boolean(3);
        let h = h_vector(&q, &pascal).unwrap();
        let hat_tn = whitney_reduce(&extract_matrix(&hat(&q)).unwrap()).unwrap().is_ok();
        assert_eq!(h.is_nonnegative(), hat_tn);
    }

    #[test]
    fn wupho_examples() {
        let m = wupho_matrix(&FinitePoset::chain(4)).unwrap();
        assert_eq!(m, LowerTriMatrix::from_fn(4, |_, _| int(1)));
        // N² truncated at rank 3
        let pts: Vec<(usize, usize)> = (0..=3).flat_map(|s| (0..=s).map(move |i| (i, s - i))).collect();
        let grid = FinitePoset::from_order(pts.len(), |a, b| pts[a].0 <= pts[b].0 && pts[a].1 <= pts[b].1, None).unwrap();
        let m = wupho_matrix(&grid).unwrap();
        assert_eq!(m, LowerTriMatrix::from_fn(3, |n, k| int((n - k + 1) as i64)));
        let bad = FinitePoset::new(5, vec![(0, 2), (0, 3), (1, 4)], None).unwrap();
        assert!(matches!(wupho_matrix(&bad), Err(Error::NonUniform { rank: 0, .. })));
    }

    #[test]
    fn json_round_trip() {
        let fig = figure_two();
        let s = serde_json::to_string(&fig).unwrap();
        let back: FinitePoset = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fig);
        assert!(serde_json::from_str::<FinitePoset>(r#"{"size":2,"covers":[[0,1],[1,0]]}"#).is_err());
    }
}
