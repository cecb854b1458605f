//! Simple graphs: chromatic and σ-polynomials, independent-block partition
//! counts, and chordality.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::combinat::set_partitions;
use crate::error::{invalid, Error, Result};
use crate::poly::{falling_factorial, falling_transform, Direction, Polynomial};

/// Vertex cap for the chromatic polynomial.
pub const DEFAULT_VERTEX_CAP: usize = 16;
/// Vertex cap for enumerating all set partitions.
pub const ORACLE_VERTEX_CAP: usize = 10;

/// A loopless graph on `0..n` without multi-edges. Edges are stored as `(i, j)`
/// with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SimpleGraph {
    n: usize,
    #[serde(serialize_with = "edges_json")]
    edges: BTreeSet<(usize, usize)>,
}

fn edges_json<S: serde::Serializer>(edges: &BTreeSet<(usize, usize)>, s: S) -> std::result::Result<S::Ok, S::Error> {
    edges.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>().serialize(s)
}

#[derive(Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        SimpleGraph::new(raw.n, raw.edges.iter().map(|e| (e[0], e[1])).collect()).map_err(serde::de::Error::custom)
    }
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(invalid(format!("edge ({a},{b}) names a vertex outside 0..{n}")));
            }
            if a == b {
                return Err(invalid(format!("edge ({a},{a}) is a loop")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(invalid(format!("edge ({a},{b}) is listed twice")));
            }
        }
        Ok(SimpleGraph { n, edges: set })
    }

    pub fn edgeless(n: usize) -> Self {
        SimpleGraph { n, edges: BTreeSet::new() }
    }

    pub fn complete(n: usize) -> Self {
        Self::clique_plus_isolated(n, n)
    }

    /// `B_{n,k}`: a clique on the first `k` vertices plus `n − k` isolated ones.
    pub fn clique_plus_isolated(n: usize, k: usize) -> Self {
        let k = k.min(n);
        let edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        SimpleGraph { n, edges }
    }

    pub fn path(n: usize) -> Self {
        SimpleGraph { n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(invalid("a cycle needs at least 3 vertices"));
        }
        let mut g = Self::path(n);
        g.edges.insert((0, n - 1));
        Ok(g)
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect();
        SimpleGraph { n: a + b, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| u != v && self.has_edge(u, v)).collect()
    }

    fn masks(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.n];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }
}

fn check_cap(g: &SimpleGraph, cap: usize) -> Result<()> {
    if g.n > cap {
        return Err(Error::CapExceeded {
            what: "number of vertices",
            value: g.n as u128,
            cap: cap as u128,
            hint: "raise the vertex cap",
        });
    }
    Ok(())
}

/// Adjacency bitmasks of a graph on `0..n`.
type Adj = Vec<u32>;

fn remove_vertex(adj: &Adj, v: usize) -> Adj {
    let low = (1u32 << v) - 1;
    let squeeze = |m: u32| (m & low) | ((m >> 1) & !low);
    adj.iter().enumerate().filter(|&(i, _)| i != v).map(|(_, &m)| squeeze(m)).collect()
}

fn contract(adj: &Adj, u: usize, v: usize) -> Adj {
    let mut a = adj.clone();
    let merged = (a[u] | a[v]) & !(1 << u) & !(1 << v);
    a[u] = merged;
    for (w, m) in a.iter_mut().enumerate() {
        if merged >> w & 1 == 1 {
            *m |= 1 << u;
        }
    }
    remove_vertex(&a, v)
}

fn component_of(adj: &Adj, start: usize) -> u32 {
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for (w, &m) in adj.iter().enumerate() {
            if frontier >> w & 1 == 1 {
                next |= m;
            }
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

fn induced(adj: &Adj, keep: u32) -> Adj {
    let idx: Vec<usize> = (0..adj.len()).filter(|&i| keep >> i & 1 == 1).collect();
    idx.iter()
        .map(|&i| idx.iter().enumerate().filter(|&(_, &j)| adj[i] >> j & 1 == 1).fold(0u32, |m, (p, _)| m | 1 << p))
        .collect()
}

/// Deletion–contraction `χ_G = χ_{G−e} − χ_{G/e}` with memoization, shortcut
/// by the product rule over components and by peeling simplicial vertices.
fn chromatic_rec(adj: Adj, memo: &mut HashMap<Adj, Polynomial>) -> Polynomial {
    let n = adj.len();
    let edges: u32 = adj.iter().map(|m| m.count_ones()).sum::<u32>() / 2;
    if edges == 0 {
        return Polynomial::t_pow(n);
    }
    if edges as usize == n * (n - 1) / 2 {
        return falling_factorial(n);
    }
    if let Some(p) = memo.get(&adj) {
        return p.clone();
    }
    let comp = component_of(&adj, 0);
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let out = if comp != full {
        chromatic_rec(induced(&adj, comp), memo) * chromatic_rec(induced(&adj, full & !comp), memo)
    } else if let Some(v) = (0..n).find(|&v| {
        let nb = adj[v];
        (0..n).filter(|&w| nb >> w & 1 == 1).all(|w| (nb & !(1 << w)) & !adj[w] == 0)
    }) {
        let d = adj[v].count_ones() as i64;
        Polynomial::from_ints(&[-d, 1]) * chromatic_rec(remove_vertex(&adj, v), memo)
    } else {
        let u = (0..n).max_by_key(|&w| adj[w].count_ones()).unwrap();
        let v = adj[u].trailing_zeros() as usize;
        let mut deleted = adj.clone();
        deleted[u] &= !(1 << v);
        deleted[v] &= !(1 << u);
        chromatic_rec(deleted, memo) - chromatic_rec(contract(&adj, u, v), memo)
    };
    memo.insert(adj, out.clone());
    out
}

/// The chromatic polynomial, up to [`DEFAULT_VERTEX_CAP`] vertices.
pub fn chromatic_poly(g: &SimpleGraph) -> Result<Polynomial> {
    chromatic_poly_capped(g, DEFAULT_VERTEX_CAP)
}

/// [`chromatic_poly`] with an explicit vertex bound (at most 32).
pub fn chromatic_poly_capped(g: &SimpleGraph, cap: usize) -> Result<Polynomial> {
    check_cap(g, cap.min(32))?;
    Ok(chromatic_rec(g.masks(), &mut HashMap::new()))
}

/// `S_G(k)` for `k = 0..=n`: partitions of the vertices into `k` blocks with
/// no edge inside a block, by enumerating all set partitions.
pub fn independent_partition_counts(g: &SimpleGraph) -> Result<Vec<u64>> {
    check_cap(g, ORACLE_VERTEX_CAP)?;
    let mut counts = vec![0u64; g.n + 1];
    for word in set_partitions(g.n) {
        if g.edges.iter().all(|&(a, b)| word[a] != word[b]) {
            let blocks = word.iter().max().map_or(0, |m| m + 1);
            counts[blocks] += 1;
        }
    }
    Ok(counts)
}

/// `Σ_k S_G(k) (t)_k`, the falling-factorial form of `χ_G`.
pub fn chromatic_from_partitions(g: &SimpleGraph) -> Result<Polynomial> {
    let counts = independent_partition_counts(g)?;
    Ok(counts.iter().enumerate().map(|(k, &c)| falling_factorial(k).scale(&crate::exact::int(c as i64))).sum())
}

/// `σ_G(t) = Σ_k S_G(k) t^k`, the image of `χ_G` under `(t)_k ↦ t^k`.
pub fn sigma_poly(g: &SimpleGraph) -> Result<Polynomial> {
    Ok(falling_transform(&chromatic_poly(g)?, Direction::Forward))
}

/// Result of the chordality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chordality {
    pub chordal: bool,
    /// A perfect elimination order when chordal.
    pub elimination_order: Option<Vec<usize>>,
    /// An induced cycle of length at least 4 otherwise.
    pub witness_cycle: Option<Vec<usize>>,
}

/// Peels simplicial vertices; if none is left to peel, searches for an
/// induced cycle of length at least 4.
pub fn is_chordal(g: &SimpleGraph) -> Chordality {
    let mut alive: Vec<bool> = vec![true; g.n];
    let mut order = Vec::with_capacity(g.n);
    while order.len() < g.n {
        let simplicial = (0..g.n).find(|&v| {
            alive[v] && {
                let nb: Vec<usize> = g.neighbors(v).into_iter().filter(|&u| alive[u]).collect();
                nb.iter().enumerate().all(|(i, &a)| nb[i + 1..].iter().all(|&b| g.has_edge(a, b)))
            }
        });
        match simplicial {
            Some(v) => {
                alive[v] = false;
                order.push(v);
            }
            None => {
                return Chordality { chordal: false, elimination_order: None, witness_cycle: induced_long_cycle(g) };
            }
        }
    }
    Chordality { chordal: true, elimination_order: Some(order), witness_cycle: None }
}

/// For `v` with non-adjacent neighbours `a`, `b`, a shortest `a`–`b` path
/// avoiding the rest of `N[v]` closes an induced cycle through `v`.
fn induced_long_cycle(g: &SimpleGraph) -> Option<Vec<usize>> {
    for v in 0..g.n {
        let nb = g.neighbors(v);
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if g.has_edge(a, b) {
                    continue;
                }
                let blocked: Vec<bool> = (0..g.n).map(|w| w == v || (nb.contains(&w) && w != a && w != b)).collect();
                let mut prev = vec![usize::MAX; g.n];
                let mut queue = VecDeque::from([a]);
                prev[a] = a;
                while let Some(x) = queue.pop_front() {
                    if x == b {
                        break;
                    }
                    for y in g.neighbors(x) {
                        if !blocked[y] && prev[y] == usize::MAX {
                            prev[y] = x;
                            queue.push_back(y);
                        }
                    }
                }
                if prev[b] != usize::MAX {
                    let mut cycle = vec![b];
                    while *cycle.last().unwrap() != a {
                        cycle.push(prev[*cycle.last().unwrap()]);
                    }
                    cycle.push(v);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::stirling2;
    use crate::exact::Rational;
    use num_bigint::BigInt;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_poly(&SimpleGraph::edgeless(3)).unwrap(), p(&[0, 0, 0, 1]));
        let b43 = SimpleGraph::clique_plus_isolated(4, 3);
        assert_eq!(chromatic_poly(&b43).unwrap(), falling_factorial(3).shift(1));
        assert_eq!(chromatic_poly(&SimpleGraph::cycle(4).unwrap()).unwrap(), p(&[0, -3, 6, -4, 1]));
        assert_eq!(chromatic_poly(&SimpleGraph::path(3)).unwrap(), p(&[0, 1, -2, 1]));
        assert!(chromatic_poly(&SimpleGraph::edgeless(17)).is_err());
    }

    #[test]
    fn chromatic_matches_partition_oracle() {
        let mut graphs = vec![SimpleGraph::cycle(5).unwrap(), SimpleGraph::complete_bipartite(3, 3)];
        // every graph on 5 vertices
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            graphs.push(SimpleGraph::new(5, edges).unwrap());
        }
        for g in graphs {
            assert_eq!(chromatic_poly(&g).unwrap(), chromatic_from_partitions(&g).unwrap(), "{g:?}");
        }
    }

    #[test]
    fn k77_matches_bipartite_product() {
        let g = SimpleGraph::complete_bipartite(7, 7);
        let s: Vec<BigInt> = (0..=14)
            .map(|k| (0..=k).filter(|&i| i <= 7 && k - i <= 7).map(|i| stirling2(7, i) * stirling2(7, k - i)).sum())
            .collect();
        let expected: Polynomial =
            s.into_iter().enumerate().map(|(k, c)| falling_factorial(k).scale(&Rational::from(c))).sum();
        assert_eq!(chromatic_poly(&g).unwrap(), expected);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_poly(&SimpleGraph::clique_plus_isolated(3, 2)).unwrap(), p(&[0, 0, 2, 1]));
        assert_eq!(sigma_poly(&SimpleGraph::edgeless(2)).unwrap(), p(&[0, 1, 1]));
        assert_eq!(sigma_poly(&SimpleGraph::complete(3)).unwrap(), p(&[0, 0, 0, 1]));
    }

    #[test]
    fn chordality_examples() {
        let tree = SimpleGraph::new(6, vec![(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]).unwrap();
        assert!(is_chordal(&tree).chordal);
        let c4 = is_chordal(&SimpleGraph::cycle(4).unwrap());
        assert!(!c4.chordal);
        assert_eq!(c4.witness_cycle.unwrap().len(), 4);
        for n in 1..=7 {
            for k in 0..=n {
                let b = is_chordal(&SimpleGraph::clique_plus_isolated(n, k));
                assert_eq!(b.elimination_order.map(|o| o.len()), Some(n));
            }
        }
        let c6 = is_chordal(&SimpleGraph::cycle(6).unwrap());
        let cyc = c6.witness_cycle.unwrap();
        assert_eq!(cyc.len(), 6);
        let g = SimpleGraph::cycle(6).unwrap();
        for i in 0..cyc.len() {
            assert!(g.has_edge(cyc[i], cyc[(i + 1) % cyc.len()]));
        }
    }

    #[test]
    fn json_round_trip() {
        let g: SimpleGraph = serde_json::from_str(r#"{"n":3,"edges":[[1,0],[1,2]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
        assert!(serde_json::from_str::<SimpleGraph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }
}
