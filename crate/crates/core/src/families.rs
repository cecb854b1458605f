//! The four built-in TN families: Boolean, q-subspace (Gaussian), r-cubical
//! and dual partition. Closed forms for the matrix, `λ` and `R_{n,k}`, and
//! explicit small posets for cross-checks.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::combinat;
use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::fq;
use crate::poly::{falling_factorial, falling_transform, Direction, Polynomial};
use crate::poset::FinitePoset;
use crate::tnmat::{LowerTriMatrix, ResolutionCertificate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Boolean,
    Gaussian { q: Rational },
    Cubical { r: u32 },
    Partition,
}

/// A family together with the truncation order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub order: usize,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<exact::RatStr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(rename = "N")]
    n: usize,
}

impl Serialize for FamilySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (q, r) = match &self.kind {
            FamilyKind::Gaussian { q } => (Some(exact::RatStr(q.clone())), None),
            FamilyKind::Cubical { r } => (None, Some(*r)),
            _ => (None, None),
        };
        SpecJson { kind: self.kind.name().to_string(), q, r, n: self.order }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SpecJson::deserialize(d)?;
        let kind = match raw.kind.as_str() {
            "boolean" => FamilyKind::Boolean,
            "partition" => FamilyKind::Partition,
            "gaussian" => FamilyKind::Gaussian { q: raw.q.ok_or_else(|| D::Error::custom("gaussian family needs q"))?.0 },
            "cubical" => FamilyKind::Cubical { r: raw.r.ok_or_else(|| D::Error::custom("cubical family needs r"))? },
            other => return Err(D::Error::custom(format!("unknown family kind {other:?}"))),
        };
        FamilySpec::new(kind, raw.n).map_err(D::Error::custom)
    }
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Boolean => "boolean",
            FamilyKind::Gaussian { .. } => "gaussian",
            FamilyKind::Cubical { .. } => "cubical",
            FamilyKind::Partition => "partition",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyKind::Gaussian { q } if !q.is_positive() => Err(invalid("gaussian family needs q > 0")),
            FamilyKind::Cubical { r: 0 } => Err(invalid("cubical family needs r ≥ 1")),
            _ => Ok(()),
        }
    }

    /// For `r = 1`, `R_{n,n-1} = t^n = R_{n,n}`: the `R_{n,k}` are not a basis
    /// and the closed-form `λ` is not normalized.
    pub fn is_degenerate_basis(&self) -> bool {
        matches!(self, FamilyKind::Cubical { r: 1 })
    }
}

/// Parses `boolean`, `gaussian:q`, `cubical:r` and `partition`.
impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let kind = match (name, arg) {
            ("boolean", None) => FamilyKind::Boolean,
            ("partition", None) => FamilyKind::Partition,
            ("gaussian", Some(q)) => FamilyKind::Gaussian { q: exact::parse(q)? },
            ("cubical", Some(r)) => FamilyKind::Cubical {
                r: r.parse().map_err(|_| Error::Parse(format!("cubical parameter {r:?} is not an integer")))?,
            },
            _ => return Err(Error::Parse(format!("unknown family {s:?}; use boolean, gaussian:q, cubical:r or partition"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Gaussian { q } => write!(f, "gaussian:{}", exact::format(q)),
            FamilyKind::Cubical { r } => write!(f, "cubical:{r}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, order: usize) -> Result<Self> {
        kind.validate()?;
        Ok(FamilySpec { kind, order })
    }
}

fn check_range(spec: &FamilySpec, n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(invalid(format!("need k ≤ n, got n = {n}, k = {k}")));
    }
    if n > spec.order {
        return Err(Error::DegreeTooLarge { degree: n, bound: spec.order });
    }
    Ok(())
}

/// `R(P)` truncated at order `N`.
pub fn family_matrix(spec: &FamilySpec) -> LowerTriMatrix {
    let n = spec.order;
    match &spec.kind {
        FamilyKind::Boolean => LowerTriMatrix::pascal(n),
        FamilyKind::Gaussian { q } => {
            let table = combinat::q_binomial_table(n, q);
            LowerTriMatrix::from_fn(n, |i, j| table[i][j].clone())
        }
        FamilyKind::Cubical { r } => {
            let base = Polynomial::linear(exact::int(*r as i64));
            let rows: Vec<Polynomial> = (0..=n)
                .map(|i| if i == 0 { Polynomial::one() } else { Polynomial::one() + base.pow(i - 1).shift(1) })
                .collect();
            LowerTriMatrix::from_fn(n, |i, j| rows[i].coeff(j))
        }
        FamilyKind::Partition => {
            let s = combinat::stirling2_table(n + 1);
            LowerTriMatrix::from_fn(n, |i, j| exact::big(&s[i + 1][j + 1]))
        }
    }
}

/// The closed-form `λ_{n,k}` (`0 ≤ k ≤ n < N`).
pub fn family_lambda(spec: &FamilySpec, n: usize, k: usize) -> Result<Rational> {
    check_range(spec, n, k)?;
    if n == spec.order {
        return Err(invalid(format!("λ is defined for n < N = {}", spec.order)));
    }
    Ok(match &spec.kind {
        FamilyKind::Boolean => Rational::one(),
        FamilyKind::Gaussian { q } => exact::pow(q, k as i64),
        FamilyKind::Cubical { r } => {
            let r = exact::int(*r as i64);
            if k == 0 {
                Rational::one()
            } else if k < n {
                r
            } else {
                r - Rational::one()
            }
        }
        FamilyKind::Partition => exact::int(k as i64 + 1),
    })
}

/// `(t + α)^m f` with `α f(t) = f(qt)`.
fn q_shift_power(f: Polynomial, m: usize, q: &Rational) -> Polynomial {
    (0..m).fold(f, |g, _| g.shift(1) + g.scale_var(q))
}

/// The closed-form `R_{n,k}(t)`.
pub fn family_rnk(spec: &FamilySpec, n: usize, k: usize) -> Result<Polynomial> {
    check_range(spec, n, k)?;
    Ok(match &spec.kind {
        FamilyKind::Boolean => Polynomial::from_ints(&[1, 1]).pow(n - k).shift(k),
        FamilyKind::Gaussian { q } => q_shift_power(Polynomial::t_pow(k), n - k, q),
        FamilyKind::Cubical { r } => {
            if k == n {
                Polynomial::t_pow(n)
            } else if k == 0 {
                Polynomial::one() + Polynomial::linear(exact::int(*r as i64)).pow(n - 1).shift(1)
            } else {
                let r = exact::int(*r as i64);
                let head = Polynomial::linear(&r - Rational::one());
                (head * Polynomial::linear(r).pow(n - k - 1)).shift(k)
            }
        }
        FamilyKind::Partition => {
            let g = falling_factorial(k + 1).shift(n - k);
            falling_transform(&g, Direction::Forward).unshift(1)?
        }
    })
}

/// The resolution built from the closed-form `λ`.
pub fn family_certificate(spec: &FamilySpec) -> Result<ResolutionCertificate> {
    let lambda = (0..spec.order)
        .map(|n| (0..=n).map(|k| family_lambda(spec, n, k)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ResolutionCertificate::from_lambda(lambda)
}

/// `R^q_n(t) = Σ_k (n choose k)_q t^k` by `R_{n+1} = t R_n + R_n(qt)`.
pub fn rogers_szego(n: usize, q: &Rational) -> Result<Polynomial> {
    if !q.is_positive() {
        return Err(invalid("Rogers–Szegő polynomials need q > 0"));
    }
    Ok(q_shift_power(Polynomial::one(), n, q))
}

/// Desk-scale caps for [`explicit_poset`].
pub fn explicit_cap(kind: &FamilyKind) -> usize {
    match kind {
        FamilyKind::Boolean => 10,
        FamilyKind::Gaussian { .. } => 4,
        FamilyKind::Cubical { .. } => 5,
        FamilyKind::Partition => 6,
    }
}

/// The explicit rank-`n` member: `B_n`, the subspaces of `F_q^n`, the r-cube
/// `{0̂} ∪ ({z} ∪ [r])^{n-1}`, or the partitions of `[n+1]` under reverse
/// refinement.
pub fn explicit_poset(kind: &FamilyKind, n: usize) -> Result<FinitePoset> {
    kind.validate()?;
    let cap = explicit_cap(kind);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "explicit poset rank",
            value: n as u128,
            cap: cap as u128,
            hint: "use family_matrix for larger orders",
        });
    }
    match kind {
        FamilyKind::Boolean => {
            let labels = (0..1usize << n)
                .map(|s| {
                    let elems: Vec<String> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
                    format!("{{{}}}", elems.join(","))
                })
                .collect();
            FinitePoset::from_order(1 << n, |a, b| a & b == a, Some(labels))
        }
        FamilyKind::Gaussian { q } => {
            let p = exact::is_integer(q)
                .then(|| u32::try_from(q.to_integer()).ok())
                .flatten()
                .filter(|&p| p <= 3 && fq::is_prime(p))
                .ok_or_else(|| invalid("explicit subspace posets need q ∈ {2, 3}"))?;
            let spaces = fq::all_subspaces(p, n)?;
            let labels = spaces.iter().map(|s| format!("{:?}", s.basis())).collect();
            FinitePoset::from_order(spaces.len(), |a, b| spaces[a].is_subspace_of(&spaces[b]), Some(labels))
        }
        FamilyKind::Cubical { r } => {
            if *r > 4 {
                return Err(Error::CapExceeded {
                    what: "cubical parameter r",
                    value: *r as u128,
                    cap: 4,
                    hint: "use family_matrix for larger r",
                });
            }
            let elements = cube_elements(*r, n);
            let labels = elements.iter().map(|e| cube_label(e.as_deref())).collect();
            FinitePoset::from_order(elements.len(), |a, b| cube_le(elements[a].as_deref(), elements[b].as_deref()), Some(labels))
        }
        FamilyKind::Partition => {
            let parts = combinat::set_partitions(n + 1);
            let labels = parts.iter().map(|w| partition_label(w)).collect();
            // π ≤ σ when σ refines π
            FinitePoset::from_order(
                parts.len(),
                |a, b| {
                    let (pi, sigma) = (&parts[a], &parts[b]);
                    (0..=n).all(|i| (0..=n).all(|j| sigma[i] != sigma[j] || pi[i] == pi[j]))
                },
                Some(labels),
            )
        }
    }
}

/// `None` is `0̂`; coordinates use `0` for `z` and `1..=r` for the atoms of `M_r`.
pub(crate) fn cube_elements(r: u32, n: usize) -> Vec<Option<Vec<u32>>> {
    let mut out = vec![None];
    if n == 0 {
        return out;
    }
    let mut coords: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..n - 1 {
        coords = coords
            .into_iter()
            .flat_map(|c| {
                (0..=r).map(move |v| {
                    let mut d = c.clone();
                    d.push(v);
                    d
                })
            })
            .collect();
    }
    out.extend(coords.into_iter().map(Some));
    out
}

pub(crate) fn cube_le(a: Option<&[u32]>, b: Option<&[u32]>) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x.iter().zip(y).all(|(u, v)| u == v || *v == 0),
    }
}

fn cube_label(a: Option<&[u32]>) -> String {
    match a {
        None => "0̂".to_string(),
        Some(c) => format!("({})", c.iter().map(|&v| if v == 0 { "z".to_string() } else { v.to_string() }).collect::<Vec<_>>().join(",")),
    }
}

fn partition_label(word: &[usize]) -> String {
    let blocks = word.iter().max().map_or(0, |m| m + 1);
    (0..blocks)
        .map(|b| (0..word.len()).filter(|&i| word[i] == b).map(|i| (i + 1).to_string()).collect::<String>())
        .collect::<Vec<_>>()
        .join("|")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain;
    use crate::exact::int;
    use crate::poset::extract_matrix;
    use crate::tnmat::whitney_reduce;

    fn spec(kind: &str, order: usize) -> FamilySpec {
        FamilySpec::new(kind.parse().unwrap(), order).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(family_matrix(&spec("gaussian:2", 3)).row(2), ints(&[1, 3, 1]).as_slice());
        assert_eq!(family_matrix(&spec("cubical:2", 3)).row(2), ints(&[1, 2, 1]).as_slice());
        assert_eq!(family_matrix(&spec("partition", 3)).row(3), ints(&[1, 7, 6, 1]).as_slice());
    }

    #[test]
    fn rnk_and_lambda_examples() {
        let p = Polynomial::from_ints;
        assert_eq!(family_rnk(&spec("boolean", 3), 2, 1).unwrap(), p(&[0, 1, 1]));
        assert_eq!(family_rnk(&spec("gaussian:2", 3), 2, 1).unwrap(), p(&[0, 2, 1]));
        assert_eq!(family_rnk(&spec("partition", 3), 2, 1).unwrap(), p(&[0, 2, 1]));
        assert_eq!(family_lambda(&spec("cubical:3", 8), 4, 2).unwrap(), int(3));
        assert_eq!(family_lambda(&spec("partition", 8), 5, 2).unwrap(), int(3));
        assert_eq!(family_lambda(&spec("gaussian:2", 8), 3, 2).unwrap(), int(4));
    }

    #[test]
    fn closed_forms_match_whitney() {
        let kinds = ["boolean", "gaussian:2", "gaussian:3", "gaussian:1/2", "cubical:2", "cubical:3", "cubical:4", "partition"];
        for kind in kinds {
            let s = spec(kind, 8);
            let cert = whitney_reduce(&family_matrix(&s)).unwrap().unwrap();
            for n in 0..=8 {
                for k in 0..=n {
                    assert_eq!(&family_rnk(&s, n, k).unwrap(), cert.r(n, k), "{kind} R_{{{n},{k}}}");
                    if n < 8 {
                        assert_eq!(&family_lambda(&s, n, k).unwrap(), cert.lambda_at(n, k), "{kind} λ_{{{n},{k}}}");
                    }
                }
            }
            assert_eq!(family_certificate(&s).unwrap(), cert);
        }
    }

    #[test]
    fn degenerate_cubical_closed_form_still_resolves() {
        // r = 1: the closed-form λ is not normalized, but it still resolves the matrix
        let s = spec("cubical:1", 6);
        assert!(s.kind.is_degenerate_basis());
        let cert = family_certificate(&s).unwrap();
        assert!(!cert.is_normalized());
        for n in 0..=6 {
            assert_eq!(cert.r(n, 0), &family_matrix(&s).row_polynomial(n));
        }
    }

    #[test]
    fn factorial_identities() {
        // r_{n,k} = B(n)/(B(k)B(n-k))
        for (kind, q) in [("boolean", int(1)), ("gaussian:2", int(2)), ("gaussian:3", int(3))] {
            let m = family_matrix(&spec(kind, 7));
            for n in 0..=7 {
                for k in 0..=n {
                    let b = |i| combinat::q_factorial(i, &q);
                    assert_eq!(m.get(n, k), b(n) / (b(k) * b(n - k)), "{kind}");
                }
            }
        }
    }

    #[test]
    fn explicit_posets_match_matrices() {
        let g2 = explicit_poset(&"gaussian:2".parse().unwrap(), 2).unwrap();
        assert_eq!(g2.size(), 5);
        let c = explicit_poset(&"cubical:2".parse().unwrap(), 2).unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(crate::poset::rank_generating(&c), Polynomial::from_ints(&[1, 2, 1]));
        assert_eq!(explicit_poset(&FamilyKind::Partition, 2).unwrap().size(), 5);
        let cases = [("boolean", 5), ("gaussian:2", 4), ("gaussian:3", 3), ("cubical:2", 4), ("cubical:3", 4), ("partition", 4)];
        for (kind, n) in cases {
            let k: FamilyKind = kind.parse().unwrap();
            let m = extract_matrix(&explicit_poset(&k, n).unwrap()).unwrap();
            assert_eq!(m, family_matrix(&FamilySpec::new(k, n).unwrap()), "{kind}");
        }
    }

    #[test]
    fn rogers_szego_examples() {
        let two = int(2);
        assert_eq!(rogers_szego(2, &two).unwrap(), Polynomial::from_ints(&[1, 3, 1]));
        assert_eq!(rogers_szego(0, &two).unwrap(), Polynomial::one());
        assert_eq!(rogers_szego(3, &int(1)).unwrap(), Polynomial::from_ints(&[1, 3, 3, 1]));
        for n in 0..=8 {
            let expected = Polynomial::new(combinat::q_binomial_table(n, &two)[n].clone());
            assert_eq!(rogers_szego(n, &two).unwrap(), expected);
        }
        // R_{n,k} = q^{k(n-k)} t^k R_{n-k}(q^{-k} t)
        let s = spec("gaussian:3", 6);
        let q = int(3);
        for n in 0..=6 {
            for k in 0..=n {
                let rhs = rogers_szego(n - k, &q).unwrap().scale_var(&exact::pow(&q, -(k as i64))).shift(k).scale(&exact::pow(&q, (k * (n - k)) as i64));
                assert_eq!(family_rnk(&s, n, k).unwrap(), rhs);
            }
        }
    }

    #[test]
    fn families_certify() {
        for kind in ["boolean", "gaussian:2", "cubical:3", "partition"] {
            let m = family_matrix(&spec(kind, 7));
            for c in chain::interlacing_certificates(&m).unwrap() {
                assert!(c.passed(), "{kind}");
            }
        }
    }

    #[test]
    fn spec_json_and_parsing() {
        let s: FamilySpec = serde_json::from_str(r#"{"kind":"gaussian","q":"2","N":6}"#).unwrap();
        assert_eq!(s, spec("gaussian:2", 6));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"gaussian","q":"2","N":6}"#);
        assert!("gaussian:-1".parse::<FamilyKind>().is_err());
        assert!("cubical:0".parse::<FamilyKind>().is_err());
        assert!("tree".parse::<FamilyKind>().is_err());
        assert_eq!("cubical:3".parse::<FamilyKind>().unwrap().to_string(), "cubical:3");
        assert!(num_traits::Zero::is_zero(&(family_lambda(&spec("cubical:1", 3), 1, 1).unwrap())));
    }
}
