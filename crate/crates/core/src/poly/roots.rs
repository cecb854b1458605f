//! Real-root counting, isolation and the non-strict interlacing order.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Polynomial;
use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};

/// An endpoint on the extended real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl From<Rational> for Bound {
    fn from(x: Rational) -> Self {
        Bound::Finite(x)
    }
}

impl From<i64> for Bound {
    fn from(x: i64) -> Self {
        Bound::Finite(exact::int(x))
    }
}

impl Bound {
    fn rank(&self) -> u8 {
        match self {
            Bound::NegInf => 0,
            Bound::Finite(_) => 1,
            Bound::PosInf => 2,
        }
    }

    fn lt(&self, other: &Bound) -> bool {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a < b,
            _ => self.rank() < other.rank(),
        }
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Scale by a positive rational so the coefficients are coprime integers.
/// Unlike [`Polynomial::primitive`] this never flips the sign.
fn positive_normalize(p: &Polynomial) -> Polynomial {
    let prim = p.primitive();
    if p.leading().is_negative() {
        -&prim
    } else {
        prim
    }
}

struct SturmChain {
    seq: Vec<Polynomial>,
}

impl SturmChain {
    /// Chain of a square-free polynomial of positive degree.
    fn new(s: &Polynomial) -> Self {
        let mut seq = vec![positive_normalize(s), positive_normalize(&s.derivative())];
        loop {
            let n = seq.len();
            if seq[n - 1].degree().unwrap_or(0) == 0 {
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(positive_normalize(&-&r));
        }
        SturmChain { seq }
    }

    fn variations(&self, at: &Bound) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.seq {
            let s = match at {
                Bound::Finite(x) => sign(&p.eval(x)),
                Bound::PosInf => sign(&p.leading()),
                Bound::NegInf => {
                    let lc = sign(&p.leading());
                    if p.degree().unwrap_or(0) % 2 == 1 {
                        -lc
                    } else {
                        lc
                    }
                }
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in `(lo, hi]`.
    fn count(&self, lo: &Bound, hi: &Bound) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Number of distinct real roots of `f` in `(lo, hi]`.
pub fn sturm_count(f: &Polynomial, lo: &Bound, hi: &Bound) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::UndefinedRootCount);
    }
    if !lo.lt(hi) {
        return Err(invalid("sturm_count needs lo < hi"));
    }
    let s = f.squarefree();
    if s.degree() == Some(0) {
        return Ok(0);
    }
    Ok(SturmChain::new(&s).count(lo, hi))
}

/// True iff every complex root of `f` is real and lies in the closed interval
/// `[lo, hi]`. The zero polynomial and nonzero constants pass vacuously.
pub fn is_real_rooted_in(f: &Polynomial, lo: &Bound, hi: &Bound) -> bool {
    if f.degree().unwrap_or(0) == 0 {
        return true;
    }
    let s = f.squarefree();
    let d = s.degree().unwrap();
    let chain = SturmChain::new(&s);
    if chain.count(&Bound::NegInf, &Bound::PosInf) != d {
        return false;
    }
    if !lo.lt(hi) {
        // degenerate interval [x, x]
        return match (lo, hi) {
            (Bound::Finite(a), Bound::Finite(b)) if a == b => d == 1 && s.eval(a).is_zero(),
            _ => false,
        };
    }
    let at_lo = match lo {
        Bound::Finite(x) if s.eval(x).is_zero() => 1,
        _ => 0,
    };
    chain.count(lo, hi) + at_lo == d
}

/// One isolated real root: the exact point `lo == hi`, or the unique root of
/// the square-free polynomial `sqf` in the open interval `(lo, hi)`, where
/// `hi` is never a root of `sqf`.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
    sqf: Arc<Polynomial>,
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / exact::int(2);
        let fm = self.sqf.eval(&mid);
        if fm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
        } else if sign(&fm) != sign(&self.sqf.eval(&self.hi)) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Snap to an exact rational root if the isolating interval holds one.
    fn try_rational(&mut self) {
        if self.is_exact() {
            return;
        }
        let lc = self.sqf.primitive().leading().abs();
        let limit = (&lc * &lc).recip();
        while !self.is_exact() && self.width() >= limit {
            self.bisect();
        }
        if self.is_exact() {
            return;
        }
        let x = simplest_between(&self.lo, Some(&self.hi));
        if self.sqf.eval(&x).is_zero() {
            self.lo = x.clone();
            self.hi = x;
        }
    }

    /// Exact comparison of two algebraic numbers, refining as needed.
    pub fn compare(a: &mut IsolatedRoot, b: &mut IsolatedRoot) -> Ordering {
        let mut checked_equal = false;
        loop {
            match (a.is_exact(), b.is_exact()) {
                (true, true) => return a.lo.cmp(&b.lo),
                (true, false) => return Self::compare_point(&a.lo, b).reverse(),
                (false, true) => return Self::compare_point(&b.lo, a),
                (false, false) => {}
            }
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if !checked_equal {
                // overlapping intervals: equal iff a common factor has a root in the overlap
                checked_equal = true;
                let lo = (&a.lo).max(&b.lo).clone();
                let hi = (&a.hi).min(&b.hi).clone();
                let g = a.sqf.gcd(&b.sqf);
                if g.degree().unwrap_or(0) > 0 {
                    let mut inside = SturmChain::new(&g).count(&Bound::Finite(lo), &Bound::Finite(hi.clone()));
                    if g.eval(&hi).is_zero() {
                        inside -= 1;
                    }
                    if inside > 0 {
                        return Ordering::Equal;
                    }
                }
            }
            if a.width() >= b.width() {
                a.bisect();
            } else {
                b.bisect();
            }
        }
    }

    /// Compare the root `r` against the rational point `x`, returning the
    /// ordering of `r` relative to `x`.
    fn compare_point(x: &Rational, r: &mut IsolatedRoot) -> Ordering {
        loop {
            if r.is_exact() {
                return r.lo.cmp(x);
            }
            if &r.hi <= x {
                return Ordering::Less;
            }
            if &r.lo >= x {
                return Ordering::Greater;
            }
            if r.sqf.eval(x).is_zero() {
                return Ordering::Equal;
            }
            r.bisect();
        }
    }
}

/// Rational with the smallest denominator strictly between `lo` and `hi`
/// (`None` meaning `+∞`).
fn simplest_between(lo: &Rational, hi: Option<&Rational>) -> Rational {
    let fl = lo.floor();
    let cand = &fl + Rational::one();
    if hi.is_none_or(|h| &cand < h) {
        return cand;
    }
    let a = lo - &fl;
    let b = hi.unwrap() - &fl;
    let upper = if a.is_zero() { None } else { Some(a.recip()) };
    let y = simplest_between(&b.recip(), upper.as_ref());
    fl + y.recip()
}

/// Real roots of a real-rooted polynomial, ascending, with multiplicity.
#[derive(Clone, Debug)]
pub struct RealRoots {
    roots: Vec<IsolatedRoot>,
    degree: usize,
}

impl RealRoots {
    pub fn of(f: &Polynomial) -> Result<Self> {
        let degree = f.degree().ok_or(Error::UndefinedRootCount)?;
        if degree == 0 {
            return Ok(RealRoots { roots: Vec::new(), degree });
        }
        let s = f.squarefree();
        let d = s.degree().unwrap();
        let chain = SturmChain::new(&s);
        if chain.count(&Bound::NegInf, &Bound::PosInf) != d {
            return Err(Error::ComplexRoots);
        }
        let sqf = Arc::new(positive_normalize(&s));
        let bound = cauchy_bound(&s);
        let mut found: Vec<IsolatedRoot> = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let c = chain.count(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()));
            match c {
                0 => {}
                1 => {
                    let (lo, hi) = if sqf.eval(&hi).is_zero() { (hi.clone(), hi) } else { (lo, hi) };
                    found.push(IsolatedRoot { lo, hi, multiplicity: 1, sqf: sqf.clone() });
                }
                _ => {
                    let mid = (&lo + &hi) / exact::int(2);
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        // snapping can move `lo` past a neighbour's, so sort afterwards
        for root in found.iter_mut() {
            root.try_rational();
        }
        found.sort_by(|a, b| a.lo.cmp(&b.lo));
        // multiplicities from the square-free decomposition
        let parts = f.squarefree_decomposition();
        for root in found.iter_mut() {
            root.multiplicity = parts
                .iter()
                .position(|p| {
                    if p.degree().unwrap_or(0) == 0 {
                        return false;
                    }
                    if root.is_exact() {
                        return p.eval(&root.lo).is_zero();
                    }
                    // `hi` is never a root of the square-free part, hence of `p`
                    SturmChain::new(p).count(&Bound::Finite(root.lo.clone()), &Bound::Finite(root.hi.clone())) > 0
                })
                .map(|i| i + 1)
                .expect("every root of the square-free part belongs to one factor");
        }
        Ok(RealRoots { roots: found, degree })
    }

    pub fn distinct(&self) -> &[IsolatedRoot] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn count_with_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn isolation(&self) -> RootIsolation {
        RootIsolation {
            intervals: self
                .roots
                .iter()
                .map(|r| RootInterval {
                    lo: r.lo.clone(),
                    hi: r.hi.clone(),
                    multiplicity: r.multiplicity,
                })
                .collect(),
        }
    }
}

fn cauchy_bound(s: &Polynomial) -> Rational {
    let lc = s.leading();
    let m = s
        .coeffs()
        .iter()
        .map(|c| (c / &lc).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "exact::one_str")]
    pub lo: Rational,
    #[serde(with = "exact::one_str")]
    pub hi: Rational,
    pub multiplicity: usize,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Disjoint isolating intervals, ascending. Rational roots appear as `[x, x]`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RootIsolation {
    pub intervals: Vec<RootInterval>,
}

impl RootIsolation {
    pub fn root_count(&self) -> usize {
        self.intervals.iter().map(|i| i.multiplicity).sum()
    }
}

pub fn isolate_roots(f: &Polynomial) -> Result<RootIsolation> {
    Ok(RealRoots::of(f)?.isolation())
}

/// `f ≺ g`: with roots `α₁ ≥ α₂ ≥ ⋯` of `f` and `β₁ ≥ β₂ ≥ ⋯` of `g`,
/// `β₁ ≥ α₁ ≥ β₂ ≥ α₂ ≥ ⋯`, and `deg g - deg f ∈ {0, 1}`.
/// `0 ≺ f` and `f ≺ 0` hold for every real-rooted `f`.
pub fn interlaces(f: &Polynomial, g: &Polynomial) -> Result<bool> {
    if f.is_zero() || g.is_zero() {
        let other = if f.is_zero() { g } else { f };
        if !other.is_zero() {
            RealRoots::of(other)?;
        }
        return Ok(true);
    }
    let rf = RealRoots::of(f)?;
    let rg = RealRoots::of(g)?;
    Ok(interlaces_roots(&rf, &rg))
}

/// [`interlaces`] on precomputed root data.
pub fn interlaces_roots(rf: &RealRoots, rg: &RealRoots) -> bool {
    let (df, dg) = (rf.degree, rg.degree);
    if dg < df || dg > df + 1 {
        return false;
    }
    // comparison table between distinct roots
    let mut a: Vec<IsolatedRoot> = rf.roots.clone();
    let mut b: Vec<IsolatedRoot> = rg.roots.clone();
    let mut table = vec![vec![Ordering::Equal; b.len()]; a.len()];
    for (i, ai) in a.iter_mut().enumerate() {
        for (j, bj) in b.iter_mut().enumerate() {
            table[i][j] = IsolatedRoot::compare(ai, bj);
        }
    }
    let expand = |roots: &[IsolatedRoot]| -> Vec<usize> {
        let mut out = Vec::new();
        for (i, r) in roots.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(i, r.multiplicity));
        }
        out
    };
    let alpha = expand(&a);
    let beta = expand(&b);
    for (k, &ai) in alpha.iter().enumerate() {
        // beta_k >= alpha_k
        if table[ai][beta[k]] == Ordering::Greater {
            return false;
        }
        // alpha_k >= beta_{k+1}
        if let Some(&bj) = beta.get(k + 1) {
            if table[ai][bj] == Ordering::Less {
                return false;
            }
        }
    }
    true
}

/// `f_i ≺ f_j` for all `i < j`.
pub fn is_interlacing_sequence(fs: &[Polynomial]) -> Result<bool> {
    let roots: Vec<Option<RealRoots>> = fs
        .iter()
        .map(|f| if f.is_zero() { Ok(None) } else { RealRoots::of(f).map(Some) })
        .collect::<Result<_>>()?;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if let (Some(a), Some(b)) = (&roots[i], &roots[j]) {
                if !interlaces_roots(a, b) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn ival(lo: Rational, hi: Rational, m: usize) -> RootInterval {
        RootInterval { lo, hi, multiplicity: m }
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_count(&p(&[0, 2, 1]), &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
        assert_eq!(sturm_count(&p(&[1, 6, 6]), &Bound::from(-1), &Bound::from(0)).unwrap(), 2);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &Bound::NegInf, &Bound::PosInf).unwrap(), 0);
        assert_eq!(sturm_count(&Polynomial::zero(), &Bound::NegInf, &Bound::PosInf), Err(Error::UndefinedRootCount));
        // half-open: root at the right end counts, at the left end does not
        assert_eq!(sturm_count(&p(&[0, 1]), &Bound::from(-1), &Bound::from(0)).unwrap(), 1);
        assert_eq!(sturm_count(&p(&[0, 1]), &Bound::from(0), &Bound::from(1)).unwrap(), 0);
    }

    #[test]
    fn real_rooted_examples() {
        let (lo, hi) = (Bound::from(-1), Bound::from(0));
        assert!(is_real_rooted_in(&p(&[0, 1, 2]), &lo, &hi));
        assert!(is_real_rooted_in(&Polynomial::t_pow(5), &lo, &hi));
        assert!(!is_real_rooted_in(&p(&[1, 1, 1]), &lo, &hi));
        assert!(is_real_rooted_in(&p(&[1, 2, 1]), &lo, &hi));
        assert!(!is_real_rooted_in(&p(&[2, 3, 1]), &lo, &hi));
        assert!(is_real_rooted_in(&Polynomial::zero(), &lo, &hi));
    }

    #[test]
    fn isolation_examples() {
        assert_eq!(
            isolate_roots(&p(&[0, 1, 1])).unwrap().intervals,
            vec![ival(int(-1), int(-1), 1), ival(int(0), int(0), 1)]
        );
        assert_eq!(
            isolate_roots(&p(&[0, 1, 2])).unwrap().intervals,
            vec![ival(ratio(-1, 2), ratio(-1, 2), 1), ival(int(0), int(0), 1)]
        );
        assert_eq!(isolate_roots(&Polynomial::t_pow(3)).unwrap().intervals, vec![ival(int(0), int(0), 3)]);
        assert_eq!(isolate_roots(&p(&[1, 0, 1])), Err(Error::ComplexRoots));
    }

    #[test]
    fn irrational_roots_are_isolated() {
        // 6t^2 + 6t + 1 has roots (-3 ± √3)/6
        let iso = isolate_roots(&p(&[1, 6, 6])).unwrap();
        assert_eq!(iso.intervals.len(), 2);
        for iv in &iso.intervals {
            assert!(iv.lo < iv.hi);
            assert!(iv.lo >= int(-1) && iv.hi <= int(0));
        }
        assert!(iso.intervals[0].hi <= iso.intervals[1].lo);
    }

    #[test]
    fn rational_root_with_large_denominator() {
        let f = &p(&[3, 7]) * &p(&[-5, 11]); // roots -3/7, 5/11
        let iso = isolate_roots(&f).unwrap();
        assert_eq!(iso.intervals[0], ival(ratio(-3, 7), ratio(-3, 7), 1));
        assert_eq!(iso.intervals[1], ival(ratio(5, 11), ratio(5, 11), 1));
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&ratio(1, 3), Some(&ratio(1, 2))), ratio(2, 5));
        assert_eq!(simplest_between(&ratio(-7, 3), Some(&int(5))), int(-2));
        assert_eq!(simplest_between(&int(0), Some(&ratio(1, 10))), ratio(1, 11));
    }

    #[test]
    fn interlacing_examples() {
        assert!(interlaces(&p(&[0, 1, 2]), &p(&[0, 1, 6, 6])).unwrap());
        assert!(interlaces(&Polynomial::zero(), &p(&[0, 1, 6, 6])).unwrap());
        assert!(interlaces(&p(&[0, 1, 6, 6]), &Polynomial::zero()).unwrap());
        // (t+1)^2 ≺ t(t+1): -1 ≤ -1 ≤ 0
        assert!(interlaces(&p(&[1, 2, 1]), &p(&[0, 1, 1])).unwrap());
        assert!(!interlaces(&p(&[0, 1, 1]), &p(&[1, 2, 1])).unwrap());
        assert!(!interlaces(&p(&[1]), &p(&[0, 0, 1])).unwrap());
        assert!(interlaces(&p(&[0, 1, 1]), &p(&[0, 1, 6, 6])).is_ok());
    }

    #[test]
    fn sequences() {
        // (1+t)^2 and t^2 do not interlace in either order
        let boolean = vec![p(&[1, 2, 1]), p(&[0, 1, 1]), p(&[0, 0, 1])];
        assert!(!is_interlacing_sequence(&boolean).unwrap());
        let rev: Vec<_> = boolean.iter().rev().cloned().collect();
        assert!(!is_interlacing_sequence(&rev).unwrap());
        assert!(is_interlacing_sequence(&[p(&[1])]).unwrap());
        assert!(!is_interlacing_sequence(&[p(&[1, 2, 1]), p(&[0, 0, 1])]).unwrap());
        // subdivided Boolean row: (1+t)(1+2t), 2t(1+t), t(1+2t)
        let subdivided = vec![p(&[1, 3, 2]), p(&[0, 2, 2]), p(&[0, 1, 2])];
        assert!(is_interlacing_sequence(&subdivided).unwrap());
        let rev: Vec<_> = subdivided.iter().rev().cloned().collect();
        assert!(!is_interlacing_sequence(&rev).unwrap());
    }

    #[test]
    fn equal_irrational_roots_compare_equal() {
        let f = p(&[1, 6, 6]);
        let g = &f * &p(&[0, 1]);
        // f ≺ t f since roots of f interlace those of t f with shared roots
        assert!(interlaces(&f, &g).unwrap());
        assert!(interlaces(&f, &f).unwrap());
    }

    #[test]
    fn snapped_roots_stay_sorted() {
        let f = p(&[0, 8, 200, 1104, 2352, 2160, 720]);
        let r = RealRoots::of(&f).unwrap();
        let mut roots = r.distinct().to_vec();
        assert_eq!(roots.len(), 6);
        for i in 1..roots.len() {
            let (a, b) = roots.split_at_mut(i);
            assert_eq!(IsolatedRoot::compare(&mut a[i - 1], &mut b[0]), Ordering::Less);
        }
        assert!(interlaces(&f, &p(&[0, 4, 136, 876, 2064, 2040, 720])).unwrap());
    }

}
