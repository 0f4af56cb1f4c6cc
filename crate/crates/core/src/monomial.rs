//! Terms (dense exponent vectors), the lexicographic order induced by
//! `x1 < x2 < ... < xn`, and order-ideal combinatorics.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use smallvec::SmallVec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonomialError {
    #[error("term length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("term set is not an order ideal: {0} is present but its divisor {1} is not")]
    NotOrderIdeal(Term, Term),
}

/// A term `x1^a1 * ... * xn^an`, stored as its exponent vector.
///
/// `Ord` is the lexicographic order that compares the exponent of `xn` first,
/// so `x1 < x2 < ... < xn`. Terms of different lengths order by length first;
/// use [`lex_cmp`] when a length mismatch should be reported instead.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term(SmallVec<[u32; 6]>);

/// Terms kept sorted lexicographically ascending.
pub type TermSet = BTreeSet<Term>;

impl Term {
    pub fn one(nvars: usize) -> Self {
        Term(SmallVec::from_elem(0, nvars))
    }

    /// The variable `x_{index+1}` (0-based index).
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut t = Term::one(nvars);
        t.0[index] = 1;
        t
    }

    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        Term(exponents.into_iter().collect())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// True when the term lies in `k[x1..x_m]`.
    pub fn in_first_vars(&self, m: usize) -> bool {
        self.0[m.min(self.0.len())..].iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Term) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Term) -> Term {
        debug_assert_eq!(self.nvars(), other.nvars());
        Term(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Term) -> Option<Term> {
        other
            .divides(self)
            .then(|| Term(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Term) -> Term {
        Term(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn with_exp(&self, index: usize, e: u32) -> Term {
        let mut t = self.clone();
        t.0[index] = e;
        t
    }

    /// Multiplies by the variable with the given 0-based index.
    pub fn times_var(&self, index: usize) -> Term {
        let mut t = self.clone();
        t.0[index] += 1;
        t
    }

    /// All `t / x_j` for variables `x_j` dividing `t`, in lex ascending order.
    pub fn predecessors(&self) -> Vec<Term> {
        let mut preds: Vec<Term> = (0..self.nvars())
            .filter(|&j| self.0[j] > 0)
            .map(|j| self.with_exp(j, self.0[j] - 1))
            .collect();
        preds.sort();
        preds
    }

    /// Keeps the exponents of the first `m` variables, zeroing the rest.
    pub fn truncate(&self, m: usize) -> Term {
        let mut t = self.clone();
        for e in t.0[m.min(self.nvars())..].iter_mut() {
            *e = 0;
        }
        t
    }

    /// The term in `m` variables with the first `m` exponents.
    pub fn project(&self, m: usize) -> Term {
        Term(self.0[..m].iter().copied().collect())
    }

    /// Pads with zero exponents up to `nvars` variables.
    pub fn extend(&self, nvars: usize) -> Term {
        let mut t = self.clone();
        t.0.resize(nvars, 0);
        t
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate().filter(|(_, &e)| e > 0) {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Lexicographic comparison with `x1 < ... < xn`.
pub fn lex_cmp(a: &Term, b: &Term) -> Result<Ordering, MonomialError> {
    if a.nvars() != b.nvars() {
        return Err(MonomialError::LengthMismatch(a.nvars(), b.nvars()));
    }
    Ok(a.cmp(b))
}

/// Checks divisor-closure. Closure under predecessors is equivalent.
pub fn is_order_ideal<'a>(terms: impl IntoIterator<Item = &'a Term>) -> bool {
    check_order_ideal(terms).is_ok()
}

pub(crate) fn check_order_ideal<'a>(
    terms: impl IntoIterator<Item = &'a Term>,
) -> Result<(), MonomialError> {
    let set: HashSet<&Term> = terms.into_iter().collect();
    for t in &set {
        for p in t.predecessors() {
            if !set.contains(&p) {
                return Err(MonomialError::NotOrderIdeal((*t).clone(), p));
            }
        }
    }
    Ok(())
}

/// Every term of total degree `d` in `n` variables, lex ascending.
pub fn terms_of_degree(n: usize, d: u32) -> Vec<Term> {
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Term>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(Term::new(prefix.iter().copied()));
            prefix.pop();
            return;
        }
        for e in 0..=remaining {
            prefix.push(e);
            fill(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    assert!(n >= 1, "at least one variable is required");
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(n), d, n, &mut out);
    out.sort();
    out
}

/// Minimal generators of the complement of a finite order ideal, by exhaustive
/// search over every term of degree at most `h + 1`.
///
/// This is deliberately naive; it serves as the reference the degree-sliced
/// algorithm in [`crate::potexp`] is checked against.
pub fn minimal_generators_bruteforce(
    ideal: &TermSet,
    nvars: usize,
) -> Result<TermSet, MonomialError> {
    if let Some(t) = ideal.iter().find(|t| t.nvars() != nvars) {
        return Err(MonomialError::LengthMismatch(t.nvars(), nvars));
    }
    check_order_ideal(ideal)?;
    let bound = ideal.iter().map(Term::degree).max().map_or(0, |h| h + 1);
    let mut out = TermSet::new();
    for d in 0..=bound {
        for t in terms_of_degree(nvars, d) {
            if !ideal.contains(&t) && t.predecessors().iter().all(|p| ideal.contains(p)) {
                out.insert(t);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) fn t(e: &[u32]) -> Term {
    Term::new(e.iter().copied())
}
