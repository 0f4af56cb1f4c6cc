//! Minimal generators of the initial ideal, computed degree by degree from the
//! escalier by potential expansion.
//!
//! At every degree `i` the terms split three ways: escalier terms `N_i`, terms
//! already forced into the ideal by lower-degree generators (`C[i]`, the
//! expansion carried up from degree `i - 1`), and the new generators `G_i`.
//! Since `|T_i|` is a binomial coefficient, `G_i` is nonempty exactly when
//! `|N_i| + |C[i]|` falls short of it.

use crate::monomial::{check_order_ideal, terms_of_degree, MonomialError, Term, TermSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PotexpError {
    #[error("expansion input mixes degrees {0} and {1}")]
    MixedDegrees(u32, u32),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
}

/// Degree-`(j+1)` terms divisible by at least one member of `h`, all of
/// degree `j`. Lex ascending.
pub fn potential_expansion_step(h: &[Term]) -> Result<Vec<Term>, PotexpError> {
    let Some(first) = h.first() else { return Ok(Vec::new()) };
    let j = first.degree();
    if let Some(bad) = h.iter().find(|t| t.degree() != j) {
        return Err(PotexpError::MixedDegrees(j, bad.degree()));
    }
    let n = first.nvars();
    let out: TermSet = h.iter().flat_map(|t| (0..n).map(move |v| t.times_var(v))).collect();
    Ok(out.into_iter().collect())
}

/// Per-degree bookkeeping of a [`minimal_basis`] run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeSlicedIdealView {
    /// `N_0 .. N_{h+1}`; the last slice is empty.
    pub slices: Vec<Vec<Term>>,
    /// `C[0] .. C[h+1]`.
    pub expansions: Vec<Vec<Term>>,
    /// `G_0 .. G_{h+1}`.
    pub generators: Vec<Vec<Term>>,
}

/// `a \ b` for lex-sorted `a` and a lex-sorted subset `b` of it.
fn sorted_complement(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len().saturating_sub(b.len()));
    let mut j = 0;
    for t in a {
        if j < b.len() && &b[j] == t {
            j += 1;
        } else {
            out.push(t.clone());
        }
    }
    debug_assert_eq!(j, b.len(), "second list is not a subset");
    out
}

fn sorted_union(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The minimal generating set of the complement of the finite order ideal
/// `escalier`, lex ascending.
pub fn minimal_basis(escalier: &TermSet, nvars: usize) -> Result<TermSet, PotexpError> {
    minimal_basis_traced(escalier, nvars).map(|(g, _)| g)
}

pub fn minimal_basis_traced(
    escalier: &TermSet,
    nvars: usize,
) -> Result<(TermSet, DegreeSlicedIdealView), PotexpError> {
    if let Some(t) = escalier.iter().find(|t| t.nvars() != nvars) {
        return Err(MonomialError::LengthMismatch(t.nvars(), nvars).into());
    }
    check_order_ideal(escalier)?;
    // An empty escalier means the unit ideal, generated by 1 at degree 0.
    let top = escalier.iter().map(Term::degree).max().map_or(0, |h| h + 1);

    let mut view = DegreeSlicedIdealView::default();
    for d in 0..=top {
        // BTreeSet iteration is lex ascending, so each slice comes out sorted.
        view.slices.push(escalier.iter().filter(|t| t.degree() == d).cloned().collect());
    }

    let mut basis = TermSet::new();
    let mut expansion: Vec<Term> = Vec::new();
    for i in 0..=top {
        let slice = &view.slices[i as usize];
        let occupied = sorted_union(slice, &expansion);
        let full = binomial(nvars as u64 + i as u64 - 1, nvars as u64 - 1);
        let missing = full - occupied.len() as u64;
        let generators = if missing == 0 {
            Vec::new()
        } else {
            let g = sorted_complement(&terms_of_degree(nvars, i), &occupied);
            debug_assert_eq!(g.len() as u64, missing);
            g
        };
        basis.extend(generators.iter().cloned());
        let next = potential_expansion_step(&sorted_union(&generators, &expansion))?;
        view.expansions.push(std::mem::replace(&mut expansion, next));
        view.generators.push(generators);
    }
    Ok((basis, view))
}
