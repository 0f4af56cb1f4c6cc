//! The Cerlienco-Mureddu correspondence: an ordered list of distinct points is
//! mapped, one point at a time, onto the terms of the lexicographic Groebner
//! escalier of its vanishing ideal.

use std::collections::HashMap;

use crate::monomial::{Term, TermSet};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CemuError {
    #[error("point set is empty")]
    Empty,
    #[error("points must have at least one coordinate")]
    NoCoordinates,
    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("point {index} has coordinates outside field {expected}")]
    FieldMismatch { index: usize, expected: Field },
    #[error("points {first} and {second} coincide (0-based)")]
    Duplicate { first: usize, second: usize },
    #[error("term {0} is not in the escalier")]
    TermNotInEscalier(Term),
    #[error("no sigma-antecedent for point {0}; prior correspondence is inconsistent")]
    NoAntecedent(usize),
}

pub type Point = Vec<Scalar>;

/// An ordered list of pairwise distinct points of uniform dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    field: Field,
    nvars: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(field: Field, points: Vec<Point>) -> Result<Self, CemuError> {
        let nvars = points.first().ok_or(CemuError::Empty)?.len();
        if nvars == 0 {
            return Err(CemuError::NoCoordinates);
        }
        let mut seen: HashMap<&[Scalar], usize> = HashMap::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            if p.len() != nvars {
                return Err(CemuError::DimensionMismatch { index, expected: nvars, got: p.len() });
            }
            if p.iter().any(|c| c.field() != field) {
                return Err(CemuError::FieldMismatch { index, expected: field });
            }
            if let Some(&first) = seen.get(p.as_slice()) {
                return Err(CemuError::Duplicate { first, second: index });
            }
            seen.insert(p, index);
        }
        Ok(PointSet { field, nvars, points })
    }

    /// Convenience constructor for integer coordinates.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Result<Self, CemuError> {
        let points = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::new(field, points)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, index: usize) -> &[Scalar] {
        &self.points[index]
    }

    /// The same points in another order, given as a permutation of indices.
    pub fn permuted(&self, order: &[usize]) -> PointSet {
        PointSet {
            field: self.field,
            nvars: self.nvars,
            points: order.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// The first `m` coordinates of every point, with repeats removed while
    /// keeping first occurrences in order.
    pub fn project_dedup(&self, m: usize) -> PointSet {
        let mut seen = std::collections::HashSet::new();
        let points = self
            .points
            .iter()
            .map(|p| p[..m].to_vec())
            .filter(|p| seen.insert(p.clone()))
            .collect();
        PointSet { field: self.field, nvars: m, points }
    }

    pub fn prefix(&self, len: usize) -> PointSet {
        PointSet { field: self.field, nvars: self.nvars, points: self.points[..len].to_vec() }
    }
}

/// How the term of one point was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CemuStep {
    /// The sigma-value; `None` for the first point.
    pub sigma: Option<usize>,
    /// Index of the sigma-antecedent among the earlier points.
    pub antecedent: Option<usize>,
    /// Indices of the points whose images end in `(.., d_s, 0, .., 0)`, the current
    /// point last; present only when the lower coordinates needed recursion.
    pub recursion_set: Option<Vec<usize>>,
}

/// The correspondence: entry `k` is the term assigned to point `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Escalier {
    nvars: usize,
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    trace: Vec<CemuStep>,
}

impl Escalier {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in insertion order (the order of the source points).
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The image of point `k`.
    pub fn phi(&self, k: usize) -> &Term {
        &self.terms[k]
    }

    pub fn term_set(&self) -> TermSet {
        self.terms.iter().cloned().collect()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index.contains_key(t)
    }

    /// Index of the unique point mapped to `t`.
    pub fn phi_inverse(&self, t: &Term) -> Result<usize, CemuError> {
        self.index.get(t).copied().ok_or_else(|| CemuError::TermNotInEscalier(t.clone()))
    }

    pub fn trace(&self) -> &[CemuStep] {
        &self.trace
    }
}

fn common_prefix(a: &[Scalar], b: &[Scalar]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// The largest `s` such that some earlier point agrees with `p` on the first
/// `s - 1` coordinates. Always `1 <= s <= n`.
pub fn sigma_value(p: &[Scalar], prior: &[Point]) -> Result<usize, CemuError> {
    let mut best = 0;
    for (i, q) in prior.iter().enumerate() {
        let l = common_prefix(p, q);
        if l == p.len() {
            return Err(CemuError::Duplicate { first: i, second: prior.len() });
        }
        best = best.max(l);
    }
    Ok(best + 1)
}

/// The term of `p` given the earlier points and their terms.
fn next_term(
    prior: &[&[Scalar]],
    prior_terms: &[Term],
    p: &[Scalar],
) -> Result<(Term, CemuStep), CemuError> {
    let n = p.len();
    if prior.is_empty() {
        return Ok((Term::one(n), CemuStep { sigma: None, antecedent: None, recursion_set: None }));
    }
    let prefixes: Vec<usize> = prior.iter().map(|q| common_prefix(p, q)).collect();
    let s = prefixes.iter().max().unwrap() + 1;
    if s > n {
        let first = prefixes.iter().position(|&l| l == n).unwrap();
        return Err(CemuError::Duplicate { first, second: prior.len() });
    }
    let top_zero = |t: &Term| t.exponents()[s..].iter().all(|&e| e == 0);
    let antecedent = (0..prior.len())
        .rev()
        .find(|&i| prefixes[i] >= s - 1 && top_zero(&prior_terms[i]))
        .ok_or(CemuError::NoAntecedent(prior.len()))?;
    let d_s = prior_terms[antecedent].exp(s - 1) + 1;
    let mut exps = vec![0u32; n];
    exps[s - 1] = d_s;

    let mut recursion_set = None;
    if s > 1 {
        let w: Vec<usize> = (0..prior.len())
            .filter(|&i| prior_terms[i].exp(s - 1) == d_s && top_zero(&prior_terms[i]))
            .collect();
        let sub_points: Vec<&[Scalar]> = w.iter().map(|&i| &prior[i][..s - 1]).collect();
        let sub_terms: Vec<Term> = w.iter().map(|&i| prior_terms[i].project(s - 1)).collect();
        let (lower, _) = next_term(&sub_points, &sub_terms, &p[..s - 1])?;
        exps[..s - 1].copy_from_slice(lower.exponents());
        let mut w = w;
        w.push(prior.len());
        recursion_set = Some(w);
    }
    let step = CemuStep { sigma: Some(s), antecedent: Some(antecedent), recursion_set };
    Ok((Term::new(exps), step))
}

/// Computes the correspondence for the points in their given order.
///
/// The first `m` entries of the result only depend on the first `m` points.
pub fn cemu(points: &PointSet) -> Result<Escalier, CemuError> {
    let n = points.nvars();
    let mut terms: Vec<Term> = Vec::with_capacity(points.len());
    let mut trace = Vec::with_capacity(points.len());
    let mut prior: Vec<&[Scalar]> = Vec::with_capacity(points.len());
    for p in points.points() {
        let (t, step) = next_term(&prior, &terms, p)?;
        terms.push(t);
        trace.push(step);
        prior.push(p);
    }
    let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    Ok(Escalier { nvars: n, terms, index, trace })
}

/// Correspondence for raw coordinate lists (used on projections, where the
/// caller has already checked distinctness).
pub(crate) fn cemu_raw(points: &[&[Scalar]]) -> Result<Vec<Term>, CemuError> {
    let mut terms = Vec::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        let (t, _) = next_term(&points[..k], &terms, p)?;
        terms.push(t);
    }
    Ok(terms)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::monomial::t;

    pub(crate) fn worked_points() -> PointSet {
        PointSet::from_ints(
            Field::Rationals,
            &[
                &[4, 0, 0], &[2, 1, 4], &[2, 4, 0], &[3, 0, 1], &[2, 1, 3],
                &[1, 3, 4], &[2, 4, 3], &[2, 4, 2], &[1, 0, 2],
            ],
        )
        .unwrap()
    }

    #[test]
    fn sigma_examples() {
        let x = worked_points();
        assert_eq!(sigma_value(x.get(1), &x.points()[..1]), Ok(1));
        assert_eq!(sigma_value(x.get(4), &x.points()[..4]), Ok(3));
        let f = Field::Rationals;
        let fresh = vec![f.from_i64(9), f.from_i64(4), f.from_i64(0)];
        assert_eq!(sigma_value(&fresh, x.points()), Ok(1));
        assert_eq!(
            sigma_value(x.get(2), x.points()),
            Err(CemuError::Duplicate { first: 2, second: 9 })
        );
    }

    #[test]
    fn worked_trace() {
        let e = cemu(&worked_points()).unwrap();
        let expected = [
            [0, 0, 0], [1, 0, 0], [0, 1, 0], [2, 0, 0], [0, 0, 1],
            [3, 0, 0], [0, 1, 1], [0, 0, 2], [1, 1, 0],
        ];
        for (k, exps) in expected.iter().enumerate() {
            assert_eq!(e.phi(k), &t(exps), "point {}", k + 1);
        }
        let sigmas: Vec<_> = e.trace().iter().map(|s| s.sigma).collect();
        assert_eq!(sigmas, [None, Some(1), Some(2), Some(1), Some(3), Some(1), Some(3), Some(3), Some(2)]);
        // 1-based antecedents. P4 gets 2: its image (2,0,0) is one above (1,0,0) = P2.
        let ante: Vec<_> = e.trace().iter().map(|s| s.antecedent.map(|a| a + 1)).collect();
        assert_eq!(ante, [None, Some(1), Some(2), Some(2), Some(2), Some(4), Some(3), Some(7), Some(6)]);
        assert_eq!(e.trace()[6].recursion_set, Some(vec![4, 6]));
        assert_eq!(e.trace()[8].recursion_set, Some(vec![2, 8]));
    }

    #[test]
    fn phi_inverse_lookup() {
        let x = worked_points();
        let e = cemu(&x).unwrap();
        assert_eq!(x.get(e.phi_inverse(&t(&[1, 0, 0])).unwrap()), x.get(1));
        assert_eq!(e.phi_inverse(&t(&[0, 0, 0])), Ok(0));
        assert_eq!(e.phi_inverse(&t(&[0, 1, 1])), Ok(6));
        assert_eq!(
            e.phi_inverse(&t(&[4, 0, 0])),
            Err(CemuError::TermNotInEscalier(t(&[4, 0, 0])))
        );
    }

    #[test]
    fn small_cases() {
        let f = Field::Rationals;
        let one = cemu(&PointSet::from_ints(f, &[&[5, -1, 2]]).unwrap()).unwrap();
        assert_eq!(one.terms(), &[t(&[0, 0, 0])]);
        let line = cemu(&PointSet::from_ints(f, &[&[0, 7], &[1, 7], &[2, 9]]).unwrap()).unwrap();
        assert_eq!(line.terms(), &[t(&[0, 0]), t(&[1, 0]), t(&[2, 0])]);
    }

    #[test]
    fn point_set_validation() {
        let f = Field::Rationals;
        assert_eq!(PointSet::from_ints(f, &[]), Err(CemuError::Empty));
        assert_eq!(
            PointSet::from_ints(f, &[&[1, 2], &[1]]),
            Err(CemuError::DimensionMismatch { index: 1, expected: 2, got: 1 })
        );
        assert_eq!(
            PointSet::from_ints(f, &[&[1, 2], &[0, 0], &[1, 2]]),
            Err(CemuError::Duplicate { first: 0, second: 2 })
        );
        // distinct over Q, equal mod 5
        assert!(PointSet::from_ints(Field::Prime(5), &[&[1, 2], &[6, 2]]).is_err());
    }
}
