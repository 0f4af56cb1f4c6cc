//! Independent checks: vanishing tables, a Buchberger-Moeller oracle for the
//! reduced basis, Groebner certificates, S-polynomial and elimination checks.

use crate::aoe::FactoredGroebnerBasis;
use crate::cemu::{cemu, CemuError, PointSet};
use crate::exec::{map_ordered, Execution};
use crate::monomial::{Term, TermSet};
use crate::poly::{normal_form, Polynomial};
use crate::potexp::{minimal_basis, PotexpError};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Cemu(#[from] CemuError),
    #[error(transparent)]
    Potexp(#[from] PotexpError),
    #[error("elimination index {j} out of range 1..={nvars}")]
    EliminationIndex { j: usize, nvars: usize },
}

/// A nonzero value of a basis element at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingWitness {
    pub element: usize,
    pub point: usize,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingReport {
    /// `table[f][p]` is element `f` evaluated at point `p`; empty rows mark
    /// elements whose variable count does not match the points.
    pub table: Vec<Vec<Scalar>>,
    pub failures: Vec<VanishingWitness>,
    pub dimension_mismatches: Vec<usize>,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.dimension_mismatches.is_empty()
    }
}

/// Evaluates every polynomial at every point.
pub fn check_vanishing(basis: &[Polynomial], points: &PointSet) -> VanishingReport {
    check_vanishing_with(basis, points, Execution::Sequential)
}

pub fn check_vanishing_with(basis: &[Polynomial], points: &PointSet, exec: Execution) -> VanishingReport {
    let table: Vec<Vec<Scalar>> = map_ordered(basis, exec, |f| {
        points.points().iter().map_while(|p| f.evaluate(p).ok()).collect()
    });
    let mut failures = Vec::new();
    let mut dimension_mismatches = Vec::new();
    for (element, (f, row)) in basis.iter().zip(&table).enumerate() {
        if f.nvars() != points.nvars() {
            dimension_mismatches.push(element);
            continue;
        }
        for (point, value) in row.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            failures.push(VanishingWitness { element, point, value: value.clone() });
        }
    }
    VanishingReport { table, failures, dimension_mismatches }
}

/// Escalier and reduced Groebner basis computed by the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoellerBasis {
    /// Lex ascending.
    pub escalier: Vec<Term>,
    /// Monic, ordered by leading term.
    pub reduced: Vec<Polynomial>,
}

struct EchelonRow {
    pivot: usize,
    values: Vec<Scalar>,
    /// The row equals the evaluation of `sum combo[k] * escalier[k]`.
    combo: Vec<Scalar>,
}

fn eval_term(t: &Term, p: &[Scalar], field: Field) -> Scalar {
    t.exponents()
        .iter()
        .zip(p)
        .filter(|(&e, _)| e > 0)
        .fold(field.one(), |acc, (&e, a)| &acc * &a.pow(e))
}

/// Buchberger-Moeller over the lex order.
///
/// Terms are visited in increasing lex order, skipping multiples of leading
/// terms already found. Each term's evaluation vector is reduced against the
/// echelon form of the escalier terms seen so far: an independent vector adds
/// the term to the escalier, a dependent one yields `term - combination` as a
/// reduced basis element. The output is independent of the point order.
pub fn moeller_gb(points: &PointSet) -> MoellerBasis {
    let field = points.field();
    let n = points.nvars();
    let mut escalier: Vec<Term> = Vec::new();
    let mut rows: Vec<EchelonRow> = Vec::new();
    let mut leading: Vec<Term> = Vec::new();
    let mut reduced = Vec::new();

    let mut exps = vec![0u32; n];
    loop {
        let term = Term::new(exps.iter().copied());
        let in_ideal = leading.iter().any(|lt| lt.divides(&term)) || {
            let mut values: Vec<Scalar> = points.points().iter().map(|p| eval_term(&term, p, field)).collect();
            let mut combo = vec![field.zero(); escalier.len()];
            for row in &rows {
                let c = values[row.pivot].clone();
                if c.is_zero() {
                    continue;
                }
                for (v, r) in values.iter_mut().zip(&row.values) {
                    *v = &*v - &(&c * r);
                }
                for (k, r) in combo.iter_mut().zip(&row.combo) {
                    *k = &*k - &(&c * r);
                }
            }
            match values.iter().position(|v| !v.is_zero()) {
                Some(pivot) => {
                    let inv = values[pivot].inv().unwrap();
                    combo.push(field.one());
                    rows.push(EchelonRow {
                        pivot,
                        values: values.iter().map(|v| v * &inv).collect(),
                        combo: combo.iter().map(|v| v * &inv).collect(),
                    });
                    escalier.push(term.clone());
                    for row in rows.iter_mut() {
                        row.combo.resize(escalier.len(), field.zero());
                    }
                    false
                }
                None => {
                    let poly = Polynomial::from_terms(
                        field,
                        n,
                        std::iter::once((term.clone(), field.one()))
                            .chain(escalier.iter().cloned().zip(combo)),
                    );
                    reduced.push(poly);
                    leading.push(term.clone());
                    true
                }
            }
        };
        if in_ideal {
            // Every term sharing the exponents above position p, with at
            // least exps[p] at p, is a multiple of `term`: jump past them.
            let p = exps.iter().position(|&e| e > 0).expect("1 is never in the ideal of a nonempty set");
            if p + 1 == n {
                break;
            }
            exps[..=p].iter_mut().for_each(|e| *e = 0);
            exps[p + 1] += 1;
        } else {
            exps[0] += 1;
        }
    }
    MoellerBasis { escalier, reduced }
}

/// Evidence that a factored basis is a Groebner basis of the ideal of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbCertificate {
    pub vanishing: VanishingReport,
    /// Leading terms of the expanded elements, in element order.
    pub leading_terms: Vec<Term>,
    /// Minimal basis of the escalier of the points.
    pub expected_leading_terms: Vec<Term>,
    pub escalier_size: usize,
    pub point_count: usize,
    pub spolys: Option<SpolyReport>,
}

impl GbCertificate {
    pub fn leading_terms_match(&self) -> bool {
        let got: TermSet = self.leading_terms.iter().cloned().collect();
        got.len() == self.leading_terms.len()
            && got.into_iter().eq(self.expected_leading_terms.iter().cloned())
    }

    pub fn cardinality_ok(&self) -> bool {
        self.escalier_size == self.point_count
    }

    pub fn is_valid(&self) -> bool {
        self.vanishing.passed()
            && self.leading_terms_match()
            && self.cardinality_ok()
            && self.spolys.as_ref().is_none_or(SpolyReport::passed)
    }
}

/// Expands `basis`, checks it vanishes on `points`, compares its leading terms
/// with the minimal basis of the escalier, and checks `|N| = |X|`.
pub fn gb_certificate(basis: &FactoredGroebnerBasis, points: &PointSet) -> Result<GbCertificate, VerifyError> {
    certify(&basis.expanded(), points, false)
}

/// Like [`gb_certificate`] for plain polynomials; optionally adds an
/// S-polynomial report.
pub fn certify(polys: &[Polynomial], points: &PointSet, with_spolys: bool) -> Result<GbCertificate, VerifyError> {
    let escalier = cemu(points)?;
    let expected = minimal_basis(&escalier.term_set(), points.nvars())?;
    Ok(GbCertificate {
        vanishing: check_vanishing_with(polys, points, Execution::default()),
        leading_terms: polys.iter().filter_map(|f| f.leading_term().ok().cloned()).collect(),
        expected_leading_terms: expected.into_iter().collect(),
        escalier_size: escalier.len(),
        point_count: points.len(),
        spolys: with_spolys.then(|| spoly_check(polys)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpolyReport {
    pub pairs_checked: usize,
    /// `(i, j, remainder)` for every pair whose S-polynomial does not reduce to 0.
    pub failures: Vec<(usize, usize, Polynomial)>,
}

impl SpolyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (tf, tg) = (f.leading_term().unwrap(), g.leading_term().unwrap());
    let lcm = tf.lcm(tg);
    let cf = f.leading_coeff().unwrap().inv().unwrap();
    let cg = g.leading_coeff().unwrap().inv().unwrap();
    &f.mul_term(&lcm.div(tf).unwrap(), &cf) - &g.mul_term(&lcm.div(tg).unwrap(), &cg)
}

/// Buchberger's criterion: every S-polynomial reduces to zero modulo `basis`.
/// Zero polynomials in `basis` are skipped.
pub fn spoly_check(basis: &[Polynomial]) -> SpolyReport {
    let nonzero: Vec<(usize, &Polynomial)> = basis.iter().enumerate().filter(|(_, f)| !f.is_zero()).collect();
    let pairs: Vec<(usize, usize)> = (0..nonzero.len())
        .flat_map(|a| (a + 1..nonzero.len()).map(move |b| (a, b)))
        .collect();
    let remainders = map_ordered(&pairs, Execution::default(), |&(a, b)| {
        normal_form(&s_polynomial(nonzero[a].1, nonzero[b].1), basis)
    });
    let failures = pairs
        .iter()
        .zip(remainders)
        .filter(|(_, r)| !r.is_zero())
        .map(|(&(a, b), r)| (nonzero[a].0, nonzero[b].0, r))
        .collect();
    SpolyReport { pairs_checked: pairs.len(), failures }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationReport {
    pub j: usize,
    /// Elements of the basis lying in `k[x1..x_j]`, as polynomials in `j` variables.
    pub restricted: Vec<Polynomial>,
    /// Oracle basis of the projected, deduplicated points.
    pub oracle: Vec<Polynomial>,
}

impl EliminationReport {
    pub fn passed(&self) -> bool {
        self.restricted == self.oracle
    }
}

/// Compares the part of a reduced basis lying in `k[x1..x_j]` with the oracle
/// basis of the points projected onto their first `j` coordinates.
pub fn elimination_check(reduced: &[Polynomial], points: &PointSet, j: usize) -> Result<EliminationReport, VerifyError> {
    let n = points.nvars();
    if j == 0 || j > n {
        return Err(VerifyError::EliminationIndex { j, nvars: n });
    }
    let mut restricted: Vec<Polynomial> = reduced
        .iter()
        .filter(|f| !f.is_zero() && f.in_first_vars(j))
        .map(|f| f.project_vars(j))
        .collect();
    restricted.sort_by(|a, b| a.leading_term().unwrap().cmp(b.leading_term().unwrap()));
    let oracle = moeller_gb(&points.project_dedup(j)).reduced;
    Ok(EliminationReport { j, restricted, oracle })
}
