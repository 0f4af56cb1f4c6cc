//! Linear factorization of a minimal lexicographic Groebner basis of an ideal
//! of points ("Axis of Evil").
//!
//! For every minimal generator `tau = x1^d1 * ... * xn^dn` of the initial ideal
//! the basis element is built as a product of `d1 + ... + dn` factors. The
//! factors with leading variable `x_m` are `x_m + g(x1..x_{m-1})`, each one
//! interpolating the points of a subset `A` of the input that the partial
//! product does not yet vanish on. The surviving points `D` are threaded from
//! factor to factor; once `D` is empty the product lies in the ideal.

use crate::cemu::{cemu, cemu_raw, CemuError, Escalier, PointSet};
use crate::exec::{map_ordered, Execution};
use crate::linalg::{solve, LinalgError};
use crate::monomial::{Term, TermSet};
use crate::poly::{normal_form, PolyError, Polynomial};
use crate::potexp::{minimal_basis, PotexpError};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AoeError {
    #[error(transparent)]
    Cemu(#[from] CemuError),
    #[error(transparent)]
    Potexp(#[from] PotexpError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("escalier does not match the correspondence of the given points")]
    InconsistentEscalier,
    #[error("generator set does not match the minimal basis of the escalier")]
    InconsistentBasis,
    #[error("{0} lies in the escalier, not in the minimal basis")]
    TauInEscalier(Term),
    #[error("variable index {m} out of range 1..={nvars}")]
    VariableOutOfRange { m: usize, nvars: usize },
    #[error("points {first} and {second} share their first {m} coordinates")]
    ProjectionCollision { m: usize, first: usize, second: usize },
    #[error("interpolation support for x{m} contains {term}, which involves x{m}")]
    SupportContainsLeadingVariable { m: usize, term: Term },
    #[error("partial product for {tau} vanished on every point after factor ({m}, {delta})")]
    PrematureVanishing { tau: Term, m: usize, delta: usize },
    #[error("product for {tau} does not vanish on point {point}")]
    DoesNotVanish { tau: Term, point: usize },
    #[error("leading terms {0} and {1} are not an antichain")]
    NotMinimal(Term, Term),
}

/// A factor `x_m + sum c_w w` with the support `w` in `k[x1..x_{m-1}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFactor {
    /// Leading variable, 1-based.
    pub m: usize,
    /// Position among the factors with leading variable `x_m`, 1-based.
    pub delta: usize,
    /// Monic, with leading term `x_m`.
    pub body: Polynomial,
    /// The monomials `E` the interpolation was solved over.
    pub support: Vec<Term>,
    /// Indices of the points the factor was built to vanish on.
    pub interpolation_set: Vec<usize>,
}

/// What happened while processing one variable of one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableTrace {
    pub m: usize,
    /// `N_m(tau)`; `None` when the survivors ran out before it was needed.
    pub n_m: Option<Vec<Term>>,
    /// `D_{m0}`: points the product of the earlier variables' factors is nonzero on.
    pub survivors_before: Vec<usize>,
    /// `B_1`: first coordinates of the points in `A_1`. Only filled for `m = 1`.
    pub projections: Vec<Scalar>,
    /// `D_{m delta}` for `delta = 1..=d_m`.
    pub survivors: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredBasisElement {
    pub tau: Term,
    /// Grouped by leading variable, then by `delta`.
    pub factors: Vec<LinearFactor>,
    pub trace: Vec<VariableTrace>,
}

impl FactoredBasisElement {
    pub fn factors_for(&self, m: usize) -> impl Iterator<Item = &LinearFactor> {
        self.factors.iter().filter(move |f| f.m == m)
    }

    pub fn variable_trace(&self, m: usize) -> Option<&VariableTrace> {
        self.trace.iter().find(|t| t.m == m)
    }
}

/// One factored element per minimal generator, in lex ascending order of `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredGroebnerBasis {
    pub field: Field,
    pub nvars: usize,
    pub elements: Vec<FactoredBasisElement>,
}

impl FactoredGroebnerBasis {
    pub fn expanded(&self) -> Vec<Polynomial> {
        self.elements.iter().map(|e| expand(e, self.field, self.nvars)).collect()
    }

    pub fn leading_terms(&self) -> TermSet {
        self.elements.iter().map(|e| e.tau.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AoeOptions {
    /// Recompute the correspondence and minimal basis and compare them with
    /// the caller's.
    pub validate: bool,
    pub execution: Execution,
}

impl Default for AoeOptions {
    fn default() -> Self {
        AoeOptions { validate: true, execution: Execution::default() }
    }
}

/// `N_m(tau)`: the `w` in `k[x1..x_m]` with `w * x_{m+1}^{d_{m+1}} ... x_n^{d_n}`
/// in the escalier and lex smaller than `tau`. Returned as full-length terms,
/// lex ascending.
pub fn n_m_set(tau: &Term, escalier: &TermSet, m: usize) -> Result<Vec<Term>, AoeError> {
    let n = tau.nvars();
    if m == 0 || m > n {
        return Err(AoeError::VariableOutOfRange { m, nvars: n });
    }
    if escalier.contains(tau) {
        return Err(AoeError::TauInEscalier(tau.clone()));
    }
    let tail = &tau.exponents()[m..];
    Ok(escalier
        .iter()
        .filter(|nu| &nu.exponents()[m..] == tail && *nu < tau)
        .map(|nu| nu.truncate(m))
        .collect())
}

/// The monic `x_m + sum_{w in E} c_w w` vanishing on the given points, where
/// `E` is the escalier of their projection onto the first `m` coordinates.
/// With no points this is `x_m` itself.
///
/// Returns the factor body and `E`.
pub fn interpolate_factor(
    field: Field,
    nvars: usize,
    points: &[&[Scalar]],
    m: usize,
) -> Result<(Polynomial, Vec<Term>), AoeError> {
    if m == 0 || m > nvars {
        return Err(AoeError::VariableOutOfRange { m, nvars });
    }
    let projected: Vec<&[Scalar]> = points.iter().map(|p| &p[..m]).collect();
    for (j, p) in projected.iter().enumerate() {
        if let Some(i) = projected[..j].iter().position(|q| q == p) {
            return Err(AoeError::ProjectionCollision { m, first: i, second: j });
        }
    }
    let support: Vec<Term> = cemu_raw(&projected)?.into_iter().map(|t| t.extend(nvars)).collect();
    if let Some(bad) = support.iter().find(|t| t.exp(m - 1) > 0) {
        return Err(AoeError::SupportContainsLeadingVariable { m, term: bad.clone() });
    }
    let matrix: Vec<Vec<Scalar>> = points
        .iter()
        .map(|p| support.iter().map(|w| eval_term(w, p, field)).collect())
        .collect();
    let rhs: Vec<Scalar> = points.iter().map(|p| -&p[m - 1]).collect();
    let coeffs = solve(matrix, rhs)?;
    let body = Polynomial::from_terms(
        field,
        nvars,
        std::iter::once((Term::var(nvars, m - 1), field.one())).chain(support.iter().cloned().zip(coeffs)),
    );
    Ok((body, support))
}

fn eval_term(t: &Term, p: &[Scalar], field: Field) -> Scalar {
    t.exponents()
        .iter()
        .zip(p)
        .filter(|(&e, _)| e > 0)
        .fold(field.one(), |acc, (&e, a)| &acc * &a.pow(e))
}

struct Context<'a> {
    points: &'a PointSet,
    escalier: &'a Escalier,
    escalier_terms: TermSet,
}

impl Context<'_> {
    fn nonvanishing(&self, f: &Polynomial, among: &[usize]) -> Vec<usize> {
        among
            .iter()
            .copied()
            .filter(|&i| !f.evaluate(self.points.get(i)).expect("dimension checked").is_zero())
            .collect()
    }

    fn point_of(&self, t: &Term) -> Result<usize, AoeError> {
        Ok(self.escalier.phi_inverse(t)?)
    }

    fn factor(&self, tau: &Term) -> Result<FactoredBasisElement, AoeError> {
        let n = self.points.nvars();
        let field = self.points.field();
        let d = tau.exponents();
        let mut factors = Vec::new();
        let mut trace = Vec::new();

        // Variable x1: one linear factor per point above x1^i * (rest of tau), i < d1.
        let n1 = n_m_set(tau, &self.escalier_terms, 1)?;
        let a1: Vec<usize> = n1
            .iter()
            .map(|w| self.point_of(&tau.with_exp(0, w.exp(0))))
            .collect::<Result<_, _>>()?;
        let mut survivors: Vec<usize> = (0..self.points.len()).collect();
        let mut first = VariableTrace {
            m: 1,
            n_m: Some(n1),
            survivors_before: survivors.clone(),
            projections: Vec::with_capacity(a1.len()),
            survivors: Vec::with_capacity(a1.len()),
        };
        for (delta, &i) in a1.iter().enumerate() {
            let a = self.points.get(i)[0].clone();
            let body = Polynomial::var(field, n, 0) - Polynomial::constant(field, n, a.clone());
            survivors = self.nonvanishing(&body, &survivors);
            first.projections.push(a);
            first.survivors.push(survivors.clone());
            factors.push(LinearFactor {
                m: 1,
                delta: delta + 1,
                body,
                support: vec![Term::one(n)],
                interpolation_set: vec![i],
            });
        }
        trace.push(first);
        let remaining = |m: usize, delta: usize| d[m - 1] as usize > delta || d[m..].iter().any(|&e| e > 0);
        if survivors.is_empty() && remaining(1, d[0] as usize) {
            return Err(AoeError::PrematureVanishing { tau: tau.clone(), m: 1, delta: d[0] as usize });
        }

        for m in 2..=n {
            let mut vt = VariableTrace {
                m,
                n_m: None,
                survivors_before: survivors.clone(),
                projections: Vec::new(),
                survivors: Vec::new(),
            };
            if survivors.is_empty() {
                trace.push(vt);
                break;
            }
            let n_m = n_m_set(tau, &self.escalier_terms, m)?;
            let d_m = d[m - 1];
            for delta in 1..=d_m {
                let level = d_m - delta;
                let candidates: Vec<usize> = n_m
                    .iter()
                    .filter(|w| w.exp(m - 1) == level)
                    .map(|w| {
                        let mut full = w.clone();
                        for (v, &e) in d.iter().enumerate().skip(m) {
                            full = full.with_exp(v, e);
                        }
                        self.point_of(&full)
                    })
                    .collect::<Result<_, _>>()?;
                let mut a: Vec<usize> = candidates.into_iter().filter(|i| survivors.contains(i)).collect();
                a.sort_unstable();
                let coords: Vec<&[Scalar]> = a.iter().map(|&i| self.points.get(i)).collect();
                let (body, support) = interpolate_factor(field, n, &coords, m).map_err(|e| match e {
                    AoeError::ProjectionCollision { m, first, second } => {
                        AoeError::ProjectionCollision { m, first: a[first], second: a[second] }
                    }
                    other => other,
                })?;
                survivors = self.nonvanishing(&body, &survivors);
                vt.survivors.push(survivors.clone());
                factors.push(LinearFactor { m, delta: delta as usize, body, support, interpolation_set: a });
                if survivors.is_empty() && remaining(m, delta as usize) {
                    return Err(AoeError::PrematureVanishing { tau: tau.clone(), m, delta: delta as usize });
                }
            }
            vt.n_m = Some(n_m);
            trace.push(vt);
        }
        if let Some(&point) = survivors.first() {
            return Err(AoeError::DoesNotVanish { tau: tau.clone(), point });
        }
        Ok(FactoredBasisElement { tau: tau.clone(), factors, trace })
    }
}

/// Factors one basis element per generator in `basis`.
///
/// `escalier` must be the correspondence of `points` and `basis` its minimal
/// basis; with `options.validate` both are recomputed and compared. Each
/// generator is processed independently, so the result does not depend on the
/// iteration order, and output is sorted by `tau` either way.
pub fn axis_of_evil(
    points: &PointSet,
    escalier: &Escalier,
    basis: &TermSet,
    options: AoeOptions,
) -> Result<FactoredGroebnerBasis, AoeError> {
    let escalier_terms = escalier.term_set();
    if options.validate {
        if cemu(points)?.terms() != escalier.terms() {
            return Err(AoeError::InconsistentEscalier);
        }
        if &minimal_basis(&escalier_terms, points.nvars())? != basis {
            return Err(AoeError::InconsistentBasis);
        }
    }
    let ctx = Context { points, escalier, escalier_terms };
    let taus: Vec<Term> = basis.iter().cloned().collect();
    let elements = map_ordered(&taus, options.execution, |tau| ctx.factor(tau))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FactoredGroebnerBasis { field: points.field(), nvars: points.nvars(), elements })
}

/// Runs the whole pipeline: correspondence, minimal basis, factorization.
pub fn factorize(points: &PointSet, execution: Execution) -> Result<FactoredGroebnerBasis, AoeError> {
    let escalier = cemu(points)?;
    let basis = minimal_basis(&escalier.term_set(), points.nvars())?;
    axis_of_evil(points, &escalier, &basis, AoeOptions { validate: false, execution })
}

/// The product of all factors of `element`.
pub fn expand(element: &FactoredBasisElement, field: Field, nvars: usize) -> Polynomial {
    element
        .factors
        .iter()
        .fold(Polynomial::one(field, nvars), |acc, f| &acc * &f.body)
}

/// Turns a minimal Groebner basis into the reduced one: every element is
/// reduced by those with smaller leading terms and made monic. The result is
/// ordered by leading term.
pub fn reduce_basis(basis: &[Polynomial]) -> Result<Vec<Polynomial>, AoeError> {
    let mut sorted: Vec<&Polynomial> = basis.iter().collect();
    for f in &sorted {
        f.leading_term()?;
    }
    sorted.sort_by(|a, b| a.leading_term().unwrap().cmp(b.leading_term().unwrap()));
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            let (ta, tb) = (a.leading_term()?, b.leading_term()?);
            if ta.divides(tb) || tb.divides(ta) {
                return Err(AoeError::NotMinimal(ta.clone(), tb.clone()));
            }
        }
    }
    let mut reduced: Vec<Polynomial> = Vec::with_capacity(sorted.len());
    for f in sorted {
        let r = normal_form(f, &reduced).monic();
        reduced.push(r);
    }
    Ok(reduced)
}
