//! Sparse multivariate polynomials over the active [`Field`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use crate::monomial::Term;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("ambient mismatch: {0} variables over {1} vs {2} variables over {3}")]
    AmbientMismatch(usize, Field, usize, Field),
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
}

/// A polynomial as a map from terms to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Term, Scalar>,
}

impl Polynomial {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Polynomial { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> Self {
        Self::monomial(field, Term::one(nvars), c)
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn monomial(field: Field, term: Term, c: Scalar) -> Self {
        let mut p = Self::zero(field, term.nvars());
        p.add_term(term, &c);
        p
    }

    /// The variable `x_{index+1}`.
    pub fn var(field: Field, nvars: usize, index: usize) -> Self {
        Self::monomial(field, Term::var(nvars, index), field.one())
    }

    /// Sums the given terms; repeated terms are combined and zeros dropped.
    pub fn from_terms(
        field: Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Term, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (t, c) in terms {
            assert_eq!(t.nvars(), nvars, "term {t} has the wrong number of variables");
            p.add_term(t, &c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lex ascending order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Term, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Term> {
        self.terms.keys()
    }

    pub fn coeff(&self, t: &Term) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Result<&Term, PolyError> {
        self.terms.keys().next_back().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_coeff(&self) -> Result<&Scalar, PolyError> {
        self.terms.values().next_back().ok_or(PolyError::ZeroPolynomial)
    }

    fn add_term(&mut self, t: Term, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `self -= c * shift * other`, in place.
    fn sub_scaled_shifted(&mut self, other: &Polynomial, shift: &Term, c: &Scalar) {
        let neg = -c;
        for (t, a) in &other.terms {
            self.add_term(t.mul(shift), &(&neg * a));
        }
    }

    fn check_ambient(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars == other.nvars && self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::AmbientMismatch(self.nvars, self.field, other.nvars, other.field))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ambient(other)?;
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                out.add_term(ta.mul(tb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (t, a) in &self.terms {
            out.add_term(t.clone(), &(a * c));
        }
        out
    }

    pub fn mul_term(&self, shift: &Term, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (t, a) in &self.terms {
            out.add_term(t.mul(shift), &(a * c));
        }
        out
    }

    /// True when every term lies in `k[x1..x_j]`.
    pub fn in_first_vars(&self, j: usize) -> bool {
        self.terms.keys().all(|t| t.in_first_vars(j))
    }

    /// Drops the variables after `x_j`, which must not occur.
    pub fn project_vars(&self, j: usize) -> Polynomial {
        debug_assert!(self.in_first_vars(j));
        Polynomial {
            field: self.field,
            nvars: j,
            terms: self.terms.iter().map(|(t, c)| (t.project(j), c.clone())).collect(),
        }
    }

    /// Divides by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Ok(lc) if !lc.is_one() => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
            _ => self.clone(),
        }
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let mut powers: Vec<Vec<Scalar>> = point.iter().map(|a| vec![self.field.one(), a.clone()]).collect();
        let mut acc = self.field.zero();
        for (t, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in t.exponents().iter().enumerate() {
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &point[i];
                    pw.push(next);
                }
                v = &v * &pw[e as usize];
            }
            acc = &acc + &v;
        }
        Ok(acc)
    }

    /// Renders with explicit coefficients, e.g. `x2 - 1/2*x1^2 + 7/2*x1 - 6`.
    fn render(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().rev().enumerate() {
            let (negative, magnitude) = match c {
                Scalar::Rational(r) if r.is_negative() => (true, -c),
                _ => (false, c.clone()),
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if t.is_one() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "{magnitude}*{t}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }
}

// Operator forms panic on ambient mismatch.
macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add, checked_add);
forward_poly_binop!(Sub, sub, checked_sub);
forward_poly_binop!(Mul, mul, checked_mul);

/// Reduces `f` modulo `reducers` until no term is divisible by a leading term.
///
/// Always the lex-largest reducible term is eliminated next, using the
/// applicable reducer with the lex-smallest leading term. Zero reducers are
/// ignored.
pub fn normal_form(f: &Polynomial, reducers: &[Polynomial]) -> Polynomial {
    let mut heads: Vec<(&Term, Scalar, &Polynomial)> = reducers
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| (b.leading_term().unwrap(), b.leading_coeff().unwrap().inv().unwrap(), b))
        .collect();
    heads.sort_by(|a, b| a.0.cmp(b.0));

    let mut r = f.clone();
    // Terms at or above `ceiling` are already irreducible and never change again.
    let mut ceiling: Option<Term> = None;
    loop {
        let hit = {
            let mut candidates: Box<dyn Iterator<Item = (&Term, &Scalar)>> = match &ceiling {
                Some(c) => Box::new(r.terms.range(..c.clone()).rev()),
                None => Box::new(r.terms.iter().rev()),
            };
            candidates.find_map(|(t, c)| {
                heads
                    .iter()
                    .find(|(lt, _, _)| lt.divides(t))
                    .map(|(lt, inv_lc, b)| (t.clone(), c * inv_lc, t.div(lt).unwrap(), *b))
            })
        };
        let Some((t, q, shift, b)) = hit else { break };
        r.sub_scaled_shifted(b, &shift, &q);
        debug_assert!(!r.terms.contains_key(&t));
        ceiling = Some(t);
    }
    r
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::monomial::t;

    /// Builds a rational polynomial from (coefficient, exponents) pairs.
    pub(crate) fn qpoly(nvars: usize, terms: &[(&str, &[u32])]) -> Polynomial {
        Polynomial::from_terms(
            Field::Rationals,
            nvars,
            terms.iter().map(|(c, e)| (t(e), Field::Rationals.parse(c).unwrap())),
        )
    }

    fn linear(a: i64) -> Polynomial {
        qpoly(3, &[("1", &[1, 0, 0]), (&(-a).to_string(), &[0, 0, 0])])
    }

    #[test]
    fn product_of_linear_factors() {
        let p = [4, 2, 3, 1].into_iter().map(linear).reduce(|a, b| &a * &b).unwrap();
        assert_eq!(p.to_string(), "x1^4 - 10*x1^3 + 35*x1^2 - 50*x1 + 24");
        let g = qpoly(3, &[("1", &[0, 1, 0]), ("-4", &[1, 0, 0]), ("4", &[0, 0, 0])]);
        assert_eq!(&g * &Polynomial::one(Field::Rationals, 3), g);
        assert_eq!(&g + &Polynomial::zero(Field::Rationals, 3), g);
    }

    #[test]
    fn evaluation() {
        let q = |s: &str| Field::Rationals.parse(s).unwrap();
        let g = qpoly(3, &[("1", &[0, 1, 0]), ("-4", &[1, 0, 0]), ("4", &[0, 0, 0])]);
        assert_eq!(g.evaluate(&[q("2"), q("4"), q("0")]).unwrap(), q("0"));
        assert_eq!(g.evaluate(&[q("4"), q("0"), q("0")]).unwrap(), q("-12"));
        assert_eq!(Polynomial::one(Field::Rationals, 3).evaluate(&[q("7"), q("1/2"), q("0")]).unwrap(), q("1"));
        assert_eq!(
            g.evaluate(&[q("1")]),
            Err(PolyError::DimensionMismatch { expected: 3, got: 1 })
        );
    }

    #[test]
    fn leading_data() {
        let g = qpoly(3, &[("1", &[0, 1, 0]), ("-4", &[1, 0, 0]), ("4", &[0, 0, 0])]);
        assert_eq!(g.leading_term().unwrap(), &t(&[0, 1, 0]));
        let c = qpoly(2, &[("5", &[0, 0])]);
        assert_eq!(c.leading_term().unwrap(), &t(&[0, 0]));
        assert_eq!(c.leading_coeff().unwrap().to_string(), "5");
        let h = qpoly(3, &[("2", &[0, 1, 0]), ("-1", &[2, 0, 0]), ("7", &[1, 0, 0]), ("-12", &[0, 0, 0])]);
        assert_eq!(h.leading_term().unwrap(), &t(&[0, 1, 0]));
        assert_eq!(h.leading_coeff().unwrap().to_string(), "2");
        assert_eq!(Polynomial::zero(Field::Rationals, 1).leading_term(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn normal_form_cases() {
        let f = qpoly(2, &[("1", &[1, 1]), ("-3", &[0, 1]), ("2", &[0, 0])]);
        assert!(normal_form(&f, std::slice::from_ref(&f)).is_zero());
        let x4 = qpoly(1, &[("1", &[4])]);
        let lin = qpoly(1, &[("1", &[1]), ("-4", &[0])]);
        assert_eq!(normal_form(&x4, &[lin]).to_string(), "256");
        assert_eq!(normal_form(&x4, &[]), x4);
    }

    #[test]
    fn rendering() {
        let h = qpoly(3, &[("1", &[0, 1, 0]), ("-1/2", &[2, 0, 0]), ("7/2", &[1, 0, 0]), ("-6", &[0, 0, 0])]);
        assert_eq!(h.to_string(), "x2 - 1/2*x1^2 + 7/2*x1 - 6");
        assert_eq!(qpoly(2, &[("-1", &[0, 1])]).to_string(), "-x2");
        assert_eq!(Polynomial::zero(Field::Rationals, 2).to_string(), "0");
        let f5 = Field::Prime(5);
        let p = Polynomial::from_terms(f5, 1, [(t(&[1]), f5.one()), (t(&[0]), f5.from_i64(-1))]);
        assert_eq!(p.to_string(), "x1 + 4");
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Polynomial::one(Field::Rationals, 2);
        let b = Polynomial::one(Field::Rationals, 3);
        assert!(matches!(a.checked_mul(&b), Err(PolyError::AmbientMismatch(..))));
        let c = Polynomial::one(Field::Prime(3), 2);
        assert!(a.checked_add(&c).is_err());
    }
}
