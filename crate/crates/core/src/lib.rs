//! Lexicographic Groebner bases of ideals of finite point sets.
//!
//! The pipeline runs in three combinatorial-then-algebraic stages:
//! [`cemu`] builds the escalier (the lex-standard monomials) of a point set
//! together with a bijection between points and terms, [`potexp`] extracts the
//! minimal generators of the complementary monomial ideal, and [`aoe`] turns
//! every generator into a product of linear factors whose product vanishes on
//! all points. [`verify`] holds independent oracles used to certify results.

pub mod aoe;
pub mod cemu;
pub mod exec;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod potexp;
pub mod scalar;
pub mod verify;

pub use aoe::{axis_of_evil, factorize, reduce_basis, AoeError, AoeOptions, FactoredBasisElement, FactoredGroebnerBasis, LinearFactor};
pub use cemu::{cemu, CemuError, Escalier, PointSet};
pub use exec::Execution;
pub use monomial::{Term, TermSet};
pub use poly::Polynomial;
pub use potexp::minimal_basis;
pub use scalar::{Field, Scalar};
pub use verify::{gb_certificate, moeller_gb, GbCertificate};
