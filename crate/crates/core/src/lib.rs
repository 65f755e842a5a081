//! Verification engine for quasi-linear Poisson and operator algebras.
//!
//! An algebra is quasi-linear when the bracket (or commutator) of a chosen Hamiltonian with each
//! generator is linear in the generators, with coefficients that are functions of the Hamiltonian
//! alone. The Heisenberg flow `exp(tH) X exp(-tH)` then stays in that finite span, so it can be
//! written down in closed form. This crate builds those structures, checks their defining
//! identities exactly, and compares closed-form flows with independent numeric oracles.
//!
//! | module | contents |
//! |---|---|
//! | [`poly`] | exact polynomials over `Q(i)` and the expression parser |
//! | [`ncrewrite`] | normal ordering for quadratic noncommutative rewrite systems |
//! | [`poisson`] | polynomial Poisson structures, Jacobi and curl tests, canonical forms, classical flows |
//! | [`flow`] | ad-actions, series and matrix-exponential flows, closed forms |
//! | [`reps`] | matrix representations, relation residuals, closure detection |
//! | [`cli`] | algebra-definition files, builtins, verification suites and reports |

pub mod cli;
pub mod flow;
pub mod linalg;
pub mod ncrewrite;
pub mod poisson;
pub mod poly;
pub mod reps;
