//! Finite digraph algebras with exact matrix-unit arithmetic.
//!
//! A digraph algebra is the span of the matrix units `e_{ij}` over a
//! reflexive transitive relation on `{1..n}`; it is triangular when the
//! relation is antisymmetric. Everything here is exact: coefficients are
//! `i64` rationals and the radical computations are rank statements, so
//! there are no tolerances anywhere.

mod digraph;
mod element;
pub mod gen;
mod json;
mod oracle;

pub use digraph::{
    diagonal_algebra, from_relation, full_matrix_algebra, lex_product, radical_combinatorial,
    reflexive_transitive_closure, semisimple_quotient, stage_radical_formula, strict_ideal,
    transitive_witness, triangular_algebra, AlgebraError, DigraphAlgebra, Ideal, Label, MatrixUnit,
};
pub use element::{Coef, Element};
pub use json::{element_from_terms, RelationDto, TermDto};
pub use oracle::{
    element_coordinates, radical_trace_oracle, radical_trace_oracle_with_cap, spans_equal,
    DEFAULT_ORACLE_CAP,
};
