//! Exact computations with lexicographic products of triangular matrix
//! algebras over countable linear order types.
//!
//! The crate works at "desk scale": order types are finite sums of the
//! primitives `k`, `ω`, `ω*`, `ζ`, `η` with per-position multiplicities,
//! and every algebraic question is answered exactly (rational arithmetic,
//! no floats) on finite stages of the corresponding direct limit.
//!
//! Module map:
//!
//! * [`order`] — order-type expressions, parsing, normalization, the
//!   well-ordered initial segment split, maximal-interval decompositions
//!   and the isomorphism-invariant comparison, plus canonical finite
//!   position chains.
//! * [`algebra`] — finite digraph algebras (reflexive transitive relations
//!   with exact matrix-unit arithmetic), the binary lexicographic product,
//!   the combinatorial radical and an independent trace-form oracle.
//! * [`tower`] — stage algebras over finite position sets, multi-index
//!   labels, and the refinement embeddings between stages.
//! * [`limits`] — limit-level verdicts: radical membership and dimension,
//!   semisimplicity, elementary radical decompositions, link search and
//!   nilpotency experiments.
//!
//! With the default `parallel` feature the heavy sweeps (radical counting,
//! link scans, embedding checks) run on rayon; disabling the feature gives
//! a dependency-free sequential build. The `*_seq` variants are always
//! available and are what the criterion benches compare against.

pub mod algebra;
pub mod limits;
pub mod order;
pub mod tower;

pub use algebra::{
    from_relation, lex_product, radical_combinatorial, radical_trace_oracle,
    semisimple_quotient, stage_radical_formula, strict_ideal, triangular_algebra,
    DigraphAlgebra, Element, Ideal, MatrixUnit,
};
pub use order::{
    classify_iso, format_order, has_first, interval_decomposition, normalize, parse_order,
    wois_split, Multiplicity, OrderExpr, Position, WeightedOrder,
};
pub use tower::{build_chain, embed, lex_compare, stage_algebra, MultiIndex, Stage, StageChain};
