//! Linear order types with per-position multiplicities.
//!
//! An order expression is a finite sum of the primitives `Finite(k)`,
//! `ω` (positive integers), `ω*` (negative integers), `ζ` (all integers)
//! and `η` (rationals). A [`WeightedOrder`] attaches a multiplicity
//! (an integer ≥ 2) to every position. The ASCII grammar accepted by
//! [`parse_order`] is
//!
//! ```text
//! expr      ::= primitive ("+" primitive)*
//! primitive ::= INT weight | "w" weight | "w*" weight | "z" weight | "q" weight
//! weight    ::= "[" INT ("," INT)* "]"
//! ```
//!
//! with insignificant whitespace. A single weight value denotes a constant
//! multiplicity, several values denote a periodic pattern on `w`/`w*`/`z`
//! (indexed by coordinate modulo the pattern length) and an explicit
//! per-point list on a finite segment. Dense (`q`) segments take constant
//! weights only.

mod chain;
mod expr;
mod intervals;

pub use chain::{canonical_positions, is_predecessor_fair, MAX_CHAIN_DEPTH};
pub use expr::{
    format_order, has_first, normalize, parse_order, wois_split, Coord, Multiplicity, OrderError,
    OrderExpr, Position, WeightedOrder,
};
pub use intervals::{classify_iso, interval_decomposition, IntervalEntry, ZStream};
