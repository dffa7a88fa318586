//! Stage algebras over finite position sets and the embeddings between
//! them.
//!
//! A stage is a finite set of positions `F` of a weighted order together
//! with the algebra spanned by the matrix units `e_{I,J}` over multi-index
//! labels `I`, one coordinate per position. The relation holds `(I, J)`
//! when `I = J` or, at the first position where they differ, the pair of
//! coordinates is an edge of that position's factor (strictly upper for
//! the default `T_{n_w}` factors); earlier positions agree and later ones
//! are unconstrained. Under the row-major flattening this makes the
//! all-`T` stage literally the upper triangular algebra of its size, and
//! in general the iterated binary lexicographic product of the factors.
//!
//! The embedding of a smaller stage into a larger one sends `e_{I,J}` to
//! the sum over all assignments of values to the new positions, placed
//! identically on the row and column side. It is unital, multiplicative
//! and injective, and those properties are what the acceptance suite
//! checks exhaustively at small sizes.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::algebra::{AlgebraError, Coef, DigraphAlgebra, Element, Label};
use crate::order::{canonical_positions, OrderError, Position, WeightedOrder};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("multi-index length {left} does not match {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("a stage needs at least one position")]
    EmptyPositionSet,
    #[error("stage size {n_f} exceeds the budget {budget}")]
    BudgetExceeded { n_f: u128, budget: u64 },
    #[error("the source stage positions are not a subset of the target stage positions")]
    NotSubchain,
    #[error("stages belong to different weighted orders")]
    OrderMismatch,
    #[error("element does not live in the expected stage")]
    ElementNotInStage,
    #[error("factor override for segment {segment}: {message}")]
    FactorMismatch { segment: usize, message: String },
    #[error("vertex {vertex} is out of range for a stage of size {n}")]
    VertexOutOfRange { vertex: u32, n: u32 },
}

/// A multi-index over the positions of a stage; entries are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Dictionary comparison of two multi-indices of the same stage.
pub fn lex_compare(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering, TowerError> {
    if a.0.len() != b.0.len() {
        return Err(TowerError::LengthMismatch {
            left: a.0.len(),
            right: b.0.len(),
        });
    }
    Ok(a.0.cmp(&b.0))
}

/// Per-segment factor algebra overrides; the default factor at every
/// position is the triangular algebra of that position's multiplicity.
pub type SegmentFactors = BTreeMap<usize, DigraphAlgebra>;

/// A finite stage: positions, their multiplicities and the labeled stage
/// algebra. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Stage {
    order: WeightedOrder,
    positions: Vec<Position>,
    mults: Vec<u32>,
    factors: Vec<Option<DigraphAlgebra>>,
    algebra: Arc<DigraphAlgebra>,
}

impl PartialEq for Stage {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.positions == other.positions
            && self.factors == other.factors
    }
}

impl Eq for Stage {}

impl Stage {
    pub fn order(&self) -> &WeightedOrder {
        &self.order
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn algebra(&self) -> &Arc<DigraphAlgebra> {
        &self.algebra
    }

    pub fn n_f(&self) -> u32 {
        self.algebra.n()
    }

    /// The multi-index label of a (1-based) flat vertex.
    pub fn label(&self, vertex: u32) -> Result<MultiIndex, TowerError> {
        if vertex == 0 || vertex > self.n_f() {
            return Err(TowerError::VertexOutOfRange {
                vertex,
                n: self.n_f(),
            });
        }
        Ok(MultiIndex(
            self.algebra
                .label(vertex)
                .expect("stage algebras are labeled")
                .clone(),
        ))
    }

    /// Row-major flat index of a multi-index.
    pub fn flat_index(&self, index: &MultiIndex) -> Result<u32, TowerError> {
        if index.0.len() != self.mults.len() {
            return Err(TowerError::LengthMismatch {
                left: index.0.len(),
                right: self.mults.len(),
            });
        }
        let mut flat: u64 = 0;
        for (entry, &size) in index.0.iter().zip(&self.mults) {
            if *entry == 0 || *entry > size {
                return Err(TowerError::VertexOutOfRange {
                    vertex: *entry,
                    n: size,
                });
            }
            flat = flat * size as u64 + (*entry - 1) as u64;
        }
        Ok(flat as u32 + 1)
    }

    /// The matrix unit `e_{I,J}` as an element of the stage algebra.
    pub fn unit(&self, row: &MultiIndex, col: &MultiIndex) -> Result<Element, TowerError> {
        let r = self.flat_index(row)?;
        let c = self.flat_index(col)?;
        Ok(Element::unit(&self.algebra, r, c)?)
    }

    pub fn identity(&self) -> Element {
        Element::identity(&self.algebra)
    }

    /// The factor algebra acting at position slot `k` (`None` means the
    /// default triangular factor of that slot's multiplicity).
    pub fn factor_override(&self, slot: usize) -> Option<&DigraphAlgebra> {
        self.factors[slot].as_ref()
    }
}

/// The stage over an explicit position set, all factors triangular.
pub fn stage_algebra(w: &WeightedOrder, positions: &[Position]) -> Result<Stage, TowerError> {
    stage_algebra_with_factors(w, positions, &SegmentFactors::new())
}

/// The stage over an explicit position set with per-segment factor
/// overrides. An override must be triangular and of the segment's
/// (necessarily constant along the used positions) multiplicity.
pub fn stage_algebra_with_factors(
    w: &WeightedOrder,
    positions: &[Position],
    overrides: &SegmentFactors,
) -> Result<Stage, TowerError> {
    build_stage(w, positions, overrides, None)
}

fn build_stage(
    w: &WeightedOrder,
    positions: &[Position],
    overrides: &SegmentFactors,
    budget: Option<u64>,
) -> Result<Stage, TowerError> {
    if positions.is_empty() {
        return Err(TowerError::EmptyPositionSet);
    }
    let mut positions: Vec<Position> = positions.to_vec();
    positions.sort();
    positions.dedup();

    let mut mults = Vec::with_capacity(positions.len());
    let mut factors: Vec<Option<DigraphAlgebra>> = Vec::with_capacity(positions.len());
    let mut n_f: u128 = 1;
    for p in &positions {
        let m = w.multiplicity_at(p)?;
        if let Some(factor) = overrides.get(&p.segment) {
            if !factor.is_triangular() {
                return Err(TowerError::FactorMismatch {
                    segment: p.segment,
                    message: "factor overrides must be triangular".into(),
                });
            }
            if factor.n() != m {
                return Err(TowerError::FactorMismatch {
                    segment: p.segment,
                    message: format!(
                        "factor has {} vertices but the position multiplicity is {m}",
                        factor.n()
                    ),
                });
            }
            factors.push(Some(factor.clone()));
        } else {
            factors.push(None);
        }
        mults.push(m);
        n_f = n_f.saturating_mul(m as u128);
    }
    if let Some(cap) = budget {
        if n_f > cap as u128 {
            return Err(TowerError::BudgetExceeded { n_f, budget: cap });
        }
    }
    if n_f > u32::MAX as u128 {
        return Err(TowerError::BudgetExceeded {
            n_f,
            budget: u32::MAX as u64,
        });
    }
    let n = n_f as u32;

    let labels: Vec<Label> = {
        let mut labels = Vec::with_capacity(n as usize);
        let mut current: Vec<u32> = vec![1; mults.len()];
        for _ in 0..n {
            labels.push(current.clone());
            for k in (0..mults.len()).rev() {
                if current[k] < mults[k] {
                    current[k] += 1;
                    break;
                }
                current[k] = 1;
            }
        }
        labels
    };

    let all_default = factors.iter().all(|f| f.is_none());
    let edges: Vec<(u32, u32)> = if all_default {
        let mut edges = Vec::with_capacity((n as usize * (n as usize + 1)) / 2);
        for u in 1..=n {
            for v in u..=n {
                edges.push((u, v));
            }
        }
        edges
    } else {
        let mut edges = Vec::new();
        for u in 1..=n {
            let lu = &labels[(u - 1) as usize];
            for v in 1..=n {
                let lv = &labels[(v - 1) as usize];
                if stage_relation_holds(lu, lv, &factors) {
                    edges.push((u, v));
                }
            }
        }
        edges
    };

    let algebra = DigraphAlgebra::from_sorted_unchecked(n, edges).with_labels(labels)?;
    Ok(Stage {
        order: w.clone(),
        positions,
        mults,
        factors,
        algebra: Arc::new(algebra),
    })
}

/// `(I, J)` is in the stage relation when `I = J` or the first differing
/// coordinate is an edge of that slot's factor.
fn stage_relation_holds(i: &[u32], j: &[u32], factors: &[Option<DigraphAlgebra>]) -> bool {
    for (slot, (a, b)) in i.iter().zip(j).enumerate() {
        if a == b {
            continue;
        }
        return match &factors[slot] {
            None => a < b,
            Some(f) => f.contains(*a, *b),
        };
    }
    true
}

/// An increasing chain of stages over one weighted order.
#[derive(Debug, Clone)]
pub struct StageChain {
    order: WeightedOrder,
    stages: Vec<Stage>,
}

impl StageChain {
    pub fn order(&self) -> &WeightedOrder {
        &self.order
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stage(&self, idx: usize) -> &Stage {
        &self.stages[idx]
    }
}

pub const DEFAULT_STAGE_BUDGET: u64 = 4096;

/// Materializes the canonical chain of depth `depth`, with the default
/// stage-size budget.
pub fn build_chain(w: &WeightedOrder, depth: usize) -> Result<StageChain, TowerError> {
    build_chain_with(w, depth, DEFAULT_STAGE_BUDGET, &SegmentFactors::new())
}

/// Materializes the canonical chain with an explicit budget and factor
/// overrides. The budget is a hard error reporting the offending stage
/// size, never a silent truncation.
pub fn build_chain_with(
    w: &WeightedOrder,
    depth: usize,
    budget: u64,
    overrides: &SegmentFactors,
) -> Result<StageChain, TowerError> {
    let schedule = canonical_positions(w, depth)?;
    let mut stages = Vec::with_capacity(schedule.len());
    for positions in &schedule {
        stages.push(build_stage(w, positions, overrides, Some(budget))?);
    }
    Ok(StageChain {
        order: w.clone(),
        stages,
    })
}

/// Alignment of a smaller stage inside a larger one.
struct StageInclusion {
    /// For each source slot, the target slot holding the same position.
    slot_map: Vec<usize>,
    /// Target slots not present in the source, with their sizes.
    new_slots: Vec<(usize, u32)>,
}

fn align_stages(f: &Stage, g: &Stage) -> Result<StageInclusion, TowerError> {
    if f.order != g.order {
        return Err(TowerError::OrderMismatch);
    }
    let mut slot_map = Vec::with_capacity(f.positions.len());
    for p in &f.positions {
        let slot = g
            .positions
            .binary_search(p)
            .map_err(|_| TowerError::NotSubchain)?;
        slot_map.push(slot);
    }
    for (k, p) in f.positions.iter().enumerate() {
        // Shared positions must carry identical factors.
        if f.factors[k] != g.factors[slot_map[k]] {
            return Err(TowerError::FactorMismatch {
                segment: p.segment,
                message: "stages disagree on the factor at a shared position".into(),
            });
        }
    }
    let used: std::collections::BTreeSet<usize> = slot_map.iter().copied().collect();
    let new_slots = (0..g.positions.len())
        .filter(|slot| !used.contains(slot))
        .map(|slot| (slot, g.mults[slot]))
        .collect();
    Ok(StageInclusion { slot_map, new_slots })
}

/// Iterator over all assignments of 1-based values to the given sizes.
struct Assignments {
    sizes: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl Assignments {
    fn new(sizes: Vec<u32>) -> Self {
        let current = Some(vec![1; sizes.len()]);
        Assignments { sizes, current }
    }
}

impl Iterator for Assignments {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut done = true;
        for k in (0..self.sizes.len()).rev() {
            if cur[k] < self.sizes[k] {
                cur[k] += 1;
                done = false;
                break;
            }
            cur[k] = 1;
        }
        if done {
            self.current = None;
        }
        Some(out)
    }
}

/// The refinement embedding of `f` into `g` applied to `x`: each matrix
/// unit `e_{I,J}` maps to the sum over all values `S` on the new positions
/// of `e_{I∪S, J∪S}`, linearly extended.
pub fn embed(f: &Stage, g: &Stage, x: &Element) -> Result<Element, TowerError> {
    if x.home() != f.algebra() {
        return Err(TowerError::ElementNotInStage);
    }
    let inclusion = align_stages(f, g)?;
    embed_aligned(f, g, &inclusion, x)
}

fn embed_aligned(
    f: &Stage,
    g: &Stage,
    inclusion: &StageInclusion,
    x: &Element,
) -> Result<Element, TowerError> {
    let mut terms: Vec<((u32, u32), Coef)> = Vec::new();
    let slots = g.positions.len();
    for (unit, coef) in x.terms() {
        let row = f.label(unit.row)?;
        let col = f.label(unit.col)?;
        let sizes: Vec<u32> = inclusion.new_slots.iter().map(|&(_, s)| s).collect();
        for assignment in Assignments::new(sizes) {
            let mut new_row = vec![0u32; slots];
            let mut new_col = vec![0u32; slots];
            for (k, &slot) in inclusion.slot_map.iter().enumerate() {
                new_row[slot] = row.0[k];
                new_col[slot] = col.0[k];
            }
            for (&(slot, _), &value) in inclusion.new_slots.iter().zip(&assignment) {
                new_row[slot] = value;
                new_col[slot] = value;
            }
            let r = g.flat_index(&MultiIndex(new_row))?;
            let c = g.flat_index(&MultiIndex(new_col))?;
            terms.push(((r, c), *coef));
        }
    }
    Ok(Element::from_terms(g.algebra(), terms)?)
}

/// Exhaustive multiplicativity check of the embedding on all matrix-unit
/// pairs of `f`; the parallel dispatch of [`check_embed_multiplicative_seq`].
pub fn check_embed_multiplicative(f: &Stage, g: &Stage) -> Result<bool, TowerError> {
    #[cfg(feature = "parallel")]
    {
        let inclusion = align_stages(f, g)?;
        let units = f.algebra().edges();
        let images: Vec<Element> = units
            .par_iter()
            .map(|&(r, c)| {
                let x = Element::unit(f.algebra(), r, c).expect("edge is a unit");
                embed_aligned(f, g, &inclusion, &x).expect("aligned embedding cannot fail")
            })
            .collect();
        Ok(units.par_iter().enumerate().all(|(i, &(_, c1))| {
            units.iter().enumerate().all(|(j, &(r2, _))| {
                if c1 != r2 {
                    // Product of the two units is zero; so must be the
                    // product of the images.
                    images[i]
                        .multiply(&images[j])
                        .expect("same stage")
                        .is_zero()
                } else {
                    let x = Element::unit(f.algebra(), units[i].0, units[i].1).unwrap();
                    let y = Element::unit(f.algebra(), units[j].0, units[j].1).unwrap();
                    let xy = x.multiply(&y).expect("same stage");
                    let lhs = embed_aligned(f, g, &inclusion, &xy).expect("aligned");
                    let rhs = images[i].multiply(&images[j]).expect("same stage");
                    lhs == rhs
                }
            })
        }))
    }
    #[cfg(not(feature = "parallel"))]
    {
        check_embed_multiplicative_seq(f, g)
    }
}

/// Sequential reference path for the multiplicativity sweep.
pub fn check_embed_multiplicative_seq(f: &Stage, g: &Stage) -> Result<bool, TowerError> {
    let inclusion = align_stages(f, g)?;
    let units = f.algebra().edges();
    let images: Vec<Element> = units
        .iter()
        .map(|&(r, c)| {
            let x = Element::unit(f.algebra(), r, c).expect("edge is a unit");
            embed_aligned(f, g, &inclusion, &x).expect("aligned embedding cannot fail")
        })
        .collect();
    for (i, &(_, c1)) in units.iter().enumerate() {
        for (j, &(r2, _)) in units.iter().enumerate() {
            let rhs = images[i].multiply(&images[j]).expect("same stage");
            if c1 != r2 {
                if !rhs.is_zero() {
                    return Ok(false);
                }
            } else {
                let x = Element::unit(f.algebra(), units[i].0, units[i].1).unwrap();
                let y = Element::unit(f.algebra(), units[j].0, units[j].1).unwrap();
                let xy = x.multiply(&y).expect("same stage");
                let lhs = embed_aligned(f, g, &inclusion, &xy).expect("aligned");
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Coherence of composed embeddings `F ⊆ G ⊆ H` on every matrix unit.
pub fn check_embed_coherent(f: &Stage, g: &Stage, h: &Stage) -> Result<bool, TowerError> {
    for &(r, c) in f.algebra().edges() {
        let x = Element::unit(f.algebra(), r, c)?;
        let direct = embed(f, h, &x)?;
        let via_g = embed(g, h, &embed(f, g, &x)?)?;
        if direct != via_g {
            return Ok(false);
        }
    }
    Ok(true)
}
