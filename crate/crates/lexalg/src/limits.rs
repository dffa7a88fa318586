//! Limit-level verdicts over finite stages.
//!
//! Radical membership at the limit is decided by the closed form over the
//! order data: a matrix unit belongs to the radical exactly when the first
//! position at which its row and column labels differ lies in the maximal
//! well-ordered initial segment of the order. Link search is reported as
//! evidence along the given chain, never as a verdict: link existence is
//! chain-sensitive, so the order-data rule stays the ground truth.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::algebra::{Coef, Element, MatrixUnit};
use crate::order::{has_first, normalize, OrderExpr, Position, WeightedOrder};
use crate::tower::{MultiIndex, Stage, StageChain, TowerError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LimitError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error("matrix unit ({row},{col}) is not in the stage relation")]
    UnitNotInStage { row: u32, col: u32 },
    #[error("search range {start}..={end} is outside the chain of length {len}")]
    StageBounds { start: usize, end: usize, len: usize },
    #[error("element is not a strict combination of first-position factor units: {message}")]
    NotFirstFactorStrict { message: String },
}

/// Verdict for one matrix unit: member of the limit radical or not, with
/// the witness on the appropriate side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalVerdict {
    pub member: bool,
    /// For members: the first position at which row and column differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<Position>,
    /// For non-members: the block of the semisimple quotient the unit
    /// represents (common diagonal part over the well-ordered initial
    /// positions, and the unit's tails over the remainder).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_block: Option<QuotientBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientBlock {
    pub diagonal_part: MultiIndex,
    pub row_tail: MultiIndex,
    pub col_tail: MultiIndex,
}

/// Which slots of the stage carry positions inside the maximal
/// well-ordered initial segment.
fn omega1_slots(stage: &Stage) -> Vec<bool> {
    let boundary = stage.order().wois_boundary();
    stage
        .positions()
        .iter()
        .map(|p| p.segment < boundary)
        .collect()
}

fn first_difference(row: &[u32], col: &[u32]) -> Option<usize> {
    row.iter().zip(col).position(|(a, b)| a != b)
}

/// Limit-radical membership of a stage matrix unit.
pub fn limit_radical_member(stage: &Stage, unit: MatrixUnit) -> Result<RadicalVerdict, LimitError> {
    if !stage.algebra().contains(unit.row, unit.col) {
        return Err(LimitError::UnitNotInStage {
            row: unit.row,
            col: unit.col,
        });
    }
    let row = stage.label(unit.row)?;
    let col = stage.label(unit.col)?;
    let in_omega1 = omega1_slots(stage);
    match first_difference(&row.0, &col.0) {
        Some(slot) if in_omega1[slot] => Ok(RadicalVerdict {
            member: true,
            first_difference: Some(stage.positions()[slot]),
            quotient_block: None,
        }),
        _ => {
            let split = in_omega1.iter().filter(|b| **b).count();
            Ok(RadicalVerdict {
                member: false,
                first_difference: None,
                quotient_block: Some(QuotientBlock {
                    diagonal_part: MultiIndex(row.0[..split].to_vec()),
                    row_tail: MultiIndex(row.0[split..].to_vec()),
                    col_tail: MultiIndex(col.0[split..].to_vec()),
                }),
            })
        }
    }
}

/// Linear extension: an element lies in the limit radical exactly when
/// every matrix-unit term does.
pub fn element_in_limit_radical(stage: &Stage, x: &Element) -> Result<bool, LimitError> {
    if x.home() != stage.algebra() {
        return Err(TowerError::ElementNotInStage.into());
    }
    for (unit, _) in x.terms() {
        if !limit_radical_member(stage, unit)?.member {
            return Ok(false);
        }
    }
    Ok(true)
}

fn edge_is_member(labels: &[crate::algebra::Label], in_omega1: &[bool], u: u32, v: u32) -> bool {
    if u == v {
        return false;
    }
    let row = &labels[(u - 1) as usize];
    let col = &labels[(v - 1) as usize];
    match first_difference(row, col) {
        Some(slot) => in_omega1[slot],
        None => false,
    }
}

/// Number of stage matrix units inside the limit radical.
pub fn limit_radical_dimension(stage: &Stage) -> u64 {
    #[cfg(feature = "parallel")]
    {
        let labels = stage.algebra().labels().expect("stage algebras are labeled");
        let in_omega1 = omega1_slots(stage);
        stage
            .algebra()
            .edges()
            .par_iter()
            .filter(|&&(u, v)| edge_is_member(labels, &in_omega1, u, v))
            .count() as u64
    }
    #[cfg(not(feature = "parallel"))]
    {
        limit_radical_dimension_seq(stage)
    }
}

/// Sequential reference path for the radical count.
pub fn limit_radical_dimension_seq(stage: &Stage) -> u64 {
    let labels = stage.algebra().labels().expect("stage algebras are labeled");
    let in_omega1 = omega1_slots(stage);
    stage
        .algebra()
        .edges()
        .iter()
        .filter(|&&(u, v)| edge_is_member(labels, &in_omega1, u, v))
        .count() as u64
}

/// The limit algebra is semisimple exactly when the order has no first
/// element.
pub fn is_semisimple(w: &WeightedOrder) -> bool {
    !has_first(w.expr())
}

/// Whether the limit algebra splits as an abelian part plus its radical;
/// this happens exactly when the order is well-ordered, i.e. when the
/// normalized expression uses only finite and `ω` primitives.
pub fn has_elementary_radical_decomposition(w: &WeightedOrder) -> bool {
    normalize(w.expr())
        .segments()
        .iter()
        .all(|s| matches!(s, OrderExpr::Finite(_) | OrderExpr::OmegaPlus))
}

/// A link found for a matrix unit during a chain scan: a stage unit `f`
/// with `f*f` dominated by the image of `e e*` and `f f*` dominated by the
/// image of `e* e`. The witnesses are `f`'s own labels: the column label
/// lifts the original row multi-index and the row label lifts the column
/// multi-index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkRecord {
    pub stage_index: usize,
    pub unit: MatrixUnit,
    /// Lift of the original row multi-index (the link's column label).
    pub domain_witness: MultiIndex,
    /// Lift of the original column multi-index (the link's row label).
    pub range_witness: MultiIndex,
}

struct LiftContext {
    /// Target slot of each source slot.
    slot_map: Vec<usize>,
    /// New target slots with sizes.
    new_slots: Vec<(usize, u32)>,
}

fn lift_context(f: &Stage, g: &Stage) -> Result<LiftContext, LimitError> {
    let mut slot_map = Vec::with_capacity(f.positions().len());
    for p in f.positions() {
        let slot = g
            .positions()
            .binary_search(p)
            .map_err(|_| TowerError::NotSubchain)?;
        slot_map.push(slot);
    }
    let used: std::collections::BTreeSet<usize> = slot_map.iter().copied().collect();
    let new_slots = (0..g.positions().len())
        .filter(|slot| !used.contains(slot))
        .map(|slot| (slot, g.mults()[slot]))
        .collect();
    Ok(LiftContext { slot_map, new_slots })
}

fn place_lift(ctx: &LiftContext, base: &[u32], news: &[u32], total: usize) -> Vec<u32> {
    let mut out = vec![0u32; total];
    for (k, &slot) in ctx.slot_map.iter().enumerate() {
        out[slot] = base[k];
    }
    for (&(slot, _), &value) in ctx.new_slots.iter().zip(news) {
        out[slot] = value;
    }
    out
}

struct Assignments {
    sizes: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl Assignments {
    fn new(sizes: Vec<u32>) -> Self {
        Assignments {
            current: Some(vec![1; sizes.len()]),
            sizes,
        }
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

/// Searches stages `start ..= start + horizon` of the chain for a link for
/// the unit `e` of stage `start`.
///
/// A diagonal unit is its own link at its own stage. For a strict unit the
/// canonical construction is tried first at each stage: value 1 on the
/// row lift and 2 on the column lift at the earliest new position below
/// the first difference (ones elsewhere), which realizes the initial
/// projection `e₂₂ ⊗ ee*` and final projection `e₁₁ ⊗ e*e`. If the
/// canonical candidate is not available the scan falls back to an
/// exhaustive pass over all lift pairs in lexicographic order, so a
/// negative answer certifies that no link exists within the horizon.
pub fn find_link(
    chain: &StageChain,
    start: usize,
    e: MatrixUnit,
    horizon: usize,
) -> Result<Option<LinkRecord>, LimitError> {
    let end = start + horizon;
    if start >= chain.len() || end >= chain.len() {
        return Err(LimitError::StageBounds {
            start,
            end,
            len: chain.len(),
        });
    }
    let f = chain.stage(start);
    if !f.algebra().contains(e.row, e.col) {
        return Err(LimitError::UnitNotInStage {
            row: e.row,
            col: e.col,
        });
    }
    let row = f.label(e.row)?;
    let col = f.label(e.col)?;

    if row == col {
        return Ok(Some(LinkRecord {
            stage_index: start,
            unit: e,
            domain_witness: row.clone(),
            range_witness: row,
        }));
    }
    let diff_slot = first_difference(&row.0, &col.0).expect("distinct labels differ");
    let diff_pos = f.positions()[diff_slot];

    for g_idx in start..=end {
        let g = chain.stage(g_idx);
        let ctx = lift_context(f, g)?;
        let total = g.positions().len();

        // Canonical candidate: 2 on the row-lift of I, 1 on the column
        // lift of J, at the earliest new position below the first
        // difference.
        let below = ctx
            .new_slots
            .iter()
            .position(|&(slot, _)| g.positions()[slot] < diff_pos);
        if let Some(critical) = below {
            let mut k_news = vec![1u32; ctx.new_slots.len()];
            let mut l_news = vec![1u32; ctx.new_slots.len()];
            l_news[critical] = 2;
            let k = place_lift(&ctx, &col.0, &k_news, total);
            let l = place_lift(&ctx, &row.0, &l_news, total);
            if let Some(record) = try_link(g, g_idx, k, l)? {
                return Ok(Some(record));
            }
            // Keep the buffers for reuse below.
            k_news.clear();
            l_news.clear();
        }

        // Exhaustive pass over all lift pairs, in lexicographic order.
        let sizes: Vec<u32> = ctx.new_slots.iter().map(|&(_, s)| s).collect();
        for k_news in Assignments::new(sizes.clone()) {
            let k = place_lift(&ctx, &col.0, &k_news, total);
            for l_news in Assignments::new(sizes.clone()) {
                let l = place_lift(&ctx, &row.0, &l_news, total);
                if let Some(record) = try_link(g, g_idx, k.clone(), l)? {
                    return Ok(Some(record));
                }
            }
        }
    }
    Ok(None)
}

fn try_link(
    g: &Stage,
    stage_index: usize,
    k: Vec<u32>,
    l: Vec<u32>,
) -> Result<Option<LinkRecord>, LimitError> {
    let k = MultiIndex(k);
    let l = MultiIndex(l);
    let kf = g.flat_index(&k)?;
    let lf = g.flat_index(&l)?;
    if g.algebra().contains(kf, lf) {
        Ok(Some(LinkRecord {
            stage_index,
            unit: MatrixUnit::new(kf, lf),
            domain_witness: l,
            range_witness: k,
        }))
    } else {
        Ok(None)
    }
}

/// Link scan over every strict matrix unit of stage `start`, returning the
/// units in edge order with their verdicts and any link found.
pub fn scan_links(
    chain: &StageChain,
    start: usize,
    horizon: usize,
) -> Result<Vec<(MatrixUnit, RadicalVerdict, Option<LinkRecord>)>, LimitError> {
    #[cfg(feature = "parallel")]
    {
        let stage = check_bounds(chain, start, horizon)?;
        let units: Vec<MatrixUnit> = strict_units(stage);
        units
            .par_iter()
            .map(|&u| {
                let verdict = limit_radical_member(stage, u)?;
                let link = find_link(chain, start, u, horizon)?;
                Ok((u, verdict, link))
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        scan_links_seq(chain, start, horizon)
    }
}

/// Sequential reference path for the link scan.
pub fn scan_links_seq(
    chain: &StageChain,
    start: usize,
    horizon: usize,
) -> Result<Vec<(MatrixUnit, RadicalVerdict, Option<LinkRecord>)>, LimitError> {
    let stage = check_bounds(chain, start, horizon)?;
    strict_units(stage)
        .into_iter()
        .map(|u| {
            let verdict = limit_radical_member(stage, u)?;
            let link = find_link(chain, start, u, horizon)?;
            Ok((u, verdict, link))
        })
        .collect()
}

fn check_bounds<'c>(
    chain: &'c StageChain,
    start: usize,
    horizon: usize,
) -> Result<&'c Stage, LimitError> {
    if start >= chain.len() || start + horizon >= chain.len() {
        return Err(LimitError::StageBounds {
            start,
            end: start + horizon,
            len: chain.len(),
        });
    }
    Ok(chain.stage(start))
}

fn strict_units(stage: &Stage) -> Vec<MatrixUnit> {
    stage
        .algebra()
        .edges()
        .iter()
        .filter(|&&(u, v)| u != v)
        .map(|&(u, v)| MatrixUnit::new(u, v))
        .collect()
}

/// A strict element of the first-position factor, recovered from its
/// image in the stage: coefficients indexed by strict first-factor pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstFactorElement {
    pub coefficients: BTreeMap<(u32, u32), Coef>,
}

/// Builds the image in the stage of a strict element of the first-position
/// factor: each `(i,j)` term becomes the sum over all values of the
/// remaining positions of `e_{(i,S),(j,S)}`.
pub fn first_factor_element(
    stage: &Stage,
    coefficients: &BTreeMap<(u32, u32), Coef>,
) -> Result<Element, LimitError> {
    let n1 = stage.mults()[0];
    let rest: Vec<u32> = stage.mults()[1..].to_vec();
    let mut terms = Vec::new();
    for (&(i, j), &coef) in coefficients {
        if i >= j || i == 0 || j > n1 {
            return Err(LimitError::NotFirstFactorStrict {
                message: format!("pair ({i},{j}) is not strictly upper in a factor of size {n1}"),
            });
        }
        for s in Assignments::new(rest.clone()) {
            let mut row = vec![i];
            row.extend_from_slice(&s);
            let mut col = vec![j];
            col.extend_from_slice(&s);
            let r = stage.flat_index(&MultiIndex(row))?;
            let c = stage.flat_index(&MultiIndex(col))?;
            terms.push(((r, c), coef));
        }
    }
    Ok(Element::from_terms(stage.algebra(), terms)?)
}

/// Recovers the first-factor form of an element, or explains why it does
/// not have one. The element must be a nonzero linear combination of
/// images of strict first-factor units: every term `e_{I,J}` has
/// `I[1..] = J[1..]`, `I[0] < J[0]`, and for each `(i,j)` the coefficient
/// is constant across all `n_F / n₁` rest-assignments.
pub fn as_first_factor_strict(
    stage: &Stage,
    x: &Element,
) -> Result<FirstFactorElement, LimitError> {
    if x.home() != stage.algebra() {
        return Err(TowerError::ElementNotInStage.into());
    }
    if x.is_zero() {
        return Err(LimitError::NotFirstFactorStrict {
            message: "element is zero".into(),
        });
    }
    let rest_count: u64 = stage.mults()[1..].iter().map(|&m| m as u64).product();
    let mut groups: BTreeMap<(u32, u32), (Coef, u64)> = BTreeMap::new();
    for (unit, &coef) in x.terms() {
        let row = stage.label(unit.row)?;
        let col = stage.label(unit.col)?;
        if row.0[1..] != col.0[1..] {
            return Err(LimitError::NotFirstFactorStrict {
                message: format!("term e_{row},{col} differs beyond the first position"),
            });
        }
        let (i, j) = (row.0[0], col.0[0]);
        if i >= j {
            return Err(LimitError::NotFirstFactorStrict {
                message: format!("term e_{row},{col} is not strictly upper at the first position"),
            });
        }
        let entry = groups.entry((i, j)).or_insert((coef, 0));
        if entry.0 != coef {
            return Err(LimitError::NotFirstFactorStrict {
                message: format!("coefficients for the pair ({i},{j}) are not constant"),
            });
        }
        entry.1 += 1;
    }
    for (&(i, j), &(_, count)) in &groups {
        if count != rest_count {
            return Err(LimitError::NotFirstFactorStrict {
                message: format!(
                    "pair ({i},{j}) covers {count} of {rest_count} rest-assignments"
                ),
            });
        }
    }
    Ok(FirstFactorElement {
        coefficients: groups.into_iter().map(|(k, (c, _))| (k, c)).collect(),
    })
}

fn random_stage_element(stage: &Stage, rng: &mut impl Rng) -> Element {
    let terms: Vec<((u32, u32), Coef)> = stage
        .algebra()
        .edges()
        .iter()
        .filter_map(|&(u, v)| {
            let c: i64 = rng.random_range(-2..=2);
            (c != 0).then(|| ((u, v), Coef::from_integer(c)))
        })
        .collect();
    Element::from_terms(stage.algebra(), terms).expect("edges are valid units")
}

/// Checks `(a·b)^p = 0` exactly for `trials` seeded pseudo-random stage
/// elements `b`, where `a` is (the image of) a strict element of the
/// first-position factor and `p` is that factor's size.
pub fn nilpotency_check(
    stage: &Stage,
    a: &Element,
    trials: u32,
    seed: u64,
) -> Result<bool, LimitError> {
    as_first_factor_strict(stage, a)?;
    let p = stage.mults()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let b = random_stage_element(stage, &mut rng);
        let ab = a.multiply(&b).map_err(LimitError::Algebra)?;
        if !ab.pow(p).map_err(LimitError::Algebra)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for a stage element `b` with `(a·b)^exponent ≠ 0`: the
/// identity first, then `trials` seeded random elements. `Some(b)`
/// witnesses that the exponent is not enough to annihilate `a·b`.
pub fn find_nonvanishing_power(
    stage: &Stage,
    a: &Element,
    exponent: u32,
    trials: u32,
    seed: u64,
) -> Result<Option<Element>, LimitError> {
    as_first_factor_strict(stage, a)?;
    let identity = stage.identity();
    let check = |b: &Element| -> Result<bool, LimitError> {
        let ab = a.multiply(b).map_err(LimitError::Algebra)?;
        Ok(!ab.pow(exponent).map_err(LimitError::Algebra)?.is_zero())
    };
    if check(&identity)? {
        return Ok(Some(identity));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let b = random_stage_element(stage, &mut rng);
        if check(&b)? {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Exact dimension split of a stage: the limit-radical part against the
/// block-diagonal complement, plus the comparison with the stage's own
/// combinatorial radical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub stage_dim: usize,
    pub limit_radical_dim: u64,
    pub limit_quotient_dim: u64,
    /// stage_dim = radical + quotient, verified by independent counts.
    pub splits_exactly: bool,
    pub stage_radical_dim: usize,
    /// The stage's own radical strictly contains the limit-radical part
    /// (true whenever the positions outside the well-ordered initial
    /// segment contribute a strict edge).
    pub stage_radical_strictly_larger: bool,
}

pub fn quotient_structure(stage: &Stage) -> QuotientReport {
    let labels = stage.algebra().labels().expect("stage algebras are labeled");
    let in_omega1 = omega1_slots(stage);
    let mut radical: u64 = 0;
    let mut quotient: u64 = 0;
    for &(u, v) in stage.algebra().edges() {
        if edge_is_member(labels, &in_omega1, u, v) {
            radical += 1;
        } else {
            quotient += 1;
        }
    }
    let stage_radical = crate::algebra::radical_combinatorial(stage.algebra());
    QuotientReport {
        stage_dim: stage.algebra().dim(),
        limit_radical_dim: radical,
        limit_quotient_dim: quotient,
        splits_exactly: radical + quotient == stage.algebra().dim() as u64,
        stage_radical_dim: stage_radical.dim(),
        stage_radical_strictly_larger: stage_radical.dim() as u64 > radical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::parse_order;
    use crate::tower::build_chain;

    fn chain(text: &str, depth: usize) -> StageChain {
        build_chain(&parse_order(text).unwrap(), depth).unwrap()
    }

    #[test]
    fn radical_dimension_examples() {
        let c = chain("w[2] + z[2]", 1);
        assert_eq!(limit_radical_dimension(c.stage(0)), 16);

        let c = chain("z[2]", 2);
        assert_eq!(limit_radical_dimension(c.stage(0)), 0);
        assert_eq!(limit_radical_dimension(c.stage(1)), 0);

        let c = chain("w[2]", 2);
        assert_eq!(limit_radical_dimension(c.stage(1)), 6);
    }

    #[test]
    fn member_examples() {
        let c = chain("w[2] + z[2]", 1);
        let stage = c.stage(0);
        // Unit differing first at the ω position: rows (1,...) vs (2,...).
        let row = stage.flat_index(&MultiIndex(vec![1, 1, 1])).unwrap();
        let col = stage.flat_index(&MultiIndex(vec![2, 1, 1])).unwrap();
        let verdict = limit_radical_member(stage, MatrixUnit::new(row, col)).unwrap();
        assert!(verdict.member);
        assert_eq!(verdict.first_difference, Some(Position::int(0, 0)));

        // Unit differing only inside the ζ part is not a member.
        let col2 = stage.flat_index(&MultiIndex(vec![1, 1, 2])).unwrap();
        let verdict = limit_radical_member(stage, MatrixUnit::new(row, col2)).unwrap();
        assert!(!verdict.member);
        let block = verdict.quotient_block.unwrap();
        assert_eq!(block.diagonal_part, MultiIndex(vec![1]));

        // Diagonal units are never members.
        let verdict = limit_radical_member(stage, MatrixUnit::new(row, row)).unwrap();
        assert!(!verdict.member);
    }

    #[test]
    fn semisimple_examples() {
        let semi = |t: &str| is_semisimple(&parse_order(t).unwrap());
        assert!(semi("q[2]"));
        assert!(!semi("w[2]"));
        assert!(semi("w*[2]"));
        assert!(semi("z[2]"));
        assert!(!semi("1[2] + q[2]"));
    }

    #[test]
    fn elementary_decomposition_examples() {
        let elem = |t: &str| has_elementary_radical_decomposition(&parse_order(t).unwrap());
        assert!(elem("3[2,2,2] + w[2]"));
        assert!(!elem("z[2]"));
        assert!(!elem("q[2]"));
        assert!(!elem("w*[2] + w[2]"));
        assert!(elem("w[2] + w[2]"));
    }

    #[test]
    fn diagonal_unit_is_its_own_link() {
        let c = chain("z[2]", 2);
        let record = find_link(&c, 0, MatrixUnit::new(1, 1), 1).unwrap().unwrap();
        assert_eq!(record.stage_index, 0);
        assert_eq!(record.unit, MatrixUnit::new(1, 1));
    }

    #[test]
    fn alternation_links_match_the_canonical_construction() {
        let c = chain("z[2]", 2);
        let stage = c.stage(0);
        // e = e_{(1,1),(1,2)}: first difference at position 0.
        let row = stage.flat_index(&MultiIndex(vec![1, 1])).unwrap();
        let col = stage.flat_index(&MultiIndex(vec![1, 2])).unwrap();
        let record = find_link(&c, 0, MatrixUnit::new(row, col), 1)
            .unwrap()
            .unwrap();
        assert_eq!(record.stage_index, 1);
        // Stage 2 positions are -2,-1,0,1; the new below-position is -2.
        assert_eq!(record.range_witness, MultiIndex(vec![1, 1, 2, 1]));
        assert_eq!(record.domain_witness, MultiIndex(vec![2, 1, 1, 1]));
    }

    #[test]
    fn refinement_has_no_links() {
        let c = chain("w[2]", 5);
        for (_, verdict, link) in scan_links(&c, 0, 4).unwrap() {
            assert!(verdict.member);
            assert!(link.is_none());
        }
    }

    #[test]
    fn nilpotency_for_refinement() {
        let c = chain("w[2]", 2);
        let stage = c.stage(0 + 1);
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1u32, 2u32), Coef::from_integer(1));
        let a = first_factor_element(stage, &coeffs).unwrap();
        assert!(nilpotency_check(stage, &a, 50, 7).unwrap());
    }

    #[test]
    fn nilpotency_rejects_diagonal() {
        let c = chain("w[2]", 2);
        let stage = c.stage(1);
        let diag = stage.identity();
        assert!(matches!(
            nilpotency_check(stage, &diag, 5, 7),
            Err(LimitError::NotFirstFactorStrict { .. })
        ));
    }

    #[test]
    fn sharpness_witness_for_superdiagonal_sum() {
        let c = chain("w[3]", 2);
        let stage = c.stage(1);
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1u32, 2u32), Coef::from_integer(1));
        coeffs.insert((2u32, 3u32), Coef::from_integer(1));
        let a = first_factor_element(stage, &coeffs).unwrap();
        assert!(nilpotency_check(stage, &a, 50, 7).unwrap());
        let witness = find_nonvanishing_power(stage, &a, 2, 50, 7).unwrap();
        assert!(witness.is_some());
        // A single unit image, in contrast, squares to zero against
        // everything: its product with any stage element is supported in
        // one block row.
        let mut single = BTreeMap::new();
        single.insert((1u32, 3u32), Coef::from_integer(1));
        let a13 = first_factor_element(stage, &single).unwrap();
        assert!(find_nonvanishing_power(stage, &a13, 2, 200, 7)
            .unwrap()
            .is_none());
    }

    #[test]
    fn quotient_structure_examples() {
        let c = chain("w[2] + z[2]", 1);
        let report = quotient_structure(c.stage(0));
        assert_eq!(report.stage_dim, 36);
        assert_eq!(report.limit_radical_dim, 16);
        assert_eq!(report.limit_quotient_dim, 20);
        assert!(report.splits_exactly);
        assert_eq!(report.stage_radical_dim, 28);
        assert!(report.stage_radical_strictly_larger);

        let c = chain("z[2]", 1);
        let report = quotient_structure(c.stage(0));
        assert_eq!(report.limit_radical_dim, 0);
        assert_eq!(report.limit_quotient_dim, report.stage_dim as u64);

        let c = chain("w[2]", 2);
        let report = quotient_structure(c.stage(1));
        assert_eq!(report.limit_radical_dim, 6);
        assert_eq!(report.limit_quotient_dim, 4);
        assert!(!report.stage_radical_strictly_larger);
    }
}
