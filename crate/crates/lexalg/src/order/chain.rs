use std::collections::BTreeSet;

use num_rational::Ratio;

use super::expr::{Coord, OrderError, OrderExpr, Position, WeightedOrder};

/// Hard cap on chain depth so dyadic denominators stay inside `i64`.
pub const MAX_CHAIN_DEPTH: usize = 48;

/// The canonical increasing chain `F₁ ⊂ F₂ ⊂ … ⊂ F_depth` of finite
/// position sets, cofinal in the finite subsets of the order as the depth
/// grows.
///
/// Schedule at stage `k` (1-based), per segment:
///
/// * finite segments enter fully at `F₁`;
/// * `ω` contributes coordinates `0..k-1`;
/// * `ω*` contributes `-k..-1`;
/// * `ζ` contributes `-k..k-1`;
/// * `η` contributes the first `k` terms of a fixed enumeration of the
///   dyadic rationals in `(0,1)` that inserts a point below the current
///   minimum on every even step and alternates above-maximum / interior
///   insertions on the odd steps.
///
/// The dense schedule keeps two properties the rest of the crate relies
/// on: every dyadic in `(0,1)` is eventually enumerated, and a point below
/// the current minimum arrives within two stages of any stage.
pub fn canonical_positions(
    w: &WeightedOrder,
    depth: usize,
) -> Result<Vec<Vec<Position>>, OrderError> {
    if depth == 0 {
        return Err(OrderError::ZeroDepth);
    }
    if depth > MAX_CHAIN_DEPTH {
        return Err(OrderError::DepthTooLarge {
            depth,
            max: MAX_CHAIN_DEPTH,
        });
    }
    let segs = w.expr().segments();
    let dyadics = dyadic_prefix(depth);
    let mut stages = Vec::with_capacity(depth);
    for k in 1..=depth {
        let mut stage = Vec::new();
        for (idx, seg) in segs.iter().enumerate() {
            match seg {
                OrderExpr::Finite(len) => {
                    stage.extend((1..=*len as i64).map(|c| Position::int(idx, c)));
                }
                OrderExpr::OmegaPlus => {
                    stage.extend((0..k as i64).map(|c| Position::int(idx, c)));
                }
                OrderExpr::OmegaMinus => {
                    stage.extend((-(k as i64)..0).map(|c| Position::int(idx, c)));
                }
                OrderExpr::Zeta => {
                    stage.extend((-(k as i64)..k as i64).map(|c| Position::int(idx, c)));
                }
                OrderExpr::Eta => {
                    let mut points: Vec<Ratio<i64>> = dyadics[..k].to_vec();
                    points.sort();
                    stage.extend(points.into_iter().map(|r| Position {
                        segment: idx,
                        coord: Coord::Rat(r),
                    }));
                }
                OrderExpr::Sum(_) => unreachable!("segments are primitive"),
            }
        }
        stages.push(stage);
    }
    Ok(stages)
}

/// First `count` terms of the dense-segment enumeration.
fn dyadic_prefix(count: usize) -> Vec<Ratio<i64>> {
    let mut used: BTreeSet<Ratio<i64>> = BTreeSet::new();
    let mut seq = Vec::with_capacity(count);
    for step in 1..=count {
        let next = if step == 1 {
            Ratio::new(1, 2)
        } else {
            let min = *used.iter().next().unwrap();
            let max = *used.iter().next_back().unwrap();
            if step % 2 == 0 {
                first_fresh_dyadic(&used, |d| *d < min)
            } else if step % 4 == 3 {
                first_fresh_dyadic(&used, |d| *d > max)
            } else {
                first_fresh_dyadic(&used, |d| *d > min && *d < max)
            }
        };
        used.insert(next);
        seq.push(next);
    }
    seq
}

/// The first unused dyadic in the level-by-level enumeration
/// `1/2; 1/4, 3/4; 1/8, 3/8, 5/8, 7/8; …` satisfying `pred`.
fn first_fresh_dyadic(
    used: &BTreeSet<Ratio<i64>>,
    pred: impl Fn(&Ratio<i64>) -> bool,
) -> Ratio<i64> {
    for level in 1..63 {
        let den: i64 = 1 << level;
        let mut num: i64 = 1;
        while num < den {
            let d = Ratio::new(num, den);
            if !used.contains(&d) && pred(&d) {
                return d;
            }
            num += 2;
        }
    }
    unreachable!("dyadic enumeration exhausted i64 levels");
}

/// Checks that the chain is downward predecessor-fair within `stride`
/// stages: whenever a position of `F_k` has predecessors in the full order
/// that are missing from `F_k`, one of them appears by `F_{k+stride}`.
///
/// Canonical chains satisfy this with stride 1 for orders without dense
/// segments and stride 2 in general (the dense schedule inserts a point
/// below the segment minimum only on every other step).
pub fn is_predecessor_fair(
    w: &WeightedOrder,
    stages: &[Vec<Position>],
    stride: usize,
) -> bool {
    assert!(stride >= 1);
    let segs = w.expr().segments();
    for k in 0..stages.len() {
        let target = k + stride;
        if target >= stages.len() {
            break;
        }
        let current: BTreeSet<Position> = stages[k].iter().copied().collect();
        let added: Vec<Position> = stages[target]
            .iter()
            .filter(|p| !current.contains(p))
            .copied()
            .collect();
        for p in &current {
            if !has_missing_predecessor(&segs, &current, p) {
                continue;
            }
            if !added.iter().any(|q| q < p) {
                return false;
            }
        }
    }
    true
}

/// Whether `p` has a predecessor in the full order outside `present`.
fn has_missing_predecessor(
    segs: &[&OrderExpr],
    present: &BTreeSet<Position>,
    p: &Position,
) -> bool {
    // Any earlier segment with infinitely many points always has points
    // missing from a finite stage, and all of them precede `p`.
    for (idx, seg) in segs.iter().enumerate().take(p.segment) {
        match seg {
            OrderExpr::Finite(len) => {
                let all_in = (1..=*len as i64).all(|c| present.contains(&Position::int(idx, c)));
                if !all_in {
                    return true;
                }
            }
            _ => return true,
        }
    }
    // Within the segment.
    match segs[p.segment] {
        OrderExpr::Finite(_) | OrderExpr::OmegaPlus => {
            let first = match segs[p.segment] {
                OrderExpr::Finite(_) => 1,
                _ => 0,
            };
            if let Coord::Int(c) = p.coord {
                (first..c).any(|q| !present.contains(&Position::int(p.segment, q)))
            } else {
                unreachable!("integer segments have integer coordinates")
            }
        }
        // ω*, ζ and η all have infinitely many points below any point.
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::parse_order;

    #[test]
    fn omega_schedule() {
        let w = parse_order("w[2]").unwrap();
        let stages = canonical_positions(&w, 3).unwrap();
        assert_eq!(
            stages,
            vec![
                vec![Position::int(0, 0)],
                vec![Position::int(0, 0), Position::int(0, 1)],
                vec![Position::int(0, 0), Position::int(0, 1), Position::int(0, 2)],
            ]
        );
    }

    #[test]
    fn zeta_schedule() {
        let w = parse_order("z[2]").unwrap();
        let stages = canonical_positions(&w, 2).unwrap();
        assert_eq!(
            stages,
            vec![
                vec![Position::int(0, -1), Position::int(0, 0)],
                vec![
                    Position::int(0, -2),
                    Position::int(0, -1),
                    Position::int(0, 0),
                    Position::int(0, 1),
                ],
            ]
        );
    }

    #[test]
    fn dense_schedule_prefix() {
        let seq = dyadic_prefix(7);
        let r = |n, d| Ratio::new(n, d);
        assert_eq!(
            seq,
            vec![r(1, 2), r(1, 4), r(3, 4), r(1, 8), r(3, 8), r(1, 16), r(7, 8)]
        );
    }

    #[test]
    fn dense_stage_two_goes_below_stage_one_minimum() {
        let w = parse_order("q[2]").unwrap();
        let stages = canonical_positions(&w, 3).unwrap();
        assert_eq!(stages[0].len(), 1);
        assert_eq!(stages[1].len(), 2);
        assert!(stages[1][0] < stages[0][0]);
    }

    #[test]
    fn chains_strictly_increase() {
        for text in ["w[2]", "w*[3]", "z[2]", "q[2]", "1[2] + q[2]", "w[2] + z[2]"] {
            let w = parse_order(text).unwrap();
            let stages = canonical_positions(&w, 5).unwrap();
            for k in 1..stages.len() {
                let prev: BTreeSet<Position> = stages[k - 1].iter().copied().collect();
                let cur: BTreeSet<Position> = stages[k].iter().copied().collect();
                assert!(prev.is_subset(&cur) && prev.len() < cur.len(), "{text} at {k}");
            }
        }
    }

    #[test]
    fn fairness_stride_one_without_dense_segments() {
        for text in ["w[2]", "w*[2]", "z[2]", "w[2] + z[2]", "1[2] + w*[2]"] {
            let w = parse_order(text).unwrap();
            let stages = canonical_positions(&w, 6).unwrap();
            assert!(is_predecessor_fair(&w, &stages, 1), "{text}");
        }
    }

    #[test]
    fn fairness_stride_two_with_dense_segments() {
        for text in ["q[2]", "q[3] + q[2]", "w[2] + q[2]", "1[2] + q[2]"] {
            let w = parse_order(text).unwrap();
            let stages = canonical_positions(&w, 9).unwrap();
            assert!(is_predecessor_fair(&w, &stages, 2), "{text}");
        }
    }

    #[test]
    fn depth_validation() {
        let w = parse_order("w[2]").unwrap();
        assert!(matches!(
            canonical_positions(&w, 0),
            Err(OrderError::ZeroDepth)
        ));
        assert!(matches!(
            canonical_positions(&w, MAX_CHAIN_DEPTH + 1),
            Err(OrderError::DepthTooLarge { .. })
        ));
    }
}
