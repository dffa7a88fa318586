use num_integer::Integer;
use serde::Serialize;

use super::expr::{Multiplicity, OrderExpr, WeightedOrder};

/// One maximal interval (or dense family of singleton intervals) of a
/// weighted order, with its multiplicity data in canonical form.
///
/// Canonical means: cycles are primitive, finite prefixes/suffixes are as
/// short as possible (anything explained by the adjacent cycle is folded
/// into it), and two-sided streams are anchored shift-invariantly. Two
/// entries are equal as Rust values exactly when they describe the same
/// weighted interval up to the allowed reparameterization: none for
/// finite intervals, stream equality for `ZPlus`/`ZMinus` (order
/// isomorphisms of `ω` and `ω*` are trivial, so only the presentation may
/// vary), and shift equivalence for two-sided `Z` streams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum IntervalEntry {
    Finite { values: Vec<u32> },
    ZPlus { prefix: Vec<u32>, cycle: Vec<u32> },
    ZMinus { cycle: Vec<u32>, suffix: Vec<u32> },
    Z { stream: ZStream },
    Dense { constant: u32 },
}

/// Canonical form of a two-sided multiplicity stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZStream {
    /// Globally periodic; `cycle` is the lexicographically least rotation
    /// of the primitive period, so rotation-equivalent patterns collide.
    Pure { cycle: Vec<u32> },
    /// Eventually periodic both ways but not globally periodic. Anchored
    /// at the last failure of left-periodicity, which is shift-invariant:
    /// `left_cycle` ends right before the anchor, `middle` spans `gap`
    /// positions from the anchor (empty when the periodic zones overlap,
    /// in which case `gap ≤ 0`), and `right_cycle` starts where right
    /// periodicity sets in.
    Mixed {
        left_cycle: Vec<u32>,
        gap: i64,
        middle: Vec<u32>,
        right_cycle: Vec<u32>,
    },
}

#[derive(Debug, Clone)]
enum Raw {
    Fin(Vec<u32>),
    Plus { prefix: Vec<u32>, pat: Vec<u32> },
    MinusPending { pat: Vec<u32>, suffix: Vec<u32> },
    TwoSided { left: Vec<u32>, middle: Vec<u32>, right: Vec<u32> },
    Dense(u32),
}

fn pattern_of(weight: &Multiplicity) -> Vec<u32> {
    match weight {
        Multiplicity::Explicit(v) => v.clone(),
        Multiplicity::Constant(c) => vec![*c],
        Multiplicity::Periodic(p) => p.clone(),
    }
}

/// The ordered sequence of maximal intervals of a weighted order.
///
/// Adjacent segments that form a single maximal interval are merged the
/// way the safe order identities allow: finite blocks fold into an `ω` on
/// their right or an `ω*` on their left, `ω* (+ finite) + ω` runs fold
/// into one two-sided interval, and a dense segment absorbs an isolated
/// point of its own constant when dense segments of that constant flank
/// it on both sides. Each dense segment is one entry: an `η`-indexed
/// family of singleton intervals sharing a constant.
pub fn interval_decomposition(w: &WeightedOrder) -> Vec<IntervalEntry> {
    let mut raws: Vec<Raw> = Vec::new();
    for (seg, weight) in w.expr().segments().iter().zip(w.weights()) {
        let pat = pattern_of(weight);
        match seg {
            OrderExpr::Finite(_) => match raws.last_mut() {
                Some(Raw::Fin(prev)) => prev.extend(pat),
                Some(Raw::MinusPending { suffix, .. }) => suffix.extend(pat),
                _ => raws.push(Raw::Fin(pat)),
            },
            OrderExpr::OmegaPlus => match raws.pop() {
                Some(Raw::Fin(vals)) => raws.push(Raw::Plus { prefix: vals, pat }),
                Some(Raw::MinusPending { pat: left, suffix }) => raws.push(Raw::TwoSided {
                    left,
                    middle: suffix,
                    right: pat,
                }),
                other => {
                    if let Some(o) = other {
                        raws.push(o);
                    }
                    raws.push(Raw::Plus { prefix: vec![], pat });
                }
            },
            OrderExpr::OmegaMinus => raws.push(Raw::MinusPending { pat, suffix: vec![] }),
            OrderExpr::Zeta => raws.push(Raw::TwoSided {
                left: pat.clone(),
                middle: vec![],
                right: pat,
            }),
            OrderExpr::Eta => raws.push(Raw::Dense(pat[0])),
            OrderExpr::Sum(_) => unreachable!("segments are primitive"),
        }
    }
    absorb_dense_sandwiches(&mut raws);
    raws.into_iter().map(finalize).collect()
}

/// `η(c) + 1[c] + η(c) → η(c)` and `η(c) + η(c) → η(c)`, to a fixed point.
fn absorb_dense_sandwiches(raws: &mut Vec<Raw>) {
    loop {
        let mut applied = false;
        for i in 0..raws.len().saturating_sub(2) {
            if let (Raw::Dense(a), Raw::Fin(v), Raw::Dense(b)) =
                (&raws[i], &raws[i + 1], &raws[i + 2])
            {
                if a == b && v.len() == 1 && v[0] == *a {
                    let c = *a;
                    raws.splice(i..i + 3, [Raw::Dense(c)]);
                    applied = true;
                    break;
                }
            }
        }
        if applied {
            continue;
        }
        for i in 0..raws.len().saturating_sub(1) {
            if let (Raw::Dense(a), Raw::Dense(b)) = (&raws[i], &raws[i + 1]) {
                if a == b {
                    let c = *a;
                    raws.splice(i..i + 2, [Raw::Dense(c)]);
                    applied = true;
                    break;
                }
            }
        }
        if !applied {
            return;
        }
    }
}

fn finalize(raw: Raw) -> IntervalEntry {
    match raw {
        Raw::Fin(values) => IntervalEntry::Finite { values },
        Raw::Plus { prefix, pat } => {
            let (prefix, cycle) = canon_z_plus(prefix, &pat);
            IntervalEntry::ZPlus { prefix, cycle }
        }
        Raw::MinusPending { pat, suffix } => {
            let (cycle, suffix) = canon_z_minus(&pat, suffix);
            IntervalEntry::ZMinus { cycle, suffix }
        }
        Raw::TwoSided { left, middle, right } => IntervalEntry::Z {
            stream: canon_two_sided(&left, &middle, &right),
        },
        Raw::Dense(constant) => IntervalEntry::Dense { constant },
    }
}

/// Smallest `d` dividing `pat.len()` with `pat` invariant under rotation
/// by `d`; the infinite periodic word then has primitive period `d`.
fn primitive_period(pat: &[u32]) -> usize {
    let len = pat.len();
    for d in 1..=len {
        if len % d != 0 {
            continue;
        }
        if (0..len).all(|i| pat[i] == pat[(i + d) % len]) {
            return d;
        }
    }
    len
}

fn canon_z_plus(mut prefix: Vec<u32>, pat: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let d = primitive_period(pat);
    let mut cycle = pat[..d].to_vec();
    // A prefix tail equal to the value the cycle would have just before
    // its start is part of the periodic zone in a shifted presentation.
    while let Some(&last) = prefix.last() {
        if last == *cycle.last().unwrap() {
            prefix.pop();
            let l = cycle.pop().unwrap();
            cycle.insert(0, l);
        } else {
            break;
        }
    }
    (prefix, cycle)
}

fn canon_z_minus(pat: &[u32], mut suffix: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
    let d = primitive_period(pat);
    // The window of the last `d` values of the periodic zone, read left to
    // right: coordinate `-d+i` carries `pat[(len-d+i) % len]`.
    let len = pat.len();
    let mut cycle: Vec<u32> = (0..d).map(|i| pat[(len - d + i) % len]).collect();
    let mut absorbed = 0;
    while absorbed < suffix.len() && suffix[absorbed] == cycle[0] {
        let f = cycle.remove(0);
        cycle.push(f);
        absorbed += 1;
    }
    suffix.drain(..absorbed);
    (cycle, suffix)
}

struct TwoSided<'a> {
    left: &'a [u32],
    middle: &'a [u32],
    right: &'a [u32],
}

impl TwoSided<'_> {
    fn at(&self, i: i64) -> u32 {
        let m = self.middle.len() as i64;
        if i >= m {
            self.right[(i - m).rem_euclid(self.right.len() as i64) as usize]
        } else if i >= 0 {
            self.middle[i as usize]
        } else {
            self.left[i.rem_euclid(self.left.len() as i64) as usize]
        }
    }

    fn is_periodic_with(&self, p: i64) -> bool {
        // The window must dominate the zone pattern lengths, otherwise a
        // long-period zone with a short constant stretch could pass a
        // small-period check on a narrow window.
        let m = self.middle.len() as i64;
        let pl = self.left.len() as i64;
        let pr = self.right.len() as i64;
        let w = 2 * (pl + pr + p + m + 8);
        (-w..=w + m).all(|i| self.at(i + p) == self.at(i))
    }
}

fn canon_two_sided(left: &[u32], middle: &[u32], right: &[u32]) -> ZStream {
    let s = TwoSided { left, middle, right };
    let pl = primitive_period(left) as i64;
    let pr = primitive_period(right) as i64;
    let pstar = pl.lcm(&pr);
    let m = middle.len() as i64;
    if s.is_periodic_with(pstar) {
        let d = (1..=pstar)
            .find(|d| pstar % d == 0 && s.is_periodic_with(*d))
            .unwrap();
        let word: Vec<u32> = (0..d).map(|i| s.at(i)).collect();
        return ZStream::Pure {
            cycle: least_rotation(&word),
        };
    }
    // Anchor at the end of the maximal left-periodic zone and the start of
    // the maximal right-periodic zone; both are shift-invariant.
    let bound = m + 4 * pstar + 16;
    let mut a: i64 = 0;
    while s.at(a) == s.at(a - pl) {
        a += 1;
        assert!(a <= bound, "non-periodic stream extended past the bound");
    }
    let mut b: i64 = m;
    while s.at(b - 1) == s.at(b - 1 + pr) {
        b -= 1;
        assert!(b >= -bound, "non-periodic stream extended past the bound");
    }
    ZStream::Mixed {
        left_cycle: (a - pl..a).map(|i| s.at(i)).collect(),
        gap: b - a,
        middle: if b > a {
            (a..b).map(|i| s.at(i)).collect()
        } else {
            Vec::new()
        },
        right_cycle: (b..b + pr).map(|i| s.at(i)).collect(),
    }
}

fn least_rotation(word: &[u32]) -> Vec<u32> {
    let mut best = word.to_vec();
    for shift in 1..word.len() {
        let mut rotated = word[shift..].to_vec();
        rotated.extend_from_slice(&word[..shift]);
        if rotated < best {
            best = rotated;
        }
    }
    best
}

/// Whether two weighted orders present isomorphic lexicographic data:
/// equal sequences of maximal intervals with matching tags and matching
/// multiplicity data up to the allowed reparameterization (rotation for
/// two-sided intervals, presentation shifts for one-sided ones, constant
/// equality for dense families).
pub fn classify_iso(a: &WeightedOrder, b: &WeightedOrder) -> bool {
    interval_decomposition(a) == interval_decomposition(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::parse_order;

    fn decomp(text: &str) -> Vec<IntervalEntry> {
        interval_decomposition(&parse_order(text).unwrap())
    }

    fn iso(a: &str, b: &str) -> bool {
        classify_iso(&parse_order(a).unwrap(), &parse_order(b).unwrap())
    }

    #[test]
    fn two_sided_from_split_halves() {
        assert_eq!(
            decomp("w*[2] + w[2]"),
            vec![IntervalEntry::Z {
                stream: ZStream::Pure { cycle: vec![2] }
            }]
        );
    }

    #[test]
    fn dense_segment_is_singleton_field() {
        assert_eq!(decomp("q[2]"), vec![IntervalEntry::Dense { constant: 2 }]);
    }

    #[test]
    fn finite_prefix_merges_into_omega() {
        let entries = decomp("3[2,2,2] + w[2]");
        assert_eq!(
            entries,
            vec![IntervalEntry::ZPlus {
                prefix: vec![],
                cycle: vec![2]
            }]
        );
        // The merged stream must equal the concatenation of the parts.
        let concat = [2u32, 2, 2, 2, 2, 2, 2, 2];
        if let IntervalEntry::ZPlus { prefix, cycle } = &entries[0] {
            let value = |i: usize| {
                if i < prefix.len() {
                    prefix[i]
                } else {
                    cycle[(i - prefix.len()) % cycle.len()]
                }
            };
            for (i, want) in concat.iter().enumerate() {
                assert_eq!(value(i), *want);
            }
        }
    }

    #[test]
    fn finite_point_before_omega_star_stays_isolated() {
        assert_eq!(
            decomp("1[2] + w*[2]"),
            vec![
                IntervalEntry::Finite { values: vec![2] },
                IntervalEntry::ZMinus {
                    cycle: vec![2],
                    suffix: vec![]
                },
            ]
        );
    }

    #[test]
    fn omega_star_absorbs_following_point() {
        assert_eq!(
            decomp("w*[3,2] + 1[3]"),
            vec![IntervalEntry::ZMinus {
                cycle: vec![2, 3],
                suffix: vec![]
            }]
        );
        assert!(iso("w*[3,2] + 1[3]", "w*[2,3]"));
    }

    #[test]
    fn sandwich_absorption() {
        assert_eq!(decomp("q[2] + 1[2] + q[2]"), vec![IntervalEntry::Dense { constant: 2 }]);
        assert_eq!(
            decomp("q[2] + 1[3] + q[2]"),
            vec![
                IntervalEntry::Dense { constant: 2 },
                IntervalEntry::Finite { values: vec![3] },
                IntervalEntry::Dense { constant: 2 },
            ]
        );
        assert_eq!(decomp("q[2] + 2[2,2] + q[2]").len(), 3);
    }

    #[test]
    fn full_three_way_merge() {
        assert!(iso("w*[2] + 1[2] + w[2]", "z[2]"));
        assert!(!iso("w*[2] + 1[3] + w[2]", "z[2]"));
        assert!(iso("w*[2] + 1[3] + w[2]", "w*[2] + 2[3,2] + w[2]"));
    }

    #[test]
    fn classification_examples() {
        assert!(iso("q[2]", "q[2]"));
        assert!(!iso("q[2]", "q[3]"));
        assert!(!iso("w[2]", "z[2]"));
        assert!(iso("w*[2] + w[2]", "z[2]"));
        assert!(iso("z[2,3]", "z[3,2]"));
        assert!(!iso("z[2,3]", "z[2]"));
        assert!(iso("w[2,3]", "1[2] + w[3,2]"));
        assert!(!iso("1[3] + w[2]", "w[2]"));
        assert!(!iso("w[2] + w[2]", "w[2]"));
        assert!(!iso("q[2] + q[3]", "q[3] + q[2]"));
    }

    #[test]
    fn finite_data_is_compared_pointwise() {
        // Interval data records the presentation of the weighting, not the
        // stage algebra it generates; 2[2,2] and 1[4] differ as weighted
        // intervals even though both generate a 4x4 stage.
        assert!(!iso("2[2,2]", "1[4]"));
        assert!(iso("1[2] + 1[2]", "2[2,2]"));
    }

    #[test]
    fn mixed_streams_compare_up_to_shift() {
        let a = decomp("w*[2] + 1[3] + w[2]");
        let b = decomp("w*[2] + 2[2,3] + w[2]");
        assert_eq!(a, b);
        match &a[0] {
            IntervalEntry::Z {
                stream: ZStream::Mixed {
                    left_cycle,
                    gap,
                    middle,
                    right_cycle,
                },
            } => {
                assert_eq!(left_cycle, &vec![2]);
                assert_eq!(*gap, 1);
                assert_eq!(middle, &vec![3]);
                assert_eq!(right_cycle, &vec![2]);
            }
            other => panic!("expected a mixed two-sided stream, got {other:?}"),
        }
    }

    #[test]
    fn pure_reduction_happens_on_compound_patterns() {
        assert!(iso("z[2,3,2,3]", "z[2,3]"));
        assert!(iso("w*[2,3] + w[2,3]", "z[2,3]"));
        assert!(!iso("w*[3,2] + w[2,3]", "z[2,3]"));
    }
}
