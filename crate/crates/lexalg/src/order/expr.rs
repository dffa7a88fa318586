use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("multiplicity {value} below 2 at byte {position}")]
    MultiplicityTooSmall { value: u64, position: usize },
    #[error("periodic weight is not allowed on a dense (q) segment")]
    PeriodicOnDense,
    #[error("finite segment of length {expected} needs exactly {expected} weight values, got {got}")]
    ExplicitLengthMismatch { expected: usize, got: usize },
    #[error("finite segment length must be at least 1")]
    EmptyFiniteSegment,
    #[error("weight list does not fit segment {segment}: {message}")]
    WeightShape { segment: usize, message: String },
    #[error("expression has {segments} segments but {weights} weights")]
    WeightCount { segments: usize, weights: usize },
    #[error("coordinate {coord} is outside the domain of segment {segment}")]
    CoordOutOfDomain { segment: usize, coord: String },
    #[error("segment index {segment} out of range")]
    SegmentOutOfRange { segment: usize },
    #[error("chain depth {depth} exceeds the supported maximum {max}")]
    DepthTooLarge { depth: usize, max: usize },
    #[error("chain depth must be at least 1")]
    ZeroDepth,
}

/// A countable linear order type, as a finite sum of primitives.
///
/// `Sum` is kept flat (no nested sums, at least two terms); use
/// [`OrderExpr::from_terms`] to build sums safely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderExpr {
    Finite(u32),
    OmegaPlus,
    OmegaMinus,
    Zeta,
    Eta,
    Sum(Vec<OrderExpr>),
}

impl OrderExpr {
    /// Builds an expression from a list of primitive terms, flattening
    /// nested sums and collapsing one-element lists.
    pub fn from_terms(terms: Vec<OrderExpr>) -> OrderExpr {
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            match t {
                OrderExpr::Sum(inner) => flat.extend(inner),
                prim => flat.push(prim),
            }
        }
        match flat.len() {
            0 => panic!("empty order expression"),
            1 => flat.pop().unwrap(),
            _ => OrderExpr::Sum(flat),
        }
    }

    /// The primitive segments in left-to-right order.
    pub fn segments(&self) -> Vec<&OrderExpr> {
        match self {
            OrderExpr::Sum(ts) => ts.iter().collect(),
            prim => vec![prim],
        }
    }

    pub fn segment_count(&self) -> usize {
        match self {
            OrderExpr::Sum(ts) => ts.len(),
            _ => 1,
        }
    }

    fn is_well_ordered_primitive(&self) -> bool {
        matches!(self, OrderExpr::Finite(_) | OrderExpr::OmegaPlus)
    }
}

/// Whether the order type has a least element.
pub fn has_first(expr: &OrderExpr) -> bool {
    match expr {
        OrderExpr::Finite(_) | OrderExpr::OmegaPlus => true,
        OrderExpr::OmegaMinus | OrderExpr::Zeta | OrderExpr::Eta => false,
        OrderExpr::Sum(ts) => has_first(&ts[0]),
    }
}

/// Rewrites an expression to a fixed point of the safe identities
///
/// ```text
/// k + j = k+j     k + ω = ω     ω* + k = ω*     ω* + ω = ζ
/// η + η = η       η + 1 + η = η
/// ```
///
/// Every rule is an order isomorphism, so the result has the same order
/// type as the input. No attempt is made at a complete canonical form;
/// in particular `η + k + η` with `k ≥ 2` is irreducible (the `k` block
/// contains adjacent points, which `η` has none of).
pub fn normalize(expr: &OrderExpr) -> OrderExpr {
    let mut terms: Vec<OrderExpr> = expr.segments().into_iter().cloned().collect();
    while rewrite_pass(&mut terms) {}
    OrderExpr::from_terms(terms)
}

fn rewrite_pass(terms: &mut Vec<OrderExpr>) -> bool {
    for i in 0..terms.len().saturating_sub(2) {
        if terms[i] == OrderExpr::Eta
            && terms[i + 1] == OrderExpr::Finite(1)
            && terms[i + 2] == OrderExpr::Eta
        {
            terms.splice(i..i + 3, [OrderExpr::Eta]);
            return true;
        }
    }
    for i in 0..terms.len().saturating_sub(1) {
        let replacement = match (&terms[i], &terms[i + 1]) {
            (OrderExpr::Finite(a), OrderExpr::Finite(b)) => Some(OrderExpr::Finite(a + b)),
            (OrderExpr::Finite(_), OrderExpr::OmegaPlus) => Some(OrderExpr::OmegaPlus),
            (OrderExpr::OmegaMinus, OrderExpr::Finite(_)) => Some(OrderExpr::OmegaMinus),
            (OrderExpr::OmegaMinus, OrderExpr::OmegaPlus) => Some(OrderExpr::Zeta),
            (OrderExpr::Eta, OrderExpr::Eta) => Some(OrderExpr::Eta),
            _ => None,
        };
        if let Some(r) = replacement {
            terms.splice(i..i + 2, [r]);
            return true;
        }
    }
    false
}

/// Splits the order as `Ω = Ω₁ + Ω₂` with `Ω₁` the maximal well-ordered
/// initial segment. Either side may be empty.
///
/// `Finite` and `ω` segments are entirely well-ordered; an `ω*`, `ζ` or
/// `η` segment stops the scan with nothing contributed (any nonempty
/// initial piece of those contains an infinite descending chain).
pub fn wois_split(expr: &OrderExpr) -> (Option<OrderExpr>, Option<OrderExpr>) {
    let segs = expr.segments();
    let boundary = segs
        .iter()
        .position(|s| !s.is_well_ordered_primitive())
        .unwrap_or(segs.len());
    let initial = (boundary > 0)
        .then(|| OrderExpr::from_terms(segs[..boundary].iter().map(|s| (*s).clone()).collect()));
    let rest = (boundary < segs.len())
        .then(|| OrderExpr::from_terms(segs[boundary..].iter().map(|s| (*s).clone()).collect()));
    (initial, rest)
}

/// Index of the first segment not inside the maximal well-ordered initial
/// segment (equals the segment count when the whole order is well-ordered).
pub(crate) fn wois_boundary(expr: &OrderExpr) -> usize {
    expr.segments()
        .iter()
        .position(|s| !s.is_well_ordered_primitive())
        .unwrap_or(expr.segment_count())
}

/// Multiplicity data for one primitive segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    /// One value per point of a finite segment.
    Explicit(Vec<u32>),
    /// The same value at every point of an infinite segment.
    Constant(u32),
    /// `pattern[coordinate mod len]` on `ω`, `ω*` or `ζ`.
    Periodic(Vec<u32>),
}

/// An order expression together with one multiplicity per segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedOrder {
    expr: OrderExpr,
    weights: Vec<Multiplicity>,
}

impl WeightedOrder {
    pub fn new(expr: OrderExpr, weights: Vec<Multiplicity>) -> Result<Self, OrderError> {
        let segs = expr.segments();
        if segs.len() != weights.len() {
            return Err(OrderError::WeightCount {
                segments: segs.len(),
                weights: weights.len(),
            });
        }
        for (idx, (seg, weight)) in segs.iter().zip(&weights).enumerate() {
            let values: &[u32] = match weight {
                Multiplicity::Explicit(v) => v,
                Multiplicity::Constant(n) => std::slice::from_ref(n),
                Multiplicity::Periodic(p) => p,
            };
            if values.is_empty() {
                return Err(OrderError::WeightShape {
                    segment: idx,
                    message: "weight list is empty".into(),
                });
            }
            if let Some(&v) = values.iter().find(|&&v| v < 2) {
                return Err(OrderError::MultiplicityTooSmall {
                    value: v as u64,
                    position: 0,
                });
            }
            match (seg, weight) {
                (OrderExpr::Finite(0), _) => return Err(OrderError::EmptyFiniteSegment),
                (OrderExpr::Finite(k), Multiplicity::Explicit(v)) => {
                    if v.len() != *k as usize {
                        return Err(OrderError::ExplicitLengthMismatch {
                            expected: *k as usize,
                            got: v.len(),
                        });
                    }
                }
                (OrderExpr::Finite(_), _) => {
                    return Err(OrderError::WeightShape {
                        segment: idx,
                        message: "finite segments take an explicit per-point list".into(),
                    })
                }
                (OrderExpr::Eta, Multiplicity::Constant(_)) => {}
                (OrderExpr::Eta, _) => return Err(OrderError::PeriodicOnDense),
                (_, Multiplicity::Explicit(_)) => {
                    return Err(OrderError::WeightShape {
                        segment: idx,
                        message: "explicit lists only make sense on finite segments".into(),
                    })
                }
                (_, Multiplicity::Constant(_) | Multiplicity::Periodic(_)) => {}
            }
        }
        Ok(WeightedOrder { expr, weights })
    }

    pub fn expr(&self) -> &OrderExpr {
        &self.expr
    }

    pub fn weights(&self) -> &[Multiplicity] {
        &self.weights
    }

    pub fn segment_count(&self) -> usize {
        self.weights.len()
    }

    /// The multiplicity at a position.
    pub fn multiplicity_at(&self, pos: &Position) -> Result<u32, OrderError> {
        let segs = self.expr.segments();
        let seg = *segs
            .get(pos.segment)
            .ok_or(OrderError::SegmentOutOfRange { segment: pos.segment })?;
        check_coord(seg, pos.segment, &pos.coord)?;
        let value = match (&self.weights[pos.segment], &pos.coord) {
            (Multiplicity::Constant(n), _) => *n,
            (Multiplicity::Explicit(v), Coord::Int(c)) => v[(*c - 1) as usize],
            (Multiplicity::Periodic(p), Coord::Int(c)) => {
                p[(*c).rem_euclid(p.len() as i64) as usize]
            }
            _ => {
                return Err(OrderError::WeightShape {
                    segment: pos.segment,
                    message: "weight kind does not match the coordinate kind".into(),
                })
            }
        };
        Ok(value)
    }

    /// Splits the weighted order at the maximal well-ordered initial segment.
    pub fn wois_split(&self) -> (Option<WeightedOrder>, Option<WeightedOrder>) {
        let boundary = wois_boundary(&self.expr);
        let segs = self.expr.segments();
        let make = |range: std::ops::Range<usize>| -> Option<WeightedOrder> {
            if range.is_empty() {
                return None;
            }
            let expr =
                OrderExpr::from_terms(segs[range.clone()].iter().map(|s| (*s).clone()).collect());
            let weights = self.weights[range].to_vec();
            Some(WeightedOrder { expr, weights })
        };
        (make(0..boundary), make(boundary..segs.len()))
    }

    /// Index of the first segment outside the well-ordered initial part.
    pub fn wois_boundary(&self) -> usize {
        wois_boundary(&self.expr)
    }
}

fn check_coord(seg: &OrderExpr, idx: usize, coord: &Coord) -> Result<(), OrderError> {
    let ok = match (seg, coord) {
        (OrderExpr::Finite(k), Coord::Int(c)) => *c >= 1 && *c <= *k as i64,
        (OrderExpr::OmegaPlus, Coord::Int(c)) => *c >= 0,
        (OrderExpr::OmegaMinus, Coord::Int(c)) => *c <= -1,
        (OrderExpr::Zeta, Coord::Int(_)) => true,
        (OrderExpr::Eta, Coord::Rat(_)) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(OrderError::CoordOutOfDomain {
            segment: idx,
            coord: format!("{coord}"),
        })
    }
}

/// A coordinate inside one primitive segment: integers everywhere except
/// on dense segments, which use exact rationals.
#[derive(Debug, Clone, Copy)]
pub enum Coord {
    Int(i64),
    Rat(Ratio<i64>),
}

impl Coord {
    fn as_ratio(&self) -> Ratio<i64> {
        match self {
            Coord::Int(i) => Ratio::from_integer(*i),
            Coord::Rat(r) => *r,
        }
    }

    pub fn numer(&self) -> i64 {
        match self {
            Coord::Int(i) => *i,
            Coord::Rat(r) => *r.numer(),
        }
    }

    pub fn denom(&self) -> i64 {
        match self {
            Coord::Int(_) => 1,
            Coord::Rat(r) => *r.denom(),
        }
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        self.as_ratio() == other.as_ratio()
    }
}

impl Eq for Coord {}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_ratio().cmp(&other.as_ratio())
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Int(i) => write!(f, "{i}"),
            Coord::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// A point of a weighted order: segment index plus in-segment coordinate.
/// Positions compare first by segment, then by coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Position {
    pub segment: usize,
    pub coord: Coord,
}

impl Position {
    pub fn int(segment: usize, coord: i64) -> Self {
        Position {
            segment,
            coord: Coord::Int(coord),
        }
    }

    pub fn rat(segment: usize, num: i64, den: i64) -> Self {
        Position {
            segment,
            coord: Coord::Rat(Ratio::new(num, den)),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.segment, self.coord)
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Position", 3)?;
        s.serialize_field("segment", &self.segment)?;
        s.serialize_field("num", &self.coord.numer())?;
        s.serialize_field("den", &self.coord.denom())?;
        s.end()
    }
}

// ---------------------------------------------------------------------------
// Parsing and formatting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(u64),
    W,
    WStar,
    Z,
    Q,
    LBracket,
    RBracket,
    Comma,
    Plus,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, OrderError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                let mut value: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((bytes[i] - b'0') as u64))
                        .ok_or_else(|| OrderError::Syntax {
                            position: start,
                            message: "integer literal too large".into(),
                        })?;
                    i += 1;
                }
                tokens.push((Token::Int(value), start));
            }
            b'w' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'*' {
                    tokens.push((Token::WStar, i));
                    i += 2;
                } else {
                    tokens.push((Token::W, i));
                    i += 1;
                }
            }
            b'z' => {
                tokens.push((Token::Z, i));
                i += 1;
            }
            b'q' => {
                tokens.push((Token::Q, i));
                i += 1;
            }
            b'[' => {
                tokens.push((Token::LBracket, i));
                i += 1;
            }
            b']' => {
                tokens.push((Token::RBracket, i));
                i += 1;
            }
            b',' => {
                tokens.push((Token::Comma, i));
                i += 1;
            }
            b'+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            _ => {
                return Err(OrderError::Syntax {
                    position: i,
                    message: format!("unexpected character {:?}", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn next(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<usize, OrderError> {
        match self.next() {
            Some((tok, at)) if tok == want => Ok(at),
            Some((_, at)) => Err(OrderError::Syntax {
                position: at,
                message: format!("expected {what}"),
            }),
            None => Err(OrderError::Syntax {
                position: self.end,
                message: format!("expected {what}, found end of input"),
            }),
        }
    }

    /// `[` INT (`,` INT)* `]`, returning values with their byte positions.
    fn weight_list(&mut self) -> Result<Vec<(u64, usize)>, OrderError> {
        self.expect(Token::LBracket, "'['")?;
        let mut values = Vec::new();
        loop {
            match self.next() {
                Some((Token::Int(v), at)) => values.push((v, at)),
                Some((_, at)) => {
                    return Err(OrderError::Syntax {
                        position: at,
                        message: "expected an integer weight".into(),
                    })
                }
                None => {
                    return Err(OrderError::Syntax {
                        position: self.end,
                        message: "expected an integer weight, found end of input".into(),
                    })
                }
            }
            match self.next() {
                Some((Token::Comma, _)) => continue,
                Some((Token::RBracket, _)) => break,
                Some((_, at)) => {
                    return Err(OrderError::Syntax {
                        position: at,
                        message: "expected ',' or ']'".into(),
                    })
                }
                None => {
                    return Err(OrderError::Syntax {
                        position: self.end,
                        message: "expected ',' or ']', found end of input".into(),
                    })
                }
            }
        }
        Ok(values)
    }
}

fn checked_values(values: &[(u64, usize)]) -> Result<Vec<u32>, OrderError> {
    values
        .iter()
        .map(|&(v, at)| {
            if v < 2 {
                Err(OrderError::MultiplicityTooSmall { value: v, position: at })
            } else if v > u32::MAX as u64 {
                Err(OrderError::Syntax {
                    position: at,
                    message: "multiplicity too large".into(),
                })
            } else {
                Ok(v as u32)
            }
        })
        .collect()
}

/// Parses the ASCII order grammar into a validated [`WeightedOrder`].
pub fn parse_order(text: &str) -> Result<WeightedOrder, OrderError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let mut terms = Vec::new();
    let mut weights = Vec::new();
    loop {
        let (tok, at) = parser.next().ok_or_else(|| OrderError::Syntax {
            position: parser.end,
            message: "expected an order primitive, found end of input".into(),
        })?;
        match tok {
            Token::Int(k) => {
                if k == 0 {
                    return Err(OrderError::Syntax {
                        position: at,
                        message: "finite segment length must be at least 1".into(),
                    });
                }
                if k > 100_000 {
                    return Err(OrderError::Syntax {
                        position: at,
                        message: "finite segment length too large".into(),
                    });
                }
                let raw = parser.weight_list()?;
                let values = checked_values(&raw)?;
                if values.len() != k as usize {
                    return Err(OrderError::ExplicitLengthMismatch {
                        expected: k as usize,
                        got: values.len(),
                    });
                }
                terms.push(OrderExpr::Finite(k as u32));
                weights.push(Multiplicity::Explicit(values));
            }
            Token::W | Token::WStar | Token::Z | Token::Q => {
                let raw = parser.weight_list()?;
                let values = checked_values(&raw)?;
                let expr = match tok {
                    Token::W => OrderExpr::OmegaPlus,
                    Token::WStar => OrderExpr::OmegaMinus,
                    Token::Z => OrderExpr::Zeta,
                    _ => OrderExpr::Eta,
                };
                let weight = if values.len() == 1 {
                    Multiplicity::Constant(values[0])
                } else if expr == OrderExpr::Eta {
                    return Err(OrderError::PeriodicOnDense);
                } else {
                    Multiplicity::Periodic(values)
                };
                terms.push(expr);
                weights.push(weight);
            }
            _ => {
                return Err(OrderError::Syntax {
                    position: at,
                    message: "expected an order primitive".into(),
                })
            }
        }
        match parser.next() {
            Some((Token::Plus, _)) => continue,
            Some((_, at)) => {
                return Err(OrderError::Syntax {
                    position: at,
                    message: "expected '+' or end of input".into(),
                })
            }
            None => break,
        }
    }
    WeightedOrder::new(OrderExpr::from_terms(terms), weights)
}

/// Emits the grammar accepted by [`parse_order`]; `parse_order ∘ format_order`
/// is the identity on valid weighted orders.
pub fn format_order(w: &WeightedOrder) -> String {
    let mut out = String::new();
    for (idx, (seg, weight)) in w.expr().segments().iter().zip(w.weights()).enumerate() {
        if idx > 0 {
            out.push_str(" + ");
        }
        match seg {
            OrderExpr::Finite(k) => out.push_str(&k.to_string()),
            OrderExpr::OmegaPlus => out.push('w'),
            OrderExpr::OmegaMinus => out.push_str("w*"),
            OrderExpr::Zeta => out.push('z'),
            OrderExpr::Eta => out.push('q'),
            OrderExpr::Sum(_) => unreachable!("segments are primitive"),
        }
        let values: Vec<u32> = match weight {
            Multiplicity::Explicit(v) => v.clone(),
            Multiplicity::Constant(n) => vec![*n],
            Multiplicity::Periodic(p) => p.clone(),
        };
        out.push('[');
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&v.to_string());
        }
        out.push(']');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(text: &str) -> WeightedOrder {
        parse_order(text).unwrap()
    }

    #[test]
    fn parse_single_omega() {
        let w = ord("w[2]");
        assert_eq!(w.expr(), &OrderExpr::OmegaPlus);
        assert_eq!(w.weights(), &[Multiplicity::Constant(2)]);
    }

    #[test]
    fn parse_sum() {
        let w = ord("w*[2] + w[2]");
        assert_eq!(
            w.expr(),
            &OrderExpr::Sum(vec![OrderExpr::OmegaMinus, OrderExpr::OmegaPlus])
        );
        assert_eq!(
            w.weights(),
            &[Multiplicity::Constant(2), Multiplicity::Constant(2)]
        );
    }

    #[test]
    fn parse_rejects_small_multiplicity() {
        assert_eq!(
            parse_order("q[1]"),
            Err(OrderError::MultiplicityTooSmall { value: 1, position: 2 })
        );
    }

    #[test]
    fn parse_rejects_periodic_on_dense() {
        assert_eq!(parse_order("q[2,3]"), Err(OrderError::PeriodicOnDense));
    }

    #[test]
    fn parse_rejects_wrong_explicit_length() {
        assert_eq!(
            parse_order("3[2,2]"),
            Err(OrderError::ExplicitLengthMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn parse_reports_syntax_position() {
        match parse_order("w[2] ? q[2]") {
            Err(OrderError::Syntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn format_round_trips() {
        for text in [
            "w[2]",
            "w*[2] + w[2]",
            "3[2,2,2] + w[2]",
            "z[2,3]",
            "q[2] + 1[3] + q[2]",
        ] {
            let w = ord(text);
            assert_eq!(format_order(&w), text.replace("  ", " "));
            assert_eq!(ord(&format_order(&w)), w);
        }
    }

    #[test]
    fn normalize_examples() {
        let n = |t: &str| normalize(ord(t).expr());
        assert_eq!(n("3[2,2,2] + w[2]"), OrderExpr::OmegaPlus);
        assert_eq!(n("w*[2] + w[2]"), OrderExpr::Zeta);
        assert_eq!(
            n("w[2] + w*[2]"),
            OrderExpr::Sum(vec![OrderExpr::OmegaPlus, OrderExpr::OmegaMinus])
        );
        assert_eq!(n("q[2] + 1[2] + q[2]"), OrderExpr::Eta);
        assert_eq!(
            n("q[2] + 2[2,2] + q[2]"),
            OrderExpr::Sum(vec![OrderExpr::Eta, OrderExpr::Finite(2), OrderExpr::Eta])
        );
        assert_eq!(n("1[2] + 2[3,4]"), OrderExpr::Finite(3));
    }

    #[test]
    fn has_first_examples() {
        assert!(!has_first(&OrderExpr::Eta));
        assert!(!has_first(&OrderExpr::Zeta));
        assert!(has_first(ord("1[2] + q[2]").expr()));
        assert!(has_first(ord("w[2] + w*[2]").expr()));
        assert!(!has_first(ord("w*[2] + w[2]").expr()));
    }

    #[test]
    fn wois_split_examples() {
        let (a, b) = wois_split(ord("w[2] + z[2]").expr());
        assert_eq!(a, Some(OrderExpr::OmegaPlus));
        assert_eq!(b, Some(OrderExpr::Zeta));

        let (a, b) = wois_split(&OrderExpr::Eta);
        assert_eq!(a, None);
        assert_eq!(b, Some(OrderExpr::Eta));

        let (a, b) = wois_split(ord("w[2] + w[2] + w*[2]").expr());
        assert_eq!(
            a,
            Some(OrderExpr::Sum(vec![OrderExpr::OmegaPlus, OrderExpr::OmegaPlus]))
        );
        assert_eq!(b, Some(OrderExpr::OmegaMinus));
    }

    #[test]
    fn weighted_wois_split_carries_weights() {
        let w = ord("1[2] + q[3]");
        let (a, b) = w.wois_split();
        assert_eq!(format_order(&a.unwrap()), "1[2]");
        assert_eq!(format_order(&b.unwrap()), "q[3]");
    }

    #[test]
    fn multiplicity_lookup() {
        let w = ord("z[2,3]");
        assert_eq!(w.multiplicity_at(&Position::int(0, -1)).unwrap(), 3);
        assert_eq!(w.multiplicity_at(&Position::int(0, 0)).unwrap(), 2);
        assert_eq!(w.multiplicity_at(&Position::int(0, -2)).unwrap(), 2);

        let w = ord("3[4,5,6]");
        assert_eq!(w.multiplicity_at(&Position::int(0, 2)).unwrap(), 5);
        assert!(w.multiplicity_at(&Position::int(0, 0)).is_err());
        assert!(w.multiplicity_at(&Position::int(0, 4)).is_err());
    }

    #[test]
    fn position_ordering() {
        assert!(Position::int(0, 5) < Position::int(1, -10));
        assert!(Position::int(0, -2) < Position::int(0, -1));
        assert!(Position::rat(0, 1, 4) < Position::rat(0, 1, 2));
    }
}
