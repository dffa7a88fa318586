//! Wire formats: `{"n", "edges", "labels"}` for relations and
//! `{"terms": [{"row","col","num","den"}]}` for elements.

use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use super::digraph::{from_relation, AlgebraError, DigraphAlgebra, Label};
use super::element::{Coef, Element};

impl Serialize for DigraphAlgebra {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(if self.labels().is_some() { 3 } else { 2 }))?;
        map.serialize_entry("n", &self.n())?;
        map.serialize_entry("edges", &self.edges())?;
        if let Some(labels) = self.labels() {
            map.serialize_entry("labels", labels)?;
        }
        map.end()
    }
}

/// Parse side of the relation schema; validation goes through
/// [`from_relation`], so malformed relations are rejected with the same
/// witnesses as the library API.
#[derive(Debug, Deserialize)]
pub struct RelationDto {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
    #[serde(default)]
    pub labels: Option<Vec<Label>>,
}

impl RelationDto {
    pub fn build(self) -> Result<DigraphAlgebra, AlgebraError> {
        let algebra = from_relation(self.n, &self.edges)?;
        match self.labels {
            Some(labels) => algebra.with_labels(labels),
            None => Ok(algebra),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub row: u32,
    pub col: u32,
    pub num: i64,
    pub den: i64,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a Element);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.term_count()))?;
                for (unit, coef) in self.0.terms() {
                    seq.serialize_element(&TermDto {
                        row: unit.row,
                        col: unit.col,
                        num: *coef.numer(),
                        den: *coef.denom(),
                    })?;
                }
                seq.end()
            }
        }
        let mut s = serializer.serialize_struct("Element", 1)?;
        s.serialize_field("terms", &Terms(self))?;
        s.end()
    }
}

/// Builds an element from parsed term records.
pub fn element_from_terms(
    home: &Arc<DigraphAlgebra>,
    terms: &[TermDto],
) -> Result<Element, AlgebraError> {
    Element::from_terms(
        home,
        terms
            .iter()
            .map(|t| ((t.row, t.col), Coef::new(t.num, t.den))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::digraph::triangular_algebra;

    #[test]
    fn relation_round_trip() {
        let t3 = triangular_algebra(3).unwrap();
        let json = serde_json::to_string(&t3).unwrap();
        assert_eq!(json, r#"{"n":3,"edges":[[1,1],[1,2],[1,3],[2,2],[2,3],[3,3]]}"#);
        let dto: RelationDto = serde_json::from_str(&json).unwrap();
        assert_eq!(dto.build().unwrap(), t3);
    }

    #[test]
    fn invalid_relation_is_rejected_on_parse() {
        let dto: RelationDto =
            serde_json::from_str(r#"{"n":2,"edges":[[1,1],[2,2],[1,2],[2,1],[1,3]]}"#).unwrap();
        assert!(dto.build().is_err());
    }

    #[test]
    fn element_round_trip() {
        let t2 = Arc::new(triangular_algebra(2).unwrap());
        let x = element_from_terms(
            &t2,
            &[
                TermDto { row: 1, col: 2, num: -3, den: 2 },
                TermDto { row: 1, col: 1, num: 1, den: 1 },
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(
            json,
            r#"{"terms":[{"row":1,"col":1,"num":1,"den":1},{"row":1,"col":2,"num":-3,"den":2}]}"#
        );
    }
}
