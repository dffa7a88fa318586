use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::digraph::{AlgebraError, DigraphAlgebra, MatrixUnit};

/// Exact coefficient type. Structure constants are 0/1 and the randomized
/// checks use small integers, so `i64` rationals are ample; the trace
/// oracle does its internal linear algebra over big rationals.
pub type Coef = Ratio<i64>;

/// A sparse exact linear combination of matrix units of one algebra.
/// Zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct Element {
    home: Arc<DigraphAlgebra>,
    terms: BTreeMap<(u32, u32), Coef>,
}

fn same_home(a: &Arc<DigraphAlgebra>, b: &Arc<DigraphAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Element {
    pub fn zero(home: &Arc<DigraphAlgebra>) -> Self {
        Element {
            home: home.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(home: &Arc<DigraphAlgebra>) -> Self {
        let terms = (1..=home.n()).map(|i| ((i, i), Coef::one())).collect();
        Element {
            home: home.clone(),
            terms,
        }
    }

    pub fn unit(home: &Arc<DigraphAlgebra>, row: u32, col: u32) -> Result<Self, AlgebraError> {
        if !home.contains(row, col) {
            return Err(AlgebraError::UnitNotInRelation { row, col });
        }
        let mut terms = BTreeMap::new();
        terms.insert((row, col), Coef::one());
        Ok(Element {
            home: home.clone(),
            terms,
        })
    }

    pub fn from_terms(
        home: &Arc<DigraphAlgebra>,
        terms: impl IntoIterator<Item = ((u32, u32), Coef)>,
    ) -> Result<Self, AlgebraError> {
        let mut map: BTreeMap<(u32, u32), Coef> = BTreeMap::new();
        for ((row, col), coef) in terms {
            if !home.contains(row, col) {
                return Err(AlgebraError::UnitNotInRelation { row, col });
            }
            let entry = map.entry((row, col)).or_insert_with(Coef::zero);
            *entry += coef;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Element {
            home: home.clone(),
            terms: map,
        })
    }

    pub fn home(&self) -> &Arc<DigraphAlgebra> {
        &self.home
    }

    pub fn terms(&self) -> impl Iterator<Item = (MatrixUnit, &Coef)> {
        self.terms
            .iter()
            .map(|(&(row, col), c)| (MatrixUnit { row, col }, c))
    }

    pub fn coefficient(&self, row: u32, col: u32) -> Coef {
        self.terms.get(&(row, col)).copied().unwrap_or_else(Coef::zero)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        if !same_home(&self.home, &other.home) {
            return Err(AlgebraError::HomeMismatch);
        }
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(Coef::zero);
            *entry += *c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Element {
            home: self.home.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.add(&other.scale(-Coef::one()))
    }

    pub fn scale(&self, factor: Coef) -> Element {
        if factor.is_zero() {
            return Element::zero(&self.home);
        }
        Element {
            home: self.home.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, *c * factor)).collect(),
        }
    }

    /// Bilinear extension of `e_{ij} · e_{kl} = δ_{jk} e_{il}`. Transitivity
    /// of the relation keeps every product term inside the algebra.
    pub fn multiply(&self, other: &Element) -> Result<Element, AlgebraError> {
        if !same_home(&self.home, &other.home) {
            return Err(AlgebraError::HomeMismatch);
        }
        let mut terms: BTreeMap<(u32, u32), Coef> = BTreeMap::new();
        for (&(i, j), &x) in &self.terms {
            for (&(_, l), &y) in other.terms.range((j, 1)..=(j, u32::MAX)) {
                debug_assert!(self.home.contains(i, l));
                let entry = terms.entry((i, l)).or_insert_with(Coef::zero);
                *entry += x * y;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Element {
            home: self.home.clone(),
            terms,
        })
    }

    pub fn pow(&self, exponent: u32) -> Result<Element, AlgebraError> {
        let mut acc = Element::identity(&self.home);
        for _ in 0..exponent {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_home(&self.home, &other.home) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(i, j), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "e({i},{j})")?;
            } else {
                write!(f, "{c}·e({i},{j})")?;
            }
        }
        Ok(())
    }
}
