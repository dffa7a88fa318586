use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("an algebra needs at least one vertex")]
    EmptyAlgebra,
    #[error("edge ({row},{col}) is out of range for n = {n}")]
    EdgeOutOfRange { row: u32, col: u32, n: u32 },
    #[error("relation is not reflexive: ({v},{v}) is missing")]
    NotReflexive { v: u32 },
    #[error("relation is not transitive: ({i},{j}) and ({j},{k}) are edges but ({i},{k}) is not")]
    NotTransitive { i: u32, j: u32, k: u32 },
    #[error("operation needs a triangular algebra, but ({i},{j}) and ({j},{i}) are both edges")]
    NotTriangular { i: u32, j: u32 },
    #[error("elements live in different algebras")]
    HomeMismatch,
    #[error("matrix unit ({row},{col}) is not in the relation")]
    UnitNotInRelation { row: u32, col: u32 },
    #[error("the trace oracle is capped at {cap} vertices, got {n}")]
    OracleSizeCap { n: u32, cap: u32 },
    #[error("a computed coefficient does not fit the i64 rational coefficient type")]
    CoefficientOverflow,
    #[error("label list length {got} does not match vertex count {n}")]
    LabelCount { got: usize, n: u32 },
}

/// Vertex label: a multi-index over the positions of a stage.
pub type Label = Vec<u32>;

/// A basis matrix unit, identified by its (1-based) row and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatrixUnit {
    pub row: u32,
    pub col: u32,
}

impl MatrixUnit {
    pub fn new(row: u32, col: u32) -> Self {
        MatrixUnit { row, col }
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }
}

/// The span of the matrix units over a reflexive transitive relation on
/// `{1..n}`, stored as a sorted edge list. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphAlgebra {
    n: u32,
    edges: Vec<(u32, u32)>,
    triangular: bool,
    labels: Option<Vec<Label>>,
}

impl DigraphAlgebra {
    /// Number of vertices (the matrix size).
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Linear dimension: the number of edges.
    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn contains(&self, row: u32, col: u32) -> bool {
        self.edges.binary_search(&(row, col)).is_ok()
    }

    pub fn edge_index(&self, row: u32, col: u32) -> Option<usize> {
        self.edges.binary_search(&(row, col)).ok()
    }

    pub fn is_triangular(&self) -> bool {
        self.triangular
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn label(&self, vertex: u32) -> Option<&Label> {
        self.labels.as_ref().map(|l| &l[(vertex - 1) as usize])
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self, AlgebraError> {
        if labels.len() != self.n as usize {
            return Err(AlgebraError::LabelCount {
                got: labels.len(),
                n: self.n,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Builds from edges known to be sorted, deduplicated, reflexive and
    /// transitive (producers: the algebra factories and products).
    pub(crate) fn from_sorted_unchecked(n: u32, edges: Vec<(u32, u32)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let triangular = edges.iter().all(|&(i, j)| i <= j)
            || edges
                .iter()
                .all(|&(i, j)| i == j || edges.binary_search(&(j, i)).is_err());
        DigraphAlgebra {
            n,
            edges,
            triangular,
            labels: None,
        }
    }

    fn witness_not_triangular(&self) -> Option<(u32, u32)> {
        self.edges
            .iter()
            .find(|&&(i, j)| i < j && self.contains(j, i))
            .copied()
    }
}

/// The upper triangular algebra `T_n`.
pub fn triangular_algebra(n: u32) -> Result<DigraphAlgebra, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::EmptyAlgebra);
    }
    let mut edges = Vec::with_capacity((n as usize * (n as usize + 1)) / 2);
    for i in 1..=n {
        for j in i..=n {
            edges.push((i, j));
        }
    }
    Ok(DigraphAlgebra {
        n,
        edges,
        triangular: true,
        labels: None,
    })
}

/// The diagonal algebra `D_n`.
pub fn diagonal_algebra(n: u32) -> Result<DigraphAlgebra, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::EmptyAlgebra);
    }
    Ok(DigraphAlgebra {
        n,
        edges: (1..=n).map(|i| (i, i)).collect(),
        triangular: true,
        labels: None,
    })
}

/// The full matrix algebra `M_n`.
pub fn full_matrix_algebra(n: u32) -> Result<DigraphAlgebra, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::EmptyAlgebra);
    }
    let mut edges = Vec::with_capacity(n as usize * n as usize);
    for i in 1..=n {
        for j in 1..=n {
            edges.push((i, j));
        }
    }
    Ok(DigraphAlgebra {
        n,
        edges,
        triangular: n == 1,
        labels: None,
    })
}

/// Finds a transitivity failure, if any, in a sorted edge list.
pub fn transitive_witness(edges: &[(u32, u32)]) -> Option<(u32, u32, u32)> {
    let has = |i: u32, j: u32| edges.binary_search(&(i, j)).is_ok();
    for &(i, j) in edges {
        for &(j2, k) in edges {
            if j2 == j && !has(i, k) {
                return Some((i, j, k));
            }
        }
    }
    None
}

/// Validates a relation and builds the algebra. Rejects non-reflexive or
/// non-transitive input with a witness instead of closing it; closure is
/// the caller's explicit choice via [`reflexive_transitive_closure`].
pub fn from_relation(n: u32, pairs: &[(u32, u32)]) -> Result<DigraphAlgebra, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::EmptyAlgebra);
    }
    let mut edges: Vec<(u32, u32)> = pairs.to_vec();
    edges.sort_unstable();
    edges.dedup();
    for &(i, j) in &edges {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(AlgebraError::EdgeOutOfRange { row: i, col: j, n });
        }
    }
    for v in 1..=n {
        if edges.binary_search(&(v, v)).is_err() {
            return Err(AlgebraError::NotReflexive { v });
        }
    }
    if let Some((i, j, k)) = transitive_witness(&edges) {
        return Err(AlgebraError::NotTransitive { i, j, k });
    }
    let triangular = edges
        .iter()
        .all(|&(i, j)| i == j || edges.binary_search(&(j, i)).is_err());
    Ok(DigraphAlgebra {
        n,
        edges,
        triangular,
        labels: None,
    })
}

/// Reflexive-transitive closure of an arbitrary pair set (for generators).
pub fn reflexive_transitive_closure(n: u32, pairs: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let n = n as usize;
    let mut adj = vec![false; n * n];
    for v in 0..n {
        adj[v * n + v] = true;
    }
    for &(i, j) in pairs {
        adj[(i as usize - 1) * n + (j as usize - 1)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if adj[i * n + k] {
                for j in 0..n {
                    if adj[k * n + j] {
                        adj[i * n + j] = true;
                    }
                }
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if adj[i * n + j] {
                edges.push((i as u32 + 1, j as u32 + 1));
            }
        }
    }
    edges
}

/// A two-sided combinatorial ideal: a subset of the relation closed under
/// composition with relation edges on either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    home: Arc<DigraphAlgebra>,
    edges: Vec<(u32, u32)>,
}

impl Ideal {
    pub fn home(&self) -> &Arc<DigraphAlgebra> {
        &self.home
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, row: u32, col: u32) -> bool {
        self.edges.binary_search(&(row, col)).is_ok()
    }

    /// Checks the ideal closure property; used by tests.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        for &(i, j) in &self.edges {
            for &(a, b) in self.home.edges() {
                if a == j && !self.contains(i, b) {
                    return Err(AlgebraError::NotTransitive { i, j, k: b });
                }
                if b == i && !self.contains(a, j) {
                    return Err(AlgebraError::NotTransitive { i: a, j: i, k: j });
                }
            }
        }
        Ok(())
    }
}

/// The maximal diagonal-disjoint ideal of a triangular algebra: all
/// strictly off-diagonal edges.
pub fn strict_ideal(a: &Arc<DigraphAlgebra>) -> Result<Ideal, AlgebraError> {
    if let Some((i, j)) = a.witness_not_triangular() {
        return Err(AlgebraError::NotTriangular { i, j });
    }
    let edges = a.edges().iter().filter(|&&(i, j)| i != j).copied().collect();
    Ok(Ideal {
        home: a.clone(),
        edges,
    })
}

/// The Jacobson radical of a digraph algebra: the span of the edges whose
/// reverse is absent. The quotient relation (edges with both directions)
/// is then an equivalence relation.
pub fn radical_combinatorial(a: &Arc<DigraphAlgebra>) -> Ideal {
    let edges = a
        .edges()
        .iter()
        .filter(|&&(i, j)| !a.contains(j, i))
        .copied()
        .collect();
    Ideal {
        home: a.clone(),
        edges,
    }
}

/// Block sizes of the semisimple quotient: the sorted class sizes of the
/// symmetric part of the relation.
pub fn semisimple_quotient(a: &DigraphAlgebra) -> Vec<u32> {
    let n = a.n();
    let mut rep: Vec<u32> = (1..=n).collect();
    for v in 1..=n {
        for u in 1..v {
            if a.contains(u, v) && a.contains(v, u) {
                rep[(v - 1) as usize] = rep[(u - 1) as usize];
                break;
            }
        }
    }
    let mut counts = std::collections::BTreeMap::new();
    for r in rep {
        *counts.entry(r).or_insert(0u32) += 1;
    }
    let mut sizes: Vec<u32> = counts.into_values().collect();
    sizes.sort_unstable();
    sizes
}

/// The lexicographic product of digraph algebras: vertex set
/// `[a.n] × [b.n]` flattened row-major, with `((i₁,i₂),(j₁,j₂))` an edge
/// iff `i₁ = j₁` and `(i₂,j₂)` is an edge of `b`, or `i₁ ≠ j₁` and
/// `(i₁,j₁)` is an edge of `a`. Requires `a` triangular; the result is
/// triangular iff `b` is.
pub fn lex_product(
    a: &DigraphAlgebra,
    b: &DigraphAlgebra,
) -> Result<DigraphAlgebra, AlgebraError> {
    if let Some((i, j)) = a.witness_not_triangular() {
        return Err(AlgebraError::NotTriangular { i, j });
    }
    let an = a.n();
    let bn = b.n();
    let total = an
        .checked_mul(bn)
        .expect("product vertex count overflows u32");
    let flat = |i1: u32, i2: u32| (i1 - 1) * bn + i2;
    let mut edges = Vec::new();
    for i1 in 1..=an {
        for j1 in 1..=an {
            if i1 == j1 {
                for &(i2, j2) in b.edges() {
                    edges.push((flat(i1, i2), flat(j1, j2)));
                }
            } else if a.contains(i1, j1) {
                for i2 in 1..=bn {
                    for j2 in 1..=bn {
                        edges.push((flat(i1, i2), flat(j1, j2)));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    let mut product = DigraphAlgebra {
        n: total,
        edges,
        triangular: b.is_triangular(),
        labels: None,
    };
    if let (Some(la), Some(lb)) = (a.labels(), b.labels()) {
        let mut labels = Vec::with_capacity((an * bn) as usize);
        for i1 in 1..=an {
            for i2 in 1..=bn {
                let mut l = la[(i1 - 1) as usize].clone();
                l.extend_from_slice(&lb[(i2 - 1) as usize]);
                labels.push(l);
            }
        }
        product.labels = Some(labels);
    }
    debug_assert_eq!(
        product.triangular,
        product.witness_not_triangular().is_none()
    );
    Ok(product)
}

/// The radical of `lex_product(a, b)` read off from the factors:
/// `Δ(a) ⊗ rad(b)` together with `a⁰ ⊗ (full relation on [b.n])`.
pub fn stage_radical_formula(
    a: &DigraphAlgebra,
    b: &DigraphAlgebra,
) -> Result<Ideal, AlgebraError> {
    let product = Arc::new(lex_product(a, b)?);
    let bn = b.n();
    let flat = |i1: u32, i2: u32| (i1 - 1) * bn + i2;
    let rad_b: Vec<(u32, u32)> = b
        .edges()
        .iter()
        .filter(|&&(i, j)| !b.contains(j, i))
        .copied()
        .collect();
    let mut edges = Vec::new();
    for i1 in 1..=a.n() {
        for &(k, l) in &rad_b {
            edges.push((flat(i1, k), flat(i1, l)));
        }
    }
    for &(i1, j1) in a.edges() {
        if i1 == j1 {
            continue;
        }
        for k in 1..=bn {
            for l in 1..=bn {
                edges.push((flat(i1, k), flat(j1, l)));
            }
        }
    }
    edges.sort_unstable();
    Ok(Ideal {
        home: product,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(a: DigraphAlgebra) -> Arc<DigraphAlgebra> {
        Arc::new(a)
    }

    #[test]
    fn triangular_sizes() {
        assert_eq!(triangular_algebra(1).unwrap().dim(), 1);
        assert_eq!(triangular_algebra(3).unwrap().dim(), 6);
        assert_eq!(triangular_algebra(0), Err(AlgebraError::EmptyAlgebra));
    }

    #[test]
    fn from_relation_validates() {
        let d2 = from_relation(2, &[(1, 1), (2, 2)]).unwrap();
        assert!(d2.is_triangular());
        assert_eq!(d2.dim(), 2);

        let m2 = from_relation(2, &[(1, 1), (2, 2), (1, 2), (2, 1)]).unwrap();
        assert!(!m2.is_triangular());

        assert_eq!(
            from_relation(3, &[(1, 1), (2, 2), (3, 3), (1, 2), (2, 3)]),
            Err(AlgebraError::NotTransitive { i: 1, j: 2, k: 3 })
        );
        assert_eq!(
            from_relation(2, &[(1, 1), (1, 2)]),
            Err(AlgebraError::NotReflexive { v: 2 })
        );
    }

    #[test]
    fn strict_ideal_examples() {
        let t3 = arc(triangular_algebra(3).unwrap());
        let ideal = strict_ideal(&t3).unwrap();
        assert_eq!(ideal.edges(), &[(1, 2), (1, 3), (2, 3)]);
        ideal.validate().unwrap();

        let d2 = arc(diagonal_algebra(2).unwrap());
        assert_eq!(strict_ideal(&d2).unwrap().dim(), 0);

        let m2 = arc(full_matrix_algebra(2).unwrap());
        assert_eq!(
            strict_ideal(&m2),
            Err(AlgebraError::NotTriangular { i: 1, j: 2 })
        );
    }

    #[test]
    fn product_of_triangulars_is_triangular_of_product_size() {
        let t2 = triangular_algebra(2).unwrap();
        let p = lex_product(&t2, &t2).unwrap();
        assert_eq!(p, triangular_algebra(4).unwrap());
    }

    #[test]
    fn one_point_factor_is_identity() {
        let t1 = triangular_algebra(1).unwrap();
        let b = full_matrix_algebra(3).unwrap();
        assert_eq!(lex_product(&t1, &b).unwrap().edges(), b.edges());
    }

    #[test]
    fn product_is_not_commutative() {
        let t2 = triangular_algebra(2).unwrap();
        let d2 = diagonal_algebra(2).unwrap();
        let td = lex_product(&t2, &d2).unwrap();
        let dt = lex_product(&d2, &t2).unwrap();
        assert_eq!(td.dim(), 8);
        assert_eq!(dt.dim(), 6);
        // Cross-check with the dimension formula
        // dim = dim(diag a)·dim(b) + dim(a⁰)·b.n².
        assert_eq!(td.dim(), 2 * 2 + 1 * 4);
        assert_eq!(dt.dim(), 2 * 3 + 0);
    }

    #[test]
    fn product_requires_triangular_first_factor() {
        let m2 = full_matrix_algebra(2).unwrap();
        let t2 = triangular_algebra(2).unwrap();
        assert!(matches!(
            lex_product(&m2, &t2),
            Err(AlgebraError::NotTriangular { .. })
        ));
    }

    #[test]
    fn radical_of_triangular_is_strict_part() {
        for n in 1..=5 {
            let t = arc(triangular_algebra(n).unwrap());
            let rad = radical_combinatorial(&t);
            assert_eq!(rad.dim() as u32, n * (n - 1) / 2);
            rad.validate().unwrap();
        }
        let m3 = arc(full_matrix_algebra(3).unwrap());
        assert_eq!(radical_combinatorial(&m3).dim(), 0);
    }

    #[test]
    fn radical_is_nilpotent_with_index_at_most_n() {
        let compose = |x: &[(u32, u32)], y: &[(u32, u32)]| -> Vec<(u32, u32)> {
            let mut out: Vec<(u32, u32)> = x
                .iter()
                .flat_map(|&(i, j)| {
                    y.iter()
                        .filter(move |&&(a, _)| a == j)
                        .map(move |&(_, b)| (i, b))
                })
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        };
        for pairs in [
            vec![(1, 1), (2, 2), (3, 3), (1, 2), (1, 3), (2, 3)],
            vec![(1, 1), (2, 2), (3, 3), (1, 2), (2, 1), (1, 3), (2, 3)],
        ] {
            let a = arc(from_relation(3, &pairs).unwrap());
            let rad = radical_combinatorial(&a);
            let mut power = rad.edges().to_vec();
            let mut index = 1;
            while !power.is_empty() {
                power = compose(&power, rad.edges());
                index += 1;
                assert!(index <= a.n() + 1);
            }
            assert!(index <= a.n());
        }
    }

    #[test]
    fn quotient_blocks() {
        assert_eq!(semisimple_quotient(&triangular_algebra(3).unwrap()), vec![1, 1, 1]);
        assert_eq!(semisimple_quotient(&full_matrix_algebra(3).unwrap()), vec![3]);
        let t2 = triangular_algebra(2).unwrap();
        let m2 = full_matrix_algebra(2).unwrap();
        assert_eq!(semisimple_quotient(&lex_product(&t2, &m2).unwrap()), vec![2, 2]);
    }

    #[test]
    fn quotient_dimension_identity() {
        for pairs in [
            vec![(1, 1), (2, 2), (3, 3), (1, 2), (1, 3), (2, 3)],
            vec![(1, 1), (2, 2), (3, 3), (1, 2), (2, 1), (1, 3), (2, 3)],
            vec![(1, 1), (2, 2)],
        ] {
            let n = pairs.iter().map(|&(i, j)| i.max(j)).max().unwrap();
            let a = arc(from_relation(n, &pairs).unwrap());
            let rad = radical_combinatorial(&a);
            let blocks = semisimple_quotient(&a);
            let sq: usize = blocks.iter().map(|&b| (b * b) as usize).sum();
            assert_eq!(a.dim(), rad.dim() + sq);
        }
    }

    #[test]
    fn stage_radical_formula_examples() {
        let t2 = triangular_algebra(2).unwrap();
        let formula = stage_radical_formula(&t2, &t2).unwrap();
        assert_eq!(formula.dim(), 6);
        assert_eq!(
            formula.edges(),
            radical_combinatorial(formula.home()).edges()
        );

        let m2 = full_matrix_algebra(2).unwrap();
        let formula = stage_radical_formula(&t2, &m2).unwrap();
        assert_eq!(formula.dim(), 4);
        assert_eq!(
            formula.edges(),
            radical_combinatorial(formula.home()).edges()
        );

        let t1 = triangular_algebra(1).unwrap();
        let b = from_relation(3, &[(1, 1), (2, 2), (3, 3), (1, 2)]).unwrap();
        let formula = stage_radical_formula(&t1, &b).unwrap();
        assert_eq!(formula.edges(), &[(1, 2)]);
    }

    #[test]
    fn closure_helper_closes() {
        let closed = reflexive_transitive_closure(3, &[(1, 2), (2, 3)]);
        let a = from_relation(3, &closed).unwrap();
        assert!(a.contains(1, 3));
        assert_eq!(a.dim(), 6);
    }
}
