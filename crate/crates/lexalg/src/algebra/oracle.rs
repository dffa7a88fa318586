use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::digraph::{AlgebraError, DigraphAlgebra};
use super::element::{Coef, Element};

type Big = Ratio<BigInt>;

/// Size cap for the dense trace-form computation.
pub const DEFAULT_ORACLE_CAP: u32 = 6;

/// Independent ground truth for the radical, with the default size cap.
pub fn radical_trace_oracle(a: &Arc<DigraphAlgebra>) -> Result<Vec<Element>, AlgebraError> {
    radical_trace_oracle_with_cap(a, DEFAULT_ORACLE_CAP)
}

/// Computes a basis of the radical as the kernel of the trace form of the
/// left regular representation: `{x : trace(L_x L_y) = 0 for all y}`.
///
/// This is valid over a characteristic-zero field and uses nothing but
/// the structure constants of the edge basis, so it is independent of the
/// reversed-edge description the rest of the crate works with. The
/// elimination runs over arbitrary-precision rationals.
pub fn radical_trace_oracle_with_cap(
    a: &Arc<DigraphAlgebra>,
    cap: u32,
) -> Result<Vec<Element>, AlgebraError> {
    if a.n() > cap {
        return Err(AlgebraError::OracleSizeCap { n: a.n(), cap });
    }
    let edges = a.edges();
    let d = edges.len();

    // e_k · e_m as an optional basis index.
    let product = |k: usize, m: usize| -> Option<usize> {
        let (i, j) = edges[k];
        let (r, c) = edges[m];
        if j == r {
            let idx = a.edge_index(i, c);
            debug_assert!(idx.is_some(), "relation should be closed under products");
            idx
        } else {
            None
        }
    };

    // trace(L_{e_s}) = #{r : e_s · e_r = e_r}.
    let mut trace_of = vec![BigInt::zero(); d];
    for s in 0..d {
        let mut t = BigInt::zero();
        for r in 0..d {
            if product(s, r) == Some(r) {
                t += 1;
            }
        }
        trace_of[s] = t;
    }

    // Gram matrix of the trace form: G[k][m] = trace(L_{e_k e_m}).
    let mut gram = vec![vec![Big::zero(); d]; d];
    for k in 0..d {
        for m in 0..d {
            if let Some(s) = product(k, m) {
                gram[k][m] = Big::from(trace_of[s].clone());
            }
        }
    }

    let kernel = kernel_basis(&gram);
    kernel
        .into_iter()
        .map(|vec| {
            let terms = vec
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(idx, c)| Ok((edges[idx], big_to_coef(&c)?)))
                .collect::<Result<Vec<_>, AlgebraError>>()?;
            Element::from_terms(a, terms)
        })
        .collect()
}

fn big_to_coef(value: &Big) -> Result<Coef, AlgebraError> {
    let numer = i64::try_from(value.numer()).map_err(|_| AlgebraError::CoefficientOverflow)?;
    let denom = i64::try_from(value.denom()).map_err(|_| AlgebraError::CoefficientOverflow)?;
    Ok(Coef::new(numer, denom))
}

/// Basis of `{x : xᵀ M = 0}` (equivalently `M x = 0` for symmetric `M`)
/// by exact Gauss-Jordan elimination.
fn kernel_basis(matrix: &[Vec<Big>]) -> Vec<Vec<Big>> {
    let rows = matrix.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<Big>> = matrix.to_vec();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in 0..cols {
            m[row][c] = &m[row][c] / &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..cols {
                    let sub = &factor * &m[row][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }

    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Big::zero(); cols];
        v[free] = Big::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Coefficient vector of an element over its home's edge basis.
pub fn element_coordinates(x: &Element) -> Vec<Coef> {
    let home = x.home();
    let mut v = vec![Coef::zero(); home.dim()];
    for (unit, c) in x.terms() {
        let idx = home
            .edge_index(unit.row, unit.col)
            .expect("element terms lie in the relation");
        v[idx] = *c;
    }
    v
}

/// Whether two families of coefficient vectors span the same subspace,
/// decided by exact rank computations.
pub fn spans_equal(dim: usize, a: &[Vec<Coef>], b: &[Vec<Coef>]) -> bool {
    let ra = rank(dim, a.iter());
    let rb = rank(dim, b.iter());
    let rab = rank(dim, a.iter().chain(b.iter()));
    ra == rb && rb == rab
}

fn rank<'a>(dim: usize, vectors: impl Iterator<Item = &'a Vec<Coef>>) -> usize {
    let mut m: Vec<Vec<Big>> = vectors
        .map(|v| {
            assert_eq!(v.len(), dim);
            v.iter()
                .map(|c| Big::new(BigInt::from(*c.numer()), BigInt::from(*c.denom())))
                .collect()
        })
        .collect();
    let rows = m.len();
    let mut r = 0;
    for col in 0..dim {
        let pivot = (r..rows).find(|&i| !m[i][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][col].clone();
        for c in col..dim {
            m[r][c] = &m[r][c] / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for c in col..dim {
                    let sub = &factor * &m[r][c];
                    m[i][c] = &m[i][c] - &sub;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
