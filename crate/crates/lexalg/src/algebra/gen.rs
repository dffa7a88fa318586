//! Seeded generators and exhaustive enumeration of small preorders, used
//! by the property tests, the acceptance suite and the benches.

use rand::Rng;

use super::digraph::{
    from_relation, reflexive_transitive_closure, transitive_witness, DigraphAlgebra,
};

/// Every reflexive transitive relation on `{1..n}`, for small `n`.
/// Counts: 1, 4, 29, 355 for n = 1..4.
pub fn enumerate_preorders(n: u32) -> Vec<DigraphAlgebra> {
    assert!(n >= 1 && n <= 4, "exhaustive enumeration is for n <= 4");
    let off_diag: Vec<(u32, u32)> = (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << off_diag.len()) {
        let mut edges: Vec<(u32, u32)> = (1..=n).map(|i| (i, i)).collect();
        for (bit, &pair) in off_diag.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                edges.push(pair);
            }
        }
        edges.sort_unstable();
        if transitive_witness(&edges).is_none() {
            out.push(from_relation(n, &edges).expect("validated above"));
        }
    }
    out
}

/// A random preorder: a sparse random relation, closed reflexively and
/// transitively.
pub fn random_preorder(n: u32, rng: &mut impl Rng) -> DigraphAlgebra {
    let mut pairs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j && rng.random_bool(0.3) {
                pairs.push((i, j));
            }
        }
    }
    let closed = reflexive_transitive_closure(n, &pairs);
    from_relation(n, &closed).expect("closure is a preorder")
}

/// A random triangular digraph algebra: a random subset of the strictly
/// upper pairs, transitively closed (closure preserves antisymmetry).
pub fn random_triangular(n: u32, rng: &mut impl Rng) -> DigraphAlgebra {
    let mut pairs = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if rng.random_bool(0.5) {
                pairs.push((i, j));
            }
        }
    }
    let closed = reflexive_transitive_closure(n, &pairs);
    let a = from_relation(n, &closed).expect("closure is a preorder");
    debug_assert!(a.is_triangular());
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn preorder_counts() {
        assert_eq!(enumerate_preorders(1).len(), 1);
        assert_eq!(enumerate_preorders(2).len(), 4);
        assert_eq!(enumerate_preorders(3).len(), 29);
        assert_eq!(enumerate_preorders(4).len(), 355);
    }

    #[test]
    fn generators_are_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            assert_eq!(random_preorder(5, &mut a), random_preorder(5, &mut b));
        }
    }

    #[test]
    fn random_triangular_is_triangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            assert!(random_triangular(4, &mut rng).is_triangular());
        }
    }
}
