//! Named example algebras. Index 0 is the unity throughout.

use num::{One, Zero};

use super::Algebra;
use crate::scalar::{int, Scalar};

fn unital(dim: usize, products: impl IntoIterator<Item = (usize, usize, usize, Scalar)>) -> Algebra {
    let mut entries: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    for i in 0..dim {
        entries.push((0, i, i, Scalar::one()));
        if i != 0 {
            entries.push((i, 0, i, Scalar::one()));
        }
    }
    entries.extend(products);
    Algebra::from_constants(dim, entries, Some(0)).expect("registry algebra is well formed")
}

/// The unital algebra whose products among non-unity basis vectors vanish.
pub fn null_algebra(dim: usize) -> Algebra {
    unital(dim, [])
}

/// `K[x]/(x^2)`, the 2-dimensional null algebra.
pub fn a0() -> Algebra {
    null_algebra(2)
}

/// `K x K` in the basis `(1, e)` with `e^2 = e`.
pub fn a1() -> Algebra {
    unital(2, [(1, 1, 1, Scalar::one())])
}

/// `K[x]/(x^n)` in the basis `(1, x, ..., x^{n-1})`.
pub fn truncated_polynomial(dim: usize) -> Algebra {
    let mut products = Vec::new();
    for i in 1..dim {
        for j in 1..dim {
            if i + j < dim {
                products.push((i, j, i + j, Scalar::one()));
            }
        }
    }
    unital(dim, products)
}

/// `K^n` in the basis `(1, e_1, ..., e_{n-1})` with orthogonal idempotents
/// `e_i`.
pub fn diagonal(dim: usize) -> Algebra {
    unital(dim, (1..dim).map(|i| (i, i, i, Scalar::one())))
}

/// Upper triangular 2x2 matrices in the basis `(1, E12, E22)`.
pub fn upper_triangular() -> Algebra {
    unital(
        3,
        [
            (1, 2, 1, Scalar::one()), // E12 E22 = E12
            (2, 2, 2, Scalar::one()), // E22 E22 = E22
        ],
    )
}

/// `K x K[x]/(x^2)` in the basis `(1, e, x)` with `e = (1, 0)`, `x = (0, x)`.
pub fn split_dual_numbers() -> Algebra {
    unital(3, [(1, 1, 1, Scalar::one())])
}

/// Full 2x2 matrices in the basis `(1, E12, E21, E22)`.
pub fn matrices2() -> Algebra {
    let one = Scalar::one;
    unital(
        4,
        [
            (1, 2, 0, one()),    // E12 E21 = E11 = 1 - E22
            (1, 2, 3, -one()),
            (2, 1, 3, one()),    // E21 E12 = E22
            (1, 3, 1, one()),    // E12 E22 = E12
            (3, 2, 2, one()),    // E22 E21 = E21
            (3, 3, 3, one()),    // E22 E22 = E22
        ],
    )
}

/// `K<x, y>/(x^2, y^2, yx - t xy)` in the basis `(1, x, y, xy)`.
pub fn quantum_plane(t: &Scalar) -> Algebra {
    let mut products = vec![(1, 2, 3, Scalar::one())];
    if !t.is_zero() {
        products.push((2, 1, 3, t.clone()));
    }
    unital(4, products)
}

/// Every registry algebra with a stable name, dimensions 1 to 4.
pub fn all() -> Vec<(String, Algebra)> {
    vec![
        ("k".into(), null_algebra(1)),
        ("a0".into(), a0()),
        ("a1".into(), a1()),
        ("null3".into(), null_algebra(3)),
        ("poly3".into(), truncated_polynomial(3)),
        ("diag3".into(), diagonal(3)),
        ("triangular2".into(), upper_triangular()),
        ("split_dual".into(), split_dual_numbers()),
        ("null4".into(), null_algebra(4)),
        ("poly4".into(), truncated_polynomial(4)),
        ("diag4".into(), diagonal(4)),
        ("matrices2".into(), matrices2()),
        ("quantum_plane_2".into(), quantum_plane(&int(2))),
    ]
}

pub fn by_name(name: &str) -> Option<Algebra> {
    all().into_iter().find(|(n, _)| n == name).map(|(_, a)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_unity;

    #[test]
    fn registry_is_associative_and_unital() {
        for (name, alg) in all() {
            assert!(alg.is_associative(), "{name} not associative");
            assert!(check_unity(&alg), "{name} unity claim fails");
        }
    }

    #[test]
    fn matrix_units_multiply_correctly() {
        let m = matrices2();
        // E11 = 1 - E22 is idempotent.
        let e11 = vec![int(1), int(0), int(0), int(-1)];
        assert_eq!(m.multiply(&e11, &e11), e11);
        // E21 E12 = E22
        assert_eq!(m.multiply(&m.basis_vector(2), &m.basis_vector(1)), m.basis_vector(3));
    }
}
