//! Algebras given by structure constants, and the change-of-basis action.

mod graded;
pub mod registry;

pub use graded::{graded_algebra, rees_fiber, rees_isomorphism, AdaptedBasis, Filtration};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::hochschild::Cochain;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A bilinear multiplication on `K^n`, stored as its structure constants.
///
/// Associativity is not part of the type: raw tensors are allowed and
/// checked by [`associator`]. The unity index is a claim that
/// [`check_unity`] verifies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    mult: Cochain,
    unity: Option<usize>,
}

impl Algebra {
    pub fn new(mult: Cochain, unity: Option<usize>) -> Result<Algebra> {
        if mult.degree() != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                found: mult.degree(),
            });
        }
        if mult.dim() == 0 {
            return Err(Error::InvalidInput("algebra of dimension 0".into()));
        }
        if let Some(u) = unity {
            if u >= mult.dim() {
                return Err(Error::InvalidInput(format!(
                    "unity index {u} out of range for dimension {}",
                    mult.dim()
                )));
            }
        }
        Ok(Algebra { mult, unity })
    }

    /// Build from nonzero structure constants `(i, j, k, C_ij^k)`.
    pub fn from_constants(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        unity: Option<usize>,
    ) -> Result<Algebra> {
        let mut mult = Cochain::zero(2, dim);
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidInput(format!(
                    "structure constant index ({i},{j},{k}) out of range for dimension {dim}"
                )));
            }
            let p = mult.position(&[i, j], k);
            let cur = mult.coeffs()[p].clone();
            mult.set(&[i, j], k, cur + c);
        }
        Algebra::new(mult, unity)
    }

    /// The zero multiplication (no unity).
    pub fn zero_product(dim: usize) -> Algebra {
        Algebra::new(Cochain::zero(2, dim), None).expect("valid shape")
    }

    pub fn dim(&self) -> usize {
        self.mult.dim()
    }

    pub fn structure(&self) -> &Cochain {
        &self.mult
    }

    pub fn into_structure(self) -> Cochain {
        self.mult
    }

    pub fn unity(&self) -> Option<usize> {
        self.unity
    }

    pub fn with_unity(mut self, unity: Option<usize>) -> Result<Algebra> {
        if let Some(u) = unity {
            if u >= self.dim() {
                return Err(Error::InvalidInput(format!("unity index {u} out of range")));
            }
        }
        self.unity = unity;
        Ok(self)
    }

    /// `C_ij^k`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.mult.get(&[i, j], k)
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.mult.eval(&[x, y])
    }

    /// Matrix of `y -> x y`.
    pub fn left_multiplication(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (k, c) in self.mult.on_basis(&[i, j]).iter().enumerate() {
                    if !c.is_zero() {
                        m[(k, j)] += xi * c;
                    }
                }
            }
        }
        m
    }

    /// Matrix of `y -> y x`.
    pub fn right_multiplication(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for (j, xj) in x.iter().enumerate() {
                if xj.is_zero() {
                    continue;
                }
                for (k, c) in self.mult.on_basis(&[i, j]).iter().enumerate() {
                    if !c.is_zero() {
                        m[(k, i)] += xj * c;
                    }
                }
            }
        }
        m
    }

    pub fn is_associative(&self) -> bool {
        associator(self).is_zero()
    }

    pub fn require_associative(&self) -> Result<()> {
        if self.is_associative() {
            Ok(())
        } else {
            Err(Error::NotAssociative)
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        unit_vector(self.dim(), i)
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// An invertible-or-not linear map of `K^n`, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap(Matrix);

impl LinearMap {
    pub fn new(m: Matrix) -> Result<LinearMap> {
        if !m.is_square() {
            return Err(Error::InvalidInput(format!(
                "linear map must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(LinearMap(m))
    }

    pub fn identity(n: usize) -> LinearMap {
        LinearMap(Matrix::identity(n))
    }

    pub fn diagonal(entries: &[Scalar]) -> LinearMap {
        LinearMap(Matrix::diagonal(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.0.mul_vec(x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap(self.0.mul(&other.0))
    }

    pub fn determinant(&self) -> Scalar {
        self.0.determinant()
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        self.0.inverse().map(LinearMap).ok_or(Error::SingularMap)
    }
}

/// `(x, y, z) -> (x y) z - x (y z)`.
pub fn associator(alg: &Algebra) -> Cochain {
    let n = alg.dim();
    let c = alg.structure();
    Cochain::from_fn(3, n, |idx, s| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = Scalar::zero();
        for l in 0..n {
            let a = c.get(&[i, j], l);
            if !a.is_zero() {
                acc += a * c.get(&[l, k], s);
            }
            let b = c.get(&[j, k], l);
            if !b.is_zero() {
                acc -= b * c.get(&[i, l], s);
            }
        }
        acc
    })
}

/// Whether the claimed unity `e_u` satisfies `C_ui^j = C_iu^j = δ_ij`.
/// Returns false when no unity is claimed.
pub fn check_unity(alg: &Algebra) -> bool {
    let Some(u) = alg.unity() else {
        return false;
    };
    is_unity_vector(alg, u)
}

pub(crate) fn is_unity_vector(alg: &Algebra, u: usize) -> bool {
    let n = alg.dim();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let delta = if i == j { Scalar::one() } else { Scalar::zero() };
            *alg.constant(u, i, j) == delta && *alg.constant(i, u, j) == delta
        })
    })
}

/// The transported multiplication `(X, Y) -> f^{-1}(mu(f X, f Y))`.
///
/// The unity index is kept only if the basis vector with that index is still
/// a unity of the result.
pub fn apply_basis_change(f: &LinearMap, alg: &Algebra) -> Result<Algebra> {
    if f.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: f.dim(),
        });
    }
    let inv = f.inverse()?;
    let mult = alg
        .structure()
        .transform(inv.matrix(), &[f.matrix(), f.matrix()]);
    let mut out = Algebra::new(mult, alg.unity())?;
    if out.unity.is_some() && !check_unity(&out) {
        out.unity = None;
    }
    Ok(out)
}

pub fn is_idempotent(alg: &Algebra, x: &[Scalar]) -> bool {
    x.len() == alg.dim() && alg.multiply(x, x) == x
}
