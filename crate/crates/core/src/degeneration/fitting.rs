use num::Zero;

use super::keep_unity;
use crate::algebra::{Algebra, LinearMap};
use crate::error::{Error, Result};
use crate::hochschild::Cochain;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// The Fitting decomposition `V = V_R ⊕ V_N` of a linear map `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingData {
    /// `im φ^q`, on which `φ` is invertible.
    pub regular: Vec<Vec<Scalar>>,
    /// `ker φ^q`, on which `φ` is nilpotent.
    pub nilpotent: Vec<Vec<Scalar>>,
    /// Least `q` with `ker φ^q = ker φ^{q+1}`; `0` when `φ` is invertible.
    pub index: usize,
    /// `φ|_{V_R}` in the basis `regular`.
    pub phi_regular: Matrix,
    /// `φ|_{V_N}` in the basis `nilpotent`.
    pub phi_nilpotent: Matrix,
    /// Projection onto `V_R` along `V_N`.
    pub proj_regular: Matrix,
    /// Projection onto `V_N` along `V_R`.
    pub proj_nilpotent: Matrix,
}

pub fn fitting(phi: &LinearMap) -> FittingData {
    let m = phi.matrix();
    let n = m.nrows();
    let mut power = Matrix::identity(n);
    let mut rank = n;
    let mut q = 0;
    loop {
        let next = power.mul(m);
        let next_rank = next.rank();
        if next_rank == rank {
            break;
        }
        power = next;
        rank = next_rank;
        q += 1;
    }
    let regular: Vec<Vec<Scalar>> = Subspace::image(&power).basis().to_vec();
    let nilpotent = power.nullspace();
    let r = regular.len();
    let mut cols = regular.clone();
    cols.extend(nilpotent.iter().cloned());
    let p = Matrix::from_columns(n, &cols);
    let p_inv = p.inverse().expect("Fitting decomposition is direct");
    let block = p_inv.mul(m).mul(&p);
    let sub = |rows: std::ops::Range<usize>| -> Matrix {
        Matrix::from_rows(rows.clone().map(|i| rows.clone().map(|j| block[(i, j)].clone()).collect()).collect())
    };
    let select = |keep: std::ops::Range<usize>| -> Matrix {
        let d: Vec<Scalar> = (0..n)
            .map(|i| if keep.contains(&i) { Scalar::from_integer(1.into()) } else { Scalar::zero() })
            .collect();
        p.mul(&Matrix::diagonal(&d)).mul(&p_inv)
    };
    FittingData {
        phi_regular: sub(0..r),
        phi_nilpotent: sub(r..n),
        proj_regular: select(0..r),
        proj_nilpotent: select(r..n),
        regular,
        nilpotent,
        index: q,
    }
}

impl FittingData {
    /// The map equal to `(φ|_{V_R})^{-1}` on `V_R` and zero on `V_N`.
    pub fn regular_inverse(&self, phi: &LinearMap) -> Matrix {
        let n = phi.dim();
        let r = self.regular.len();
        let mut cols = self.regular.clone();
        cols.extend(self.nilpotent.iter().cloned());
        let p = Matrix::from_columns(n, &cols);
        let p_inv = p.inverse().expect("direct");
        let inv_r = self.phi_regular.inverse().expect("φ is invertible on V_R");
        let mut block = Matrix::zeros(n, n);
        for i in 0..r {
            for j in 0..r {
                block[(i, j)] = inv_r[(i, j)].clone();
            }
        }
        p.mul(&block).mul(&p_inv)
    }
}

/// The limit of `(φ + t·id) · A` at `t = 0` by the closed formula.
///
/// With `A = μ`, `B = μ∘(φ×id) + μ∘(id×φ)`, `C = μ∘(φ×φ)` and `_N`, `_R`
/// the Fitting projections, the limit exists iff
/// `φ² A_N - φ B_N + C_N = 0`, and then equals
/// `(φ|_{V_R})^{-1} C_R + B_N - φ A_N`.
pub fn phi_degeneration(phi: &LinearMap, alg: &Algebra) -> Result<Algebra> {
    let n = alg.dim();
    if phi.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: phi.dim(),
        });
    }
    let fit = fitting(phi);
    let m = phi.matrix();
    let id = Matrix::identity(n);
    let a = alg.structure().clone();
    let b = a.transform(&id, &[m, &id]).add(&a.transform(&id, &[&id, m]));
    let c = a.transform(&id, &[m, m]);
    let pn = &fit.proj_nilpotent;
    let a_n = a.postcompose(pn);
    let b_n = b.postcompose(pn);
    let c_n = c.postcompose(pn);
    let residual: Cochain = a_n.postcompose(&m.mul(m)).sub(&b_n.postcompose(m)).add(&c_n);
    if !residual.is_zero() {
        return Err(Error::ConditionFails {
            residual: Box::new(residual),
        });
    }
    let limit = c
        .postcompose(&fit.regular_inverse(phi))
        .add(&b_n)
        .sub(&a_n.postcompose(m));
    let out = Algebra::new(limit, None)?;
    if !out.is_associative() {
        return Err(Error::InternalInconsistency("φ-degeneration is not associative".into()));
    }
    Ok(keep_unity(out, alg.unity()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry;
    use crate::degeneration::{conjugate_family, limit_at_zero, Limit, ParamLinearMap};
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn invertible_has_trivial_nilpotent_part() {
        let f = fitting(&LinearMap::new(m(&[&[2, 1], &[0, 3]])).unwrap());
        assert_eq!(f.index, 0);
        assert!(f.nilpotent.is_empty());
        assert_eq!(f.regular.len(), 2);
    }

    #[test]
    fn zero_map_is_all_nilpotent() {
        let f = fitting(&LinearMap::new(Matrix::zeros(3, 3)).unwrap());
        assert_eq!(f.index, 1);
        assert!(f.regular.is_empty());
        assert_eq!(f.nilpotent.len(), 3);
        assert!(f.phi_nilpotent.is_zero());
    }

    #[test]
    fn jordan_block_plus_identity_splits() {
        // J_2(0) ⊕ (1)
        let phi = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 1]]);
        let f = fitting(&LinearMap::new(phi.clone()).unwrap());
        assert_eq!(f.index, 2);
        assert_eq!(f.regular, vec![vec![int(0), int(0), int(1)]]);
        assert_eq!(Subspace::spanned_by(3, f.nilpotent.clone()).dim(), 2);
        assert!(Subspace::spanned_by(3, f.nilpotent.clone()).contains(&[int(1), int(0), int(0)]));
        assert!(Subspace::spanned_by(3, f.nilpotent.clone()).contains(&[int(0), int(1), int(0)]));
        assert_eq!(f.phi_regular, m(&[&[1]]));
        assert!(f.phi_nilpotent.mul(&f.phi_nilpotent).is_zero());
        assert!(!f.phi_nilpotent.is_zero());
        assert_eq!(f.proj_regular.add(&f.proj_nilpotent), Matrix::identity(3));
    }

    #[test]
    fn projection_to_a_point_degenerates_a1() {
        let phi = LinearMap::new(m(&[&[1, 0], &[0, 0]])).unwrap();
        let alg = registry::a1();
        let d = phi_degeneration(&phi, &alg).unwrap();
        assert_eq!(d, registry::a0());
        let lim = limit_at_zero(&conjugate_family(&ParamLinearMap::shifted(phi.matrix()), &alg).unwrap()).unwrap();
        assert_eq!(lim, Limit::Algebra(d));
    }

    #[test]
    fn zero_map_gives_the_zero_product() {
        let phi = LinearMap::new(Matrix::zeros(3, 3)).unwrap();
        let d = phi_degeneration(&phi, &registry::upper_triangular()).unwrap();
        assert!(d.structure().is_zero());
        assert_eq!(d.unity(), None);
    }

    #[test]
    fn failing_condition_matches_poles() {
        // φ(e_0) = 0, φ(e_1) = e_0 on A0: the family (φ + t)·A0 has a pole.
        let phi = LinearMap::new(m(&[&[0, 1], &[0, 0]])).unwrap();
        let alg = registry::a0();
        let err = phi_degeneration(&phi, &alg).unwrap_err();
        assert!(matches!(err, Error::ConditionFails { .. }));
        let lim = limit_at_zero(&conjugate_family(&ParamLinearMap::shifted(phi.matrix()), &alg).unwrap()).unwrap();
        assert!(matches!(lim, Limit::Poles(_)));
    }
}
