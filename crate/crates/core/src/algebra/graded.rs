//! Filtered algebras, their associated graded algebra and the fibres of the
//! Rees family `A_t = sum_p A_p t^p`.

use num::Zero;
use serde::{Deserialize, Serialize};

use super::{apply_basis_change, check_unity, unit_vector, Algebra, LinearMap};
use crate::error::{Error, Result};
use crate::hochschild::Cochain;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// An increasing chain `A_0 ⊂ A_1 ⊂ ... ⊂ A_r = V`, each step given by a
/// spanning list of coordinate vectors. `A_s = V` for `s >= r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filtration {
    #[serde(with = "steps_serde")]
    steps: Vec<Vec<Vec<Scalar>>>,
}

mod steps_serde {
    use crate::scalar::Scalar;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(steps: &[Vec<Vec<Scalar>>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<Vec<String>>> = steps
            .iter()
            .map(|st| st.iter().map(|r| r.iter().map(crate::scalar::format).collect()).collect())
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<Scalar>>>, D::Error> {
        let v = Vec::<Vec<Vec<String>>>::deserialize(d)?;
        v.iter()
            .map(|st| {
                st.iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| crate::scalar::parse(x).map_err(serde::de::Error::custom))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

impl Filtration {
    pub fn new(steps: Vec<Vec<Vec<Scalar>>>) -> Filtration {
        Filtration { steps }
    }

    /// `A_0` spanned by the first `first` coordinate vectors, each later step
    /// adding the next one.
    pub fn by_coordinate_prefix(dim: usize, first: usize) -> Filtration {
        let steps = (first..=dim)
            .map(|m| (0..m).map(|i| unit_vector(dim, i)).collect())
            .collect();
        Filtration { steps }
    }

    /// The single-step filtration `A_0 = V`.
    pub fn trivial(dim: usize) -> Filtration {
        Filtration {
            steps: vec![(0..dim).map(|i| unit_vector(dim, i)).collect()],
        }
    }

    pub fn steps(&self) -> &[Vec<Vec<Scalar>>] {
        &self.steps
    }

    /// Check the chain shape and choose complements, pivoting each step's
    /// spanning vectors in input order.
    pub fn adapted_basis(&self, dim: usize) -> Result<AdaptedBasis> {
        if self.steps.is_empty() {
            return Err(Error::InvalidFiltration("no steps".into()));
        }
        let mut chosen: Vec<Vec<Scalar>> = Vec::new();
        let mut degrees = Vec::new();
        let mut prev_dim = None;
        for (p, step) in self.steps.iter().enumerate() {
            if let Some(v) = step.iter().find(|v| v.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let span = Subspace::spanned_by(dim, step.clone());
            if !chosen.iter().all(|v| span.contains(v)) {
                return Err(Error::InvalidFiltration(format!("A_{} is not contained in A_{p}", p - 1)));
            }
            if prev_dim.is_some_and(|d| span.dim() <= d) {
                return Err(Error::InvalidFiltration(format!(
                    "inclusion A_{} ⊂ A_{p} is not strict",
                    p - 1
                )));
            }
            for v in step {
                let cur = Subspace::spanned_by(dim, chosen.clone());
                if !cur.contains(v) {
                    chosen.push(v.clone());
                    degrees.push(p);
                }
            }
            prev_dim = Some(span.dim());
        }
        if chosen.len() != dim {
            return Err(Error::InvalidFiltration("last step does not span V".into()));
        }
        let matrix = Matrix::from_columns(dim, &chosen);
        let inverse = matrix
            .inverse()
            .ok_or_else(|| Error::InternalInconsistency("adapted basis is singular".into()))?;
        Ok(AdaptedBasis {
            vectors: chosen,
            degrees,
            matrix,
            inverse,
        })
    }
}

#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub vectors: Vec<Vec<Scalar>>,
    pub degrees: Vec<usize>,
    /// Columns are the basis vectors.
    pub matrix: Matrix,
    pub inverse: Matrix,
}

/// Structure constants of `alg` in the adapted basis, after checking
/// `mu(A_p, A_q) ⊆ A_{p+q}`.
fn adapted_constants(alg: &Algebra, filt: &Filtration) -> Result<(AdaptedBasis, Cochain)> {
    let basis = filt.adapted_basis(alg.dim())?;
    let f = LinearMap::new(basis.matrix.clone())?;
    let moved = apply_basis_change(&f, alg)?;
    let n = alg.dim();
    let c = moved.into_structure();
    for a in 0..n {
        for b in 0..n {
            let target = basis.degrees[a] + basis.degrees[b];
            for k in 0..n {
                if basis.degrees[k] > target && !c.get(&[a, b], k).is_zero() {
                    return Err(Error::NotMultiplicative {
                        p: basis.degrees[a],
                        q: basis.degrees[b],
                    });
                }
            }
        }
    }
    Ok((basis, c))
}

fn carry_unity(alg: &Algebra, basis: &AdaptedBasis, out: Algebra) -> Algebra {
    let unity = alg.unity().and_then(|u| {
        let e = unit_vector(alg.dim(), u);
        basis.vectors.iter().position(|v| *v == e)
    });
    let out = out.with_unity(unity).expect("index in range");
    if out.unity().is_some() && !check_unity(&out) {
        out.with_unity(None).expect("clearing unity")
    } else {
        out
    }
}

/// `gr(A) = ⊕ A_p / A_{p-1}` in the adapted basis.
pub fn graded_algebra(alg: &Algebra, filt: &Filtration) -> Result<Algebra> {
    rees_fiber(alg, filt, &Scalar::zero())
}

/// The fibre `A_t / (t - λ) A_t` of the Rees family. In the adapted basis its
/// constants are `m_ab^c λ^(deg a + deg b - deg c)` with `0^0 = 1`.
pub fn rees_fiber(alg: &Algebra, filt: &Filtration, lambda: &Scalar) -> Result<Algebra> {
    let (basis, c) = adapted_constants(alg, filt)?;
    let n = alg.dim();
    let deg = &basis.degrees;
    let out = Cochain::from_fn(2, n, |idx, k| {
        let v = c.get(idx, k);
        if v.is_zero() {
            return Scalar::zero();
        }
        let shift = deg[idx[0]] + deg[idx[1]] - deg[k];
        if shift == 0 {
            v.clone()
        } else {
            v * num::pow(lambda.clone(), shift)
        }
    });
    Ok(carry_unity(alg, &basis, Algebra::new(out, None)?))
}

/// The basis change realising `rees_fiber(alg, filt, λ) = g · alg` for
/// `λ ≠ 0`: the adapted basis followed by the rescaling `t = λ T`.
pub fn rees_isomorphism(alg: &Algebra, filt: &Filtration, lambda: &Scalar) -> Result<LinearMap> {
    if lambda.is_zero() {
        return Err(Error::InvalidInput("the fibre at 0 is a degeneration, not an isomorphic copy".into()));
    }
    let basis = filt.adapted_basis(alg.dim())?;
    let scaling: Vec<Scalar> = basis
        .degrees
        .iter()
        .map(|&d| num::pow(lambda.clone(), d))
        .collect();
    LinearMap::new(basis.matrix.mul(&Matrix::diagonal(&scaling)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry;
    use crate::scalar::{frac, int};

    #[test]
    fn trivial_filtration_returns_the_algebra() {
        let a = registry::truncated_polynomial(3);
        assert_eq!(graded_algebra(&a, &Filtration::trivial(3)).unwrap(), a);
    }

    #[test]
    fn graded_truncated_polynomial() {
        let a = registry::truncated_polynomial(3);
        let filt = Filtration::by_coordinate_prefix(3, 1);
        let g = graded_algebra(&a, &filt).unwrap();
        // Induced products on quotient representatives: x*x = x^2 lives in
        // degree 2 = 1 + 1, so it survives; everything else vanishes or is
        // the unity action.
        let expected = Algebra::from_constants(
            3,
            [
                (0, 0, 0, int(1)),
                (0, 1, 1, int(1)),
                (1, 0, 1, int(1)),
                (0, 2, 2, int(1)),
                (2, 0, 2, int(1)),
                (1, 1, 2, int(1)),
            ],
            Some(0),
        )
        .unwrap();
        assert_eq!(g, expected);
        assert!(g.is_associative());
    }

    #[test]
    fn graded_kills_lower_order_terms() {
        // A1 = K x K with the filtration span(1) ⊂ V: e*e = e has a degree-1
        // component only, so the graded product e*e lands in degree 2 and vanishes.
        let g = graded_algebra(&registry::a1(), &Filtration::by_coordinate_prefix(2, 1)).unwrap();
        assert_eq!(g, registry::a0());
    }

    #[test]
    fn rejects_non_multiplicative_filtration() {
        // A0 = span(x) ⊂ V in K[x]/(x^3): x * x = x^2 is not in A_0.
        let a = registry::truncated_polynomial(3);
        let e = |i| unit_vector(3, i);
        let filt = Filtration::new(vec![vec![e(1)], vec![e(1), e(0), e(2)]]);
        assert!(matches!(graded_algebra(&a, &filt), Err(Error::NotMultiplicative { .. })));
    }

    #[test]
    fn rejects_malformed_chains() {
        let e = |i| unit_vector(2, i);
        let not_strict = Filtration::new(vec![vec![e(0), e(1)], vec![e(1), e(0)]]);
        assert!(not_strict.adapted_basis(2).is_err());
        let not_spanning = Filtration::new(vec![vec![e(0)]]);
        assert!(not_spanning.adapted_basis(2).is_err());
        let not_nested = Filtration::new(vec![vec![e(0)], vec![e(1)], vec![e(0), e(1)]]);
        assert!(not_nested.adapted_basis(2).is_err());
    }

    #[test]
    fn rees_fibres_are_isomorphic_away_from_zero() {
        let a = registry::truncated_polynomial(3);
        let filt = Filtration::by_coordinate_prefix(3, 1);
        assert_eq!(
            rees_fiber(&a, &filt, &int(0)).unwrap(),
            graded_algebra(&a, &filt).unwrap()
        );
        for lambda in [int(1), frac(1, 2), int(-3)] {
            let fib = rees_fiber(&a, &filt, &lambda).unwrap();
            let g = rees_isomorphism(&a, &filt, &lambda).unwrap();
            assert_eq!(apply_basis_change(&g, &a).unwrap(), fib);
        }
        // λ = 1/2 vs λ = 1 differ by the diagonal rescaling diag(1, 1/2, 1/4).
        let half = rees_fiber(&a, &filt, &frac(1, 2)).unwrap();
        let one = rees_fiber(&a, &filt, &int(1)).unwrap();
        let d = LinearMap::diagonal(&[int(1), frac(1, 2), frac(1, 4)]);
        assert_eq!(apply_basis_change(&d, &one).unwrap(), half);
    }
}
