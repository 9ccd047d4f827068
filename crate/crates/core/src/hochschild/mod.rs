//! The Hochschild complex `C*(A, A)`: coboundary, cohomology, and the
//! Gerstenhaber circle product and bracket.
//!
//! Sign conventions. The coboundary is the standard one,
//!
//! ```text
//! δφ(x_1..x_{d+1}) = x_1 φ(x_2..x_{d+1})
//!                  + Σ_{i=1..d} (-1)^i φ(x_1.., x_i x_{i+1}, ..x_{d+1})
//!                  + (-1)^{d+1} φ(x_1..x_d) x_{d+1}
//! ```
//!
//! and the circle product inserts with sign `(-1)^{i(e-1)}`. With these
//! choices `δφ = (-1)^{d+1} [μ, φ]_G` for a `d`-cochain `φ`; in particular
//! `δφ = -[μ, φ]_G` in degree 2, and the deformation equation at order `k`
//! reads `δμ_k = Σ_{i=1}^{k-1} μ_i ∘ μ_{k-i}`.

mod cochain;
mod gerstenhaber;

pub use cochain::Cochain;
pub(crate) use cochain::{digits, encode, tuple_count};
pub use gerstenhaber::{circle_product, gerstenhaber_bracket};

use num::Zero;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

fn check_dim(alg: &Algebra, phi: &Cochain) -> Result<()> {
    if alg.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: phi.dim(),
        });
    }
    Ok(())
}

/// `δ_d φ`, evaluated term by term.
pub fn coboundary(alg: &Algebra, phi: &Cochain) -> Result<Cochain> {
    check_dim(alg, phi)?;
    let n = alg.dim();
    let d = phi.degree();
    let mu = alg.structure();
    let last_sign = if (d + 1) % 2 == 0 { Scalar::from_integer(1.into()) } else { Scalar::from_integer((-1).into()) };
    let mut out = Cochain::zero(d + 1, n);
    for t in 0..tuple_count(n, d + 1) {
        let idx = digits(t, n, d + 1);
        let mut val = vec![Scalar::zero(); n];

        // x_1 φ(x_2, ..., x_{d+1})
        for (l, c) in phi.on_basis(&idx[1..]).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, m) in mu.on_basis(&[idx[0], l]).iter().enumerate() {
                if !m.is_zero() {
                    val[k] += c * m;
                }
            }
        }

        // Σ (-1)^i φ(..., x_i x_{i+1}, ...)
        for i in 1..=d {
            let product = mu.on_basis(&[idx[i - 1], idx[i]]);
            let mut inner: Vec<usize> = Vec::with_capacity(d);
            for (l, p) in product.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                inner.clear();
                inner.extend_from_slice(&idx[..i - 1]);
                inner.push(l);
                inner.extend_from_slice(&idx[i + 1..]);
                for (k, c) in phi.on_basis(&inner).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if i % 2 == 0 {
                        val[k] += p * c;
                    } else {
                        val[k] -= p * c;
                    }
                }
            }
        }

        // (-1)^{d+1} φ(x_1, ..., x_d) x_{d+1}
        for (l, c) in phi.on_basis(&idx[..d]).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, m) in mu.on_basis(&[l, idx[d]]).iter().enumerate() {
                if !m.is_zero() {
                    val[k] += &last_sign * c * m;
                }
            }
        }

        for (k, v) in val.into_iter().enumerate() {
            if !v.is_zero() {
                out.set(&idx, k, v);
            }
        }
    }
    Ok(out)
}

/// Matrix of `δ_d : C^d -> C^{d+1}` in the flattened coordinates of
/// [`Cochain`]: `n^{d+2}` rows, `n^{d+1}` columns.
pub fn coboundary_matrix(alg: &Algebra, d: usize) -> Matrix {
    let n = alg.dim();
    let mu = alg.structure();
    let mut m = Matrix::zeros(tuple_count(n, d + 2), tuple_count(n, d + 1));
    let sign = |e: usize| if e % 2 == 0 { 1i64 } else { -1 };
    let mut col_idx: Vec<usize> = Vec::with_capacity(d);
    for t in 0..tuple_count(n, d + 1) {
        let idx = digits(t, n, d + 1);
        for k in 0..n {
            let row = t * n + k;
            // first term: C_{i_1, l}^k φ(i_2..; l)
            for l in 0..n {
                let c = mu.get(&[idx[0], l], k);
                if !c.is_zero() {
                    let col = encode(&idx[1..], n) * n + l;
                    m[(row, col)] += c;
                }
            }
            // inner terms
            for i in 1..=d {
                for l in 0..n {
                    let c = mu.get(&[idx[i - 1], idx[i]], l);
                    if c.is_zero() {
                        continue;
                    }
                    col_idx.clear();
                    col_idx.extend_from_slice(&idx[..i - 1]);
                    col_idx.push(l);
                    col_idx.extend_from_slice(&idx[i + 1..]);
                    let col = encode(&col_idx, n) * n + k;
                    m[(row, col)] += c * Scalar::from_integer(sign(i).into());
                }
            }
            // last term: (-1)^{d+1} C_{l, i_{d+1}}^k φ(i_1..i_d; l)
            for l in 0..n {
                let c = mu.get(&[l, idx[d]], k);
                if !c.is_zero() {
                    let col = encode(&idx[..d], n) * n + l;
                    m[(row, col)] += c * Scalar::from_integer(sign(d + 1).into());
                }
            }
        }
    }
    m
}

/// `Z^d`, `B^d` and a basis of `H^d = Z^d / B^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySpace {
    pub degree: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    /// Cocycles whose classes form a basis of `H^d`. Each is in normal form
    /// modulo `B^d` (zero on the pivot coordinates of `B^d`).
    pub representatives: Vec<Cochain>,
}

/// The space of `d`-coboundaries as a subspace of `C^d`.
pub fn coboundary_space(alg: &Algebra, d: usize) -> Subspace {
    let len = tuple_count(alg.dim(), d + 1);
    if d == 0 {
        return Subspace::spanned_by(len, Vec::new());
    }
    Subspace::image(&coboundary_matrix(alg, d - 1))
}

pub fn cocycle_basis(alg: &Algebra, d: usize) -> Vec<Cochain> {
    let n = alg.dim();
    coboundary_matrix(alg, d)
        .nullspace()
        .into_iter()
        .map(|v| Cochain::from_coeffs(d, n, v).expect("shape"))
        .collect()
}

pub fn cohomology(alg: &Algebra, d: usize) -> Result<CohomologySpace> {
    alg.require_associative()?;
    let n = alg.dim();
    let z = coboundary_matrix(alg, d).nullspace();
    let b = coboundary_space(alg, d);
    let len = tuple_count(n, d + 1);
    let reduced: Vec<Vec<Scalar>> = z.iter().map(|v| b.reduce(v)).collect();
    let classes = Subspace::spanned_by(len, reduced);
    let representatives: Vec<Cochain> = classes
        .basis()
        .iter()
        .map(|v| Cochain::from_coeffs(d, n, v.clone()).expect("shape"))
        .collect();
    let dim_z = z.len();
    let dim_b = b.dim();
    if dim_b > dim_z || representatives.len() != dim_z - dim_b {
        return Err(Error::InternalInconsistency(format!(
            "cohomology ranks disagree in degree {d}: Z={dim_z} B={dim_b} H={}",
            representatives.len()
        )));
    }
    Ok(CohomologySpace {
        degree: d,
        dim_z,
        dim_b,
        dim_h: representatives.len(),
        representatives,
    })
}

/// Every `f` with `δ f = φ`: a particular solution plus a basis of
/// `Z^{d-1}`. `None` if `φ ∉ B^d`.
pub fn preimages(alg: &Algebra, phi: &Cochain) -> Result<Option<(Cochain, Vec<Cochain>)>> {
    check_dim(alg, phi)?;
    let d = phi.degree();
    if d == 0 {
        return Err(Error::InvalidInput("degree-0 cochains have no preimage under δ".into()));
    }
    let n = alg.dim();
    let m = coboundary_matrix(alg, d - 1);
    Ok(m.solve(phi.coeffs()).map(|sol| {
        let part = Cochain::from_coeffs(d - 1, n, sol.particular).expect("shape");
        let ker = sol
            .kernel
            .into_iter()
            .map(|v| Cochain::from_coeffs(d - 1, n, v).expect("shape"))
            .collect();
        (part, ker)
    }))
}

/// Some `f` with `δ f = φ`, if `φ` is a coboundary. The returned `f` is
/// re-checked by applying `δ`.
pub fn is_coboundary(alg: &Algebra, phi: &Cochain) -> Result<Option<Cochain>> {
    alg.require_associative()?;
    check_dim(alg, phi)?;
    if !coboundary(alg, phi)?.is_zero() {
        return Err(Error::NotACocycle { degree: phi.degree() });
    }
    let Some((f, _)) = preimages(alg, phi)? else {
        return Ok(None);
    };
    if coboundary(alg, &f)? != *phi {
        return Err(Error::InternalInconsistency("preimage does not map back under δ".into()));
    }
    Ok(Some(f))
}

/// `Sq(φ) = φ ∘ φ` together with its status in `H^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqClass {
    pub square: Cochain,
    /// `Some(f)` with `δ f = φ ∘ φ` when the class vanishes.
    pub primitive: Option<Cochain>,
}

impl SqClass {
    pub fn is_zero_class(&self) -> bool {
        self.primitive.is_some()
    }
}

pub fn sq_class(alg: &Algebra, phi: &Cochain) -> Result<SqClass> {
    alg.require_associative()?;
    check_dim(alg, phi)?;
    if phi.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: phi.degree(),
        });
    }
    if !coboundary(alg, phi)?.is_zero() {
        return Err(Error::NotACocycle { degree: 2 });
    }
    let square = circle_product(phi, phi)?;
    let primitive = is_coboundary(alg, &square)?;
    Ok(SqClass { square, primitive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{associator, registry};
    use crate::scalar::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cochain(rng: &mut impl Rng, d: usize, n: usize) -> Cochain {
        Cochain::from_fn(d, n, |_, _| int(rng.gen_range(-3..=3)))
    }

    #[test]
    fn identity_cobounds_to_the_multiplication() {
        for (_, alg) in registry::all() {
            let id = Cochain::identity(alg.dim());
            assert_eq!(&coboundary(&alg, &id).unwrap(), alg.structure());
        }
    }

    #[test]
    fn multiplication_is_a_cocycle_iff_associative() {
        for (_, alg) in registry::all() {
            assert!(coboundary(&alg, alg.structure()).unwrap().is_zero());
        }
        // δμ = -2 · associator
        let bad = Algebra::from_constants(2, [(0, 0, 1, int(1)), (1, 0, 0, int(1))], None).unwrap();
        let d = coboundary(&bad, bad.structure()).unwrap();
        assert_eq!(d, associator(&bad).scale(&int(-2)));
    }

    #[test]
    fn matrix_and_direct_coboundary_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (_, alg) in registry::all().into_iter().filter(|(_, a)| a.dim() <= 3) {
            for d in 0..=2 {
                let phi = random_cochain(&mut rng, d, alg.dim());
                let direct = coboundary(&alg, &phi).unwrap();
                let via_matrix = coboundary_matrix(&alg, d).mul_vec(phi.coeffs());
                assert_eq!(direct.coeffs(), via_matrix.as_slice());
            }
        }
    }

    #[test]
    fn delta_squared_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (_, alg) in registry::all() {
            for d in 0..=2 {
                if alg.dim() == 4 && d == 2 {
                    continue;
                }
                let f = random_cochain(&mut rng, d, alg.dim());
                let dd = coboundary(&alg, &coboundary(&alg, &f).unwrap()).unwrap();
                assert!(dd.is_zero());
            }
        }
    }

    #[test]
    fn bracket_sign_convention_is_pinned() {
        // δφ = (-1)^{d+1} [μ, φ]_G
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let alg = registry::upper_triangular();
        for d in 0..=3 {
            let phi = random_cochain(&mut rng, d, 3);
            let delta = coboundary(&alg, &phi).unwrap();
            let br = gerstenhaber_bracket(alg.structure(), &phi).unwrap();
            let expected = if d % 2 == 1 { br } else { br.neg() };
            assert_eq!(delta, expected, "degree {d}");
        }
    }

    #[test]
    fn cohomology_of_small_algebras() {
        let a1 = cohomology(&registry::a1(), 2).unwrap();
        assert_eq!(a1.dim_h, 0);
        assert_eq!(a1.dim_z, a1.dim_b);

        let a0 = cohomology(&registry::a0(), 2).unwrap();
        assert_eq!(a0.dim_h, 1);
        // The class is x ⊗ x -> 1: phi(e1, e1) = e0.
        let mut expected = Cochain::zero(2, 2);
        expected.set(&[1, 1], 0, int(1));
        assert_eq!(a0.representatives, vec![expected]);

        let k = registry::null_algebra(1);
        for d in 1..=3 {
            assert_eq!(cohomology(&k, d).unwrap().dim_h, 0);
        }
    }

    #[test]
    fn first_cohomology_is_outer_derivations() {
        // K[x]/(x^2): Der is 1-dimensional (x -> b x), inner derivations vanish.
        let h1 = cohomology(&registry::a0(), 1).unwrap();
        assert_eq!((h1.dim_z, h1.dim_b, h1.dim_h), (1, 0, 1));
        // Upper triangular matrices: all derivations inner, H^1 = 0, and
        // dim B^1 = dim A - dim Z(A) = 3 - 1.
        let t = cohomology(&registry::upper_triangular(), 1).unwrap();
        assert_eq!(t.dim_h, 0);
        assert_eq!(t.dim_b, 2);
    }

    #[test]
    fn is_coboundary_cases() {
        let a0 = registry::a0();
        let mu = a0.structure().clone();
        let f = is_coboundary(&a0, &mu).unwrap().unwrap();
        assert_eq!(coboundary(&a0, &f).unwrap(), mu);

        let rep = cohomology(&a0, 2).unwrap().representatives[0].clone();
        assert_eq!(is_coboundary(&a0, &rep).unwrap(), None);

        let zero = Cochain::zero(2, 2);
        let f0 = is_coboundary(&a0, &zero).unwrap().unwrap();
        assert!(f0.is_zero());

        // phi(x, 1) = x: δphi(x, 1, 1) = -x.
        let mut not_cocycle = Cochain::zero(2, 2);
        not_cocycle.set(&[1, 0], 1, int(1));
        assert!(matches!(is_coboundary(&a0, &not_cocycle), Err(Error::NotACocycle { degree: 2 })));
    }

    #[test]
    fn square_zero_direction_of_a0_is_a_coboundary() {
        // phi(e1, e1) = e1 on K[x]/(x^2) equals δf for f(e1) = e0 / 2.
        let a0 = registry::a0();
        let mut phi = Cochain::zero(2, 2);
        phi.set(&[1, 1], 1, int(1));
        let mut f = Cochain::zero(1, 2);
        f.set(&[1], 0, frac(1, 2));
        assert_eq!(coboundary(&a0, &f).unwrap(), phi);
        assert!(is_coboundary(&a0, &phi).unwrap().is_some());
    }

    #[test]
    fn sq_class_cases() {
        let a0 = registry::a0();
        let zero = sq_class(&a0, &Cochain::zero(2, 2)).unwrap();
        assert!(zero.square.is_zero() && zero.is_zero_class());

        let mut phi = Cochain::zero(2, 2);
        phi.set(&[1, 1], 1, int(1));
        assert!(sq_class(&a0, &phi).unwrap().is_zero_class());

        let rep = cohomology(&a0, 2).unwrap().representatives[0].clone();
        assert!(sq_class(&a0, &rep).unwrap().is_zero_class());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alg = registry::truncated_polynomial(3);
        for _ in 0..5 {
            let f = random_cochain(&mut rng, 1, 3);
            let b = coboundary(&alg, &f).unwrap();
            assert!(sq_class(&alg, &b).unwrap().is_zero_class());
        }
    }

    #[test]
    fn sq_is_well_defined_on_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let alg = registry::truncated_polynomial(3);
        let h2 = cohomology(&alg, 2).unwrap();
        for phi in &h2.representatives {
            for _ in 0..3 {
                let f = random_cochain(&mut rng, 1, 3);
                let shifted = phi.add(&coboundary(&alg, &f).unwrap());
                let diff = circle_product(&shifted, &shifted)
                    .unwrap()
                    .sub(&circle_product(phi, phi).unwrap());
                assert!(is_coboundary(&alg, &diff).unwrap().is_some());
            }
        }
    }
}
