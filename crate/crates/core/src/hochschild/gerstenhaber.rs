use num::Zero;

use super::cochain::{digits, tuple_count};
use super::Cochain;
use crate::error::{Error, Result};

/// `(φ ∘ ψ)(a_1..a_{d+e-1}) = Σ_i (-1)^{i(e-1)} φ(a_1..a_i, ψ(a_{i+1}..a_{i+e}), ..)`
/// for `φ` of degree `d` and `ψ` of degree `e`.
pub fn circle_product(phi: &Cochain, psi: &Cochain) -> Result<Cochain> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: psi.dim(),
        });
    }
    let n = phi.dim();
    let d = phi.degree();
    let e = psi.degree();
    if d + e == 0 {
        return Err(Error::InvalidInput("circle product of two degree-0 cochains".into()));
    }
    let out_deg = d + e - 1;
    let mut out = Cochain::zero(out_deg, n);
    let mut inner: Vec<usize> = Vec::with_capacity(d);
    for t in 0..tuple_count(n, out_deg) {
        let idx = digits(t, n, out_deg);
        let mut val = vec![crate::scalar::Scalar::zero(); n];
        for i in 0..d {
            let negative = (i * (e + 1)) % 2 == 1; // (-1)^{i(e-1)} = (-1)^{i(e+1)}
            let inserted = psi.on_basis(&idx[i..i + e]);
            for (l, p) in inserted.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                inner.clear();
                inner.extend_from_slice(&idx[..i]);
                inner.push(l);
                inner.extend_from_slice(&idx[i + e..]);
                for (k, c) in phi.on_basis(&inner).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if negative {
                        val[k] -= p * c;
                    } else {
                        val[k] += p * c;
                    }
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

/// `[φ, ψ] = φ ∘ ψ - (-1)^{(d-1)(e-1)} ψ ∘ φ`.
pub fn gerstenhaber_bracket(phi: &Cochain, psi: &Cochain) -> Result<Cochain> {
    let a = circle_product(phi, psi)?;
    let b = circle_product(psi, phi)?;
    let d = phi.degree() as i64;
    let e = psi.degree() as i64;
    if ((d - 1) * (e - 1)).rem_euclid(2) == 0 {
        Ok(a.sub(&b))
    } else {
        Ok(a.add(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{associator, registry, Algebra};
    use crate::scalar::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mu_circle_mu_is_the_associator() {
        for (_, alg) in registry::all() {
            let mu = alg.structure();
            assert_eq!(circle_product(mu, mu).unwrap(), associator(&alg));
        }
        let bad = Algebra::from_constants(2, [(0, 0, 1, int(1)), (1, 0, 0, int(1))], None).unwrap();
        let mu = bad.structure();
        assert_eq!(circle_product(mu, mu).unwrap(), associator(&bad));
        assert!(!circle_product(mu, mu).unwrap().is_zero());
    }

    #[test]
    fn identity_is_a_unit_on_the_left() {
        // id ∘ φ = φ; φ ∘ id = d φ since every insertion sign is +1.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let id = Cochain::identity(3);
        for d in 1..=3 {
            let phi = Cochain::from_fn(d, 3, |_, _| int(rng.gen_range(-4..=4)));
            assert_eq!(circle_product(&id, &phi).unwrap(), phi);
            let right = circle_product(&phi, &id).unwrap();
            assert_eq!(right, phi.scale(&int(d as i64)), "degree {d}");
        }
    }

    #[test]
    fn bracket_is_graded_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (d, e) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let phi = Cochain::from_fn(d, 2, |_, _| int(rng.gen_range(-3..=3)));
            let psi = Cochain::from_fn(e, 2, |_, _| int(rng.gen_range(-3..=3)));
            let ab = gerstenhaber_bracket(&phi, &psi).unwrap();
            let ba = gerstenhaber_bracket(&psi, &phi).unwrap();
            let s = if ((d as i64 - 1) * (e as i64 - 1)) % 2 == 0 { int(-1) } else { int(1) };
            assert_eq!(ab, ba.scale(&s));
        }
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let a = Cochain::zero(2, 2);
        let b = Cochain::zero(2, 3);
        assert!(matches!(circle_product(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(gerstenhaber_bracket(&a, &b), Err(Error::DimensionMismatch { .. })));
    }
}
