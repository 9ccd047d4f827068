
use super::{require_valid_through, FormalDeformation};
use crate::algebra::LinearMap;
use crate::error::{Error, Result};
use crate::hochschild::{self, coboundary_space, Cochain};
use crate::linalg::Matrix;

/// `F_t = Id + t f_1 + ... + t^m f_m`, truncated at order `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalIsomorphism {
    dim: usize,
    terms: Vec<Matrix>,
}

impl FormalIsomorphism {
    pub fn new(dim: usize, terms: Vec<LinearMap>) -> Result<FormalIsomorphism> {
        let terms: Vec<Matrix> = terms.into_iter().map(LinearMap::into_matrix).collect();
        if let Some(m) = terms.iter().find(|m| m.nrows() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.nrows(),
            });
        }
        Ok(FormalIsomorphism { dim, terms })
    }

    pub fn identity(dim: usize, order: usize) -> FormalIsomorphism {
        FormalIsomorphism {
            dim,
            terms: vec![Matrix::zeros(dim, dim); order],
        }
    }

    /// `Id + t^p f`.
    pub fn elementary(f: &Matrix, p: usize) -> FormalIsomorphism {
        let n = f.nrows();
        let mut terms = vec![Matrix::zeros(n, n); p];
        terms[p - 1] = f.clone();
        FormalIsomorphism { dim: n, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// `f_1, ..., f_m`.
    pub fn terms(&self) -> &[Matrix] {
        &self.terms
    }

    /// `f_k`, with `f_0 = Id` and `f_k = 0` beyond the order.
    pub fn term(&self, k: usize) -> Matrix {
        match k {
            0 => Matrix::identity(self.dim),
            k if k <= self.terms.len() => self.terms[k - 1].clone(),
            _ => Matrix::zeros(self.dim, self.dim),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.terms.iter().all(Matrix::is_zero)
    }

    /// The series inverse `G_t` with `F_t G_t = Id` modulo `t^{order+1}`.
    pub fn inverse(&self, order: usize) -> FormalIsomorphism {
        let mut g: Vec<Matrix> = vec![Matrix::identity(self.dim)];
        for k in 1..=order {
            let mut acc = Matrix::zeros(self.dim, self.dim);
            for i in 1..=k {
                let f = self.term(i);
                if !f.is_zero() {
                    acc = acc.add(&f.mul(&g[k - i]));
                }
            }
            g.push(acc.scale(&-crate::scalar::int(1)));
        }
        g.remove(0);
        FormalIsomorphism { dim: self.dim, terms: g }
    }

    /// `self ∘ other` truncated at `order`.
    pub fn compose(&self, other: &FormalIsomorphism, order: usize) -> FormalIsomorphism {
        let terms = (1..=order)
            .map(|k| {
                let mut acc = Matrix::zeros(self.dim, self.dim);
                for i in 0..=k {
                    let a = self.term(i);
                    let b = other.term(k - i);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(&b));
                    }
                }
                acc
            })
            .collect();
        FormalIsomorphism { dim: self.dim, terms }
    }
}

/// `μ'_t(X, Y) = F_t^{-1}(μ_t(F_t X, F_t Y))`, truncated at the order of `def`.
pub fn apply_isomorphism(f: &FormalIsomorphism, def: &FormalDeformation) -> Result<FormalDeformation> {
    if f.dim() != def.dim() {
        return Err(Error::DimensionMismatch {
            expected: def.dim(),
            found: f.dim(),
        });
    }
    let m = def.order();
    let n = def.dim();
    let g = f.inverse(m);
    let fs: Vec<Matrix> = (0..=m).map(|k| f.term(k)).collect();
    let gs: Vec<Matrix> = (0..=m).map(|k| g.term(k)).collect();
    let mut terms = vec![Cochain::zero(2, n); m];
    for b in 0..=m {
        let mu = def.term(b);
        if mu.is_zero() {
            continue;
        }
        for c in 0..=m - b {
            if fs[c].is_zero() {
                continue;
            }
            for d in 0..=m - b - c {
                if fs[d].is_zero() {
                    continue;
                }
                let inner = mu.precompose_slot(0, &fs[c]).precompose_slot(1, &fs[d]);
                for a in 0..=m - b - c - d {
                    let k = a + b + c + d;
                    if k == 0 || gs[a].is_zero() {
                        continue;
                    }
                    terms[k - 1].add_assign_scaled(&inner.postcompose(&gs[a]), &crate::scalar::int(1));
                }
            }
        }
    }
    FormalDeformation::new(def.base().clone(), terms)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trivialization {
    /// `apply_isomorphism(isomorphism, def)` is trivial through the order.
    Trivial { isomorphism: FormalIsomorphism },
    /// After removing coboundaries below `order`, the first nonzero term
    /// `residual` is a 2-cocycle outside `B^2`; `class` is its normal form
    /// modulo `B^2`.
    Obstructed { order: usize, residual: Cochain, class: Cochain },
}

/// Try to conjugate `def` to the trivial deformation through
/// `min(max_order, def.order())`, removing one coboundary at a time.
pub fn trivialize(def: &FormalDeformation, max_order: usize) -> Result<Trivialization> {
    require_valid_through(def, def.order())?;
    let m = max_order.min(def.order());
    let def = def.with_order(m);
    let n = def.dim();
    let mut total = FormalIsomorphism::identity(n, m);
    let mut cur = def.clone();
    for p in 1..=m {
        let mu_p = cur.term(p).clone();
        if mu_p.is_zero() {
            continue;
        }
        match hochschild::is_coboundary(def.base(), &mu_p)? {
            Some(f) => {
                let step = FormalIsomorphism::elementary(&f.to_linear_map().scale(&-crate::scalar::int(1)), p);
                cur = apply_isomorphism(&step, &cur)?;
                total = total.compose(&step, m);
                if !cur.term(p).is_zero() {
                    return Err(Error::InternalInconsistency(format!("order {p} survives its own coboundary")));
                }
            }
            None => {
                let b2 = coboundary_space(def.base(), 2);
                let class = Cochain::from_coeffs(2, n, b2.reduce(mu_p.coeffs()))?;
                return Ok(Trivialization::Obstructed {
                    order: p,
                    residual: mu_p,
                    class,
                });
            }
        }
    }
    if !apply_isomorphism(&total, &def)?.is_trivial() {
        return Err(Error::InternalInconsistency("accumulated isomorphism does not trivialize".into()));
    }
    Ok(Trivialization::Trivial { isomorphism: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{registry, LinearMap};
    use crate::deformation::{check_deformation_equation, extend};
    use crate::hochschild::{coboundary, cohomology};
    use crate::scalar::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_map(rng: &mut impl Rng, n: usize) -> Matrix {
        Matrix::from_rows((0..n).map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect()).collect())
    }

    fn random_iso(rng: &mut impl Rng, n: usize, m: usize) -> FormalIsomorphism {
        let terms = (0..m).map(|_| LinearMap::new(random_map(rng, n)).unwrap()).collect();
        FormalIsomorphism::new(n, terms).unwrap()
    }

    #[test]
    fn series_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_iso(&mut rng, 3, 3);
        let g = f.inverse(3);
        assert!(f.compose(&g, 3).is_identity());
        assert!(g.compose(&f, 3).is_identity());
    }

    #[test]
    fn identity_leaves_deformations_alone() {
        let def = extend(&FormalDeformation::trivial(registry::a0(), 0), 2).unwrap();
        assert_eq!(apply_isomorphism(&FormalIsomorphism::identity(2, 2), &def).unwrap(), def);
    }

    #[test]
    fn first_order_conjugation_adds_a_coboundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let alg = registry::a0();
        let f = random_map(&mut rng, 2);
        let out = apply_isomorphism(&FormalIsomorphism::elementary(&f, 1), &FormalDeformation::trivial(alg.clone(), 1))
            .unwrap();
        assert_eq!(out.terms()[0], coboundary(&alg, &Cochain::from_linear_map(&f)).unwrap());
    }

    #[test]
    fn conjugation_preserves_validity_and_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for alg in [registry::a0(), registry::upper_triangular(), registry::truncated_polynomial(3)] {
            let n = alg.dim();
            let h2 = cohomology(&alg, 2).unwrap();
            let mut mu1 = Cochain::zero(2, n);
            for r in &h2.representatives {
                mu1.add_assign_scaled(r, &int(rng.gen_range(-1..=1)));
            }
            let Ok(def) = extend(&FormalDeformation::new(alg, vec![mu1]).unwrap(), 3) else {
                continue;
            };
            let f = random_iso(&mut rng, n, 3);
            let moved = apply_isomorphism(&f, &def).unwrap();
            assert!(check_deformation_equation(&moved).all_hold());
            assert_eq!(apply_isomorphism(&f.inverse(3), &moved).unwrap(), def);
        }
    }

    #[test]
    fn invalid_input_stays_invalid() {
        let mut mu1 = Cochain::zero(2, 2);
        mu1.set(&[1, 0], 1, int(1));
        let def = FormalDeformation::new(registry::a0(), vec![mu1]).unwrap();
        let f = FormalIsomorphism::elementary(&Matrix::diagonal(&[int(1), int(2)]), 1);
        let moved = apply_isomorphism(&f, &def).unwrap();
        assert_eq!(check_deformation_equation(&moved).first_failure(), Some(1));
    }

    #[test]
    fn trivial_from_a_conjugated_trivial_deformation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let alg = registry::split_dual_numbers();
        let f = random_iso(&mut rng, 3, 3);
        let def = apply_isomorphism(&f, &FormalDeformation::trivial(alg, 3)).unwrap();
        let Trivialization::Trivial { isomorphism } = trivialize(&def, 3).unwrap() else {
            panic!("conjugate of the trivial deformation must trivialize");
        };
        assert!(apply_isomorphism(&isomorphism, &def).unwrap().is_trivial());
    }

    #[test]
    fn coboundary_infinitesimal_trivializes_at_first_order() {
        let alg = registry::a0();
        let mut f = Cochain::zero(1, 2);
        f.set(&[1], 0, int(1));
        let def = FormalDeformation::new(alg.clone(), vec![coboundary(&alg, &f).unwrap()]).unwrap();
        assert!(matches!(trivialize(&def, 1).unwrap(), Trivialization::Trivial { .. }));
    }

    #[test]
    fn the_two_dimensional_family_is_obstructed_at_order_two() {
        // x^2 = t x: the order-1 term is δf with f(x) = 1/2, and after removing
        // it the order-2 term is x^2 = t^2 / 4, a nonzero class.
        let mut mu1 = Cochain::zero(2, 2);
        mu1.set(&[1, 1], 1, int(1));
        let def = FormalDeformation::new(registry::a0(), vec![mu1]).unwrap().with_order(3);
        match trivialize(&def, 3).unwrap() {
            Trivialization::Obstructed { order, class, .. } => {
                assert_eq!(order, 2);
                let mut expected = Cochain::zero(2, 2);
                expected.set(&[1, 1], 0, frac(1, 4));
                assert_eq!(class, expected);
            }
            other => panic!("unexpected {other:?}"),
        }
        // truncated at order 1 the family is trivial
        assert!(matches!(trivialize(&def, 1).unwrap(), Trivialization::Trivial { .. }));
    }

    #[test]
    fn rigid_base_always_trivializes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alg = registry::diagonal(3);
        for _ in 0..3 {
            let f = Cochain::from_fn(1, 3, |_, _| int(rng.gen_range(-2..=2)));
            let mu1 = coboundary(&alg, &f).unwrap();
            let def = extend(&FormalDeformation::new(alg.clone(), vec![mu1]).unwrap(), 3).unwrap();
            assert!(matches!(trivialize(&def, 3).unwrap(), Trivialization::Trivial { .. }));
        }
    }
}
