//! Truncated formal deformations `μ_t = μ_0 + t μ_1 + ... + t^m μ_m`.
//!
//! With the conventions of [`crate::hochschild`], the order-`k` part of the
//! deformation equation `Σ_{i=0}^k μ_i ∘ μ_{k-i} = 0` is equivalent to
//! `δμ_k = Σ_{i=1}^{k-1} μ_i ∘ μ_{k-i}` once the base is associative.

mod isomorphism;
mod universal;

pub use isomorphism::{apply_isomorphism, trivialize, FormalIsomorphism, Trivialization};
pub use universal::{push_out_infinitesimal, universal_infinitesimal, InfinitesimalBase};

use num::Zero;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::hochschild::{self, circle_product, gerstenhaber_bracket, Cochain};
use crate::poly::Poly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalDeformation {
    base: Algebra,
    terms: Vec<Cochain>,
}

impl FormalDeformation {
    /// Base associativity is not enforced here; operations check it.
    pub fn new(base: Algebra, terms: Vec<Cochain>) -> Result<FormalDeformation> {
        for t in &terms {
            if t.dim() != base.dim() {
                return Err(Error::DimensionMismatch {
                    expected: base.dim(),
                    found: t.dim(),
                });
            }
            if t.degree() != 2 {
                return Err(Error::DegreeMismatch {
                    expected: 2,
                    found: t.degree(),
                });
            }
        }
        Ok(FormalDeformation { base, terms })
    }

    /// `μ_t = μ_0` truncated at `order`.
    pub fn trivial(base: Algebra, order: usize) -> FormalDeformation {
        let n = base.dim();
        FormalDeformation {
            base,
            terms: vec![Cochain::zero(2, n); order],
        }
    }

    pub fn base(&self) -> &Algebra {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// `μ_1, ..., μ_m`.
    pub fn terms(&self) -> &[Cochain] {
        &self.terms
    }

    /// `μ_k`, with `μ_0` the base multiplication.
    pub fn term(&self, k: usize) -> &Cochain {
        if k == 0 {
            self.base.structure()
        } else {
            &self.terms[k - 1]
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.iter().all(Cochain::is_zero)
    }

    /// Drop terms beyond `order`, or pad with zeros up to it.
    pub fn with_order(&self, order: usize) -> FormalDeformation {
        let mut terms = self.terms.clone();
        terms.resize(order, Cochain::zero(2, self.dim()));
        FormalDeformation {
            base: self.base.clone(),
            terms,
        }
    }

    pub fn push(&mut self, term: Cochain) -> Result<()> {
        if term.dim() != self.dim() || term.degree() != 2 {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: term.dim(),
            });
        }
        self.terms.push(term);
        Ok(())
    }
}

/// Order-`k` residual of the deformation equation by both routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCheck {
    pub order: usize,
    /// `Σ_{i=0}^k μ_i ∘ μ_{k-i}`.
    pub residual: Cochain,
    /// The `t^k` coefficient of the associator of `μ_t`, expanded directly.
    pub direct: Cochain,
}

impl OrderCheck {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn routes_agree(&self) -> bool {
        self.residual == self.direct
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationReport {
    pub orders: Vec<OrderCheck>,
}

impl EquationReport {
    pub fn all_hold(&self) -> bool {
        self.orders.iter().all(OrderCheck::holds)
    }

    pub fn routes_agree(&self) -> bool {
        self.orders.iter().all(OrderCheck::routes_agree)
    }

    /// First order at which the equation fails.
    pub fn first_failure(&self) -> Option<usize> {
        self.orders.iter().find(|o| !o.holds()).map(|o| o.order)
    }

    pub fn holds_through(&self, k: usize) -> bool {
        self.orders.iter().take(k + 1).all(OrderCheck::holds)
    }
}

fn circle_residual(def: &FormalDeformation, k: usize) -> Cochain {
    let mut acc = Cochain::zero(3, def.dim());
    for i in 0..=k {
        let c = circle_product(def.term(i), def.term(k - i)).expect("shapes match");
        acc.add_assign_scaled(&c, &Scalar::from_integer(1.into()));
    }
    acc
}

/// Structure constants of `μ_t` as polynomials, indexed like a 2-cochain.
fn polynomial_constants(def: &FormalDeformation) -> Vec<Poly> {
    let len = def.base.structure().len();
    (0..len)
        .map(|pos| Poly::new((0..=def.order()).map(|s| def.term(s).coeffs()[pos].clone()).collect()))
        .collect()
}

/// `μ_t(x, y)` for vectors with polynomial coordinates.
fn product_poly(table: &[Poly], n: usize, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); n];
    for (i, pa) in a.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for (j, pb) in b.iter().enumerate() {
            if pb.is_zero() {
                continue;
            }
            let w = pa * pb;
            for (k, slot) in out.iter_mut().enumerate() {
                let c = &table[(i * n + j) * n + k];
                if !c.is_zero() {
                    *slot = &*slot + &(&w * c);
                }
            }
        }
    }
    out
}

/// The `t^0, ..., t^m` coefficients of `μ_t(μ_t(x, y), z) - μ_t(x, μ_t(y, z))`,
/// computed by multiplying polynomial vectors.
fn direct_residuals(def: &FormalDeformation) -> Vec<Cochain> {
    let n = def.dim();
    let m = def.order();
    let table = polynomial_constants(def);
    let mut out = vec![Cochain::zero(3, n); m + 1];
    let basis: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|k| if k == i { Poly::one() } else { Poly::zero() }).collect())
        .collect();
    for a in 0..n {
        for b in 0..n {
            let ab = product_poly(&table, n, &basis[a], &basis[b]);
            for c in 0..n {
                let bc = product_poly(&table, n, &basis[b], &basis[c]);
                let left = product_poly(&table, n, &ab, &basis[c]);
                let right = product_poly(&table, n, &basis[a], &bc);
                for k in 0..n {
                    let diff = &left[k] - &right[k];
                    for (s, slot) in out.iter_mut().enumerate() {
                        let v = diff.coeff(s);
                        if !v.is_zero() {
                            slot.set(&[a, b, c], k, v);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn check_deformation_equation(def: &FormalDeformation) -> EquationReport {
    let direct = direct_residuals(def);
    let orders = direct
        .into_iter()
        .enumerate()
        .map(|(k, direct)| OrderCheck {
            order: k,
            residual: circle_residual(def, k),
            direct,
        })
        .collect();
    EquationReport { orders }
}

fn require_valid_through(def: &FormalDeformation, k: usize) -> Result<()> {
    let report = check_deformation_equation(&def.with_order(k.min(def.order())));
    if !report.routes_agree() {
        return Err(Error::InternalInconsistency(
            "circle-product and direct expansions of the deformation equation disagree".into(),
        ));
    }
    match report.first_failure() {
        Some(0) => Err(Error::NotAssociative),
        Some(order) => Err(Error::PrefixInvalid { order }),
        None => Ok(()),
    }
}

/// The first nonzero term `(p, μ_p)`. When the equation holds through order
/// `p`, `μ_p` is checked to be a 2-cocycle.
pub fn infinitesimal(def: &FormalDeformation) -> Result<(usize, Cochain)> {
    let (p, mu_p) = def
        .terms
        .iter()
        .enumerate()
        .find(|(_, t)| !t.is_zero())
        .map(|(i, t)| (i + 1, t.clone()))
        .ok_or(Error::AllZero)?;
    let report = check_deformation_equation(&def.with_order(p));
    if report.holds_through(p) && !hochschild::coboundary(def.base(), &mu_p)?.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "infinitesimal at order {p} is not a cocycle although the equation holds"
        )));
    }
    Ok((p, mu_p))
}

/// The affine space `particular + span(kernel)` of cochains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineCochains {
    pub particular: Cochain,
    pub kernel: Vec<Cochain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    /// The order `m` being solved for.
    pub order: usize,
    /// `Ω = Σ_{i=1}^{m-1} μ_i ∘ μ_{m-i}`, a 3-cocycle.
    pub cochain: Cochain,
    /// Every `μ_m` with `δμ_m = Ω`, or `None` if `Ω ∉ B^3`.
    pub solutions: Option<AffineCochains>,
}

impl Obstruction {
    pub fn vanishes(&self) -> bool {
        self.solutions.is_some()
    }
}

/// The obstruction to extending `def` (valid through its order `m - 1`) to
/// order `m`.
pub fn obstruction(def: &FormalDeformation) -> Result<Obstruction> {
    require_valid_through(def, def.order())?;
    let m = def.order() + 1;
    let n = def.dim();
    let mut omega = Cochain::zero(3, n);
    for i in 1..m {
        let c = circle_product(def.term(i), def.term(m - i))?;
        omega.add_assign_scaled(&c, &Scalar::from_integer(1.into()));
    }
    if !hochschild::coboundary(def.base(), &omega)?.is_zero() {
        return Err(Error::InternalInconsistency(format!("obstruction at order {m} is not a cocycle")));
    }
    let solutions = hochschild::preimages(def.base(), &omega)?.map(|(particular, kernel)| AffineCochains {
        particular,
        kernel,
    });
    if let Some(s) = &solutions {
        if hochschild::coboundary(def.base(), &s.particular)? != omega {
            return Err(Error::InternalInconsistency("particular solution does not solve δμ = Ω".into()));
        }
    }
    Ok(Obstruction {
        order: m,
        cochain: omega,
        solutions,
    })
}

/// Extend order by order, taking the particular solution at each step.
/// Fails with [`Error::FailureAtOrder`] on the first obstruction outside `B^3`.
pub fn extend(def: &FormalDeformation, target: usize) -> Result<FormalDeformation> {
    require_valid_through(def, def.order())?;
    let mut cur = def.with_order(def.order().min(target));
    while cur.order() < target {
        let obs = obstruction(&cur)?;
        match obs.solutions {
            Some(s) => cur.push(s.particular)?,
            None => {
                return Err(Error::FailureAtOrder {
                    order: obs.order,
                    obstruction: Box::new(obs.cochain),
                })
            }
        }
    }
    let report = check_deformation_equation(&cur);
    if !report.all_hold() || !report.routes_agree() {
        return Err(Error::InternalInconsistency("extended deformation fails the direct check".into()));
    }
    Ok(cur)
}

/// Whether `[F, H]_G ∈ B^3` for 2-cocycles `F`, `H`. `false` certifies that
/// the two infinitesimal directions cannot be realised compatibly.
pub fn compatible_classes(alg: &Algebra, f: &Cochain, h: &Cochain) -> Result<bool> {
    alg.require_associative()?;
    for c in [f, h] {
        if c.degree() != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                found: c.degree(),
            });
        }
        if !hochschild::coboundary(alg, c)?.is_zero() {
            return Err(Error::NotACocycle { degree: 2 });
        }
    }
    let br = gerstenhaber_bracket(f, h)?;
    Ok(hochschild::is_coboundary(alg, &br)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry;
    use crate::hochschild::{coboundary, cohomology};
    use crate::scalar::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `μ_t(x, x) = t x` on `K[x]/(x^2)`.
    fn square_to_t_x() -> FormalDeformation {
        let mut mu1 = Cochain::zero(2, 2);
        mu1.set(&[1, 1], 1, int(1));
        FormalDeformation::new(registry::a0(), vec![mu1]).unwrap()
    }

    #[test]
    fn equation_holds_for_the_two_dimensional_family() {
        let def = square_to_t_x();
        let r = check_deformation_equation(&def);
        assert!(r.all_hold() && r.routes_agree());
        let r2 = check_deformation_equation(&def.with_order(2));
        assert!(r2.all_hold() && r2.routes_agree());
        assert_eq!(r2.orders.len(), 3);
    }

    #[test]
    fn zero_terms_pass_iff_base_associative() {
        let ok = FormalDeformation::trivial(registry::matrices2(), 2);
        assert!(check_deformation_equation(&ok).all_hold());
        let bad = Algebra::from_constants(2, [(0, 0, 1, int(1)), (1, 0, 0, int(1))], None).unwrap();
        let r = check_deformation_equation(&FormalDeformation::trivial(bad, 2));
        assert_eq!(r.first_failure(), Some(0));
        assert!(r.routes_agree());
    }

    #[test]
    fn non_cocycle_fails_at_order_one() {
        let mut mu1 = Cochain::zero(2, 2);
        mu1.set(&[1, 0], 1, int(1));
        let def = FormalDeformation::new(registry::a0(), vec![mu1]).unwrap();
        let r = check_deformation_equation(&def);
        assert_eq!(r.first_failure(), Some(1));
        assert!(r.routes_agree());
    }

    #[test]
    fn infinitesimal_is_first_nonzero_term() {
        assert_eq!(infinitesimal(&square_to_t_x()).unwrap().0, 1);
        let rep = cohomology(&registry::a0(), 2).unwrap().representatives[0].clone();
        let def = FormalDeformation::new(registry::a0(), vec![Cochain::zero(2, 2), rep.clone()]).unwrap();
        assert_eq!(infinitesimal(&def).unwrap(), (2, rep));
        assert!(matches!(
            infinitesimal(&FormalDeformation::trivial(registry::a0(), 3)),
            Err(Error::AllZero)
        ));
    }

    #[test]
    fn obstruction_at_order_one_is_empty() {
        let obs = obstruction(&FormalDeformation::trivial(registry::a1(), 0)).unwrap();
        assert_eq!(obs.order, 1);
        assert!(obs.cochain.is_zero());
        let sols = obs.solutions.unwrap();
        assert!(sols.particular.is_zero());
        assert_eq!(sols.kernel.len(), cohomology(&registry::a1(), 2).unwrap().dim_z);
    }

    #[test]
    fn obstruction_at_order_two_of_the_family_vanishes() {
        let obs = obstruction(&square_to_t_x()).unwrap();
        assert_eq!(obs.order, 2);
        // x^2 = x is associative, so μ_1 ∘ μ_1 = 0.
        assert!(obs.cochain.is_zero());
        assert!(obs.solutions.unwrap().particular.is_zero());
    }

    #[test]
    fn obstruction_rejects_invalid_prefix() {
        let mut mu1 = Cochain::zero(2, 2);
        mu1.set(&[1, 0], 1, int(1));
        let def = FormalDeformation::new(registry::a0(), vec![mu1]).unwrap();
        assert!(matches!(obstruction(&def), Err(Error::PrefixInvalid { order: 1 })));
    }

    #[test]
    fn extend_the_family_with_zero_terms() {
        let ext = extend(&square_to_t_x(), 3).unwrap();
        assert_eq!(ext.order(), 3);
        assert!(ext.terms()[1].is_zero() && ext.terms()[2].is_zero());
        let trivial = extend(&FormalDeformation::trivial(registry::a0(), 0), 4).unwrap();
        assert!(trivial.is_trivial());
    }

    #[test]
    fn extend_reports_nonvanishing_obstruction() {
        // Every reported failure must carry an obstruction outside B^3.
        let alg = registry::null_algebra(3);
        let h2 = cohomology(&alg, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let mut mu1 = Cochain::zero(2, 3);
            for r in &h2.representatives {
                mu1.add_assign_scaled(r, &int(rng.gen_range(-2..=2)));
            }
            let def = FormalDeformation::new(alg.clone(), vec![mu1]).unwrap();
            match extend(&def, 3) {
                Ok(e) => assert!(check_deformation_equation(&e).all_hold()),
                Err(Error::FailureAtOrder { order, obstruction }) => {
                    assert!(hochschild::is_coboundary(&alg, &obstruction).unwrap().is_none());
                    assert!(order >= 2);
                }
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn compatibility_of_classes() {
        let a0 = registry::a0();
        let rep = cohomology(&a0, 2).unwrap().representatives[0].clone();
        assert!(compatible_classes(&a0, &rep, &rep).unwrap());
        assert!(compatible_classes(&a0, &rep, &Cochain::zero(2, 2)).unwrap());
        let mut not_cocycle = Cochain::zero(2, 2);
        not_cocycle.set(&[1, 0], 1, int(1));
        assert!(matches!(
            compatible_classes(&a0, &rep, &not_cocycle),
            Err(Error::NotACocycle { .. })
        ));
        // coboundaries are compatible with anything
        let mut f = Cochain::zero(1, 2);
        f.set(&[1], 0, frac(3, 2));
        let b = coboundary(&a0, &f).unwrap();
        assert!(compatible_classes(&a0, &rep, &b).unwrap());
    }
}
