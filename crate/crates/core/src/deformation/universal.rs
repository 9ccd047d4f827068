use num::{One, Zero};

use super::{check_deformation_equation, FormalDeformation};
use crate::algebra::{registry, Algebra};
use crate::error::{Error, Result};
use crate::hochschild::{cohomology, Cochain};
use crate::scalar::Scalar;

/// The deformation of `A` over `B = K ⊕ H^2(A, A)*` with `m^2 = 0`:
/// `μ_B(1⊗x, 1⊗y) = 1⊗μ(x, y) + Σ_i h_i* ⊗ φ_i(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitesimalBase {
    pub algebra: Algebra,
    /// The chosen `H^2` basis `φ_i`.
    pub representatives: Vec<Cochain>,
}

impl InfinitesimalBase {
    pub fn dim_h2(&self) -> usize {
        self.representatives.len()
    }

    /// The base ring `B` as an algebra: basis `(1, h_1*, ..., h_r*)`, all
    /// products in the maximal ideal vanishing.
    pub fn base_ring(&self) -> Algebra {
        registry::null_algebra(1 + self.dim_h2())
    }

    /// `(α_1, h_1) · (α_2, h_2) = (α_1 α_2, α_1 h_2 + α_2 h_1)`.
    pub fn multiply_base(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.base_ring().multiply(x, y)
    }

    /// `μ_B` as a `K`-algebra on `B ⊗ A`, with `h_s* ⊗ e_a` at index
    /// `s * n + a` (`s = 0` for `1 ⊗ e_a`).
    pub fn total_algebra(&self) -> Algebra {
        let n = self.algebra.dim();
        let r = self.dim_h2();
        let mu = self.algebra.structure();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    let c = mu.get(&[a, b], k);
                    if !c.is_zero() {
                        entries.push((a, b, k, c.clone()));
                        for s in 1..=r {
                            entries.push((s * n + a, b, s * n + k, c.clone()));
                            entries.push((a, s * n + b, s * n + k, c.clone()));
                        }
                    }
                    for (i, phi) in self.representatives.iter().enumerate() {
                        let c = phi.get(&[a, b], k);
                        if !c.is_zero() {
                            entries.push((a, b, (i + 1) * n + k, c.clone()));
                        }
                    }
                }
            }
        }
        Algebra::from_constants((1 + r) * n, entries, None).expect("indices in range")
    }

    /// `μ_B` is associative iff every `φ_i` satisfies the order-1 equation.
    pub fn verify(&self) -> bool {
        let each = (0..self.dim_h2()).all(|i| {
            let mut c = vec![Scalar::zero(); self.dim_h2()];
            c[i] = Scalar::one();
            let def = push_out_infinitesimal(self, &c).expect("matching length");
            check_deformation_equation(&def).all_hold()
        });
        each && self.total_algebra().is_associative()
    }
}

pub fn universal_infinitesimal(alg: &Algebra) -> Result<InfinitesimalBase> {
    let h2 = cohomology(alg, 2)?;
    let base = InfinitesimalBase {
        algebra: alg.clone(),
        representatives: h2.representatives,
    };
    if !base.verify() {
        return Err(Error::InternalInconsistency("universal infinitesimal deformation is not associative".into()));
    }
    Ok(base)
}

/// Push-out along `h_i* ↦ c_i t` into `K[t]/(t^2)`: `μ_0 + t Σ c_i φ_i`.
pub fn push_out_infinitesimal(u: &InfinitesimalBase, c: &[Scalar]) -> Result<FormalDeformation> {
    if c.len() != u.dim_h2() {
        return Err(Error::DimensionMismatch {
            expected: u.dim_h2(),
            found: c.len(),
        });
    }
    let mut mu1 = Cochain::zero(2, u.algebra.dim());
    for (phi, ci) in u.representatives.iter().zip(c) {
        mu1.add_assign_scaled(phi, ci);
    }
    FormalDeformation::new(u.algebra.clone(), vec![mu1])
}
