//! Diagnostics on the variety of structure constants: tangent spaces, orbit
//! dimension, rigidity, idempotents and the two-dimensional census.

mod census;
mod idempotents;

pub use census::{
    building_blocks, census_alg2, classify_alg2, invariants, Alg2Class, BuildingBlock, Census, CensusEntry,
    Degeneration, Invariants,
};
pub use idempotents::{find_unity, idempotent_continuation, idempotent_search, IdempotentSearch, SearchStrategy};

use serde::{Deserialize, Serialize};

use crate::algebra::{registry, Algebra};
use crate::error::Result;
use crate::hochschild::{cocycle_basis, cohomology, sq_class, Cochain};
use crate::scalar::Scalar;

/// `dim Der(A) = dim Z^1(A, A)`, the tangent space of `Aut(A)` at the identity.
pub fn derivation_dim(alg: &Algebra) -> Result<usize> {
    alg.require_associative()?;
    Ok(cocycle_basis(alg, 1).len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentDims {
    /// Zariski tangent space of the variety at `A`.
    pub dim_z2: usize,
    /// Tangent space of the orbit.
    pub dim_b2: usize,
    pub dim_h2: usize,
}

pub fn tangent_dims(alg: &Algebra) -> Result<TangentDims> {
    let h = cohomology(alg, 2)?;
    Ok(TangentDims {
        dim_z2: h.dim_z,
        dim_b2: h.dim_b,
        dim_h2: h.dim_h,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqEvidence {
    pub representative: usize,
    /// Whether `φ ∘ φ ∈ B^3` for the `H^2` representative `φ`.
    pub square_is_coboundary: bool,
}

pub const FORMALLY_RIGID: &str = "formally rigid: YES (via H²=0)";
pub const UNDETERMINED: &str = "formally rigid: undetermined by implemented criteria";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub dim: usize,
    pub dim_z2: usize,
    pub dim_b2: usize,
    pub dim_h2: usize,
    pub dim_h3: usize,
    pub dim_der: usize,
    pub orbit_dim: usize,
    pub algebraically_rigid: bool,
    pub verdict: String,
    pub sq_evidence: Vec<SqEvidence>,
    /// A first-order deformation `μ_0 + t φ` with `φ ∉ B^2`, when one exists.
    pub witness: Option<Cochain>,
    pub notes: Vec<String>,
}

pub fn rigidity_report(alg: &Algebra) -> Result<RigidityReport> {
    let h2 = cohomology(alg, 2)?;
    let h3 = cohomology(alg, 3)?;
    let dim_der = derivation_dim(alg)?;
    let n = alg.dim();
    let sq_evidence = h2
        .representatives
        .iter()
        .enumerate()
        .map(|(i, phi)| {
            sq_class(alg, phi).map(|s| SqEvidence {
                representative: i,
                square_is_coboundary: s.is_zero_class(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rigid = h2.dim_h == 0;
    let mut notes = Vec::new();
    if !rigid {
        notes.push("H² ≠ 0 does not by itself rule out formal rigidity".to_string());
        if sq_evidence.iter().all(|e| !e.square_is_coboundary) {
            notes.push("Sq(φ) ∉ B³ for every H² basis representative φ".to_string());
        }
    }
    if h3.dim_h == 0 {
        notes.push("H³ = 0: every infinitesimal deformation is unobstructed".to_string());
    }
    Ok(RigidityReport {
        dim: n,
        dim_z2: h2.dim_z,
        dim_b2: h2.dim_b,
        dim_h2: h2.dim_h,
        dim_h3: h3.dim_h,
        dim_der,
        orbit_dim: n * n - dim_der,
        algebraically_rigid: rigid,
        verdict: if rigid { FORMALLY_RIGID } else { UNDETERMINED }.to_string(),
        sq_evidence,
        witness: h2.representatives.first().cloned(),
        notes,
    })
}

/// `K<x, y>/(x^2, y^2, yx - t0 xy)` in the basis `(1, x, y, xy)`.
pub fn quantum_plane_family(t0: &Scalar) -> Algebra {
    registry::quantum_plane(t0)
}
