use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::idempotents::{find_unity, idempotent_search, SearchStrategy};
use super::{derivation_dim, rigidity_report};
use crate::algebra::{registry, Algebra};
use crate::degeneration::{conjugate_family, limit_at_zero, Limit, ParamLinearMap};
use crate::error::{Error, Result};
use crate::hochschild::{cohomology, Cochain};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

/// Isomorphism invariants; each component is unchanged by a change of basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub dim_der: usize,
    pub dim_h2: usize,
    /// Rank of the span of the idempotents found by the default search.
    pub idempotent_count: usize,
    pub associative: bool,
    /// Whether some element is a two-sided identity, whatever the basis.
    pub unital: bool,
}

pub fn invariants(alg: &Algebra) -> Result<Invariants> {
    alg.require_associative()?;
    Ok(Invariants {
        dim_der: derivation_dim(alg)?,
        dim_h2: cohomology(alg, 2)?.dim_h,
        idempotent_count: idempotent_search(alg, &SearchStrategy::default())?.independent,
        associative: true,
        unital: find_unity(alg).is_some(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub id: String,
    pub algebra: Algebra,
    pub invariants: Invariants,
    pub rigid: bool,
    /// First-order deformation off the orbit, for non-rigid entries.
    pub witness: Option<Cochain>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degeneration {
    pub from: String,
    pub to: String,
    pub map: ParamLinearMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub dim: usize,
    pub entries: Vec<CensusEntry>,
    /// Each one verified by computing `lim_{t -> 0} f_t · from`.
    pub degenerations: Vec<Degeneration>,
    pub rigid_count: usize,
    pub component_count: usize,
    pub notes: Vec<String>,
}

fn entry(id: &str, alg: Algebra) -> Result<CensusEntry> {
    let report = rigidity_report(&alg)?;
    Ok(CensusEntry {
        id: id.to_string(),
        invariants: invariants(&alg)?,
        rigid: report.algebraically_rigid,
        witness: report.witness,
        algebra: alg,
    })
}

/// Unital associative algebras of dimension 2 up to isomorphism over the
/// algebraic closure: `A0 = K[x]/(x^2)` and `A1 = K x K`.
///
/// Components are counted as the orbits not lying in the closure of another
/// orbit. That is exact here because the list of orbits is complete and the
/// only candidate degeneration, `A1 -> A0`, is verified.
pub fn census_alg2() -> Result<Census> {
    let entries = vec![entry("A0", registry::a0())?, entry("A1", registry::a1())?];
    let map = ParamLinearMap::unity_fixing_scaling(2);
    let limit = limit_at_zero(&conjugate_family(&map, &entries[1].algebra)?)?;
    if limit != Limit::Algebra(entries[0].algebra.clone()) {
        return Err(Error::InternalInconsistency("A1 does not degenerate to A0".into()));
    }
    let degenerations = vec![Degeneration {
        from: "A1".into(),
        to: "A0".into(),
        map,
    }];
    let rigid_count = entries.iter().filter(|e| e.rigid).count();
    let component_count = entries
        .iter()
        .filter(|e| !degenerations.iter().any(|d| d.to == e.id))
        .count();
    let orbit = |e: &CensusEntry| 4 - e.invariants.dim_der;
    let notes = vec![
        format!(
            "orbit dimensions: A0 {}, A1 {}; a degeneration strictly lowers orbit dimension, so A0 -> A1 is impossible",
            orbit(&entries[0]),
            orbit(&entries[1])
        ),
        "over the rationals, x^2 = d with d not a square gives a quadratic field, isomorphic to A1 after extending scalars"
            .into(),
    ];
    Ok(Census {
        dim: 2,
        entries,
        degenerations,
        rigid_count,
        component_count,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum Alg2Class {
    A0,
    A1,
    /// `K(√d)` with `d` not a rational square; becomes `A1` over the closure.
    QuadraticField {
        #[serde(with = "scalar::serde_str")]
        discriminant: Scalar,
    },
}

fn is_rational_square(q: &Scalar) -> bool {
    if q.is_negative() {
        return false;
    }
    let perfect = |v: &num::BigInt| {
        let r = v.sqrt();
        &r * &r == *v
    };
    perfect(q.numer()) && perfect(q.denom())
}

/// Writes `x^2 = a + b x` for `x` completing the unity to a basis and reads
/// off the class from the discriminant `b^2 + 4a`, which changes only by
/// nonzero square factors under `x -> λ x + c`.
pub fn classify_alg2(alg: &Algebra) -> Result<Alg2Class> {
    if alg.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: alg.dim(),
        });
    }
    alg.require_associative()?;
    let u = find_unity(alg).ok_or_else(|| Error::InvalidInput("algebra has no unity".into()))?;
    let x = if u[1].is_zero() {
        vec![Scalar::zero(), Scalar::one()]
    } else {
        vec![Scalar::one(), Scalar::zero()]
    };
    let basis = Matrix::from_columns(2, &[u, x.clone()]);
    let coords = basis
        .solve(&alg.multiply(&x, &x))
        .expect("(u, x) is a basis")
        .particular;
    let (a, b) = (&coords[0], &coords[1]);
    let disc = b * b + Scalar::from_integer(4.into()) * a;
    Ok(if disc.is_zero() {
        Alg2Class::A0
    } else if is_rational_square(&disc) {
        Alg2Class::A1
    } else {
        Alg2Class::QuadraticField { discriminant: disc }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingBlock {
    pub id: String,
    pub algebra: Algebra,
    pub invariants: Invariants,
    pub rigid: bool,
    /// `diag(1, t, ..., t)` takes it to the null algebra; verified.
    pub degenerates_to_null: bool,
}

/// Registry algebras of dimension `n` with their invariants and rigidity.
/// No claim is made that these exhaust the components.
pub fn building_blocks(n: usize) -> Result<Vec<BuildingBlock>> {
    let mut out = Vec::new();
    for (id, alg) in registry::all().into_iter().filter(|(_, a)| a.dim() == n) {
        let e = entry(&id, alg)?;
        let family = conjugate_family(&ParamLinearMap::unity_fixing_scaling(n), &e.algebra)?;
        let degenerates_to_null = limit_at_zero(&family)? == Limit::Algebra(registry::null_algebra(n));
        out.push(BuildingBlock {
            id: e.id,
            algebra: e.algebra,
            invariants: e.invariants,
            rigid: e.rigid,
            degenerates_to_null,
        });
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{apply_basis_change, LinearMap};
    use crate::scalar::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> LinearMap {
        loop {
            let m = Matrix::from_rows(
                (0..n)
                    .map(|_| (0..n).map(|_| frac(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect())
                    .collect(),
            );
            if let Ok(f) = LinearMap::new(m) {
                if !f.determinant().is_zero() {
                    return f;
                }
            }
        }
    }

    #[test]
    fn two_dimensional_census() {
        let c = census_alg2().unwrap();
        assert_eq!(c.entries.len(), 2);
        assert_eq!(c.rigid_count, 1);
        assert_eq!(c.component_count, 1);
        let a0 = &c.entries[0];
        assert!(!a0.rigid);
        assert!(a0.witness.is_some());
        assert_eq!(a0.invariants.dim_der, 1);
        assert_eq!(c.entries[1].invariants.idempotent_count, 2);
        assert_ne!(a0.invariants, c.entries[1].invariants);
    }

    #[test]
    fn unity_is_found_in_any_basis() {
        assert_eq!(find_unity(&registry::a1()), Some(vec![int(1), int(0)]));
        assert_eq!(find_unity(&Algebra::zero_product(2)), None);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_invertible(&mut rng, 3);
        let moved = apply_basis_change(&f, &registry::upper_triangular()).unwrap();
        let u = find_unity(&moved).unwrap();
        for i in 0..3 {
            let e = moved.basis_vector(i);
            assert_eq!(moved.multiply(&u, &e), e);
            assert_eq!(moved.multiply(&e, &u), e);
        }
    }

    #[test]
    fn classification_by_discriminant() {
        assert_eq!(classify_alg2(&registry::a0()).unwrap(), Alg2Class::A0);
        assert_eq!(classify_alg2(&registry::a1()).unwrap(), Alg2Class::A1);
        // x^2 = 2
        let q = Algebra::from_constants(2, vec![(0, 0, 0, int(1)), (0, 1, 1, int(1)), (1, 0, 1, int(1)), (1, 1, 0, int(2))], Some(0))
            .unwrap();
        assert_eq!(classify_alg2(&q).unwrap(), Alg2Class::QuadraticField { discriminant: int(8) });
        // x^2 = 1/4 + x: discriminant 2 is not a square
        let r = Algebra::from_constants(
            2,
            vec![(0, 0, 0, int(1)), (0, 1, 1, int(1)), (1, 0, 1, int(1)), (1, 1, 0, frac(1, 4)), (1, 1, 1, int(1))],
            Some(0),
        )
        .unwrap();
        assert!(matches!(classify_alg2(&r).unwrap(), Alg2Class::QuadraticField { .. }));
        assert!(classify_alg2(&Algebra::zero_product(2)).is_err());
    }

    #[test]
    fn classes_and_invariants_survive_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for alg in [registry::a0(), registry::a1(), registry::upper_triangular(), registry::split_dual_numbers()] {
            let base = invariants(&alg).unwrap();
            let class = (alg.dim() == 2).then(|| classify_alg2(&alg).unwrap());
            for _ in 0..3 {
                let f = random_invertible(&mut rng, alg.dim());
                let moved = apply_basis_change(&f, &alg).unwrap();
                assert_eq!(invariants(&moved).unwrap(), base);
                if let Some(c) = &class {
                    assert_eq!(&classify_alg2(&moved).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn building_blocks_of_dimension_three() {
        let blocks = building_blocks(3).unwrap();
        assert!(blocks.len() >= 3);
        assert!(blocks.iter().all(|b| b.algebra.dim() == 3 && b.degenerates_to_null));
        let rigid: Vec<&str> = blocks.iter().filter(|b| b.rigid).map(|b| b.id.as_str()).collect();
        assert!(!rigid.is_empty());
        for b in &blocks {
            assert_eq!(b.rigid, b.invariants.dim_h2 == 0);
        }
    }
}
