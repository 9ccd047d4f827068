//! Degenerations as limits `lim_{t -> 0} f_t · A` of conjugated families.

mod fitting;

pub use fitting::{fitting, phi_degeneration, FittingData};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{apply_basis_change, check_unity, Algebra, LinearMap};
use crate::error::{Error, Result};
use crate::hochschild::{digits, tuple_count, Cochain};
use crate::linalg::Matrix;
use crate::poly::{Poly, RationalFn};
use crate::scalar::Scalar;

/// A square matrix with polynomial entries, `f_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Poly>>", into = "Vec<Vec<Poly>>")]
pub struct ParamLinearMap {
    rows: Vec<Vec<Poly>>,
    det: Poly,
}

impl TryFrom<Vec<Vec<Poly>>> for ParamLinearMap {
    type Error = Error;

    fn try_from(rows: Vec<Vec<Poly>>) -> Result<ParamLinearMap> {
        ParamLinearMap::new(rows)
    }
}

impl From<ParamLinearMap> for Vec<Vec<Poly>> {
    fn from(m: ParamLinearMap) -> Vec<Vec<Poly>> {
        m.rows
    }
}

/// Bareiss elimination; every division is exact over `K[t]`.
fn poly_determinant(rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    if n == 0 {
        return Poly::one();
    }
    let mut a = rows.to_vec();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

impl ParamLinearMap {
    pub fn new(rows: Vec<Vec<Poly>>) -> Result<ParamLinearMap> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let det = poly_determinant(&rows);
        if det.is_zero() {
            return Err(Error::IdenticallySingular);
        }
        Ok(ParamLinearMap { rows, det })
    }

    pub fn constant(m: &Matrix) -> Result<ParamLinearMap> {
        ParamLinearMap::new(
            m.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(Poly::constant).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: Vec<Poly>) -> Result<ParamLinearMap> {
        let n = entries.len();
        let rows = entries
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let mut row = vec![Poly::zero(); n];
                row[i] = p;
                row
            })
            .collect();
        ParamLinearMap::new(rows)
    }

    /// `diag(1, t, ..., t)`.
    pub fn unity_fixing_scaling(dim: usize) -> ParamLinearMap {
        let mut entries = vec![Poly::t(); dim];
        entries[0] = Poly::one();
        ParamLinearMap::diagonal(entries).expect("nonzero determinant")
    }

    /// `φ + t · id`.
    pub fn shifted(phi: &Matrix) -> ParamLinearMap {
        let n = phi.nrows();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = Poly::constant(phi[(i, j)].clone());
                        if i == j {
                            &c + &Poly::t()
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        ParamLinearMap::new(rows).expect("det(φ + t) is monic")
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn determinant(&self) -> &Poly {
        &self.det
    }

    pub fn eval(&self, t0: &Scalar) -> Matrix {
        Matrix::from_rows(self.rows.iter().map(|r| r.iter().map(|p| p.eval(t0)).collect()).collect())
    }

    /// `adj(f)` with `adj(f) f = det(f) Id`.
    pub fn adjugate(&self) -> Vec<Vec<Poly>> {
        let n = self.dim();
        if n == 1 {
            return vec![vec![Poly::one()]];
        }
        let minor = |skip_r: usize, skip_c: usize| -> Vec<Vec<Poly>> {
            self.rows
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != skip_r)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != skip_c)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect()
        };
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = poly_determinant(&minor(j, i));
                        if (i + j) % 2 == 0 {
                            d
                        } else {
                            -&d
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Structure constants that are rational functions of `t`, indexed like a
/// 2-cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamAlgebra {
    dim: usize,
    entries: Vec<RationalFn>,
    unity: Option<usize>,
}

impl ParamAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &RationalFn {
        &self.entries[(i * self.dim + j) * self.dim + k]
    }

    /// Unity index of the algebra the family was conjugated from.
    pub fn source_unity(&self) -> Option<usize> {
        self.unity
    }

    /// Specialize at `t0`; `None` if some entry has a pole there.
    pub fn eval(&self, t0: &Scalar) -> Option<Cochain> {
        let coeffs = self.entries.iter().map(|e| e.eval(t0)).collect::<Option<Vec<_>>>()?;
        Some(Cochain::from_coeffs(2, self.dim, coeffs).expect("shape"))
    }

    /// The associator, computed in the rational function field.
    pub fn associator_is_zero(&self) -> bool {
        let n = self.dim;
        for t in 0..tuple_count(n, 3) {
            let idx = digits(t, n, 3);
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            for s in 0..n {
                let mut acc = RationalFn::zero();
                for l in 0..n {
                    let left = self.constant(a, b, l).mul(self.constant(l, c, s));
                    let right = self.constant(b, c, l).mul(self.constant(a, l, s));
                    acc = acc.add(&left).sub(&right);
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// `μ_t = f_t^{-1} ∘ μ ∘ (f_t × f_t)`, with `f_t^{-1} = adj(f_t) / det(f_t)`.
pub fn conjugate_family(f: &ParamLinearMap, alg: &Algebra) -> Result<ParamAlgebra> {
    let n = alg.dim();
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.dim(),
        });
    }
    let adj = f.adjugate();
    let mut entries = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            // μ(f e_i, f e_j) with polynomial coordinates
            let mut v = vec![Poly::zero(); n];
            for a in 0..n {
                if f.entry(a, i).is_zero() {
                    continue;
                }
                for b in 0..n {
                    if f.entry(b, j).is_zero() {
                        continue;
                    }
                    let w = f.entry(a, i) * f.entry(b, j);
                    for (l, slot) in v.iter_mut().enumerate() {
                        let c = alg.constant(a, b, l);
                        if !c.is_zero() {
                            *slot = &*slot + &w.scale(c);
                        }
                    }
                }
            }
            for adj_row in &adj {
                let mut num = Poly::zero();
                for (l, p) in adj_row.iter().enumerate() {
                    if !p.is_zero() && !v[l].is_zero() {
                        num = &num + &(p * &v[l]);
                    }
                }
                entries.push(RationalFn::new(num, f.determinant().clone())?);
            }
        }
    }
    Ok(ParamAlgebra {
        dim: n,
        entries,
        unity: alg.unity(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pole {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleReport {
    pub poles: Vec<Pole>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Algebra(Algebra),
    Poles(PoleReport),
}

impl Limit {
    pub fn algebra(self) -> Option<Algebra> {
        match self {
            Limit::Algebra(a) => Some(a),
            Limit::Poles(_) => None,
        }
    }
}

/// The entrywise value at `t = 0`, or every entry with a pole there. The
/// unity index of the source is kept when it is still a unity.
pub fn limit_at_zero(pa: &ParamAlgebra) -> Result<Limit> {
    let n = pa.dim;
    let mut poles = Vec::new();
    for (pos, e) in pa.entries.iter().enumerate() {
        if let Some(v) = e.valuation_at_zero() {
            if v < 0 {
                let idx = digits(pos / n, n, 2);
                poles.push(Pole {
                    i: idx[0],
                    j: idx[1],
                    k: pos % n,
                    order: v.unsigned_abs(),
                });
            }
        }
    }
    if !poles.is_empty() {
        return Ok(Limit::Poles(PoleReport { poles }));
    }
    let mult = pa.eval(&Scalar::zero()).expect("no poles at zero");
    let alg = Algebra::new(mult, None)?;
    if !alg.is_associative() {
        return Err(Error::InternalInconsistency("limit of an associative family is not associative".into()));
    }
    Ok(Limit::Algebra(keep_unity(alg, pa.unity)))
}

pub(crate) fn keep_unity(alg: Algebra, unity: Option<usize>) -> Algebra {
    let candidate = alg.clone().with_unity(unity).expect("index in range");
    if candidate.unity().is_some() && check_unity(&candidate) {
        candidate
    } else {
        alg
    }
}

/// `f_t · A` at a point `t0` where `f(t0)` is invertible.
pub fn specialize(f: &ParamLinearMap, alg: &Algebra, t0: &Scalar) -> Result<Algebra> {
    apply_basis_change(&LinearMap::new(f.eval(t0))?, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry;
    use crate::scalar::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn a1_to_a0_map() -> ParamLinearMap {
        ParamLinearMap::diagonal(vec![Poly::one(), Poly::t()]).unwrap()
    }

    #[test]
    fn determinant_and_adjugate() {
        let t = Poly::t();
        let f = ParamLinearMap::new(vec![
            vec![Poly::one(), t.clone()],
            vec![Poly::constant(int(2)), &t * &t],
        ])
        .unwrap();
        // t^2 - 2t
        assert_eq!(f.determinant(), &Poly::new(vec![int(0), int(-2), int(1)]));
        let adj = f.adjugate();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Poly::zero();
                for l in 0..2 {
                    s = &s + &(&adj[i][l] * f.entry(l, j));
                }
                let expected = if i == j { f.determinant().clone() } else { Poly::zero() };
                assert_eq!(s, expected);
            }
        }
        assert!(matches!(
            ParamLinearMap::new(vec![vec![t.clone(), t.clone()], vec![t.clone(), t]]),
            Err(Error::IdenticallySingular)
        ));
    }

    #[test]
    fn two_dimensional_family() {
        let pa = conjugate_family(&a1_to_a0_map(), &registry::a1()).unwrap();
        assert_eq!(pa.constant(1, 1, 1), &RationalFn::from_poly(Poly::t()));
        assert_eq!(pa.constant(0, 1, 1), &RationalFn::constant(int(1)));
        assert_eq!(pa.constant(1, 0, 1), &RationalFn::constant(int(1)));
        assert!(pa.associator_is_zero());
        assert_eq!(limit_at_zero(&pa).unwrap(), Limit::Algebra(registry::a0()));
    }

    #[test]
    fn constant_family_is_a_basis_change() {
        let m = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(0), int(3)]]);
        let pa = conjugate_family(&ParamLinearMap::constant(&m).unwrap(), &registry::a1()).unwrap();
        let fixed = apply_basis_change(&LinearMap::new(m).unwrap(), &registry::a1()).unwrap();
        assert_eq!(pa.eval(&int(7)).unwrap(), *fixed.structure());
    }

    #[test]
    fn scaling_degenerates_to_the_null_algebra() {
        for (name, alg) in registry::all() {
            let n = alg.dim();
            let pa = conjugate_family(&ParamLinearMap::unity_fixing_scaling(n), &alg).unwrap();
            // non-unity products scale as t^2 C^0 e_0 + t Σ_{k>0} C^k e_k
            for i in 1..n {
                for j in 1..n {
                    for k in 0..n {
                        let c = alg.constant(i, j, k).clone();
                        let power = if k == 0 { 2 } else { 1 };
                        assert_eq!(pa.constant(i, j, k), &RationalFn::from_poly(Poly::monomial(c, power)), "{name}");
                    }
                }
            }
            assert_eq!(limit_at_zero(&pa).unwrap(), Limit::Algebra(registry::null_algebra(n)), "{name}");
        }
    }

    #[test]
    fn poles_are_reported() {
        // f e_0 = e_0 + e_1, f e_1 = t e_1 on K[x]/(x^2):
        // f^{-1}((e_0 + e_1)^2) = f^{-1}(e_0 + 2 e_1) = e_0 + e_1 / t.
        let f = ParamLinearMap::new(vec![vec![Poly::one(), Poly::zero()], vec![Poly::one(), Poly::t()]]).unwrap();
        let pa = conjugate_family(&f, &registry::a0()).unwrap();
        assert!(pa.associator_is_zero());
        let Limit::Poles(r) = limit_at_zero(&pa).unwrap() else {
            panic!("expected poles");
        };
        assert_eq!(r.poles, vec![Pole { i: 0, j: 0, k: 1, order: 1 }]);
    }

    #[test]
    fn specialization_is_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = Poly::t();
        let f = ParamLinearMap::new(vec![
            vec![Poly::one(), t.clone(), Poly::zero()],
            vec![Poly::zero(), &t + &Poly::one(), Poly::constant(int(2))],
            vec![t.clone(), Poly::zero(), &t * &t],
        ])
        .unwrap();
        let roots = f.determinant().rational_roots();
        let alg = registry::upper_triangular();
        let pa = conjugate_family(&f, &alg).unwrap();
        assert!(pa.associator_is_zero());
        let mut done = 0;
        while done < 5 {
            let t0 = frac(rng.gen_range(-20..=20), rng.gen_range(1..=7));
            if roots.contains(&t0) {
                continue;
            }
            let direct = specialize(&f, &alg, &t0).unwrap();
            assert_eq!(&pa.eval(&t0).unwrap(), direct.structure());
            done += 1;
        }
    }

    #[test]
    fn degeneration_commutes_with_constant_basis_change() {
        // (f_t g) · μ = g · (f_t · μ), so the limit commutes with g.
        let alg = registry::truncated_polynomial(3);
        let g = Matrix::from_rows(vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(2), int(1)],
            vec![int(0), int(0), int(1)],
        ]);
        let f = ParamLinearMap::new(vec![
            vec![Poly::one(), Poly::zero(), Poly::zero()],
            vec![Poly::zero(), Poly::t(), Poly::zero()],
            vec![Poly::zero(), Poly::zero(), &Poly::t() * &Poly::t()],
        ])
        .unwrap();
        let fg_rows: Vec<Vec<Poly>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let mut s = Poly::zero();
                        for l in 0..3 {
                            s = &s + &f.entry(i, l).scale(&g[(l, j)]);
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let fg = ParamLinearMap::new(fg_rows).unwrap();
        let g = LinearMap::new(g).unwrap();
        let lhs = limit_at_zero(&conjugate_family(&fg, &alg).unwrap()).unwrap().algebra().unwrap();
        let lim = limit_at_zero(&conjugate_family(&f, &alg).unwrap()).unwrap().algebra().unwrap();
        assert_eq!(lhs, apply_basis_change(&g, &lim).unwrap());
    }
}
