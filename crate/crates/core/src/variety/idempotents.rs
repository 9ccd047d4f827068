use nalgebra::{DMatrix, DVector};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{is_idempotent, unit_vector, Algebra};
use crate::deformation::FormalDeformation;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::poly::Poly;
use crate::scalar::{self, frac, int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStrategy {
    pub seed: u64,
    /// Random starting points for the floating-point Newton phase.
    pub newton_starts: usize,
    /// Largest denominator accepted by rational reconstruction.
    pub max_denominator: i64,
    /// Random elements whose spectral idempotents are computed exactly.
    pub spectral_samples: usize,
}

impl Default for SearchStrategy {
    fn default() -> Self {
        SearchStrategy {
            seed: 0,
            newton_starts: 32,
            max_denominator: 1000,
            spectral_samples: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentSearch {
    /// Distinct idempotents found, each verified exactly, sorted.
    #[serde(with = "scalar::serde_vec_vec")]
    pub idempotents: Vec<Vec<Scalar>>,
    /// Rank of the span of `idempotents`.
    pub independent: usize,
}

fn grid() -> Vec<Scalar> {
    vec![int(0), int(1), int(-1), int(2), int(-2), frac(1, 2), frac(-1, 2), int(3), frac(1, 3)]
}

/// Solves `u x = x u = x` for all `x`, linear in `u`.
pub fn find_unity(alg: &Algebra) -> Option<Vec<Scalar>> {
    let n = alg.dim();
    let mut rows = Vec::with_capacity(2 * n * n);
    let mut rhs = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| alg.constant(i, j, k).clone()).collect());
            rows.push((0..n).map(|i| alg.constant(j, i, k).clone()).collect());
            let v = if j == k { Scalar::one() } else { Scalar::zero() };
            rhs.push(v.clone());
            rhs.push(v);
        }
    }
    Matrix::from_rows(rows).solve(&rhs).map(|s| s.particular)
}

/// Product in the unitalization `K ⊕ A`; slot 0 is the adjoined unit.
fn unital_product(alg: &Algebra, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![&x[0] * &y[0]];
    let xy = alg.multiply(&x[1..], &y[1..]);
    for (k, v) in xy.into_iter().enumerate() {
        out.push(v + &x[0] * &y[k + 1] + &y[0] * &x[k + 1]);
    }
    out
}

/// `(g, s, t)` with `a s + b t = g = gcd(a, b)`.
fn bezout(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        (r0, r1, s0, s1, t0, t1) = (r1, r, s1, s, t1, t);
    }
    (r0, s0, t0)
}

/// Idempotents `p(x)` of the subalgebra generated by `x`, one per rational
/// root of the minimal polynomial of `x` in `K ⊕ A`.
fn spectral_idempotents(alg: &Algebra, x: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = alg.dim();
    let mut xp = vec![Scalar::zero()];
    xp.extend(x.iter().cloned());
    let mut one = vec![Scalar::zero(); n + 1];
    one[0] = Scalar::one();
    let mut powers = vec![one];
    let minimal = loop {
        let next = unital_product(alg, &xp, powers.last().expect("nonempty"));
        let span = Matrix::from_columns(n + 1, &powers);
        if let Some(sol) = span.solve(&next) {
            let mut c: Vec<Scalar> = sol.particular.into_iter().map(|v| -v).collect();
            c.push(Scalar::one());
            break Poly::new(c);
        }
        powers.push(next);
    };
    let eval = |p: &Poly| -> Vec<Scalar> {
        let (_, r) = p.div_rem(&minimal);
        let mut v = vec![Scalar::zero(); n + 1];
        for (c, pw) in r.coeffs().iter().zip(&powers) {
            for (a, b) in v.iter_mut().zip(pw) {
                *a += c * b;
            }
        }
        v
    };
    let mut out = Vec::new();
    for root in minimal.rational_roots() {
        let lin = Poly::new(vec![-root.clone(), Scalar::one()]);
        let mut local = Poly::one();
        let mut rest = minimal.clone();
        loop {
            let (q, r) = rest.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            rest = q;
            local = &local * &lin;
        }
        // p ≡ 1 mod (t - root)^k and p ≡ 0 mod the cofactor
        let (g, _, t) = bezout(&local, &rest);
        let p = &rest * &t.scale(&(Scalar::one() / g.leading()));
        let v = eval(&p);
        if v[0].is_zero() {
            out.push(v[1..].to_vec());
        }
    }
    out
}

fn newton(alg: &Algebra, start: Vec<f64>) -> Option<Vec<f64>> {
    let n = alg.dim();
    let c: Vec<f64> = alg.structure().coeffs().iter().map(scalar::to_f64).collect();
    let mut x = DVector::from_vec(start);
    for _ in 0..60 {
        let mut f = DVector::from_element(n, 0.0);
        let mut jac = DMatrix::from_element(n, n, 0.0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let cijk = c[(i * n + j) * n + k];
                    if cijk == 0.0 {
                        continue;
                    }
                    f[k] += cijk * x[i] * x[j];
                    jac[(k, i)] += cijk * x[j];
                    jac[(k, j)] += cijk * x[i];
                }
            }
        }
        f -= &x;
        for k in 0..n {
            jac[(k, k)] -= 1.0;
        }
        if f.norm() < 1e-13 {
            return Some(x.iter().copied().collect());
        }
        let step = jac.lu().solve(&f)?;
        x -= step;
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
    }
    None
}

/// Idempotents from exact candidates (scaled basis vectors, grid points on
/// coordinate planes, spectral idempotents of random elements, `u - e` for a
/// unity `u`) and from seeded Newton iteration with rational reconstruction. Every result is verified exactly;
/// the list is not guaranteed complete.
pub fn idempotent_search(alg: &Algebra, strategy: &SearchStrategy) -> Result<IdempotentSearch> {
    alg.require_associative()?;
    let n = alg.dim();
    let mut found: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); n]];
    let push = |v: Vec<Scalar>, found: &mut Vec<Vec<Scalar>>| {
        if is_idempotent(alg, &v) && !found.contains(&v) {
            found.push(v);
        }
    };

    // λ e_i with e_i e_i = c e_i gives λ = 1/c.
    for i in 0..n {
        let sq = alg.multiply(&unit_vector(n, i), &unit_vector(n, i));
        let c = sq[i].clone();
        if !c.is_zero() {
            let v: Vec<Scalar> = unit_vector(n, i).iter().map(|x| x / &c).collect();
            push(v, &mut found);
        }
    }
    let g = grid();
    for i in 0..n {
        for j in i + 1..n {
            for a in &g {
                for b in &g {
                    let mut v = vec![Scalar::zero(); n];
                    v[i] = a.clone();
                    v[j] = b.clone();
                    push(v, &mut found);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
    for _ in 0..strategy.spectral_samples {
        let x: Vec<Scalar> = (0..n).map(|_| int(rng.gen_range(-4..=4))).collect();
        for v in spectral_idempotents(alg, &x) {
            push(v, &mut found);
        }
    }
    for _ in 0..strategy.newton_starts {
        let start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let Some(x) = newton(alg, start) else { continue };
        let exact: Option<Vec<Scalar>> = x
            .iter()
            .map(|&v| scalar::reconstruct(v, strategy.max_denominator, 1e-9))
            .collect();
        if let Some(v) = exact {
            push(v, &mut found);
        }
    }

    if let Some(one) = find_unity(alg) {
        let complements: Vec<Vec<Scalar>> = found
            .iter()
            .map(|e| one.iter().zip(e).map(|(a, b)| a - b).collect())
            .collect();
        for v in complements {
            push(v, &mut found);
        }
    }

    found.sort_by(|a, b| {
        let ka: Vec<String> = a.iter().map(scalar::format).collect();
        let kb: Vec<String> = b.iter().map(scalar::format).collect();
        ka.cmp(&kb)
    });
    let independent = Subspace::spanned_by(n, found.clone()).dim();
    Ok(IdempotentSearch {
        idempotents: found,
        independent,
    })
}

fn add_to(acc: &mut [Scalar], v: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += b;
        }
    }
}

/// `X_t = x_0 + t X_1 + ... + t^m X_m` with `μ_t(X_t, X_t) = X_t` modulo
/// `t^{m+1}`. Terms of `def` beyond its order are taken to be zero. At each
/// order `(L_{x_0} + R_{x_0} - Id) X_k` is prescribed by lower orders.
pub fn idempotent_continuation(def: &FormalDeformation, x0: &[Scalar], order: usize) -> Result<Vec<Vec<Scalar>>> {
    let base = def.base();
    base.require_associative()?;
    let n = base.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x0.len(),
        });
    }
    if !is_idempotent(base, x0) {
        return Err(Error::InvalidInput("starting vector is not an idempotent of the base".into()));
    }
    let def = def.with_order(def.order().max(order));
    let mu = |a: usize, x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> { def.term(a).eval(&[x, y]) };
    let lin = base
        .left_multiplication(x0)
        .add(&base.right_multiplication(x0))
        .add(&Matrix::identity(n).scale(&-Scalar::one()));
    let mut xs: Vec<Vec<Scalar>> = vec![x0.to_vec()];
    for k in 1..=order {
        let mut rhs = vec![Scalar::zero(); n];
        for a in 0..=k {
            for b in 0..=k - a {
                let c = k - a - b;
                if a == 0 && (b == k || c == k) {
                    continue;
                }
                add_to(&mut rhs, &mu(a, &xs[b], &xs[c]));
            }
        }
        let rhs: Vec<Scalar> = rhs.into_iter().map(|v| -v).collect();
        let sol = lin.solve(&rhs).ok_or(Error::SingularLinearization { order: k })?;
        if !sol.kernel.is_empty() {
            return Err(Error::SingularLinearization { order: k });
        }
        xs.push(sol.particular);
    }
    for k in 0..=order {
        let mut lhs = vec![Scalar::zero(); n];
        for a in 0..=k {
            for b in 0..=k - a {
                add_to(&mut lhs, &mu(a, &xs[b], &xs[k - a - b]));
            }
        }
        if lhs != xs[k] {
            return Err(Error::InternalInconsistency(format!("idempotent equation fails at order {k}")));
        }
    }
    Ok(xs)
}
