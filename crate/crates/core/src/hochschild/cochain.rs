use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A `d`-linear map `V^d -> V` on an `n`-dimensional space.
///
/// Coefficients are stored row-major by input multi-index with the output
/// index last: the coefficient of `e_k` in `phi(e_{i1}, ..., e_{id})` sits at
/// `((i1 * n + i2) * n + ... + id) * n + k`. A degree-2 cochain is exactly a
/// table of structure constants `C_ij^k`. Degree 0 (a single vector) is
/// allowed so that `B^1` can be computed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    dim: usize,
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(degree {}, dim {}) {{", self.degree, self.dim)?;
        let mut first = true;
        for (pos, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (idx, k) = self.decode(pos);
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, " {idx:?}->{k}: {c}")?;
        }
        write!(f, " }}")
    }
}

pub(crate) fn tuple_count(n: usize, d: usize) -> usize {
    n.pow(d as u32)
}

/// Decode a flat input index into its multi-index digits.
pub(crate) fn digits(mut flat: usize, n: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for slot in out.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    out
}

pub(crate) fn encode(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

impl Cochain {
    pub fn zero(degree: usize, dim: usize) -> Cochain {
        Cochain {
            degree,
            dim,
            coeffs: vec![Scalar::zero(); tuple_count(dim, degree) * dim],
        }
    }

    pub fn from_coeffs(degree: usize, dim: usize, coeffs: Vec<Scalar>) -> Result<Cochain> {
        let expected = tuple_count(dim, degree) * dim;
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Cochain { degree, dim, coeffs })
    }

    pub fn from_fn(degree: usize, dim: usize, mut f: impl FnMut(&[usize], usize) -> Scalar) -> Cochain {
        let mut c = Cochain::zero(degree, dim);
        for t in 0..tuple_count(dim, degree) {
            let idx = digits(t, dim, degree);
            for k in 0..dim {
                c.coeffs[t * dim + k] = f(&idx, k);
            }
        }
        c
    }

    /// The identity map as a 1-cochain.
    pub fn identity(dim: usize) -> Cochain {
        Cochain::from_fn(1, dim, |idx, k| if idx[0] == k { Scalar::one() } else { Scalar::zero() })
    }

    /// A linear map (matrix acting on column vectors) as a 1-cochain.
    pub fn from_linear_map(m: &Matrix) -> Cochain {
        assert!(m.is_square());
        Cochain::from_fn(1, m.nrows(), |idx, k| m[(k, idx[0])].clone())
    }

    /// Inverse of [`Cochain::from_linear_map`] for degree 1.
    pub fn to_linear_map(&self) -> Matrix {
        assert_eq!(self.degree, 1);
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for k in 0..n {
                m[(k, i)] = self.get(&[i], k).clone();
            }
        }
        m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn position(&self, idx: &[usize], k: usize) -> usize {
        debug_assert_eq!(idx.len(), self.degree);
        encode(idx, self.dim) * self.dim + k
    }

    /// Input multi-index and output index of a flat position.
    pub fn decode(&self, pos: usize) -> (Vec<usize>, usize) {
        (digits(pos / self.dim, self.dim, self.degree), pos % self.dim)
    }

    pub fn get(&self, idx: &[usize], k: usize) -> &Scalar {
        &self.coeffs[self.position(idx, k)]
    }

    pub fn set(&mut self, idx: &[usize], k: usize, value: Scalar) {
        let p = self.position(idx, k);
        self.coeffs[p] = value;
    }

    /// `phi(e_idx)` as a coordinate vector.
    pub fn on_basis(&self, idx: &[usize]) -> &[Scalar] {
        let start = encode(idx, self.dim) * self.dim;
        &self.coeffs[start..start + self.dim]
    }

    pub(crate) fn on_flat(&self, t: usize) -> &[Scalar] {
        &self.coeffs[t * self.dim..(t + 1) * self.dim]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn same_shape(&self, other: &Cochain) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.same_shape(other).expect("cochain shapes differ");
        Cochain {
            degree: self.degree,
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.same_shape(other).expect("cochain shapes differ");
        Cochain {
            degree: self.degree,
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        Cochain {
            degree: self.degree,
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Scalar::one())
    }

    pub fn add_assign_scaled(&mut self, other: &Cochain, s: &Scalar) {
        self.same_shape(other).expect("cochain shapes differ");
        if s.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    /// Evaluate on arbitrary coordinate vectors.
    pub fn eval(&self, args: &[&[Scalar]]) -> Vec<Scalar> {
        assert_eq!(args.len(), self.degree);
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for t in 0..tuple_count(n, self.degree) {
            let idx = digits(t, n, self.degree);
            let mut w = Scalar::one();
            for (slot, &i) in idx.iter().enumerate() {
                let a = &args[slot][i];
                if a.is_zero() {
                    w = Scalar::zero();
                    break;
                }
                w *= a;
            }
            if w.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(self.on_flat(t)) {
                if !c.is_zero() {
                    *o += &w * c;
                }
            }
        }
        out
    }

    /// `out ∘ phi ∘ (g_1 × ... × g_d)` for linear maps given as matrices.
    pub fn transform(&self, out: &Matrix, inputs: &[&Matrix]) -> Cochain {
        assert_eq!(inputs.len(), self.degree);
        let mut cur = self.clone();
        for (slot, g) in inputs.iter().enumerate() {
            cur = cur.precompose_slot(slot, g);
        }
        cur.postcompose(out)
    }

    /// `phi(x_1, ..., g x_slot, ..., x_d)`.
    pub fn precompose_slot(&self, slot: usize, g: &Matrix) -> Cochain {
        let n = self.dim;
        let d = self.degree;
        let mut res = Cochain::zero(d, n);
        for t in 0..tuple_count(n, d) {
            let mut idx = digits(t, n, d);
            let i = idx[slot];
            for a in 0..n {
                let w = &g[(a, i)];
                if w.is_zero() {
                    continue;
                }
                idx[slot] = a;
                let src = encode(&idx, n);
                let src_vals = &self.coeffs[src * n..(src + 1) * n];
                for (k, c) in src_vals.iter().enumerate() {
                    if !c.is_zero() {
                        res.coeffs[t * n + k] += w * c;
                    }
                }
            }
        }
        res
    }

    /// `f ∘ phi`.
    pub fn postcompose(&self, f: &Matrix) -> Cochain {
        let n = self.dim;
        let mut res = Cochain::zero(self.degree, n);
        for t in 0..tuple_count(n, self.degree) {
            let v = f.mul_vec(self.on_flat(t));
            res.coeffs[t * n..(t + 1) * n].clone_from_slice(&v);
        }
        res
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn layout_is_row_major_with_output_last() {
        let mut c = Cochain::zero(2, 3);
        c.set(&[1, 2], 0, int(7));
        assert_eq!(c.position(&[1, 2], 0), (3 + 2) * 3);
        assert_eq!(c.decode(15), (vec![1, 2], 0));
        assert_eq!(c.on_basis(&[1, 2]), &[int(7), int(0), int(0)]);
    }

    #[test]
    fn eval_matches_basis_values() {
        let c = Cochain::from_fn(2, 2, |idx, k| int((idx[0] * 4 + idx[1] * 2 + k) as i64));
        let e0 = [int(1), int(0)];
        let e1 = [int(0), int(1)];
        assert_eq!(c.eval(&[&e1, &e0]), c.on_basis(&[1, 0]).to_vec());
        let x = [int(2), int(-1)];
        // bilinear: c(x, e1) = 2 c(e0, e1) - c(e1, e1)
        let lhs = c.eval(&[&x, &e1]);
        let rhs: Vec<_> = c
            .on_basis(&[0, 1])
            .iter()
            .zip(c.on_basis(&[1, 1]))
            .map(|(a, b)| a * int(2) - b)
            .collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn linear_map_round_trip() {
        let m = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(3), int(4)]]);
        let c = Cochain::from_linear_map(&m);
        assert_eq!(c.to_linear_map(), m);
        assert_eq!(c.eval(&[&[int(1), int(0)]]), m.column(0));
    }
}
