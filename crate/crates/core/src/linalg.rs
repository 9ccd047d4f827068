//! Exact dense linear algebra over the rationals.
//!
//! Row reduction is fraction-free: every row is scaled to a primitive integer
//! vector, eliminations are cross-multiplications followed by division by the
//! row content, and the reduced echelon form is only converted back to
//! rationals at the end. Pivots are taken left to right in input order, so all
//! outputs are deterministic.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::scalar::{denominator_lcm, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_columns(len: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(len, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), len);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::of_rows(self.to_rows(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{ x : A x = 0 }`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.echelon().nullspace()
    }

    /// All solutions of `A x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<AffineSolution> {
        assert_eq!(b.len(), self.rows);
        let aug: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(b[r].clone());
                row
            })
            .collect();
        let ech = Echelon::of_rows(aug, self.cols + 1);
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut particular = vec![Scalar::zero(); self.cols];
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            particular[p] = row[self.cols].clone();
        }
        let kernel = ech.nullspace_truncated(self.cols);
        Some(AffineSolution { particular, kernel })
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        // Bareiss on the integer matrix obtained by clearing row denominators.
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|r| {
                let (row, l) = integer_row(self.row(r));
                scale *= l.to_integer();
                row
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Scalar::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        BigRational::new(sign * &a[n - 1][n - 1], scale)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        let ech = Echelon::of_rows(aug, 2 * n);
        if ech.rank() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_rows(
            ech.rows.iter().map(|row| row[n..].to_vec()).collect(),
        ))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
}

/// Scale a rational row to a primitive integer row. Returns the row and the
/// positive factor it was multiplied by (up to the content division, which is
/// folded into the factor as a rational).
fn integer_row(row: &[Scalar]) -> (Vec<BigInt>, BigRational) {
    let l = denominator_lcm(row.iter());
    let ints: Vec<BigInt> = row
        .iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect();
    (ints, BigRational::from_integer(l))
}

fn content(row: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in row {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

fn make_primitive(row: &mut [BigInt]) {
    let g = content(row);
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x / &g;
            }
        }
    }
}

/// Reduced row echelon form: nonzero rows only, each with a unit pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn of_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Echelon {
        let mut ints: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                debug_assert_eq!(r.len(), cols);
                let (mut v, _) = integer_row(r);
                make_primitive(&mut v);
                v
            })
            .filter(|v: &Vec<BigInt>| v.iter().any(|x| !x.is_zero()))
            .collect();

        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == ints.len() {
                break;
            }
            // Pick the smallest nonzero entry in the column to keep growth down.
            let Some(p) = (r..ints.len())
                .filter(|&i| !ints[i][c].is_zero())
                .min_by_key(|&i| ints[i][c].bits())
            else {
                continue;
            };
            ints.swap(r, p);
            let pivot_row = std::mem::take(&mut ints[r]);
            let support: Vec<usize> = (c..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
            let a = pivot_row[c].clone();
            for (i, row) in ints.iter_mut().enumerate() {
                if i == r || row.is_empty() || row[c].is_zero() {
                    continue;
                }
                let g = a.gcd(&row[c]);
                let ra = &a / &g;
                let rb = &row[c] / &g;
                if !ra.is_one() {
                    for x in row.iter_mut() {
                        if !x.is_zero() {
                            *x *= &ra;
                        }
                    }
                }
                for &j in &support {
                    row[j] -= &rb * &pivot_row[j];
                }
                make_primitive(row);
            }
            ints[r] = pivot_row;
            pivots.push(c);
            r += 1;
        }
        ints.truncate(r);

        let rows = ints
            .into_iter()
            .zip(&pivots)
            .map(|(row, &p)| {
                let lead = BigRational::from_integer(row[p].clone());
                row.into_iter()
                    .map(|x| {
                        if x.is_zero() {
                            Scalar::zero()
                        } else {
                            BigRational::from_integer(x) / &lead
                        }
                    })
                    .collect()
            })
            .collect();
        Echelon { cols, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.nullspace_truncated(self.cols)
    }

    /// Nullspace basis restricted to the first `cols` columns (used when an
    /// augmented column has been appended).
    fn nullspace_truncated(&self, cols: usize) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            if p < cols {
                is_pivot[p] = true;
            }
        }
        (0..cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Scalar::zero(); cols];
                v[f] = Scalar::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if p < cols && !row[f].is_zero() {
                        v[p] = -row[f].clone();
                    }
                }
                v
            })
            .collect()
    }
}

/// A linear subspace of `Q^dim` held in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    echelon: Echelon,
}

impl Subspace {
    pub fn spanned_by(dim: usize, vectors: Vec<Vec<Scalar>>) -> Subspace {
        Subspace {
            echelon: Echelon::of_rows(vectors, dim),
        }
    }

    /// Column space of a matrix.
    pub fn image(m: &Matrix) -> Subspace {
        Subspace::spanned_by(m.nrows(), m.transpose().to_rows())
    }

    pub fn ambient_dim(&self) -> usize {
        self.echelon.cols
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.echelon.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.echelon.pivots
    }

    /// Normal form of `v` modulo the subspace: the unique representative of
    /// `v + W` vanishing on every pivot coordinate.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (row, &p) in self.echelon.rows.iter().zip(&self.echelon.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= &c * x;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Scale a nonzero vector so its first nonzero entry is positive and all
/// entries are coprime integers. Used as a canonical sort key.
pub fn primitive_integer(v: &[Scalar]) -> Vec<BigInt> {
    let (mut ints, _) = integer_row(v);
    make_primitive(&mut ints);
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&ns[0])));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = -52 - 2 = -54
        assert_eq!(a.determinant(), int(-54));
        let b = Matrix::from_rows(vec![vec![frac(1, 2), int(1)], vec![int(0), frac(2, 3)]]);
        assert_eq!(b.determinant(), frac(1, 3));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), int(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), int(0));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_reports_affine_space() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let sol = a.solve(&[int(2), int(3)]).unwrap();
        assert_eq!(a.mul_vec(&sol.particular), vec![int(2), int(3)]);
        assert_eq!(sol.kernel.len(), 1);
        assert!(m(&[&[1, 1], &[1, 1]]).solve(&[int(1), int(2)]).is_none());
    }

    #[test]
    fn subspace_normal_form() {
        let w = Subspace::spanned_by(3, vec![vec![int(1), int(1), int(0)]]);
        assert!(w.contains(&[int(2), int(2), int(0)]));
        assert!(!w.contains(&[int(1), int(0), int(0)]));
        assert_eq!(w.reduce(&[int(1), int(0), int(5)]), vec![int(0), int(-1), int(5)]);
    }
}
