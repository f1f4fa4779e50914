use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{is_finite_c, Real, C};

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from a row-major entry vector.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn diag(entries: &[C<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Column vector.
    pub fn column(entries: &[C<T>]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    /// 2x2 matrix `[[a, b], [c, d]]`.
    pub fn mat2(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: vec![a, b, c, d],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|&z| is_finite_c(z))
    }

    pub(crate) fn ensure_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{what} has non-finite entries"
            )))
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self^* rhs` without materializing the adjoint.
    pub fn adjoint_mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "adjoint_mul dimension mismatch");
        Self::from_fn(self.cols, rhs.cols, |i, j| {
            (0..self.rows)
                .map(|k| self[(k, i)].conj() * rhs[(k, j)])
                .sum()
        })
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Copy of the block starting at `(r0, c0)` of shape `rows x cols`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            r0 + rows <= self.rows && c0 + cols <= self.cols,
            "block out of range"
        );
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, blk: &Self) {
        assert!(
            r0 + blk.rows <= self.rows && c0 + blk.cols <= self.cols,
            "block out of range"
        );
        for i in 0..blk.rows {
            for j in 0..blk.cols {
                self[(r0 + i, c0 + j)] = blk[(i, j)];
            }
        }
    }

    /// `[[a, b], [c, d]]` from conforming blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (h, m) = (a.rows, d.rows);
        debug_assert!(a.cols == c.cols && b.cols == d.cols && a.rows == b.rows && c.rows == d.rows);
        let mut out = Self::zeros(h + m, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(0, a.cols, b);
        out.set_block(h, 0, c);
        out.set_block(h, a.cols, d);
        out
    }

    /// Determinant of a 2x2 matrix.
    pub fn det2(&self) -> C<T> {
        assert!(self.rows == 2 && self.cols == 2, "det2 needs a 2x2 matrix");
        self.data[0] * self.data[3] - self.data[1] * self.data[2]
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    ///
    /// Fails with [`Error::Pole`] when a pivot drops below `pivot_tol` times
    /// the largest entry of `self`.
    pub fn solve(&self, rhs: &Self, pivot_tol: T) -> Result<Self> {
        assert!(self.is_square(), "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows, "solve dimension mismatch");
        let n = self.rows;
        let mut a = self.clone();
        let mut x = rhs.clone();
        let scale = a.max_abs().max(T::min_positive_value());
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, a[(i, k)].norm()))
                    .fold(
                        (k, -T::one()),
                        |acc, cur| if cur.1 > acc.1 { cur } else { acc },
                    );
            if pmax <= pivot_tol * scale {
                return Err(Error::Pole {
                    modulus: (pmax / scale).as_f64(),
                });
            }
            if p != k {
                a.swap_rows(p, k);
                x.swap_rows(p, k);
            }
            let piv = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / piv;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
                for j in 0..x.cols {
                    let v = x[(k, j)];
                    x[(i, j)] -= f * v;
                }
            }
        }
        for k in (0..n).rev() {
            let piv = a[(k, k)];
            for j in 0..x.cols {
                let mut s = x[(k, j)];
                for i in k + 1..n {
                    s -= a[(k, i)] * x[(i, j)];
                }
                x[(k, j)] = s / piv;
            }
        }
        Ok(x)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `‖self^* self − I‖` in operator norm.
    pub fn unitarity_residual(&self) -> T {
        let g = self.adjoint_mul(self) - Self::identity(self.cols);
        // Hermitian, so the spectral norm is the largest |eigenvalue|.
        let h = HermitianMatrix::from_upper(&g);
        super::eigen::hermitian_eigenvalues(&h)
            .iter()
            .fold(T::zero(), |a, &l| a.max(l.abs()))
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for CMatrix<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "add dimension mismatch"
        );
        for (a, b) in self.data.iter_mut().zip(rhs.data) {
            *a += b;
        }
        self
    }
}

impl<T: Real> Sub for CMatrix<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "sub dimension mismatch"
        );
        for (a, b) in self.data.iter_mut().zip(rhs.data) {
            *a -= b;
        }
        self
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> fmt::Debug for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "({:+.6e}{:+.6e}i) ", z.re.as_f64(), z.im.as_f64())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Hermitian matrix. Only the upper triangle of the source is read; the
/// lower triangle is defined by conjugation and the diagonal is real.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    inner: CMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn from_upper(m: &CMatrix<T>) -> Self {
        assert!(m.is_square(), "hermitian matrix must be square");
        let n = m.rows();
        let inner = CMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => m[(i, j)],
            std::cmp::Ordering::Equal => C::new(m[(i, i)].re, T::zero()),
            std::cmp::Ordering::Greater => m[(j, i)].conj(),
        });
        Self { inner }
    }

    /// Builds from an entry function evaluated on the upper triangle only.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                m[(i, j)] = f(i, j);
            }
        }
        Self::from_upper(&m)
    }

    pub fn order(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_matrix(&self) -> &CMatrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.inner
    }

    /// Quadratic form `v^* M v` (real by construction).
    pub fn quadratic_form(&self, v: &[C<T>]) -> T {
        let mv = self.inner.mul_vec(v);
        v.iter().zip(mv).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

impl<T: Real> Index<(usize, usize)> for HermitianMatrix<T> {
    type Output = C<T>;
    fn index(&self, idx: (usize, usize)) -> &C<T> {
        &self.inner[idx]
    }
}
