//! Dense exact matrices over ℤ and ℚ.
//!
//! Everything here is arbitrary precision. Integer routines cover the
//! Hermite and Smith normal forms needed for sublattice work; rational
//! routines cover inversion and linear solves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Ring operations by reference, so matrix kernels avoid needless clones.
pub trait Scalar: Clone + PartialEq + Zero + One + fmt::Debug {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn add_ref(&self, other: &Self) -> Self {
                self + other
            }
            fn sub_ref(&self, other: &Self) -> Self {
                self - other
            }
            fn mul_ref(&self, other: &Self) -> Self {
                self * other
            }
            fn neg_ref(&self) -> Self {
                -self
            }
        }
    };
}

impl_scalar!(BigInt);
impl_scalar!(BigRational);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ZMatrix = Matrix<BigInt>;
pub type QMatrix = Matrix<BigRational>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must share one length;
    /// `cols` is needed to describe zero-row matrices.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.mul_ref(b);
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = cell.add_ref(&p);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        self.rows_iter().map(|r| dot(r, v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.add_ref(&vi.mul_ref(&self[(i, j)]));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg_ref())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let (r, c) = (a.rows + b.rows, a.cols + b.cols);
        Self::from_fn(r, c, |i, j| {
            if i < a.rows && j < a.cols {
                a[(i, j)].clone()
            } else if i >= a.rows && j >= a.cols {
                b[(i - a.rows, j - a.cols)].clone()
            } else {
                T::zero()
            }
        })
    }

    /// Stacks the rows of `other` under `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)))
}

/// Shorthand for building integer matrices in code and tests.
pub fn zmat(rows: &[&[i64]]) -> ZMatrix {
    let cols = rows.first().map_or(0, |r| r.len());
    ZMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
        cols,
    )
}

pub fn zvec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_q_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Primitive positive-leading integer multiple of a rational vector, with
/// the positive scale factor applied.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

pub fn vadd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(c: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| c * x).collect()
}

pub fn vec_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

impl ZMatrix {
    pub fn to_q(&self) -> QMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = v / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn rank(&self) -> usize {
        self.to_q().rank()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn row_axpy(&mut self, target: usize, q: &BigInt, source: usize) {
        // row[target] -= q * row[source]
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self[(source, j)] * q;
            let t = &mut self[(target, j)];
            *t -= s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.row_mut(i) {
            *x = -&*x;
        }
    }

    /// Row-style Hermite normal form together with a unimodular `u`
    /// satisfying `u * self = h`. Pivots are positive and entries above
    /// each pivot lie in `[0, pivot)`. Zero rows of `h` sit at the bottom.
    pub fn hnf_with_transform(&self) -> (ZMatrix, ZMatrix, usize) {
        let mut h = self.clone();
        let mut u = ZMatrix::identity(self.rows);
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for i in r..self.rows {
                    if !h[(i, col)].is_zero()
                        && best.is_none_or(|b| h[(i, col)].abs() < h[(b, col)].abs())
                    {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                h.swap_rows(r, b);
                u.swap_rows(r, b);
                let mut done = true;
                for i in r + 1..self.rows {
                    if h[(i, col)].is_zero() {
                        continue;
                    }
                    let q = h[(i, col)].div_floor(&h[(r, col)]);
                    h.row_axpy(i, &q, r);
                    u.row_axpy(i, &q, r);
                    if !h[(i, col)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if r < self.rows && !h[(r, col)].is_zero() {
                if h[(r, col)].is_negative() {
                    h.negate_row(r);
                    u.negate_row(r);
                }
                for i in 0..r {
                    let q = h[(i, col)].div_floor(&h[(r, col)]);
                    h.row_axpy(i, &q, r);
                    u.row_axpy(i, &q, r);
                }
                r += 1;
            }
        }
        (h, u, r)
    }

    /// Hermite normal form with the zero rows dropped: a canonical basis
    /// of the row span over ℤ.
    pub fn hnf(&self) -> ZMatrix {
        let (h, _, r) = self.hnf_with_transform();
        h.select_rows(&(0..r).collect::<Vec<_>>())
    }

    /// Basis (as rows, in Hermite normal form) of `{x ∈ ℤⁿ : self · x = 0}`.
    /// The result is always a saturated sublattice of ℤⁿ.
    pub fn integer_kernel(&self) -> ZMatrix {
        let (_, u, r) = self.transpose().hnf_with_transform();
        let rows: Vec<usize> = (r..self.cols).collect();
        let k = u.select_rows(&rows);
        if k.nrows() == 0 {
            return k;
        }
        k.hnf()
    }

    /// Nonzero elementary divisors (Smith normal form diagonal), ascending.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut out = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            // pick the smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| m[(i, j)].abs() < m[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            m.swap_rows(t, bi);
            m.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = m[(i, t)].div_floor(&m[(t, t)]);
                m.row_axpy(i, &q, t);
                if !m[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = m[(t, j)].div_floor(&m[(t, t)]);
                m.col_axpy(j, &q, t);
                if !m[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let p = m[(t, t)].clone();
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(i, j)].is_multiple_of(&p));
            if let Some((i, _)) = bad {
                for j in t..cols {
                    let v = m[(i, j)].clone();
                    m[(t, j)] += v;
                }
                continue;
            }
            out.push(p.abs());
            t += 1;
        }
        out
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn col_axpy(&mut self, target: usize, q: &BigInt, source: usize) {
        for i in 0..self.rows {
            let s = &self[(i, source)] * q;
            self[(i, target)] -= s;
        }
    }

    /// Integer solution `x` of `x · self = v` (row combination), if one exists.
    pub fn solve_row_combination(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let q = self.to_q();
        let sol = q.transpose().solve(&to_q_vec(v))?;
        if sol.iter().all(|x| x.is_integer()) {
            Some(sol.iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }
}

impl QMatrix {
    /// Reduced row echelon form over ℚ and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m[(r, c)].recip();
            for j in 0..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let s = &f * &m[(r, j)];
                    m[(i, j)] -= s;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = QMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        });
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Some solution of `self · x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let aug = QMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (i, &c) in piv.iter().enumerate() {
            x[c] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..n {
                    let s = &f * &m[(c, j)];
                    m[(i, j)] -= s;
                }
            }
        }
        det
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Converts to an integer matrix if every entry is integral.
    pub fn to_z(&self) -> Option<ZMatrix> {
        self.is_integral()
            .then(|| self.map(|x| x.to_integer()))
    }
}
