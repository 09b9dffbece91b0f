//! Dense exact matrices and row reduction.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::scalar::{sub_mul, FieldSpec, Scalar};
use crate::Error;

/// A dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { field, rows, cols, data }
    }

    pub fn from_row_vecs(field: FieldSpec, cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.iter().cloned());
        }
        Matrix { field, rows: rows.len(), cols, data }
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// Builds an integer matrix (entries reduced into the field).
    pub fn from_ints(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().map(|&x| field.from_i64(x))
            })
            .collect();
        Matrix { field, rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let orow = &o.data[k * o.cols..(k + 1) * o.cols];
                let dst = &mut out.data[i * o.cols..(i + 1) * o.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    if !b.is_zero() {
                        *d = &*d + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// `self + c * o`.
    pub fn add_scaled(&mut self, c: &Scalar, o: &Matrix) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a = &*a + &(c * b);
            }
        }
    }

    /// `[self | o]`.
    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows);
        let cols = self.cols + o.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(o.row(i));
        }
        Matrix { field: self.field, rows: self.rows, cols, data }
    }

    /// `[self ; o]`.
    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Matrix { field: self.field, rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn block_diagonal(field: FieldSpec, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (b, &j) in idx.iter().enumerate() {
                m[(i, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form, leftmost pivot columns, topmost pivot rows.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { matrix: m, pivots }
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut nz: Vec<usize> = Vec::with_capacity(cols);
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in c..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.data[r * cols + c].inv().expect("pivot is nonzero");
            nz.clear();
            for j in c..cols {
                let idx = r * cols + j;
                if !self.data[idx].is_zero() {
                    self.data[idx] = &self.data[idx] * &inv;
                    nz.push(j);
                }
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c].clone();
                if f.is_zero() {
                    continue;
                }
                for &j in &nz {
                    let (ri, rr) = (i * cols + j, r * cols + j);
                    let v = sub_mul(&self.data[ri], &f, &self.data[rr]);
                    self.data[ri] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().rank()
    }

    /// Basis of the null space; one vector per free column, in ascending
    /// order of the free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let rref = self.rref();
        kernel_from_rref(&rref, self.cols)
    }

    /// Some `x` with `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, Error> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {} but the matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let bcol = Matrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        Ok(self.solve_many(&bcol)?.map(|x| x.column(0)))
    }

    /// Solves `self * X = B` for a matrix `X`, or `None` if some column is
    /// inconsistent.
    pub fn solve_many(&self, b: &Matrix) -> Result<Option<Matrix>, Error> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows but the matrix has {}",
                b.rows, self.rows
            )));
        }
        let aug = self.hstack(b);
        let rref = aug.rref();
        if rref.pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &p) in rref.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = rref.matrix[(i, self.cols + j)].clone();
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_many(&Matrix::identity(self.field, self.rows)).ok()??;
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^n == 0` where `n` is the size; checked by repeated squaring.
    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        let mut p = self.clone();
        let mut k = 1;
        while k < self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(&p);
            k *= 2;
        }
        p.is_zero()
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Scalar {
        (0..self.rows).fold(self.field.zero(), |acc, i| &acc + &self[(i, i)])
    }

    /// Flattens row-major into a vector.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }
}

fn kernel_from_rref(rref: &Rref, cols: usize) -> Vec<Vec<Scalar>> {
    let field = rref.matrix.field;
    let mut is_pivot = vec![false; cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (i, &p) in rref.pivots.iter().enumerate() {
                v[p] = -&rref.matrix[(i, f)];
            }
            v
        })
        .collect()
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A subspace of `field^n` held as a reduced echelon basis, so membership and
/// coordinates are read off the pivot positions.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: FieldSpec,
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        RowSpace { field, ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    /// Span of the given vectors.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let m = Matrix::from_row_vecs(field, ambient, vectors);
        Self::from_matrix_rows(&m)
    }

    /// Span of the rows of `m`.
    pub fn from_matrix_rows(m: &Matrix) -> Self {
        let rref = m.rref();
        let r = rref.rank();
        let basis = rref.matrix.submatrix(0..r, 0..m.cols);
        RowSpace { field: m.field, ambient: m.cols, basis, pivots: rref.pivots }
    }

    /// Span of the columns of `m`.
    pub fn column_space(m: &Matrix) -> Self {
        Self::from_matrix_rows(&m.transpose())
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors (rows of the echelon form).
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn basis_vector(&self, i: usize) -> &[Scalar] {
        self.basis.row(i)
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        self.basis.transpose()
    }

    /// `v` minus its projection along the basis onto the pivot coordinates;
    /// zero iff `v` lies in the space.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let f = w[p].clone();
            if f.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(i).iter().enumerate() {
                if !b.is_zero() {
                    w[j] = sub_mul(&w[j], &f, b);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the space.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Coordinates without the membership check (caller guarantees it).
    pub fn coords_unchecked(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn contains_space(&self, o: &RowSpace) -> bool {
        (0..o.dim()).all(|i| self.contains(o.basis.row(i)))
    }

    pub fn sum(&self, o: &RowSpace) -> RowSpace {
        let m = self.basis.vstack(&o.basis);
        Self::from_matrix_rows(&m)
    }

    /// Non-pivot coordinates, which index a basis of the quotient
    /// `field^n / self`.
    pub fn free_coordinates(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&j| !is_pivot[j]).collect()
    }

    /// Image of `v` in the quotient `field^n / self`, in the coordinates of
    /// [`RowSpace::free_coordinates`].
    pub fn quotient_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let w = self.reduce(v);
        self.free_coordinates().into_iter().map(|j| w[j].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn rref_identity_over_f3() {
        let f = FieldSpec::prime(3).unwrap();
        let id = Matrix::identity(f, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank(), 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_zero_over_q() {
        let z = Matrix::zeros(q(), 2, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank(), 0);
    }

    #[test]
    fn rref_rank_one_by_hand() {
        // Subtract twice row one from row two: [[1,2],[0,0]].
        let a = Matrix::from_ints(q(), &[&[1, 2], &[2, 4]]);
        let r = a.rref();
        assert_eq!(r.matrix, Matrix::from_ints(q(), &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn kernel_cases() {
        let id = Matrix::identity(q(), 4);
        assert!(id.kernel_basis().is_empty());
        let z = Matrix::zeros(q(), 2, 3);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert_eq!(x.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn kernel_of_all_ones_row_over_f2() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = Matrix::from_ints(f2, &[&[1, 1]]);
        // Enumerate F_2^2 to find the kernel.
        let mut brute = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                let v = vec![f2.from_i64(x), f2.from_i64(y)];
                if a.mul_vec(&v)[0].is_zero() && (x, y) != (0, 0) {
                    brute.push(v);
                }
            }
        }
        assert_eq!(a.kernel_basis(), brute);
    }

    #[test]
    fn solve_cases() {
        let id = Matrix::identity(q(), 3);
        let b = vec![q().from_i64(4), q().from_i64(-1), q().parse("2/3").unwrap()];
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);
        let z = Matrix::zeros(q(), 2, 2);
        assert!(z.solve(&[q().one(), q().zero()]).unwrap().is_none());
        assert!(z.solve(&[q().one()]).is_err());
        // Back substitution over F_5: y = 1, x = 3 - 2 = 1.
        let f5 = FieldSpec::prime(5).unwrap();
        let a = Matrix::from_ints(f5, &[&[1, 2], &[0, 1]]);
        let x = a.solve(&[f5.from_i64(3), f5.from_i64(1)]).unwrap().unwrap();
        assert_eq!(x, vec![f5.one(), f5.one()]);
    }

    #[test]
    fn inverse_and_nilpotent() {
        let a = Matrix::from_ints(q(), &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(q(), 2));
        let n = Matrix::from_ints(q(), &[&[0, 1, 5], &[0, 0, 1], &[0, 0, 0]]);
        assert!(n.is_nilpotent());
        assert!(!a.is_nilpotent());
        assert!(n.inverse().is_none());
    }

    #[test]
    fn row_space_quotient() {
        let v = vec![vec![q().from_i64(1), q().from_i64(1), q().from_i64(0)]];
        let s = RowSpace::span(q(), 3, &v);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.free_coordinates(), vec![1, 2]);
        let w = vec![q().from_i64(2), q().from_i64(2), q().from_i64(0)];
        assert!(s.contains(&w));
        assert_eq!(s.coords(&w).unwrap(), vec![q().from_i64(2)]);
        let u = vec![q().from_i64(1), q().from_i64(0), q().from_i64(3)];
        assert_eq!(s.quotient_coords(&u), vec![q().from_i64(-1), q().from_i64(3)]);
    }
}
