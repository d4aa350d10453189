use super::echelon::{dense_from_sparse, sparse_from_dense, Echelon, SparseRow};
use super::field::Field;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Sparse matrix over an exact field, stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let data = (0..n).map(|i| vec![(i, one.clone())]).collect();
        Self { field, rows: n, cols: n, data }
    }

    pub fn from_sparse_rows(field: F, cols: usize, data: Vec<SparseRow<F::Elem>>) -> Self {
        debug_assert!(data.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(data.iter().all(|r| r.iter().all(|(c, v)| *c < cols && !field.is_zero(v))));
        Self { rows: data.len(), field, cols, data }
    }

    pub fn from_dense(field: F, cols: usize, dense: &[Vec<F::Elem>]) -> Self {
        let data = dense
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                sparse_from_dense(&field, r)
            })
            .collect();
        Self::from_sparse_rows(field, cols, data)
    }

    pub fn from_i64(field: F, dense: &[Vec<i64>]) -> Self {
        let cols = dense.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<F::Elem>> =
            dense.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_dense(field, cols, &rows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, i: usize) -> &[(usize, F::Elem)] {
        &self.data[i]
    }
    pub fn sparse_rows(&self) -> &[SparseRow<F::Elem>] {
        &self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, i: usize, j: usize) -> F::Elem {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        self.data.iter().map(|r| dense_from_sparse(&self.field, r, self.cols)).collect()
    }

    pub fn push_row(&mut self, row: SparseRow<F::Elem>) {
        self.data.push(row);
        self.rows += 1;
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols, "matrix/vector dimension mismatch");
        let f = &self.field;
        self.data
            .iter()
            .map(|r| {
                let mut acc = f.zero();
                for (j, x) in r {
                    f.add_mul_assign(&mut acc, x, &v[*j]);
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseRow<F::Elem>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                data[*j].push((i, x.clone()));
            }
        }
        Self { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let f = &self.field;
        let mut acc = vec![f.zero(); other.cols];
        let mut touched = vec![false; other.cols];
        let mut idx = Vec::new();
        let data = self
            .data
            .iter()
            .map(|r| {
                for (k, a) in r {
                    for (j, b) in &other.data[*k] {
                        f.add_mul_assign(&mut acc[*j], a, b);
                        if !touched[*j] {
                            touched[*j] = true;
                            idx.push(*j);
                        }
                    }
                }
                idx.sort_unstable();
                let mut row = Vec::new();
                for &j in &idx {
                    let v = std::mem::replace(&mut acc[j], f.zero());
                    touched[j] = false;
                    if !f.is_zero(&v) {
                        row.push((j, v));
                    }
                }
                idx.clear();
                row
            })
            .collect();
        Self { field: f.clone(), rows: self.rows, cols: other.cols, data }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f.clone(), self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|(j, x)| (*j, f.mul(c, x))).collect())
            .collect();
        Self { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self + c * other`
    pub fn add_scaled(&self, other: &Self, c: &F::Elem) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                        out.push(a[i].clone());
                        i += 1;
                    } else if i >= a.len() || b[j].0 < a[i].0 {
                        let v = f.mul(c, &b[j].1);
                        if !f.is_zero(&v) {
                            out.push((b[j].0, v));
                        }
                        j += 1;
                    } else {
                        let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
                        if !f.is_zero(&v) {
                            out.push((a[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                out
            })
            .collect();
        Self { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &self.field.neg(&self.field.one()))
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> F::Elem {
        let f = &self.field;
        let mut t = f.zero();
        for i in 0..self.rows.min(self.cols) {
            t = f.add(&t, &self.get(i, i));
        }
        t
    }

    /// Row-major flattening: entry (i, j) goes to index `i * cols + j`.
    pub fn flatten(&self) -> SparseRow<F::Elem> {
        let mut out = Vec::with_capacity(self.nnz());
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                out.push((i * self.cols + j, x.clone()));
            }
        }
        out
    }

    pub fn unflatten(field: F, rows: usize, cols: usize, v: &[(usize, F::Elem)]) -> Self {
        let mut data: Vec<SparseRow<F::Elem>> = vec![Vec::new(); rows];
        for (k, x) in v {
            data[k / cols].push((k % cols, x.clone()));
        }
        Self { field, rows, cols, data }
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(field: F, cols: usize, blocks: &[Self]) -> Result<Self> {
        let mut data = Vec::new();
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: b.cols });
            }
            data.extend(b.data.iter().cloned());
        }
        Ok(Self::from_sparse_rows(field, cols, data))
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field.clone(), self.cols);
        for r in &self.data {
            if e.is_full() {
                break;
            }
            e.insert(r.clone());
        }
        e.rank()
    }
}

/// Unique reduced row echelon form and rank. The result keeps the row count of
/// the input, with zero rows at the bottom.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, usize) {
    let mut e = Echelon::new(m.field.clone(), m.cols);
    for r in &m.data {
        if e.is_full() {
            break;
        }
        e.insert(r.clone());
    }
    let rank = e.rank();
    let (mut rows, _) = e.into_rref();
    rows.resize(m.rows.max(rank), Vec::new());
    (Matrix { field: m.field.clone(), rows: rows.len(), cols: m.cols, data: rows }, rank)
}

/// Null space `{v : m v = 0}` in canonical form.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    kernel_of_rows(m.field.clone(), m.cols, m.data.iter().cloned())
}

/// Null space of the matrix whose rows are produced by `rows`; rows are consumed
/// one at a time so callers can stream very tall constraint systems.
pub fn kernel_of_rows<F: Field, I>(field: F, cols: usize, rows: I) -> Subspace<F>
where
    I: IntoIterator<Item = SparseRow<F::Elem>>,
{
    let mut e = Echelon::new(field.clone(), cols);
    for r in rows {
        if e.is_full() {
            break;
        }
        e.insert(r);
    }
    kernel_of_echelon(e)
}

pub fn kernel_of_echelon<F: Field>(e: Echelon<F>) -> Subspace<F> {
    let field = e.field().clone();
    let cols = e.cols();
    let (rows, pivots) = e.into_rref();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // For a free column j the vector e_j - sum_r R[r][j] e_{pivot(r)} is in the kernel.
    let mut by_free: Vec<SparseRow<F::Elem>> = vec![Vec::new(); cols];
    for (r, row) in rows.iter().enumerate() {
        for (j, x) in &row[1..] {
            by_free[*j].push((pivots[r], field.neg(x)));
        }
    }
    let basis = (0..cols).filter(|&j| !is_pivot[j]).map(|j| {
        let mut v = std::mem::take(&mut by_free[j]);
        v.push((j, field.one()));
        v.sort_by_key(|e| e.0);
        v
    });
    Subspace::from_sparse_rows(field.clone(), cols, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{PrimeField, Rationals};

    #[test]
    fn rref_examples() {
        let q = Rationals;
        let (r, rank) = rref(&Matrix::zero(q, 2, 3));
        assert_eq!(rank, 0);
        assert!(r.is_zero());
        let (r, rank) = rref(&Matrix::identity(q, 4));
        assert_eq!(rank, 4);
        assert_eq!(r, Matrix::identity(q, 4));
        let (r, rank) = rref(&Matrix::from_i64(q, &[vec![2, 4], vec![1, 2]]));
        assert_eq!(rank, 1);
        assert_eq!(r, Matrix::from_i64(q, &[vec![1, 2], vec![0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(kernel(&Matrix::identity(f, 3)).dim(), 0);
        let z = kernel(&Matrix::zero(f, 2, 4));
        assert_eq!(z.dim(), 4);
        let k = kernel(&Matrix::from_i64(f, &[vec![1, 1, 0], vec![0, 0, 1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k, Subspace::from_dense(f, 3, &[vec![1, 4, 0]]));
    }

    #[test]
    fn product_and_transpose() {
        let q = Rationals;
        let a = Matrix::from_i64(q, &[vec![1, 2], vec![0, 1]]);
        let b = Matrix::from_i64(q, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_i64(q, &[vec![2, 1], vec![1, 0]]));
        assert_eq!(a.transpose(), Matrix::from_i64(q, &[vec![1, 0], vec![2, 1]]));
        assert_eq!(a.commutator(&a), Matrix::zero(q, 2, 2));
        let flat = a.flatten();
        assert_eq!(Matrix::unflatten(q, 2, 2, &flat), a);
    }
}
