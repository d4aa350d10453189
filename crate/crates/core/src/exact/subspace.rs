use super::echelon::{dense_from_sparse, sparse_from_dense, Echelon, SparseRow};
use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// A subspace of `F^ambient` held by its reduced row-echelon basis. The basis is
/// canonical, so two values are equal exactly when they span the same subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<SparseRow<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: F, ambient: usize) -> Self {
        Self { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: F, ambient: usize) -> Self {
        let one = field.one();
        Self {
            rows: (0..ambient).map(|i| vec![(i, one.clone())]).collect(),
            pivots: (0..ambient).collect(),
            field,
            ambient,
        }
    }

    pub fn from_echelon(e: Echelon<F>) -> Self {
        let field = e.field().clone();
        let ambient = e.cols();
        let (rows, pivots) = e.into_rref();
        Self { field, ambient, rows, pivots }
    }

    pub fn from_sparse_rows<I>(field: F, ambient: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = SparseRow<F::Elem>>,
    {
        let mut e = Echelon::new(field, ambient);
        for r in rows {
            if e.is_full() {
                break;
            }
            e.insert(r);
        }
        Self::from_echelon(e)
    }

    pub fn from_dense(field: F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Self {
        let rows: Vec<_> = vectors
            .iter()
            .map(|v| {
                assert_eq!(v.len(), ambient);
                sparse_from_dense(&field, v)
            })
            .collect();
        Self::from_sparse_rows(field, ambient, rows)
    }

    /// Standard basis vectors `e_i` for the given indices.
    pub fn coordinate(field: F, ambient: usize, indices: &[usize]) -> Self {
        let one = field.one();
        Self::from_sparse_rows(field, ambient, indices.iter().map(|&i| vec![(i, one.clone())]))
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis(&self) -> &[SparseRow<F::Elem>] {
        &self.rows
    }

    pub fn basis_dense(&self) -> Vec<Vec<F::Elem>> {
        self.rows.iter().map(|r| dense_from_sparse(&self.field, r, self.ambient)).collect()
    }

    pub fn as_matrix(&self) -> Matrix<F> {
        Matrix::from_sparse_rows(self.field.clone(), self.ambient, self.rows.clone())
    }

    fn echelon(&self) -> Echelon<F> {
        let mut e = Echelon::new(self.field.clone(), self.ambient);
        for r in &self.rows {
            e.insert(r.clone());
        }
        e
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: other.ambient });
        }
        Ok(())
    }

    /// Residual of `v` modulo the subspace: zero at every pivot column.
    pub fn reduce_sparse(&self, v: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        let f = &self.field;
        let mut buf = dense_from_sparse(f, v, self.ambient);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&buf[p]) {
                continue;
            }
            let c = buf[p].clone();
            for (k, x) in row {
                let t = f.mul(&c, x);
                buf[*k] = f.sub(&buf[*k], &t);
            }
        }
        sparse_from_dense(f, &buf)
    }

    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let s = sparse_from_dense(&self.field, v);
        dense_from_sparse(&self.field, &self.reduce_sparse(&s), self.ambient)
    }

    pub fn contains(&self, v: &[F::Elem]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: v.len() });
        }
        Ok(self.reduce(v).iter().all(|x| self.field.is_zero(x)))
    }

    pub fn contains_sparse(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce_sparse(v).is_empty()
    }

    /// Coordinates of a member vector in the canonical basis (its values at the pivots).
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if !self.contains(v).ok()? {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Vector with the given coordinates in the canonical basis.
    pub fn combine(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(coords.len(), self.dim());
        let f = &self.field;
        let mut out = vec![f.zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.rows) {
            if f.is_zero(c) {
                continue;
            }
            for (k, x) in row {
                f.add_mul_assign(&mut out[*k], c, x);
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self.rows.iter().all(|r| other.contains_sparse(r)))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut e = self.echelon();
        for r in &other.rows {
            e.insert(r.clone());
        }
        Ok(Self::from_echelon(e))
    }

    /// Intersection by the Zassenhaus algorithm: echelonize `(a | a)` over `(b | 0)`;
    /// rows with vanishing left half carry a basis of the intersection on the right.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let mut e = Echelon::new(self.field.clone(), 2 * n);
        for r in &self.rows {
            let mut row = r.clone();
            row.extend(r.iter().map(|(k, x)| (k + n, x.clone())));
            e.insert(row);
        }
        for r in &other.rows {
            e.insert(r.clone());
        }
        let (rows, pivots) = e.into_rref();
        let inter = rows
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= n)
            .map(|(r, _)| r.into_iter().map(|(k, x)| (k - n, x)).collect::<SparseRow<_>>());
        Ok(Self::from_sparse_rows(self.field.clone(), n, inter))
    }

    pub fn quotient_map(&self) -> QuotientMap<F> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let complement: Vec<usize> = (0..self.ambient).filter(|&i| !is_pivot[i]).collect();
        let mut position = vec![None; self.ambient];
        for (k, &c) in complement.iter().enumerate() {
            position[c] = Some(k);
        }
        QuotientMap { sub: self.clone(), complement, position }
    }

    /// Orthogonal complement with respect to the standard pairing.
    pub fn annihilator(&self) -> Self {
        super::matrix::kernel(&self.as_matrix())
    }
}

/// Projection `F^n -> F^n / S`, realized on the non-pivot coordinates of `S`.
#[derive(Clone, Debug)]
pub struct QuotientMap<F: Field> {
    sub: Subspace<F>,
    complement: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl<F: Field> QuotientMap<F> {
    pub fn source_dim(&self) -> usize {
        self.sub.ambient
    }
    pub fn target_dim(&self) -> usize {
        self.complement.len()
    }
    /// Ambient coordinates chosen as the complement basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }
    pub fn subspace(&self) -> &Subspace<F> {
        &self.sub
    }

    pub fn apply_sparse(&self, v: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        self.sub
            .reduce_sparse(v)
            .into_iter()
            .map(|(k, x)| (self.position[k].expect("residual lives on the complement"), x))
            .collect()
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let s = sparse_from_dense(&self.sub.field, v);
        dense_from_sparse(&self.sub.field, &self.apply_sparse(&s), self.target_dim())
    }

    /// The complement representative of a quotient vector.
    pub fn lift(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.sub.field;
        let mut out = vec![f.zero(); self.sub.ambient];
        for (c, x) in self.complement.iter().zip(coords) {
            out[*c] = x.clone();
        }
        out
    }

    pub fn as_matrix(&self) -> Matrix<F> {
        let f = self.sub.field.clone();
        let n = self.sub.ambient;
        let one = f.one();
        let cols: Vec<SparseRow<F::Elem>> =
            (0..n).map(|i| self.apply_sparse(&[(i, one.clone())])).collect();
        Matrix::from_sparse_rows(f, self.target_dim(), cols).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{PrimeField, Rationals};

    fn q_vecs(v: &[&[i64]]) -> Vec<Vec<num_rational::BigRational>> {
        v.iter().map(|r| r.iter().map(|&x| Rationals.from_i64(x)).collect()).collect()
    }

    #[test]
    fn lattice_examples() {
        let q = Rationals;
        let a = Subspace::from_dense(q, 3, &q_vecs(&[&[1, 0, 1], &[0, 1, 0]]));
        assert_eq!(a.intersect(&a).unwrap(), a);
        let b = Subspace::from_dense(q, 3, &q_vecs(&[&[1, 1, 1]]));
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, b);
        // membership oracle
        assert!(a.contains(&q_vecs(&[&[1, 1, 1]])[0]).unwrap());
        let e1 = Subspace::coordinate(q, 2, &[0]);
        let e2 = Subspace::coordinate(q, 2, &[1]);
        assert!(e1.sum(&e2).unwrap().is_full());
        assert!(e1.intersect(&e2).unwrap().is_zero());
    }

    #[test]
    fn mismatch_is_an_error() {
        let f = PrimeField::new(5).unwrap();
        let a = Subspace::full(f, 2);
        let b = Subspace::full(f, 3);
        assert!(a.sum(&b).is_err());
        assert!(a.intersect(&b).is_err());
        assert!(a.contains(&[1, 2, 3]).is_err());
    }

    #[test]
    fn quotient_map_kernel_and_surjectivity() {
        let f = PrimeField::new(7).unwrap();
        let s = Subspace::from_dense(f, 4, &[vec![1, 2, 0, 3], vec![0, 0, 1, 5]]);
        let q = s.quotient_map();
        assert_eq!(q.target_dim(), 2);
        for v in s.basis_dense() {
            assert!(q.apply(&v).iter().all(|x| *x == 0));
        }
        let m = q.as_matrix();
        assert_eq!(m.rank(), 2);
        assert_eq!(crate::exact::matrix::kernel(&m), s);
        let w = vec![3, 1, 4, 1];
        assert_eq!(q.apply(&q.lift(&q.apply(&w))), q.apply(&w));
    }

    #[test]
    fn coordinates_round_trip() {
        let f = PrimeField::new(5).unwrap();
        let s = Subspace::from_dense(f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let v = s.combine(&[2, 3]);
        assert_eq!(s.coordinates(&v).unwrap(), vec![2, 3]);
        assert!(s.coordinates(&[0, 0, 1]).is_none() || s.contains(&[0, 0, 1]).unwrap());
    }
}
