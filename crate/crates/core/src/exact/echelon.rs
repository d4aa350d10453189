use super::field::Field;

/// Sparse row: strictly increasing column indices, no stored zeros.
pub type SparseRow<E> = Vec<(usize, E)>;

/// Rows whose fill-in exceeds `cols / DENSE_DIVISOR` are reduced in a dense buffer.
const DENSE_DIVISOR: usize = 8;

pub fn sparse_from_dense<F: Field>(field: &F, v: &[F::Elem]) -> SparseRow<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse<F: Field>(field: &F, row: &[(usize, F::Elem)], len: usize) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); len];
    for (i, x) in row {
        v[*i] = x.clone();
    }
    v
}

/// `a - c * b` restricted to columns at or after `a[from].0`; entries of `a` before `from` are kept.
fn merge_sub<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    from: usize,
    b: &[(usize, F::Elem)],
    c: &F::Elem,
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(&a[..from]);
    let (mut i, mut j) = (from, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.neg(&field.mul(c, &b[j].1))));
            j += 1;
        } else {
            let v = field.sub(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form. Rows are stored normalized (leading entry 1) and
/// only carry entries at columns >= their pivot. Pivoting is deterministic: a row's
/// pivot is its first nonzero column after reduction.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    cols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, cols: usize) -> Self {
        Self { field, cols, pivot_row: vec![None; cols], rows: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Residual of `row` after eliminating every pivot column.
    pub fn reduce(&self, row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        let f = &self.field;
        let threshold = (self.cols / DENSE_DIVISOR).max(16);
        let mut row = row;
        let mut pos = 0;
        while pos < row.len() {
            let col = row[pos].0;
            match self.pivot_row[col] {
                Some(r) => {
                    let c = row[pos].1.clone();
                    row = merge_sub(f, &row, pos, &self.rows[r], &c);
                    if row.len() > threshold {
                        return self.reduce_dense(row, pos);
                    }
                }
                None => pos += 1,
            }
        }
        row
    }

    fn reduce_dense(&self, row: SparseRow<F::Elem>, start: usize) -> SparseRow<F::Elem> {
        let f = &self.field;
        let first = row.get(start).map(|e| e.0).unwrap_or(self.cols);
        let mut buf = dense_from_sparse(f, &row, self.cols);
        for col in first..self.cols {
            if f.is_zero(&buf[col]) {
                continue;
            }
            if let Some(r) = self.pivot_row[col] {
                let c = buf[col].clone();
                for (k, v) in &self.rows[r] {
                    let t = f.mul(&c, v);
                    buf[*k] = f.sub(&buf[*k], &t);
                }
            }
        }
        sparse_from_dense(f, &buf)
    }

    /// Adds a row to the span; returns true if the rank grew.
    pub fn insert(&mut self, row: SparseRow<F::Elem>) -> bool {
        if self.is_full() {
            return false;
        }
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        let inv = self.field.inv(&row[0].1).expect("leading entry is nonzero");
        if !self.field.is_one(&inv) {
            for e in row.iter_mut() {
                e.1 = self.field.mul(&e.1, &inv);
            }
        }
        self.pivot_row[row[0].0] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn insert_dense(&mut self, v: &[F::Elem]) -> bool {
        let row = sparse_from_dense(&self.field, v);
        self.insert(row)
    }

    pub fn contains(&self, row: SparseRow<F::Elem>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Reduced row echelon form: rows sorted by pivot, pivot columns cleared elsewhere.
    pub fn into_rref(self) -> (Vec<SparseRow<F::Elem>>, Vec<usize>) {
        let f = self.field;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r][0].0);
        let mut pivot_pos = vec![None; self.cols];
        for (k, &r) in order.iter().enumerate() {
            pivot_pos[self.rows[r][0].0] = Some(k);
        }
        let mut rows = self.rows;
        let mut sorted: Vec<SparseRow<F::Elem>> =
            order.iter().map(|&r| std::mem::take(&mut rows[r])).collect();
        // Back substitution from the last pivot upward; later rows are already reduced.
        for k in (0..sorted.len()).rev() {
            let needs: Vec<(usize, F::Elem)> = sorted[k][1..]
                .iter()
                .filter_map(|(c, v)| pivot_pos[*c].map(|j| (j, v.clone())))
                .collect();
            if needs.is_empty() {
                continue;
            }
            let mut row = std::mem::take(&mut sorted[k]);
            for (j, c) in needs {
                let pos = row.iter().position(|e| e.0 == sorted[j][0].0);
                let Some(pos) = pos else { continue };
                debug_assert_eq!(row[pos].1, c);
                let c = row[pos].1.clone();
                row = merge_sub(&f, &row, pos, &sorted[j], &c);
            }
            sorted[k] = row;
        }
        let pivots = sorted.iter().map(|r| r[0].0).collect();
        (sorted, pivots)
    }
}
