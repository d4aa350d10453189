use crate::error::{Error, Result};
use crate::exact::echelon::{sparse_from_dense, Echelon, SparseRow};
use crate::exact::{kernel_of_rows, Field, Matrix, QuotientMap, Subspace};

/// Coordinate vector of an algebra element.
pub type Element<E> = Vec<E>;

/// Sorts by index, merges duplicate indices and drops zeros.
pub fn normalize_row<F: Field>(field: &F, mut row: Vec<(usize, F::Elem)>) -> SparseRow<F::Elem> {
    row.sort_by_key(|e| e.0);
    let mut out: SparseRow<F::Elem> = Vec::with_capacity(row.len());
    for (k, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = field.add(&last.1, &v),
            _ => out.push((k, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

/// A finite-dimensional Lie algebra given by structure constants on a fixed basis.
///
/// Only brackets `[e_i, e_j]` with `i < j` are supplied; the table is completed
/// antisymmetrically, so antisymmetry holds by construction. The Jacobi identity
/// is not assumed and can be checked with [`LieAlgebra::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<F: Field> {
    name: String,
    field: F,
    dim: usize,
    labels: Vec<String>,
    table: Vec<SparseRow<F::Elem>>,
}

/// Outcome of a full Jacobi scan over basis triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub triples_checked: usize,
    pub failure: Option<(usize, usize, usize)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl<F: Field> LieAlgebra<F> {
    /// Builds an algebra from brackets `[e_i, e_j]` for `i < j`. Pairs may be listed
    /// in either order (a reversed pair is negated); a repeated pair is an error.
    pub fn from_brackets<I>(name: impl Into<String>, field: F, labels: Vec<String>, brackets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, SparseRow<F::Elem>)>,
    {
        let n = labels.len();
        let mut table: Vec<SparseRow<F::Elem>> = vec![Vec::new(); n * n];
        let mut seen = vec![false; n * n];
        for (i, j, v) in brackets {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!("bracket index ({i}, {j}) out of range for dim {n}")));
            }
            if let Some((k, _)) = v.iter().find(|(k, _)| *k >= n) {
                return Err(Error::InvalidArgument(format!("coordinate {k} out of range for dim {n}")));
            }
            let v = normalize_row(&field, v);
            if i == j {
                if v.is_empty() {
                    continue;
                }
                return Err(Error::InvalidArgument(format!("[e_{i}, e_{i}] must vanish")));
            }
            let (a, b, v) = if i < j { (i, j, v) } else { (j, i, v.iter().map(|(k, x)| (*k, field.neg(x))).collect()) };
            if seen[a * n + b] {
                return Err(Error::InvalidArgument(format!("bracket ({a}, {b}) given twice")));
            }
            seen[a * n + b] = true;
            table[b * n + a] = v.iter().map(|(k, x)| (*k, field.neg(x))).collect();
            table[a * n + b] = v;
        }
        Ok(Self { name: name.into(), field, dim: n, labels, table })
    }

    /// Builds an algebra by evaluating `bracket(i, j)` for every `i < j`.
    pub fn from_fn<G>(name: impl Into<String>, field: F, labels: Vec<String>, mut bracket: G) -> Result<Self>
    where
        G: FnMut(usize, usize) -> SparseRow<F::Elem>,
    {
        let n = labels.len();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                entries.push((i, j, bracket(i, j)));
            }
        }
        Self::from_brackets(name, field, labels, entries)
    }

    pub fn abelian(field: F, n: usize) -> Self {
        let labels = (0..n).map(|i| format!("e{i}")).collect();
        Self::from_brackets(format!("abelian({n})"), field, labels, std::iter::empty()).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[e_i, e_j]` as a sparse coordinate vector.
    #[inline]
    pub fn basis_bracket(&self, i: usize, j: usize) -> &SparseRow<F::Elem> {
        &self.table[i * self.dim + j]
    }

    pub fn zero_element(&self) -> Element<F::Elem> {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_element(&self, i: usize) -> Element<F::Elem> {
        let mut v = self.zero_element();
        v[i] = self.field.one();
        v
    }

    fn check_len(&self, v: &[F::Elem]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &[F::Elem], y: &[F::Elem]) -> Result<Element<F::Elem>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let f = &self.field;
        let xs = sparse_from_dense(f, x);
        let ys = sparse_from_dense(f, y);
        Ok(self.bracket_sparse_dense(&xs, &ys))
    }

    fn bracket_sparse_dense(&self, xs: &[(usize, F::Elem)], ys: &[(usize, F::Elem)]) -> Element<F::Elem> {
        let f = &self.field;
        let mut out = self.zero_element();
        for (i, a) in xs {
            for (j, b) in ys {
                let row = self.basis_bracket(*i, *j);
                if row.is_empty() {
                    continue;
                }
                let ab = f.mul(a, b);
                for (k, c) in row {
                    f.add_mul_assign(&mut out[*k], &ab, c);
                }
            }
        }
        out
    }

    pub fn bracket_sparse(&self, xs: &[(usize, F::Elem)], ys: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        sparse_from_dense(&self.field, &self.bracket_sparse_dense(xs, ys))
    }

    /// `[e_i, v]` for a sparse `v`.
    pub fn bracket_basis_sparse(&self, i: usize, v: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        let f = &self.field;
        let mut acc = Vec::new();
        for (j, b) in v {
            for (k, c) in self.basis_bracket(i, *j) {
                acc.push((*k, f.mul(b, c)));
            }
        }
        normalize_row(f, acc)
    }

    /// Matrix of `ad e_i`; column `j` holds `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> Matrix<F> {
        let cols: Vec<SparseRow<F::Elem>> = (0..self.dim).map(|j| self.basis_bracket(i, j).clone()).collect();
        Matrix::from_sparse_rows(self.field.clone(), self.dim, cols).transpose()
    }

    pub fn ad(&self, x: &[F::Elem]) -> Result<Matrix<F>> {
        self.check_len(x)?;
        let f = &self.field;
        let mut m = Matrix::zero(f.clone(), self.dim, self.dim);
        for (i, a) in x.iter().enumerate() {
            if !f.is_zero(a) {
                m = m.add_scaled(&self.ad_basis(i), a);
            }
        }
        Ok(m)
    }

    /// Jacobi identity on every basis triple `i < j < k`.
    pub fn validate(&self) -> JacobiReport {
        let n = self.dim;
        let f = &self.field;
        let mut checked = 0;
        let mut acc = vec![f.zero(); n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    checked += 1;
                    // [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, x) in self.basis_bracket(b, c) {
                            for (t, y) in self.basis_bracket(a, *m) {
                                f.add_mul_assign(&mut acc[*t], x, y);
                            }
                        }
                    }
                    let bad = acc.iter().any(|x| !f.is_zero(x));
                    acc.iter_mut().for_each(|x| *x = f.zero());
                    if bad {
                        return JacobiReport { triples_checked: checked, failure: Some((i, j, k)) };
                    }
                }
            }
        }
        JacobiReport { triples_checked: checked, failure: None }
    }

    /// `{x : [x, L] = 0}`.
    pub fn center(&self) -> Subspace<F> {
        let n = self.dim;
        let f = &self.field;
        // For each j: rows indexed by k, columns by i, entry c_{ij}^k.
        let rows = (0..n).flat_map(move |j| {
            let mut block: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); n];
            for i in 0..n {
                for (k, c) in self.basis_bracket(i, j) {
                    block[*k].push((i, c.clone()));
                }
            }
            block.into_iter().filter(|r| !r.is_empty()).map(|r| normalize_row(f, r))
        });
        kernel_of_rows(f.clone(), n, rows)
    }

    /// Span of all brackets `[e_i, e_j]`.
    pub fn derived_subalgebra(&self) -> Subspace<F> {
        let n = self.dim;
        let mut e = Echelon::new(self.field.clone(), n);
        'outer: for i in 0..n {
            for j in i + 1..n {
                if e.is_full() {
                    break 'outer;
                }
                let row = self.basis_bracket(i, j);
                if !row.is_empty() {
                    e.insert(row.clone());
                }
            }
        }
        Subspace::from_echelon(e)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subalgebra().is_full()
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|r| r.is_empty())
    }

    /// Smallest ideal containing `s`, by spinning under all `ad e_i`.
    pub fn ideal_closure(&self, s: &Subspace<F>) -> Result<Subspace<F>> {
        if s.ambient() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: s.ambient() });
        }
        let mut e = Echelon::new(self.field.clone(), self.dim);
        let mut queue: Vec<SparseRow<F::Elem>> = Vec::new();
        for r in s.basis() {
            if e.insert(r.clone()) {
                queue.push(r.clone());
            }
        }
        while let Some(v) = queue.pop() {
            if e.is_full() {
                break;
            }
            for i in 0..self.dim {
                let w = self.bracket_basis_sparse(i, &v);
                if !w.is_empty() && e.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        Ok(Subspace::from_echelon(e))
    }

    /// Subalgebra generated by the given vectors (closure under bracketing).
    pub fn generated_subalgebra(&self, gens: &[SparseRow<F::Elem>]) -> Subspace<F> {
        let mut e = Echelon::new(self.field.clone(), self.dim);
        let mut queue = Vec::new();
        let gens: Vec<_> = gens.iter().filter(|g| !g.is_empty()).cloned().collect();
        for g in &gens {
            if e.insert(g.clone()) {
                queue.push(g.clone());
            }
        }
        // Left-normed brackets [g, [g', [...]]] span the generated subalgebra.
        while let Some(v) = queue.pop() {
            if e.is_full() {
                break;
            }
            for g in &gens {
                let w = self.bracket_sparse(g, &v);
                if !w.is_empty() && e.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        Subspace::from_echelon(e)
    }

    pub fn is_ideal(&self, s: &Subspace<F>) -> bool {
        s.ambient() == self.dim
            && s.basis().iter().all(|v| (0..self.dim).all(|i| s.contains_sparse(&self.bracket_basis_sparse(i, v))))
    }

    pub fn is_subalgebra(&self, s: &Subspace<F>) -> bool {
        let b = s.basis();
        s.ambient() == self.dim
            && (0..b.len()).all(|i| (i + 1..b.len()).all(|j| s.contains_sparse(&self.bracket_sparse(&b[i], &b[j]))))
    }

    /// Quotient by an ideal on the complement spanned by the ideal's non-pivot coordinates.
    pub fn quotient(&self, ideal: &Subspace<F>) -> Result<(LieAlgebra<F>, QuotientMap<F>)> {
        if ideal.ambient() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: ideal.ambient() });
        }
        if !self.is_ideal(ideal) {
            return Err(Error::NotAnIdeal(format!("subspace of dim {} in {}", ideal.dim(), self.name)));
        }
        let q = ideal.quotient_map();
        let comp = q.complement().to_vec();
        let labels = comp.iter().map(|&c| self.labels[c].clone()).collect();
        let name = if ideal.is_zero() { self.name.clone() } else { format!("{}/I{}", self.name, ideal.dim()) };
        let alg = LieAlgebra::from_fn(name, self.field.clone(), labels, |a, b| {
            q.apply_sparse(self.basis_bracket(comp[a], comp[b]))
        })?;
        Ok((alg, q))
    }

    /// The subalgebra `s` as an algebra on its canonical basis.
    pub fn subalgebra(&self, s: &Subspace<F>, name: impl Into<String>) -> Result<LieAlgebra<F>> {
        if !self.is_subalgebra(s) {
            return Err(Error::InvalidArgument("subspace is not closed under the bracket".into()));
        }
        let basis = s.basis();
        let labels = basis
            .iter()
            .enumerate()
            .map(|(t, r)| match r.as_slice() {
                [(k, x)] if self.field.is_one(x) => self.labels[*k].clone(),
                _ => format!("b{t}"),
            })
            .collect();
        let pivots = s.pivots().to_vec();
        LieAlgebra::from_fn(name, self.field.clone(), labels, |a, b| {
            let v = self.bracket_sparse(&basis[a], &basis[b]);
            // coordinates of a member vector are its values at the pivots
            let mut out = Vec::new();
            for (t, &p) in pivots.iter().enumerate() {
                if let Ok(k) = v.binary_search_by_key(&p, |e| e.0) {
                    out.push((t, v[k].1.clone()));
                }
            }
            out
        })
    }

    /// Killing form `K_ij = tr(ad e_i ad e_j)`.
    pub fn killing_form(&self) -> Matrix<F> {
        let n = self.dim;
        let f = &self.field;
        let mut dense = vec![vec![f.zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                // sum_{k,m} c_{ik}^m c_{jm}^k
                let mut t = f.zero();
                for k in 0..n {
                    for (m, c) in self.basis_bracket(i, k) {
                        let row = self.basis_bracket(j, *m);
                        if let Ok(pos) = row.binary_search_by_key(&k, |e| e.0) {
                            f.add_mul_assign(&mut t, c, &row[pos].1);
                        }
                    }
                }
                dense[i][j] = t.clone();
                dense[j][i] = t;
            }
        }
        Matrix::from_dense(f.clone(), n, &dense)
    }

    /// Linear maps commuting with every `ad e_i`, as flattened `n x n` matrices (row-major).
    pub fn centroid(&self) -> Subspace<F> {
        let n = self.dim;
        let f = &self.field;
        let mut rows = Vec::new();
        for i in 0..n {
            // entry (a, b) of phi*ad_i - ad_i*phi
            let mut block: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); n * n];
            for b in 0..n {
                for (k, c) in self.basis_bracket(i, b) {
                    for a in 0..n {
                        block[a * n + b].push((a * n + k, c.clone()));
                    }
                }
            }
            for k in 0..n {
                for (a, c) in self.basis_bracket(i, k) {
                    for b in 0..n {
                        block[a * n + b].push((k * n + b, f.neg(c)));
                    }
                }
            }
            rows.extend(block.into_iter().map(|r| normalize_row(f, r)).filter(|r| !r.is_empty()));
        }
        kernel_of_rows(f.clone(), n * n, rows)
    }

    /// Relabels the basis; structure constants are unchanged.
    pub fn relabeled(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Same algebra with basis reordered: new basis element `t` is old element `perm[t]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dim;
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
        }
        let mut inv = vec![usize::MAX; n];
        for (t, &o) in perm.iter().enumerate() {
            inv[o] = t;
        }
        if inv.contains(&usize::MAX) {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        let labels = perm.iter().map(|&o| self.labels[o].clone()).collect();
        LieAlgebra::from_fn(self.name.clone(), self.field.clone(), labels, |a, b| {
            self.basis_bracket(perm[a], perm[b]).iter().map(|(k, x)| (inv[*k], x.clone())).collect()
        })
    }

    /// Nonzero brackets `(i, j, [e_i, e_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &SparseRow<F::Elem>)> {
        let n = self.dim;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).filter_map(move |(i, j)| {
            let r = self.basis_bracket(i, j);
            (!r.is_empty()).then_some((i, j, r))
        })
    }
}
