//! Derivation algebras: `Der(L)`, the inner derivations `ad(L)`, outer
//! derivation representatives and the completeness predicate.
//!
//! A derivation `D` is stored as an `n x n` matrix whose column `i` is `D e_i`,
//! flattened row-major into the derivation coordinate space `F^(n*n)`.

use crate::error::{Error, Result};
use crate::exact::echelon::sparse_from_dense;
use crate::exact::{Echelon, Field, Matrix, SparseRow, Subspace};
use crate::liecore::{normalize_row, LieAlgebra};

/// Largest dimension solved with the full `n^2`-unknown Leibniz system under [`Strategy::Auto`].
pub const FULL_SYSTEM_MAX_DIM: usize = 30;
/// Largest generating set tried by the propagation strategy.
pub const MAX_GENERATORS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Full,
    Propagation,
    Auto,
}

#[derive(Clone, Debug)]
pub struct DerivationAlgebra<F: Field> {
    pub base: LieAlgebra<F>,
    /// Canonical basis of the derivation space inside `F^(n*n)`.
    pub space: Subspace<F>,
    pub der_basis: Vec<Matrix<F>>,
    /// Commutator bracket on `der_basis`.
    pub as_algebra: LieAlgebra<F>,
    /// `ad(L)` in `der_basis` coordinates.
    pub inner: Subspace<F>,
    pub out_dim: usize,
    pub strategy_used: Strategy,
}

impl<F: Field> DerivationAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.der_basis.len()
    }

    /// Derivation-space coordinates of a matrix, if it is a derivation.
    pub fn coordinates(&self, d: &Matrix<F>) -> Option<Vec<F::Elem>> {
        let n = self.base.dim();
        let flat = crate::exact::echelon::dense_from_sparse(self.base.field(), &d.flatten(), n * n);
        self.space.coordinates(&flat)
    }

    pub fn matrix_of(&self, coords: &[F::Elem]) -> Matrix<F> {
        let n = self.base.dim();
        let f = self.base.field().clone();
        let flat = sparse_from_dense(&f, &self.space.combine(coords));
        Matrix::unflatten(f, n, n, &flat)
    }
}

/// Checks `D[x, y] = [Dx, y] + [x, Dy]` on every basis pair.
pub fn is_derivation<F: Field>(l: &LieAlgebra<F>, d: &Matrix<F>) -> bool {
    let n = l.dim();
    if d.rows() != n || d.cols() != n {
        return false;
    }
    let f = l.field();
    let cols: Vec<SparseRow<F::Elem>> = d.transpose().sparse_rows().to_vec();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = d.apply(&crate::exact::echelon::dense_from_sparse(f, l.basis_bracket(i, j), n));
            let a = l.bracket_sparse(&cols[i], &[(j, f.one())]);
            let b = l.bracket_sparse(&[(i, f.one())], &cols[j]);
            let rhs = normalize_row(f, a.into_iter().chain(b).collect());
            if sparse_from_dense(f, &lhs) != rhs {
                return false;
            }
        }
    }
    true
}

/// `ad(L)` as a subspace of `F^(n*n)`.
pub fn inner_space<F: Field>(l: &LieAlgebra<F>) -> Subspace<F> {
    let n = l.dim();
    Subspace::from_sparse_rows(l.field().clone(), n * n, (0..n).map(|i| l.ad_basis(i).flatten()))
}

/// Leibniz constraint rows of the full system, one block per basis pair.
fn full_system_rows<F: Field>(l: &LieAlgebra<F>) -> impl Iterator<Item = SparseRow<F::Elem>> + '_ {
    let n = l.dim();
    let f = l.field();
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).flat_map(move |(i, j)| {
        // row m: sum_k c_ij^k D[m][k] - sum_k c_kj^m D[k][i] - sum_k c_ik^m D[k][j]
        let mut block: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); n];
        for (k, c) in l.basis_bracket(i, j) {
            for (m, row) in block.iter_mut().enumerate() {
                row.push((m * n + k, c.clone()));
            }
        }
        for k in 0..n {
            for (m, c) in l.basis_bracket(k, j) {
                block[*m].push((k * n + i, f.neg(c)));
            }
            for (m, c) in l.basis_bracket(i, k) {
                block[*m].push((k * n + j, f.neg(c)));
            }
        }
        block.into_iter().map(move |r| normalize_row(f, r)).filter(|r| !r.is_empty())
    })
}

fn solve_full<F: Field>(l: &LieAlgebra<F>, inner_dim: usize) -> Subspace<F> {
    let n = l.dim();
    let mut e = Echelon::new(l.field().clone(), n * n);
    // The kernel always contains ad(L); once the rank leaves no more room, it is exactly ad(L).
    let max_rank = n * n - inner_dim;
    for row in full_system_rows(l) {
        if e.rank() == max_rank {
            return inner_space(l);
        }
        e.insert(row);
    }
    crate::exact::matrix::kernel_of_echelon(e)
}

/// Greedy search for a small generating set of basis vectors: all singletons,
/// all pairs, then the best pair extended one vector at a time.
pub fn find_generating_set<F: Field>(l: &LieAlgebra<F>, max_size: usize) -> Option<Vec<usize>> {
    let n = l.dim();
    let f = l.field();
    let unit = |i: usize| vec![(i, f.one())];
    let closure_dim = |set: &[usize]| {
        let gens: Vec<_> = set.iter().map(|&i| unit(i)).collect();
        l.generated_subalgebra(&gens).dim()
    };
    if n == 0 {
        return Some(Vec::new());
    }
    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    for i in 0..n {
        let d = closure_dim(&[i]);
        if d == n {
            return Some(vec![i]);
        }
        if d > best.0 {
            best = (d, vec![i]);
        }
    }
    if max_size < 2 {
        return None;
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = closure_dim(&[i, j]);
            if d == n {
                return Some(vec![i, j]);
            }
            if d > best.0 || best.1.len() < 2 {
                best = (d, vec![i, j]);
            }
        }
    }
    let mut current = best.1;
    while current.len() < max_size {
        let mut step: Option<(usize, usize)> = None;
        for k in (0..n).filter(|k| !current.contains(k)) {
            let mut cand = current.clone();
            cand.push(k);
            let d = closure_dim(&cand);
            if d == n {
                return Some(cand);
            }
            if step.is_none_or(|(bd, _)| d > bd) {
                step = Some((d, k));
            }
        }
        let (_, k) = step?;
        current.push(k);
    }
    None
}

/// Derivation values parametrized linearly by the images of the generators:
/// `vals[m]` is the linear form giving coordinate `m` of `D v`.
type ParamVec<E> = Vec<Vec<E>>;

fn param_zero<F: Field>(f: &F, n: usize, u: usize) -> ParamVec<F::Elem> {
    vec![vec![f.zero(); u]; n]
}

fn param_axpy<F: Field>(f: &F, acc: &mut [F::Elem], c: &F::Elem, x: &[F::Elem]) {
    if f.is_zero(c) {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if !f.is_zero(b) {
            f.add_mul_assign(a, c, b);
        }
    }
}

/// `[P, v]` where `P` is a parametrized vector and `v` a fixed sparse vector.
fn bracket_param_left<F: Field>(
    l: &LieAlgebra<F>,
    p: &ParamVec<F::Elem>,
    v: &[(usize, F::Elem)],
    out: &mut ParamVec<F::Elem>,
) {
    let f = l.field();
    for (m, form) in p.iter().enumerate() {
        if form.iter().all(|x| f.is_zero(x)) {
            continue;
        }
        for (j, x) in v {
            for (t, c) in l.basis_bracket(m, *j) {
                let coef = f.mul(x, c);
                param_axpy(f, &mut out[*t], &coef, form);
            }
        }
    }
}

/// `[v, P]` for a fixed sparse `v`.
fn bracket_param_right<F: Field>(
    l: &LieAlgebra<F>,
    v: &[(usize, F::Elem)],
    p: &ParamVec<F::Elem>,
    out: &mut ParamVec<F::Elem>,
) {
    let f = l.field();
    for (m, form) in p.iter().enumerate() {
        if form.iter().all(|x| f.is_zero(x)) {
            continue;
        }
        for (j, x) in v {
            for (t, c) in l.basis_bracket(*j, m) {
                let coef = f.mul(x, c);
                param_axpy(f, &mut out[*t], &coef, form);
            }
        }
    }
}

fn solve_propagation<F: Field>(l: &LieAlgebra<F>, gens: &[usize], inner_dim: usize) -> Result<Subspace<F>> {
    let n = l.dim();
    let f = l.field().clone();
    let u = gens.len() * n;
    // Known elements with their parametrized images; D(g_t) coordinate m is unknown t*n + m.
    let mut known: Vec<(SparseRow<F::Elem>, ParamVec<F::Elem>)> = Vec::new();
    let mut span = Echelon::new(f.clone(), n);
    let mut gen_images = Vec::new();
    for (t, &g) in gens.iter().enumerate() {
        let mut p = param_zero(&f, n, u);
        for (m, row) in p.iter_mut().enumerate() {
            row[t * n + m] = f.one();
        }
        let v = vec![(g, f.one())];
        span.insert(v.clone());
        gen_images.push((v.clone(), p.clone()));
        known.push((v, p));
    }
    // Spanning tree: D[g, b] = [Dg, b] + [g, Db].
    let mut next = 0;
    while next < known.len() && !span.is_full() {
        let (b, db) = known[next].clone();
        next += 1;
        for (g, dg) in &gen_images {
            let c = l.bracket_sparse(g, &b);
            if c.is_empty() || !span.insert(c.clone()) {
                continue;
            }
            let mut dc = param_zero(&f, n, u);
            bracket_param_left(l, dg, &b, &mut dc);
            bracket_param_right(l, g, &db, &mut dc);
            known.push((c, dc));
        }
    }
    if !span.is_full() {
        return Err(Error::Consistency("generating set does not span the algebra".into()));
    }
    // Gauss-Jordan on the known vectors, carrying their images, to get D(e_k).
    let mut rows: Vec<(Vec<F::Elem>, ParamVec<F::Elem>)> = known
        .into_iter()
        .map(|(v, p)| (crate::exact::echelon::dense_from_sparse(&f, &v, n), p))
        .collect();
    let mut images: Vec<Option<ParamVec<F::Elem>>> = vec![None; n];
    let mut r0 = 0;
    for col in 0..n {
        let Some(piv) = (r0..rows.len()).find(|&r| !f.is_zero(&rows[r].0[col])) else {
            return Err(Error::Consistency("spanning set is rank deficient".into()));
        };
        rows.swap(r0, piv);
        let inv = f.inv(&rows[r0].0[col])?;
        let (v, p) = &mut rows[r0];
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for form in p.iter_mut() {
            for x in form.iter_mut() {
                *x = f.mul(x, &inv);
            }
        }
        let (pv, pp) = rows[r0].clone();
        for (r, (v, p)) in rows.iter_mut().enumerate() {
            if r == r0 || f.is_zero(&v[col]) {
                continue;
            }
            let c = f.neg(&v[col]);
            param_axpy(&f, v, &c, &pv);
            for (form, pform) in p.iter_mut().zip(&pp) {
                param_axpy(&f, form, &c, pform);
            }
        }
        r0 += 1;
    }
    for (col, slot) in images.iter_mut().enumerate() {
        *slot = Some(rows[col].1.clone());
    }
    let images: Vec<ParamVec<F::Elem>> = images.into_iter().map(|x| x.unwrap()).collect();
    // Residual Leibniz constraints on every basis pair.
    let mut e = Echelon::new(f.clone(), u);
    let max_rank = u - inner_dim;
    let mut saturated = false;
    'pairs: for i in 0..n {
        for j in i + 1..n {
            let mut res = param_zero(&f, n, u);
            for (k, c) in l.basis_bracket(i, j) {
                for (m, form) in images[*k].iter().enumerate() {
                    param_axpy(&f, &mut res[m], c, form);
                }
            }
            let mut rhs = param_zero(&f, n, u);
            bracket_param_left(l, &images[i], &[(j, f.one())], &mut rhs);
            bracket_param_right(l, &[(i, f.one())], &images[j], &mut rhs);
            let neg_one = f.neg(&f.one());
            for (a, b) in res.iter_mut().zip(&rhs) {
                param_axpy(&f, a, &neg_one, b);
                if e.rank() == max_rank {
                    saturated = true;
                    break 'pairs;
                }
                let row = sparse_from_dense(&f, a);
                if !row.is_empty() {
                    e.insert(row);
                }
            }
        }
    }
    if saturated || e.rank() == max_rank {
        return Ok(inner_space(l));
    }
    let solutions = crate::exact::matrix::kernel_of_echelon(e);
    // D(e_k) coordinate m = images[k][m] . lambda, stored at flat index m*n + k.
    let flats = solutions.basis_dense().into_iter().map(|lambda| {
        let mut flat = Vec::new();
        for m in 0..n {
            for (k, img) in images.iter().enumerate() {
                let mut acc = f.zero();
                for (a, b) in img[m].iter().zip(&lambda) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        f.add_mul_assign(&mut acc, a, b);
                    }
                }
                if !f.is_zero(&acc) {
                    flat.push((m * n + k, acc));
                }
            }
        }
        flat
    });
    Ok(Subspace::from_sparse_rows(f.clone(), n * n, flats.collect::<Vec<_>>()))
}

/// The derivation space of `l` as a canonical subspace of `F^(n*n)`.
pub fn derivation_space<F: Field>(l: &LieAlgebra<F>, strategy: Strategy) -> Result<(Subspace<F>, Strategy)> {
    let n = l.dim();
    let inner_dim = n - l.center().dim();
    let strategy = match strategy {
        Strategy::Auto if n <= FULL_SYSTEM_MAX_DIM => Strategy::Full,
        Strategy::Auto => Strategy::Propagation,
        s => s,
    };
    match strategy {
        Strategy::Full => Ok((solve_full(l, inner_dim), Strategy::Full)),
        _ => match find_generating_set(l, MAX_GENERATORS) {
            Some(gens) => Ok((solve_propagation(l, &gens, inner_dim)?, Strategy::Propagation)),
            None => Ok((solve_full(l, inner_dim), Strategy::Full)),
        },
    }
}

pub fn derivation_algebra<F: Field>(l: &LieAlgebra<F>) -> Result<DerivationAlgebra<F>> {
    derivation_algebra_with(l, Strategy::Auto)
}

pub fn derivation_algebra_with<F: Field>(l: &LieAlgebra<F>, strategy: Strategy) -> Result<DerivationAlgebra<F>> {
    let n = l.dim();
    let f = l.field().clone();
    let (space, used) = derivation_space(l, strategy)?;
    let der_basis: Vec<Matrix<F>> =
        space.basis().iter().map(|r| Matrix::unflatten(f.clone(), n, n, r)).collect();
    let pivots = space.pivots().to_vec();
    let coords_of = |m: &Matrix<F>| -> Result<SparseRow<F::Elem>> {
        let flat = m.flatten();
        if !space.contains_sparse(&flat) {
            return Err(Error::Consistency("matrix outside the derivation space".into()));
        }
        let mut out = Vec::new();
        for (t, &p) in pivots.iter().enumerate() {
            if let Ok(k) = flat.binary_search_by_key(&p, |e| e.0) {
                out.push((t, flat[k].1.clone()));
            }
        }
        Ok(out)
    };
    let d = der_basis.len();
    let mut brackets = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            brackets.push((a, b, coords_of(&der_basis[a].commutator(&der_basis[b]))?));
        }
    }
    let labels = (0..d).map(|t| format!("D{t}")).collect();
    let as_algebra = LieAlgebra::from_brackets(format!("Der({})", l.name()), f.clone(), labels, brackets)?;
    let mut inner_rows = Vec::new();
    for i in 0..n {
        inner_rows.push(coords_of(&l.ad_basis(i))?);
    }
    let inner = Subspace::from_sparse_rows(f, d, inner_rows);
    let out_dim = d - inner.dim();
    Ok(DerivationAlgebra { base: l.clone(), space, der_basis, as_algebra, inner, out_dim, strategy_used: used })
}

/// Zero center and every derivation inner.
pub fn is_complete<F: Field>(l: &LieAlgebra<F>) -> Result<bool> {
    if !l.center().is_zero() {
        return Ok(false);
    }
    Ok(derivation_algebra(l)?.out_dim == 0)
}

#[derive(Clone, Debug)]
pub struct OuterDerivations<F: Field> {
    /// Coset representatives completing `ad(L)` to `Der(L)`.
    pub representatives: Vec<Matrix<F>>,
    /// Their indices in `der_basis`.
    pub indices: Vec<usize>,
    /// `Der(L) / ad(L)` on the representatives.
    pub algebra: LieAlgebra<F>,
}

pub fn outer_representatives<F: Field>(der: &DerivationAlgebra<F>) -> Result<OuterDerivations<F>> {
    let (algebra, q) = der.as_algebra.quotient(&der.inner)?;
    let indices = q.complement().to_vec();
    let representatives = indices.iter().map(|&t| der.der_basis[t].clone()).collect();
    Ok(OuterDerivations { representatives, indices, algebra: algebra.with_name(format!("Out({})", der.base.name())) })
}
