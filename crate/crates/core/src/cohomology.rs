//! Chevalley-Eilenberg cochains in degrees 0..=3.
//!
//! Coordinates: `C^1` index `i*m + a` is coordinate `a` of `f(e_i)`; `C^2` index
//! `pair(i,j)*m + a` for `i < j`; `C^3` likewise over triples `i < j < k`.
//!
//! When some basis elements act diagonally on both `L` and `M`, the complex
//! splits into their joint weight spaces. Each such `t` gives a homotopy
//! `L_t = d i_t + i_t d`, so only the weight-zero summand carries cohomology and
//! `h1`/`h2` solve that summand alone.

use crate::error::{Error, Result};
use crate::exact::echelon::dense_from_sparse;
use crate::exact::matrix::kernel_of_echelon;
use crate::exact::{Echelon, Field, Matrix, Rationals, SparseRow, Subspace};
use crate::liecore::{normalize_row, LieAlgebra};

#[derive(Clone, Debug)]
pub struct LieModule<F: Field> {
    pub base: LieAlgebra<F>,
    pub dim_m: usize,
    pub action: Vec<Matrix<F>>,
}

impl<F: Field> LieModule<F> {
    /// Checks `rho([e_i, e_j]) = [rho_i, rho_j]` on every pair.
    pub fn new(base: LieAlgebra<F>, dim_m: usize, action: Vec<Matrix<F>>) -> Result<Self> {
        let n = base.dim();
        if action.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: action.len() });
        }
        if let Some(a) = action.iter().find(|a| a.rows() != dim_m || a.cols() != dim_m) {
            return Err(Error::DimensionMismatch { expected: dim_m, got: a.rows().max(a.cols()) });
        }
        let f = base.field().clone();
        for i in 0..n {
            for j in i + 1..n {
                let mut lhs = Matrix::zero(f.clone(), dim_m, dim_m);
                for (k, c) in base.basis_bracket(i, j) {
                    lhs = lhs.add_scaled(&action[*k], c);
                }
                if lhs != action[i].commutator(&action[j]) {
                    return Err(Error::Consistency(format!("not a representation on pair ({i}, {j})")));
                }
            }
        }
        Ok(LieModule { base, dim_m, action })
    }

    pub fn trivial(base: &LieAlgebra<F>) -> Self {
        let f = base.field().clone();
        let action = (0..base.dim()).map(|_| Matrix::zero(f.clone(), 1, 1)).collect();
        LieModule { base: base.clone(), dim_m: 1, action }
    }

    pub fn adjoint(base: &LieAlgebra<F>) -> Self {
        let action = (0..base.dim()).map(|i| base.ad_basis(i)).collect();
        LieModule { base: base.clone(), dim_m: base.dim(), action }
    }

    pub fn is_trivial(&self) -> bool {
        self.action.iter().all(|a| a.is_zero())
    }
}

/// Position of `i < j` in the lexicographic list of pairs.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

pub fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
}

pub fn cochain_dim(n: usize, m: usize, k: usize) -> usize {
    let binom = match k {
        0 => 1,
        1 => n,
        2 => n * n.saturating_sub(1) / 2,
        3 => n * n.saturating_sub(1) * n.saturating_sub(2) / 6,
        _ => 0,
    };
    binom * m
}

/// The basis indices of the `k`-cochain coordinate `idx`, with module index.
pub fn cochain_coordinate(n: usize, m: usize, k: usize, idx: usize) -> (Vec<usize>, usize) {
    let (slot, a) = (idx / m, idx % m);
    let args = match k {
        0 => vec![],
        1 => vec![slot],
        2 => pairs(n).nth(slot).map(|(i, j)| vec![i, j]).unwrap(),
        _ => triples(n).nth(slot).map(|(i, j, l)| vec![i, j, l]).unwrap(),
    };
    (args, a)
}

struct Rows<'a, F: Field> {
    module: &'a LieModule<F>,
}

impl<F: Field> Rows<'_, F> {
    fn f(&self) -> &F {
        self.module.base.field()
    }

    /// Signed column of `phi(e_u, e_v)_b` in `C^2`.
    fn c2(&self, u: usize, v: usize, b: usize) -> Option<(usize, bool)> {
        let n = self.module.base.dim();
        let m = self.module.dim_m;
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some((pair_index(n, u, v) * m + b, false)),
            std::cmp::Ordering::Greater => Some((pair_index(n, v, u) * m + b, true)),
            std::cmp::Ordering::Equal => None,
        }
    }

    fn push_c2(&self, out: &mut Vec<(usize, F::Elem)>, u: usize, v: usize, b: usize, c: F::Elem) {
        if let Some((col, flip)) = self.c2(u, v, b) {
            out.push((col, if flip { self.f().neg(&c) } else { c }));
        }
    }

    /// Row of `d^0` for target coordinate `(i, a)`.
    fn d0(&self, i: usize, a: usize) -> SparseRow<F::Elem> {
        self.module.action[i].row(a).to_vec()
    }

    /// Row of `d^1` for target coordinate `(i, j, a)`.
    fn d1(&self, i: usize, j: usize, a: usize) -> SparseRow<F::Elem> {
        let f = self.f();
        let m = self.module.dim_m;
        let mut out = Vec::new();
        for (b, c) in self.module.action[i].row(a) {
            out.push((j * m + b, c.clone()));
        }
        for (b, c) in self.module.action[j].row(a) {
            out.push((i * m + b, f.neg(c)));
        }
        for (k, c) in self.module.base.basis_bracket(i, j) {
            out.push((k * m + a, f.neg(c)));
        }
        normalize_row(f, out)
    }

    /// Row of `d^2` for target coordinate `(x, y, z, a)`.
    fn d2(&self, x: usize, y: usize, z: usize, a: usize) -> SparseRow<F::Elem> {
        let f = self.f();
        let l = &self.module.base;
        let mut out = Vec::new();
        // x.phi(y,z) - y.phi(x,z) + z.phi(x,y)
        for (s, u, v, w) in [(false, x, y, z), (true, y, x, z), (false, z, x, y)] {
            for (b, c) in self.module.action[u].row(a) {
                let c = if s { f.neg(c) } else { c.clone() };
                self.push_c2(&mut out, v, w, *b, c);
            }
        }
        // - phi([x,y],z) + phi([x,z],y) - phi([y,z],x)
        for (neg, u, v, w) in [(true, x, y, z), (false, x, z, y), (true, y, z, x)] {
            for (k, c) in l.basis_bracket(u, v) {
                let c = if neg { f.neg(c) } else { c.clone() };
                self.push_c2(&mut out, *k, w, a, c);
            }
        }
        normalize_row(f, out)
    }

    fn row(&self, k: usize, args: &[usize], a: usize) -> SparseRow<F::Elem> {
        match k {
            0 => self.d0(args[0], a),
            1 => self.d1(args[0], args[1], a),
            _ => self.d2(args[0], args[1], args[2], a),
        }
    }
}

/// Matrix of `d^k : C^k -> C^(k+1)` for `k` in `0..=2`.
pub fn ce_differential<F: Field>(module: &LieModule<F>, k: usize) -> Result<Matrix<F>> {
    if k > 2 {
        return Err(Error::Unsupported(format!("differential d^{k}")));
    }
    let n = module.base.dim();
    let m = module.dim_m;
    let rows = Rows { module };
    let mut data = Vec::with_capacity(cochain_dim(n, m, k + 1));
    match k {
        0 => {
            for i in 0..n {
                for a in 0..m {
                    data.push(rows.d0(i, a));
                }
            }
        }
        1 => {
            for (i, j) in pairs(n) {
                for a in 0..m {
                    data.push(rows.d1(i, j, a));
                }
            }
        }
        _ => {
            for (x, y, z) in triples(n) {
                for a in 0..m {
                    data.push(rows.d2(x, y, z, a));
                }
            }
        }
    }
    Ok(Matrix::from_sparse_rows(module.base.field().clone(), cochain_dim(n, m, k), data))
}

/// Joint eigenvalues of the basis elements acting diagonally on both `L` and `M`.
struct Weights<E> {
    alg: Vec<Vec<E>>,
    module: Vec<Vec<E>>,
}

fn diagonal<F: Field>(a: &Matrix<F>) -> Option<Vec<F::Elem>> {
    let f = a.field();
    let mut d = vec![f.zero(); a.rows()];
    for (r, row) in a.sparse_rows().iter().enumerate() {
        for (c, x) in row {
            if *c != r {
                return None;
            }
            d[r] = x.clone();
        }
    }
    Some(d)
}

fn toral_weights<F: Field>(module: &LieModule<F>) -> Weights<F::Elem> {
    let l = &module.base;
    let mut alg = vec![Vec::new(); l.dim()];
    let mut md = vec![Vec::new(); module.dim_m];
    for t in 0..l.dim() {
        let (Some(da), Some(dm)) = (diagonal(&l.ad_basis(t)), diagonal(&module.action[t])) else { continue };
        if da.iter().all(|x| l.field().is_zero(x)) {
            continue;
        }
        for (w, x) in alg.iter_mut().zip(da) {
            w.push(x);
        }
        for (w, x) in md.iter_mut().zip(dm) {
            w.push(x);
        }
    }
    Weights { alg, module: md }
}

impl<E: Clone> Weights<E> {
    fn is_zero<F: Field<Elem = E>>(&self, f: &F, args: &[usize], a: usize) -> bool {
        (0..self.module[a].len()).all(|t| {
            let mut w = self.module[a][t].clone();
            for &i in args {
                w = f.sub(&w, &self.alg[i][t]);
            }
            f.is_zero(&w)
        })
    }
}

/// Weight-zero coordinates of `C^k`, listed in increasing order.
fn zero_weight_coords<F: Field>(module: &LieModule<F>, w: &Weights<F::Elem>, k: usize) -> Vec<(Vec<usize>, usize)> {
    let n = module.base.dim();
    let m = module.dim_m;
    let f = module.base.field();
    let args: Box<dyn Iterator<Item = Vec<usize>>> = match k {
        0 => Box::new(std::iter::once(vec![])),
        1 => Box::new((0..n).map(|i| vec![i])),
        2 => Box::new(pairs(n).map(|(i, j)| vec![i, j])),
        _ => Box::new(triples(n).map(|(i, j, l)| vec![i, j, l])),
    };
    args.flat_map(|s| (0..m).map(move |a| (s.clone(), a))).filter(|(s, a)| w.is_zero(f, s, *a)).collect()
}

fn full_index(n: usize, m: usize, args: &[usize], a: usize) -> usize {
    match args.len() {
        0 => a,
        1 => args[0] * m + a,
        2 => pair_index(n, args[0], args[1]) * m + a,
        _ => unreachable!(),
    }
}

/// A restricted cochain space: its coordinates and the map from full indices.
struct Restricted {
    coords: Vec<usize>,
    index: std::collections::HashMap<usize, usize>,
}

impl Restricted {
    fn new(coords: Vec<usize>) -> Self {
        let index = coords.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        Restricted { coords, index }
    }
    fn dim(&self) -> usize {
        self.coords.len()
    }
    fn map_row<E: Clone>(&self, row: &[(usize, E)]) -> SparseRow<E> {
        // d preserves weights, so a weight-zero row only meets weight-zero columns
        row.iter()
            .map(|(c, x)| (*self.index.get(c).expect("differential preserves weights"), x.clone()))
            .collect()
    }
    fn embed<F: Field>(&self, f: &F, full_dim: usize, v: &[(usize, F::Elem)]) -> Vec<F::Elem> {
        let lifted: Vec<(usize, F::Elem)> = v.iter().map(|(c, x)| (self.coords[*c], x.clone())).collect();
        dense_from_sparse(f, &lifted, full_dim)
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyResult<F: Field> {
    pub degree: usize,
    pub dim: usize,
    /// Dense cocycles in the full `C^degree` coordinates.
    pub cocycle_reps: Vec<Vec<F::Elem>>,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    /// Number of toral basis elements used to split the complex.
    pub torus_rank: usize,
}

impl<F: Field> CohomologyResult<F> {
    /// Degree-1 representatives as `dim_m x n` matrices (column `i` is `f(e_i)`).
    pub fn as_matrices(&self, field: &F, n: usize, m: usize) -> Vec<Matrix<F>> {
        assert_eq!(self.degree, 1);
        self.cocycle_reps
            .iter()
            .map(|v| {
                let dense: Vec<Vec<F::Elem>> =
                    (0..m).map(|a| (0..n).map(|i| v[i * m + a].clone()).collect()).collect();
                Matrix::from_dense(field.clone(), n, &dense)
            })
            .collect()
    }
}

fn cohomology<F: Field>(module: &LieModule<F>, k: usize, split: bool) -> CohomologyResult<F> {
    let f = module.base.field().clone();
    let n = module.base.dim();
    let m = module.dim_m;
    let weights = if split { toral_weights(module) } else { Weights { alg: vec![vec![]; n], module: vec![vec![]; m] } };
    let torus_rank = weights.module.first().map_or(0, |w| w.len());
    let rows = Rows { module };
    let prev: Vec<_> = zero_weight_coords(module, &weights, k - 1);
    let here: Vec<_> = zero_weight_coords(module, &weights, k);
    let next: Vec<_> = zero_weight_coords(module, &weights, k + 1);
    let src = Restricted::new(prev.iter().map(|(s, a)| full_index(n, m, s, *a)).collect());
    let mid = Restricted::new(here.iter().map(|(s, a)| full_index(n, m, s, *a)).collect());
    // image of d^(k-1) inside the weight-zero part of C^k, spanned by its columns
    let mut image_rows: Vec<SparseRow<F::Elem>> = vec![Vec::new(); src.dim()];
    for (r, (s, a)) in here.iter().enumerate() {
        let row = src.map_row(&rows.row(k - 1, s, *a));
        for (c, x) in row {
            image_rows[c].push((r, x));
        }
    }
    let image = Subspace::from_sparse_rows(f.clone(), mid.dim(), image_rows);
    let max_rank = mid.dim() - image.dim();
    let mut e = Echelon::new(f.clone(), mid.dim());
    let mut saturated = max_rank == 0;
    if !saturated {
        for (s, a) in &next {
            let row = mid.map_row(&rows.row(k, s, *a));
            if !row.is_empty() {
                e.insert(row);
            }
            if e.rank() == max_rank {
                saturated = true;
                break;
            }
        }
    }
    let cocycles = if saturated { image.clone() } else { kernel_of_echelon(e) };
    let mut span = Echelon::new(f.clone(), mid.dim());
    for b in image.basis() {
        span.insert(b.clone());
    }
    let full = cochain_dim(n, m, k);
    let mut reps = Vec::new();
    for v in cocycles.basis() {
        if span.insert(v.clone()) {
            reps.push(mid.embed(&f, full, v));
        }
    }
    CohomologyResult {
        degree: k,
        dim: cocycles.dim() - image.dim(),
        cocycle_reps: reps,
        cocycle_dim: cocycles.dim(),
        coboundary_dim: image.dim(),
        torus_rank,
    }
}

pub fn h1<F: Field>(module: &LieModule<F>) -> CohomologyResult<F> {
    cohomology(module, 1, true)
}

pub fn h2<F: Field>(module: &LieModule<F>) -> CohomologyResult<F> {
    cohomology(module, 2, true)
}

/// Same as [`h1`]/[`h2`] but over the whole complex, without the weight splitting.
pub fn cohomology_unsplit<F: Field>(module: &LieModule<F>, k: usize) -> Result<CohomologyResult<F>> {
    if !(1..=2).contains(&k) {
        return Err(Error::Unsupported(format!("H^{k}")));
    }
    Ok(cohomology(module, k, false))
}

/// Checks `d phi = 0` for a cochain of degree 1 or 2.
pub fn is_cocycle<F: Field>(module: &LieModule<F>, k: usize, phi: &[F::Elem]) -> Result<bool> {
    let d = ce_differential(module, k)?;
    if phi.len() != d.cols() {
        return Err(Error::DimensionMismatch { expected: d.cols(), got: phi.len() });
    }
    let f = module.base.field();
    Ok(d.apply(phi).iter().all(|x| f.is_zero(x)))
}

/// First failing triple of the trivial-coefficient cocycle identity, if any.
pub fn cocycle_failure<F: Field>(l: &LieAlgebra<F>, phi: &[F::Elem]) -> Option<(usize, usize, usize)> {
    let module = LieModule::trivial(l);
    let rows = Rows { module: &module };
    let f = l.field();
    triples(l.dim()).find(|&(x, y, z)| {
        let row = rows.d2(x, y, z, 0);
        let mut acc = f.zero();
        for (c, v) in &row {
            f.add_mul_assign(&mut acc, v, &phi[*c]);
        }
        !f.is_zero(&acc)
    })
}

/// `dim H^2(L, F)`, checked against the kernel of `Lambda^2 L / J -> L` when `L` is perfect.
pub fn h2_homology_dim<F: Field>(l: &LieAlgebra<F>) -> Result<usize> {
    let dim = h2(&LieModule::trivial(l)).dim;
    if l.is_perfect() {
        let u = crate::extensions::uce(l)?;
        if u.hat_center.dim() != dim {
            return Err(Error::Consistency(format!(
                "dim H^2 = {dim} but the exterior-square kernel has dim {}",
                u.hat_center.dim()
            )));
        }
    }
    Ok(dim)
}

/// Lowest degree of the one-sided Witt basis `e_n = x^(n+1) d/dx`.
const W1_MIN: i64 = -1;

/// Degree-`d` piece of `H^2(W_1, Q)` with trivial coefficients.
///
/// A degree-`d` cochain is supported on basis tuples whose degrees sum to `d`:
/// `C^1_d` is spanned by the dual of `e_d`, `C^2_d` by pairs `e_a ^ e_b` with
/// `-1 <= a < b`, `a + b = d`, and `C^3_d` by triples likewise. These are the
/// weight spaces of `ad e_0`, so the complex is their direct sum.
pub fn graded_h2_trivial(r: usize, d: i64) -> Result<usize> {
    if r != 1 {
        return Err(Error::Unsupported(format!("graded H^2 for W_{r}; only r = 1 is computed")));
    }
    let q = Rationals;
    let pairs_d: Vec<(i64, i64)> = (W1_MIN..).take_while(|a| 2 * a < d).map(|a| (a, d - a)).collect();
    let pidx = |a: i64, b: i64| -> Option<(usize, bool)> {
        if a == b {
            return None;
        }
        let (lo, flip) = if a < b { (a, false) } else { (b, true) };
        pairs_d.iter().position(|p| p.0 == lo).map(|i| (i, flip))
    };
    let mut e = Echelon::new(q, pairs_d.len());
    for a in W1_MIN.. {
        if 3 * a + 3 > d {
            break;
        }
        for b in a + 1.. {
            let c = d - a - b;
            if c <= b {
                break;
            }
            let mut row = Vec::new();
            for (coef, u, v) in [(-(b - a), a + b, c), (c - a, a + c, b), (-(c - b), b + c, a)] {
                if let Some((i, flip)) = pidx(u, v) {
                    let x = if flip { -coef } else { coef };
                    row.push((i, q.from_i64(x)));
                }
            }
            e.insert(normalize_row(&q, row));
        }
    }
    let cocycle_dim = pairs_d.len() - e.rank();
    // d^1 of the dual of e_d: (a, b) -> -(b - a)
    let coboundary: Vec<(usize, _)> =
        pairs_d.iter().enumerate().map(|(i, (a, b))| (i, q.from_i64(a - b))).collect();
    let coboundary_dim = if d >= W1_MIN && !normalize_row(&q, coboundary).is_empty() { 1 } else { 0 };
    Ok(cocycle_dim - coboundary_dim)
}
