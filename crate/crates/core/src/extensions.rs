//! Central extensions, the exterior-square universal central extension, lifted
//! derivations and the stabilizer criterion for simplicity of `Der(L)`.

use crate::cohomology::{cocycle_failure, h1, h2, pair_index, pairs, triples, LieModule};
use crate::derivations::{derivation_algebra, is_derivation, outer_representatives, DerivationAlgebra};
use crate::error::{Error, Result};
use crate::exact::echelon::{dense_from_sparse, sparse_from_dense};
use crate::exact::{kernel_of_rows, Field, Matrix, QuotientMap, SparseRow, Subspace};
use crate::liecore::{is_simple, normalize_row, LieAlgebra, Verdict};

/// Largest base dimension for which `uce` also checks `H^1(hat) = H^2(hat) = 0`.
pub const UNIVERSALITY_CHECK_MAX_DIM: usize = 30;

#[derive(Clone, Debug)]
pub struct CentralExtensionData<F: Field> {
    pub base: LieAlgebra<F>,
    /// Trivial-coefficient 2-cocycles in pair coordinates.
    pub cocycles: Vec<Vec<F::Elem>>,
    pub total: LieAlgebra<F>,
    /// `n x (n + s)` projection onto the base.
    pub projection: Matrix<F>,
    pub kernel: Subspace<F>,
}

/// `L + F^s` with `[(x, a), (y, b)] = ([x, y], phi_1(x, y), ..., phi_s(x, y))`.
pub fn central_extension<F: Field>(l: &LieAlgebra<F>, cocycles: &[Vec<F::Elem>]) -> Result<CentralExtensionData<F>> {
    let n = l.dim();
    let s = cocycles.len();
    let f = l.field().clone();
    let npairs = n * n.saturating_sub(1) / 2;
    for phi in cocycles {
        if phi.len() != npairs {
            return Err(Error::DimensionMismatch { expected: npairs, got: phi.len() });
        }
        if let Some((i, j, k)) = cocycle_failure(l, phi) {
            return Err(Error::NotACocycle(i, j, k));
        }
    }
    let mut labels = l.labels().to_vec();
    labels.extend((0..s).map(|t| if s == 1 { "z".to_string() } else { format!("z{}", t + 1) }));
    let brackets = pairs(n).map(|(i, j)| {
        let mut row = l.basis_bracket(i, j).clone();
        let p = pair_index(n, i, j);
        for (t, phi) in cocycles.iter().enumerate() {
            if !f.is_zero(&phi[p]) {
                row.push((n + t, phi[p].clone()));
            }
        }
        (i, j, row)
    });
    let total = LieAlgebra::from_brackets(format!("{}+ext{s}", l.name()), f.clone(), labels, brackets.collect::<Vec<_>>())?;
    if let Some(t) = total.validate().failure {
        return Err(Error::Consistency(format!("extension fails Jacobi at {t:?} despite cocycle check")));
    }
    let projection = Matrix::from_sparse_rows(f.clone(), n + s, (0..n).map(|i| vec![(i, f.one())]).collect());
    let kernel = Subspace::coordinate(f, n + s, &(n..n + s).collect::<Vec<_>>());
    debug_assert!(kernel.is_subspace_of(&total.center()).unwrap());
    Ok(CentralExtensionData { base: l.clone(), cocycles: cocycles.to_vec(), total, projection, kernel })
}

/// A covering is a perfect central extension; the projection is supplied by `ext`.
pub fn is_covering<F: Field>(ext: &CentralExtensionData<F>) -> bool {
    ext.total.is_perfect()
}

#[derive(Clone, Debug)]
pub struct UceData<F: Field> {
    pub base: LieAlgebra<F>,
    /// `Lambda^2 L / J` on the complement pairs of `J`.
    pub hat: LieAlgebra<F>,
    /// Basis pairs `(i, j)` representing the basis of `hat`.
    pub hat_pairs: Vec<(usize, usize)>,
    /// `n x dim hat`, `x ^ y -> [x, y]`.
    pub delta: Matrix<F>,
    pub hat_center: Subspace<F>,
    /// `J` inside `Lambda^2 L` (pair coordinates) and the projection onto `hat`.
    pub j: QuotientMap<F>,
    /// `(dim H^1(hat), dim H^2(hat))` when the base is small enough to check.
    pub universality: Option<(usize, usize)>,
}

impl<F: Field> UceData<F> {
    /// Coordinates in `hat` of `x ^ y` for basis vectors.
    pub fn wedge(&self, i: usize, j: usize) -> SparseRow<F::Elem> {
        let n = self.base.dim();
        let f = self.base.field();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.j.apply_sparse(&[(pair_index(n, i, j), f.one())]),
            std::cmp::Ordering::Greater => self.j.apply_sparse(&[(pair_index(n, j, i), f.neg(&f.one()))]),
            std::cmp::Ordering::Equal => Vec::new(),
        }
    }

    /// `x ^ y` for sparse vectors, in pair coordinates of `Lambda^2 L`.
    pub fn wedge_sparse(&self, x: &[(usize, F::Elem)], y: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        wedge(self.base.field(), self.base.dim(), x, y)
    }
}

fn wedge<F: Field>(f: &F, n: usize, x: &[(usize, F::Elem)], y: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
    let mut out = Vec::new();
    for (i, a) in x {
        for (j, b) in y {
            match i.cmp(j) {
                std::cmp::Ordering::Less => out.push((pair_index(n, *i, *j), f.mul(a, b))),
                std::cmp::Ordering::Greater => out.push((pair_index(n, *j, *i), f.neg(&f.mul(a, b)))),
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    normalize_row(f, out)
}

fn jacobi_generators<F: Field>(l: &LieAlgebra<F>) -> impl Iterator<Item = SparseRow<F::Elem>> + '_ {
    let n = l.dim();
    let f = l.field();
    triples(n).map(move |(i, j, k)| {
        let mut row = Vec::new();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            row.extend(wedge(f, n, l.basis_bracket(a, b), &[(c, f.one())]));
        }
        normalize_row(f, row)
    })
}

/// Universal central extension `Lambda^2 L / J` of a perfect algebra.
pub fn uce<F: Field>(l: &LieAlgebra<F>) -> Result<UceData<F>> {
    if !l.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let n = l.dim();
    let f = l.field().clone();
    let npairs = n * n.saturating_sub(1) / 2;
    let j = Subspace::from_sparse_rows(f.clone(), npairs, jacobi_generators(l));
    let q = j.quotient_map();
    let all_pairs: Vec<(usize, usize)> = pairs(n).collect();
    let hat_pairs: Vec<(usize, usize)> = q.complement().iter().map(|&c| all_pairs[c]).collect();
    let d = hat_pairs.len();
    let hat_bracket = |a: usize, b: usize| {
        let (i, jj) = hat_pairs[a];
        let (k, m) = hat_pairs[b];
        q.apply_sparse(&wedge(&f, n, l.basis_bracket(i, jj), l.basis_bracket(k, m)))
    };
    let mut brackets = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            brackets.push((a, b, hat_bracket(a, b)));
        }
    }
    let labels = hat_pairs.iter().map(|(i, k)| format!("{}^{}", l.labels()[*i], l.labels()[*k])).collect();
    let hat = LieAlgebra::from_brackets(format!("uce({})", l.name()), f.clone(), labels, brackets)?;
    let delta = Matrix::from_sparse_rows(
        f.clone(),
        d,
        {
            let mut rows: Vec<SparseRow<F::Elem>> = vec![Vec::new(); n];
            for (c, (i, k)) in hat_pairs.iter().enumerate() {
                for (t, x) in l.basis_bracket(*i, *k) {
                    rows[*t].push((c, x.clone()));
                }
            }
            rows
        },
    );
    let hat_center = kernel_of_rows(f.clone(), d, delta.sparse_rows().iter().cloned());
    let mut data = UceData { base: l.clone(), hat, hat_pairs, delta, hat_center, j: q, universality: None };
    if n <= UNIVERSALITY_CHECK_MAX_DIM {
        check_uce(&data)?;
        let h1d = h1(&LieModule::trivial(&data.hat)).dim;
        let h2d = h2(&LieModule::trivial(&data.hat)).dim;
        if h1d != 0 || h2d != 0 {
            return Err(Error::Consistency(format!("uce fails universality: H^1 = {h1d}, H^2 = {h2d}")));
        }
        data.universality = Some((h1d, h2d));
    }
    Ok(data)
}

/// Well-definedness and homomorphism checks on a computed UCE.
pub fn check_uce<F: Field>(u: &UceData<F>) -> Result<()> {
    let l = &u.base;
    let n = l.dim();
    let f = l.field();
    let jsub = u.j.subspace();
    // [J, Lambda^2 L] lands in J: the bracket of a J generator with any wedge
    for v in jsub.basis() {
        let all: Vec<(usize, usize)> = pairs(n).collect();
        let mut left: Vec<(usize, F::Elem)> = Vec::new();
        for (p, c) in v {
            let (i, k) = all[*p];
            for (t, x) in l.basis_bracket(i, k) {
                left.push((*t, f.mul(c, x)));
            }
        }
        let left = normalize_row(f, left);
        for (i, k) in &u.hat_pairs {
            let w = wedge(f, n, &left, l.basis_bracket(*i, *k));
            if !jsub.contains_sparse(&w) {
                return Err(Error::Consistency("uce bracket not well defined modulo J".into()));
            }
        }
    }
    if !u.hat.validate().passed() {
        return Err(Error::Consistency("uce bracket fails Jacobi".into()));
    }
    if !u.hat.is_perfect() {
        return Err(Error::Consistency("uce is not perfect".into()));
    }
    if u.delta.rank() != n {
        return Err(Error::Consistency("delta is not surjective".into()));
    }
    // delta is a homomorphism on basis pairs
    let d = u.hat.dim();
    for a in 0..d {
        for b in a + 1..d {
            let lhs = u.delta.apply(&dense_from_sparse(f, u.hat.basis_bracket(a, b), d));
            let (x, y) = (u.delta.row_image(a), u.delta.row_image(b));
            let rhs = dense_from_sparse(f, &l.bracket_sparse(&x, &y), n);
            if lhs != rhs {
                return Err(Error::Consistency(format!("delta is not a homomorphism on ({a}, {b})")));
            }
        }
    }
    if !u.hat_center.is_subspace_of(&u.hat.center())? {
        return Err(Error::Consistency("ker delta is not central".into()));
    }
    Ok(())
}

trait ColumnImage<F: Field> {
    fn row_image(&self, col: usize) -> SparseRow<F::Elem>;
}

impl<F: Field> ColumnImage<F> for Matrix<F> {
    /// Column `col` as a sparse vector.
    fn row_image(&self, col: usize) -> SparseRow<F::Elem> {
        let mut out = Vec::new();
        for (r, row) in self.sparse_rows().iter().enumerate() {
            if let Ok(k) = row.binary_search_by_key(&col, |e| e.0) {
                out.push((r, row[k].1.clone()));
            }
        }
        out
    }
}

/// `D^(x ^ y) = Dx ^ y + x ^ Dy` on `hat`, with descent, Leibniz and intertwining checks.
pub fn lift_derivation<F: Field>(u: &UceData<F>, d: &Matrix<F>) -> Result<Matrix<F>> {
    let l = &u.base;
    let n = l.dim();
    let f = l.field().clone();
    if !is_derivation(l, d) {
        return Err(Error::InvalidArgument("matrix is not a derivation of the base".into()));
    }
    let cols: Vec<SparseRow<F::Elem>> = d.transpose().sparse_rows().to_vec();
    let lift_pair = |i: usize, k: usize| -> SparseRow<F::Elem> {
        let mut w = wedge(&f, n, &cols[i], &[(k, f.one())]);
        w.extend(wedge(&f, n, &[(i, f.one())], &cols[k]));
        normalize_row(&f, w)
    };
    let all: Vec<(usize, usize)> = pairs(n).collect();
    for v in u.j.subspace().basis() {
        let mut img = Vec::new();
        for (p, c) in v {
            let (i, k) = all[*p];
            img.extend(lift_pair(i, k).into_iter().map(|(t, x)| (t, f.mul(c, &x))));
        }
        if !u.j.subspace().contains_sparse(&normalize_row(&f, img)) {
            return Err(Error::Consistency("lifted derivation does not preserve J".into()));
        }
    }
    let dim = u.hat.dim();
    let mut columns = Vec::with_capacity(dim);
    for (i, k) in &u.hat_pairs {
        columns.push(u.j.apply_sparse(&lift_pair(*i, *k)));
    }
    let mut rows: Vec<SparseRow<F::Elem>> = vec![Vec::new(); dim];
    for (c, col) in columns.iter().enumerate() {
        for (r, x) in col {
            rows[*r].push((c, x.clone()));
        }
    }
    let lifted = Matrix::from_sparse_rows(f.clone(), dim, rows);
    if !is_derivation(&u.hat, &lifted) {
        return Err(Error::Consistency("lifted map fails Leibniz".into()));
    }
    if u.delta.mul(&lifted) != d.mul(&u.delta) {
        return Err(Error::Consistency("delta does not intertwine the lift".into()));
    }
    Ok(lifted)
}

/// Restriction of a `hat` endomorphism preserving `hat_center` to center coordinates.
fn restrict_to_center<F: Field>(u: &UceData<F>, m: &Matrix<F>) -> Result<Matrix<F>> {
    let f = u.base.field().clone();
    let k = u.hat_center.dim();
    let mut cols = Vec::with_capacity(k);
    for b in u.hat_center.basis_dense() {
        let img = m.apply(&b);
        let c = u
            .hat_center
            .coordinates(&img)
            .ok_or_else(|| Error::Consistency("lift does not preserve the center".into()))?;
        cols.push(c);
    }
    let dense: Vec<Vec<F::Elem>> = (0..k).map(|r| (0..k).map(|c| cols[c][r].clone()).collect()).collect();
    Ok(Matrix::from_dense(f, k, &dense))
}

#[derive(Clone, Debug)]
pub struct OutAction<F: Field> {
    pub uce: UceData<F>,
    pub der: DerivationAlgebra<F>,
    /// One `k x k` matrix per outer representative, `k = dim hat_center`.
    pub matrices: Vec<Matrix<F>>,
}

fn require_simple<F: Field>(g: &LieAlgebra<F>, seed: u64) -> Result<()> {
    let cert = is_simple(g, seed);
    match cert.verdict {
        Verdict::Simple => Ok(()),
        Verdict::NotSimple { .. } => Err(Error::InvalidArgument(format!("{} is not simple", g.name()))),
        Verdict::Undecided { .. } => Err(Error::SimplicityUndecided(g.name().to_string())),
    }
}

/// `Out(g)` acting on the center of `uce(g)` through lifted derivations.
pub fn out_action_on_center<F: Field>(g: &LieAlgebra<F>, seed: u64) -> Result<OutAction<F>> {
    require_simple(g, seed)?;
    let u = uce(g)?;
    let der = derivation_algebra(g)?;
    for i in 0..g.dim() {
        let lifted = lift_derivation(&u, &g.ad_basis(i))?;
        if !restrict_to_center(&u, &lifted)?.is_zero() {
            return Err(Error::Consistency(format!("inner lift of ad e_{i} moves the center")));
        }
    }
    let out = outer_representatives(&der)?;
    let mut matrices = Vec::with_capacity(out.representatives.len());
    for d in &out.representatives {
        matrices.push(restrict_to_center(&u, &lift_derivation(&u, d)?)?);
    }
    Ok(OutAction { uce: u, der, matrices })
}

/// `{lambda : (sum lambda_u A_u) C <= C}` in outer-representative coordinates.
pub fn stabilizer<F: Field>(field: &F, actions: &[Matrix<F>], c: &Subspace<F>) -> Subspace<F> {
    let q = c.quotient_map();
    let mut rows = Vec::new();
    for b in c.basis_dense() {
        let images: Vec<Vec<F::Elem>> = actions.iter().map(|a| q.apply(&a.apply(&b))).collect();
        for s in 0..q.target_dim() {
            let row: Vec<F::Elem> = images.iter().map(|img| img[s].clone()).collect();
            rows.push(sparse_from_dense(field, &row));
        }
    }
    kernel_of_rows(field.clone(), actions.len(), rows)
}

/// Central ideal given in `hat_center` coordinates, embedded into `hat`.
pub fn center_ideal_in_hat<F: Field>(u: &UceData<F>, c: &Subspace<F>) -> Result<Subspace<F>> {
    if c.ambient() != u.hat_center.dim() {
        return Err(Error::DimensionMismatch { expected: u.hat_center.dim(), got: c.ambient() });
    }
    let vecs: Vec<Vec<F::Elem>> = c.basis_dense().iter().map(|v| u.hat_center.combine(v)).collect();
    Ok(Subspace::from_dense(u.base.field().clone(), u.hat.dim(), &vecs))
}

#[derive(Clone, Debug)]
pub struct DerSimpleReport {
    pub out_dim: usize,
    pub center_dim: usize,
    pub c_dim: usize,
    pub stabilizer_dim: usize,
    pub predicted: bool,
    /// Filled by `verify_der_simple`.
    pub quotient_dim: Option<usize>,
    pub der_dim: Option<usize>,
    pub direct: Option<bool>,
    pub agree: Option<bool>,
    pub flags: Vec<String>,
}

pub fn predict_from<F: Field>(action: &OutAction<F>, c: &Subspace<F>) -> DerSimpleReport {
    let f = action.uce.base.field();
    let stab = stabilizer(f, &action.matrices, c);
    let out_dim = action.matrices.len();
    let k = action.uce.hat_center.dim();
    let mut flags = Vec::new();
    if out_dim > 0 && (c.is_zero() || c.is_full()) {
        flags.push(format!(
            "Out(g) has dim {out_dim} and C is {}: the stabilizer is all of Out(g)",
            if c.is_zero() { "zero" } else { "the whole center" }
        ));
    }
    DerSimpleReport {
        out_dim,
        center_dim: k,
        c_dim: c.dim(),
        stabilizer_dim: stab.dim(),
        predicted: stab.is_zero(),
        quotient_dim: None,
        der_dim: None,
        direct: None,
        agree: None,
        flags,
    }
}

/// Predicts whether `Der(hat/C)` is simple: true iff the stabilizer of `C` in `Out(g)` is zero.
pub fn predict_der_simple<F: Field>(g: &LieAlgebra<F>, c: &Subspace<F>, seed: u64) -> Result<DerSimpleReport> {
    let action = out_action_on_center(g, seed)?;
    Ok(predict_from(&action, c))
}

/// The prediction together with a direct computation of `Der(hat/C)` and its simplicity.
pub fn verify_der_simple<F: Field>(g: &LieAlgebra<F>, c: &Subspace<F>, seed: u64) -> Result<DerSimpleReport> {
    verify_from(&out_action_on_center(g, seed)?, c, seed)
}

pub fn verify_from<F: Field>(action: &OutAction<F>, c: &Subspace<F>, seed: u64) -> Result<DerSimpleReport> {
    let mut report = predict_from(action, c);
    let ideal = center_ideal_in_hat(&action.uce, c)?;
    let (l, _) = action.uce.hat.quotient(&ideal)?;
    let der = derivation_algebra(&l)?;
    let cert = is_simple(&der.as_algebra, seed);
    if cert.is_undecided() {
        return Err(Error::SimplicityUndecided(format!("Der of {}-dim quotient", l.dim())));
    }
    report.quotient_dim = Some(l.dim());
    report.der_dim = Some(der.dim());
    report.direct = Some(cert.is_simple());
    report.agree = Some(cert.is_simple() == report.predicted);
    Ok(report)
}

/// All subspaces of `F_p^k` in reduced row echelon form.
pub fn all_subspaces(field: &crate::exact::PrimeField, k: usize) -> Vec<Subspace<crate::exact::PrimeField>> {
    let p = field.p();
    let mut out = Vec::new();
    for mask in 0u32..(1 << k) {
        let pivots: Vec<usize> = (0..k).filter(|c| mask & (1 << c) != 0).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..k).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let total = p.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u64; k]; pivots.len()];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = c % p;
                c /= p;
            }
            out.push(Subspace::from_dense(*field, k, &rows));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CoveringQuotient<F: Field> {
    pub c: Subspace<F>,
    pub algebra: LieAlgebra<F>,
}

/// Quotients `hat/C` for central `C`: every `C` when `dim hat_center <= 3`,
/// otherwise zero, coordinate lines and the whole center.
pub fn covering_quotients(
    u: &UceData<crate::exact::PrimeField>,
) -> Result<Vec<CoveringQuotient<crate::exact::PrimeField>>> {
    let f = *u.base.field();
    let k = u.hat_center.dim();
    let choices = if k <= 3 {
        all_subspaces(&f, k)
    } else {
        let mut v = vec![Subspace::zero(f, k)];
        v.extend((0..k).map(|i| Subspace::coordinate(f, k, &[i])));
        v.push(Subspace::full(f, k));
        v
    };
    let mut out = Vec::with_capacity(choices.len());
    for c in choices {
        let ideal = center_ideal_in_hat(u, &c)?;
        let (algebra, _) = u.hat.quotient(&ideal)?;
        out.push(CoveringQuotient { c, algebra });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::classical::{psl, sl};
    use crate::catalog::witt::{rvirasoro, witt};
    use crate::exact::PrimeField;
    use std::collections::BTreeSet;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn central_extension_examples() {
        let w = witt(5).unwrap();
        let npairs = 10;
        let split = central_extension(&w, &[vec![0; npairs]]).unwrap();
        assert!(!is_covering(&split));
        assert_eq!(split.total.center(), split.kernel);

        let gen = h2(&LieModule::trivial(&w)).cocycle_reps[0].clone();
        let ext = central_extension(&w, &[gen]).unwrap();
        assert_eq!(ext.total.dim(), 6);
        assert!(ext.total.is_perfect());
        assert_eq!(ext.total.center().dim(), 1);
        assert!(is_covering(&ext));

        let sl2 = sl(f5(), 2).unwrap();
        let cob = crate::cohomology::ce_differential(&LieModule::trivial(&sl2), 1).unwrap().apply(&[1, 2, 3]);
        assert!(!is_covering(&central_extension(&sl2, &[cob]).unwrap()));

        // some single-pair cochain must violate the cocycle identity
        let bad = (0..npairs)
            .map(|p| {
                let mut v = vec![0u64; npairs];
                v[p] = 1;
                v
            })
            .find(|v| cocycle_failure(&w, v).is_some())
            .unwrap();
        assert!(matches!(central_extension(&w, &[bad]), Err(Error::NotACocycle(..))));
    }

    #[test]
    fn rvirasoro_is_a_covering() {
        let v = rvirasoro(5).unwrap();
        let (w, _) = v.quotient(&v.center()).unwrap();
        let cocycle: Vec<u64> = pairs(5)
            .map(|(i, j)| v.basis_bracket(i, j).iter().find(|e| e.0 == 5).map_or(0, |e| e.1))
            .collect();
        let ext = central_extension(&w, &[cocycle]).unwrap();
        assert_eq!(ext.total, v.clone().with_name(ext.total.name()).relabeled(ext.total.labels().to_vec()).unwrap());
        assert!(is_covering(&ext));
    }

    #[test]
    fn uce_examples() {
        let sl2 = uce(&sl(f5(), 2).unwrap()).unwrap();
        assert_eq!(sl2.hat.dim(), 3);
        assert!(sl2.hat_center.is_zero());
        let w = uce(&witt(5).unwrap()).unwrap();
        assert_eq!(w.hat.dim(), 6);
        assert_eq!(w.hat_center.dim(), 1);
        assert_eq!(w.universality, Some((0, 0)));
        assert!(matches!(uce(&LieAlgebra::abelian(f5(), 2)), Err(Error::NotPerfect)));
    }

    #[test]
    fn lift_examples() {
        let w = witt(5).unwrap();
        let u = uce(&w).unwrap();
        let zero = Matrix::zero(f5(), 5, 5);
        assert!(lift_derivation(&u, &zero).unwrap().is_zero());
        // the lift of ad x is ad of any preimage
        for i in 0..5 {
            let lifted = lift_derivation(&u, &w.ad_basis(i)).unwrap();
            let pre = (0..u.hat.dim()).find(|&c| u.delta.row_image(c) == vec![(i, 1)]);
            if let Some(c) = pre {
                assert_eq!(lifted, u.hat.ad_basis(c));
            }
        }
    }

    #[test]
    fn stabilizer_trivial_cases() {
        let f = f5();
        let a = Matrix::from_i64(f, &[vec![0, 1], vec![0, 0]]);
        let actions = vec![a];
        assert!(stabilizer(&f, &actions, &Subspace::zero(f, 2)).is_full());
        assert!(stabilizer(&f, &actions, &Subspace::full(f, 2)).is_full());
        // e_2 is moved onto e_1, so span{e_2} is not stable
        assert!(stabilizer(&f, &actions, &Subspace::coordinate(f, 2, &[1])).is_zero());
        assert!(stabilizer(&f, &actions, &Subspace::coordinate(f, 2, &[0])).is_full());
    }

    #[test]
    fn witt_predictions() {
        let w = witt(5).unwrap();
        let action = out_action_on_center(&w, 0).unwrap();
        assert!(action.matrices.is_empty());
        for c in [Subspace::zero(f5(), 1), Subspace::full(f5(), 1)] {
            let r = verify_der_simple(&w, &c, 0).unwrap();
            assert!(r.predicted);
            assert_eq!(r.direct, Some(true));
            assert_eq!(r.der_dim, Some(5));
        }
    }

    #[test]
    fn psl5_prediction_disagrees_with_nothing() {
        let g = psl(f5(), 5).unwrap();
        let action = out_action_on_center(&g, 0).unwrap();
        assert!(!action.matrices.is_empty());
        let k = action.uce.hat_center.dim();
        assert_eq!(k, crate::cohomology::h2_homology_dim(&g).unwrap());
        let r = verify_der_simple(&g, &Subspace::zero(f5(), k), 0).unwrap();
        assert!(!r.predicted);
        assert_eq!(r.direct, Some(false));
        assert_eq!(r.agree, Some(true));
    }

    #[test]
    fn witt_coverings() {
        for p in [5, 7] {
            let w = witt(p).unwrap();
            let u = uce(&w).unwrap();
            let quotients = covering_quotients(&u).unwrap();
            let dims: BTreeSet<usize> = quotients.iter().map(|q| q.algebra.dim()).collect();
            assert_eq!(dims, [p as usize, p as usize + 1].into_iter().collect());
            for q in &quotients {
                assert!(q.algebra.is_perfect());
                assert_eq!(uce(&q.algebra).unwrap().hat.dim(), u.hat.dim());
            }
        }
    }

    #[test]
    fn subspace_enumeration_counts() {
        // Gaussian binomials over F_5: 1 + 31 + 31 + 1 subspaces of F_5^3
        let f = f5();
        assert_eq!(all_subspaces(&f, 3).len(), 64);
        assert_eq!(all_subspaces(&f, 1).len(), 2);
    }
}
