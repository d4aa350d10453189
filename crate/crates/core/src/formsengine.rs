//! Polynomial vector fields and differential forms over truncated polynomial
//! rings, and the special, Hamiltonian and contact subalgebras they cut out.
//!
//! Modular rings are `F_p[x_1..x_m]/(x_i^p)`; window rings are `F[x_1..x_m]`
//! restricted to weighted degree at most a bound, and reject (never drop) any
//! product leaving the window.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exact::{Field, SparseRow, Subspace};
use crate::liecore::{normalize_row, LieAlgebra};

/// Default cap on the dimension of an emitted algebra.
pub const DEFAULT_DIM_CAP: usize = 130;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Exponents in `[0, p)`.
    Modular { p: u64 },
    /// Weighted total degree at most `bound`.
    Window { bound: u32 },
}

pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPoly<E> {
    pub terms: BTreeMap<Exps, E>,
}

impl<E> TruncPoly<E> {
    pub fn zero() -> Self {
        TruncPoly { terms: BTreeMap::new() }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub vars: usize,
    pub truncation: Truncation,
    /// Grading weights of the variables (all 1 except in the contact window).
    pub weights: Vec<u32>,
}

impl<F: Field> PolyRing<F> {
    pub fn modular(field: F, vars: usize) -> Result<Self> {
        let p = field.characteristic();
        if p == 0 {
            return Err(Error::InvalidField("modular truncation needs a prime field".into()));
        }
        Ok(PolyRing { field, vars, truncation: Truncation::Modular { p }, weights: vec![1; vars] })
    }

    pub fn window(field: F, vars: usize, bound: u32) -> Self {
        PolyRing { field, vars, truncation: Truncation::Window { bound }, weights: vec![1; vars] }
    }

    pub fn with_weights(mut self, weights: Vec<u32>) -> Self {
        assert_eq!(weights.len(), self.vars);
        self.weights = weights;
        self
    }

    pub fn weighted_degree(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    /// `Ok(false)` when a modular monomial vanishes; an error when a window overflows.
    fn admissible(&self, e: &[u32]) -> Result<bool> {
        match self.truncation {
            Truncation::Modular { p } => Ok(e.iter().all(|&a| (a as u64) < p)),
            Truncation::Window { bound } => {
                let degree = self.weighted_degree(e);
                if degree > bound {
                    Err(Error::WindowOverflow { degree, bound })
                } else {
                    Ok(true)
                }
            }
        }
    }

    pub fn monomial(&self, e: Exps, c: F::Elem) -> Result<TruncPoly<F::Elem>> {
        if e.len() != self.vars {
            return Err(Error::DimensionMismatch { expected: self.vars, got: e.len() });
        }
        let mut out = TruncPoly::zero();
        if !self.field.is_zero(&c) && self.admissible(&e)? {
            out.terms.insert(e, c);
        }
        Ok(out)
    }

    pub fn constant(&self, c: F::Elem) -> TruncPoly<F::Elem> {
        self.monomial(vec![0; self.vars], c).expect("constants always fit")
    }

    pub fn one(&self) -> TruncPoly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn var(&self, i: usize) -> Result<TruncPoly<F::Elem>> {
        let mut e = vec![0; self.vars];
        e[i] = 1;
        self.monomial(e, self.field.one())
    }

    fn add_term(&self, acc: &mut BTreeMap<Exps, F::Elem>, e: Exps, c: F::Elem) {
        let f = &self.field;
        match acc.get_mut(&e) {
            Some(x) => {
                *x = f.add(x, &c);
                if f.is_zero(x) {
                    acc.remove(&e);
                }
            }
            None if !f.is_zero(&c) => {
                acc.insert(e, c);
            }
            None => {}
        }
    }

    pub fn add(&self, a: &TruncPoly<F::Elem>, b: &TruncPoly<F::Elem>) -> TruncPoly<F::Elem> {
        let mut out = a.terms.clone();
        for (e, c) in &b.terms {
            self.add_term(&mut out, e.clone(), c.clone());
        }
        TruncPoly { terms: out }
    }

    pub fn scale(&self, a: &TruncPoly<F::Elem>, c: &F::Elem) -> TruncPoly<F::Elem> {
        if self.field.is_zero(c) {
            return TruncPoly::zero();
        }
        TruncPoly { terms: a.terms.iter().map(|(e, x)| (e.clone(), self.field.mul(x, c))).collect() }
    }

    pub fn sub(&self, a: &TruncPoly<F::Elem>, b: &TruncPoly<F::Elem>) -> TruncPoly<F::Elem> {
        self.add(a, &self.scale(b, &self.field.neg(&self.field.one())))
    }

    pub fn mul(&self, a: &TruncPoly<F::Elem>, b: &TruncPoly<F::Elem>) -> Result<TruncPoly<F::Elem>> {
        let mut out = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if self.admissible(&e)? {
                    self.add_term(&mut out, e, self.field.mul(ca, cb));
                }
            }
        }
        Ok(TruncPoly { terms: out })
    }

    pub fn partial(&self, a: &TruncPoly<F::Elem>, i: usize) -> TruncPoly<F::Elem> {
        let mut out = BTreeMap::new();
        for (e, c) in &a.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            self.add_term(&mut out, e2, self.field.mul(c, &self.field.from_i64(e[i] as i64)));
        }
        TruncPoly { terms: out }
    }

    pub fn format_monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, a)| **a > 0)
            .map(|(i, a)| if *a == 1 { format!("x{}", i + 1) } else { format!("x{}^{a}", i + 1) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// All admissible exponent vectors in lexicographic order, up to a weighted degree in window mode.
    pub fn monomials(&self) -> Vec<Exps> {
        let cap = match self.truncation {
            Truncation::Modular { p } => p as u32,
            Truncation::Window { bound } => bound + 1,
        };
        let mut out = Vec::new();
        let mut e = vec![0u32; self.vars];
        loop {
            if self.admissible(&e).unwrap_or(false) {
                out.push(e.clone());
            }
            let mut k = self.vars;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                e[k] += 1;
                if e[k] < cap {
                    break;
                }
                e[k] = 0;
            }
        }
    }
}

/// `D = sum_i f_i d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyDerivation<E> {
    pub components: Vec<TruncPoly<E>>,
}

impl<F: Field> PolyRing<F> {
    pub fn derivation_zero(&self) -> PolyDerivation<F::Elem> {
        PolyDerivation { components: vec![TruncPoly::zero(); self.vars] }
    }

    /// `x^e d_i`.
    pub fn monomial_field(&self, e: Exps, i: usize) -> Result<PolyDerivation<F::Elem>> {
        let mut d = self.derivation_zero();
        d.components[i] = self.monomial(e, self.field.one())?;
        Ok(d)
    }

    pub fn apply(&self, d: &PolyDerivation<F::Elem>, g: &TruncPoly<F::Elem>) -> Result<TruncPoly<F::Elem>> {
        let mut out = TruncPoly::zero();
        for (i, fi) in d.components.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            out = self.add(&out, &self.mul(fi, &self.partial(g, i))?);
        }
        Ok(out)
    }

    pub fn divergence(&self, d: &PolyDerivation<F::Elem>) -> TruncPoly<F::Elem> {
        let mut out = TruncPoly::zero();
        for (i, fi) in d.components.iter().enumerate() {
            out = self.add(&out, &self.partial(fi, i));
        }
        out
    }

    pub fn vf_add(&self, a: &PolyDerivation<F::Elem>, b: &PolyDerivation<F::Elem>) -> PolyDerivation<F::Elem> {
        PolyDerivation { components: a.components.iter().zip(&b.components).map(|(x, y)| self.add(x, y)).collect() }
    }

    pub fn vf_scale(&self, a: &PolyDerivation<F::Elem>, c: &F::Elem) -> PolyDerivation<F::Elem> {
        PolyDerivation { components: a.components.iter().map(|x| self.scale(x, c)).collect() }
    }

    /// `[D, E]_j = D(E_j) - E(D_j)`.
    pub fn vf_bracket(&self, d: &PolyDerivation<F::Elem>, e: &PolyDerivation<F::Elem>) -> Result<PolyDerivation<F::Elem>> {
        let mut comps = Vec::with_capacity(self.vars);
        for j in 0..self.vars {
            comps.push(self.sub(&self.apply(d, &e.components[j])?, &self.apply(e, &d.components[j])?));
        }
        Ok(PolyDerivation { components: comps })
    }

    pub fn format_field(&self, d: &PolyDerivation<F::Elem>) -> String {
        let mut parts = Vec::new();
        for (i, fi) in d.components.iter().enumerate() {
            for (e, c) in &fi.terms {
                let coef = if self.field.is_one(c) { String::new() } else { format!("{}*", self.field.format(c)) };
                let mono = self.format_monomial(e);
                let mono = if mono == "1" { String::new() } else { format!("{mono} ") };
                parts.push(format!("{coef}{mono}d{}", i + 1));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// A `k`-form `sum_I f_I dx_I` over sorted index sets `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm<E> {
    pub degree: usize,
    pub terms: BTreeMap<Vec<usize>, TruncPoly<E>>,
}

impl<E> DifferentialForm<E> {
    pub fn zero(degree: usize) -> Self {
        DifferentialForm { degree, terms: BTreeMap::new() }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Sign and merged set of `dx_I ^ dx_J`, or `None` when they share an index.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut m: Vec<usize> = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    Some((inversions % 2 == 1, m))
}

impl<F: Field> PolyRing<F> {
    pub fn function_form(&self, g: TruncPoly<F::Elem>) -> DifferentialForm<F::Elem> {
        let mut out = DifferentialForm::zero(0);
        if !g.is_zero() {
            out.terms.insert(vec![], g);
        }
        out
    }

    /// `g dx_I` with `I` in any order.
    pub fn basic_form(&self, g: TruncPoly<F::Elem>, idx: &[usize]) -> DifferentialForm<F::Elem> {
        let mut out = self.function_form(g);
        for &i in idx {
            out = self.wedge(&out, &self.basic_one_form(i));
        }
        out
    }

    fn basic_one_form(&self, i: usize) -> DifferentialForm<F::Elem> {
        let mut out = DifferentialForm::zero(1);
        out.terms.insert(vec![i], self.one());
        out
    }

    fn form_add_term(&self, acc: &mut DifferentialForm<F::Elem>, idx: Vec<usize>, g: TruncPoly<F::Elem>) {
        let cur = acc.terms.remove(&idx).unwrap_or_else(TruncPoly::zero);
        let sum = self.add(&cur, &g);
        if !sum.is_zero() {
            acc.terms.insert(idx, sum);
        }
    }

    pub fn form_add(&self, a: &DifferentialForm<F::Elem>, b: &DifferentialForm<F::Elem>) -> DifferentialForm<F::Elem> {
        let mut out = a.clone();
        for (idx, g) in &b.terms {
            self.form_add_term(&mut out, idx.clone(), g.clone());
        }
        out
    }

    pub fn form_sub(&self, a: &DifferentialForm<F::Elem>, b: &DifferentialForm<F::Elem>) -> DifferentialForm<F::Elem> {
        let minus = self.field.neg(&self.field.one());
        let mut out = a.clone();
        for (idx, g) in &b.terms {
            self.form_add_term(&mut out, idx.clone(), self.scale(g, &minus));
        }
        out
    }

    pub fn form_mul(&self, g: &TruncPoly<F::Elem>, a: &DifferentialForm<F::Elem>) -> Result<DifferentialForm<F::Elem>> {
        let mut out = DifferentialForm::zero(a.degree);
        for (idx, h) in &a.terms {
            self.form_add_term(&mut out, idx.clone(), self.mul(g, h)?);
        }
        Ok(out)
    }

    /// Exterior product; window overflow in the coefficients panics only if the caller
    /// bypassed the checked product, so coefficients go through `mul`.
    pub fn wedge(&self, a: &DifferentialForm<F::Elem>, b: &DifferentialForm<F::Elem>) -> DifferentialForm<F::Elem> {
        self.try_wedge(a, b).expect("form coefficients exceed the window")
    }

    pub fn try_wedge(
        &self,
        a: &DifferentialForm<F::Elem>,
        b: &DifferentialForm<F::Elem>,
    ) -> Result<DifferentialForm<F::Elem>> {
        let mut out = DifferentialForm::zero(a.degree + b.degree);
        for (ia, ga) in &a.terms {
            for (ib, gb) in &b.terms {
                let Some((neg, idx)) = merge_sign(ia, ib) else { continue };
                let mut g = self.mul(ga, gb)?;
                if neg {
                    g = self.scale(&g, &self.field.neg(&self.field.one()));
                }
                self.form_add_term(&mut out, idx, g);
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self, a: &DifferentialForm<F::Elem>) -> DifferentialForm<F::Elem> {
        let mut out = DifferentialForm::zero(a.degree + 1);
        for (idx, g) in &a.terms {
            for j in 0..self.vars {
                let dg = self.partial(g, j);
                if dg.is_zero() {
                    continue;
                }
                if let Some((neg, m)) = merge_sign(&[j], idx) {
                    let dg = if neg { self.scale(&dg, &self.field.neg(&self.field.one())) } else { dg };
                    self.form_add_term(&mut out, m, dg);
                }
            }
        }
        out
    }

    /// Interior product `i_D`.
    pub fn interior(&self, dv: &PolyDerivation<F::Elem>, a: &DifferentialForm<F::Elem>) -> Result<DifferentialForm<F::Elem>> {
        let mut out = DifferentialForm::zero(a.degree.saturating_sub(1));
        if a.degree == 0 {
            return Ok(out);
        }
        for (idx, g) in &a.terms {
            for (t, &i) in idx.iter().enumerate() {
                let mut h = self.mul(g, &dv.components[i])?;
                if t % 2 == 1 {
                    h = self.scale(&h, &self.field.neg(&self.field.one()));
                }
                let rest: Vec<usize> = idx.iter().enumerate().filter(|(s, _)| *s != t).map(|(_, x)| *x).collect();
                self.form_add_term(&mut out, rest, h);
            }
        }
        Ok(out)
    }

    /// Lie derivative by the derivation rule: `D` on coefficients, and each
    /// `dx_i` replaced in turn by `d(D x_i)`.
    pub fn lie_derivative(&self, dv: &PolyDerivation<F::Elem>, a: &DifferentialForm<F::Elem>) -> Result<DifferentialForm<F::Elem>> {
        let mut out = DifferentialForm::zero(a.degree);
        let dxs: Vec<DifferentialForm<F::Elem>> =
            dv.components.iter().map(|c| self.d(&self.function_form(c.clone()))).collect();
        for (idx, g) in &a.terms {
            let dg = self.apply(dv, g)?;
            if !dg.is_zero() {
                self.form_add_term(&mut out, idx.clone(), dg);
            }
            for t in 0..idx.len() {
                let mut piece = self.function_form(g.clone());
                for (s, &i) in idx.iter().enumerate() {
                    let factor = if s == t { dxs[i].clone() } else { self.basic_one_form(i) };
                    piece = self.try_wedge(&piece, &factor)?;
                }
                out = self.form_add(&out, &piece);
            }
        }
        Ok(out)
    }

    /// Lie derivative by Cartan's formula `d i_D + i_D d`.
    pub fn lie_derivative_cartan(
        &self,
        dv: &PolyDerivation<F::Elem>,
        a: &DifferentialForm<F::Elem>,
    ) -> Result<DifferentialForm<F::Elem>> {
        let first = self.d(&self.interior(dv, a)?);
        let second = self.interior(dv, &self.d(a))?;
        Ok(self.form_add(&first, &second))
    }

    pub fn volume_form(&self) -> DifferentialForm<F::Elem> {
        self.basic_form(self.one(), &(0..self.vars).collect::<Vec<_>>())
    }

    /// `sum_j dx_j ^ dx_(j+r)` on `2r` variables.
    pub fn symplectic_form(&self) -> Result<DifferentialForm<F::Elem>> {
        if self.vars % 2 != 0 {
            return Err(Error::InvalidArgument(format!("symplectic form needs an even variable count, got {}", self.vars)));
        }
        let r = self.vars / 2;
        let mut out = DifferentialForm::zero(2);
        for j in 0..r {
            out = self.form_add(&out, &self.basic_form(self.one(), &[j, j + r]));
        }
        Ok(out)
    }

    /// `dx_(2r+1) + sum_j (x_j dx_(j+r) - x_(j+r) dx_j)` on `2r + 1` variables.
    pub fn contact_form(&self) -> Result<DifferentialForm<F::Elem>> {
        if self.vars % 2 != 1 {
            return Err(Error::InvalidArgument(format!("contact form needs an odd variable count, got {}", self.vars)));
        }
        let r = self.vars / 2;
        let mut out = self.basic_form(self.one(), &[2 * r]);
        for j in 0..r {
            out = self.form_add(&out, &self.basic_form(self.var(j)?, &[j + r]));
            out = self.form_sub(&out, &self.basic_form(self.var(j + r)?, &[j]));
        }
        Ok(out)
    }

    pub fn membership_special(&self, dv: &PolyDerivation<F::Elem>) -> bool {
        self.divergence(dv).is_zero()
    }

    pub fn membership_hamiltonian(&self, dv: &PolyDerivation<F::Elem>) -> Result<bool> {
        Ok(self.lie_derivative(dv, &self.symplectic_form()?)?.is_zero())
    }

    /// `L_D w - g w` together with the multiplier `g`, the `dx_(2r+1)` coefficient of `L_D w`.
    pub fn contact_defect(
        &self,
        dv: &PolyDerivation<F::Elem>,
    ) -> Result<(DifferentialForm<F::Elem>, TruncPoly<F::Elem>)> {
        let omega = self.contact_form()?;
        let lw = self.lie_derivative(dv, &omega)?;
        let g = lw.terms.get(&vec![self.vars - 1]).cloned().unwrap_or_else(TruncPoly::zero);
        let defect = self.form_sub(&lw, &self.form_mul(&g, &omega)?);
        Ok((defect, g))
    }

    pub fn membership_contact(&self, dv: &PolyDerivation<F::Elem>) -> Result<(bool, TruncPoly<F::Elem>)> {
        let (defect, g) = self.contact_defect(dv)?;
        Ok((defect.is_zero(), g))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CartanKind {
    W,
    S,
    H,
    K,
}

impl CartanKind {
    /// Number of variables for parameter `r`.
    pub fn vars(self, r: usize) -> usize {
        match self {
            CartanKind::W | CartanKind::S => r,
            CartanKind::H => 2 * r,
            CartanKind::K => 2 * r + 1,
        }
    }

    fn letter(self) -> &'static str {
        match self {
            CartanKind::W => "W",
            CartanKind::S => "S",
            CartanKind::H => "H",
            CartanKind::K => "K",
        }
    }
}

/// The linear membership condition, flattened to (form index, monomial) keys.
fn condition<F: Field>(ring: &PolyRing<F>, kind: CartanKind, dv: &PolyDerivation<F::Elem>) -> Result<Vec<((Vec<usize>, Exps), F::Elem)>> {
    let form = match kind {
        CartanKind::W => return Ok(Vec::new()),
        CartanKind::S => ring.function_form(ring.divergence(dv)),
        CartanKind::H => ring.lie_derivative(dv, &ring.symplectic_form()?)?,
        CartanKind::K => ring.contact_defect(dv)?.0,
    };
    let mut out = Vec::new();
    for (idx, g) in form.terms {
        for (e, c) in g.terms {
            out.push(((idx.clone(), e), c));
        }
    }
    Ok(out)
}

/// Kernel of the membership condition on a list of monomial fields, as sparse combinations.
fn solve_membership<F: Field>(
    ring: &PolyRing<F>,
    kind: CartanKind,
    ambient: &[(Exps, usize)],
) -> Result<Subspace<F>> {
    let f = ring.field.clone();
    let mut keys: HashMap<(Vec<usize>, Exps), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    for (col, (e, i)) in ambient.iter().enumerate() {
        let dv = ring.monomial_field(e.clone(), *i)?;
        for (key, c) in condition(ring, kind, &dv)? {
            let next = keys.len();
            let r = *keys.entry(key).or_insert(next);
            if r == rows.len() {
                rows.push(Vec::new());
            }
            rows[r].push((col, c));
        }
    }
    let rows = rows.into_iter().map(|r| normalize_row(&f, r));
    Ok(crate::exact::kernel_of_rows(f.clone(), ambient.len(), rows))
}

/// A Cartan-type algebra realized by explicit vector fields.
#[derive(Clone, Debug)]
pub struct CartanAlgebra<F: Field> {
    pub kind: CartanKind,
    pub r: usize,
    pub ring: PolyRing<F>,
    pub fields: Vec<PolyDerivation<F::Elem>>,
    pub algebra: LieAlgebra<F>,
}

#[derive(Clone, Debug)]
struct AmbientIndex {
    index: HashMap<(Exps, usize), usize>,
    list: Vec<(Exps, usize)>,
}

impl AmbientIndex {
    fn new(list: Vec<(Exps, usize)>) -> Self {
        let index = list.iter().enumerate().map(|(k, x)| (x.clone(), k)).collect();
        AmbientIndex { index, list }
    }
}

fn to_ambient<F: Field>(ring: &PolyRing<F>, amb: &AmbientIndex, dv: &PolyDerivation<F::Elem>) -> Result<SparseRow<F::Elem>> {
    let mut out = Vec::new();
    for (i, fi) in dv.components.iter().enumerate() {
        for (e, c) in &fi.terms {
            let k = amb
                .index
                .get(&(e.clone(), i))
                .ok_or_else(|| Error::Consistency(format!("field term {} d{} outside the ambient basis", ring.format_monomial(e), i + 1)))?;
            out.push((*k, c.clone()));
        }
    }
    Ok(normalize_row(&ring.field, out))
}

fn from_ambient<F: Field>(ring: &PolyRing<F>, amb: &AmbientIndex, v: &[(usize, F::Elem)]) -> PolyDerivation<F::Elem> {
    let mut d = ring.derivation_zero();
    for (k, c) in v {
        let (e, i) = &amb.list[*k];
        let m = ring.monomial(e.clone(), c.clone()).expect("ambient monomials are admissible");
        d.components[*i] = ring.add(&d.components[*i], &m);
    }
    d
}

fn coordinates_in<F: Field>(
    ring: &PolyRing<F>,
    basis: &Subspace<F>,
    amb: &AmbientIndex,
    dv: &PolyDerivation<F::Elem>,
) -> Result<SparseRow<F::Elem>> {
    let v = to_ambient(ring, amb, dv)?;
    if !basis.contains_sparse(&v) {
        return Err(Error::Consistency("bracket leaves the subalgebra".into()));
    }
    let mut out = Vec::new();
    for (t, p) in basis.pivots().iter().enumerate() {
        if let Ok(k) = v.binary_search_by_key(p, |e| e.0) {
            out.push((t, v[k].1.clone()));
        }
    }
    Ok(out)
}

fn field_label<F: Field>(ring: &PolyRing<F>, dv: &PolyDerivation<F::Elem>) -> String {
    let full = ring.format_field(dv);
    let terms = full.matches(" + ").count() + 1;
    if terms <= 3 {
        full
    } else {
        let first = full.split(" + ").next().unwrap_or_default();
        format!("{first} + ...")
    }
}

/// `W(m,1)`, `S(m,1)`, `H(2r,1)` or `K(2r+1,1)` over `F_p`, basis ordered
/// lexicographically by (exponent vector, d-index) before elimination.
pub fn subalgebra_basis<F: Field>(kind: CartanKind, r: usize, field: F, cap: usize) -> Result<CartanAlgebra<F>> {
    let m = kind.vars(r);
    if m == 0 {
        return Err(Error::InvalidArgument("at least one variable is required".into()));
    }
    let ring = PolyRing::modular(field.clone(), m)?;
    let list: Vec<(Exps, usize)> =
        ring.monomials().into_iter().flat_map(|e| (0..m).map(move |i| (e.clone(), i))).collect();
    if kind == CartanKind::W && list.len() > cap {
        return Err(Error::DimensionCap { dim: list.len(), cap });
    }
    let amb = AmbientIndex::new(list);
    let basis = solve_membership(&ring, kind, &amb.list)?;
    if basis.dim() > cap {
        return Err(Error::DimensionCap { dim: basis.dim(), cap });
    }
    let fields: Vec<PolyDerivation<F::Elem>> = basis.basis().iter().map(|v| from_ambient(&ring, &amb, v)).collect();
    let n = fields.len();
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let br = ring.vf_bracket(&fields[a], &fields[b])?;
            brackets.push((a, b, coordinates_in(&ring, &basis, &amb, &br)?));
        }
    }
    let labels = fields.iter().map(|d| field_label(&ring, d)).collect();
    let p = field.characteristic();
    let name = format!("{}({},1) p={p}", kind.letter(), m);
    let algebra = LieAlgebra::from_brackets(name, field, labels, brackets)?;
    Ok(CartanAlgebra { kind, r, ring, fields, algebra })
}

/// The `k`-th derived subalgebra, keeping explicit vector fields.
pub fn derived<F: Field>(c: &CartanAlgebra<F>, k: usize) -> Result<CartanAlgebra<F>> {
    let mut cur = c.clone();
    for _ in 0..k {
        let s = cur.algebra.derived_subalgebra();
        let name = format!("{}'", cur.algebra.name());
        let algebra = cur.algebra.subalgebra(&s, name)?;
        let fields = s
            .basis()
            .iter()
            .map(|v| {
                let mut acc = cur.ring.derivation_zero();
                for (t, x) in v {
                    acc = cur.ring.vf_add(&acc, &cur.ring.vf_scale(&cur.fields[*t], x));
                }
                acc
            })
            .collect::<Vec<_>>();
        let labels = fields.iter().map(|d| field_label(&cur.ring, d)).collect();
        let algebra = algebra.relabeled(labels)?;
        cur = CartanAlgebra { kind: cur.kind, r: cur.r, ring: cur.ring.clone(), fields, algebra };
    }
    Ok(cur)
}

/// Graded window of a Cartan-type algebra over a characteristic-zero field:
/// homogeneous vector fields of degree in `[min_degree, top]`, with the
/// contact variable `x_(2r+1)` of weight 2.
#[derive(Clone, Debug)]
pub struct WindowCartan<F: Field> {
    pub kind: CartanKind,
    pub r: usize,
    pub top: i64,
    pub ring: PolyRing<F>,
    pub degrees: Vec<i64>,
    pub fields: Vec<PolyDerivation<F::Elem>>,
    components: BTreeMap<i64, (AmbientIndex, Subspace<F>, usize)>,
}

impl<F: Field> WindowCartan<F> {
    pub fn dim(&self) -> usize {
        self.fields.len()
    }

    /// Graded degree of a homogeneous field: weighted degree of the coefficient minus the weight of `d_i`.
    pub fn field_degree(ring: &PolyRing<F>, e: &[u32], i: usize) -> i64 {
        ring.weighted_degree(e) as i64 - ring.weights[i] as i64
    }

    pub fn min_degree(&self) -> i64 {
        self.degrees.first().copied().unwrap_or(0)
    }

    /// Coordinates of a homogeneous field of degree `deg` inside the window basis.
    pub fn coordinates(&self, deg: i64, dv: &PolyDerivation<F::Elem>) -> Result<SparseRow<F::Elem>> {
        let Some((amb, sub, offset)) = self.components.get(&deg) else {
            return if dv.components.iter().all(|c| c.is_zero()) {
                Ok(Vec::new())
            } else {
                Err(Error::Consistency(format!("no window component in degree {deg}")))
            };
        };
        let local = coordinates_in(&self.ring, sub, amb, dv)?;
        Ok(local.into_iter().map(|(t, c)| (t + offset, c)).collect())
    }

    /// Bracket of basis elements, `None` when the degree leaves the window.
    pub fn bracket(&self, a: usize, b: usize) -> Result<Option<SparseRow<F::Elem>>> {
        let deg = self.degrees[a] + self.degrees[b];
        if deg > self.top || deg < self.min_degree() {
            return Ok(None);
        }
        let br = self.ring.vf_bracket(&self.fields[a], &self.fields[b])?;
        self.coordinates(deg, &br).map(Some)
    }
}

/// Window of `W_r`, `S_r`, `H_2r` or `K_(2r+1)` over a characteristic-zero field, degrees up to `top`.
pub fn window_basis<F: Field>(kind: CartanKind, r: usize, top: i64, field: F, cap: usize) -> Result<WindowCartan<F>> {
    if field.characteristic() != 0 {
        return Err(Error::InvalidField("window mode is for characteristic zero".into()));
    }
    let m = kind.vars(r);
    if m == 0 || top < 1 {
        return Err(Error::InvalidArgument("window needs r >= 1 and top >= 1".into()));
    }
    let mut weights = vec![1u32; m];
    if kind == CartanKind::K {
        weights[m - 1] = 2;
    }
    // coefficients have weighted degree <= top + 2; brackets and Lie derivatives of
    // the contact form stay below twice that plus the form weight
    let bound = 2 * (top as u32 + 2) + 4;
    let ring = PolyRing::window(field.clone(), m, bound).with_weights(weights);
    let coeff_ring = PolyRing::window(field.clone(), m, top as u32 + 2).with_weights(ring.weights.clone());
    let mut by_degree: BTreeMap<i64, Vec<(Exps, usize)>> = BTreeMap::new();
    for e in coeff_ring.monomials() {
        for i in 0..m {
            let d = WindowCartan::field_degree(&ring, &e, i);
            if d <= top {
                by_degree.entry(d).or_default().push((e.clone(), i));
            }
        }
    }
    let mut degrees = Vec::new();
    let mut fields = Vec::new();
    let mut components = BTreeMap::new();
    for (d, list) in by_degree {
        let amb = AmbientIndex::new(list);
        let sub = solve_membership(&ring, kind, &amb.list)?;
        let offset = fields.len();
        for v in sub.basis() {
            fields.push(from_ambient(&ring, &amb, v));
            degrees.push(d);
        }
        if fields.len() > cap {
            return Err(Error::DimensionCap { dim: fields.len(), cap });
        }
        components.insert(d, (amb, sub, offset));
    }
    Ok(WindowCartan { kind, r, top, ring, degrees, fields, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::witt::witt;
    use crate::exact::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn field_of<F: Field>(ring: &PolyRing<F>, comps: &[&[(Exps, i64)]]) -> PolyDerivation<F::Elem> {
        let mut d = ring.derivation_zero();
        for (i, terms) in comps.iter().enumerate() {
            for (e, c) in terms.iter() {
                let m = ring.monomial(e.clone(), ring.field.from_i64(*c)).unwrap();
                d.components[i] = ring.add(&d.components[i], &m);
            }
        }
        d
    }

    #[test]
    fn bracket_examples() {
        let q = PolyRing::window(Rationals, 1, 6);
        let d1 = field_of(&q, &[&[(vec![0], 1)]]);
        let xd = field_of(&q, &[&[(vec![1], 1)]]);
        assert_eq!(q.vf_bracket(&d1, &xd).unwrap(), d1);
        assert!(q.vf_bracket(&xd, &xd).unwrap().components.iter().all(|c| c.is_zero()));
        let m = PolyRing::modular(f5(), 1).unwrap();
        let a = field_of(&m, &[&[(vec![1], 1)]]);
        let b = field_of(&m, &[&[(vec![2], 1)]]);
        assert_eq!(m.vf_bracket(&a, &b).unwrap(), b);
        // x^3 d with x^3 d: zero; x^2 d with x^4 d: 2 x^5 d truncates to 0
        let c = field_of(&m, &[&[(vec![4], 1)]]);
        assert!(m.vf_bracket(&b, &c).unwrap().components[0].is_zero());
    }

    #[test]
    fn window_overflow_is_an_error() {
        let q = PolyRing::window(Rationals, 1, 2);
        let x2 = q.monomial(vec![2], q.field.one()).unwrap();
        assert!(matches!(q.mul(&x2, &x2), Err(Error::WindowOverflow { degree: 4, bound: 2 })));
        assert!(q.monomial(vec![3], q.field.one()).is_err());
    }

    #[test]
    fn lie_derivative_examples() {
        let q = PolyRing::window(Rationals, 1, 6);
        let xd = field_of(&q, &[&[(vec![1], 1)]]);
        let one = q.function_form(q.one());
        assert!(q.lie_derivative(&xd, &one).unwrap().is_zero());
        let dx = q.basic_form(q.one(), &[0]);
        assert_eq!(q.lie_derivative(&xd, &dx).unwrap(), dx);
        let q2 = PolyRing::window(Rationals, 2, 6);
        let d1 = field_of(&q2, &[&[(vec![0, 0], 1)], &[]]);
        assert!(q2.lie_derivative(&d1, &q2.volume_form()).unwrap().is_zero());
    }

    #[test]
    fn membership_examples() {
        let q2 = PolyRing::window(Rationals, 2, 6);
        let d1 = field_of(&q2, &[&[(vec![0, 0], 1)], &[]]);
        assert!(q2.membership_special(&d1));
        let hyp = field_of(&q2, &[&[(vec![1, 0], 1)], &[(vec![0, 1], -1)]]);
        assert!(q2.membership_hamiltonian(&hyp).unwrap());
        let euler = field_of(&q2, &[&[(vec![1, 0], 1)], &[(vec![0, 1], 1)]]);
        assert!(!q2.membership_hamiltonian(&euler).unwrap());
        let q3 = PolyRing::window(Rationals, 3, 6);
        let d3 = field_of(&q3, &[&[], &[], &[(vec![0, 0, 0], 1)]]);
        let (ok, g) = q3.membership_contact(&d3).unwrap();
        assert!(ok);
        assert!(g.is_zero());
        assert!(q2.contact_form().is_err());
    }

    #[test]
    fn modular_dimensions() {
        let w1 = subalgebra_basis(CartanKind::W, 1, f5(), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(w1.algebra.dim(), 5);
        // x^(n+1) d is e_n, in the same order
        let w = witt(5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(w1.algebra.basis_bracket(i, j), w.basis_bracket(i, j));
            }
        }
        assert_eq!(subalgebra_basis(CartanKind::W, 2, f5(), DEFAULT_DIM_CAP).unwrap().algebra.dim(), 50);
        let h = subalgebra_basis(CartanKind::H, 1, f5(), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(derived(&h, 2).unwrap().algebra.dim(), 23);
        let s = subalgebra_basis(CartanKind::S, 2, f5(), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(derived(&s, 1).unwrap().algebra.dim(), 24);
        assert!(matches!(
            subalgebra_basis(CartanKind::W, 3, f5(), DEFAULT_DIM_CAP),
            Err(Error::DimensionCap { dim: 375, cap: 130 })
        ));
    }

    #[test]
    fn divergence_matches_volume_form() {
        let ring = PolyRing::modular(f5(), 2).unwrap();
        let vol = ring.volume_form();
        for e in ring.monomials() {
            for i in 0..2 {
                let d = ring.monomial_field(e.clone(), i).unwrap();
                let lv = ring.lie_derivative(&d, &vol).unwrap();
                let want = ring.form_mul(&ring.divergence(&d), &vol).unwrap();
                assert_eq!(lv, want);
                assert_eq!(ring.membership_special(&d), lv.is_zero());
            }
        }
    }

    #[test]
    fn window_algebras_close() {
        for (kind, r) in [(CartanKind::W, 1), (CartanKind::S, 2), (CartanKind::H, 1), (CartanKind::K, 1)] {
            let w = window_basis(kind, r, 4, Rationals, 400).unwrap();
            for a in 0..w.dim() {
                for b in 0..w.dim() {
                    w.bracket(a, b).unwrap();
                }
            }
        }
    }

    fn random_field(ring: &PolyRing<PrimeField>, coeffs: &[u64]) -> PolyDerivation<u64> {
        let mons = ring.monomials();
        let mut d = ring.derivation_zero();
        for (k, c) in coeffs.iter().enumerate() {
            let e = mons[(k * 7) % mons.len()].clone();
            let i = k % ring.vars;
            let m = ring.monomial(e, *c % 5).unwrap();
            d.components[i] = ring.add(&d.components[i], &m);
        }
        d
    }

    fn random_form(ring: &PolyRing<PrimeField>, coeffs: &[u64]) -> DifferentialForm<u64> {
        let mons = ring.monomials();
        let mut out = DifferentialForm::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            let g = ring.monomial(mons[(k * 5) % mons.len()].clone(), *c % 5).unwrap();
            out = ring.form_add(&out, &ring.basic_form(g, &[k % ring.vars]));
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn jacobi_for_vector_fields(a in prop::collection::vec(0u64..5, 6), b in prop::collection::vec(0u64..5, 6), c in prop::collection::vec(0u64..5, 6)) {
            let ring = PolyRing::modular(f5(), 2).unwrap();
            let (x, y, z) = (random_field(&ring, &a), random_field(&ring, &b), random_field(&ring, &c));
            let t1 = ring.vf_bracket(&x, &ring.vf_bracket(&y, &z).unwrap()).unwrap();
            let t2 = ring.vf_bracket(&y, &ring.vf_bracket(&z, &x).unwrap()).unwrap();
            let t3 = ring.vf_bracket(&z, &ring.vf_bracket(&x, &y).unwrap()).unwrap();
            let sum = ring.vf_add(&ring.vf_add(&t1, &t2), &t3);
            prop_assert!(sum.components.iter().all(|c| c.is_zero()));
        }

        #[test]
        fn lie_derivative_routes_agree_and_represent(a in prop::collection::vec(0u64..5, 5), b in prop::collection::vec(0u64..5, 5), w in prop::collection::vec(0u64..5, 4)) {
            let ring = PolyRing::modular(f5(), 3).unwrap();
            let (x, y) = (random_field(&ring, &a), random_field(&ring, &b));
            let omega = random_form(&ring, &w);
            prop_assert_eq!(ring.lie_derivative(&x, &omega).unwrap(), ring.lie_derivative_cartan(&x, &omega).unwrap());
            let lhs = ring.lie_derivative(&ring.vf_bracket(&x, &y).unwrap(), &omega).unwrap();
            let xy = ring.lie_derivative(&x, &ring.lie_derivative(&y, &omega).unwrap()).unwrap();
            let yx = ring.lie_derivative(&y, &ring.lie_derivative(&x, &omega).unwrap()).unwrap();
            prop_assert_eq!(lhs, ring.form_sub(&xy, &yx));
        }

        #[test]
        fn membership_sets_are_subalgebras(i in 0usize..1000, j in 0usize..1000) {
            for (kind, r) in [(CartanKind::S, 2), (CartanKind::H, 1), (CartanKind::K, 1)] {
                let c = subalgebra_basis(kind, r, f5(), DEFAULT_DIM_CAP).unwrap();
                let (x, y) = (&c.fields[i % c.fields.len()], &c.fields[j % c.fields.len()]);
                let br = c.ring.vf_bracket(x, y).unwrap();
                let member = match kind {
                    CartanKind::S => c.ring.membership_special(&br),
                    CartanKind::H => c.ring.membership_hamiltonian(&br).unwrap(),
                    _ => c.ring.membership_contact(&br).unwrap().0,
                };
                prop_assert!(member, "{:?}", kind);
            }
        }

        #[test]
        fn contact_multiplier_is_linear(i in 0usize..1000, j in 0usize..1000, a in 0u64..5, b in 0u64..5) {
            let c = subalgebra_basis(CartanKind::K, 1, f5(), DEFAULT_DIM_CAP).unwrap();
            let ring = &c.ring;
            let (x, y) = (&c.fields[i % c.fields.len()], &c.fields[j % c.fields.len()]);
            let combo = ring.vf_add(&ring.vf_scale(x, &a), &ring.vf_scale(y, &b));
            let (ok, g) = ring.membership_contact(&combo).unwrap();
            prop_assert!(ok);
            let gx = ring.membership_contact(x).unwrap().1;
            let gy = ring.membership_contact(y).unwrap().1;
            prop_assert_eq!(g, ring.add(&ring.scale(&gx, &a), &ring.scale(&gy, &b)));
        }
    }
}
