//! Dense univariate polynomials over an exact field, coefficients stored from
//! the constant term upward. Factorization is only available in positive
//! characteristic (squarefree, distinct-degree, then Cantor–Zassenhaus splitting).

use rand::Rng;

use super::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, coeffs: Vec<F::Elem>) -> Self {
        let mut p = Self { field, coeffs };
        p.trim();
        p
    }

    pub fn zero(field: F) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn x(field: F) -> Self {
        let c = vec![field.zero(), field.one()];
        Self { field, coeffs: c }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn lead(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = self.field.inv(l).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| f.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::new(f.clone(), c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f.clone());
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                f.add_mul_assign(&mut c[i + j], a, b);
            }
        }
        Self::new(f.clone(), c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv(d.lead().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(f.clone()), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(&r[k], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                let t = f.mul(&c, b);
                r[k - dd + j] = f.sub(&r[k - dd + j], &t);
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        (Self::new(f.clone(), q), Self::new(f.clone(), r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(a, &f.from_i64(i as i64)))
            .collect();
        Self::new(f.clone(), c)
    }

    /// `self^e mod m`
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let f = &self.field;
        let mut base = self.rem(m);
        let mut acc = Self::constant(f.clone(), f.one()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }
}

/// Squarefree decomposition over F_p: pairs (squarefree monic factor, multiplicity).
pub fn squarefree<F: Field>(poly: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let p = poly.field.characteristic() as usize;
    assert!(p > 0, "squarefree decomposition requires positive characteristic");
    let f = poly.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y.clone();
        c = c.divrem(&y).0;
    }
    if !c.is_one() {
        // c is a polynomial in x^p; over F_p its p-th root just compresses exponents.
        let root = Poly::new(
            c.field.clone(),
            c.coeffs.iter().step_by(p).cloned().collect(),
        );
        for (g, m) in squarefree(&root) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
pub fn distinct_degree<F: Field>(poly: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let p = poly.field.characteristic() as u128;
    let fld = poly.field.clone();
    let mut f = poly.monic();
    let mut out = Vec::new();
    let x = Poly::x(fld.clone());
    let mut h = x.rem(&f);
    let mut i = 1;
    while f.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(p, &f);
        let g = f.gcd(&h.sub(&x));
        if !g.is_one() {
            f = f.divrem(&g).0;
            h = h.rem(&f);
            out.push((g, i));
        }
        i += 1;
    }
    if f.degree().unwrap_or(0) > 0 {
        let d = f.degree().unwrap();
        out.push((f, d));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d` (odd characteristic).
pub fn equal_degree<F: Field, R: Rng + ?Sized>(poly: &Poly<F>, d: usize, rng: &mut R) -> Vec<Poly<F>> {
    let f = poly.monic();
    let n = f.degree().unwrap_or(0);
    if n <= d {
        return vec![f];
    }
    let fld = f.field.clone();
    let p = fld.characteristic() as u128;
    loop {
        let a = Poly::new(fld.clone(), (0..n).map(|_| fld.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = a.gcd(&f);
        if !g.is_one() {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.divrem(&g).0, d, rng));
            return out;
        }
        // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p - 1)/2)
        let mut frob = a.rem(&f);
        let mut norm = frob.clone();
        for _ in 1..d {
            frob = frob.pow_mod(p, &f);
            norm = norm.mul(&frob).rem(&f);
        }
        let b = norm.pow_mod((p - 1) / 2, &f);
        let g = b.sub(&Poly::constant(fld.clone(), fld.one())).gcd(&f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.divrem(&g).0, d, rng));
            return out;
        }
    }
}

/// Distinct monic irreducible factors with multiplicities, sorted by (degree, coefficients).
pub fn factor<F: Field, R: Rng + ?Sized>(poly: &Poly<F>, rng: &mut R) -> Vec<(Poly<F>, usize)> {
    let mut out = Vec::new();
    for (sf, mult) in squarefree(poly) {
        for (part, d) in distinct_degree(&sf) {
            for irr in equal_degree(&part, d, rng) {
                out.push((irr, mult));
            }
        }
    }
    let fld = poly.field.clone();
    out.sort_by(|a, b| {
        let key = |p: &Poly<F>| p.coeffs.iter().map(|c| fld.format(c)).collect::<Vec<_>>();
        a.0.degree().cmp(&b.0.degree()).then_with(|| key(&a.0).cmp(&key(&b.0)))
    });
    out
}

/// Characteristic polynomial det(xI - A) of a dense square matrix, via reduction
/// to upper Hessenberg form followed by the standard determinant recurrence.
pub fn charpoly<F: Field>(field: &F, a: &[Vec<F::Elem>]) -> Poly<F> {
    let f = field;
    let n = a.len();
    let mut h: Vec<Vec<F::Elem>> = a.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !f.is_zero(&h[i][j])) else { continue };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = f.inv(&h[j + 1][j]).unwrap();
        for k in j + 2..n {
            if f.is_zero(&h[k][j]) {
                continue;
            }
            let u = f.mul(&h[k][j], &inv);
            for c in 0..n {
                let t = f.mul(&u, &h[j + 1][c]);
                h[k][c] = f.sub(&h[k][c], &t);
            }
            for row in h.iter_mut() {
                let t = f.mul(&u, &row[k]);
                row[j + 1] = f.add(&row[j + 1], &t);
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
    let mut ps: Vec<Poly<F>> = vec![Poly::constant(f.clone(), f.one())];
    let x = Poly::x(f.clone());
    for m in 0..n {
        let mut pm = x
            .sub(&Poly::constant(f.clone(), h[m][m].clone()))
            .mul(&ps[m]);
        let mut prod = f.one();
        for i in (0..m).rev() {
            prod = f.mul(&prod, &h[i + 1][i]);
            if f.is_zero(&prod) {
                break;
            }
            let c = f.mul(&h[i][m], &prod);
            pm = pm.sub(&ps[i].scale(&c));
        }
        ps.push(pm);
    }
    ps.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(f: PrimeField, c: &[i64]) -> Poly<PrimeField> {
        Poly::new(f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    /// Brute-force determinant by permutation expansion, for tiny matrices.
    fn det_brute(f: &PrimeField, a: &[Vec<u64>]) -> u64 {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0;
        fn rec(f: &PrimeField, a: &[Vec<u64>], k: usize, perm: &mut Vec<usize>, total: &mut u64) {
            let n = perm.len();
            if k == n {
                let mut inv = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if perm[i] > perm[j] {
                            inv += 1;
                        }
                    }
                }
                let mut prod = 1;
                for i in 0..n {
                    prod = f.mul(&prod, &a[i][perm[i]]);
                }
                *total = if inv % 2 == 0 { f.add(total, &prod) } else { f.sub(total, &prod) };
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(f, a, k + 1, perm, total);
                perm.swap(k, i);
            }
        }
        rec(f, a, 0, &mut perm, &mut total);
        total
    }

    #[test]
    fn charpoly_matches_determinant_at_every_point() {
        let f = PrimeField::new(7).unwrap();
        let a = vec![vec![1, 2, 0, 3], vec![4, 0, 1, 1], vec![0, 5, 6, 2], vec![3, 3, 1, 0]];
        let cp = charpoly(&f, &a);
        assert_eq!(cp.degree(), Some(4));
        for t in 0..7u64 {
            let m: Vec<Vec<u64>> = (0..4)
                .map(|i| (0..4).map(|j| f.sub(&if i == j { t } else { 0 }, &a[i][j])).collect())
                .collect();
            assert_eq!(cp.eval(&t), det_brute(&f, &m));
        }
    }

    #[test]
    fn factorization_recovers_product() {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x^2 + 2)(x + 1)^2 (x^3 + x + 1) x^5
        let parts = [poly(f, &[2, 0, 1]), poly(f, &[1, 1]), poly(f, &[1, 1]), poly(f, &[1, 1, 0, 1])];
        let mut g = poly(f, &[0, 0, 0, 0, 0, 1]);
        for q in &parts {
            g = g.mul(q);
        }
        let fac = factor(&g, &mut rng);
        let mut prod = poly(f, &[1]);
        for (q, m) in &fac {
            for _ in 0..*m {
                prod = prod.mul(q);
            }
            // irreducible: no roots / no proper factors found by DDF
            let dd = distinct_degree(q);
            assert_eq!(dd.len(), 1);
            assert_eq!(dd[0].1, q.degree().unwrap());
        }
        assert_eq!(prod, g.monic());
        let degs: Vec<_> = fac.iter().map(|(q, m)| (q.degree().unwrap(), *m)).collect();
        assert!(degs.contains(&(1, 5)));
        assert!(degs.contains(&(1, 2)));
    }
}
