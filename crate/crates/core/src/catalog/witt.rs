use crate::error::Result;
use crate::exact::{Field, PrimeField};
use crate::liecore::LieAlgebra;

fn e_labels(p: u64) -> Vec<String> {
    (-1..=p as i64 - 2).map(|n| format!("e{n}")).collect()
}

/// The Witt algebra W(1,1) with basis e_{-1}, ..., e_{p-2} and
/// [e_m, e_n] = (n - m) e_{m+n} whenever -1 <= m + n <= p - 2.
pub fn witt(p: u64) -> Result<LieAlgebra<PrimeField>> {
    let f = PrimeField::new(p)?;
    let top = p as i64 - 2;
    LieAlgebra::from_fn(format!("witt(p={p})"), f, e_labels(p), |a, b| {
        let (m, n) = (a as i64 - 1, b as i64 - 1);
        let s = m + n;
        if (-1..=top).contains(&s) {
            vec![((s + 1) as usize, f.from_i64(n - m))]
        } else {
            Vec::new()
        }
    })
}

/// The restricted Virasoro algebra: W(1,1) plus a central z with
/// [e_m, e_n] = (1/6)(n - 1) n (n + 1) z when m + n = p.
pub fn rvirasoro(p: u64) -> Result<LieAlgebra<PrimeField>> {
    let f = PrimeField::new(p)?;
    let top = p as i64 - 2;
    let z = p as usize;
    let mut labels = e_labels(p);
    labels.push("z".into());
    let sixth = f.inv(&f.from_i64(6))?;
    LieAlgebra::from_fn(format!("rvirasoro(p={p})"), f, labels, |a, b| {
        if a == z || b == z {
            return Vec::new();
        }
        let (m, n) = (a as i64 - 1, b as i64 - 1);
        let s = m + n;
        if (-1..=top).contains(&s) {
            vec![((s + 1) as usize, f.from_i64(n - m))]
        } else if s == p as i64 {
            let c = f.mul(&sixth, &f.from_i64((n - 1) * n * (n + 1)));
            vec![(z, c)]
        } else {
            Vec::new()
        }
    })
}
