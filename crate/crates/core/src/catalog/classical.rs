use crate::error::{Error, Result};
use crate::exact::{Field, SparseRow};
use crate::liecore::{normalize_row, LieAlgebra};

/// Basis of sl_n: the matrix units E_ij (i != j) in row-major order, then
/// H_k = E_kk - E_{k+1,k+1} for k = 1..n-1.
fn sl_basis(n: usize) -> Vec<Vec<(usize, usize, i64)>> {
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(vec![(i, j, 1)]);
            }
        }
    }
    for k in 0..n - 1 {
        basis.push(vec![(k, k, 1), (k + 1, k + 1, -1)]);
    }
    basis
}

fn sl_labels(n: usize) -> Vec<String> {
    let mut labels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                labels.push(format!("E{}{}", i + 1, j + 1));
            }
        }
    }
    labels.extend((1..n).map(|k| format!("H{k}")));
    labels
}

/// The special linear algebra sl_n over `field`, of dimension n^2 - 1.
pub fn sl<F: Field>(field: F, n: usize) -> Result<LieAlgebra<F>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sl(n) needs n >= 2, got {n}")));
    }
    let basis = sl_basis(n);
    let offdiag = n * (n - 1);
    let index_of = |i: usize, j: usize| -> usize {
        // position of E_ij among the off-diagonal units
        i * (n - 1) + if j < i { j } else { j - 1 }
    };
    let f = field.clone();
    let decompose = move |m: &[(usize, usize, i64)]| -> SparseRow<F::Elem> {
        let mut out = Vec::new();
        let mut diag = vec![0i64; n];
        for &(i, j, c) in m {
            if i == j {
                diag[i] += c;
            } else {
                out.push((index_of(i, j), f.from_i64(c)));
            }
        }
        // traceless diagonal diag(d) = sum_k (d_1 + ... + d_k) H_k
        let mut partial = 0;
        for (k, d) in diag.iter().take(n - 1).enumerate() {
            partial += d;
            out.push((offdiag + k, f.from_i64(partial)));
        }
        normalize_row(&f, out)
    };
    let commutator = |a: &[(usize, usize, i64)], b: &[(usize, usize, i64)]| {
        let mut out = Vec::new();
        for &(i, j, x) in a {
            for &(k, l, y) in b {
                if j == k {
                    out.push((i, l, x * y));
                }
                if l == i {
                    out.push((k, j, -x * y));
                }
            }
        }
        out
    };
    LieAlgebra::from_fn(format!("sl({n})"), field, sl_labels(n), |a, b| {
        decompose(&commutator(&basis[a], &basis[b]))
    })
}

/// sl_n modulo its center; equal to sl_n unless the characteristic divides n.
pub fn psl<F: Field>(field: F, n: usize) -> Result<LieAlgebra<F>> {
    let l = sl(field, n)?;
    let center = l.center();
    let (q, _) = l.quotient(&center)?;
    Ok(q.with_name(format!("psl({n})")))
}
