use crate::error::Result;
use crate::exact::PrimeField;
use crate::formsengine::{derived, subalgebra_basis, CartanAlgebra, CartanKind, DEFAULT_DIM_CAP};
use crate::liecore::LieAlgebra;

fn build(kind: CartanKind, r: usize, p: u64, derive: usize, name: String) -> Result<LieAlgebra<PrimeField>> {
    let c: CartanAlgebra<PrimeField> = subalgebra_basis(kind, r, PrimeField::new(p)?, DEFAULT_DIM_CAP)?;
    let c = derived(&c, derive)?;
    Ok(c.algebra.with_name(name))
}

/// `W(r,1)`, of dimension `r p^r`.
pub fn jacobson_witt(r: usize, p: u64) -> Result<LieAlgebra<PrimeField>> {
    build(CartanKind::W, r, p, 0, format!("W({r},1) p={p}"))
}

/// `S(r,1)^(1)`.
pub fn special_d1(r: usize, p: u64) -> Result<LieAlgebra<PrimeField>> {
    build(CartanKind::S, r, p, 1, format!("S({r},1)^(1) p={p}"))
}

/// `H(2r,1)^(2)`.
pub fn hamiltonian_d2(r: usize, p: u64) -> Result<LieAlgebra<PrimeField>> {
    build(CartanKind::H, r, p, 2, format!("H({},1)^(2) p={p}", 2 * r))
}

/// `K(2r+1,1)^(1)`, for the contact form `dx_(2r+1) + sum_j (x_j dx_(j+r) - x_(j+r) dx_j)`.
pub fn contact_d1(r: usize, p: u64) -> Result<LieAlgebra<PrimeField>> {
    build(CartanKind::K, r, p, 1, format!("K({},1)^(1) p={p}", 2 * r + 1))
}
