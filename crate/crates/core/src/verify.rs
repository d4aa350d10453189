//! The two verification suites: modular (`primchar`) and windowed characteristic zero (`char0`).
//!
//! Each check returns one report entry; the suites only collect them.

use serde_json::json;

use crate::catalog::window::{
    cartan_window, degree_derivation_control, degree_derivation_witness, virasoro_cocycle_checks, virasoro_window,
    witt2_window, DegreeWitnessReport,
};
use crate::catalog::{cartan, classical, desk_catalog, modular_p, witt};
use crate::cohomology::{ce_differential, graded_h2_trivial, h1, h2, h2_homology_dim, LieModule};
use crate::derivations::{derivation_algebra, derivation_algebra_with, Strategy};
use crate::error::Result;
use crate::exact::{Field, PrimeField, Subspace};
use crate::extensions::{covering_quotients, out_action_on_center, uce, verify_from};
use crate::formsengine::{CartanKind, DEFAULT_DIM_CAP};
use crate::liecore::LieAlgebra;
use crate::report::{Entry, Report, Status};

/// Window used by the degree-derivation witnesses.
pub const WITNESS_WINDOW: i64 = 4;

fn entry(id: &str, anchor: &str, status: Status, data: serde_json::Value) -> Entry {
    Entry { id: id.into(), anchor: anchor.into(), status, data }
}

fn err_entry(id: &str, anchor: &str, e: crate::Error) -> Entry {
    entry(id, anchor, Status::Fail, json!({"error": e.to_string()}))
}

/// `V(p)` is perfect with one-dimensional center and `H^1 = H^2 = 0`.
pub fn check_rvirasoro(p: u64) -> Result<Entry> {
    let v = witt::rvirasoro(p)?;
    let triv = LieModule::trivial(&v);
    let (jac, perfect, center, h1d, h2d) = (v.validate().passed(), v.is_perfect(), v.center().dim(), h1(&triv).dim, h2(&triv).dim);
    let ok = jac && perfect && center == 1 && h1d == 0 && h2d == 0;
    Ok(entry(
        "rvirasoro_cohomology",
        "V(p) perfect, dim Z(V) = 1, H1(V,F) = H2(V,F) = 0",
        Status::from_bool(ok),
        json!({"p": p, "dim": v.dim(), "jacobi": jac, "perfect": perfect, "center_dim": center, "h1": h1d, "h2": h2d}),
    ))
}

/// `dim H^2(W(1,1), F) = 1`, by cochains and by the exterior-square kernel.
pub fn check_witt_h2(p: u64) -> Result<Entry> {
    let w = witt::witt(p)?;
    let cochain = h2(&LieModule::trivial(&w)).dim;
    let homology = h2_homology_dim(&w);
    let ok = cochain == 1 && matches!(homology, Ok(1));
    Ok(entry(
        "witt_h2",
        "dim H2(W(1,1),F) = 1",
        Status::from_bool(ok),
        json!({"p": p, "h2_cochain": cochain, "h2_exterior_kernel": homology.map_err(|e| e.to_string()).ok()}),
    ))
}

/// `uce(W(1,1)) = V(p)` and the coverings of `W(1,1)` have dimensions `{p, p+1}`.
pub fn check_witt_uce(p: u64) -> Result<Entry> {
    let w = witt::witt(p)?;
    let u = uce(&w)?;
    let v = witt::rvirasoro(p)?;
    // V is a perfect central extension of W with H1 = H2 = 0, hence universal
    let tv = LieModule::trivial(&v);
    let v_universal = v.is_perfect() && h1(&tv).dim == 0 && h2(&tv).dim == 0;
    let mut dims: Vec<usize> = Vec::new();
    let mut all_perfect = true;
    for cq in covering_quotients(&u)? {
        all_perfect &= cq.algebra.is_perfect();
        if !dims.contains(&cq.algebra.dim()) {
            dims.push(cq.algebra.dim());
        }
    }
    dims.sort_unstable();
    let ok = u.hat.dim() == (p + 1) as usize
        && u.hat_center.dim() == 1
        && u.universality == Some((0, 0))
        && v_universal
        && all_perfect
        && dims == vec![p as usize, p as usize + 1];
    Ok(entry(
        "witt_uce",
        "uce(W(1,1)) = V(p); coverings of W(1,1) have dims {p, p+1}",
        Status::from_bool(ok),
        json!({
            "p": p,
            "hat_dim": u.hat.dim(),
            "kernel_dim": u.hat_center.dim(),
            "universality": u.universality,
            "v_universal": v_universal,
            "covering_dims": dims,
            "coverings_perfect": all_perfect,
        }),
    ))
}

fn two_route_case<F: Field>(g: &LieAlgebra<F>, full: bool, seed: u64) -> Result<serde_json::Value> {
    let action = out_action_on_center(g, seed)?;
    let k = action.uce.hat_center.dim();
    let c = if full { Subspace::full(g.field().clone(), k) } else { Subspace::zero(g.field().clone(), k) };
    let r = verify_from(&action, &c, seed)?;
    Ok(json!({
        "g": g.name(),
        "c": if full { "full" } else { "zero" },
        "out_dim": r.out_dim,
        "center_dim": r.center_dim,
        "stabilizer_dim": r.stabilizer_dim,
        "predicted": r.predicted,
        "direct": r.direct,
        "quotient_dim": r.quotient_dim,
        "der_dim": r.der_dim,
        "agree": r.agree,
        "flags": r.flags,
    }))
}

/// Prediction from the Out-action on the UCE center agrees with a direct computation.
pub fn check_two_route(p: u64, seed: u64) -> Result<Entry> {
    let w = witt::witt(p)?;
    let mut cases = vec![two_route_case(&w, false, seed)?, two_route_case(&w, true, seed)?];
    if p == 5 {
        cases.push(two_route_case(&classical::psl(PrimeField::new(5)?, 5)?, false, seed)?);
    }
    let ok = cases.iter().all(|c| c["agree"] == json!(true));
    Ok(entry(
        "der_simple_two_route",
        "Der(hat/C) simple iff stab_Out(C) = 0",
        Status::from_bool(ok),
        json!({"p": p, "seed": seed, "cases": cases}),
    ))
}

/// Completeness of `W(1,1)` and non-completeness of `V(p)` and `sl_p`.
pub fn check_completeness(p: u64) -> Result<Entry> {
    let f = PrimeField::new(p)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for (l, expect) in [(witt::witt(p)?, true), (witt::rvirasoro(p)?, false), (classical::sl(f, p as usize)?, false)] {
        let der = derivation_algebra(&l)?;
        let complete = l.center().is_zero() && der.out_dim == 0;
        ok &= complete == expect;
        rows.push(json!({"algebra": l.name(), "dim": l.dim(), "der_dim": der.dim(), "out_dim": der.out_dim,
            "center_dim": l.center().dim(), "complete": complete, "expected": expect}));
    }
    Ok(entry(
        "completeness",
        "W(1,1) complete; V(p) and sl_p not complete",
        Status::from_bool(ok),
        json!({"p": p, "algebras": rows}),
    ))
}

/// `W(2,1)` is complete, by generator propagation.
pub fn check_w21_complete(p: u64) -> Result<Entry> {
    let l = cartan::jacobson_witt(2, p)?;
    let der = derivation_algebra_with(&l, Strategy::Propagation)?;
    let center = l.center().dim();
    let ok = center == 0 && der.out_dim == 0 && der.dim() == l.dim();
    Ok(entry(
        "completeness_w21",
        "W(2,1) complete",
        Status::from_bool(ok),
        json!({"p": p, "dim": l.dim(), "der_dim": der.dim(), "out_dim": der.out_dim, "center_dim": center,
            "strategy": format!("{:?}", der.strategy_used)}),
    ))
}

/// `K(3,1)^(1)` is simple and complete when `p` does not divide 3.
pub fn check_k31_complete(p: u64) -> Result<Entry> {
    let l = cartan::contact_d1(1, p)?;
    let der = derivation_algebra(&l)?;
    let simple = crate::liecore::is_simple(&l, 0).is_simple();
    let center = l.center().dim();
    let ok = simple && center == 0 && der.out_dim == 0;
    Ok(entry(
        "completeness_k31",
        "K(3,1)^(1) simple and complete",
        Status::from_bool(ok),
        json!({"p": p, "dim": l.dim(), "simple": simple, "der_dim": der.dim(), "out_dim": der.out_dim, "center_dim": center}),
    ))
}

/// `dim H^2(H(2,1)^(2), F) >= 2`, recording the exact value.
pub fn check_hamiltonian_h2(p: u64) -> Result<Entry> {
    let l = cartan::hamiltonian_d2(1, p)?;
    let r = h2(&LieModule::trivial(&l));
    let homology = h2_homology_dim(&l).map_err(|e| e.to_string());
    let ok = r.dim >= 2 && homology.as_ref().is_ok_and(|d| *d == r.dim);
    Ok(entry(
        "hamiltonian_h2",
        "dim H2(H(2,1)^(2),F) >= 2",
        Status::from_bool(ok),
        json!({"p": p, "dim": l.dim(), "h2": r.dim, "cocycle_dim": r.cocycle_dim, "coboundary_dim": r.coboundary_dim,
            "h2_exterior_kernel": homology.ok()}),
    ))
}

/// `d^1 d^0 = 0` and `d^2 d^1 = 0` as matrix products.
fn dd_zero<F: Field>(m: &LieModule<F>) -> Result<bool> {
    let d0 = ce_differential(m, 0)?;
    let d1 = ce_differential(m, 1)?;
    let d2 = ce_differential(m, 2)?;
    Ok(d1.mul(&d0).is_zero() && d2.mul(&d1).is_zero())
}

/// Jacobi on the catalog, `d o d = 0`, `dim Out = dim H^1(L, L)`, and `H^2` against the exterior square.
pub fn check_properties(p: u64) -> Result<Entry> {
    let mut jacobi: Vec<serde_json::Value> = Vec::new();
    let mut ok = true;
    let mut big = desk_catalog(p)?;
    big.push(cartan::jacobson_witt(2, p)?);
    if p == 5 {
        big.push(cartan::contact_d1(1, p)?);
    }
    for l in &big {
        let jr = l.validate();
        ok &= jr.passed();
        jacobi.push(json!({"algebra": l.name(), "dim": l.dim(), "passed": jr.passed()}));
    }
    let mut props = Vec::new();
    for l in desk_catalog(p)? {
        let triv = LieModule::trivial(&l);
        let adj = LieModule::adjoint(&l);
        let dd = dd_zero(&triv)? && (l.dim() > 12 || dd_zero(&adj)?);
        let der = derivation_algebra(&l)?;
        let h1_adj = h1(&adj).dim;
        let inner_ok = der.inner.dim() == l.dim() - l.center().dim();
        let duality = if l.is_perfect() { Some(h2_homology_dim(&l).is_ok()) } else { None };
        let row_ok = dd && der.out_dim == h1_adj && inner_ok && duality != Some(false);
        ok &= row_ok;
        props.push(json!({"algebra": l.name(), "d_squared_zero": dd, "out_dim": der.out_dim, "h1_adjoint": h1_adj,
            "inner_dim_ok": inner_ok, "h2_duality": duality}));
    }
    Ok(entry(
        "properties",
        "Jacobi; d o d = 0; dim Out(L) = dim H1(L,L); dim H2(L,F) = dim ker(Lambda2 L/J -> L) for perfect L",
        Status::from_bool(ok),
        json!({"p": p, "jacobi": jacobi, "desk": props}),
    ))
}

fn run(report: &mut Report, id: &str, anchor: &str, check: Result<Entry>) {
    report.entries.push(check.unwrap_or_else(|e| err_entry(id, anchor, e)));
}

/// The modular suite at characteristic `p`.
pub fn primchar(p: u64, include_stretch: bool, seed: u64) -> Result<Report> {
    let f = modular_p(p)?;
    let mut report = Report::new(f.spec().to_string(), format!("verify primchar p={p}"));
    run(&mut report, "rvirasoro_cohomology", "V(p) perfect, dim Z(V) = 1, H1(V,F) = H2(V,F) = 0", check_rvirasoro(p));
    run(&mut report, "witt_h2", "dim H2(W(1,1),F) = 1", check_witt_h2(p));
    run(&mut report, "witt_uce", "uce(W(1,1)) = V(p)", check_witt_uce(p));
    run(&mut report, "der_simple_two_route", "Der(hat/C) simple iff stab_Out(C) = 0", check_two_route(p, seed));
    run(&mut report, "completeness", "W(1,1) complete", check_completeness(p));
    run(&mut report, "completeness_w21", "W(2,1) complete", check_w21_complete(p));
    if (p as usize).pow(3) <= DEFAULT_DIM_CAP {
        run(&mut report, "completeness_k31", "K(3,1)^(1) simple and complete", check_k31_complete(p));
    } else {
        report.push("completeness_k31", "K(3,1)^(1) simple and complete", Status::Skip,
            json!({"p": p, "dim": p.pow(3), "reason": format!("dimension exceeds the cap {DEFAULT_DIM_CAP}")}));
    }
    run(&mut report, "hamiltonian_h2", "dim H2(H(2,1)^(2),F) >= 2", check_hamiltonian_h2(p));
    run(&mut report, "properties", "property suites", check_properties(p));
    report.push(
        "melikian",
        "Melikian algebra: Der simple",
        Status::Skip,
        json!({"p": p, "reason": "the Melikian algebra is not implemented", "requested": include_stretch}),
    );
    Ok(report)
}

/// Degree-`d` pieces of `H^2(W_1, Q)` for `d` in `lo..=hi`.
pub fn check_graded_h2(d: i64) -> Result<Entry> {
    let dim = graded_h2_trivial(1, d)?;
    Ok(entry(
        &format!("graded_h2_w1_d{d}"),
        "H2(W_1,Q)_d = 0",
        Status::from_bool(dim == 0),
        json!({"degree": d, "dim": dim}),
    ))
}

/// The Virasoro cocycle, its non-triviality and the Virasoro relations on the window.
pub fn check_virasoro(n: i64) -> Result<Entry> {
    let v = virasoro_cocycle_checks(n)?;
    let jac = virasoro_window(n)?.check_jacobi();
    let ok = v.passed() && jac.failure.is_none();
    Ok(entry(
        "virasoro_window",
        "w(d_m,d_n) = (m^3-m)/12 delta_{m+n,0} is a non-trivial 2-cocycle of the Witt algebra",
        if ok { Status::WindowCertified } else { Status::Fail },
        json!({"window": n, "checks": v, "jacobi": jac}),
    ))
}

fn witness_entry(id: &str, anchor: &str, r: DegreeWitnessReport, expect_outer: bool) -> Entry {
    let ok = r.grading_ok && r.outer_witnessed() == expect_outer;
    entry(id, anchor, if ok { Status::WindowCertified } else { Status::Fail }, json!(r))
}

/// Outer degree derivation for `S_2` and `H_2`, with the Witt control.
pub fn check_witnesses(n: i64) -> Result<Vec<Entry>> {
    Ok(vec![
        witness_entry(
            "degree_witness_s2",
            "ad(sum x_i d_i) is an outer derivation of S_2",
            degree_derivation_witness(CartanKind::S, 2, n)?,
            true,
        ),
        witness_entry(
            "degree_witness_h2",
            "ad(sum x_i d_i) is an outer derivation of H_2",
            degree_derivation_witness(CartanKind::H, 1, n)?,
            true,
        ),
        witness_entry("degree_witness_control", "plumbing", degree_derivation_control(n)?, false),
    ])
}

/// Jacobi on the windowed algebras.
pub fn check_window_jacobi(n: i64) -> Result<Entry> {
    let mut rows = Vec::new();
    let mut ok = true;
    let mut algebras = vec![witt2_window(n)?, virasoro_window(n)?];
    for (kind, r, name) in [
        (CartanKind::W, 1, "onesided_witt_window"),
        (CartanKind::S, 2, "special_window"),
        (CartanKind::H, 1, "hamiltonian_window"),
        (CartanKind::K, 1, "contact_window"),
    ] {
        algebras.push(cartan_window(kind, r, WITNESS_WINDOW, name)?.0);
    }
    for a in &algebras {
        let j = a.check_jacobi();
        ok &= j.failure.is_none();
        rows.push(json!({"algebra": a.name, "window": a.window, "jacobi": j}));
    }
    Ok(entry("window_jacobi", "plumbing", if ok { Status::WindowCertified } else { Status::Fail }, json!(rows)))
}

/// The characteristic-zero suite at Virasoro window `n`.
pub fn char0(n: i64) -> Result<Report> {
    let mut report = Report::new("Q", format!("verify char0 window={n}"));
    for d in -2..=8 {
        run(&mut report, &format!("graded_h2_w1_d{d}"), "H2(W_1,Q)_d = 0", check_graded_h2(d));
    }
    run(&mut report, "virasoro_window", "Virasoro cocycle", check_virasoro(n));
    match check_witnesses(WITNESS_WINDOW) {
        Ok(es) => report.entries.extend(es),
        Err(e) => report.entries.push(err_entry("degree_witness", "outer degree derivation", e)),
    }
    run(&mut report, "window_jacobi", "plumbing", check_window_jacobi(n));
    Ok(report)
}
