//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines always print; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use liecert::catalog::window::{virasoro_window, witt2_window};
use liecert::exact::{Field, Rationals};
use liecert::report::{Entry, Status};
use liecert::verify;
use serde_json::{json, Value};

struct Outcome {
    ok: bool,
    detail: String,
}

fn entry_ok(e: &Entry) -> bool {
    matches!(e.status, Status::Pass | Status::WindowCertified)
}

fn criterion<G>(results: &mut Vec<bool>, n: usize, title: &str, limit: Duration, f: G)
where
    G: FnOnce() -> liecert::Result<Outcome>,
{
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match out {
        Ok(o) => (o.ok && elapsed <= limit, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "criterion {n:>2} [{}] {title}: {:.2}s (limit {}s) {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    results.push(ok);
}

/// Runs `check` once per item, failing if any single run exceeds `each`.
fn per_item<T: Copy + std::fmt::Debug>(
    items: &[T],
    each: Duration,
    check: impl Fn(T) -> liecert::Result<(bool, Value)>,
) -> liecert::Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &x in items {
        let t = Instant::now();
        let (good, data) = check(x)?;
        let dt = t.elapsed();
        ok &= good && dt <= each;
        parts.push(format!("{x:?}:{data}({:.2}s)", dt.as_secs_f64()));
    }
    Ok(Outcome { ok, detail: parts.join(" ") })
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let secs = Duration::from_secs;

    criterion(&mut results, 1, "restricted Virasoro perfect, 1-dim center, H1 = H2 = 0", secs(10), || {
        per_item(&[5u64, 7], secs(5), |p| {
            let e = verify::check_rvirasoro(p)?;
            let d = &e.data;
            let ok = entry_ok(&e)
                && d["dim"] == json!(p + 1)
                && d["center_dim"] == json!(1)
                && d["h1"] == json!(0)
                && d["h2"] == json!(0);
            Ok((ok, json!([d["h1"], d["h2"]])))
        })
    });

    criterion(&mut results, 2, "dim H2(W(1,1)) = 1", secs(2), || {
        per_item(&[5u64, 7], secs(1), |p| {
            let e = verify::check_witt_h2(p)?;
            let ok = entry_ok(&e) && e.data["h2_cochain"] == json!(1) && e.data["h2_exterior_kernel"] == json!(1);
            Ok((ok, e.data["h2_cochain"].clone()))
        })
    });

    criterion(&mut results, 3, "uce(W(1,1)) dim 6, kernel 1, universal, coverings {5,6}", secs(10), || {
        let e = verify::check_witt_uce(5)?;
        let d = &e.data;
        let ok = entry_ok(&e)
            && d["hat_dim"] == json!(6)
            && d["kernel_dim"] == json!(1)
            && d["universality"] == json!([0, 0])
            && d["covering_dims"] == json!([5, 6]);
        Ok(Outcome { ok, detail: format!("hat {} kernel {} coverings {}", d["hat_dim"], d["kernel_dim"], d["covering_dims"]) })
    });

    criterion(&mut results, 4, "two-route agreement for Der(hat/C) simplicity", secs(60), || {
        let e = verify::check_two_route(5, 0)?;
        let cases = e.data["cases"].as_array().cloned().unwrap_or_default();
        let expect = [(true, true), (true, true), (false, false)];
        let shape_ok = cases.len() == expect.len()
            && cases.iter().zip(expect).all(|(c, (pred, direct))| c["predicted"] == json!(pred) && c["direct"] == json!(direct));
        let detail = cases
            .iter()
            .map(|c| format!("{}/C={}: predict {} direct {}", c["g"], c["c"], c["predicted"], c["direct"]))
            .collect::<Vec<_>>()
            .join("; ");
        Ok(Outcome { ok: entry_ok(&e) && shape_ok, detail })
    });

    criterion(&mut results, 5, "W(1,1), W(2,1) complete; sl_5, V not complete", secs(600), || {
        let small = verify::check_completeness(5)?;
        let w21 = verify::check_w21_complete(5)?;
        let ok = entry_ok(&small)
            && entry_ok(&w21)
            && w21.data["dim"] == json!(50)
            && w21.data["der_dim"] == json!(50)
            && w21.data["strategy"] == json!("Propagation");
        Ok(Outcome { ok, detail: format!("W(2,1) der_dim {} out_dim {}", w21.data["der_dim"], w21.data["out_dim"]) })
    });

    criterion(&mut results, 6, "dim H2(H(2,1)^(2), F_5) >= 2", secs(300), || {
        let e = verify::check_hamiltonian_h2(5)?;
        let h2 = e.data["h2"].as_u64().unwrap_or(0);
        Ok(Outcome { ok: entry_ok(&e) && h2 >= 2, detail: format!("exact value {h2}") })
    });

    criterion(&mut results, 7, "graded H2(W_1, Q)_d = 0 for d in [-2, 8]", secs(11), || {
        let degrees: Vec<i64> = (-2..=8).collect();
        per_item(&degrees, secs(1), |d| {
            let e = verify::check_graded_h2(d)?;
            Ok((entry_ok(&e) && e.data["dim"] == json!(0), e.data["dim"].clone()))
        })
    });

    criterion(&mut results, 8, "Virasoro window N = 12", secs(5), || {
        let e = verify::check_virasoro(12)?;
        // independent look at the two quoted brackets
        let q = Rationals;
        let v = virasoro_window(12)?;
        let idx = |l: &str| v.index_of(l).expect("label");
        let d0 = idx("d0");
        let c = idx("c");
        let b1 = v.bracket(idx("d-1"), idx("d1")).cloned().unwrap_or_default();
        let b2 = v.bracket(idx("d-2"), idx("d2")).cloned().unwrap_or_default();
        let ok1 = b1 == vec![(d0, q.from_i64(2))];
        let half = q.div(&q.one(), &q.from_i64(2)).expect("2 is invertible");
        let ok2 = b2 == vec![(d0, q.from_i64(4)), (c, half)];
        let witt_dim = witt2_window(12)?.dim();
        Ok(Outcome {
            ok: e.status == Status::WindowCertified && ok1 && ok2 && witt_dim == 25,
            detail: format!("triples checked {}", e.data["checks"]["cocycle_triples_checked"]),
        })
    });

    criterion(&mut results, 9, "degree derivation outer on S_2, H_2 windows; control finds d0", secs(10), || {
        let es = verify::check_witnesses(4)?;
        let sol = |e: &Entry| e.data["solution"].clone();
        let ok = es.iter().all(entry_ok)
            && sol(&es[0]).is_null()
            && sol(&es[1]).is_null()
            && sol(&es[2]) == json!([["d0", "1"]]);
        Ok(Outcome { ok, detail: format!("control solution {}", sol(&es[2])) })
    });

    criterion(&mut results, 10, "property suites", secs(900), || {
        per_item(&[5u64, 7], secs(900), |p| {
            let e = verify::check_properties(p)?;
            let desk = e.data["desk"].as_array().map_or(0, Vec::len);
            let jac = e.data["jacobi"].as_array().map_or(0, Vec::len);
            Ok((entry_ok(&e), json!({"desk": desk, "jacobi": jac})))
        })
    });

    let passed = results.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
