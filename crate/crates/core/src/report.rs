//! Machine-readable reports and the per-algebra commands built on them.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::{h1, h2, LieModule};
use crate::derivations::derivation_algebra;
use crate::error::{Error, Result};
use crate::exact::{Field, Subspace};
use crate::extensions::{out_action_on_center, predict_from, uce, verify_from, DerSimpleReport};
use crate::liecore::{is_simple, AnyAlgebra, LieAlgebra};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skip")]
    Skip,
    #[serde(rename = "window-certified")]
    WindowCertified,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
            Status::WindowCertified => "window-certified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    /// The mathematical statement checked, or "plumbing".
    pub anchor: String,
    pub status: Status,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub field: String,
    pub source: String,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(field: impl Into<String>, source: impl Into<String>) -> Self {
        Report { version: VERSION.into(), field: field.into(), source: source.into(), entries: Vec::new() }
    }

    pub fn push(&mut self, id: impl Into<String>, anchor: impl Into<String>, status: Status, data: Value) {
        self.entries.push(Entry { id: id.into(), anchor: anchor.into(), status, data });
    }

    pub fn info(&mut self, id: impl Into<String>, data: Value) {
        self.push(id, "plumbing", Status::Pass, data);
    }

    pub fn failed(&self) -> bool {
        self.entries.iter().any(|e| e.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_table(&self) -> String {
        let width = self.entries.iter().map(|e| e.id.len()).max().unwrap_or(2).max(2);
        let mut out = format!("{} [{}] liecert {}\n", self.source, self.field, self.version);
        for e in &self.entries {
            out.push_str(&format!("{:<width$}  {:<16}  {}\n", e.id, e.status.as_str(), e.data));
        }
        out
    }
}

fn analyze_generic<F: Field>(l: &LieAlgebra<F>, report: &mut Report, seed: u64) -> Result<()> {
    let jac = l.validate();
    report.push(
        "jacobi",
        "plumbing",
        Status::from_bool(jac.passed()),
        json!({"triples_checked": jac.triples_checked, "failure": jac.failure}),
    );
    if !jac.passed() {
        return Ok(());
    }
    report.info("dim", json!(l.dim()));
    let center = l.center();
    report.info("center_dim", json!(center.dim()));
    let derived = l.derived_subalgebra();
    report.info("perfect", json!({"perfect": derived.is_full(), "derived_dim": derived.dim()}));
    let cert = is_simple(l, seed);
    report.info(
        "simple",
        json!({"verdict": cert.verdict_str(), "method": cert.method, "seed": seed, "witness_dim": cert.witness_dim()}),
    );
    let der = derivation_algebra(l)?;
    let complete = center.is_zero() && der.out_dim == 0;
    report.info(
        "derivations",
        json!({"der_dim": der.dim(), "inner_dim": der.inner.dim(), "out_dim": der.out_dim, "complete": complete}),
    );
    let der_cert = is_simple(&der.as_algebra, seed);
    report.info("der_simple", json!({"verdict": der_cert.verdict_str(), "method": der_cert.method}));
    let triv = LieModule::trivial(l);
    report.info("h1_trivial", json!(h1(&triv).dim));
    report.info("h2_trivial", json!(h2(&triv).dim));
    Ok(())
}

/// Dimension, center, perfectness, simplicity, derivations and low cohomology.
pub fn analyze(a: &AnyAlgebra, source: &str, seed: u64) -> Result<Report> {
    let mut report = Report::new(a.field_spec().to_string(), source);
    report.info("name", json!(a.name()));
    match a {
        AnyAlgebra::Prime(l) => analyze_generic(l, &mut report, seed)?,
        AnyAlgebra::Rational(l) => analyze_generic(l, &mut report, seed)?,
    }
    Ok(report)
}

fn uce_generic<F: Field>(l: &LieAlgebra<F>, report: &mut Report) -> Result<()> {
    let u = uce(l)?;
    report.info("base_dim", json!(l.dim()));
    report.info("hat_dim", json!(u.hat.dim()));
    report.info("kernel_dim", json!(u.hat_center.dim()));
    report.info("hat_perfect", json!(u.hat.is_perfect()));
    let (h1d, h2d) = match u.universality {
        Some(x) => x,
        None => (h1(&LieModule::trivial(&u.hat)).dim, h2(&LieModule::trivial(&u.hat)).dim),
    };
    report.push(
        "universality",
        "H1(hat,F) = H2(hat,F) = 0",
        Status::from_bool(h1d == 0 && h2d == 0),
        json!({"h1": h1d, "h2": h2d}),
    );
    Ok(())
}

pub fn uce_report(a: &AnyAlgebra, source: &str) -> Result<Report> {
    let mut report = Report::new(a.field_spec().to_string(), source);
    match a {
        AnyAlgebra::Prime(l) => uce_generic(l, &mut report)?,
        AnyAlgebra::Rational(l) => uce_generic(l, &mut report)?,
    }
    Ok(report)
}

/// A central ideal of `hat_center`, as given on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealSpec {
    Zero,
    Full,
    Vectors(Vec<Vec<String>>),
}

impl IdealSpec {
    /// `zero`, `full`, or `;`-separated vectors of `,`-separated scalars.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "zero" | "0" | "" => Ok(IdealSpec::Zero),
            "full" => Ok(IdealSpec::Full),
            t => Ok(IdealSpec::Vectors(
                t.split(';').map(|v| v.split(',').map(|x| x.trim().to_string()).collect()).collect(),
            )),
        }
    }

    fn resolve<F: Field>(&self, f: &F, k: usize) -> Result<Subspace<F>> {
        match self {
            IdealSpec::Zero => Ok(Subspace::zero(f.clone(), k)),
            IdealSpec::Full => Ok(Subspace::full(f.clone(), k)),
            IdealSpec::Vectors(vs) => {
                let mut dense = Vec::new();
                for v in vs {
                    if v.len() != k {
                        return Err(Error::DimensionMismatch { expected: k, got: v.len() });
                    }
                    dense.push(v.iter().map(|x| f.parse(x)).collect::<Result<Vec<_>>>()?);
                }
                Ok(Subspace::from_dense(f.clone(), k, &dense))
            }
        }
    }
}

fn der_simple_json(r: &DerSimpleReport) -> Value {
    json!({
        "out_dim": r.out_dim,
        "center_dim": r.center_dim,
        "c_dim": r.c_dim,
        "stabilizer_dim": r.stabilizer_dim,
        "predicted": r.predicted,
        "quotient_dim": r.quotient_dim,
        "der_dim": r.der_dim,
        "direct": r.direct,
        "agree": r.agree,
        "flags": r.flags,
    })
}

fn predict_generic<F: Field>(l: &LieAlgebra<F>, ideal: &IdealSpec, verify: bool, seed: u64, report: &mut Report) -> Result<()> {
    // a perfect algebra with center is read as a quotient target: g = L / Z(L)
    let center = l.center();
    let g = if !center.is_zero() && l.is_perfect() {
        let (g, _) = l.quotient(&center)?;
        report.info("base", json!({"reduced_mod_center": true, "center_dim": center.dim(), "g_dim": g.dim()}));
        g
    } else {
        report.info("base", json!({"reduced_mod_center": false, "g_dim": l.dim()}));
        l.clone()
    };
    let action = out_action_on_center(&g, seed)?;
    let c = ideal.resolve(g.field(), action.uce.hat_center.dim())?;
    let r = if verify { verify_from(&action, &c, seed)? } else { predict_from(&action, &c) };
    let status = match r.agree {
        Some(a) => Status::from_bool(a),
        None => Status::Pass,
    };
    report.push("der_simple_prediction", "Der(hat/C) simple iff stab_Out(C) = 0", status, der_simple_json(&r));
    Ok(())
}

pub fn predict_report(a: &AnyAlgebra, source: &str, ideal: &IdealSpec, verify: bool, seed: u64) -> Result<Report> {
    let mut report = Report::new(a.field_spec().to_string(), source);
    match a {
        AnyAlgebra::Prime(l) => predict_generic(l, ideal, verify, seed, &mut report)?,
        AnyAlgebra::Rational(l) => predict_generic(l, ideal, verify, seed, &mut report)?,
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::witt::{rvirasoro, witt};

    #[test]
    fn report_round_trips() {
        let mut r = Report::new("F_5", "builtin:witt?p=5");
        r.push("x", "plumbing", Status::WindowCertified, json!({"a": 1}));
        let text = r.to_json();
        assert!(text.contains("\"window-certified\""));
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn analyze_rvirasoro() {
        let r = analyze(&rvirasoro(5).unwrap().into(), "builtin:rvirasoro?p=5", 0).unwrap();
        let get = |id: &str| r.entries.iter().find(|e| e.id == id).unwrap().data.clone();
        assert_eq!(get("center_dim"), json!(1));
        assert_eq!(get("h1_trivial"), json!(0));
        assert_eq!(get("h2_trivial"), json!(0));
        assert_eq!(get("derivations")["der_dim"], json!(5));
        assert_eq!(get("der_simple")["verdict"], json!("simple"));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn ideal_parsing() {
        assert_eq!(IdealSpec::parse("full").unwrap(), IdealSpec::Full);
        assert_eq!(IdealSpec::parse("1,2;0,1").unwrap(), IdealSpec::Vectors(vec![vec!["1".into(), "2".into()], vec!["0".into(), "1".into()]]));
        let r = predict_report(&witt(5).unwrap().into(), "w", &IdealSpec::Full, true, 0).unwrap();
        assert_eq!(r.entries.last().unwrap().data["agree"], json!(true));
    }
}
