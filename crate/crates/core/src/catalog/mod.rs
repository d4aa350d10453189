//! Named constructors for the algebras used throughout the crate.
//!
//! Specs read `name?key=value&key=value`, optionally prefixed by `builtin:`.

pub mod cartan;
pub mod classical;
pub mod window;
pub mod witt;

use std::collections::BTreeMap;

pub use window::PartialGradedAlgebra;

use crate::error::{Error, Result};
use crate::exact::{PrimeField, Rationals};
use crate::liecore::{AnyAlgebra, LieAlgebra};

pub const BUILTIN_PREFIX: &str = "builtin:";

/// A constructed catalog entry.
#[derive(Clone, Debug)]
pub enum Built {
    Algebra(AnyAlgebra),
    Window(PartialGradedAlgebra),
}

impl Built {
    pub fn name(&self) -> &str {
        match self {
            Built::Algebra(a) => a.name(),
            Built::Window(w) => &w.name,
        }
    }
}

/// Catalog names with their parameters, for listings.
pub const ENTRIES: &[(&str, &str, &str)] = &[
    ("abelian", "n, p (omit p for Q)", "abelian algebra of dimension n"),
    ("sl", "n, p (omit p for Q)", "traceless n x n matrices"),
    ("psl", "n, p", "sl(n) modulo its center"),
    ("witt", "p", "W(1,1), basis e_-1..e_(p-2)"),
    ("rvirasoro", "p", "restricted Virasoro algebra, W(1,1) plus central z"),
    ("jacobson_witt", "r, p", "W(r,1) = Der of F_p[x_1..x_r]/(x_i^p)"),
    ("special_d1", "r, p", "S(r,1)^(1)"),
    ("hamiltonian_d2", "r, p", "H(2r,1)^(2)"),
    ("contact_d1", "r, p", "K(2r+1,1)^(1)"),
    ("melikian", "p", "Melikian algebra (not implemented)"),
    ("witt2_window", "N", "two-sided Witt algebra, degrees -N..N"),
    ("virasoro_window", "N", "Virasoro algebra, degrees -N..N plus c"),
    ("onesided_witt_window", "r, N", "W_r over Q, degrees -1..N"),
    ("special_window", "r, N", "S_r over Q, degrees -1..N"),
    ("hamiltonian_window", "r, N", "H_2r over Q, degrees -1..N"),
    ("contact_window", "r, N", "K_(2r+1) over Q, degrees -2..N"),
];

/// Splits `builtin:name?k=v&k=v` into the name and its parameters.
pub fn parse_spec(spec: &str) -> Result<(String, BTreeMap<String, String>)> {
    let body = spec.strip_prefix(BUILTIN_PREFIX).unwrap_or(spec);
    let (name, query) = body.split_once('?').unwrap_or((body, ""));
    if name.is_empty() {
        return Err(Error::Parse(format!("empty catalog name in {spec:?}")));
    }
    let mut params = BTreeMap::new();
    for part in query.split('&').filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("parameter {part:?} is not key=value")))?;
        if params.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Parse(format!("parameter {k:?} given twice")));
        }
    }
    Ok((name.to_string(), params))
}

struct Params<'a> {
    name: &'a str,
    map: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Parse(format!("{}: bad value {v:?} for {key}", self.name))),
        }
    }
    fn req<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| Error::InvalidArgument(format!("{} needs parameter {key}", self.name)))
    }
    fn only(&self, keys: &[&str]) -> Result<()> {
        match self.map.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidArgument(format!("{} does not take parameter {k}", self.name))),
            None => Ok(()),
        }
    }
    fn p(&self) -> Result<u64> {
        let p: u64 = self.req("p")?;
        modular_p(p)?;
        Ok(p)
    }
    fn window(&self) -> Result<i64> {
        let n: i64 = self.req("N")?;
        if n < 3 {
            return Err(Error::InvalidArgument(format!("{}: window N = {n} must be at least 3", self.name)));
        }
        Ok(n)
    }
}

/// Characteristic accepted by the modular constructors.
pub fn modular_p(p: u64) -> Result<PrimeField> {
    if p < 5 {
        return Err(Error::InvalidField(format!("p = {p}: modular constructors need a prime p >= 5")));
    }
    PrimeField::new(p)
}

pub fn make(spec: &str) -> Result<Built> {
    let (name, map) = parse_spec(spec)?;
    make_with(&name, &map)
}

pub fn make_with(name: &str, map: &BTreeMap<String, String>) -> Result<Built> {
    let ps = Params { name, map };
    let alg = |a: LieAlgebra<PrimeField>| Ok(Built::Algebra(a.into()));
    match name {
        "abelian" | "sl" => {
            ps.only(&["n", "p"])?;
            let n: usize = ps.req("n")?;
            match ps.get::<u64>("p")? {
                Some(p) => {
                    let f = PrimeField::new(p)?;
                    let a = if name == "sl" { classical::sl(f, n)? } else { LieAlgebra::abelian(f, n) };
                    alg(a)
                }
                None => {
                    let a = if name == "sl" { classical::sl(Rationals, n)? } else { LieAlgebra::abelian(Rationals, n) };
                    Ok(Built::Algebra(a.into()))
                }
            }
        }
        "psl" => {
            ps.only(&["n", "p"])?;
            alg(classical::psl(PrimeField::new(ps.req("p")?)?, ps.req("n")?)?)
        }
        "witt" => {
            ps.only(&["p"])?;
            alg(witt::witt(ps.p()?)?)
        }
        "rvirasoro" => {
            ps.only(&["p"])?;
            alg(witt::rvirasoro(ps.p()?)?)
        }
        "jacobson_witt" | "special_d1" | "hamiltonian_d2" | "contact_d1" => {
            ps.only(&["r", "p"])?;
            let (r, p): (usize, u64) = (ps.req("r")?, ps.p()?);
            alg(match name {
                "jacobson_witt" => cartan::jacobson_witt(r, p)?,
                "special_d1" => cartan::special_d1(r, p)?,
                "hamiltonian_d2" => cartan::hamiltonian_d2(r, p)?,
                _ => cartan::contact_d1(r, p)?,
            })
        }
        "melikian" => Err(Error::Unsupported("melikian is not implemented".into())),
        "witt2_window" | "virasoro_window" => {
            ps.only(&["N"])?;
            let n = ps.window()?;
            let w = if name == "witt2_window" { window::witt2_window(n)? } else { window::virasoro_window(n)? };
            Ok(Built::Window(w))
        }
        "onesided_witt_window" | "special_window" | "hamiltonian_window" | "contact_window" => {
            ps.only(&["r", "N"])?;
            let (r, n): (usize, i64) = (ps.req("r")?, ps.window()?);
            Ok(Built::Window(match name {
                "onesided_witt_window" => window::onesided_witt_window(r, n)?,
                "special_window" => window::special_window(r, n)?,
                "hamiltonian_window" => window::hamiltonian_window(r, n)?,
                _ => window::contact_window(r, n)?,
            }))
        }
        other => Err(Error::Unsupported(format!("unknown catalog name {other:?}"))),
    }
}

/// Modular catalog algebras of dimension at most 30 used by the property suites.
pub fn desk_catalog(p: u64) -> Result<Vec<LieAlgebra<PrimeField>>> {
    let f = modular_p(p)?;
    let mut out = vec![
        witt::witt(p)?,
        witt::rvirasoro(p)?,
        classical::sl(f, 2)?,
        classical::sl(f, 3)?,
        cartan::jacobson_witt(1, p)?,
        LieAlgebra::abelian(f, 2),
    ];
    if p == 5 {
        out.push(classical::sl(f, 5)?);
        out.push(classical::psl(f, 5)?);
        out.push(cartan::special_d1(2, p)?);
        out.push(cartan::hamiltonian_d2(1, p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Subspace;

    fn prime(b: Built) -> LieAlgebra<PrimeField> {
        match b {
            Built::Algebra(AnyAlgebra::Prime(l)) => l,
            other => panic!("expected a modular algebra, got {}", other.name()),
        }
    }

    #[test]
    fn make_examples() {
        let v = prime(make("builtin:rvirasoro?p=5").unwrap());
        assert_eq!(v.dim(), 6);
        assert!(v.validate().passed());
        assert_eq!(v.center(), Subspace::coordinate(*v.field(), 6, &[5]));
        assert_eq!(prime(make("jacobson_witt?r=2&p=5").unwrap()).dim(), 50);
        let Built::Window(w) = make("virasoro_window?N=4").unwrap() else { panic!() };
        assert_eq!(w.dim(), 10);
        assert!(matches!(make("melikian?p=5"), Err(Error::Unsupported(_))));
        assert!(matches!(make("witt?p=4"), Err(Error::InvalidField(_))));
        assert!(matches!(make("witt?p=3"), Err(Error::InvalidField(_))));
        assert!(make("witt?q=5").is_err());
        assert!(make("witt?p").is_err());
        assert!(make("nonsense").is_err());
        assert!(make("virasoro_window?N=2").is_err());
    }

    #[test]
    fn witt_is_rvirasoro_mod_center() {
        for p in [5, 7, 11] {
            let v = witt::rvirasoro(p).unwrap();
            let w = witt::witt(p).unwrap();
            let (q, _) = v.quotient(&v.center()).unwrap();
            for i in 0..w.dim() {
                for j in 0..w.dim() {
                    assert_eq!(q.basis_bracket(i, j), w.basis_bracket(i, j));
                }
            }
        }
    }

    #[test]
    fn jacobson_witt_relabels_to_witt() {
        for p in [5, 7] {
            let jw = cartan::jacobson_witt(1, p).unwrap();
            let w = witt::witt(p).unwrap();
            // x^(n+1) d sits at position n + 1 in both bases
            assert_eq!(jw.labels()[0], "d1");
            for i in 0..w.dim() {
                for j in 0..w.dim() {
                    assert_eq!(jw.basis_bracket(i, j), w.basis_bracket(i, j));
                }
            }
        }
    }

    #[test]
    fn modular_constructors_validate() {
        for l in desk_catalog(5).unwrap() {
            assert!(l.validate().passed(), "{}", l.name());
        }
        assert_eq!(cartan::special_d1(2, 5).unwrap().dim(), 24);
        assert_eq!(cartan::hamiltonian_d2(1, 5).unwrap().dim(), 23);
    }
}
