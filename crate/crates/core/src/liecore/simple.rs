use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::algebra::LieAlgebra;
use crate::exact::upoly::{charpoly, factor, Poly};
use crate::exact::{kernel, Field, Matrix, Subspace};

/// Random enveloping elements tried before the Norton test gives up.
pub const NORTON_ATTEMPTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplicityMethod {
    Norton,
    CentroidKilling,
    Spinning,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<F: Field> {
    Simple,
    /// `witness` is a verified proper nonzero ideal; it is absent only for
    /// algebras of dimension at most one, which are not simple by convention.
    NotSimple { witness: Option<Subspace<F>> },
    Undecided { centroid_dim: Option<usize> },
}

#[derive(Clone, Debug)]
pub struct SimplicityCertificate<F: Field> {
    pub verdict: Verdict<F>,
    pub method: SimplicityMethod,
    pub seed: u64,
    pub transcript: Vec<String>,
}

impl<F: Field> SimplicityCertificate<F> {
    pub fn is_simple(&self) -> bool {
        matches!(self.verdict, Verdict::Simple)
    }
    pub fn is_not_simple(&self) -> bool {
        matches!(self.verdict, Verdict::NotSimple { .. })
    }
    pub fn is_undecided(&self) -> bool {
        matches!(self.verdict, Verdict::Undecided { .. })
    }
    pub fn verdict_str(&self) -> &'static str {
        match self.verdict {
            Verdict::Simple => "simple",
            Verdict::NotSimple { .. } => "not_simple",
            Verdict::Undecided { .. } => "undecided",
        }
    }
    pub fn witness_dim(&self) -> Option<usize> {
        match &self.verdict {
            Verdict::NotSimple { witness: Some(w) } => Some(w.dim()),
            _ => None,
        }
    }
}

fn not_simple<F: Field>(
    witness: Option<Subspace<F>>,
    method: SimplicityMethod,
    seed: u64,
    transcript: Vec<String>,
) -> SimplicityCertificate<F> {
    SimplicityCertificate { verdict: Verdict::NotSimple { witness }, method, seed, transcript }
}

fn proper<F: Field>(s: &Subspace<F>) -> bool {
    !s.is_zero() && !s.is_full()
}

/// Simplicity certificate. Over F_p the adjoint module is tested for
/// irreducibility with the Norton test; over the rationals the verdict is
/// "simple" exactly when the Killing form is nondegenerate and the centroid is
/// one-dimensional (central simplicity).
pub fn is_simple<F: Field>(l: &LieAlgebra<F>, seed: u64) -> SimplicityCertificate<F> {
    let n = l.dim();
    let mut transcript = Vec::new();
    if n <= 1 {
        transcript.push(format!("dim {n} <= 1: not simple by convention"));
        return not_simple(None, SimplicityMethod::Spinning, seed, transcript);
    }
    let center = l.center();
    if !center.is_zero() {
        let witness = if center.is_full() { Subspace::coordinate(l.field().clone(), n, &[0]) } else { center };
        transcript.push(format!("nonzero center; witness ideal of dim {}", witness.dim()));
        return not_simple(Some(witness), SimplicityMethod::Spinning, seed, transcript);
    }
    let derived = l.derived_subalgebra();
    if !derived.is_full() {
        transcript.push(format!("derived subalgebra of dim {} is a proper ideal", derived.dim()));
        return not_simple(Some(derived), SimplicityMethod::Spinning, seed, transcript);
    }
    if l.field().characteristic() > 0 {
        norton(l, seed, transcript)
    } else {
        centroid_killing(l, seed, transcript)
    }
}

fn random_theta<F: Field, R: Rng>(l: &LieAlgebra<F>, ads: &[Matrix<F>], rng: &mut R) -> (Matrix<F>, String) {
    let f = l.field();
    let n = l.dim();
    let mut theta = Matrix::zero(f.clone(), n, n);
    for ad in ads {
        let c = f.random(rng);
        if !f.is_zero(&c) {
            theta = theta.add_scaled(ad, &c);
        }
    }
    let (j, k, m) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
    let w2 = ads[j].mul(&ads[k]);
    let w3 = w2.mul(&ads[m]);
    let (b, c) = (f.random(rng), f.random(rng));
    theta = theta.add_scaled(&w2, &b).add_scaled(&w3, &c);
    let desc = format!(
        "theta = random combination of ad + {}*ad{j}*ad{k} + {}*ad{j}*ad{k}*ad{m}",
        f.format(&b),
        f.format(&c)
    );
    (theta, desc)
}

fn eval_at_matrix<F: Field>(p: &Poly<F>, m: &Matrix<F>) -> Matrix<F> {
    let f = m.field().clone();
    let n = m.rows();
    let mut acc = Matrix::zero(f.clone(), n, n);
    let id = Matrix::identity(f.clone(), n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m).add_scaled(&id, c);
    }
    acc
}

/// Spins `v` under the transposed adjoint action.
fn dual_spin<F: Field>(ads_t: &[Matrix<F>], v: &[F::Elem]) -> Subspace<F> {
    let f = ads_t[0].field().clone();
    let n = v.len();
    let mut e = crate::exact::Echelon::new(f.clone(), n);
    let mut queue = vec![v.to_vec()];
    e.insert_dense(v);
    while let Some(w) = queue.pop() {
        if e.is_full() {
            break;
        }
        for a in ads_t {
            let u = a.apply(&w);
            if e.insert_dense(&u) {
                queue.push(u);
            }
        }
    }
    Subspace::from_echelon(e)
}

fn norton<F: Field>(l: &LieAlgebra<F>, seed: u64, mut transcript: Vec<String>) -> SimplicityCertificate<F> {
    let f = l.field().clone();
    let n = l.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ads: Vec<Matrix<F>> = (0..n).map(|i| l.ad_basis(i)).collect();
    let ads_t: Vec<Matrix<F>> = ads.iter().map(|a| a.transpose()).collect();
    for attempt in 0..NORTON_ATTEMPTS {
        let (theta, desc) = random_theta(l, &ads, &mut rng);
        let cp = charpoly(&f, &theta.to_dense());
        let factors = factor(&cp, &mut rng);
        transcript.push(format!(
            "attempt {attempt}: {desc}; charpoly factor degrees {:?}",
            factors.iter().map(|(p, m)| (p.degree().unwrap_or(0), *m)).collect::<Vec<_>>()
        ));
        for (irr, _) in &factors {
            let deg = irr.degree().unwrap_or(0);
            let nmat = eval_at_matrix(irr, &theta);
            let null = kernel(&nmat);
            let Some(v) = null.basis_dense().into_iter().next() else { continue };
            let spin = l
                .ideal_closure(&Subspace::from_dense(f.clone(), n, &[v]))
                .expect("dimensions agree");
            if proper(&spin) {
                transcript.push(format!("  factor deg {deg}: kernel vector spins to proper ideal of dim {}", spin.dim()));
                return not_simple(Some(spin), SimplicityMethod::Norton, seed, transcript);
            }
            if null.dim() != deg {
                transcript.push(format!("  factor deg {deg}: nullity {} != degree, try next", null.dim()));
                continue;
            }
            let null_t = kernel(&nmat.transpose());
            let w = null_t.basis_dense().into_iter().next().expect("transpose has equal nullity");
            let dual = dual_spin(&ads_t, &w);
            if !dual.is_full() {
                let witness = dual.annihilator();
                transcript.push(format!(
                    "  factor deg {deg}: dual spin of dim {} gives proper ideal of dim {}",
                    dual.dim(),
                    witness.dim()
                ));
                debug_assert!(l.is_ideal(&witness));
                return not_simple(Some(witness), SimplicityMethod::Norton, seed, transcript);
            }
            transcript.push(format!(
                "  factor deg {deg}: nullity {deg}, kernel vector and dual vector both spin to dim {n}: irreducible"
            ));
            return SimplicityCertificate { verdict: Verdict::Simple, method: SimplicityMethod::Norton, seed, transcript };
        }
    }
    transcript.push(format!("no decision after {NORTON_ATTEMPTS} attempts"));
    SimplicityCertificate {
        verdict: Verdict::Undecided { centroid_dim: None },
        method: SimplicityMethod::Norton,
        seed,
        transcript,
    }
}

fn centroid_killing<F: Field>(l: &LieAlgebra<F>, seed: u64, mut transcript: Vec<String>) -> SimplicityCertificate<F> {
    let n = l.dim();
    let killing = l.killing_form();
    let radical = kernel(&killing);
    let centroid = l.centroid();
    transcript.push(format!("killing radical dim {}, centroid dim {}", radical.dim(), centroid.dim()));
    if radical.is_zero() && centroid.dim() == 1 {
        return SimplicityCertificate {
            verdict: Verdict::Simple,
            method: SimplicityMethod::CentroidKilling,
            seed,
            transcript,
        };
    }
    if proper(&radical) && l.is_ideal(&radical) {
        transcript.push("killing radical is a proper ideal".into());
        return not_simple(Some(radical), SimplicityMethod::CentroidKilling, seed, transcript);
    }
    for i in 0..n {
        let spin = l
            .ideal_closure(&Subspace::coordinate(l.field().clone(), n, &[i]))
            .expect("dimensions agree");
        if proper(&spin) {
            transcript.push(format!("basis vector {i} spins to proper ideal of dim {}", spin.dim()));
            return not_simple(Some(spin), SimplicityMethod::Spinning, seed, transcript);
        }
    }
    SimplicityCertificate {
        verdict: Verdict::Undecided { centroid_dim: Some(centroid.dim()) },
        method: SimplicityMethod::CentroidKilling,
        seed,
        transcript,
    }
}
