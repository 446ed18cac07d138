//! Normalized length `λ∞` and the checks of its basic properties.

use std::fmt;
use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::modpres::{
    cyclic_decomposition, fitting_f0, smith_reduce, CutModule, Endpoint, ExactTriple,
    PresentationMatrix,
};
use crate::report::Report;
use crate::ring_core::rng::{ElementShape, Sampler};
use crate::ring_core::{Exponent, Mode, RingDescriptor, RingElement};
use crate::scalar::ExpInt;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LengthValue<I: ExpInt> {
    Finite(Exponent<I>),
    /// Only for modules without a torsion certificate.
    Infinite,
}

impl<I: ExpInt> LengthValue<I> {
    pub fn finite(&self) -> Option<&Exponent<I>> {
        match self {
            LengthValue::Finite(q) => Some(q),
            LengthValue::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LengthValue::Finite(_))
    }
}

impl<I: ExpInt> fmt::Display for LengthValue<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthValue::Finite(q) => write!(f, "{q}"),
            LengthValue::Infinite => write!(f, "inf"),
        }
    }
}

/// `λ∞(M) = v(F_0(M))` for a presented module.
pub fn lambda_fp<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<LengthValue<I>> {
    match fitting_f0(a) {
        Ok(cut) => Ok(LengthValue::Finite(cut.threshold().clone())),
        Err(Error::NotTorsion) => Ok(LengthValue::Infinite),
        Err(e) => Err(e),
    }
}

/// `λ∞(⊕ V/I_i) = Σ r_i`: the sup over finitely generated submodules does
/// not see the endpoint.
pub fn lambda_cut<I: ExpInt>(m: &CutModule<I>) -> Exponent<I> {
    m.summands().iter().map(|s| s.threshold().clone()).sum()
}

/// `M^{[F]}`: the entrywise p-th root of the relations (characteristic p).
pub fn frobenius_restrict<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<PresentationMatrix<I>> {
    if a.descriptor().mode() != Mode::CharP {
        return Err(Error::ModeUnsupported(
            "frobenius_restrict needs the perfect characteristic-p model".into(),
        ));
    }
    a.map(RingElement::pth_root)
}

fn value_json<I: ExpInt>(v: &LengthValue<I>) -> serde_json::Value {
    json!(v.to_string())
}

/// `λ(A^{[F]}) = λ(A)/p` for one matrix.
pub fn pullback_report<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<Report> {
    let p = a.descriptor().prime() as i64;
    let lam = lambda_fp(a)?;
    let lam_f = lambda_fp(&frobenius_restrict(a)?)?;
    let expected = match &lam {
        LengthValue::Finite(q) => LengthValue::Finite(q.div_int(p)),
        LengthValue::Infinite => LengthValue::Infinite,
    };
    Ok(Report::new(
        "lambda(M^[F]) = lambda(M)/p",
        &lam_f,
        &expected,
        lam_f == expected,
        json!({
            "rows": a.rows(),
            "cols": a.cols(),
            "lambda_M": value_json(&lam),
        }),
    ))
}

/// Random relation matrix with a torsion certificate (retries until some
/// maximal minor has exact valuation).
pub fn random_presentation<I: ExpInt>(
    desc: &Arc<RingDescriptor<I>>,
    rows: usize,
    cols: usize,
    shape: ElementShape,
    sampler: &mut Sampler,
) -> PresentationMatrix<I> {
    loop {
        let grid = sampler.grid(desc, rows, cols, shape);
        let a = PresentationMatrix::new(desc, grid).expect("well-formed grid");
        if fitting_f0(&a).is_ok() {
            return a;
        }
    }
}

/// Pull-back check on `a` (if given) and on `trials` random `rows×cols`
/// matrices.
pub fn pullback_check<I: ExpInt>(
    desc: &Arc<RingDescriptor<I>>,
    a: Option<&PresentationMatrix<I>>,
    rows: usize,
    cols: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<Report>> {
    let mut out = Vec::with_capacity(trials + 1);
    if let Some(a) = a {
        out.push(pullback_report(a)?);
    }
    for i in 0..trials {
        let mut s = Sampler::for_trial(seed, i as u64);
        let a = random_presentation(desc, rows, cols, ElementShape::default(), &mut s);
        let mut r = pullback_report(&a)?;
        r.witness["trial"] = json!(i);
        out.push(r);
    }
    Ok(out)
}

/// `λ(M) = λ(L) + λ(N)` on an exact triple.
pub fn additivity_check<I: ExpInt>(t: &ExactTriple<I>) -> Report {
    let l = lambda_cut(&t.sub);
    let m = lambda_cut(&t.middle);
    let n = lambda_cut(&t.quotient);
    let rhs = &l + &n;
    Report::new(
        "lambda(M) = lambda(L) + lambda(N)",
        &m,
        &rhs,
        m == rhs,
        json!({ "L": t.sub.to_string(), "M": t.middle.to_string(), "N": t.quotient.to_string() }),
    )
}

/// `λ(abM) <= λ(aL) + λ(bN)`.
pub fn subadditivity_check<I: ExpInt>(
    t: &ExactTriple<I>,
    va: &Exponent<I>,
    vb: &Exponent<I>,
) -> Report {
    let lhs = lambda_cut(&t.middle.scalar_image_val(&(va + vb)));
    let rhs = lambda_cut(&t.sub.scalar_image_val(va)) + lambda_cut(&t.quotient.scalar_image_val(vb));
    Report::new(
        "lambda(abM) <= lambda(aL) + lambda(bN)",
        &lhs,
        &rhs,
        lhs <= rhs,
        json!({ "v_a": va.to_string(), "v_b": vb.to_string() }),
    )
}

/// `λ(M) = 0` forces `M` almost zero (all thresholds 0).
pub fn zero_length_check<I: ExpInt>(m: &CutModule<I>) -> Report {
    let lam = lambda_cut(m);
    if !lam.is_zero() {
        return Report::new(
            "lambda(M) = 0 implies M almost zero",
            &lam,
            "0",
            true,
            json!({ "applicable": false, "module": m.to_string() }),
        );
    }
    let almost_zero = m.summands().iter().all(|s| s.threshold().is_zero());
    Report::new(
        "lambda(M) = 0 implies M almost zero",
        &lam,
        "0",
        almost_zero,
        json!({
            "applicable": true,
            "almost_zero": almost_zero,
            "nonzero": !m.is_zero(),
            "module": m.to_string(),
        }),
    )
}

/// `λ(M) = 0` for a presented module forces `M = 0`.
pub fn zero_length_check_fp<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<Report> {
    let lam = lambda_fp(a)?;
    let applicable = lam.finite().is_some_and(Exponent::is_zero);
    let is_zero = cyclic_decomposition(a).map(|m| m.is_zero()).unwrap_or(false);
    Ok(Report::new(
        "lambda(M) = 0 implies M = 0 for finitely presented M",
        &lam,
        "0",
        !applicable || is_zero,
        json!({ "applicable": applicable, "zero_module": is_zero }),
    ))
}

/// `λ(bM) < ∞` for `b ∈ m_V`.
pub fn finiteness_check<I: ExpInt>(m: &CutModule<I>, vb: &Exponent<I>) -> Report {
    let image = m.scalar_image_val(vb);
    // A finite list of cuts always has a finite sum of thresholds.
    let lam = LengthValue::Finite(lambda_cut(&image));
    Report::new(
        "lambda(bM) < inf for b in m_V",
        &lam,
        "finite",
        lam.is_finite(),
        json!({ "v_b": vb.to_string(), "bM": image.to_string() }),
    )
}

/// Random exact triples `(V/a, V/ab, V/b)` with `v(a)+v(b) < N`.
pub fn random_triple<I: ExpInt>(
    desc: &Arc<RingDescriptor<I>>,
    sampler: &mut Sampler,
) -> ExactTriple<I> {
    let p = desc.prime();
    let half = desc.precision().div_int(2);
    let va = sampler.exponent(p, 3, &Exponent::zero(), &half);
    let vb = sampler.exponent(p, 3, &Exponent::zero(), &half);
    ExactTriple::from_valuations(&va, &vb)
}

/// Elementary divisors sum equals the minimal maximal minor.
pub fn smith_oracle_report<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<Report> {
    let smith: Exponent<I> = smith_reduce(a)?.into_iter().sum();
    let f0 = fitting_f0(a)?;
    Ok(Report::new(
        "sum of elementary divisors = v(F_0)",
        &smith,
        f0.threshold(),
        &smith == f0.threshold() && f0.endpoint() == Endpoint::Closed,
        json!({ "rows": a.rows(), "cols": a.cols() }),
    ))
}
