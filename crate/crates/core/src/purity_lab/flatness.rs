use std::sync::Arc;

use serde_json::json;

use super::ledger::residue_frobenius_presentation;
use crate::error::{Error, Result};
use crate::length::lambda_cut;
use crate::modpres::{cyclic_decomposition, CutIdeal, CutModule, Endpoint};
use crate::report::Report;
use crate::ring_core::{Exponent, Mode, RingDescriptor, RingElement, ValResult};
use crate::scalar::ExpInt;

/// `V/I ⊗ V/J = V/(I + J)`: the smaller threshold, closed winning ties.
fn tensor_cyclic<I: ExpInt>(a: &CutIdeal<I>, b: &CutIdeal<I>) -> CutIdeal<I> {
    let key = |c: &CutIdeal<I>| (c.threshold().clone(), c.endpoint() == Endpoint::Open);
    if key(a) <= key(b) {
        a.clone()
    } else {
        b.clone()
    }
}

fn single<I: ExpInt>(m: &CutModule<I>) -> Option<CutIdeal<I>> {
    m.summands().first().cloned()
}

/// Both sides of `a(V/ϖV) ⊗ (V/pV)^{[F]} → (a^pV/pV)^{[F]}` as cyclic
/// modules: equal length and equal annihilator.
pub fn flatness_check<I: ExpInt>(a: &RingElement<I>) -> Result<Report> {
    let desc = a.descriptor();
    if desc.mode() != Mode::Mixed {
        return Err(Error::ModeUnsupported("the flatness check runs over the mixed model".into()));
    }
    let p = desc.prime();
    let vpi = desc.varpi_valuation();
    let va = match a.valuation() {
        ValResult::Exact(v) if v <= vpi => v,
        _ => {
            return Err(Error::InvalidInput(format!(
                "need 0 <= v(a) <= {vpi}"
            )))
        }
    };
    let one = Exponent::one();
    if desc.precision() <= &one {
        return Err(Error::PrecisionExhausted("precision must exceed 1".into()));
    }
    // a(V/ϖV) ≅ V/bV with ϖ = ab
    let varpi = RingElement::monomial(desc, 1, vpi.clone())?;
    let b = varpi.divide(a)?;
    let vb = b.valuation().exact().cloned().unwrap_or_else(Exponent::zero);
    let a_mod = CutModule::cyclic(CutIdeal::closed(vpi.clone())).scalar_image(a)?;
    // (V/pV)^{[F]}, through the characteristic-p presentation
    let residue = CutModule::cyclic(CutIdeal::closed(one.clone()));
    let residue_f = frobenius_cut(&residue, desc)?;
    let lhs = match (single(&a_mod), single(&residue_f)) {
        (Some(x), Some(y)) => CutModule::cyclic(tensor_cyclic(&x, &y)),
        _ => CutModule::zero(),
    };
    let ap = a.pow(p as u64);
    let rhs = frobenius_cut(&residue.scalar_image(&ap)?, desc)?;
    let (l, r) = (lambda_cut(&lhs), lambda_cut(&rhs));
    let expected = &vpi - &va;
    let ok = l == r && l == expected && vb == expected && lhs.annihilator() == rhs.annihilator();
    Ok(Report::new(
        "a(V/varpi V) (x) (V/pV)^[F] = (a^p V/pV)^[F]",
        &l,
        &r,
        ok,
        json!({
            "v_a": va.to_string(),
            "v_b": vb.to_string(),
            "lhs": lhs.to_string(),
            "rhs": rhs.to_string(),
            "annihilator_lhs": lhs.annihilator().to_string(),
            "annihilator_rhs": rhs.annihilator().to_string(),
        }),
    ))
}

/// `M^{[F]}` as a cut module, from the Smith form of its presentation.
fn frobenius_cut<I: ExpInt>(m: &CutModule<I>, desc: &Arc<RingDescriptor<I>>) -> Result<CutModule<I>> {
    match residue_frobenius_presentation(m, desc)? {
        None => Ok(CutModule::zero()),
        Some(a) => cyclic_decomposition(&a),
    }
}

/// Samples `a = p^{1/p^j}` (`v(a) = 1/p^j`), `j = 1..=jmax`, plus `a = 1`.
pub fn flatness_grid<I: ExpInt>(desc: &Arc<RingDescriptor<I>>, jmax: u32) -> Result<Vec<Report>> {
    let mut out = vec![flatness_check(&RingElement::one(desc))?];
    for j in 1..=jmax {
        let a = RingElement::monomial(desc, 1, Exponent::inv_p_pow(desc.prime(), j))?;
        let mut r = flatness_check(&a)?;
        r.witness["j"] = json!(j);
        out.push(r);
    }
    Ok(out)
}
