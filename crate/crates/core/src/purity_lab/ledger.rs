use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use super::extension::ExtensionOrder;
use crate::error::{Error, Result};
use crate::length::{frobenius_restrict, lambda_cut, lambda_fp, LengthValue};
use crate::modpres::{cyclic_decomposition, smith_reduce, CutModule, Endpoint, PresentationMatrix};
use crate::report::Report;
use crate::ring_core::{Exponent, Mode, RingDescriptor, RingElement, ValResult};
use crate::scalar::ExpInt;

/// Lengths along the chain `bB → (b^pC)^{[F]} → N_b → 0` for
/// `B = W/ϖW`, `C = W/pW` over `A = V/ϖV`.
#[derive(Clone, Debug)]
pub struct PurityLedger<I: ExpInt> {
    pub b_valuation: Exponent<I>,
    pub lambda_b_b: LengthValue<I>,
    pub lambda_bp_c: LengthValue<I>,
    pub lambda_bp_c_f: LengthValue<I>,
    pub lambda_n_b: LengthValue<I>,
    pub chain: Vec<Report>,
}

impl<I: ExpInt> PurityLedger<I> {
    pub fn passed(&self) -> bool {
        self.chain.iter().all(Report::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "b_valuation": self.b_valuation.to_string(),
            "lambda_bB": self.lambda_b_b.to_string(),
            "lambda_bpC": self.lambda_bp_c.to_string(),
            "lambda_bpC_F": self.lambda_bp_c_f.to_string(),
            "lambda_Nb": self.lambda_n_b.to_string(),
            "chain": self.chain,
        })
    }

    /// One line per step of the chain.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let rows = [
            ("v(b)", self.b_valuation.to_string()),
            ("lambda(bB)", self.lambda_b_b.to_string()),
            ("lambda(b^p C)", self.lambda_bp_c.to_string()),
            ("lambda((b^p C)^[F])", self.lambda_bp_c_f.to_string()),
            ("lambda(N_b)", self.lambda_n_b.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<22}{v}");
        }
        for r in &self.chain {
            let _ = writeln!(out, "[{}] {}: {} vs {}", r.verdict.as_str(), r.claim, r.lhs, r.rhs);
        }
        out
    }
}

/// `⊕ V/(X^{r_i})` over the basis: the cut module of `W/cW` for `v(c) = r`.
fn free_quotient<I: ExpInt>(
    desc: &Arc<RingDescriptor<I>>,
    rank: usize,
    r: &Exponent<I>,
) -> Result<CutModule<I>> {
    let c = RingElement::monomial(desc, 1, r.clone())?;
    cyclic_decomposition(&PresentationMatrix::diagonal(desc, vec![c; rank])?)
}

/// Presentation of `M^{[F]}` over the characteristic-p model, for a cut
/// module `M` killed by `p`, through `V/pV ≅ F_p[t^{1/p^∞}]/(t)`: the closed
/// summand `V/(p^r)` becomes the relations `(t^r, t)`. `None` for `M = 0`.
pub(crate) fn residue_frobenius_presentation<I: ExpInt>(
    m: &CutModule<I>,
    desc: &Arc<RingDescriptor<I>>,
) -> Result<Option<PresentationMatrix<I>>> {
    if m.is_zero() {
        return Ok(None);
    }
    let target = Arc::new(RingDescriptor::char_p(desc.prime(), desc.precision().clone())?);
    let one = Exponent::one();
    let n = m.summands().len();
    let mut rows = Vec::with_capacity(n);
    for (i, s) in m.summands().iter().enumerate() {
        if s.endpoint() != Endpoint::Closed || s.threshold() > &one {
            return Err(Error::InvalidInput(format!(
                "summand {s} is not a finitely presented V/pV-module"
            )));
        }
        let rel = RingElement::monomial(desc, 1, s.threshold().clone())?
            .residue_to_char_p(&target)?;
        let mut row = vec![RingElement::zero(&target); 2 * n];
        row[i] = rel;
        row[n + i] = RingElement::monomial(&target, 1, one.clone())?;
        rows.push(row);
    }
    let a = PresentationMatrix::new(&target, rows)?;
    Ok(Some(frobenius_restrict(&a)?))
}

fn frobenius_length<I: ExpInt>(m: &CutModule<I>, desc: &Arc<RingDescriptor<I>>) -> Result<Exponent<I>> {
    match residue_frobenius_presentation(m, desc)? {
        None => Ok(Exponent::zero()),
        Some(a) => Ok(finite(&lambda_fp(&a)?)),
    }
}

fn finite<I: ExpInt>(v: &LengthValue<I>) -> Exponent<I> {
    v.finite().cloned().expect("lengths of torsion modules are finite")
}

/// The Frobenius `W/ϖW → (W/pW)^{[F]}` is bijective exactly when the
/// matrix of `y_k ↦ y_k^p` is invertible over `V/pV`.
fn frobenius_matrix_is_invertible<I: ExpInt>(order: &ExtensionOrder<I>) -> Result<bool> {
    let desc = order.descriptor();
    let res = Arc::new(desc.with_precision(Exponent::one())?);
    let p = desc.prime() as u64;
    let rows = (0..order.degree())
        .map(|k| order.pow(&order.unit_vector(&res, k), p))
        .collect::<Result<Vec<_>>>()?;
    match smith_reduce(&PresentationMatrix::new(&res, rows)?) {
        Ok(divs) => Ok(divs.iter().all(Exponent::is_zero)),
        Err(Error::NotTorsion) | Err(Error::PrecisionExhausted(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

pub fn purity_ledger<I: ExpInt>(order: &ExtensionOrder<I>, b: &RingElement<I>) -> Result<PurityLedger<I>> {
    let desc = order.descriptor();
    if desc.mode() != Mode::Mixed {
        return Err(Error::ModeUnsupported("the ledger runs over the mixed model".into()));
    }
    let vb = match b.valuation() {
        ValResult::Exact(v) if v.is_positive() => v,
        _ => {
            return Err(Error::InvalidInput(
                "b must be a nonzero element of m_V".into(),
            ))
        }
    };
    let p = desc.prime();
    let one = Exponent::one();
    let needed = Exponent::max_of(&one, &vb.scale(p as i64));
    if desc.precision() <= &needed {
        return Err(Error::PrecisionExhausted(format!(
            "precision must exceed {needed}"
        )));
    }
    let d = order.degree();
    let vpi = desc.varpi_valuation();
    let b_mod = free_quotient(desc, d, &vpi)?;
    let c_mod = free_quotient(desc, d, &one)?;
    let bb = b_mod.scalar_image(b)?;
    let bp = b.pow(p as u64);
    let bpc = c_mod.scalar_image(&bp)?;
    let lam_bb = lambda_cut(&bb);
    let lam_bpc = lambda_cut(&bpc);
    let lam_f = frobenius_length(&bpc, desc)?;
    let lam_nb = &lam_f - &lam_bb;

    let mut chain = Vec::new();
    chain.push(Report::new(
        "lambda((b^p C)^[F]) = lambda(b^p C)/p",
        &lam_f,
        lam_bpc.div_int(p as i64),
        lam_f == lam_bpc.div_int(p as i64),
        json!({ "step": "frobenius_scaling" }),
    ));
    let p_bb = lam_bb.scale(p as i64);
    chain.push(Report::new(
        "lambda(b^p C) <= p lambda(bB)",
        &lam_bpc,
        &p_bb,
        lam_bpc <= p_bb,
        json!({ "step": "filtration_bound" }),
    ));
    chain.push(Report::new(
        "lambda(N_b) = lambda((b^p C)^[F]) - lambda(bB) = 0",
        &lam_nb,
        "0",
        lam_nb.is_zero(),
        json!({ "step": "cokernel" }),
    ));
    // graded pieces ϖ^k C / ϖ^{k+1} C, k < p, each of length λ(B)
    let lam_b = lambda_cut(&b_mod);
    let graded: Vec<Exponent<I>> = (0..p as i64)
        .map(|k| {
            lambda_cut(&c_mod.scalar_image_val(&vpi.scale(k)))
                - lambda_cut(&c_mod.scalar_image_val(&vpi.scale(k + 1)))
        })
        .collect();
    let total: Exponent<I> = graded.iter().cloned().sum();
    chain.push(Report::new(
        "Fil^k C: graded pieces have length lambda(B), summing to lambda(C)",
        &total,
        lambda_cut(&c_mod),
        graded.iter().all(|g| g == &lam_b) && total == lambda_cut(&c_mod),
        json!({ "graded": graded.iter().map(|g| g.to_string()).collect::<Vec<_>>() }),
    ));
    let direct = frobenius_matrix_is_invertible(order)?;
    chain.push(Report::new(
        "Frobenius W/varpi W -> (W/pW)^[F] is bijective, so N_b = 0 directly",
        direct,
        true,
        direct == lam_nb.is_zero(),
        json!({ "step": "direct_cross_check" }),
    ));
    Ok(PurityLedger {
        b_valuation: vb,
        lambda_b_b: LengthValue::Finite(lam_bb),
        lambda_bp_c: LengthValue::Finite(lam_bpc),
        lambda_bp_c_f: LengthValue::Finite(lam_f),
        lambda_n_b: LengthValue::Finite(lam_nb),
        chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::purity_lab::{build_extension, ExtensionSpec};
    use num_bigint::BigInt;

    type E = Exponent<BigInt>;

    fn mixed(p: u32) -> Arc<RingDescriptor<BigInt>> {
        Arc::new(RingDescriptor::mixed(p, E::from_int(4)).unwrap())
    }

    fn lam(v: &LengthValue<BigInt>) -> E {
        v.finite().unwrap().clone()
    }

    #[test]
    fn trivial_extension() {
        let d = mixed(3);
        let order = build_extension(&ExtensionSpec::trivial(&d)).unwrap();
        let b = RingElement::monomial(&d, 1, E::frac(1, 9)).unwrap();
        let l = purity_ledger(&order, &b).unwrap();
        assert!(l.passed(), "{}", l.table());
        assert_eq!(lam(&l.lambda_b_b), E::frac(2, 9));
        assert_eq!(lam(&l.lambda_bp_c), E::frac(2, 3));
        assert!(lam(&l.lambda_n_b).is_zero());
    }

    #[test]
    fn rank_two() {
        let d = mixed(3);
        let a = RingElement::parse(&d, "1 + 1*p^(1)").unwrap();
        let order = build_extension(&ExtensionSpec::kummer(&d, a, 2)).unwrap();
        let b = RingElement::monomial(&d, 2, E::frac(1, 9)).unwrap();
        let l = purity_ledger(&order, &b).unwrap();
        assert!(l.passed(), "{}", l.table());
        assert_eq!(lam(&l.lambda_b_b), E::frac(4, 9));
        assert_eq!(lam(&l.lambda_bp_c), E::frac(4, 3));
        assert_eq!(lam(&l.lambda_bp_c_f), E::frac(4, 9));
    }

    #[test]
    fn degenerate_and_errors() {
        let d = mixed(5);
        let order = build_extension(&ExtensionSpec::trivial(&d)).unwrap();
        let b = RingElement::monomial(&d, 1, E::frac(1, 5)).unwrap();
        let l = purity_ledger(&order, &b).unwrap();
        assert!(l.passed());
        assert!(lam(&l.lambda_b_b).is_zero() && lam(&l.lambda_bp_c_f).is_zero());

        let low = Arc::new(RingDescriptor::<BigInt>::mixed(5, E::from_int(1)).unwrap());
        let order = build_extension(&ExtensionSpec::trivial(&low)).unwrap();
        let b = RingElement::monomial(&low, 1, E::frac(1, 25)).unwrap();
        assert!(matches!(purity_ledger(&order, &b), Err(Error::PrecisionExhausted(_))));
    }
}
