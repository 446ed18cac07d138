use std::sync::Arc;

use num_integer::Integer;
use serde_json::json;

use super::extension::{ExtensionKind, ExtensionOrder};
use super::field::{laurent_inverse, Poly};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring_core::rng::{ElementShape, Sampler};
use crate::ring_core::{Exponent, Mode, RingDescriptor, RingElement};
use crate::scalar::ExpInt;

/// A `p`-th root of `w` modulo `ϖW`.
#[derive(Clone, Debug)]
pub struct FrobeniusRoot<I: ExpInt> {
    /// Coordinates of `y` on the order's basis (possibly non-integral when
    /// the order is smaller than the integral closure).
    pub root: Vec<RingElement<I>>,
    pub in_order: bool,
    /// Candidates examined (1 for the closed-form constructions).
    pub candidates: usize,
}

/// `x^{1/p}` in `L` (characteristic p).
fn generator_root<I: ExpInt>(order: &ExtensionOrder<I>, work: &Arc<RingDescriptor<I>>) -> Result<Poly<I>> {
    let spec = order.spec();
    let rel = spec.relation(work)?;
    let datum = spec.datum(work)?;
    let p = spec.desc.prime() as i64;
    match spec.kind {
        // x = x^p - a, so x^{1/p} = x - a^{1/p}
        ExtensionKind::ArtinSchreier => {
            let x = rel.monomial(RingElement::one(work), 1)?;
            rel.sub(&x, &rel.constant(datum.pth_root()?))
        }
        ExtensionKind::Kummer if spec.degree == 1 => Ok(rel.constant(datum.pth_root()?)),
        // with p·r ≡ 1 (mod m): x^{pr} = x·a^{(pr-1)/m}, so
        // x^{1/p} = x^r·(a^{-(pr-1)/m})^{1/p}
        ExtensionKind::Kummer => {
            let m = spec.degree as i64;
            let r = (1..m).find(|r| (p * r).mod_floor(&m) == 1).expect("gcd(p, m) = 1");
            let k = (p * r - 1) / m;
            let scale = laurent_inverse(&datum)?.pow(k as u64).pth_root()?;
            rel.monomial(scale, r as usize)
        }
    }
}

fn char_p_root<I: ExpInt>(order: &ExtensionOrder<I>, w: &[RingElement<I>]) -> Result<FrobeniusRoot<I>> {
    let spec = order.spec();
    let work = spec.working_descriptor()?;
    let rel = spec.relation(&work)?;
    let xr = generator_root(order, &work)?;
    let wf = order.to_field(w, &work)?;
    let mut y = rel.zero();
    let mut xr_pow = rel.constant(RingElement::one(&work));
    for c in &wf {
        if !c.is_zero() {
            let term: Poly<I> = xr_pow.iter().map(|z| z.mul(&c.pth_root()?)).collect::<Result<_>>()?;
            y = rel.add(&y, &term)?;
        }
        xr_pow = rel.mul(&xr_pow, &xr)?;
    }
    let root = order.from_field(&y)?;
    let in_order = root.iter().all(RingElement::is_integral);
    Ok(FrobeniusRoot {
        root,
        in_order,
        candidates: 1,
    })
}

/// Whether `y^p ≡ w (mod ϖW)`, evaluated in `L` (characteristic p) or in
/// `W/pW` (mixed).
pub fn verify_root<I: ExpInt>(order: &ExtensionOrder<I>, w: &[RingElement<I>], y: &[RingElement<I>]) -> Result<bool> {
    let spec = order.spec();
    let p = spec.desc.prime() as u64;
    match spec.desc.mode() {
        Mode::CharP => {
            let work = spec.working_descriptor()?;
            let rel = spec.relation(&work)?;
            let yf: Poly<I> = y
                .iter()
                .zip(order.basis_exponents())
                .map(|(c, e)| c.reinterpret(&work)?.shift_laurent(e))
                .collect::<Result<_>>()?;
            let diff = order.from_field(&rel.sub(&rel.pow(&yf, p)?, &order.to_field(w, &work)?)?)?;
            let zero = RingElement::zero(&work);
            Ok(diff.iter().all(|c| c.eq_below(&zero, &Exponent::one())))
        }
        Mode::Mixed => {
            let res = residue_descriptor(&spec.desc)?;
            let yr: Vec<_> = y.iter().map(|c| c.reinterpret(&res)).collect::<Result<_>>()?;
            let lhs = order.pow(&yr, p)?;
            let one = Exponent::one();
            Ok(lhs
                .iter()
                .zip(w)
                .all(|(a, b)| b.reinterpret(&res).is_ok_and(|b| a.eq_below(&b, &one))))
        }
    }
}

/// `V/pV` inside the mixed model.
fn residue_descriptor<I: ExpInt>(desc: &Arc<RingDescriptor<I>>) -> Result<Arc<RingDescriptor<I>>> {
    if desc.precision() < &Exponent::one() {
        return Err(Error::NoRootBelowPrecision(format!(
            "V/pV needs precision at least 1, got {}",
            desc.precision()
        )));
    }
    Ok(Arc::new(desc.with_precision(Exponent::one())?))
}

/// Mixed characteristic, `W/pW` for orders `V[x]/(x^m - a)` with `m <= 2`,
/// `p` odd and `a` a unit: Frobenius is `u_0 + u_1 x ↦ u_0^p + u_1^p a^{(p-1)/2} x`
/// modulo `p`, so the root is found coordinatewise.
fn mixed_root<I: ExpInt>(order: &ExtensionOrder<I>, w: &[RingElement<I>]) -> Result<FrobeniusRoot<I>> {
    let spec = order.spec();
    let p = spec.desc.prime();
    let unit_datum = spec.datum_valuation().is_zero();
    if order.degree() > 2 || (order.degree() == 2 && (p == 2 || !unit_datum)) {
        return Err(Error::ModeUnsupported(format!(
            "mixed Frobenius roots need degree <= 2 with p odd and a unit datum (degree {}, p = {p})",
            order.degree()
        )));
    }
    let res = residue_descriptor(&spec.desc)?;
    let mut root = Vec::with_capacity(order.degree());
    for (k, c) in w.iter().enumerate() {
        let c = c.reinterpret(&res)?;
        let c = if k == 1 {
            let a = spec.datum(&res)?;
            c.mul(&a.invert_unit()?.pow(((p - 1) / 2) as u64))?
        } else {
            c
        };
        root.push(c.pth_root()?);
    }
    let root: Vec<_> = root.iter().map(|c| c.reinterpret(&spec.desc)).collect::<Result<_>>()?;
    if !verify_root(order, w, &root)? {
        return Err(Error::RootSearchExceeded { budget: 1 });
    }
    Ok(FrobeniusRoot {
        root,
        in_order: true,
        candidates: 1,
    })
}

/// `y` with `y^p ≡ w (mod ϖW)`; `w` is given by coordinates on the basis.
pub fn frobenius_root<I: ExpInt>(order: &ExtensionOrder<I>, w: &[RingElement<I>]) -> Result<FrobeniusRoot<I>> {
    if w.len() != order.degree() {
        return Err(Error::InvalidInput(format!(
            "expected {} coordinates, got {}",
            order.degree(),
            w.len()
        )));
    }
    match order.descriptor().mode() {
        Mode::CharP => char_p_root(order, w),
        Mode::Mixed => mixed_root(order, w),
    }
}

/// Random `w ∈ W/ϖW` (characteristic p) or `W/pW` (mixed): coordinates with
/// exponents below `1`.
pub fn random_residue<I: ExpInt>(order: &ExtensionOrder<I>, sampler: &mut Sampler) -> Result<Vec<RingElement<I>>> {
    let desc = order.descriptor();
    let res = Arc::new(desc.with_precision(Exponent::min_of(&Exponent::one(), desc.precision()))?);
    (0..order.degree())
        .map(|_| sampler.element(&res, ElementShape::default()).reinterpret(desc))
        .collect()
}

/// Frobenius surjectivity on `samples` seeded residues (plus `w = 0`).
pub fn frobenius_surjectivity_check<I: ExpInt>(
    order: &ExtensionOrder<I>,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    let desc = order.descriptor();
    let mut found = 0usize;
    let mut outside_order = 0usize;
    let mut failures = Vec::new();
    let zero = vec![RingElement::zero(desc); order.degree()];
    for i in 0..=samples {
        let w = if i == 0 {
            zero.clone()
        } else {
            random_residue(order, &mut Sampler::for_trial(seed, i as u64))?
        };
        let root = frobenius_root(order, &w)?;
        if verify_root(order, &w, &root.root)? {
            found += 1;
            outside_order += usize::from(!root.in_order);
        } else {
            let text: Vec<String> = w.iter().map(|c| c.to_string()).collect();
            failures.push(text);
        }
    }
    let total = samples + 1;
    Ok(Report::new(
        "Frobenius is surjective on W/varpi W",
        format!("{found}/{total}"),
        format!("{total}/{total}"),
        found == total,
        json!({
            "mode": desc.mode().name(),
            "degree": order.degree(),
            "roots_outside_order": outside_order,
            "failures": failures,
            "seed": seed,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::purity_lab::{build_extension, ExtensionSpec};
    use num_bigint::BigInt;

    type E = Exponent<BigInt>;

    #[test]
    fn artin_schreier_roots() {
        let d = Arc::new(RingDescriptor::<BigInt>::char_p(2, E::from_int(4)).unwrap());
        let order = build_extension(&ExtensionSpec::artin_schreier_monomial(&d, E::from_int(-1), 0)).unwrap();
        let r = frobenius_surjectivity_check(&order, 20, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        // y_1 = t^{1/2}x: its square root t^{1/4}(x - t^{-1/2}) leaves the order
        let w = order.unit_vector(&d, 1);
        let root = frobenius_root(&order, &w).unwrap();
        assert!(!root.in_order);
        assert!(verify_root(&order, &w, &root.root).unwrap());
    }

    #[test]
    fn kummer_roots() {
        let d = Arc::new(RingDescriptor::<BigInt>::char_p(3, E::from_int(3)).unwrap());
        let a = RingElement::parse(&d, "1 + 1*t^(1)").unwrap();
        let order = build_extension(&ExtensionSpec::kummer(&d, a, 2)).unwrap();
        assert!(frobenius_surjectivity_check(&order, 20, 3).unwrap().passed());
    }

    #[test]
    fn mixed_roots() {
        let d = Arc::new(RingDescriptor::<BigInt>::mixed(3, E::from_int(2)).unwrap());
        let a = RingElement::parse(&d, "1 + 1*p^(1)").unwrap();
        let order = build_extension(&ExtensionSpec::kummer(&d, a, 2)).unwrap();
        assert!(frobenius_surjectivity_check(&order, 20, 5).unwrap().passed());
        let trivial = build_extension(&ExtensionSpec::trivial(&d)).unwrap();
        assert!(frobenius_surjectivity_check(&trivial, 10, 5).unwrap().passed());

        let d2 = Arc::new(RingDescriptor::<BigInt>::mixed(2, E::from_int(2)).unwrap());
        let a2 = RingElement::parse(&d2, "1 + 1*p^(1)").unwrap();
        let order2 = build_extension(&ExtensionSpec::kummer(&d2, a2, 2)).unwrap();
        let w = order2.unit_vector(&d2, 1);
        assert!(matches!(frobenius_root(&order2, &w), Err(Error::ModeUnsupported(_))));
    }
}
