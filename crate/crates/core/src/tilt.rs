//! Finite-depth tilts of the mixed model: `V♭ = lim_{x ↦ x^p} V/pV`.

use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring_core::rng::{ElementShape, Sampler};
use crate::ring_core::{Exponent, Mode, RingDescriptor, RingElement, ValResult};
use crate::scalar::ExpInt;

/// A compatible sequence `(x_0, …, x_d)` in V/pV with `x_{i+1}^p = x_i`.
///
/// `x_0` is the residue of the element; `x_d` carries the most information.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TiltElement<I: ExpInt> {
    desc: Arc<RingDescriptor<I>>,
    components: Vec<RingElement<I>>,
}

/// Valuation of a tilt element: exact, or a lower bound when every known
/// component vanishes.
pub type FlatValuation<I> = ValResult<I>;

fn require_mixed<I: ExpInt>(desc: &RingDescriptor<I>) -> Result<()> {
    if desc.mode() != Mode::Mixed {
        return Err(Error::ModeUnsupported(
            "tilts are taken of the mixed-characteristic model".into(),
        ));
    }
    Ok(())
}

impl<I: ExpInt> TiltElement<I> {
    /// Validates a component list, reducing every entry mod p.
    pub fn new(desc: &Arc<RingDescriptor<I>>, components: Vec<RingElement<I>>) -> Result<Self> {
        require_mixed(desc)?;
        if components.is_empty() {
            return Err(Error::InvalidInput("a tilt needs at least one component".into()));
        }
        let cap = desc.frobenius_cap();
        let mut reduced = Vec::with_capacity(components.len());
        for c in components {
            if c.descriptor() != desc {
                return Err(Error::DescriptorMismatch);
            }
            reduced.push(c.truncate(&cap));
        }
        for i in 0..reduced.len() - 1 {
            if !reduced[i + 1].frobenius().eq_below(&reduced[i], &cap) {
                return Err(Error::CompatibilityViolation(i));
            }
        }
        Ok(TiltElement {
            desc: desc.clone(),
            components: reduced,
        })
    }

    /// Parses `x_0; x_1; …; x_d`.
    pub fn parse(desc: &Arc<RingDescriptor<I>>, text: &str) -> Result<Self> {
        let comps = text
            .split(';')
            .map(|s| RingElement::parse(desc, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(desc, comps)
    }

    /// `ϖ♭ = (ϖ, ϖ^{1/p}, …, ϖ^{1/p^d})` with `ϖ = p^{1/p}`.
    pub fn varpi_flat(desc: &Arc<RingDescriptor<I>>, depth: usize) -> Result<Self> {
        require_mixed(desc)?;
        let p = desc.prime();
        let comps = (0..=depth)
            .map(|i| RingElement::monomial(desc, 1, Exponent::inv_p_pow(p, i as u32 + 1)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(desc, comps)
    }

    pub fn one(desc: &Arc<RingDescriptor<I>>, depth: usize) -> Result<Self> {
        Self::new(desc, vec![RingElement::one(desc); depth + 1])
    }

    pub fn zero(desc: &Arc<RingDescriptor<I>>, depth: usize) -> Result<Self> {
        Self::new(desc, vec![RingElement::zero(desc); depth + 1])
    }

    /// The compatible sequence ending in `top`: `x_i = top^{p^{d-i}}`.
    pub fn from_top(desc: &Arc<RingDescriptor<I>>, top: RingElement<I>, depth: usize) -> Result<Self> {
        require_mixed(desc)?;
        let mut comps = vec![top.truncate(&desc.frobenius_cap())];
        for _ in 0..depth {
            let next = comps.last().expect("nonempty").frobenius();
            comps.push(next);
        }
        comps.reverse();
        Self::new(desc, comps)
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor<I>> {
        &self.desc
    }

    pub fn depth(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[RingElement<I>] {
        &self.components
    }

    /// The first `depth + 1` components.
    pub fn truncate_depth(&self, depth: usize) -> Result<Self> {
        if depth > self.depth() {
            return Err(Error::InvalidInput(format!(
                "depth {depth} exceeds available depth {}",
                self.depth()
            )));
        }
        Ok(TiltElement {
            desc: self.desc.clone(),
            components: self.components[..=depth].to_vec(),
        })
    }

    fn check_pair(&self, other: &Self) -> Result<()> {
        if self.desc != other.desc {
            return Err(Error::DescriptorMismatch);
        }
        if self.depth() != other.depth() {
            return Err(Error::InvalidInput("tilt depths differ".into()));
        }
        Ok(())
    }

    /// Componentwise product (Frobenius is multiplicative).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        let cap = self.desc.frobenius_cap();
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.mul_capped(b, &cap))
            .collect();
        Ok(TiltElement {
            desc: self.desc.clone(),
            components,
        })
    }

    /// Componentwise sum in V/pV, where Frobenius is additive.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(TiltElement {
            desc: self.desc.clone(),
            components,
        })
    }

    /// Residue projection onto `x_0 ∈ V/pV`.
    pub fn pr(&self) -> &RingElement<I> {
        &self.components[0]
    }

    /// `lift(x_d)^{p^d}` in V, the depth-d approximation of `x^♯`; correct
    /// modulo `p^{d+1}`.
    pub fn sharp(&self) -> RingElement<I> {
        let cap = self.sharp_cap();
        let mut acc = self.components[self.depth()].truncate(&cap);
        for _ in 0..self.depth() {
            let base = acc.clone();
            for _ in 1..self.desc.prime() {
                acc = acc.mul_capped(&base, &cap);
            }
        }
        acc
    }

    /// Cap below which [`Self::sharp`] is determined by the tilt.
    pub fn sharp_cap(&self) -> Exponent<I> {
        Exponent::min_of(
            self.desc.precision(),
            &Exponent::from_int(self.depth() as i64 + 1),
        )
    }

    /// `p^n · v(x_n)` once two consecutive depths agree.
    pub fn val_flat(&self) -> FlatValuation<I> {
        let p = self.desc.prime() as i64;
        let values: Vec<Option<Exponent<I>>> = self
            .components
            .iter()
            .enumerate()
            .map(|(n, x)| x.valuation().exact().map(|v| v.scale(p.pow(n as u32))))
            .collect();
        if values.len() == 1 {
            if let Some(v) = &values[0] {
                return ValResult::Exact(v.clone());
            }
        }
        for w in values.windows(2) {
            if let (Some(a), Some(b)) = (&w[0], &w[1]) {
                if a == b {
                    return ValResult::Exact(a.clone());
                }
            }
        }
        let d = self.depth() as u32;
        ValResult::BelowPrecision(self.desc.frobenius_cap().scale(p.pow(d)))
    }

    /// Random compatible sequence: the p-power roots of a random residue
    /// plus random noise in the top component.
    pub fn random(
        desc: &Arc<RingDescriptor<I>>,
        depth: usize,
        sampler: &mut Sampler,
    ) -> Result<Self> {
        require_mixed(desc)?;
        let residue_desc = Arc::new(desc.with_precision(desc.frobenius_cap())?);
        let shape = ElementShape {
            max_terms: 3,
            max_depth: 2,
        };
        let y = sampler.element(&residue_desc, shape).reinterpret(desc)?;
        let mut top = y;
        for _ in 0..depth {
            top = top.pth_root()?;
        }
        if sampler.coin() {
            let noise_shape = ElementShape {
                max_terms: 2,
                max_depth: depth as u32 + 2,
            };
            let noise = sampler
                .element(&residue_desc, noise_shape)
                .reinterpret(desc)?;
            top = top.add(&noise)?;
        }
        Self::from_top(desc, top, depth)
    }
}

impl<I: ExpInt> std::fmt::Display for TiltElement<I> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Whether `pr(x) ∈ ϖ·(V/pV)`.
fn residue_in_varpi<I: ExpInt>(x: &TiltElement<I>) -> bool {
    let varpi = x.desc.varpi_valuation();
    x.pr().valuation().cmp_inf(&ValResult::Exact(varpi)) != std::cmp::Ordering::Less
}

/// Per-sample check that `pr: V♭ → V/pV` is a ring map whose composite with
/// `V/pV → V/ϖV` has kernel `ϖ♭V♭`.
pub fn residue_iso_check<I: ExpInt>(
    desc: &Arc<RingDescriptor<I>>,
    depth: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<Report>> {
    let cap = desc.frobenius_cap();
    let varpi = desc.varpi_valuation();
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let mut s = Sampler::for_trial(seed, i as u64);
        let x = TiltElement::random(desc, depth, &mut s)?;
        let y = TiltElement::random(desc, depth, &mut s)?;
        let mult = x
            .mul(&y)?
            .pr()
            .eq_below(&x.pr().mul_capped(y.pr(), &cap), &cap);
        let add = x.add(&y)?.pr().eq_below(&x.pr().add(y.pr())?, &cap);
        let in_kernel = residue_in_varpi(&x);
        let flat = x.val_flat();
        let flat_large = flat.cmp_inf(&ValResult::Exact(varpi.clone())) != std::cmp::Ordering::Less;
        let kernel = in_kernel == flat_large;
        out.push(Report::new(
            "pr is multiplicative and additive, and pr(x) = 0 mod ϖ iff val_flat(x) >= v(ϖ)",
            format!("pr(x) = {}", x.pr()),
            format!("val_flat(x) = {flat}"),
            mult && add && kernel,
            json!({
                "sample": i,
                "x": x.to_string(),
                "y": y.to_string(),
                "multiplicative": mult,
                "additive": add,
                "kernel_classification": kernel,
            }),
        ));
    }
    Ok(out)
}

/// `(xy)^♯ ≡ x^♯ y^♯` modulo `p^{min(N, d+1)}` on seeded pairs.
pub fn sharp_multiplicativity_check<I: ExpInt>(
    desc: &Arc<RingDescriptor<I>>,
    depth: usize,
    pairs: usize,
    seed: u64,
) -> Result<Vec<Report>> {
    let mut out = Vec::with_capacity(pairs);
    for i in 0..pairs {
        let mut s = Sampler::for_trial(seed, i as u64);
        let x = TiltElement::random(desc, depth, &mut s)?;
        let y = TiltElement::random(desc, depth, &mut s)?;
        let cap = x.sharp_cap();
        let lhs = x.mul(&y)?.sharp();
        let rhs = x.sharp().mul(&y.sharp())?;
        out.push(Report::new(
            "(xy)^sharp = x^sharp y^sharp below precision",
            lhs.truncate(&cap),
            rhs.truncate(&cap),
            lhs.eq_below(&rhs, &cap),
            json!({ "sample": i, "depth": depth, "cap": cap.to_string() }),
        ));
    }
    Ok(out)
}

/// `val_flat(ϖ♭) = v(ϖ)` at each depth.
pub fn varpi_flat_check<I: ExpInt>(desc: &Arc<RingDescriptor<I>>, depths: &[usize]) -> Result<Vec<Report>> {
    let expected = ValResult::Exact(desc.varpi_valuation());
    depths
        .iter()
        .map(|&d| {
            let v = TiltElement::varpi_flat(desc, d)?.val_flat();
            Ok(Report::new(
                "val_flat(varpi_flat) = 1/p",
                &v,
                &expected,
                v == expected,
                json!({ "depth": d }),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn mixed(p: u32, n: i64) -> Arc<RingDescriptor<BigInt>> {
        Arc::new(RingDescriptor::mixed(p, Exponent::from_int(n)).unwrap())
    }

    #[test]
    fn make_tilt_examples() {
        let d = mixed(2, 4);
        let comps: Vec<_> = ["1*p^(1/2)", "1*p^(1/4)", "1*p^(1/8)"]
            .iter()
            .map(|s| RingElement::parse(&d, s).unwrap())
            .collect();
        let t = TiltElement::new(&d, comps).unwrap();
        assert_eq!(t, TiltElement::varpi_flat(&d, 2).unwrap());

        assert!(TiltElement::one(&d, 2).is_ok());
        let bad = vec![
            RingElement::parse(&d, "1*p^(1/2)").unwrap(),
            RingElement::one(&d),
        ];
        assert_eq!(TiltElement::new(&d, bad), Err(Error::CompatibilityViolation(0)));
    }

    #[test]
    fn varpi_flat_prefix_and_valuation() {
        let d = mixed(2, 4);
        let t1 = TiltElement::varpi_flat(&d, 1).unwrap();
        assert_eq!(t1.to_string(), "1*p^(1/2); 1*p^(1/4)");
        let t3 = TiltElement::varpi_flat(&d, 3).unwrap();
        assert_eq!(t3.truncate_depth(1).unwrap(), t1);
        for depth in 1..=5 {
            let t = TiltElement::varpi_flat(&d, depth).unwrap();
            assert_eq!(t.val_flat(), ValResult::Exact(Exponent::frac(1, 2)));
        }
    }

    #[test]
    fn sharp_examples() {
        let d = mixed(3, 4);
        for depth in 1..=3 {
            let t = TiltElement::varpi_flat(&d, depth).unwrap();
            assert_eq!(t.sharp().to_string(), "1*p^(1/3)");
        }
        assert!(TiltElement::one(&d, 2).unwrap().sharp().is_one());
        assert!(TiltElement::zero(&d, 2).unwrap().sharp().is_zero());
    }

    #[test]
    fn val_flat_edge_cases() {
        let d = mixed(2, 4);
        let one = TiltElement::one(&d, 2).unwrap();
        assert_eq!(one.val_flat(), ValResult::Exact(Exponent::zero()));
        assert!(!TiltElement::zero(&d, 2).unwrap().val_flat().is_exact());
    }

    #[test]
    fn kernel_examples() {
        let d = mixed(2, 4);
        assert!(residue_in_varpi(&TiltElement::varpi_flat(&d, 2).unwrap()));
        assert!(!residue_in_varpi(&TiltElement::one(&d, 2).unwrap()));
    }

    #[test]
    fn residue_check_batch() {
        let d = mixed(2, 4);
        let reports = residue_iso_check(&d, 3, 100, 7).unwrap();
        assert!(crate::report::all_pass(&reports));
    }

    #[test]
    fn sharp_batch() {
        for p in [2, 3] {
            let d = Arc::new(RingDescriptor::<BigInt>::mixed(p, Exponent::from_int(4)).unwrap());
            for depth in 1..=3 {
                let reports = sharp_multiplicativity_check(&d, depth, 30, 11).unwrap();
                assert!(crate::report::all_pass(&reports), "p = {p}, depth = {depth}");
            }
            assert!(crate::report::all_pass(&varpi_flat_check(&d, &[1, 2, 3, 4, 5]).unwrap()));
        }
    }

    #[test]
    fn rejects_char_p() {
        let d = Arc::new(RingDescriptor::<BigInt>::char_p(2, Exponent::from_int(2)).unwrap());
        assert!(matches!(
            TiltElement::varpi_flat(&d, 1),
            Err(Error::ModeUnsupported(_))
        ));
    }
}
