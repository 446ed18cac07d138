use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::ring_core::{Exponent, Mode, RingDescriptor, ValResult};
use crate::scalar::ExpInt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Exactness {
    /// The stored terms are the complete element.
    Exact,
    /// Terms at or above the precision cap were discarded somewhere upstream.
    ExactBelowPrecision,
}

impl Exactness {
    fn join(self, other: Exactness) -> Exactness {
        if self == Exactness::Exact && other == Exactness::Exact {
            Exactness::Exact
        } else {
            Exactness::ExactBelowPrecision
        }
    }

    fn from_flag(truncated: bool) -> Exactness {
        if truncated {
            Exactness::ExactBelowPrecision
        } else {
            Exactness::Exact
        }
    }
}

/// A truncated generalized power series `Σ c_e X^e` in one of the two model
/// rings, `X = t` (characteristic p) or `X = p` (mixed characteristic).
///
/// Canonical form: exponents strictly increasing and below the precision cap,
/// coefficients in `1..p`. In mixed mode the coefficients are base-p digits,
/// so `p · X^e` carries into `X^{e+1}`.
///
/// Equality compares descriptor and terms only, i.e. equality below
/// precision; the exactness flag is informational.
#[derive(Clone)]
pub struct RingElement<I: ExpInt> {
    desc: Arc<RingDescriptor<I>>,
    terms: Vec<(Exponent<I>, u32)>,
    exactness: Exactness,
}

impl<I: ExpInt> PartialEq for RingElement<I> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.desc, &other.desc) || self.desc == other.desc)
            && self.terms == other.terms
    }
}

impl<I: ExpInt> Eq for RingElement<I> {}

impl<I: ExpInt> std::fmt::Debug for RingElement<I> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")?;
        if self.exactness == Exactness::ExactBelowPrecision {
            write!(f, " (mod N)")?;
        }
        Ok(())
    }
}

type Acc<I> = BTreeMap<Exponent<I>, u64>;

impl<I: ExpInt> RingElement<I> {
    pub fn zero(desc: &Arc<RingDescriptor<I>>) -> Self {
        RingElement {
            desc: desc.clone(),
            terms: Vec::new(),
            exactness: Exactness::Exact,
        }
    }

    pub fn one(desc: &Arc<RingDescriptor<I>>) -> Self {
        Self::from_int(desc, 1)
    }

    /// The integer `n` as an element (base-p digits in mixed mode).
    pub fn from_int(desc: &Arc<RingDescriptor<I>>, n: i64) -> Self {
        let mut acc = Acc::new();
        acc.insert(Exponent::zero(), n.unsigned_abs());
        let x = Self::build(desc, acc, desc.precision(), false);
        if n < 0 {
            x.neg()
        } else {
            x
        }
    }

    /// `c · X^e` for `e >= 0`.
    pub fn monomial(desc: &Arc<RingDescriptor<I>>, coeff: u64, e: Exponent<I>) -> Result<Self> {
        if e.is_negative() {
            return Err(Error::BadExponent(e.to_string()));
        }
        Self::laurent_monomial(desc, coeff, e)
    }

    /// `c · X^e` allowing a negative exponent (an element of the fraction
    /// field). Used by the extension arithmetic; ring-level entry points never
    /// produce these.
    pub(crate) fn laurent_monomial(
        desc: &Arc<RingDescriptor<I>>,
        coeff: u64,
        e: Exponent<I>,
    ) -> Result<Self> {
        desc.check_exponent(&e)?;
        let mut acc = Acc::new();
        acc.insert(e, coeff);
        Ok(Self::build(desc, acc, desc.precision(), false))
    }

    /// Builds an element from arbitrary `(exponent, coefficient)` pairs,
    /// reducing coefficients (and carrying, in mixed mode).
    pub fn from_terms(
        desc: &Arc<RingDescriptor<I>>,
        terms: impl IntoIterator<Item = (Exponent<I>, u64)>,
    ) -> Result<Self> {
        let mut acc = Acc::new();
        for (e, c) in terms {
            if e.is_negative() {
                return Err(Error::BadExponent(e.to_string()));
            }
            desc.check_exponent(&e)?;
            let slot = acc.entry(e).or_insert(0);
            *slot = slot
                .checked_add(c)
                .ok_or_else(|| Error::CoefficientOutOfRange(c.to_string()))?;
        }
        Ok(Self::build(desc, acc, desc.precision(), false))
    }

    /// [`Self::build`] for strictly increasing exponents; characteristic p
    /// needs no map since nothing carries.
    fn build_sorted(
        desc: &Arc<RingDescriptor<I>>,
        sorted: Vec<(Exponent<I>, u64)>,
        cap: &Exponent<I>,
        mut truncated: bool,
    ) -> Self {
        if desc.mode() == Mode::Mixed {
            return Self::build(desc, sorted.into_iter().collect(), cap, truncated);
        }
        let p = desc.prime() as u64;
        let mut terms = Vec::with_capacity(sorted.len());
        for (e, c) in sorted {
            let c = c % p;
            if c == 0 {
                continue;
            }
            if &e >= cap {
                truncated = true;
                break;
            }
            terms.push((e, c as u32));
        }
        RingElement {
            desc: desc.clone(),
            terms,
            exactness: Exactness::from_flag(truncated),
        }
    }

    pub(crate) fn build(
        desc: &Arc<RingDescriptor<I>>,
        mut acc: Acc<I>,
        cap: &Exponent<I>,
        mut truncated: bool,
    ) -> Self {
        let p = desc.prime() as u64;
        let mut terms = Vec::new();
        match desc.mode() {
            Mode::CharP => {
                for (e, c) in acc {
                    let c = c % p;
                    if c == 0 {
                        continue;
                    }
                    if &e >= cap {
                        truncated = true;
                        break;
                    }
                    terms.push((e, c as u32));
                }
            }
            Mode::Mixed => {
                while let Some((e, c)) = acc.pop_first() {
                    if c == 0 {
                        continue;
                    }
                    if &e >= cap {
                        truncated = true;
                        break;
                    }
                    let digit = c % p;
                    let carry = c / p;
                    if carry > 0 {
                        *acc.entry(&e + &Exponent::one()).or_insert(0) += carry;
                    }
                    if digit != 0 {
                        terms.push((e, digit as u32));
                    }
                }
            }
        }
        RingElement {
            desc: desc.clone(),
            terms,
            exactness: Exactness::from_flag(truncated),
        }
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor<I>> {
        &self.desc
    }

    pub fn terms(&self) -> &[(Exponent<I>, u32)] {
        &self.terms
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    pub(crate) fn mark_truncated(mut self) -> Self {
        self.exactness = Exactness::ExactBelowPrecision;
        self
    }

    pub(crate) fn with_exactness_of(mut self, other: &Self) -> Self {
        self.exactness = self.exactness.join(other.exactness);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether every exponent is nonnegative (the element lies in V).
    pub fn is_integral(&self) -> bool {
        self.terms.first().is_none_or(|(e, _)| !e.is_negative())
    }

    pub fn prime(&self) -> u32 {
        self.desc.prime()
    }

    pub fn mode(&self) -> Mode {
        self.desc.mode()
    }

    pub fn precision(&self) -> &Exponent<I> {
        self.desc.precision()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.desc, &other.desc) || self.desc == other.desc {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn valuation(&self) -> ValResult<I> {
        match self.terms.first() {
            Some((e, _)) => ValResult::Exact(e.clone()),
            None => ValResult::BelowPrecision(self.desc.precision().clone()),
        }
    }

    /// Coefficient of `X^e` (0 when absent).
    pub fn coefficient(&self, e: &Exponent<I>) -> u32 {
        self.terms
            .binary_search_by(|(f, _)| f.cmp(e))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        // both term lists are sorted: merge
        let (a, b) = (&self.terms, &other.terms);
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    merged.push((a[i].0.clone(), a[i].1 as u64));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push((b[j].0.clone(), b[j].1 as u64));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    merged.push((a[i].0.clone(), a[i].1 as u64 + b[j].1 as u64));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self::build_sorted(&self.desc, merged, self.desc.precision(), false)
            .with_exactness_of(self)
            .with_exactness_of(other))
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prime();
        match self.mode() {
            Mode::CharP => RingElement {
                desc: self.desc.clone(),
                terms: self
                    .terms
                    .iter()
                    .map(|(e, c)| (e.clone(), (p - c) % p))
                    .filter(|(_, c)| *c != 0)
                    .collect(),
                exactness: self.exactness,
            },
            Mode::Mixed => {
                // -x = (-1)·x with -1 = Σ (p-1) p^j, expanded far enough that
                // the dropped tail times x lies above the cap.
                let v = self.terms[0].0.clone();
                let cap = self.desc.precision();
                let needed = cap - &v;
                let top = needed.ceil().to_i64().expect("precision too large");
                let minus_one: Vec<(Exponent<I>, u32)> = (0..top.max(0))
                    .map(|j| (Exponent::from_int(j), p - 1))
                    .collect();
                let acc = mul_acc(&minus_one, &self.terms, cap, &mut false);
                Self::build_sorted(&self.desc, acc, cap, true)
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_capped(other, self.desc.precision()))
    }

    pub(crate) fn mul_capped(&self, other: &Self, cap: &Exponent<I>) -> Self {
        let mut truncated = false;
        let acc = mul_acc(&self.terms, &other.terms, cap, &mut truncated);
        Self::build_sorted(&self.desc, acc, cap, truncated)
            .with_exactness_of(self)
            .with_exactness_of(other)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.desc);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_capped(&base, self.desc.precision());
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_capped(&base, self.desc.precision());
            }
        }
        acc
    }

    /// Multiplication by the monomial `X^by`. Exact in both modes (no
    /// carries occur). Fails if the result would leave V.
    pub fn shift(&self, by: &Exponent<I>) -> Result<Self> {
        let out = self.shift_laurent(by)?;
        if !out.is_integral() {
            return Err(Error::NotDivisible {
                numerator: self.valuation().to_string(),
                denominator: (-by.clone()).to_string(),
            });
        }
        Ok(out)
    }

    pub(crate) fn shift_laurent(&self, by: &Exponent<I>) -> Result<Self> {
        self.desc.check_exponent(by)?;
        let cap = self.desc.precision();
        let mut truncated = self.exactness == Exactness::ExactBelowPrecision;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let f = e + by;
            if &f >= cap {
                truncated = true;
                break;
            }
            terms.push((f, *c));
        }
        // Shifting down exposes the unknown band [N - |by|, N) of a
        // truncated input.
        if self.exactness == Exactness::ExactBelowPrecision && by.is_negative() {
            let limit = cap + by;
            terms.retain(|(e, _)| e < &limit);
        }
        Ok(RingElement {
            desc: self.desc.clone(),
            terms,
            exactness: Exactness::from_flag(truncated),
        })
    }

    /// Image in the quotient by `{v >= cap}`.
    pub fn truncate(&self, cap: &Exponent<I>) -> Self {
        let terms: Vec<_> = self
            .terms
            .iter()
            .take_while(|(e, _)| e < cap)
            .cloned()
            .collect();
        let dropped = terms.len() < self.terms.len();
        RingElement {
            desc: self.desc.clone(),
            terms,
            exactness: self.exactness.join(Exactness::from_flag(dropped)),
        }
    }

    /// Whether `self ≡ other` modulo `{v >= cap}`.
    pub fn eq_below(&self, other: &Self, cap: &Exponent<I>) -> bool {
        let a = self.terms.iter().take_while(|(e, _)| e < cap);
        let b = other.terms.iter().take_while(|(e, _)| e < cap);
        a.eq(b)
    }

    /// Moves the element to another precision of the same model ring.
    pub fn reinterpret(&self, desc: &Arc<RingDescriptor<I>>) -> Result<Self> {
        if desc.mode() != self.mode() || desc.prime() != self.prime() {
            return Err(Error::DescriptorMismatch);
        }
        let mut out = self.truncate(desc.precision());
        out.desc = desc.clone();
        Ok(out)
    }

    pub fn invert_unit(&self) -> Result<Self> {
        match self.terms.first() {
            Some((e, _)) if e.is_zero() => {}
            _ => return Err(Error::NotAUnit),
        }
        let p = self.prime() as u64;
        let c0 = self.terms[0].1 as u64;
        let d = (1..p).find(|d| (c0 * d) % p == 1).expect("F_p is a field");
        let one = Self::one(&self.desc);
        let mut z = Self::monomial(&self.desc, d, Exponent::zero())?;
        // Newton: the error 1 - xz squares at every step.
        for _ in 0..128 {
            let err = one.sub(&self.mul(&z)?)?;
            if err.is_zero() {
                let truncated = !self.is_exact() || !err.is_exact() || !z.is_exact();
                return Ok(if truncated { z.mark_truncated() } else { z });
            }
            z = z.add(&z.mul(&err)?)?;
        }
        Err(Error::PrecisionExhausted(
            "unit inversion did not converge".into(),
        ))
    }

    /// `x / y` in V, legal exactly when `v(x) >= v(y)`.
    pub fn divide(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let vy = match other.valuation() {
            ValResult::Exact(v) => v,
            ValResult::BelowPrecision(_) => {
                return Err(Error::PrecisionExhausted(
                    "divisor vanishes below precision".into(),
                ))
            }
        };
        let vx = match self.valuation() {
            ValResult::Exact(v) => v,
            ValResult::BelowPrecision(_) => return Ok(self.clone()),
        };
        if vx < vy {
            return Err(Error::NotDivisible {
                numerator: vx.to_string(),
                denominator: vy.to_string(),
            });
        }
        let minus = -vy.clone();
        let unit = other.shift_laurent(&minus)?;
        let num = self.shift_laurent(&minus)?;
        let inv = unit.invert_unit()?;
        let q = num.mul(&inv)?;
        // With exact inputs the inverse is correct modulo N, hence so is q.
        if (self.is_exact() && other.is_exact()) || vy.is_zero() {
            return Ok(q);
        }
        let cap = self.desc.precision() - &vy;
        Ok(q.truncate(&cap).mark_truncated())
    }

    /// `x ↦ x^p`. In mixed mode the result is taken in V/pV.
    pub fn frobenius(&self) -> Self {
        let p = self.prime();
        match self.mode() {
            Mode::CharP => {
                let cap = self.desc.precision();
                let mut truncated = !self.is_exact();
                let mut terms = Vec::with_capacity(self.terms.len());
                for (e, c) in &self.terms {
                    let f = e.scale(p as i64);
                    if &f >= cap {
                        truncated = true;
                        break;
                    }
                    terms.push((f, *c));
                }
                RingElement {
                    desc: self.desc.clone(),
                    terms,
                    exactness: Exactness::from_flag(truncated),
                }
            }
            Mode::Mixed => {
                let cap = self.desc.frobenius_cap();
                let base = self.truncate(&cap);
                let mut acc = Self::one(&self.desc);
                for _ in 0..p {
                    acc = acc.mul_capped(&base, &cap);
                }
                acc
            }
        }
    }

    /// `x ↦ x^{1/p}`: exact in characteristic p; in mixed mode defined on
    /// V/pV with the root returned as the canonical representative mod ϖ.
    pub fn pth_root(&self) -> Result<Self> {
        let p = self.prime() as i64;
        match self.mode() {
            Mode::CharP => Ok(RingElement {
                desc: self.desc.clone(),
                terms: self.terms.iter().map(|(e, c)| (e.div_int(p), *c)).collect(),
                exactness: self.exactness,
            }),
            Mode::Mixed => {
                if self.desc.precision() < &Exponent::one() {
                    return Err(Error::NoRootBelowPrecision(format!(
                        "V/pV is not fully represented at precision {}",
                        self.desc.precision()
                    )));
                }
                let one = Exponent::one();
                Ok(RingElement {
                    desc: self.desc.clone(),
                    terms: self
                        .terms
                        .iter()
                        .take_while(|(e, _)| e < &one)
                        .map(|(e, c)| (e.div_int(p), *c))
                        .collect(),
                    exactness: self.exactness,
                })
            }
        }
    }

    /// Transports a mixed element of V/pV to the characteristic-p model via
    /// `p^e ↦ t^e` (an isomorphism V/pV ≅ F_p[t^{1/p^∞}]/(t)).
    pub fn residue_to_char_p(&self, target: &Arc<RingDescriptor<I>>) -> Result<Self> {
        if self.mode() != Mode::Mixed
            || target.mode() != Mode::CharP
            || target.prime() != self.prime()
        {
            return Err(Error::DescriptorMismatch);
        }
        let one = Exponent::one();
        let cap = Exponent::min_of(&one, target.precision());
        let terms: Vec<_> = self
            .terms
            .iter()
            .take_while(|(e, _)| e < &cap)
            .cloned()
            .collect();
        Ok(RingElement {
            desc: target.clone(),
            terms,
            exactness: self.exactness,
        })
    }

    /// Lowest-order coefficient and exponent.
    pub fn leading_term(&self) -> Option<&(Exponent<I>, u32)> {
        self.terms.first()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }
}

fn mul_acc<I: ExpInt>(
    a: &[(Exponent<I>, u32)],
    b: &[(Exponent<I>, u32)],
    cap: &Exponent<I>,
    truncated: &mut bool,
) -> Vec<(Exponent<I>, u64)> {
    if let Some(acc) = mul_acc_dense(a, b, cap, truncated) {
        return acc;
    }
    let mut acc = Acc::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e = e1 + e2;
            if &e >= cap {
                // b is sorted: everything further along is also above the cap
                *truncated = true;
                break;
            }
            *acc.entry(e).or_insert(0) += (*c1 as u64) * (*c2 as u64);
        }
    }
    acc.into_iter().collect()
}

/// Schoolbook product on the common grid `(1/L)Z`, accumulated in a dense
/// array. `None` when the scaled exponents leave `i64` or the band below the
/// cap is too wide; the caller then falls back to rational keys.
fn mul_acc_dense<I: ExpInt>(
    a: &[(Exponent<I>, u32)],
    b: &[(Exponent<I>, u32)],
    cap: &Exponent<I>,
    truncated: &mut bool,
) -> Option<Vec<(Exponent<I>, u64)>> {
    use num_integer::Integer;
    const MAX_BAND: i64 = 1 << 20;
    if a.is_empty() || b.is_empty() {
        return Some(Vec::new());
    }
    let mut l: i64 = cap.denom().to_i64()?;
    for (e, _) in a.iter().chain(b) {
        l = l.lcm(&e.denom().to_i64()?);
        if l > MAX_BAND {
            return None;
        }
    }
    let scale = |e: &Exponent<I>| -> Option<i64> {
        e.numer().to_i64()?.checked_mul(l / e.denom().to_i64()?)
    };
    let sa: Vec<(i64, u64)> = a.iter().map(|(e, c)| Some((scale(e)?, *c as u64))).collect::<Option<_>>()?;
    let sb: Vec<(i64, u64)> = b.iter().map(|(e, c)| Some((scale(e)?, *c as u64))).collect::<Option<_>>()?;
    let top = scale(cap)?;
    let lo = sa[0].0.checked_add(sb[0].0)?;
    let band = top.checked_sub(lo)?;
    if band > MAX_BAND {
        return None;
    }
    let mut dense = vec![0u64; band.max(0) as usize];
    for &(k1, c1) in &sa {
        for &(k2, c2) in &sb {
            let k = k1 + k2;
            if k >= top {
                *truncated = true;
                break;
            }
            dense[(k - lo) as usize] += c1 * c2;
        }
    }
    let mut acc = Vec::new();
    for (i, c) in dense.into_iter().enumerate() {
        if c != 0 {
            let k = lo + i as i64;
            let g = k.gcd(&l);
            let r = num_rational::Ratio::new_raw(I::from_i64(k / g)?, I::from_i64(l / g)?);
            acc.push((Exponent::from_ratio(r), c));
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type E = Exponent<BigInt>;
    type R = RingElement<BigInt>;

    fn desc(mode: Mode, p: u32, n: i64) -> Arc<RingDescriptor<BigInt>> {
        Arc::new(RingDescriptor::new(mode, p, E::from_int(n)).unwrap())
    }

    fn mono(d: &Arc<RingDescriptor<BigInt>>, c: u64, n: i64, den: i64) -> R {
        R::monomial(d, c, E::frac(n, den)).unwrap()
    }

    #[test]
    fn char_p_addition_reduces_mod_p() {
        let d = desc(Mode::CharP, 2, 4);
        let x = mono(&d, 1, 1, 2).add(&mono(&d, 1, 1, 1)).unwrap();
        let y = x.add(&mono(&d, 1, 1, 2)).unwrap();
        assert_eq!(y, mono(&d, 1, 1, 1));
    }

    #[test]
    fn mixed_carry() {
        let d = desc(Mode::Mixed, 2, 4);
        let two = R::one(&d).add(&R::one(&d)).unwrap();
        assert_eq!(two, mono(&d, 1, 1, 1));
        assert!(two.is_exact());
    }

    #[test]
    fn mixed_negation_of_one() {
        let d = desc(Mode::Mixed, 3, 2);
        let m = R::one(&d).neg();
        assert_eq!(m.terms(), &[(E::from_int(0), 2), (E::from_int(1), 2)]);
        assert_eq!(m.exactness(), Exactness::ExactBelowPrecision);
        assert!(m.add(&R::one(&d)).unwrap().is_zero());
    }

    #[test]
    fn mul_examples() {
        let d = desc(Mode::Mixed, 2, 4);
        let x = R::one(&d).add(&mono(&d, 1, 1, 2)).unwrap();
        let sq = x.mul(&x).unwrap();
        assert_eq!(
            sq.terms(),
            &[(E::from_int(0), 1), (E::from_int(1), 1), (E::frac(3, 2), 1)]
        );
        let c = desc(Mode::CharP, 2, 4);
        let h = mono(&c, 1, 1, 2);
        assert_eq!(h.mul(&h).unwrap(), mono(&c, 1, 1, 1));
        assert!(h.mul(&R::zero(&c)).unwrap().is_zero());
    }

    #[test]
    fn valuation_examples() {
        let d = desc(Mode::CharP, 2, 4);
        let x = mono(&d, 1, 1, 4).add(&mono(&d, 1, 2, 1)).unwrap();
        assert_eq!(x.valuation(), ValResult::Exact(E::frac(1, 4)));
        assert_eq!(R::zero(&d).valuation(), ValResult::BelowPrecision(E::from_int(4)));
    }

    #[test]
    fn unit_inverse_and_division() {
        let d = desc(Mode::CharP, 2, 2);
        let x = R::one(&d).add(&mono(&d, 1, 1, 1)).unwrap();
        let inv = x.invert_unit().unwrap();
        assert!(x.mul(&inv).unwrap().is_one());
        assert_eq!(inv.exactness(), Exactness::ExactBelowPrecision);

        let t = mono(&d, 1, 1, 1);
        let h = mono(&d, 1, 1, 2);
        assert_eq!(t.divide(&h).unwrap(), h);
        assert!(matches!(h.divide(&t), Err(Error::NotDivisible { .. })));
        assert!(matches!(t.invert_unit(), Err(Error::NotAUnit)));
    }

    #[test]
    fn mixed_unit_inverse() {
        let d = desc(Mode::Mixed, 3, 3);
        let x = R::from_int(&d, 2).add(&mono(&d, 1, 1, 3)).unwrap();
        let inv = x.invert_unit().unwrap();
        assert!(x.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn frobenius_examples() {
        let c = desc(Mode::CharP, 3, 4);
        let x = mono(&c, 1, 1, 3).add(&mono(&c, 1, 1, 1)).unwrap();
        let fx = x.frobenius();
        assert_eq!(fx, mono(&c, 1, 1, 1).add(&mono(&c, 1, 3, 1)).unwrap());

        let m = desc(Mode::Mixed, 2, 4);
        assert!(mono(&m, 1, 1, 2).frobenius().is_zero());
        let y = R::one(&m).add(&mono(&m, 1, 1, 4)).unwrap();
        assert_eq!(y.frobenius(), R::one(&m).add(&mono(&m, 1, 1, 2)).unwrap());
    }

    #[test]
    fn pth_root_examples() {
        let c = desc(Mode::CharP, 2, 4);
        let x = mono(&c, 1, 1, 1).add(&mono(&c, 1, 2, 1)).unwrap();
        let r = x.pth_root().unwrap();
        assert_eq!(r, mono(&c, 1, 1, 2).add(&mono(&c, 1, 1, 1)).unwrap());
        assert!(R::one(&c).pth_root().unwrap().is_one());

        let m = desc(Mode::Mixed, 2, 4);
        assert_eq!(mono(&m, 1, 1, 2).pth_root().unwrap(), mono(&m, 1, 1, 4));
        let low = desc(Mode::Mixed, 2, 1);
        let low = Arc::new(low.with_precision(E::frac(1, 2)).unwrap());
        assert!(matches!(
            mono(&low, 1, 1, 4).pth_root(),
            Err(Error::NoRootBelowPrecision(_))
        ));
    }

    #[test]
    fn shift_is_exact_division_by_monomial() {
        let d = desc(Mode::Mixed, 3, 4);
        let x = R::from_int(&d, 5).shift(&E::frac(1, 3)).unwrap();
        assert_eq!(x.shift(&E::frac(-1, 3)).unwrap(), R::from_int(&d, 5));
        assert!(x.shift(&E::from_int(-1)).is_err());
    }
}
