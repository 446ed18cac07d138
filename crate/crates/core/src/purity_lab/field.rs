//! Arithmetic in `L = K[x]/(x^d - Σ r_l x^l)` with coefficients in the
//! fraction field of the model ring (series allowed negative exponents).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring_core::{Exponent, RingDescriptor, RingElement, ValResult};
use crate::scalar::ExpInt;

/// `x^d = Σ_l tail[l] x^l`.
#[derive(Clone, Debug)]
pub(crate) struct Relation<I: ExpInt> {
    pub desc: Arc<RingDescriptor<I>>,
    pub tail: Vec<RingElement<I>>,
}

pub(crate) type Poly<I> = Vec<RingElement<I>>;

impl<I: ExpInt> Relation<I> {
    pub fn degree(&self) -> usize {
        self.tail.len()
    }

    pub fn zero(&self) -> Poly<I> {
        vec![RingElement::zero(&self.desc); self.degree()]
    }

    pub fn constant(&self, c: RingElement<I>) -> Poly<I> {
        let mut out = self.zero();
        out[0] = c;
        out
    }

    /// Reduces a polynomial of any length to `d` coefficients.
    pub fn reduce(&self, mut poly: Poly<I>) -> Result<Poly<I>> {
        let d = self.degree();
        for s in (d..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[s], RingElement::zero(&self.desc));
            if c.is_zero() {
                continue;
            }
            for (l, r) in self.tail.iter().enumerate() {
                if !r.is_zero() {
                    poly[s - d + l] = poly[s - d + l].add(&c.mul(r)?)?;
                }
            }
        }
        poly.resize(d, RingElement::zero(&self.desc));
        Ok(poly)
    }

    /// `c · x^k`, reduced.
    pub fn monomial(&self, c: RingElement<I>, k: usize) -> Result<Poly<I>> {
        let mut poly = vec![RingElement::zero(&self.desc); (k + 1).max(self.degree())];
        poly[k] = c;
        self.reduce(poly)
    }

    pub fn add(&self, a: &[RingElement<I>], b: &[RingElement<I>]) -> Result<Poly<I>> {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    pub fn sub(&self, a: &[RingElement<I>], b: &[RingElement<I>]) -> Result<Poly<I>> {
        a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
    }

    pub fn mul(&self, a: &[RingElement<I>], b: &[RingElement<I>]) -> Result<Poly<I>> {
        let mut out = vec![RingElement::zero(&self.desc); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y)?)?;
                }
            }
        }
        self.reduce(out)
    }

    pub fn pow(&self, a: &[RingElement<I>], n: u64) -> Result<Poly<I>> {
        let mut acc = self.constant(RingElement::one(&self.desc));
        for _ in 0..n {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }
}

/// `z^{-1}` for a nonzero series, truncated at the working precision.
pub(crate) fn laurent_inverse<I: ExpInt>(z: &RingElement<I>) -> Result<RingElement<I>> {
    let v = match z.valuation() {
        ValResult::Exact(v) => v,
        ValResult::BelowPrecision(_) => return Err(Error::NotAUnit),
    };
    let unit = z.shift_laurent(&-v.clone())?;
    unit.invert_unit()?.shift_laurent(&-v)
}

/// Ceiling of `r` on the grid `(1/p^depth) Z`.
pub(crate) fn ceil_to_grid<I: ExpInt>(r: &Exponent<I>, p: u32, depth: u32) -> Exponent<I> {
    let step = Exponent::<I>::inv_p_pow(p, depth);
    let k = (r.ratio() / step.ratio()).ceil();
    Exponent::from_ratio(k * step.ratio())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type E = Exponent<BigInt>;

    #[test]
    fn artin_schreier_relation() {
        let d = Arc::new(RingDescriptor::<BigInt>::char_p(2, E::from_int(6)).unwrap());
        let a = RingElement::laurent_monomial(&d, 1, E::from_int(-1)).unwrap();
        let rel = Relation {
            desc: d.clone(),
            tail: vec![a.clone(), RingElement::one(&d)],
        };
        let x = rel.monomial(RingElement::one(&d), 1).unwrap();
        let x2 = rel.mul(&x, &x).unwrap();
        assert_eq!(x2, vec![a.clone(), RingElement::one(&d)]);
        // x^4 = (x + a)^2 = x^2 + a^2 = x + a + a^2
        let x4 = rel.pow(&x, 4).unwrap();
        assert_eq!(x4[1], RingElement::one(&d));
        assert_eq!(x4[0], a.add(&a.mul(&a).unwrap()).unwrap());
    }

    #[test]
    fn inverse_and_grid() {
        let d = Arc::new(RingDescriptor::<BigInt>::char_p(3, E::from_int(4)).unwrap());
        let z = RingElement::parse(&d, "1*t^(1/3) + 1*t^(1)").unwrap();
        let inv = laurent_inverse(&z).unwrap();
        let one = z.mul(&inv).unwrap();
        assert!(one.eq_below(&RingElement::one(&d), &E::from_int(3)));
        assert_eq!(ceil_to_grid(&E::frac(1, 2), 3, 1), E::frac(2, 3));
        assert_eq!(ceil_to_grid(&E::frac(-1, 2), 3, 2), E::frac(-4, 9));
        assert_eq!(ceil_to_grid(&E::frac(1, 3), 3, 1), E::frac(1, 3));
    }
}
