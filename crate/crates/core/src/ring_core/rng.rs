//! Seeded random generation.
//!
//! The generator is SplitMix64 (state advanced by `0x9E3779B97F4A7C15`,
//! output mixed with the constants `0xBF58476D1CE4E5B9`, `0x94D049BB133111EB`
//! and shifts 30/27/31). Integers in `[0, n)` are drawn as `next_u64() % n`.
//! Both facts are part of the reproducibility contract.

use std::sync::Arc;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::ring_core::{Exponent, RingDescriptor, RingElement};
use crate::scalar::{int, ExpInt};

/// Seed used everywhere a seed is not supplied.
pub const DEFAULT_SEED: u64 = 7;

/// Support size and denominator bound for random elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementShape {
    /// At most this many terms before canonicalization.
    pub max_terms: usize,
    /// Exponents are drawn from `(1/p^j) Z` with `j <= max_depth`.
    pub max_depth: u32,
}

impl Default for ElementShape {
    fn default() -> Self {
        ElementShape {
            max_terms: 3,
            max_depth: 2,
        }
    }
}

pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Independent stream for trial `index` of a batch run with `seed`, so
    /// that batches can be split across threads without changing results.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        let mut base = SplitMix64::seed_from_u64(seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
        Sampler::new(base.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform-ish integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Integer in `[lo, hi]`.
    pub fn between(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn coin(&mut self) -> bool {
        self.below(2) == 1
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    /// Exponent `k/p^j` in `[lo, hi)`, `j <= max_depth` (returns `lo` if the
    /// grid at the drawn depth has no point in range).
    pub fn exponent<I: ExpInt>(
        &mut self,
        p: u32,
        max_depth: u32,
        lo: &Exponent<I>,
        hi: &Exponent<I>,
    ) -> Exponent<I> {
        let j = self.below(max_depth as u64 + 1) as u32;
        let scale: I = crate::ring_core::exponent::p_pow(p, j);
        let scale_e = Exponent::new(scale.clone(), I::one());
        let k_lo = (lo * &scale_e).ceil();
        let k_hi = (hi * &scale_e).ceil();
        if k_hi <= k_lo {
            return lo.clone();
        }
        let span = (k_hi - k_lo.clone()).to_u64().unwrap_or(u64::MAX);
        let k = k_lo + int::<I>(self.below(span) as i64);
        Exponent::new(k, scale)
    }

    /// Random element with exponents in `[lo, N)`.
    pub fn element_from<I: ExpInt>(
        &mut self,
        desc: &Arc<RingDescriptor<I>>,
        shape: ElementShape,
        lo: &Exponent<I>,
    ) -> RingElement<I> {
        let p = desc.prime();
        let n = self.below(shape.max_terms as u64 + 1) as usize;
        let mut terms = Vec::with_capacity(n);
        for _ in 0..n {
            let e = self.exponent(p, shape.max_depth, lo, desc.precision());
            let c = self.between(1, p as u64 - 1);
            terms.push((e, c));
        }
        RingElement::from_terms(desc, terms).expect("sampled exponents are valid")
    }

    pub fn element<I: ExpInt>(
        &mut self,
        desc: &Arc<RingDescriptor<I>>,
        shape: ElementShape,
    ) -> RingElement<I> {
        self.element_from(desc, shape, &Exponent::zero())
    }

    /// Nonzero element whose leading term is at `v`, plus random higher terms.
    pub fn element_with_valuation<I: ExpInt>(
        &mut self,
        desc: &Arc<RingDescriptor<I>>,
        shape: ElementShape,
        v: &Exponent<I>,
    ) -> RingElement<I> {
        let p = desc.prime() as u64;
        let lead = RingElement::monomial(desc, self.between(1, p - 1), v.clone())
            .expect("valid valuation");
        let above = v + &Exponent::inv_p_pow(desc.prime(), shape.max_depth);
        let tail = self.element_from(desc, shape, &above);
        lead.add(&tail).expect("same descriptor")
    }

    /// Random unit.
    pub fn unit<I: ExpInt>(
        &mut self,
        desc: &Arc<RingDescriptor<I>>,
        shape: ElementShape,
    ) -> RingElement<I> {
        self.element_with_valuation(desc, shape, &Exponent::zero())
    }

    /// `rows × cols` grid of random elements.
    pub fn grid<I: ExpInt>(
        &mut self,
        desc: &Arc<RingDescriptor<I>>,
        rows: usize,
        cols: usize,
        shape: ElementShape,
    ) -> Vec<Vec<RingElement<I>>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| self.element(desc, shape)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn splitmix_reference_stream() {
        // First outputs of SplitMix64 seeded with 0.
        let mut s = Sampler::new(0);
        assert_eq!(s.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(s.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn elements_respect_bounds() {
        let d = Arc::new(RingDescriptor::<BigInt>::char_p(3, Exponent::from_int(2)).unwrap());
        let mut s = Sampler::new(11);
        for _ in 0..200 {
            let x = s.element(&d, ElementShape { max_terms: 4, max_depth: 2 });
            for (e, c) in x.terms() {
                assert!(e < d.precision() && !e.is_negative());
                assert!(e.p_depth(3).unwrap() <= 2);
                assert!(*c >= 1 && *c < 3);
            }
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let d = Arc::new(RingDescriptor::<BigInt>::mixed(2, Exponent::from_int(3)).unwrap());
        let a: Vec<_> = (0..20)
            .map(|i| Sampler::for_trial(5, i).element(&d, ElementShape::default()))
            .collect();
        let b: Vec<_> = (0..20)
            .map(|i| Sampler::for_trial(5, i).element(&d, ElementShape::default()))
            .collect();
        assert_eq!(a, b);
    }
}
