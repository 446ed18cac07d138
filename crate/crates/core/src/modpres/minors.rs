//! Minor expansion without division.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::modpres::{CutIdeal, Endpoint, PresentationMatrix};
use crate::ring_core::{Exponent, RingElement, ValResult};
use crate::scalar::ExpInt;

/// All `k×k` minors on the given rows (`k = rows.len()`), keyed by column
/// bitmask. Laplace expansion along the last row, memoized on column sets.
pub(crate) fn minors_on_rows<I: ExpInt>(
    a: &PresentationMatrix<I>,
    rows: &[usize],
) -> Result<HashMap<u64, RingElement<I>>> {
    let desc = a.descriptor();
    let m = a.cols();
    let mut level: HashMap<u64, RingElement<I>> = HashMap::new();
    level.insert(0, RingElement::one(desc));
    for (t, &r) in rows.iter().enumerate() {
        let mut next: HashMap<u64, RingElement<I>> = HashMap::new();
        let mut masks: Vec<u64> = level.keys().copied().collect();
        masks.sort_unstable();
        for mask in masks {
            let prev = &level[&mask];
            if prev.is_zero() && prev.is_exact() {
                continue;
            }
            for j in 0..m {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let entry = a.get(r, j);
                let new = mask | (1 << j);
                let slot = next.entry(new).or_insert_with(|| RingElement::zero(desc));
                if entry.is_zero() {
                    if !entry.is_exact() {
                        *slot = slot.clone().with_exactness_of(entry);
                    }
                    continue;
                }
                let pos = (new & ((1u64 << j) - 1)).count_ones() as usize;
                let term = entry.mul(prev)?;
                let term = if (t + pos) % 2 == 1 { term.neg() } else { term };
                *slot = slot.add(&term)?;
            }
        }
        level = next;
    }
    Ok(level)
}

/// Minimal-valuation `k×k` minor over all row and column choices.
/// `Ok(None)` when every minor vanishes exactly.
fn min_minor_valuation<I: ExpInt>(
    a: &PresentationMatrix<I>,
    k: usize,
) -> Result<Option<Exponent<I>>> {
    let n = a.rows();
    if k == 0 {
        return Ok(Some(Exponent::zero()));
    }
    if k > n || k > a.cols() {
        return Ok(None);
    }
    let mut best: Option<Exponent<I>> = None;
    let mut truncated = false;
    for rows in subsets(n, k) {
        for (_, minor) in minors_on_rows(a, &rows)? {
            match minor.valuation() {
                ValResult::Exact(v) => {
                    if best.as_ref().is_none_or(|b| &v < b) {
                        best = Some(v);
                    }
                }
                ValResult::BelowPrecision(_) => truncated |= !minor.is_exact(),
            }
        }
    }
    match best {
        Some(v) => Ok(Some(v)),
        None if truncated => Err(Error::PrecisionExhausted(format!(
            "all {k}x{k} minors vanish below precision {}",
            a.descriptor().precision()
        ))),
        None => Ok(None),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// `F_0(M)`: the closed cut at the minimal valuation of an `n×n` minor.
pub fn fitting_f0<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<CutIdeal<I>> {
    fitting_ideal(a, 0)
}

/// `F_j(M)`, generated by the `(n-j)×(n-j)` minors; the unit ideal for
/// `j >= n`.
pub fn fitting_ideal<I: ExpInt>(a: &PresentationMatrix<I>, j: usize) -> Result<CutIdeal<I>> {
    let n = a.rows();
    let k = n.saturating_sub(j);
    match min_minor_valuation(a, k)? {
        Some(v) => Ok(CutIdeal::new(v, Endpoint::Closed)),
        None => Err(Error::NotTorsion),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::RingDescriptor;
    use num_bigint::BigInt;
    use std::sync::Arc;

    fn mat(p: u32, rows: &[&[&str]]) -> PresentationMatrix<BigInt> {
        let d = Arc::new(RingDescriptor::char_p(p, Exponent::from_int(4)).unwrap());
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        PresentationMatrix::parse(&d, &rows).unwrap()
    }

    #[test]
    fn f0_examples() {
        let a = mat(2, &[&["1*t^(1/2)", "0"], &["0", "1*t^(1/4)"]]);
        assert_eq!(fitting_f0(&a).unwrap().threshold(), &Exponent::frac(3, 4));
        let b = mat(2, &[&["1*t^(1)", "1*t^(1/2)"], &["1*t^(1/2)", "1*t^(1)"]]);
        assert_eq!(fitting_f0(&b).unwrap().threshold(), &Exponent::from_int(1));
        let c = mat(2, &[&["1*t^(1)", "1*t^(1/2)"]]);
        assert_eq!(fitting_f0(&c).unwrap().threshold(), &Exponent::frac(1, 2));
    }

    #[test]
    fn f0_with_thirds() {
        let a = mat(3, &[&["1*t^(1/3)", "0"], &["0", "1*t^(1/9)"]]);
        assert_eq!(fitting_f0(&a).unwrap().threshold(), &Exponent::frac(4, 9));
    }

    #[test]
    fn determinant_sign() {
        // det [[1, 1], [1, 2]] = 1 in F_3
        let a = mat(3, &[&["1", "1"], &["1", "2"]]);
        let m = minors_on_rows(&a, &[0, 1]).unwrap();
        assert!(m[&0b11].is_one());
    }

    #[test]
    fn not_torsion() {
        let a = mat(2, &[&["1*t^(1)", "1*t^(1/2)"], &["0", "0"]]);
        assert_eq!(fitting_f0(&a), Err(Error::NotTorsion));
        assert_eq!(
            fitting_ideal(&a, 1).unwrap().threshold(),
            &Exponent::frac(1, 2)
        );
        assert_eq!(fitting_ideal(&a, 2).unwrap().threshold(), &Exponent::zero());
    }
}
