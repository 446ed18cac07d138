use crate::error::{Error, Result};
use crate::modpres::PresentationMatrix;
use crate::ring_core::{Exponent, RingElement, ValResult};
use crate::scalar::ExpInt;

/// Diagonal form `P·A·Q = D` of an `n×m` relation matrix.
#[derive(Clone, Debug)]
pub struct SmithForm<I: ExpInt> {
    /// Diagonal entries `d_0, …, d_{n-1}` in pivot order (valuations
    /// nondecreasing).
    pub diagonal: Vec<RingElement<I>>,
    /// `n×n`, invertible.
    pub p: PresentationMatrix<I>,
    /// `m×m`, invertible.
    pub q: PresentationMatrix<I>,
}

impl<I: ExpInt> SmithForm<I> {
    /// Valuations of the diagonal, ascending.
    pub fn divisors(&self) -> Vec<Exponent<I>> {
        let mut out: Vec<_> = self
            .diagonal
            .iter()
            .map(|d| d.valuation().exact().cloned().expect("pivots are exact"))
            .collect();
        out.sort();
        out
    }
}

/// Elementary divisor valuations, ascending.
pub fn smith_reduce<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<Vec<Exponent<I>>> {
    Ok(eliminate(a, false)?.divisors())
}

/// Pivots on a minimal-valuation entry (ties: lowest row, then column) and
/// clears its row and column by exact division.
pub fn smith_form<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<SmithForm<I>> {
    eliminate(a, true)
}

/// With `track = false` the transforms stay the identity (divisors only).
fn eliminate<I: ExpInt>(a: &PresentationMatrix<I>, track: bool) -> Result<SmithForm<I>> {
    let desc = a.descriptor();
    let n = a.rows();
    let m = a.cols();
    if n > m {
        return Err(Error::NotTorsion);
    }
    let mut work = a.clone();
    let mut p = PresentationMatrix::identity(desc, n);
    let mut q = PresentationMatrix::identity(desc, m);
    let mut diagonal = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(usize, usize, Exponent<I>)> = None;
        let mut truncated = false;
        for i in k..n {
            for j in k..m {
                let x = work.get(i, j);
                match x.valuation() {
                    ValResult::Exact(v) => {
                        if best.as_ref().is_none_or(|(_, _, b)| &v < b) {
                            best = Some((i, j, v));
                        }
                    }
                    ValResult::BelowPrecision(_) => truncated |= !x.is_exact(),
                }
            }
        }
        let (pi, pj, _) = match best {
            Some(b) => b,
            None if truncated => {
                return Err(Error::PrecisionExhausted(format!(
                    "no pivot with valuation below {} at step {k}",
                    desc.precision()
                )))
            }
            None => return Err(Error::NotTorsion),
        };
        work.swap_rows(k, pi);
        p.swap_rows(k, pi);
        work.swap_cols(k, pj);
        q.swap_cols(k, pj);
        let pivot = work.get(k, k).clone();
        for r in k + 1..n {
            if work.get(r, k).is_zero() {
                continue;
            }
            let f = work.get(r, k).divide(&pivot)?;
            work.row_sub(r, k, &f)?;
            if track {
                p.row_sub(r, k, &f)?;
            }
            work.set(r, k, RingElement::zero(desc));
        }
        for c in k + 1..m {
            if work.get(k, c).is_zero() {
                continue;
            }
            let g = work.get(k, c).divide(&pivot)?;
            work.col_sub(c, k, &g)?;
            if track {
                q.col_sub(c, k, &g)?;
            }
            work.set(k, c, RingElement::zero(desc));
        }
        diagonal.push(pivot);
    }
    Ok(SmithForm { diagonal, p, q })
}
