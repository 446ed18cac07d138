use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring_core::{RingDescriptor, RingElement};
use crate::scalar::ExpInt;

/// Relation matrix of a finitely presented module: `n` rows (generators),
/// `m` columns (relations). The module is `V^n / (column span)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PresentationMatrix<I: ExpInt> {
    desc: Arc<RingDescriptor<I>>,
    entries: Vec<Vec<RingElement<I>>>,
    cols: usize,
}

impl<I: ExpInt> PresentationMatrix<I> {
    pub fn new(desc: &Arc<RingDescriptor<I>>, entries: Vec<Vec<RingElement<I>>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        if entries.is_empty() || cols == 0 {
            return Err(Error::InvalidInput("presentation matrix is empty".into()));
        }
        if cols > 64 {
            return Err(Error::InvalidInput("at most 64 relations are supported".into()));
        }
        for row in &entries {
            if row.len() != cols {
                return Err(Error::InvalidInput("ragged presentation matrix".into()));
            }
            if row.iter().any(|x| x.descriptor() != desc) {
                return Err(Error::DescriptorMismatch);
            }
        }
        Ok(PresentationMatrix {
            desc: desc.clone(),
            entries,
            cols,
        })
    }

    pub fn parse(desc: &Arc<RingDescriptor<I>>, rows: &[Vec<String>]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|s| RingElement::parse(desc, s)).collect())
            .collect::<Result<Vec<_>>>()?;
        Self::new(desc, entries)
    }

    /// Diagonal square matrix.
    pub fn diagonal(desc: &Arc<RingDescriptor<I>>, diag: Vec<RingElement<I>>) -> Result<Self> {
        let n = diag.len();
        let entries = diag
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                (0..n)
                    .map(|j| if i == j { d.clone() } else { RingElement::zero(desc) })
                    .collect()
            })
            .collect();
        Self::new(desc, entries)
    }

    pub fn identity(desc: &Arc<RingDescriptor<I>>, n: usize) -> Self {
        Self::diagonal(desc, vec![RingElement::one(desc); n]).expect("n > 0")
    }

    pub fn zeros(desc: &Arc<RingDescriptor<I>>, rows: usize, cols: usize) -> Result<Self> {
        Self::new(desc, vec![vec![RingElement::zero(desc); cols]; rows])
    }

    /// The same matrix over another precision of the same model ring.
    pub fn reinterpret(&self, desc: &Arc<RingDescriptor<I>>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.reinterpret(desc)).collect())
            .collect::<Result<Vec<_>>>()?;
        Self::new(desc, entries)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, RingElement::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, RingElement::sub)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&RingElement<I>, &RingElement<I>) -> Result<RingElement<I>>,
    ) -> Result<Self> {
        if self.rows() != other.rows() || self.cols != other.cols {
            return Err(Error::InvalidInput("matrix dimensions do not match".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.desc, entries)
    }

    /// Minimum entry valuation (`BelowPrecision` for the zero matrix).
    pub fn valuation(&self) -> crate::ring_core::ValResult<I> {
        self.entries
            .iter()
            .flatten()
            .map(RingElement::valuation)
            .min_by(|a, b| a.cmp_inf(b))
            .expect("nonempty matrix")
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor<I>> {
        &self.desc
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<RingElement<I>>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement<I> {
        &self.entries[i][j]
    }

    pub fn map(&self, f: impl Fn(&RingElement<I>) -> Result<RingElement<I>>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(&f).collect())
            .collect::<Result<Vec<_>>>()?;
        Ok(PresentationMatrix {
            desc: self.desc.clone(),
            entries,
            cols: self.cols,
        })
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols)
            .map(|j| self.entries.iter().map(|r| r[j].clone()).collect())
            .collect();
        PresentationMatrix {
            desc: self.desc.clone(),
            entries,
            cols: self.rows(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows() {
            return Err(Error::InvalidInput("matrix dimensions do not match".into()));
        }
        let mut entries = Vec::with_capacity(self.rows());
        for row in &self.entries {
            let mut out = Vec::with_capacity(other.cols);
            for j in 0..other.cols {
                let mut acc = RingElement::zero(&self.desc);
                for (k, a) in row.iter().enumerate() {
                    if a.is_zero() || other.entries[k][j].is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(&other.entries[k][j])?)?;
                }
                out.push(acc);
            }
            entries.push(out);
        }
        Self::new(&self.desc, entries)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.entries {
            row.swap(a, b);
        }
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, x: RingElement<I>) {
        self.entries[i][j] = x;
    }

    /// Row `r` -= f · row `k`.
    pub(crate) fn row_sub(&mut self, r: usize, k: usize, f: &RingElement<I>) -> Result<()> {
        for j in 0..self.cols {
            let src = &self.entries[k][j];
            if src.is_zero() {
                continue;
            }
            let delta = f.mul(src)?;
            self.entries[r][j] = self.entries[r][j].sub(&delta)?;
        }
        Ok(())
    }

    /// Column `c` -= g · column `k`.
    pub(crate) fn col_sub(&mut self, c: usize, k: usize, g: &RingElement<I>) -> Result<()> {
        for i in 0..self.rows() {
            let src = &self.entries[i][k];
            if src.is_zero() {
                continue;
            }
            let delta = src.mul(g)?;
            self.entries[i][c] = self.entries[i][c].sub(&delta)?;
        }
        Ok(())
    }

    /// Whether every entry agrees with `other` below `cap`.
    pub fn eq_below(&self, other: &Self, cap: &crate::ring_core::Exponent<I>) -> bool {
        self.rows() == other.rows()
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.eq_below(y, cap)))
    }
}

impl<I: ExpInt> fmt::Debug for PresentationMatrix<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} {}x{}", self.desc, self.rows(), self.cols)?;
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
