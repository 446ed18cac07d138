use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::field::{ceil_to_grid, Poly, Relation};
use crate::error::{Error, Result};
use crate::modpres::{smith_reduce, PresentationMatrix};
use crate::report::Report;
use crate::ring_core::{Exponent, Mode, RingDescriptor, RingElement};
use crate::scalar::ExpInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionKind {
    /// `x^m = a`
    Kummer,
    /// `x^p - x = a`
    ArtinSchreier,
}

/// A finite separable extension `L = K(x)` of the fraction field of the
/// model ring. The defining datum is `(a · X^{laurent_shift})^{1/p^root_depth}`.
#[derive(Clone, Debug)]
pub struct ExtensionSpec<I: ExpInt> {
    pub desc: Arc<RingDescriptor<I>>,
    pub kind: ExtensionKind,
    pub a: RingElement<I>,
    pub laurent_shift: Exponent<I>,
    pub degree: u32,
    pub root_depth: u32,
}

impl<I: ExpInt> ExtensionSpec<I> {
    /// `L = K`.
    pub fn trivial(desc: &Arc<RingDescriptor<I>>) -> Self {
        ExtensionSpec {
            desc: desc.clone(),
            kind: ExtensionKind::Kummer,
            a: RingElement::one(desc),
            laurent_shift: Exponent::zero(),
            degree: 1,
            root_depth: 0,
        }
    }

    pub fn kummer(desc: &Arc<RingDescriptor<I>>, a: RingElement<I>, degree: u32) -> Self {
        ExtensionSpec {
            desc: desc.clone(),
            kind: ExtensionKind::Kummer,
            a,
            laurent_shift: Exponent::zero(),
            degree,
            root_depth: 0,
        }
    }

    /// `x^p - x = X^{laurent_shift}` at the given root depth.
    pub fn artin_schreier_monomial(
        desc: &Arc<RingDescriptor<I>>,
        laurent_shift: Exponent<I>,
        root_depth: u32,
    ) -> Self {
        ExtensionSpec {
            desc: desc.clone(),
            kind: ExtensionKind::ArtinSchreier,
            a: RingElement::one(desc),
            laurent_shift,
            degree: desc.prime(),
            root_depth,
        }
    }

    pub fn with_root_depth(&self, root_depth: u32) -> Self {
        ExtensionSpec {
            root_depth,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.desc.prime();
        if self.a.descriptor() != &self.desc {
            return Err(Error::DescriptorMismatch);
        }
        if self.degree == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        if !self.a.is_exact() {
            return Err(Error::PrecisionExhausted(format!(
                "the datum a is truncated at precision {}",
                self.desc.precision()
            )));
        }
        if self.a.is_zero() {
            return Err(Error::InvalidInput("the datum a must be nonzero".into()));
        }
        self.desc.check_exponent(&self.laurent_shift)?;
        match (self.kind, self.desc.mode()) {
            (ExtensionKind::ArtinSchreier, Mode::Mixed) => {
                return Err(Error::ModeUnsupported(
                    "Artin-Schreier extensions need characteristic p".into(),
                ))
            }
            (ExtensionKind::ArtinSchreier, Mode::CharP) if self.degree != p => {
                return Err(Error::InvalidInput(format!(
                    "an Artin-Schreier extension has degree p = {p}"
                )))
            }
            (ExtensionKind::Kummer, Mode::CharP) if self.degree.gcd(&p) != 1 => {
                return Err(Error::InvalidInput(format!(
                    "x^{} = a is inseparable in characteristic {p}",
                    self.degree
                )))
            }
            _ => {}
        }
        if self.desc.mode() == Mode::Mixed && self.root_depth > 0 {
            return Err(Error::ModeUnsupported(
                "p-power roots of the datum are only taken in characteristic p".into(),
            ));
        }
        Ok(())
    }

    /// `v` of the defining datum.
    pub fn datum_valuation(&self) -> Exponent<I> {
        let v = self.a.valuation().exact().cloned().unwrap_or_else(Exponent::zero);
        (&v + &self.laurent_shift).div_int(p_power(self.desc.prime(), self.root_depth))
    }

    /// `v(x)`.
    pub fn generator_valuation(&self) -> Exponent<I> {
        let v = self.datum_valuation();
        match self.kind {
            ExtensionKind::Kummer => v.div_int(self.degree as i64),
            ExtensionKind::ArtinSchreier if v.is_negative() => v.div_int(self.desc.prime() as i64),
            ExtensionKind::ArtinSchreier => Exponent::zero(),
        }
    }

    /// Grid `(1/p^D) Z` for the basis exponents: one level finer than the
    /// datum.
    pub fn grid_depth(&self) -> u32 {
        self.datum_valuation().p_depth(self.desc.prime()).unwrap_or(0) + 1
    }

    /// Precision used for field arithmetic: room for the negative exponents
    /// that appear before the basis scaling brings them back into V.
    pub(crate) fn working_descriptor(&self) -> Result<Arc<RingDescriptor<I>>> {
        let v = self.datum_valuation();
        let spread = Exponent::from_int(2 * (self.degree as i64 + 1));
        let extra = &spread * &(&Exponent::one() + &Exponent::max_of(&-v, &Exponent::zero()));
        let extra = Exponent::new(extra.ceil(), I::one());
        Ok(Arc::new(
            self.desc.with_precision(self.desc.precision() + &extra)?,
        ))
    }

    /// The datum `(a X^s)^{1/p^n}` over `work`.
    pub(crate) fn datum(&self, work: &Arc<RingDescriptor<I>>) -> Result<RingElement<I>> {
        let mut z = self.a.reinterpret(work)?.shift_laurent(&self.laurent_shift)?;
        for _ in 0..self.root_depth {
            z = z.pth_root()?;
        }
        Ok(z)
    }

    pub(crate) fn relation(&self, work: &Arc<RingDescriptor<I>>) -> Result<Relation<I>> {
        let d = self.degree as usize;
        let datum = self.datum(work)?;
        let mut tail = vec![RingElement::zero(work); d];
        tail[0] = datum;
        if self.kind == ExtensionKind::ArtinSchreier {
            tail[1] = tail[1].add(&RingElement::one(work))?;
        }
        Ok(Relation {
            desc: work.clone(),
            tail,
        })
    }
}

fn p_power(p: u32, n: u32) -> i64 {
    (p as i64).pow(n)
}

/// The order `⊕ V·y_j`, `y_j = X^{e_j} x^j`, with `e_j` the least grid point
/// `>= max(0, -j·v(x))`.
#[derive(Clone, Debug)]
pub struct ExtensionOrder<I: ExpInt> {
    spec: ExtensionSpec<I>,
    basis_exponents: Vec<Exponent<I>>,
    /// `table[i][j][k]`: coefficient of `y_k` in `y_i·y_j`.
    table: Vec<Vec<Vec<RingElement<I>>>>,
}

pub fn build_extension<I: ExpInt>(spec: &ExtensionSpec<I>) -> Result<ExtensionOrder<I>> {
    spec.validate()?;
    let d = spec.degree as usize;
    let p = spec.desc.prime();
    let vx = spec.generator_valuation();
    let depth = spec.grid_depth();
    let basis_exponents: Vec<Exponent<I>> = (0..d)
        .map(|j| {
            let need = -vx.scale(j as i64);
            ceil_to_grid(&Exponent::max_of(&need, &Exponent::zero()), p, depth)
        })
        .collect();
    let work = spec.working_descriptor()?;
    let rel = spec.relation(&work)?;
    let mut table = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in i..d {
            let c = RingElement::laurent_monomial(&work, 1, &basis_exponents[i] + &basis_exponents[j])?;
            let prod = rel.monomial(c, i + j)?;
            let mut coords = Vec::with_capacity(d);
            for (k, coeff) in prod.iter().enumerate() {
                let y = coeff.shift_laurent(&-basis_exponents[k].clone())?;
                if !y.is_integral() {
                    return Err(Error::NotIntegralBasis(format!(
                        "y_{i}·y_{j} has coefficient {y} on y_{k}"
                    )));
                }
                coords.push(y.reinterpret(&spec.desc)?);
            }
            table[i][j] = coords.clone();
            table[j][i] = coords;
        }
    }
    Ok(ExtensionOrder {
        spec: spec.clone(),
        basis_exponents,
        table,
    })
}

impl<I: ExpInt> ExtensionOrder<I> {
    pub fn spec(&self) -> &ExtensionSpec<I> {
        &self.spec
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor<I>> {
        &self.spec.desc
    }

    pub fn degree(&self) -> usize {
        self.basis_exponents.len()
    }

    pub fn basis_exponents(&self) -> &[Exponent<I>] {
        &self.basis_exponents
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &RingElement<I> {
        &self.table[i][j][k]
    }

    /// Product of coordinate vectors, over the descriptor of `u` (another
    /// precision of the same model ring is allowed).
    pub fn mul(&self, u: &[RingElement<I>], v: &[RingElement<I>]) -> Result<Vec<RingElement<I>>> {
        let d = self.degree();
        let desc = u.first().map(|x| x.descriptor().clone()).ok_or_else(|| {
            Error::InvalidInput("empty coordinate vector".into())
        })?;
        let mut out = vec![RingElement::zero(&desc); d];
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let ab = a.mul(b)?;
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = &self.table[i][j][k];
                    if !c.is_zero() {
                        *slot = slot.add(&ab.mul(&c.reinterpret(&desc)?)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, u: &[RingElement<I>], n: u64) -> Result<Vec<RingElement<I>>> {
        let desc = u[0].descriptor();
        let mut acc = self.unit_vector(desc, 0);
        for _ in 0..n {
            acc = self.mul(&acc, u)?;
        }
        Ok(acc)
    }

    pub fn unit_vector(&self, desc: &Arc<RingDescriptor<I>>, k: usize) -> Vec<RingElement<I>> {
        let mut out = vec![RingElement::zero(desc); self.degree()];
        out[k] = RingElement::one(desc);
        out
    }

    /// Coordinates on the basis to the polynomial in `x` over `work`.
    pub(crate) fn to_field(&self, u: &[RingElement<I>], work: &Arc<RingDescriptor<I>>) -> Result<Poly<I>> {
        u.iter()
            .zip(&self.basis_exponents)
            .map(|(c, e)| c.reinterpret(work)?.shift_laurent(e))
            .collect()
    }

    /// Inverse of [`Self::to_field`]; coordinates may be non-integral.
    pub(crate) fn from_field(&self, f: &[RingElement<I>]) -> Result<Vec<RingElement<I>>> {
        f.iter()
            .zip(&self.basis_exponents)
            .map(|(c, e)| c.shift_laurent(&-e.clone()))
            .collect()
    }

    /// `Tr(y_k)` as the trace of multiplication by `y_k`.
    pub fn basis_traces(&self) -> Vec<RingElement<I>> {
        let d = self.degree();
        (0..d)
            .map(|k| {
                (0..d).fold(RingElement::zero(self.descriptor()), |acc, i| {
                    acc.add(&self.table[k][i][i]).expect("same descriptor")
                })
            })
            .collect()
    }
}

/// `T_ij = Tr(y_i y_j) = Σ_k c_ij^k Tr(y_k)`.
pub fn trace_matrix<I: ExpInt>(order: &ExtensionOrder<I>) -> Result<PresentationMatrix<I>> {
    let d = order.degree();
    let traces = order.basis_traces();
    let desc = order.descriptor();
    let mut rows = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let mut acc = RingElement::zero(desc);
            for (k, tr) in traces.iter().enumerate() {
                let c = order.structure_constant(i, j, k);
                if !c.is_zero() && !tr.is_zero() {
                    acc = acc.add(&c.mul(tr)?)?;
                }
            }
            row.push(acc);
        }
        rows.push(row);
    }
    PresentationMatrix::new(desc, rows)
}

/// `v(det T)`, as the sum of the elementary divisors of `T`.
pub fn discriminant_valuation<I: ExpInt>(order: &ExtensionOrder<I>) -> Result<Exponent<I>> {
    let t = trace_matrix(order)?;
    match smith_reduce(&t) {
        Ok(divs) => Ok(divs.into_iter().sum()),
        Err(Error::NotTorsion) => Err(Error::PrecisionExhausted(format!(
            "discriminant vanishes below precision {}",
            order.descriptor().precision()
        ))),
        Err(e) => Err(e),
    }
}

/// `d_n` for root depths `root_depth .. root_depth + n_max`.
pub fn tower_discriminants<I: ExpInt>(spec: &ExtensionSpec<I>, n_max: u32) -> Result<Vec<Exponent<I>>> {
    if spec.desc.mode() != Mode::CharP {
        return Err(Error::ModeUnsupported(
            "the discriminant tower is computed in characteristic p".into(),
        ));
    }
    (0..=n_max)
        .map(|n| {
            let order = build_extension(&spec.with_root_depth(spec.root_depth + n))?;
            discriminant_valuation(&order)
        })
        .collect()
}

/// Monotonicity of the discriminant tower.
pub fn tower_report<I: ExpInt>(spec: &ExtensionSpec<I>, n_max: u32) -> Result<Report> {
    let ds = tower_discriminants(spec, n_max)?;
    let nonincreasing = ds.windows(2).all(|w| w[1] <= w[0]);
    let strict = ds.windows(2).all(|w| w[1] < w[0]);
    let text: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
    Ok(Report::new(
        "discriminant valuations are nonincreasing along the root tower",
        text.join(", "),
        "nonincreasing",
        nonincreasing,
        json!({
            "discriminants": text,
            "strictly_decreasing": strict,
            "last": ds.last().map(|d| d.to_string()),
        }),
    ))
}
