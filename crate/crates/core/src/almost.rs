//! Quantitative almost mathematics over the basic setup `(V, I)` with
//! `I = ∪ (ϖ^{1/p^n})`.
//!
//! Exponents written `δ`, `α`, `c` are in units of `v(ϖ)`: `ϖ^δ` has
//! valuation `δ · v(ϖ)`.

use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::modpres::{smith_form, CutIdeal, CutModule, Endpoint, PresentationMatrix};
use crate::report::Report;
use crate::ring_core::{Exponent, RingDescriptor, RingElement};
use crate::scalar::ExpInt;

/// `(V, I)` with `I = m_V`, the open cut at 0.
#[derive(Clone, Debug)]
pub struct BasicSetup<I: ExpInt> {
    pub desc: Arc<RingDescriptor<I>>,
    pub ideal: CutIdeal<I>,
}

impl<I: ExpInt> BasicSetup<I> {
    pub fn new(desc: &Arc<RingDescriptor<I>>) -> Self {
        BasicSetup {
            desc: desc.clone(),
            ideal: CutIdeal::maximal(),
        }
    }

    /// Valuation of `ϖ^{x}`.
    pub fn varpi_power(&self, x: &Exponent<I>) -> Exponent<I> {
        x * &self.desc.varpi_valuation()
    }

    /// `ε_n = ϖ^{1/p^n}` as a valuation.
    pub fn epsilon(&self, n: u32) -> Exponent<I> {
        self.varpi_power(&Exponent::inv_p_pow(self.desc.prime(), n))
    }
}

/// `M ≈ 0`: every summand is `V/m_V`.
pub fn is_almost_zero<I: ExpInt>(m: &CutModule<I>) -> bool {
    m.summands().iter().all(|s| s.threshold().is_zero())
}

/// `λ(εM) = 0` for `v(ε) = v(ϖ)/p^j`, `j = 1..=jmax`.
pub fn almost_zero_by_epsilon<I: ExpInt>(setup: &BasicSetup<I>, m: &CutModule<I>, jmax: u32) -> bool {
    (1..=jmax).all(|j| crate::length::lambda_cut(&m.scalar_image_val(&setup.epsilon(j))).is_zero())
}

/// Generators of a submodule `M₀ ⊆ M` with `ϖ^{1/p^n} M ⊆ M₀`: summand `i`
/// contributes `ϖ^{g_i} e_i`, where `e_i` generates `V/I_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostFgWitness<I: ExpInt> {
    pub n: u32,
    pub epsilon: Exponent<I>,
    pub generator_valuations: Vec<Exponent<I>>,
    /// Rounds of the descending-intersection argument (Nakayama lift only).
    pub rounds: Option<u64>,
}

/// Closed summands are finitely presented and contribute `e_i` itself; open
/// summands contribute `ϖ^{ε} e_i`.
pub fn almost_fg_witness<I: ExpInt>(
    setup: &BasicSetup<I>,
    m: &CutModule<I>,
    n: u32,
) -> AlmostFgWitness<I> {
    let epsilon = setup.epsilon(n);
    let generator_valuations = m
        .summands()
        .iter()
        .map(|s| match s.endpoint() {
            Endpoint::Closed => Exponent::zero(),
            Endpoint::Open => epsilon.clone(),
        })
        .collect();
    AlmostFgWitness {
        n,
        epsilon,
        generator_valuations,
        rounds: None,
    }
}

/// Replays `ϖ^ε M ⊆ Σ V ϖ^{g_i} e_i` summand by summand: in the cyclic
/// module `V/I`, `ϖ^ε(V/I) ⊆ ϖ^g(V/I)` iff `g <= ε` or `ϖ^ε(V/I) = 0`.
/// Returns the index of the first uncovered summand.
pub fn replay_witness<I: ExpInt>(m: &CutModule<I>, w: &AlmostFgWitness<I>) -> Option<usize> {
    if w.generator_valuations.len() != m.summands().len() {
        return Some(w.generator_valuations.len().min(m.summands().len()));
    }
    m.summands()
        .iter()
        .zip(&w.generator_valuations)
        .position(|(s, g)| {
            let killed = s.contains_valuation(&w.epsilon);
            !(killed || g <= &w.epsilon)
        })
}

/// `M/ϖM`, summand by summand (order preserved).
pub fn reduce_mod_varpi<I: ExpInt>(setup: &BasicSetup<I>, m: &CutModule<I>) -> CutModule<I> {
    let v = setup.desc.varpi_valuation();
    let summands = m.summands().iter().map(|s| {
        if s.threshold() < &v {
            s.clone()
        } else {
            CutIdeal::closed(v.clone())
        }
    });
    CutModule::new(summands).expect("thresholds stay nonnegative")
}

/// Lifts a witness for `M/ϖM` to `M`, replaying
/// `ϖ^ε M ⊆ span + ϖM ⊆ span + ϖ^{k(1-ε)}·ϖ^ε M`
/// until the last term vanishes at an exact threshold.
pub fn nakayama_lift<I: ExpInt>(
    setup: &BasicSetup<I>,
    mod_witness: &AlmostFgWitness<I>,
    m: &CutModule<I>,
) -> Result<AlmostFgWitness<I>> {
    let prec = setup.desc.precision();
    if let Some(s) = m.summands().iter().find(|s| s.threshold() >= prec) {
        return Err(Error::WitnessInvalid(format!(
            "summand {s} is not separated below precision {prec}"
        )));
    }
    let reduced = reduce_mod_varpi(setup, m);
    if let Some(i) = replay_witness(&reduced, mod_witness) {
        return Err(Error::WitnessInvalid(format!(
            "summand {i} of M/ϖM is not covered by the witness"
        )));
    }
    let eps = &mod_witness.epsilon;
    let vpi = setup.desc.varpi_valuation();
    let step = &vpi - eps;
    if !step.is_positive() {
        return Err(Error::WitnessInvalid("ε must be smaller than v(ϖ)".into()));
    }
    // Smallest k with ϖ^{ε + k(v(ϖ) - ε)} M = 0.
    let mut rounds = 0u64;
    let mut shift = eps.clone();
    while !m.scalar_image_val(&shift).is_zero() {
        rounds += 1;
        shift = &shift + &step;
    }
    let lifted = AlmostFgWitness {
        n: mod_witness.n,
        epsilon: eps.clone(),
        generator_valuations: mod_witness.generator_valuations.clone(),
        rounds: Some(rounds),
    };
    if let Some(i) = replay_witness(m, &lifted) {
        return Err(Error::WitnessInvalid(format!(
            "lifted generators miss summand {i}"
        )));
    }
    Ok(lifted)
}

/// `φ: V^m → V^n` (an `n×m` matrix) and the data of the section bound.
#[derive(Clone, Debug)]
pub struct SectionProblem<I: ExpInt> {
    pub phi: PresentationMatrix<I>,
    /// Certified exponent with `ϖ^α Coker φ = 0`; defaults to `δ_min`.
    pub alpha: Option<Exponent<I>>,
    pub k: u32,
}

#[derive(Clone, Debug)]
pub struct SectionSolution<I: ExpInt> {
    /// `m×n` with `φ∘g = ϖ^{δ_min}·id` below precision.
    pub g: PresentationMatrix<I>,
    pub delta_min: Exponent<I>,
    pub alpha: Exponent<I>,
    /// `α >= δ_min`, i.e. `ϖ^α` really kills the cokernel.
    pub alpha_certified: bool,
    /// `1/p^k + 2α`.
    pub bound: Exponent<I>,
}

impl<I: ExpInt> SectionSolution<I> {
    pub fn bound_holds(&self) -> bool {
        self.delta_min <= self.bound
    }
}

/// `ϖ^{x}` for `x` in ϖ-units.
pub fn varpi_pow<I: ExpInt>(desc: &Arc<RingDescriptor<I>>, x: &Exponent<I>) -> Result<RingElement<I>> {
    RingElement::monomial(desc, 1, x * &desc.varpi_valuation())
}

/// Solves `φ∘g = ϖ^δ·id` with minimal `δ` via `PφQ = D`:
/// `g = Q·D'·P`, `D' = diag(ϖ^δ/d_i)` padded to `m×n`.
pub fn section_solve<I: ExpInt>(problem: &SectionProblem<I>) -> Result<SectionSolution<I>> {
    let phi = &problem.phi;
    let desc = phi.descriptor();
    let (n, m) = (phi.rows(), phi.cols());
    let smith = match smith_form(phi) {
        Ok(s) => s,
        Err(Error::NotTorsion) => {
            return Err(Error::NotAlmostSurjective(desc.precision().to_string()))
        }
        Err(e) => return Err(e),
    };
    let vpi = desc.varpi_valuation();
    let max_div = smith.divisors().last().cloned().unwrap_or_else(Exponent::zero);
    let delta_min = Exponent::from_ratio(max_div.ratio() / vpi.ratio());
    let target = varpi_pow(desc, &delta_min)?;
    let mut dprime = PresentationMatrix::zeros(desc, m, n)?;
    for (i, d) in smith.diagonal.iter().enumerate() {
        dprime.set(i, i, target.divide(d)?);
    }
    let g = smith.q.mul(&dprime)?.mul(&smith.p)?;
    let alpha = problem.alpha.clone().unwrap_or_else(|| delta_min.clone());
    let p = desc.prime();
    let bound = Exponent::inv_p_pow(p, problem.k) + alpha.scale(2);
    Ok(SectionSolution {
        g,
        alpha_certified: alpha >= delta_min,
        delta_min,
        alpha,
        bound,
    })
}

/// Whether `φ∘s ≡ ϖ^c·id` below valuation `cap`.
pub fn composite_is_scalar<I: ExpInt>(
    phi: &PresentationMatrix<I>,
    s: &PresentationMatrix<I>,
    c: &Exponent<I>,
    cap: &Exponent<I>,
) -> Result<bool> {
    let desc = phi.descriptor();
    let comp = phi.mul(&s.reinterpret(desc)?)?;
    let scalar = varpi_pow(desc, c)?;
    let expected = PresentationMatrix::diagonal(desc, vec![scalar; phi.rows()])?;
    Ok(comp.eq_below(&expected, cap))
}

/// Report of the section bound `δ_min <= 1/p^k + 2α` for one `k`.
pub fn section_bound_report<I: ExpInt>(problem: &SectionProblem<I>) -> Result<Report> {
    let sol = section_solve(problem)?;
    let cap = problem.phi.descriptor().precision().clone();
    let composite = composite_is_scalar(&problem.phi, &sol.g, &sol.delta_min, &cap)?;
    Ok(Report::new(
        "phi o g = varpi^delta id with delta <= 1/p^k + 2 alpha",
        &sol.delta_min,
        &sol.bound,
        sol.bound_holds() && sol.alpha_certified && composite,
        json!({
            "k": problem.k,
            "alpha": sol.alpha.to_string(),
            "alpha_certified": sol.alpha_certified,
            "composite_verified": composite,
        }),
    ))
}

/// Approximate section valid modulo `ϖ^level`.
#[derive(Clone, Debug)]
pub struct SectionLiftState<I: ExpInt> {
    pub level: u32,
    /// `m×n`, over the ring truncated at `ϖ^level`.
    pub s: PresentationMatrix<I>,
    /// Defect exponent: `φ∘s ≡ ϖ^c·id mod ϖ^level`.
    pub c: Exponent<I>,
    /// The proof's allowance at this level: `1/p^k + 2α` at level 1,
    /// `3/p^k + 4α` afterwards.
    pub allowance: Exponent<I>,
    /// Valuation (ϖ-units) of the last correction `s_l - s_{l-1}`.
    pub correction: Option<Exponent<I>>,
}

fn level_desc<I: ExpInt>(base: &Arc<RingDescriptor<I>>, level: u32) -> Result<Arc<RingDescriptor<I>>> {
    let cap = base.varpi_valuation().scale(level as i64);
    if &cap > base.precision() {
        return Err(Error::LiftObstructed {
            level,
            reason: format!(
                "ϖ^{level} has valuation {cap} beyond precision {}",
                base.precision()
            ),
        });
    }
    Ok(Arc::new(base.with_precision(cap)?))
}

fn allowance<I: ExpInt>(p: u32, k: u32, alpha: &Exponent<I>, level: u32) -> Exponent<I> {
    let eps_k = Exponent::inv_p_pow(p, k);
    if level <= 1 {
        eps_k + alpha.scale(2)
    } else {
        eps_k.scale(3) + alpha.scale(4)
    }
}

fn solve_at_level<I: ExpInt>(
    problem: &SectionProblem<I>,
    level: u32,
) -> Result<SectionSolution<I>> {
    let d = level_desc(problem.phi.descriptor(), level)?;
    let reduced = SectionProblem {
        phi: problem.phi.reinterpret(&d)?,
        alpha: problem.alpha.clone(),
        k: problem.k,
    };
    section_solve(&reduced).map_err(|e| match e {
        Error::NotAlmostSurjective(_) | Error::PrecisionExhausted(_) => Error::LiftObstructed {
            level,
            reason: format!("no almost section modulo ϖ^{level}: {e}"),
        },
        other => other,
    })
}

/// Level 1: the almost section of `φ mod ϖ`.
pub fn start_section_lift<I: ExpInt>(problem: &SectionProblem<I>) -> Result<SectionLiftState<I>> {
    let sol = solve_at_level(problem, 1)?;
    if sol.delta_min >= Exponent::one() {
        return Err(Error::LiftObstructed {
            level: 1,
            reason: format!("defect {} is not below v(ϖ)", sol.delta_min),
        });
    }
    let p = problem.phi.descriptor().prime();
    Ok(SectionLiftState {
        level: 1,
        s: sol.g,
        allowance: allowance(p, problem.k, &sol.alpha, 1),
        c: sol.delta_min,
        correction: None,
    })
}

/// `s_{l+1} = s_l - g_{l+1}·(E/ϖ^c)` with `E = φ s_l - ϖ^c id` and `g_{l+1}`
/// an almost section modulo `ϖ^{l+1}` of the same defect.
pub fn lift_section_step<I: ExpInt>(
    state: &SectionLiftState<I>,
    problem: &SectionProblem<I>,
) -> Result<SectionLiftState<I>> {
    let next = state.level + 1;
    let d = level_desc(problem.phi.descriptor(), next)?;
    let corrector = solve_at_level(problem, next)?;
    if corrector.delta_min != state.c {
        return Err(Error::LiftObstructed {
            level: next,
            reason: format!(
                "defect changed from {} to {}",
                state.c, corrector.delta_min
            ),
        });
    }
    let phi = problem.phi.reinterpret(&d)?;
    let s = state.s.reinterpret(&d)?;
    let scalar = varpi_pow(&d, &state.c)?;
    let target = PresentationMatrix::diagonal(&d, vec![scalar; phi.rows()])?;
    let err = phi.mul(&s)?.sub(&target)?;
    let shift = -(&state.c * &d.varpi_valuation());
    let err_scaled = err.map(|x| {
        x.shift(&shift).map_err(|_| Error::LiftObstructed {
            level: next,
            reason: "defect is not divisible by ϖ^c".into(),
        })
    })?;
    let delta = corrector.g.mul(&err_scaled)?;
    let s_next = s.sub(&delta)?;
    let vpi = d.varpi_valuation();
    let correction = delta
        .valuation()
        .exact()
        .map(|v| Exponent::from_ratio(v.ratio() / vpi.ratio()));
    Ok(SectionLiftState {
        level: next,
        s: s_next,
        c: state.c.clone(),
        allowance: allowance(d.prime(), problem.k, &corrector.alpha, next),
        correction,
    })
}

/// Lifts to level `target` and compares `φ∘s_L` with `φ∘g` for the direct
/// full-precision solution, modulo `ϖ^L`.
pub fn lift_agreement_report<I: ExpInt>(problem: &SectionProblem<I>, target: u32) -> Result<Report> {
    let mut state = start_section_lift(problem)?;
    let mut within_allowance = state.c <= state.allowance;
    let mut levels_ok = true;
    while state.level < target {
        state = lift_section_step(&state, problem)?;
        within_allowance &= state.c <= state.allowance;
        let d = level_desc(problem.phi.descriptor(), state.level)?;
        levels_ok &= composite_is_scalar(
            &problem.phi.reinterpret(&d)?,
            &state.s,
            &state.c,
            d.precision(),
        )?;
    }
    let direct = section_solve(problem)?;
    let desc = problem.phi.descriptor();
    let cap = desc.varpi_valuation().scale(target as i64);
    let lifted = problem.phi.mul(&state.s.reinterpret(desc)?)?;
    let direct_comp = problem.phi.mul(&direct.g)?;
    let agree = direct.delta_min == state.c && lifted.eq_below(&direct_comp, &cap);
    Ok(Report::new(
        "lifted section agrees with the direct section modulo varpi^L",
        format!("c = {}", state.c),
        format!("delta_min = {}", direct.delta_min),
        agree && levels_ok && within_allowance,
        json!({
            "level": state.level,
            "allowance": state.allowance.to_string(),
            "within_allowance": within_allowance,
            "levels_verified": levels_ok,
            "last_correction": state.correction.as_ref().map(|c| c.to_string()),
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpres::CutIdeal;
    use num_bigint::BigInt;

    type E = Exponent<BigInt>;

    fn charp(p: u32, n: i64) -> Arc<RingDescriptor<BigInt>> {
        Arc::new(RingDescriptor::char_p(p, E::from_int(n)).unwrap())
    }

    fn diag(d: &Arc<RingDescriptor<BigInt>>, exps: &[E]) -> PresentationMatrix<BigInt> {
        let entries = exps
            .iter()
            .map(|e| varpi_pow(d, e).unwrap())
            .collect();
        PresentationMatrix::diagonal(d, entries).unwrap()
    }

    #[test]
    fn almost_zero_examples() {
        let setup = BasicSetup::new(&charp(2, 4));
        let residue = CutModule::<BigInt>::cyclic(CutIdeal::maximal());
        assert!(is_almost_zero(&residue) && almost_zero_by_epsilon(&setup, &residue, 6));
        let quarter = CutModule::cyclic(CutIdeal::closed(E::frac(1, 4)));
        assert!(!is_almost_zero(&quarter) && !almost_zero_by_epsilon(&setup, &quarter, 6));
        assert!(is_almost_zero(&CutModule::<BigInt>::zero()));
    }

    #[test]
    fn witness_examples() {
        let setup = BasicSetup::new(&charp(2, 4));
        let m = CutModule::cyclic(CutIdeal::open(E::frac(1, 2)));
        let w = almost_fg_witness(&setup, &m, 2);
        assert_eq!(w.generator_valuations, vec![E::frac(1, 4)]);
        assert_eq!(replay_witness(&m, &w), None);
        let fp = CutModule::cyclic(CutIdeal::closed(E::frac(1, 2)));
        assert_eq!(almost_fg_witness(&setup, &fp, 2).generator_valuations, vec![E::zero()]);
        assert!(almost_fg_witness(&setup, &CutModule::zero(), 2)
            .generator_valuations
            .is_empty());
    }

    #[test]
    fn nakayama_examples() {
        let setup = BasicSetup::new(&charp(2, 4));
        let m = CutModule::cyclic(CutIdeal::closed(E::frac(3, 2)));
        let reduced = reduce_mod_varpi(&setup, &m);
        assert_eq!(reduced, CutModule::cyclic(CutIdeal::closed(E::one())));
        let w = almost_fg_witness(&setup, &reduced, 2);
        let lifted = nakayama_lift(&setup, &w, &m).unwrap();
        assert_eq!(lifted.generator_valuations, vec![E::zero()]);
        assert!(lifted.rounds.unwrap() >= 1);

        let zero = almost_fg_witness(&setup, &CutModule::zero(), 2);
        assert!(nakayama_lift(&setup, &zero, &CutModule::zero()).is_ok());

        let broken = AlmostFgWitness {
            generator_valuations: vec![E::frac(1, 2)],
            ..w
        };
        assert!(matches!(
            nakayama_lift(&setup, &broken, &m),
            Err(Error::WitnessInvalid(_))
        ));
    }

    #[test]
    fn section_examples() {
        let d = charp(2, 4);
        let phi = diag(&d, &[E::frac(1, 2), E::frac(1, 4)]);
        let problem = SectionProblem {
            phi: phi.clone(),
            alpha: None,
            k: 1,
        };
        let sol = section_solve(&problem).unwrap();
        assert_eq!(sol.delta_min, E::frac(1, 2));
        assert_eq!(sol.g, diag(&d, &[E::zero(), E::frac(1, 4)]));
        assert!(composite_is_scalar(&phi, &sol.g, &sol.delta_min, d.precision()).unwrap());

        let id = SectionProblem {
            phi: PresentationMatrix::identity(&d, 2),
            alpha: None,
            k: 3,
        };
        assert!(section_solve(&id).unwrap().delta_min.is_zero());

        let given = SectionProblem {
            phi,
            alpha: Some(E::frac(1, 2)),
            k: 5,
        };
        let sol = section_solve(&given).unwrap();
        assert!(sol.alpha_certified && sol.bound_holds());
        assert_eq!(sol.bound, E::frac(33, 32));
    }

    #[test]
    fn lift_examples() {
        let d = charp(2, 4);
        let problem = SectionProblem {
            phi: diag(&d, &[E::frac(1, 2), E::frac(1, 4)]),
            alpha: None,
            k: 2,
        };
        let r = lift_agreement_report(&problem, 3).unwrap();
        assert!(r.passed(), "{r:?}");

        let id = SectionProblem {
            phi: PresentationMatrix::identity(&d, 2),
            alpha: None,
            k: 1,
        };
        let mut st = start_section_lift(&id).unwrap();
        for _ in 0..3 {
            st = lift_section_step(&st, &id).unwrap();
            assert!(st.c.is_zero());
        }
        assert!(matches!(
            lift_section_step(&st, &id),
            Err(Error::LiftObstructed { level: 5, .. })
        ));
    }

    #[test]
    fn mixed_section() {
        let d = Arc::new(RingDescriptor::<BigInt>::mixed(3, E::from_int(2)).unwrap());
        let phi = diag(&d, &[E::frac(1, 3), E::zero()]);
        let problem = SectionProblem {
            phi,
            alpha: None,
            k: 1,
        };
        let r = lift_agreement_report(&problem, 4).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
