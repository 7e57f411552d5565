//! Counterfactual gates.
//!
//! The chained-Zeno (CQZE) setup acts on an absorber qubit (`pass`/`block`,
//! the electron) and a photon polarization. For a variant whose reference
//! polarization is `I` (and `I†` the orthogonal one):
//!
//! | absorber | photon in | photon out |
//! |----------|-----------|------------|
//! | pass     | I         | I          |
//! | pass     | I†        | lost       |
//! | block    | I         | I†         |
//! | block    | I†        | I          |
//!
//! Running both variants gives the loss-free counterfactual CNOT: `pass` leaves
//! the photon alone, `block` swaps `H ↔ V`. With `pass = 0`, `block = 1`,
//! `H = 0`, `V = 1` it is an ordinary CNOT controlled by the electron.

use alloc::vec;

use num_complex::Complex64;
use rand::Rng;

use crate::math::sqrt;
use crate::state::{QubitId, Role, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Absorber {
    Pass,
    Block,
}

impl Absorber {
    pub fn bit(self) -> usize {
        match self {
            Absorber::Pass => 0,
            Absorber::Block => 1,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Absorber::Block
        } else {
            Absorber::Pass
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn bit(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarization::V
        } else {
            Polarization::H
        }
    }

    pub fn orthogonal(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CqzeVariant {
    /// `I = H`.
    H,
    /// `I = V`.
    V,
}

impl CqzeVariant {
    pub fn reference(self) -> Polarization {
        match self {
            CqzeVariant::H => Polarization::H,
            CqzeVariant::V => Polarization::V,
        }
    }

    /// One row of the input/output table; `None` is the loss entry.
    pub fn map(self, absorber: Absorber, photon: Polarization) -> Option<Polarization> {
        let i = self.reference();
        match (absorber, photon == i) {
            (Absorber::Pass, true) => Some(i),
            (Absorber::Pass, false) => None,
            (Absorber::Block, true) => Some(i.orthogonal()),
            (Absorber::Block, false) => Some(i),
        }
    }
}

/// Loss-free counterfactual CNOT on one basis pair.
pub fn cf_cnot_map(absorber: Absorber, photon: Polarization) -> Polarization {
    match absorber {
        Absorber::Pass => photon,
        Absorber::Block => photon.orthogonal(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FailureMode {
    /// A heralded failure discards the state and ends the enclosing trial.
    #[default]
    AbortTrial,
}

/// Heralded-success model of one counterfactual CNOT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfGateModel {
    success_probability: f64,
    failure_mode: FailureMode,
}

impl CfGateModel {
    pub fn new(success_probability: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&success_probability) {
            return Err(Error::InvalidProbability {
                name: "gate success probability",
                value: success_probability,
            });
        }
        Ok(Self {
            success_probability,
            failure_mode: FailureMode::AbortTrial,
        })
    }

    pub fn ideal() -> Self {
        Self {
            success_probability: 1.0,
            failure_mode: FailureMode::AbortTrial,
        }
    }

    pub fn success_probability(&self) -> f64 {
        self.success_probability
    }

    pub fn failure_mode(&self) -> FailureMode {
        self.failure_mode
    }

    /// One Bernoulli draw; always consumes exactly one uniform.
    pub fn attempt<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        let u: f64 = rng.random();
        u < self.success_probability
    }
}

impl Default for CfGateModel {
    fn default() -> Self {
        Self::ideal()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateResult {
    Applied(StateVector),
    HeraldedLoss,
}

impl GateResult {
    pub fn is_applied(&self) -> bool {
        matches!(self, GateResult::Applied(_))
    }

    pub fn state(&self) -> Option<&StateVector> {
        match self {
            GateResult::Applied(s) => Some(s),
            GateResult::HeraldedLoss => None,
        }
    }
}

fn role_masks(state: &StateVector, e: QubitId, p: QubitId) -> Result<(usize, usize)> {
    if e == p {
        return Err(Error::RepeatedOperand(e));
    }
    if state.label(e)?.role() != Role::Electron {
        return Err(Error::RoleMismatch {
            qubit: e,
            expected: Role::Electron,
        });
    }
    if state.label(p)?.role() != Role::Photon {
        return Err(Error::RoleMismatch {
            qubit: p,
            expected: Role::Photon,
        });
    }
    Ok((state.mask(e)?, state.mask(p)?))
}

fn decode(index: usize, me: usize, mp: usize) -> (Absorber, Polarization) {
    (
        Absorber::from_bit(index & me != 0),
        Polarization::from_bit(index & mp != 0),
    )
}

fn encode(index: usize, me: usize, mp: usize, a: Absorber, p: Polarization) -> usize {
    let mut i = index & !(me | mp);
    if a.bit() == 1 {
        i |= me;
    }
    if p.bit() == 1 {
        i |= mp;
    }
    i
}

/// Probability that `variant` loses the photon: the weight on `|pass⟩|I†⟩`.
pub fn cqze_loss_probability(variant: CqzeVariant, state: &StateVector, e: QubitId, p: QubitId) -> Result<f64> {
    let (me, mp) = role_masks(state, e, p)?;
    let norm = state.norm_sqr();
    if norm <= f64::MIN_POSITIVE {
        return Err(Error::ZeroNorm);
    }
    let lost: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let (a, pol) = decode(*i, me, mp);
            variant.map(a, pol).is_none()
        })
        .map(|(_, x)| x.norm_sqr())
        .sum();
    Ok(lost / norm)
}

/// Applies one CQZE variant to the `(e, p)` pair.
///
/// The `|pass⟩|I†⟩` component is lost with its Born weight (one uniform draw);
/// otherwise it is projected out and the remaining components are mapped.
pub fn cqze_map<R: Rng + ?Sized>(
    variant: CqzeVariant,
    state: StateVector,
    e: QubitId,
    p: QubitId,
    rng: &mut R,
) -> Result<GateResult> {
    let loss = cqze_loss_probability(variant, &state, e, p)?;
    let u: f64 = rng.random();
    if u < loss {
        return Ok(GateResult::HeraldedLoss);
    }
    let (me, mp) = role_masks(&state, e, p)?;
    let amps = state.amplitudes();
    let mut out = vec![Complex64::default(); amps.len()];
    for (i, x) in amps.iter().enumerate() {
        let (a, pol) = decode(i, me, mp);
        if let Some(pol_out) = variant.map(a, pol) {
            out[encode(i, me, mp, a, pol_out)] += x;
        }
    }
    let kept: f64 = out.iter().map(|x| x.norm_sqr()).sum();
    let s = 1.0 / sqrt(kept);
    out.iter_mut().for_each(|x| *x *= s);
    Ok(GateResult::Applied(StateVector::from_amplitudes(
        state.labels().to_vec(),
        out,
    )?))
}

/// Loss-free counterfactual CNOT, in place.
pub fn cf_cnot_ideal(state: &mut StateVector, e: QubitId, p: QubitId) -> Result<()> {
    let (me, mp) = role_masks(state, e, p)?;
    let amps = state.amplitudes();
    let mut out = vec![Complex64::default(); amps.len()];
    for (i, x) in amps.iter().enumerate() {
        let (a, pol) = decode(i, me, mp);
        out[encode(i, me, mp, a, cf_cnot_map(a, pol))] = *x;
    }
    *state = StateVector::from_amplitudes(state.labels().to_vec(), out)?;
    Ok(())
}

/// Counterfactual CNOT with heralded failure.
pub fn cf_cnot<R: Rng + ?Sized>(
    mut state: StateVector,
    e: QubitId,
    p: QubitId,
    model: &CfGateModel,
    rng: &mut R,
) -> Result<GateResult> {
    role_masks(&state, e, p)?;
    if !model.attempt(rng) {
        return Ok(GateResult::HeraldedLoss);
    }
    cf_cnot_ideal(&mut state, e, p)?;
    Ok(GateResult::Applied(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{c, real, FRAC_1_SQRT_2};
    use crate::state::{Gate, Owner, QubitLabel};
    use alloc::vec::Vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const E: QubitId = QubitId(1);
    const P: QubitId = QubitId(2);

    fn pair_labels() -> Vec<QubitLabel> {
        vec![QubitLabel::electron(1, Owner::Bob), QubitLabel::photon(2, Owner::Alice)]
    }

    fn basis(a: Absorber, p: Polarization) -> StateVector {
        let mut amps = vec![Complex64::default(); 4];
        amps[a.bit() * 2 + p.bit()] = real(1.0);
        StateVector::from_amplitudes(pair_labels(), amps).unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn table_rows_h_variant() {
        use Absorber::*;
        use Polarization::*;
        let r = cqze_map(CqzeVariant::H, basis(Pass, H), E, P, &mut rng()).unwrap();
        assert_eq!(r.state(), Some(&basis(Pass, H)));
        let r = cqze_map(CqzeVariant::H, basis(Block, H), E, P, &mut rng()).unwrap();
        assert_eq!(r.state(), Some(&basis(Block, V)));
        let r = cqze_map(CqzeVariant::H, basis(Block, V), E, P, &mut rng()).unwrap();
        assert_eq!(r.state(), Some(&basis(Block, H)));
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = cqze_map(CqzeVariant::H, basis(Pass, V), E, P, &mut rng).unwrap();
            assert_eq!(r, GateResult::HeraldedLoss);
        }
    }

    #[test]
    fn table_rows_v_variant() {
        use Absorber::*;
        use Polarization::*;
        let r = cqze_map(CqzeVariant::V, basis(Pass, V), E, P, &mut rng()).unwrap();
        assert_eq!(r.state(), Some(&basis(Pass, V)));
        let r = cqze_map(CqzeVariant::V, basis(Block, V), E, P, &mut rng()).unwrap();
        assert_eq!(r.state(), Some(&basis(Block, H)));
        let r = cqze_map(CqzeVariant::V, basis(Block, H), E, P, &mut rng()).unwrap();
        assert_eq!(r.state(), Some(&basis(Block, V)));
        let r = cqze_map(CqzeVariant::V, basis(Pass, H), E, P, &mut rng()).unwrap();
        assert_eq!(r, GateResult::HeraldedLoss);
    }

    #[test]
    fn loss_branch_in_superposition() {
        // (|pass H⟩ + |pass V⟩)/√2: half the weight is lost under the H variant
        let h = FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(pair_labels(), vec![real(h), real(h), real(0.0), real(0.0)]).unwrap();
        let loss = cqze_loss_probability(CqzeVariant::H, &s, E, P).unwrap();
        assert!((loss - 0.5).abs() < 1e-12);
        let mut lost = 0;
        let mut rng = rng();
        for _ in 0..4000 {
            match cqze_map(CqzeVariant::H, s.clone(), E, P, &mut rng).unwrap() {
                GateResult::HeraldedLoss => lost += 1,
                GateResult::Applied(out) => assert_eq!(out, basis(Absorber::Pass, Polarization::H)),
            }
        }
        // 3σ = 3·√(0.25/4000) ≈ 0.0237
        assert!((lost as f64 / 4000.0 - 0.5).abs() < 0.0237);
    }

    #[test]
    fn role_checks() {
        let s = basis(Absorber::Pass, Polarization::H);
        assert_eq!(
            cf_cnot_ideal(&mut s.clone(), P, E),
            Err(Error::RoleMismatch {
                qubit: P,
                expected: Role::Electron
            })
        );
        assert!(matches!(
            cqze_map(CqzeVariant::H, s, E, QubitId(9), &mut rng()),
            Err(Error::UnknownQubit(_))
        ));
    }

    #[test]
    fn superposed_absorber_with_h_photon() {
        // (α|pass⟩ + β|block⟩)|H⟩ → α|pass H⟩ + β|block V⟩
        let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
        let mut s = StateVector::from_amplitudes(pair_labels(), vec![alpha, real(0.0), beta, real(0.0)]).unwrap();
        cf_cnot_ideal(&mut s, E, P).unwrap();
        assert_eq!(s.amplitudes(), &[alpha, real(0.0), real(0.0), beta]);
    }

    #[test]
    fn ideal_map_equals_standard_cnot() {
        for a in [Absorber::Pass, Absorber::Block] {
            for p in [Polarization::H, Polarization::V] {
                let mut cf = basis(a, p);
                cf_cnot_ideal(&mut cf, E, P).unwrap();
                let mut plain = basis(a, p);
                plain.apply(Gate::Cnot, &[E, P]).unwrap();
                assert_eq!(cf, plain);
            }
        }
    }

    #[test]
    fn ideal_map_agrees_with_each_variant_off_the_loss_branch() {
        for v in [CqzeVariant::H, CqzeVariant::V] {
            for a in [Absorber::Pass, Absorber::Block] {
                for p in [Polarization::H, Polarization::V] {
                    if let Some(out) = v.map(a, p) {
                        assert_eq!(out, cf_cnot_map(a, p));
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_success_probabilities() {
        let s = basis(Absorber::Block, Polarization::H);
        let mut want = s.clone();
        cf_cnot_ideal(&mut want, E, P).unwrap();
        let mut rng = rng();
        let sure = CfGateModel::new(1.0).unwrap();
        let never = CfGateModel::new(0.0).unwrap();
        for _ in 0..100 {
            assert_eq!(
                cf_cnot(s.clone(), E, P, &sure, &mut rng).unwrap(),
                GateResult::Applied(want.clone())
            );
            assert_eq!(
                cf_cnot(s.clone(), E, P, &never, &mut rng).unwrap(),
                GateResult::HeraldedLoss
            );
        }
        assert!(CfGateModel::new(1.5).is_err());
        assert!(CfGateModel::new(-0.1).is_err());
    }

    #[test]
    fn success_fraction_is_binomial() {
        let model = CfGateModel::new(0.9).unwrap();
        let s = basis(Absorber::Pass, Polarization::H);
        let mut rng = rng();
        let n = 100_000;
        let applied = (0..n)
            .filter(|_| cf_cnot(s.clone(), E, P, &model, &mut rng).unwrap().is_applied())
            .count();
        let bound = 3.0 * sqrt(0.9 * 0.1 / n as f64);
        assert!((applied as f64 / n as f64 - 0.9).abs() < bound);
    }

    fn arb_pair() -> impl Strategy<Value = StateVector> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)
            .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
            .prop_map(|v| {
                StateVector::from_unnormalized(pair_labels(), v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn ideal_cnot_is_involutive(s in arb_pair()) {
            let mut t = s.clone();
            cf_cnot_ideal(&mut t, E, P).unwrap();
            cf_cnot_ideal(&mut t, E, P).unwrap();
            prop_assert!(t.distance(&s).unwrap() < 1e-10);
            prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn no_loss_without_pass_v_weight(alpha in -1.0f64..1.0, beta in -1.0f64..1.0, seed in 0u64..1000) {
            prop_assume!(alpha * alpha + beta * beta > 1e-3);
            // photon in H, absorber arbitrary
            let s = StateVector::from_unnormalized(pair_labels(), vec![real(alpha), real(0.0), real(beta), real(0.0)]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            prop_assert!(cqze_map(CqzeVariant::H, s, E, P, &mut rng).unwrap().is_applied());
        }
    }
}
