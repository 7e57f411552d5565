//! Three-party counterfactual entanglement transmission.
//!
//! Charlie holds two electrons, Alice and Bob one photon each:
//!
//! * `T0`: electrons in the ground state `|g g⟩`, photons in their input
//!   polarizations;
//! * `T1`: Charlie entangles the electrons into `(|gg⟩ + |e′e′⟩)/√2`;
//! * `T2`: a counterfactual CNOT runs from each electron to its photon;
//! * `T3`: Charlie Bell-measures the electrons, leaving the photons entangled.
//!
//! The register order is `e1, e2, p1, p2` with ids 1–4. The same construction
//! with k electrons and k photons gives GHZ transmission ([`run_ghz_transmission`]).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::bell::{BellOutcome, Pauli};
use crate::cfgate::{CfGateModel, Polarization};
use crate::density::{concurrence, fidelity, DensityMatrix};
use crate::log::{counterfactual_structure_ok, MeasurementKind, OpLog, TrackedState};
use crate::math::{real, FRAC_1_SQRT_2};
use crate::rng;
use crate::state::{Gate, Owner, QubitId, QubitLabel, StateVector};
use crate::{Error, Result};

pub const E1: QubitId = QubitId(1);
pub const E2: QubitId = QubitId(2);
pub const P1: QubitId = QubitId(3);
pub const P2: QubitId = QubitId(4);

/// Largest k accepted by GHZ transmission (2k qubits).
pub const MAX_GHZ_PARTIES: usize = 8;

/// Photon input `λ|H⟩ + μ|V⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonInput {
    lambda: Complex64,
    mu: Complex64,
}

impl PhotonInput {
    pub const H: PhotonInput = PhotonInput {
        lambda: Complex64::new(1.0, 0.0),
        mu: Complex64::new(0.0, 0.0),
    };
    pub const V: PhotonInput = PhotonInput {
        lambda: Complex64::new(0.0, 0.0),
        mu: Complex64::new(1.0, 0.0),
    };

    pub fn new(lambda: Complex64, mu: Complex64) -> Result<Self> {
        let norm = lambda.norm_sqr() + mu.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    /// Amplitudes over `|H⟩ = |0⟩`, `|V⟩ = |1⟩`.
    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.lambda, self.mu]
    }
}

impl From<Polarization> for PhotonInput {
    fn from(p: Polarization) -> Self {
        match p {
            Polarization::H => PhotonInput::H,
            Polarization::V => PhotonInput::V,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub photons: [PhotonInput; 2],
    pub gate_model: CfGateModel,
    pub seed: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            photons: [PhotonInput::H, PhotonInput::H],
            gate_model: CfGateModel::ideal(),
            seed: 0,
        }
    }
}

pub fn register() -> Vec<QubitLabel> {
    vec![
        QubitLabel::electron(1, Owner::Charlie),
        QubitLabel::electron(2, Owner::Charlie),
        QubitLabel::photon(3, Owner::Alice),
        QubitLabel::photon(4, Owner::Bob),
    ]
}

/// `(electron, photon)` pairs joined by counterfactual CNOTs.
pub fn placements() -> [(QubitId, QubitId); 2] {
    [(E1, P1), (E2, P2)]
}

/// Puts electrons that start in `|g…g⟩` into `(|g…g⟩ + |e′…e′⟩)/√2`.
///
/// Hadamard and CNOTs are taken in the electrons' energy frame, where `|g⟩`
/// is the logical zero; in the pass/block bit convention (`|g⟩ = |1⟩ₑ`) that
/// frame is entered and left with X on every electron.
pub fn entangle_ground_electrons(ts: &mut TrackedState, electrons: &[QubitId]) -> Result<()> {
    let (&first, rest) = electrons.split_first().ok_or(Error::EmptySubset)?;
    for &e in electrons {
        ts.gate(Gate::X, &[e])?;
    }
    ts.gate(Gate::H, &[first])?;
    for &e in rest {
        ts.gate(Gate::Cnot, &[first, e])?;
    }
    for &e in electrons {
        ts.gate(Gate::X, &[e])?;
    }
    Ok(())
}

/// Electrons to `|g⟩`, photons to their inputs.
fn prepare_t0(photons: &[PhotonInput; 2]) -> Result<TrackedState> {
    let mut ts = TrackedState::new(register())?;
    ts.gate(Gate::X, &[E1])?;
    ts.gate(Gate::X, &[E2])?;
    ts.prepare(P1, photons[0].amplitudes())?;
    ts.prepare(P2, photons[1].amplitudes())?;
    Ok(ts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checkpoint {
    T0,
    T1,
    T2,
}

/// One electron-measurement branch at `T3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub outcome: BellOutcome,
    pub probability: f64,
    /// Full post-measurement register.
    pub state: StateVector,
    pub photons: DensityMatrix,
    pub photon_concurrence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoints {
    pub t0: StateVector,
    pub t1: StateVector,
    pub t2: StateVector,
    /// Branches with nonzero probability, in [`BellOutcome::ALL`] order.
    pub t3: Vec<Branch>,
}

impl Checkpoints {
    pub fn get(&self, cp: Checkpoint) -> &StateVector {
        match cp {
            Checkpoint::T0 => &self.t0,
            Checkpoint::T1 => &self.t1,
            Checkpoint::T2 => &self.t2,
        }
    }
}

const BRANCH_CUTOFF: f64 = 1e-14;

/// Simulates the loss-free protocol and enumerates every measurement branch.
pub fn checkpoint_states(photons: &[PhotonInput; 2]) -> Result<Checkpoints> {
    let mut ts = prepare_t0(photons)?;
    let t0 = ts.state().clone();
    entangle_ground_electrons(&mut ts, &[E1, E2])?;
    let t1 = ts.state().clone();
    ts.cf_cnot_ideal(E1, P1)?;
    ts.cf_cnot_ideal(E2, P2)?;
    let t2 = ts.state().clone();

    let probs = t2.bell_probabilities(E1, E2)?;
    let mut t3 = Vec::new();
    for outcome in BellOutcome::ALL {
        if probs[outcome.index()] <= BRANCH_CUTOFF {
            continue;
        }
        let mut state = t2.clone();
        let probability = state.project_bell(E1, E2, outcome)?;
        let photons = state.reduced_density(&[P1, P2])?;
        let photon_concurrence = concurrence(&photons)?;
        t3.push(Branch {
            outcome,
            probability,
            state,
            photons,
            photon_concurrence,
        });
    }
    Ok(Checkpoints { t0, t1, t2, t3 })
}

fn flip(u: [Complex64; 2], x: usize) -> [Complex64; 2] {
    if x == 1 {
        [u[1], u[0]]
    } else {
        u
    }
}

/// Closed-form joint state at a checkpoint, written directly from the
/// amplitudes rather than by simulating gates.
pub fn expected_checkpoint(cp: Checkpoint, photons: &[PhotonInput; 2]) -> Result<StateVector> {
    let (u1, u2) = (photons[0].amplitudes(), photons[1].amplitudes());
    let mut amps = vec![Complex64::default(); 16];
    let idx = |e1: usize, e2: usize, a: usize, b: usize| (e1 << 3) | (e2 << 2) | (a << 1) | b;
    for a in 0..2 {
        for b in 0..2 {
            match cp {
                Checkpoint::T0 => amps[idx(1, 1, a, b)] = u1[a] * u2[b],
                Checkpoint::T1 => {
                    for x in 0..2 {
                        amps[idx(x, x, a, b)] = u1[a] * u2[b] * FRAC_1_SQRT_2;
                    }
                }
                Checkpoint::T2 => {
                    for x in 0..2 {
                        amps[idx(x, x, a, b)] = flip(u1, x)[a] * flip(u2, x)[b] * FRAC_1_SQRT_2;
                    }
                }
            }
        }
    }
    StateVector::from_amplitudes(register(), amps)
}

/// Closed-form probability and photon-pair state for one electron outcome,
/// `None` if the outcome cannot occur.
///
/// Projecting `(1/√2) Σₓ |xx⟩ₑ ⊗ Xˣu₁ ⊗ Xˣu₂` onto `ψ±` leaves the photons in
/// `(u₁⊗u₂ ± Xu₁⊗Xu₂)/2`; the `φ±` projections vanish.
pub fn expected_photon_branch(outcome: BellOutcome, photons: &[PhotonInput; 2]) -> Result<Option<(f64, StateVector)>> {
    let sign = match outcome {
        BellOutcome::PsiPlus => 1.0,
        BellOutcome::PsiMinus => -1.0,
        BellOutcome::PhiPlus | BellOutcome::PhiMinus => return Ok(None),
    };
    let (u1, u2) = (photons[0].amplitudes(), photons[1].amplitudes());
    let mut amps = vec![Complex64::default(); 4];
    for a in 0..2 {
        for b in 0..2 {
            amps[(a << 1) | b] = (u1[a] * u2[b] + flip(u1, 1)[a] * flip(u2, 1)[b] * sign) * 0.5;
        }
    }
    let prob: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
    if prob <= BRANCH_CUTOFF {
        return Ok(None);
    }
    let labels = register()[2..].to_vec();
    Ok(Some((prob, StateVector::from_unnormalized(labels, amps)?)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub electron_outcome: Option<BellOutcome>,
    pub outcome_probability: Option<f64>,
    pub photon_state: Option<DensityMatrix>,
    pub photon_concurrence: Option<f64>,
    pub counterfactual_structure_ok: bool,
    pub aborted: bool,
    pub log: OpLog,
}

/// Runs the protocol once, seeded from `config.seed`.
pub fn run_transmission(config: &ProtocolConfig) -> Result<ProtocolResult> {
    run_transmission_with(&config.photons, &config.gate_model, &mut rng::seeded(config.seed))
}

/// Runs the protocol once on a caller-supplied random stream.
///
/// Draws one uniform per gate attempt and one for the Bell measurement.
pub fn run_transmission_with<R: Rng + ?Sized>(
    photons: &[PhotonInput; 2],
    model: &CfGateModel,
    rng: &mut R,
) -> Result<ProtocolResult> {
    let mut ts = prepare_t0(photons)?;
    entangle_ground_electrons(&mut ts, &[E1, E2])?;
    for (e, p) in placements() {
        if !ts.cf_cnot(e, p, model, rng)? {
            let (_, log) = ts.into_parts();
            return Ok(ProtocolResult {
                electron_outcome: None,
                outcome_probability: None,
                photon_state: None,
                photon_concurrence: None,
                counterfactual_structure_ok: counterfactual_structure_ok(&log, &register(), &placements()),
                aborted: true,
                log,
            });
        }
    }
    let (outcome, prob) = ts.bell_measure(MeasurementKind::Electron, E1, E2, rng)?;
    let photons = ts.state().reduced_density(&[P1, P2])?;
    let conc = concurrence(&photons)?;
    let (_, log) = ts.into_parts();
    Ok(ProtocolResult {
        electron_outcome: Some(outcome),
        outcome_probability: Some(prob),
        photon_state: Some(photons),
        photon_concurrence: Some(conc),
        counterfactual_structure_ok: counterfactual_structure_ok(&log, &register(), &placements()),
        aborted: false,
        log,
    })
}

/// GHZ-basis outcome on k electrons: `sign` is the readout of electron 1 after
/// the disentangling circuit, `flips[i]` that of electron `i + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GhzOutcome {
    pub sign: bool,
    pub flips: Vec<bool>,
}

impl GhzOutcome {
    /// Readout order is electrons 2..k then electron 1, most significant first.
    fn from_pattern(pattern: usize, k: usize) -> Self {
        let sign = pattern & 1 == 1;
        let flips = (0..k - 1).map(|i| (pattern >> (k - 1 - i)) & 1 == 1).collect();
        Self { sign, flips }
    }

    /// Frame on photons 1..k: `Z` on photon 1 for the sign, `X` on photon
    /// `i` for each flip.
    pub fn frame(&self) -> Vec<Pauli> {
        let mut f = vec![Pauli::from_bits(false, self.sign)];
        f.extend(self.flips.iter().map(|&b| Pauli::from_bits(b, false)));
        f
    }

    /// The equivalent Bell outcome for k = 2.
    pub fn as_bell(&self) -> Option<BellOutcome> {
        match self.flips.as_slice() {
            [b] => Some(BellOutcome::ALL[(usize::from(*b) << 1) | usize::from(self.sign)]),
            _ => None,
        }
    }
}

pub fn ghz_register(k: usize) -> Result<Vec<QubitLabel>> {
    if !(2..=MAX_GHZ_PARTIES).contains(&k) {
        return Err(Error::OutOfRange {
            what: "GHZ party count",
            value: k,
            max: MAX_GHZ_PARTIES,
        });
    }
    let k32 = k as u32;
    let mut labels: Vec<QubitLabel> = (1..=k32).map(|i| QubitLabel::electron(i, Owner::Charlie)).collect();
    labels.extend((1..=k32).map(|i| QubitLabel::photon(k32 + i, Owner::Party(i as u16))));
    Ok(labels)
}

fn ghz_ids(k: usize) -> (Vec<QubitId>, Vec<QubitId>) {
    let k32 = k as u32;
    (
        (1..=k32).map(QubitId).collect(),
        (1..=k32).map(|i| QubitId(k32 + i)).collect(),
    )
}

/// `(|0…0⟩ + |1…1⟩)/√2` over `labels`.
pub fn ghz_state(labels: Vec<QubitLabel>) -> Result<StateVector> {
    let d = 1 << labels.len();
    let mut amps = vec![Complex64::default(); d];
    amps[0] = real(FRAC_1_SQRT_2);
    amps[d - 1] = real(FRAC_1_SQRT_2);
    StateVector::from_amplitudes(labels, amps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhzResult {
    pub k: usize,
    pub outcome: Option<GhzOutcome>,
    pub outcome_probability: Option<f64>,
    pub photon_state: Option<DensityMatrix>,
    pub frame: Vec<Pauli>,
    /// Fidelity of the frame-corrected photons to `(|0…0⟩ + |1…1⟩)/√2`.
    pub corrected_fidelity: Option<f64>,
    pub counterfactual_structure_ok: bool,
    pub aborted: bool,
    pub log: OpLog,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhzBranch {
    pub outcome: GhzOutcome,
    pub probability: f64,
    pub photon_state: DensityMatrix,
    pub corrected_fidelity: f64,
}

/// State right before the electron readout, or the log of an aborted run.
fn ghz_prepare<R: Rng + ?Sized>(
    k: usize,
    model: &CfGateModel,
    rng: &mut R,
) -> Result<core::result::Result<TrackedState, OpLog>> {
    let labels = ghz_register(k)?;
    let (electrons, photons) = ghz_ids(k);
    let mut ts = TrackedState::new(labels)?;
    for &e in &electrons {
        ts.gate(Gate::X, &[e])?;
    }
    entangle_ground_electrons(&mut ts, &electrons)?;
    for (&e, &p) in electrons.iter().zip(&photons) {
        if !ts.cf_cnot(e, p, model, rng)? {
            return Ok(Err(ts.into_parts().1));
        }
    }
    // GHZ-basis measurement: CNOT(1 → i), then H on electron 1, then readout
    for &e in &electrons[1..] {
        ts.gate(Gate::Cnot, &[electrons[0], e])?;
    }
    ts.gate(Gate::H, &[electrons[0]])?;
    Ok(Ok(ts))
}

fn readout_order(electrons: &[QubitId]) -> Vec<QubitId> {
    let mut order = electrons[1..].to_vec();
    order.push(electrons[0]);
    order
}

fn corrected_fidelity(rho: &DensityMatrix, photon_labels: Vec<QubitLabel>, frame: &[Pauli]) -> Result<f64> {
    let mut target = ghz_state(photon_labels)?;
    let ids: Vec<QubitId> = target.labels().iter().map(|l| l.id()).collect();
    for (pauli, id) in frame.iter().zip(ids) {
        pauli.apply(&mut target, id)?;
    }
    fidelity(rho, &target)
}

fn ghz_placements(k: usize) -> Vec<(QubitId, QubitId)> {
    let (e, p) = ghz_ids(k);
    e.into_iter().zip(p).collect()
}

/// Transmits a k-electron GHZ state onto k independent H photons.
pub fn run_ghz_transmission(k: usize, config: &ProtocolConfig) -> Result<GhzResult> {
    run_ghz_transmission_with(k, &config.gate_model, &mut rng::seeded(config.seed))
}

pub fn run_ghz_transmission_with<R: Rng + ?Sized>(k: usize, model: &CfGateModel, rng: &mut R) -> Result<GhzResult> {
    let labels = ghz_register(k)?;
    let placements = ghz_placements(k);
    let mut ts = match ghz_prepare(k, model, rng)? {
        Ok(ts) => ts,
        Err(log) => {
            return Ok(GhzResult {
                k,
                outcome: None,
                outcome_probability: None,
                photon_state: None,
                frame: Vec::new(),
                corrected_fidelity: None,
                counterfactual_structure_ok: counterfactual_structure_ok(&log, &labels, &placements),
                aborted: true,
                log,
            })
        }
    };
    let (electrons, photons) = ghz_ids(k);
    let (pattern, prob) = ts.readout(&readout_order(&electrons), rng)?;
    let outcome = GhzOutcome::from_pattern(pattern, k);
    let frame = outcome.frame();
    let rho = ts.state().reduced_density(&photons)?;
    let fid = corrected_fidelity(&rho, labels[k..].to_vec(), &frame)?;
    let (_, log) = ts.into_parts();
    Ok(GhzResult {
        k,
        outcome: Some(outcome),
        outcome_probability: Some(prob),
        photon_state: Some(rho),
        frame,
        corrected_fidelity: Some(fid),
        counterfactual_structure_ok: counterfactual_structure_ok(&log, &labels, &placements),
        aborted: false,
        log,
    })
}

/// Every nonzero-probability readout branch of the loss-free GHZ run.
pub fn ghz_branches(k: usize) -> Result<Vec<GhzBranch>> {
    let labels = ghz_register(k)?;
    let mut dummy = rng::seeded(0);
    let ts = match ghz_prepare(k, &CfGateModel::ideal(), &mut dummy)? {
        Ok(ts) => ts,
        Err(_) => unreachable!("ideal gates never fail"),
    };
    let (electrons, photons) = ghz_ids(k);
    let order = readout_order(&electrons);
    let probs = ts.state().outcome_probabilities(&order)?;
    let mut out = Vec::new();
    for (pattern, &p) in probs.iter().enumerate() {
        if p <= BRANCH_CUTOFF {
            continue;
        }
        let mut branch = ts.clone();
        let probability = branch.project_readout(&order, pattern)?;
        let outcome = GhzOutcome::from_pattern(pattern, k);
        let rho = branch.state().reduced_density(&photons)?;
        let corrected_fidelity = corrected_fidelity(&rho, labels[k..].to_vec(), &outcome.frame())?;
        out.push(GhzBranch {
            outcome,
            probability,
            photon_state: rho,
            corrected_fidelity,
        });
    }
    Ok(out)
}
