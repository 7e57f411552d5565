use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::topology::ChainTopology;
use crate::bell::{BellOutcome, Pauli};
use crate::cfgate::CfGateModel;
use crate::density::fidelity;
use crate::log::{MeasurementKind, OpLog, Operation, TrackedState};
use crate::protocol::entangle_ground_electrons;
use crate::state::{Gate, Role, StateVector};
use crate::{Error, Result};

/// The two Bell outcomes a linear-optical Bell measurement can tell apart.
/// The other two outcomes count as a failed swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LobmModel {
    distinguishable: [BellOutcome; 2],
}

impl LobmModel {
    pub fn new(distinguishable: [BellOutcome; 2]) -> Result<Self> {
        if distinguishable[0] == distinguishable[1] {
            return Err(Error::IndistinctOutcomes);
        }
        Ok(Self { distinguishable })
    }

    pub fn distinguishable(&self) -> [BellOutcome; 2] {
        self.distinguishable
    }

    pub fn resolves(&self, outcome: BellOutcome) -> bool {
        self.distinguishable.contains(&outcome)
    }
}

impl Default for LobmModel {
    fn default() -> Self {
        Self {
            distinguishable: [BellOutcome::PhiPlus, BellOutcome::PhiMinus],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureStage {
    Gate,
    Lobm,
    None,
}

impl FailureStage {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureStage::Gate => "gate",
            FailureStage::Lobm => "lobm",
            FailureStage::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub success: bool,
    pub failure_stage: FailureStage,
    /// Bell outcomes in measurement order: electron pairs, then LOBMs.
    pub outcomes: Vec<BellOutcome>,
    /// Corrections for (Alice, Bob). Alice's is always the identity.
    pub pauli_frame: (Pauli, Pauli),
    /// Fidelity of the corrected Alice–Bob pair with ψ⁺, on success.
    pub end_state_fidelity: Option<f64>,
}

/// One exact measurement branch of a chain with ideal gates.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainBranch {
    pub outcomes: Vec<BellOutcome>,
    pub probability: f64,
    pub success: bool,
    pub pauli_frame: (Pauli, Pauli),
    pub end_state_fidelity: Option<f64>,
}

/// Same success probability on every gate of an n-chain.
pub fn uniform_models(n: usize, p: f64) -> Result<Vec<CfGateModel>> {
    Ok(vec![CfGateModel::new(p)?; 2 * n + 2])
}

/// A chain with its gate models and a cached initial state.
#[derive(Debug, Clone)]
pub struct ChainRunner {
    topology: ChainTopology,
    models: Vec<CfGateModel>,
    lobm: LobmModel,
    initial: TrackedState,
    /// State once every gate has fired. Gate failures do not depend on the
    /// state, so trials only need this and their gate draws.
    gated: StateVector,
}

impl ChainRunner {
    /// `models` holds one entry per gate placement.
    pub fn new(topology: ChainTopology, models: Vec<CfGateModel>, lobm: LobmModel) -> Result<Self> {
        let expected = topology.gate_placements().len();
        if models.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: models.len(),
            });
        }
        let mut initial = TrackedState::new(topology.labels().to_vec())?;
        for l in topology.labels().iter().filter(|l| l.role() == Role::Electron) {
            initial.gate(Gate::X, &[l.id()])?;
        }
        for &(e1, e2) in topology.electron_bsm_schedule() {
            entangle_ground_electrons(&mut initial, &[e1, e2])?;
        }
        let mut gated = initial.state().clone();
        for &(e, p) in topology.gate_placements() {
            crate::cfgate::cf_cnot_ideal(&mut gated, e, p)?;
        }
        Ok(Self {
            topology,
            models,
            lobm,
            initial,
            gated,
        })
    }

    pub fn topology(&self) -> &ChainTopology {
        &self.topology
    }

    pub fn models(&self) -> &[CfGateModel] {
        &self.models
    }

    pub fn lobm(&self) -> &LobmModel {
        &self.lobm
    }

    /// State after electron preparation, before any gate.
    pub fn initial_state(&self) -> &StateVector {
        self.initial.state()
    }

    pub fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<TrialResult> {
        self.trial_traced(rng).map(|(r, _)| r)
    }

    /// Like [`trial`](Self::trial), also returning the full operation log.
    pub fn trial_traced<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(TrialResult, OpLog)> {
        let mut log = self.initial.log().clone();
        for (&(electron, photon), model) in self.topology.gate_placements().iter().zip(&self.models) {
            let applied = model.attempt(rng);
            log.push(Operation::CfCnot {
                electron,
                photon,
                applied,
            });
            if !applied {
                let result = TrialResult {
                    success: false,
                    failure_stage: FailureStage::Gate,
                    outcomes: Vec::new(),
                    pauli_frame: (Pauli::I, Pauli::I),
                    end_state_fidelity: None,
                };
                return Ok((result, log));
            }
        }
        let mut ts = TrackedState::from_parts(self.gated.clone(), log);

        let mut outcomes = Vec::with_capacity(2 * self.topology.n() + 1);
        for &(a, b) in self.topology.electron_bsm_schedule() {
            outcomes.push(ts.bell_measure_discard(MeasurementKind::Electron, a, b, rng)?.0);
        }
        for &(a, b) in self.topology.lobm_schedule() {
            let (outcome, _) = ts.bell_measure_discard(MeasurementKind::LinearOptical, a, b, rng)?;
            outcomes.push(outcome);
            if !self.lobm.resolves(outcome) {
                let result = TrialResult {
                    success: false,
                    failure_stage: FailureStage::Lobm,
                    outcomes,
                    pauli_frame: (Pauli::I, Pauli::I),
                    end_state_fidelity: None,
                };
                return Ok((result, ts.into_parts().1));
            }
        }

        let (state, log) = ts.into_parts();
        let (frame, fid) = self.finish(state, &outcomes)?;
        let result = TrialResult {
            success: true,
            failure_stage: FailureStage::None,
            outcomes,
            pauli_frame: frame,
            end_state_fidelity: Some(fid),
        };
        Ok((result, log))
    }

    fn finish(&self, mut state: StateVector, outcomes: &[BellOutcome]) -> Result<((Pauli, Pauli), f64)> {
        let bob_frame = outcomes.iter().fold(Pauli::I, |acc, o| acc.compose(o.frame()));
        bob_frame.apply(&mut state, self.topology.bob())?;
        let ends = [self.topology.alice(), self.topology.bob()];
        let rho = state.reduced_density(&ends)?;
        let labels = rho.labels().to_vec();
        let target = StateVector::from_amplitudes(labels, BellOutcome::PsiPlus.vector().to_vec())?;
        Ok(((Pauli::I, bob_frame), fidelity(&rho, &target)?))
    }

    /// Every measurement branch with ideal gates, with its exact probability.
    /// Branches end at the first unresolved LOBM outcome.
    pub fn enumerate_branches(&self) -> Result<Vec<ChainBranch>> {
        let state = self.gated.clone();
        let schedule: Vec<_> = self
            .topology
            .electron_bsm_schedule()
            .iter()
            .map(|&pair| (pair, false))
            .chain(self.topology.lobm_schedule().iter().map(|&pair| (pair, true)))
            .collect();
        let mut out = Vec::new();
        self.descend(state, &schedule, Vec::new(), 1.0, &mut out)?;
        Ok(out)
    }

    fn descend(
        &self,
        state: StateVector,
        schedule: &[((crate::QubitId, crate::QubitId), bool)],
        outcomes: Vec<BellOutcome>,
        prob: f64,
        out: &mut Vec<ChainBranch>,
    ) -> Result<()> {
        let Some((&((a, b), linear), rest)) = schedule.split_first() else {
            let (frame, fid) = self.finish(state, &outcomes)?;
            out.push(ChainBranch {
                outcomes,
                probability: prob,
                success: true,
                pauli_frame: frame,
                end_state_fidelity: Some(fid),
            });
            return Ok(());
        };
        let probs = state.bell_probabilities(a, b)?;
        for outcome in BellOutcome::ALL {
            let p = probs[outcome.index()];
            if p < 1e-15 {
                continue;
            }
            let mut next = outcomes.clone();
            next.push(outcome);
            if linear && !self.lobm.resolves(outcome) {
                out.push(ChainBranch {
                    outcomes: next,
                    probability: prob * p,
                    success: false,
                    pauli_frame: (Pauli::I, Pauli::I),
                    end_state_fidelity: None,
                });
                continue;
            }
            let mut s = state.clone();
            s.project_bell_discard(a, b, outcome)?;
            self.descend(s, rest, next, prob * p, out)?;
        }
        Ok(())
    }
}

/// Builds a runner and executes one trial.
pub fn one_shot_trial<R: Rng + ?Sized>(
    topology: &ChainTopology,
    models: &[CfGateModel],
    lobm: LobmModel,
    rng: &mut R,
) -> Result<TrialResult> {
    ChainRunner::new(topology.clone(), models.to_vec(), lobm)?.trial(rng)
}
