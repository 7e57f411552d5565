//! Operation log and a statevector wrapper that records into it.
//!
//! Logs make structural claims checkable after the fact, e.g. that no gate
//! ever acted jointly on two photons held by different parties.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::bell::BellOutcome;
use crate::cfgate::{cf_cnot_ideal, CfGateModel};
use crate::state::{Gate, QubitId, QubitLabel, StateVector};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementKind {
    /// Complete Bell measurement on an electron pair.
    Electron,
    /// Linear-optical Bell measurement on a photon pair.
    LinearOptical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    Gate {
        gate: Gate,
        qubits: Vec<QubitId>,
    },
    CfCnot {
        electron: QubitId,
        photon: QubitId,
        applied: bool,
    },
    Bell {
        kind: MeasurementKind,
        a: QubitId,
        b: QubitId,
        outcome: BellOutcome,
    },
    Readout {
        qubits: Vec<QubitId>,
        pattern: usize,
    },
    /// Local single-qubit state preparation by the qubit's holder.
    Prepare {
        qubit: QubitId,
    },
}

impl Operation {
    pub fn operands(&self) -> Vec<QubitId> {
        match self {
            Operation::Gate { qubits, .. } | Operation::Readout { qubits, .. } => qubits.clone(),
            Operation::CfCnot { electron, photon, .. } => alloc::vec![*electron, *photon],
            Operation::Prepare { qubit } => alloc::vec![*qubit],
            Operation::Bell { a, b, .. } => alloc::vec![*a, *b],
        }
    }

    /// True for operations that act coherently on more than one qubit.
    /// Readouts are qubit-wise and never count.
    pub fn is_joint(&self) -> bool {
        match self {
            Operation::Gate { qubits, .. } => qubits.len() > 1,
            Operation::CfCnot { .. } | Operation::Bell { .. } => true,
            Operation::Readout { .. } | Operation::Prepare { .. } => false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpLog {
    ops: Vec<Operation>,
}

impl OpLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: Operation) {
        self.ops.push(op);
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn cf_cnot_attempts(&self) -> usize {
        self.ops
            .iter()
            .filter(|o| matches!(o, Operation::CfCnot { .. }))
            .count()
    }

    pub fn bell_measurements(&self, kind: MeasurementKind) -> usize {
        self.ops
            .iter()
            .filter(|o| matches!(o, Operation::Bell { kind: k, .. } if *k == kind))
            .count()
    }

    /// Joint operations whose operands are all photons.
    pub fn joint_photon_operations<'a>(&'a self, labels: &'a [QubitLabel]) -> impl Iterator<Item = &'a Operation> + 'a {
        let is_photon = move |id: &QubitId| {
            labels
                .iter()
                .find(|l| l.id() == *id)
                .is_some_and(|l| l.role() == crate::Role::Photon)
        };
        self.ops
            .iter()
            .filter(move |o| o.is_joint() && o.operands().iter().all(is_photon))
    }
}

/// A statevector whose every operation is appended to an [`OpLog`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedState {
    state: StateVector,
    log: OpLog,
}

impl TrackedState {
    pub fn new(labels: Vec<QubitLabel>) -> Result<Self> {
        Ok(Self {
            state: StateVector::new(labels)?,
            log: OpLog::new(),
        })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn log(&self) -> &OpLog {
        &self.log
    }

    pub(crate) fn from_parts(state: StateVector, log: OpLog) -> Self {
        Self { state, log }
    }

    pub fn into_parts(self) -> (StateVector, OpLog) {
        (self.state, self.log)
    }

    pub fn gate(&mut self, gate: Gate, qubits: &[QubitId]) -> Result<()> {
        self.state.apply(gate, qubits)?;
        self.log.push(Operation::Gate {
            gate,
            qubits: qubits.to_vec(),
        });
        Ok(())
    }

    /// Rotates `qubit` from `|0⟩` to `amps[0]|0⟩ + amps[1]|1⟩` (amps normalized).
    pub fn prepare(&mut self, qubit: QubitId, amps: [Complex64; 2]) -> Result<()> {
        let [a, b] = amps;
        self.state.apply_unitary(qubit, [[a, -b.conj()], [b, a.conj()]])?;
        self.log.push(Operation::Prepare { qubit });
        Ok(())
    }

    pub fn cf_cnot_ideal(&mut self, electron: QubitId, photon: QubitId) -> Result<()> {
        cf_cnot_ideal(&mut self.state, electron, photon)?;
        self.log.push(Operation::CfCnot {
            electron,
            photon,
            applied: true,
        });
        Ok(())
    }

    /// Attempts a counterfactual CNOT. On a heralded loss the state is left
    /// untouched and must be discarded by the caller.
    pub fn cf_cnot<R: Rng + ?Sized>(
        &mut self,
        electron: QubitId,
        photon: QubitId,
        model: &CfGateModel,
        rng: &mut R,
    ) -> Result<bool> {
        let applied = model.attempt(rng);
        if applied {
            cf_cnot_ideal(&mut self.state, electron, photon)?;
        }
        self.log.push(Operation::CfCnot {
            electron,
            photon,
            applied,
        });
        Ok(applied)
    }

    pub fn bell_measure<R: Rng + ?Sized>(
        &mut self,
        kind: MeasurementKind,
        a: QubitId,
        b: QubitId,
        rng: &mut R,
    ) -> Result<(BellOutcome, f64)> {
        let (outcome, p) = self.state.bell_project(a, b, rng)?;
        self.log.push(Operation::Bell { kind, a, b, outcome });
        Ok((outcome, p))
    }

    /// Like [`bell_measure`](Self::bell_measure), then drops the measured
    /// qubits from the register.
    pub fn bell_measure_discard<R: Rng + ?Sized>(
        &mut self,
        kind: MeasurementKind,
        a: QubitId,
        b: QubitId,
        rng: &mut R,
    ) -> Result<(BellOutcome, f64)> {
        let (outcome, p) = self.state.bell_measure_discard(a, b, rng)?;
        self.log.push(Operation::Bell { kind, a, b, outcome });
        Ok((outcome, p))
    }

    pub fn bell_project(&mut self, kind: MeasurementKind, a: QubitId, b: QubitId, outcome: BellOutcome) -> Result<f64> {
        let p = self.state.project_bell(a, b, outcome)?;
        self.log.push(Operation::Bell { kind, a, b, outcome });
        Ok(p)
    }

    pub fn readout<R: Rng + ?Sized>(&mut self, qubits: &[QubitId], rng: &mut R) -> Result<(usize, f64)> {
        let (pattern, p) = self.state.measure(qubits, rng)?;
        self.log.push(Operation::Readout {
            qubits: qubits.to_vec(),
            pattern,
        });
        Ok((pattern, p))
    }

    pub fn project_readout(&mut self, qubits: &[QubitId], pattern: usize) -> Result<f64> {
        let p = self.state.project_pattern(qubits, pattern)?;
        self.log.push(Operation::Readout {
            qubits: qubits.to_vec(),
            pattern,
        });
        Ok(p)
    }
}

/// Checks that an execution log is consistent with counterfactual operation.
///
/// Allowed joint operations are: counterfactual CNOTs on exactly the pairs in
/// `placements` (each at most once), Bell measurements on two qubits of the
/// same role held by the same owner, and ordinary gates local to one owner
/// that never join two photons.
pub fn counterfactual_structure_ok(log: &OpLog, labels: &[QubitLabel], placements: &[(QubitId, QubitId)]) -> bool {
    let find = |id: QubitId| labels.iter().find(|l| l.id() == id).copied();
    let mut used = alloc::vec![false; placements.len()];
    for op in log.ops() {
        match op {
            Operation::CfCnot { electron, photon, .. } => {
                match placements.iter().position(|&(e, p)| e == *electron && p == *photon) {
                    Some(i) if !used[i] => used[i] = true,
                    _ => return false,
                }
            }
            Operation::Bell { a, b, .. } => {
                let (Some(la), Some(lb)) = (find(*a), find(*b)) else {
                    return false;
                };
                if la.owner() != lb.owner() || la.role() != lb.role() {
                    return false;
                }
            }
            Operation::Gate { qubits, .. } if qubits.len() > 1 => {
                let Some(ls) = qubits.iter().map(|&q| find(q)).collect::<Option<Vec<_>>>() else {
                    return false;
                };
                let photons = ls.iter().filter(|l| l.role() == crate::Role::Photon).count();
                if photons > 1 || ls.iter().any(|l| l.owner() != ls[0].owner()) {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}
