use alloc::vec::Vec;

use crate::state::{Owner, QubitId, QubitLabel, Role};
use crate::{Error, Result};

/// Largest n simulated at statevector level (`4n + 4 = 16` qubits).
pub const MAX_CHAIN_N: usize = 3;

/// Qubit layout and schedules of a chain with `2n + 1` interior nodes.
///
/// Register order: Alice's photon, then the two qubits of `C1`, `C2`, …,
/// `C(2n+1)`, then Bob's photon. Ids run from 0 in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTopology {
    n: usize,
    labels: Vec<QubitLabel>,
    gate_placements: Vec<(QubitId, QubitId)>,
    electron_bsm_schedule: Vec<(QubitId, QubitId)>,
    lobm_schedule: Vec<(QubitId, QubitId)>,
}

/// Ids of the two qubits held by node `k` (1-based).
fn node_qubits(k: usize) -> (QubitId, QubitId) {
    (QubitId(2 * k as u32 - 1), QubitId(2 * k as u32))
}

pub fn build_chain(n: usize) -> Result<ChainTopology> {
    if n > MAX_CHAIN_N {
        return Err(Error::OutOfRange {
            what: "chain n",
            value: n,
            max: MAX_CHAIN_N,
        });
    }
    let nodes = 2 * n + 1;
    let alice = QubitId(0);
    let bob = QubitId((4 * n + 3) as u32);

    let mut labels = Vec::with_capacity(4 * n + 4);
    labels.push(QubitLabel::photon(alice.0, Owner::Alice));
    for k in 1..=nodes {
        let (a, b) = node_qubits(k);
        let owner = Owner::Node(k as u16);
        let role = if k % 2 == 1 { Role::Electron } else { Role::Photon };
        labels.push(QubitLabel::new(a.0, role, owner));
        labels.push(QubitLabel::new(b.0, role, owner));
    }
    labels.push(QubitLabel::photon(bob.0, Owner::Bob));

    let mut gate_placements = Vec::with_capacity(2 * n + 2);
    let mut electron_bsm_schedule = Vec::with_capacity(n + 1);
    for k in (1..=nodes).step_by(2) {
        let (e1, e2) = node_qubits(k);
        let toward_alice = if k == 1 { alice } else { node_qubits(k - 1).1 };
        let toward_bob = if k == nodes { bob } else { node_qubits(k + 1).0 };
        gate_placements.push((e1, toward_alice));
        gate_placements.push((e2, toward_bob));
        electron_bsm_schedule.push((e1, e2));
    }
    let lobm_schedule = (2..nodes).step_by(2).map(node_qubits).collect();

    Ok(ChainTopology {
        n,
        labels,
        gate_placements,
        electron_bsm_schedule,
        lobm_schedule,
    })
}

impl ChainTopology {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        2 * self.n + 1
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn alice(&self) -> QubitId {
        self.labels[0].id()
    }

    pub fn bob(&self) -> QubitId {
        self.labels[self.labels.len() - 1].id()
    }

    /// `(electron, photon)` pairs joined by counterfactual CNOTs, ordered by
    /// node, Alice side first.
    pub fn gate_placements(&self) -> &[(QubitId, QubitId)] {
        &self.gate_placements
    }

    pub fn electron_bsm_schedule(&self) -> &[(QubitId, QubitId)] {
        &self.electron_bsm_schedule
    }

    pub fn lobm_schedule(&self) -> &[(QubitId, QubitId)] {
        &self.lobm_schedule
    }

    pub fn label(&self, id: QubitId) -> Option<&QubitLabel> {
        self.labels.iter().find(|l| l.id() == id)
    }
}
