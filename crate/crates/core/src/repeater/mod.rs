//! Linear counterfactual repeater chain.
//!
//! Between Alice and Bob sit `2n + 1` nodes `C1 … C(2n+1)`. Odd nodes hold an
//! entangled electron pair; even nodes hold two independent photons. Each odd
//! node ties its first electron to the photon on Alice's side and its second
//! electron to the photon on Bob's side with counterfactual CNOTs (`2n + 2`
//! gates in total). Perfect Bell measurements on the `n + 1` electron pairs and
//! linear-optical Bell measurements (LOBMs) on the `n` photon pairs then swap
//! the entanglement out to Alice and Bob.

mod analytic;
mod montecarlo;
mod topology;
mod trial;

pub use analytic::{consistency_residual, p_eff, t_tot_eff, t_tot_nodes, Efficiencies, RepeaterParams, MAX_ANALYTIC_N};
pub use montecarlo::{chunks, monte_carlo, monte_carlo_range, McAccumulator, McStats, StageCounts, MC_CHUNK};
pub use topology::{build_chain, ChainTopology, MAX_CHAIN_N};
pub use trial::{one_shot_trial, uniform_models, ChainBranch, ChainRunner, FailureStage, LobmModel, TrialResult};
