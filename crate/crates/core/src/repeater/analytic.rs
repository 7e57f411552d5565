//! Closed-form success probability and distribution times.

use crate::math::powi;
use crate::{Error, Result};

/// Largest n accepted by the closed-form evaluators.
pub const MAX_ANALYTIC_N: usize = 64;

/// Detection, memory and transmission efficiencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Efficiencies {
    pub detection: f64,
    pub memory: f64,
    pub transmission: f64,
}

impl Efficiencies {
    pub fn uniform(eta: f64) -> Self {
        Self {
            detection: eta,
            memory: eta,
            transmission: eta,
        }
    }

    fn validate(&self) -> Result<()> {
        check_prob("eta_D", self.detection)?;
        check_prob("eta_M", self.memory)?;
        check_prob("eta_t", self.transmission)
    }

    /// `2⁻ⁿ (η_D η_M)^(3n+2) η_t^(n+1)`, the node-probability product that
    /// makes the two distribution-time formulas agree.
    pub fn equivalent_node_product(&self, n: usize) -> f64 {
        powi(0.5, n as i32) * self.weight(n)
    }

    fn weight(&self, n: usize) -> f64 {
        powi(self.detection * self.memory, 3 * n as i32 + 2) * powi(self.transmission, n as i32 + 1)
    }
}

/// Everything the closed forms consume.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeaterParams {
    pub n: usize,
    /// Per-gate success probabilities, length `2n + 2`.
    pub gate_probs: alloc::vec::Vec<f64>,
    /// Per-node swap probabilities, length `2n + 1`.
    pub node_probs: alloc::vec::Vec<f64>,
    /// Elementary link length in meters.
    pub l0: f64,
    /// Signal speed in meters per second.
    pub c: f64,
    pub efficiencies: Efficiencies,
}

impl RepeaterParams {
    pub fn validate(&self) -> Result<()> {
        check_n(self.n)?;
        check_len(&self.gate_probs, 2 * self.n + 2)?;
        check_len(&self.node_probs, 2 * self.n + 1)?;
        for &p in &self.gate_probs {
            check_prob("gate probability", p)?;
        }
        for &p in &self.node_probs {
            check_prob("node probability", p)?;
        }
        check_link(self.l0, self.c)?;
        self.efficiencies.validate()
    }

    pub fn p_eff(&self) -> Result<f64> {
        p_eff(self.n, &self.gate_probs)
    }

    pub fn t_tot_nodes(&self) -> Result<f64> {
        t_tot_nodes(self.n, self.l0, self.c, &self.node_probs)
    }

    pub fn t_tot_eff(&self) -> Result<f64> {
        t_tot_eff(self.n, self.l0, self.c, &self.efficiencies)
    }

    pub fn consistency_residual(&self) -> Result<f64> {
        consistency_residual(self.n, self.l0, self.c, &self.efficiencies)
    }
}

fn check_prob(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_ANALYTIC_N {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            max: MAX_ANALYTIC_N,
        });
    }
    Ok(())
}

fn check_len(v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::LengthMismatch { expected, got: v.len() });
    }
    Ok(())
}

fn check_link(l0: f64, c: f64) -> Result<()> {
    if !(l0.is_finite() && l0 > 0.0) {
        return Err(Error::InvalidParameter { name: "L0", value: l0 });
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter { name: "c", value: c });
    }
    Ok(())
}

/// One-shot end-to-end success probability: `2⁻ⁿ ∏ⱼ Pⱼ` over the `2n + 2` gates.
pub fn p_eff(n: usize, gate_probs: &[f64]) -> Result<f64> {
    check_n(n)?;
    check_len(gate_probs, 2 * n + 2)?;
    let mut prod = 1.0;
    for &p in gate_probs {
        check_prob("gate probability", p)?;
        prod *= p;
    }
    Ok(powi(0.5, n as i32) * prod)
}

/// Average distribution time from node swap probabilities:
/// `(3/2)^(2n+1) (L0/c) / (P₁ ⋯ P(2n+1))`.
pub fn t_tot_nodes(n: usize, l0: f64, c: f64, node_probs: &[f64]) -> Result<f64> {
    check_n(n)?;
    check_len(node_probs, 2 * n + 1)?;
    check_link(l0, c)?;
    let mut prod = 1.0;
    for &p in node_probs {
        check_prob("node probability", p)?;
        if p == 0.0 {
            return Err(Error::Divergence("node probability"));
        }
        prod *= p;
    }
    Ok(powi(1.5, 2 * n as i32 + 1) * (l0 / c) / prod)
}

/// Average distribution time from efficiencies:
/// `3^(2n+1) / 2^(n+1) · (L0/c) / ((η_D η_M)^(3n+2) η_t^(n+1))`.
pub fn t_tot_eff(n: usize, l0: f64, c: f64, eff: &Efficiencies) -> Result<f64> {
    check_n(n)?;
    check_link(l0, c)?;
    eff.validate()?;
    for (name, v) in [
        ("eta_D", eff.detection),
        ("eta_M", eff.memory),
        ("eta_t", eff.transmission),
    ] {
        if v == 0.0 {
            return Err(Error::Divergence(name));
        }
    }
    let prefactor = powi(3.0, 2 * n as i32 + 1) / powi(2.0, n as i32 + 1);
    Ok(prefactor * (l0 / c) / eff.weight(n))
}

/// Relative gap between the two time formulas when the node probabilities
/// multiply to [`Efficiencies::equivalent_node_product`] (all of it on `P₁`).
pub fn consistency_residual(n: usize, l0: f64, c: f64, eff: &Efficiencies) -> Result<f64> {
    let by_eff = t_tot_eff(n, l0, c, eff)?;
    let mut node_probs = alloc::vec![1.0; 2 * n + 1];
    node_probs[0] = eff.equivalent_node_product(n);
    let by_nodes = t_tot_nodes(n, l0, c, &node_probs)?;
    Ok((by_nodes - by_eff).abs() / by_eff)
}
