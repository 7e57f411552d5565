//! Bell outcomes and Pauli frame bookkeeping.
//!
//! Naming convention used across the crate:
//!
//! | outcome      | state                |
//! |--------------|----------------------|
//! | `PsiPlus`    | `(|00⟩ + |11⟩)/√2`   |
//! | `PsiMinus`   | `(|00⟩ − |11⟩)/√2`   |
//! | `PhiPlus`    | `(|01⟩ + |10⟩)/√2`   |
//! | `PhiMinus`   | `(|01⟩ − |10⟩)/√2`   |
//!
//! This is the reverse of the common textbook assignment of ψ and φ.

use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::math::{real, FRAC_1_SQRT_2};
use crate::state::{Gate, QubitId, StateVector};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellOutcome {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn vector(self) -> [Complex64; 4] {
        let h = FRAC_1_SQRT_2;
        let z = real(0.0);
        match self {
            BellOutcome::PsiPlus => [real(h), z, z, real(h)],
            BellOutcome::PsiMinus => [real(h), z, z, real(-h)],
            BellOutcome::PhiPlus => [z, real(h), real(h), z],
            BellOutcome::PhiMinus => [z, real(h), real(-h), z],
        }
    }

    /// `⟨self|quad⟩` for a two-qubit amplitude block ordered `00, 01, 10, 11`.
    pub(crate) fn coefficient(self, quad: [Complex64; 4]) -> Complex64 {
        let h = FRAC_1_SQRT_2;
        match self {
            BellOutcome::PsiPlus => (quad[0] + quad[3]) * h,
            BellOutcome::PsiMinus => (quad[0] - quad[3]) * h,
            BellOutcome::PhiPlus => (quad[1] + quad[2]) * h,
            BellOutcome::PhiMinus => (quad[1] - quad[2]) * h,
        }
    }

    /// Bit-flip component of the frame this outcome implies.
    pub fn flips_bit(self) -> bool {
        matches!(self, BellOutcome::PhiPlus | BellOutcome::PhiMinus)
    }

    /// Phase-flip component of the frame this outcome implies.
    pub fn flips_phase(self) -> bool {
        matches!(self, BellOutcome::PsiMinus | BellOutcome::PhiMinus)
    }

    /// The Pauli `σ` with `(I ⊗ σ)|ψ⁺⟩ ∝ |self⟩`.
    pub fn frame(self) -> Pauli {
        Pauli::from_bits(self.flips_bit(), self.flips_phase())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BellOutcome::PsiPlus => "psi_plus",
            BellOutcome::PsiMinus => "psi_minus",
            BellOutcome::PhiPlus => "phi_plus",
            BellOutcome::PhiMinus => "phi_minus",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseBellOutcomeError;

impl fmt::Display for ParseBellOutcomeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of psi_plus, psi_minus, phi_plus, phi_minus")
    }
}

impl FromStr for BellOutcome {
    type Err = ParseBellOutcomeError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        BellOutcome::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or(ParseBellOutcomeError)
    }
}

/// Single-qubit Pauli operator, up to global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Pauli {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// Product up to phase.
    pub fn compose(self, other: Pauli) -> Pauli {
        Pauli::from_bits(self.x_bit() ^ other.x_bit(), self.z_bit() ^ other.z_bit())
    }

    /// Applies this operator (as `X^x Z^z`) to one qubit of `state`.
    pub fn apply(self, state: &mut StateVector, id: QubitId) -> Result<()> {
        if self.z_bit() {
            state.apply(Gate::Z, &[id])?;
        }
        if self.x_bit() {
            state.apply(Gate::X, &[id])?;
        }
        Ok(())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
