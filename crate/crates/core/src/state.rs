//! Statevector simulation over a register of labeled qubits.
//!
//! Basis convention: the qubit at position 0 of the register is the most
//! significant bit of the amplitude index. Under the pass/block and H/V
//! relabeling, `|pass⟩ = |0⟩ₑ`, `|block⟩ = |1⟩ₑ`, `|H⟩ = |0⟩ₚ`, `|V⟩ = |1⟩ₚ`.
//! The electron ground state `|g⟩` is `|block⟩ = |1⟩ₑ` and the excited state
//! `|e′⟩` is `|pass⟩ = |0⟩ₑ`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::bell::BellOutcome;
use crate::density::DensityMatrix;
use crate::math::{c, real, sample_index, sqrt, FRAC_1_SQRT_2};
use crate::{Error, Result};

/// Hard cap on register size.
pub const MAX_QUBITS: usize = 20;

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId(pub u32);

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Electron,
    Photon,
}

/// Who holds a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Owner {
    Alice,
    Bob,
    Charlie,
    /// Interior repeater node `C_k`, 1-based.
    Node(u16),
    /// Photon holder `i` of a k-party GHZ transmission, 1-based.
    Party(u16),
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Alice => f.write_str("Alice"),
            Owner::Bob => f.write_str("Bob"),
            Owner::Charlie => f.write_str("Charlie"),
            Owner::Node(k) => write!(f, "C{k}"),
            Owner::Party(k) => write!(f, "P{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitLabel {
    id: QubitId,
    role: Role,
    owner: Owner,
}

impl QubitLabel {
    pub fn new(id: u32, role: Role, owner: Owner) -> Self {
        Self {
            id: QubitId(id),
            role,
            owner,
        }
    }

    pub fn electron(id: u32, owner: Owner) -> Self {
        Self::new(id, Role::Electron, owner)
    }

    pub fn photon(id: u32, owner: Owner) -> Self {
        Self::new(id, Role::Photon, owner)
    }

    pub fn id(&self) -> QubitId {
        self.id
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn owner(&self) -> Owner {
        self.owner
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H,
    X,
    Z,
    /// Operands are `(control, target)`.
    Cnot,
}

impl Gate {
    pub fn arity(self) -> usize {
        match self {
            Gate::Cnot => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::H => "H",
            Gate::X => "X",
            Gate::Z => "Z",
            Gate::Cnot => "CNOT",
        }
    }

    /// Row-major unitary in the computational basis.
    pub fn matrix(self) -> Vec<Complex64> {
        let h = FRAC_1_SQRT_2;
        let (o, z) = (real(1.0), real(0.0));
        match self {
            Gate::H => vec![real(h), real(h), real(h), real(-h)],
            Gate::X => vec![z, o, o, z],
            Gate::Z => vec![o, z, z, real(-1.0)],
            Gate::Cnot => vec![
                o, z, z, z, //
                z, o, z, z, //
                z, z, z, o, //
                z, z, o, z,
            ],
        }
    }
}

pub(crate) fn check_labels(labels: &[QubitLabel]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyRegister);
    }
    if labels.len() > MAX_QUBITS {
        return Err(Error::RegisterTooLarge {
            requested: labels.len(),
            max: MAX_QUBITS,
        });
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].iter().any(|o| o.id == l.id) {
            return Err(Error::DuplicateQubit(l.id));
        }
    }
    Ok(())
}

/// Pure state of a labeled register.
///
/// Operations mutate in place and need exclusive access; clone to branch.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<QubitLabel>,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// A fresh register in `|0…0⟩`.
    pub fn new(labels: Vec<QubitLabel>) -> Result<Self> {
        check_labels(&labels)?;
        let mut amps = vec![Complex64::default(); 1 << labels.len()];
        amps[0] = real(1.0);
        Ok(Self { labels, amps })
    }

    /// Wraps explicit amplitudes; they must already be normalized.
    pub fn from_amplitudes(labels: Vec<QubitLabel>, amps: Vec<Complex64>) -> Result<Self> {
        check_labels(&labels)?;
        let expected = 1 << labels.len();
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { labels, amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn from_unnormalized(labels: Vec<QubitLabel>, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / sqrt(norm);
        amps.iter_mut().for_each(|a| *a *= s);
        Self::from_amplitudes(labels, amps)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn label(&self, id: QubitId) -> Result<&QubitLabel> {
        self.labels.iter().find(|l| l.id == id).ok_or(Error::UnknownQubit(id))
    }

    pub fn position(&self, id: QubitId) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.id == id)
            .ok_or(Error::UnknownQubit(id))
    }

    /// Bit mask of `id` within an amplitude index.
    pub fn mask(&self, id: QubitId) -> Result<usize> {
        let pos = self.position(id)?;
        Ok(1 << (self.labels.len() - 1 - pos))
    }

    /// Amplitude index of the basis state assigning `bits[i]` to `labels[i]`.
    pub fn basis_index(bits: &[u8]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | (b as usize & 1))
    }

    fn distinct_masks(&self, targets: &[QubitId]) -> Result<Vec<usize>> {
        let mut masks = Vec::with_capacity(targets.len());
        for (i, &t) in targets.iter().enumerate() {
            if targets[..i].contains(&t) {
                return Err(Error::RepeatedOperand(t));
            }
            masks.push(self.mask(t)?);
        }
        Ok(masks)
    }

    pub fn apply(&mut self, gate: Gate, targets: &[QubitId]) -> Result<()> {
        if targets.len() != gate.arity() {
            return Err(Error::ArityMismatch {
                gate: gate.name(),
                expected: gate.arity(),
                got: targets.len(),
            });
        }
        let masks = self.distinct_masks(targets)?;
        match gate {
            Gate::H => {
                let h = FRAC_1_SQRT_2;
                self.apply_single(masks[0], [[real(h), real(h)], [real(h), real(-h)]]);
            }
            Gate::X => {
                let m = masks[0];
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::Z => {
                let m = masks[0];
                self.amps
                    .iter_mut()
                    .enumerate()
                    .filter(|(i, _)| i & m != 0)
                    .for_each(|(_, a)| *a = -*a);
            }
            Gate::Cnot => self.controlled_flip(masks[0], masks[1]),
        }
        Ok(())
    }

    /// Flips the target bit on every basis state whose control bit is 1.
    pub(crate) fn controlled_flip(&mut self, control: usize, target: usize) {
        for i in 0..self.amps.len() {
            if i & control != 0 && i & target == 0 {
                self.amps.swap(i, i | target);
            }
        }
    }

    fn apply_single(&mut self, m: usize, u: [[Complex64; 2]; 2]) {
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | m];
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    /// Applies an arbitrary single-qubit unitary (row-major).
    pub fn apply_unitary(&mut self, id: QubitId, u: [[Complex64; 2]; 2]) -> Result<()> {
        let m = self.mask(id)?;
        self.apply_single(m, u);
        Ok(())
    }

    fn pair_masks(&self, a: QubitId, b: QubitId) -> Result<(usize, usize)> {
        if a == b {
            return Err(Error::RepeatedOperand(a));
        }
        Ok((self.mask(a)?, self.mask(b)?))
    }

    /// Born probabilities of the four Bell outcomes on `(a, b)`, indexed as
    /// [`BellOutcome::ALL`].
    pub fn bell_probabilities(&self, a: QubitId, b: QubitId) -> Result<[f64; 4]> {
        let (ma, mb) = self.pair_masks(a, b)?;
        let norm = self.norm_sqr();
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroNorm);
        }
        let mut probs = [0.0; 4];
        for r in 0..self.amps.len() {
            if r & (ma | mb) != 0 {
                continue;
            }
            let quad = [
                self.amps[r],
                self.amps[r | mb],
                self.amps[r | ma],
                self.amps[r | ma | mb],
            ];
            for (k, o) in BellOutcome::ALL.iter().enumerate() {
                probs[k] += o.coefficient(quad).norm_sqr();
            }
        }
        probs.iter_mut().for_each(|p| *p /= norm);
        Ok(probs)
    }

    /// Projects `(a, b)` onto the Bell state `outcome` and renormalizes.
    ///
    /// Returns the Born probability of that outcome. Fails with
    /// [`Error::ZeroNorm`] if the outcome has zero probability.
    pub fn project_bell(&mut self, a: QubitId, b: QubitId, outcome: BellOutcome) -> Result<f64> {
        let (ma, mb) = self.pair_masks(a, b)?;
        let norm = self.norm_sqr();
        let mut kept = 0.0;
        for r in 0..self.amps.len() {
            if r & (ma | mb) != 0 {
                continue;
            }
            let idx = [r, r | mb, r | ma, r | ma | mb];
            let quad = idx.map(|i| self.amps[i]);
            let coef = outcome.coefficient(quad);
            kept += coef.norm_sqr();
            let vec = outcome.vector();
            for k in 0..4 {
                self.amps[idx[k]] = coef * vec[k];
            }
        }
        let prob = if norm > 0.0 { kept / norm } else { 0.0 };
        if kept <= 1e-300 {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / sqrt(kept);
        self.amps.iter_mut().for_each(|x| *x *= s);
        Ok(prob)
    }

    /// Samples a Bell measurement on `(a, b)` with one uniform draw.
    pub fn bell_project<R: Rng + ?Sized>(&mut self, a: QubitId, b: QubitId, rng: &mut R) -> Result<(BellOutcome, f64)> {
        let probs = self.bell_probabilities(a, b)?;
        let u: f64 = rng.random();
        let outcome = BellOutcome::ALL[sample_index(&probs, u)];
        let p = self.project_bell(a, b, outcome)?;
        Ok((outcome, p))
    }

    /// Projects `(a, b)` onto `outcome`, then removes both qubits from the
    /// register. Returns the Born probability of the outcome.
    pub fn project_bell_discard(&mut self, a: QubitId, b: QubitId, outcome: BellOutcome) -> Result<f64> {
        let (ma, mb) = self.pair_masks(a, b)?;
        if self.labels.len() <= 2 {
            return Err(Error::EmptyRegister);
        }
        let norm = self.norm_sqr();
        let (lo, hi) = (ma.min(mb).trailing_zeros(), ma.max(mb).trailing_zeros());
        let mut amps = Vec::with_capacity(self.amps.len() / 4);
        let mut kept = 0.0;
        for r in 0..self.amps.len() / 4 {
            let base = insert_zero(insert_zero(r, lo), hi);
            let quad = [
                self.amps[base],
                self.amps[base | mb],
                self.amps[base | ma],
                self.amps[base | ma | mb],
            ];
            let coef = outcome.coefficient(quad);
            kept += coef.norm_sqr();
            amps.push(coef);
        }
        if kept <= 1e-300 {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / sqrt(kept);
        amps.iter_mut().for_each(|x| *x *= s);
        self.labels.retain(|l| l.id() != a && l.id() != b);
        self.amps = amps;
        Ok(if norm > 0.0 { kept / norm } else { 0.0 })
    }

    /// Samples a Bell measurement on `(a, b)` with one uniform draw and
    /// removes the measured qubits.
    pub fn bell_measure_discard<R: Rng + ?Sized>(
        &mut self,
        a: QubitId,
        b: QubitId,
        rng: &mut R,
    ) -> Result<(BellOutcome, f64)> {
        let probs = self.bell_probabilities(a, b)?;
        let u: f64 = rng.random();
        let outcome = BellOutcome::ALL[sample_index(&probs, u)];
        let p = self.project_bell_discard(a, b, outcome)?;
        Ok((outcome, p))
    }

    /// Probabilities of each computational pattern on `ids`; `ids[0]` is the
    /// most significant bit of the pattern.
    pub fn outcome_probabilities(&self, ids: &[QubitId]) -> Result<Vec<f64>> {
        let masks = self.distinct_masks(ids)?;
        let mut probs = vec![0.0; 1 << ids.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[pattern_of(i, &masks)] += a.norm_sqr();
        }
        let norm: f64 = probs.iter().sum();
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroNorm);
        }
        probs.iter_mut().for_each(|p| *p /= norm);
        Ok(probs)
    }

    /// Projects `ids` onto the computational pattern and renormalizes.
    pub fn project_pattern(&mut self, ids: &[QubitId], pattern: usize) -> Result<f64> {
        let masks = self.distinct_masks(ids)?;
        let norm = self.norm_sqr();
        let mut kept = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if pattern_of(i, &masks) == pattern {
                kept += a.norm_sqr();
            } else {
                *a = Complex64::default();
            }
        }
        if kept <= 1e-300 {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / sqrt(kept);
        self.amps.iter_mut().for_each(|x| *x *= s);
        Ok(kept / norm)
    }

    /// Samples a joint computational-basis readout of `ids` with one uniform draw.
    pub fn measure<R: Rng + ?Sized>(&mut self, ids: &[QubitId], rng: &mut R) -> Result<(usize, f64)> {
        let probs = self.outcome_probabilities(ids)?;
        let u: f64 = rng.random();
        let pattern = sample_index(&probs, u);
        let p = self.project_pattern(ids, pattern)?;
        Ok((pattern, p))
    }

    /// Partial trace onto `keep`, ordered as given.
    pub fn reduced_density(&self, keep: &[QubitId]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let keep_masks = self.distinct_masks(keep)?;
        let keep_all: usize = keep_masks.iter().sum();
        let rest_masks: Vec<usize> = (0..self.num_qubits())
            .map(|p| 1 << (self.num_qubits() - 1 - p))
            .filter(|m| m & keep_all == 0)
            .collect();
        let d = 1 << keep.len();
        let rest_dim = 1 << rest_masks.len();
        // grouped[r][k] = amplitude with rest pattern r and kept pattern k
        let mut grouped = vec![Complex64::default(); rest_dim * d];
        for (i, a) in self.amps.iter().enumerate() {
            let k = pattern_of(i, &keep_masks);
            let r = pattern_of(i, &rest_masks);
            grouped[r * d + k] = *a;
        }
        let norm = self.norm_sqr();
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroNorm);
        }
        let mut rho = vec![Complex64::default(); d * d];
        for row in grouped.chunks(d) {
            for i in 0..d {
                if row[i] == Complex64::default() {
                    continue;
                }
                for j in 0..d {
                    rho[i * d + j] += row[i] * row[j].conj();
                }
            }
        }
        rho.iter_mut().for_each(|x| *x /= norm);
        let labels = keep
            .iter()
            .map(|&id| self.label(id).copied())
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityMatrix::from_raw(labels, rho))
    }

    /// `⟨self|other⟩`, requiring equal dimension.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// Largest componentwise deviation after aligning the global phase of
    /// `other` to `self`.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        let ov = other.inner(self)?;
        let phase = if ov.norm() > 1e-300 { ov / ov.norm() } else { real(1.0) };
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.distance_up_to_phase(other).is_ok_and(|d| d <= tol)
    }

    /// Largest componentwise deviation with no phase freedom.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Extracts the pattern of `masks` (first mask most significant) from `index`.
fn pattern_of(index: usize, masks: &[usize]) -> usize {
    masks.iter().fold(0, |acc, &m| (acc << 1) | usize::from(index & m != 0))
}

#[allow(dead_code)]
pub(crate) fn ket(bits: &[u8]) -> Vec<Complex64> {
    let mut v = vec![Complex64::default(); 1 << bits.len()];
    v[StateVector::basis_index(bits)] = c(1.0, 0.0);
    v
}

/// Spreads `x` so that bit `pos` is a new zero bit.
fn insert_zero(x: usize, pos: u32) -> usize {
    let low = x & ((1 << pos) - 1);
    ((x >> pos) << (pos + 1)) | low
}
