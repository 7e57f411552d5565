//! Density matrices, concurrence and fidelity.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{hermitian_eigenvalues, hermitian_map, matmul};
use crate::math::{real, sqrt};
use crate::state::{check_labels, QubitLabel, StateVector};
use crate::{Error, Result};

/// Spectral weights below this are treated as exact zeros when taking square roots.
const RANK_CUTOFF: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<QubitLabel>,
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub(crate) fn from_raw(labels: Vec<QubitLabel>, entries: Vec<Complex64>) -> Self {
        let dim = 1 << labels.len();
        debug_assert_eq!(entries.len(), dim * dim);
        Self { labels, dim, entries }
    }

    /// Row-major entries, validated to be a physical state within `1e-10`.
    pub fn from_entries(labels: Vec<QubitLabel>, entries: Vec<Complex64>) -> Result<Self> {
        check_labels(&labels)?;
        let dim = 1 << labels.len();
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let rho = Self { labels, dim, entries };
        rho.validate(1e-10)?;
        Ok(rho)
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let d = a.len();
        let mut entries = vec![Complex64::default(); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = a[i] * a[j].conj();
            }
        }
        Self::from_raw(state.labels().to_vec(), entries)
    }

    pub fn maximally_mixed(labels: Vec<QubitLabel>) -> Result<Self> {
        check_labels(&labels)?;
        let d = 1 << labels.len();
        let mut entries = vec![Complex64::default(); d * d];
        for i in 0..d {
            entries[i * d + i] = real(1.0 / d as f64);
        }
        Ok(Self::from_raw(labels, entries))
    }

    /// Convex combination `Σ wᵢ ρᵢ`; all terms must share a dimension.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(Error::EmptySubset)?;
        let mut entries = vec![Complex64::default(); first.entries.len()];
        for (w, rho) in terms {
            if rho.dim != first.dim {
                return Err(Error::DimensionMismatch {
                    expected: first.dim,
                    got: rho.dim,
                });
            }
            for (e, x) in entries.iter_mut().zip(rho.entries.iter()) {
                *e += x * *w;
            }
        }
        Self::from_entries(first.labels.clone(), entries)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries, self.dim)
    }

    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return Err(Error::InvalidDensityMatrix("not Hermitian"));
                }
            }
        }
        if (self.trace() - real(1.0)).norm() > tol {
            return Err(Error::InvalidDensityMatrix("trace is not 1"));
        }
        if self.eigenvalues().first().is_some_and(|&ev| ev < -tol) {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue"));
        }
        Ok(())
    }
}

/// `σy ⊗ σy`, which is real.
const YY: [[f64; 4]; 4] = [
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
];

/// Wootters concurrence of a two-qubit state.
///
/// The λᵢ (square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`) are
/// obtained as singular values of `τ = √ρᵀ (σy⊗σy) √ρ`, read off the spectrum
/// of `[[0, τ], [τ†, 0]]`. That avoids the square root of a noisy near-zero
/// eigenvalue, so pure states come out accurate to rounding.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim,
        });
    }
    let s = hermitian_map(&rho.entries, 4, |x| if x < RANK_CUTOFF { 0.0 } else { sqrt(x) });
    let mut st = vec![Complex64::default(); 16];
    let mut yy = vec![Complex64::default(); 16];
    for i in 0..4 {
        for j in 0..4 {
            st[i * 4 + j] = s[j * 4 + i];
            yy[i * 4 + j] = real(YY[i][j]);
        }
    }
    let tau = matmul(&matmul(&st, &yy, 4), &s, 4);
    let mut block = vec![Complex64::default(); 64];
    for i in 0..4 {
        for j in 0..4 {
            block[i * 8 + (j + 4)] = tau[i * 4 + j];
            block[(j + 4) * 8 + i] = tau[i * 4 + j].conj();
        }
    }
    let ev = hermitian_eigenvalues(&block, 8);
    // ascending ±σ; the four largest are the singular values
    let lam: Vec<f64> = ev[4..].iter().rev().map(|x| x.max(0.0)).collect();
    let c = lam[0] - lam[1] - lam[2] - lam[3];
    Ok(c.clamp(0.0, 1.0))
}

/// `⟨target|ρ|target⟩`.
pub fn fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    let t = target.amplitudes();
    if t.len() != rho.dim {
        return Err(Error::DimensionMismatch {
            expected: rho.dim,
            got: t.len(),
        });
    }
    let mut acc = Complex64::default();
    for i in 0..rho.dim {
        if t[i] == Complex64::default() {
            continue;
        }
        let row: Complex64 = (0..rho.dim).map(|j| rho.get(i, j) * t[j]).sum();
        acc += t[i].conj() * row;
    }
    Ok(acc.re.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::BellOutcome;
    use crate::math::c;
    use crate::state::Owner;
    use proptest::prelude::*;

    fn two() -> Vec<QubitLabel> {
        vec![QubitLabel::photon(0, Owner::Alice), QubitLabel::photon(1, Owner::Bob)]
    }

    fn bell(o: BellOutcome) -> StateVector {
        StateVector::from_amplitudes(two(), o.vector().to_vec()).unwrap()
    }

    fn diag(p: [f64; 4]) -> DensityMatrix {
        let mut e = vec![Complex64::default(); 16];
        for i in 0..4 {
            e[i * 4 + i] = real(p[i]);
        }
        DensityMatrix::from_entries(two(), e).unwrap()
    }

    #[test]
    fn bell_states_have_unit_concurrence() {
        for o in BellOutcome::ALL {
            let c = concurrence(&DensityMatrix::from_pure(&bell(o))).unwrap();
            assert!((c - 1.0).abs() < 1e-10, "{o}: {c}");
        }
    }

    #[test]
    fn product_and_classical_mixture() {
        assert!(concurrence(&diag([1.0, 0.0, 0.0, 0.0])).unwrap() < 1e-12);
        // ½|00⟩⟨00| + ½|11⟩⟨11|
        assert!(concurrence(&diag([0.5, 0.0, 0.0, 0.5])).unwrap() < 1e-12);
    }

    #[test]
    fn wrong_dimension() {
        let rho = DensityMatrix::maximally_mixed(vec![QubitLabel::photon(0, Owner::Alice)]).unwrap();
        assert!(matches!(concurrence(&rho), Err(Error::DimensionMismatch { .. })));
        let s = bell(BellOutcome::PsiPlus);
        assert!(matches!(fidelity(&rho, &s), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn fidelity_examples() {
        let psi = bell(BellOutcome::PsiPlus);
        let rho = DensityMatrix::from_pure(&psi);
        assert!((fidelity(&rho, &psi).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&rho, &bell(BellOutcome::PsiMinus)).unwrap() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(two()).unwrap();
        assert!((fidelity(&mixed, &psi).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut e = vec![Complex64::default(); 16];
        e[0] = real(0.5);
        assert_eq!(
            DensityMatrix::from_entries(two(), e.clone()),
            Err(Error::InvalidDensityMatrix("trace is not 1"))
        );
        e[0] = real(1.5);
        e[5] = real(-0.5);
        assert_eq!(
            DensityMatrix::from_entries(two(), e.clone()),
            Err(Error::InvalidDensityMatrix("negative eigenvalue"))
        );
        e[0] = real(1.0);
        e[5] = real(0.0);
        e[1] = c(0.0, 0.1);
        assert_eq!(
            DensityMatrix::from_entries(two(), e),
            Err(Error::InvalidDensityMatrix("not Hermitian"))
        );
    }

    // Independent closed forms used as oracles for the Wootters evaluation.

    fn pure_concurrence(a: &[Complex64]) -> f64 {
        2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
    }

    fn x_state_concurrence(rho: &DensityMatrix) -> f64 {
        let r = |i, j| rho.get(i, j);
        let t1 = r(0, 3).norm() - sqrt(r(1, 1).re * r(2, 2).re);
        let t2 = r(1, 2).norm() - sqrt(r(0, 0).re * r(3, 3).re);
        (2.0 * t1.max(t2)).max(0.0)
    }

    #[test]
    fn werner_state() {
        // p ψ⁺ + (1-p) I/4 has C = max(0, (3p-1)/2)
        let psi = DensityMatrix::from_pure(&bell(BellOutcome::PsiPlus));
        let mixed = DensityMatrix::maximally_mixed(two()).unwrap();
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.6, 0.9, 1.0] {
            let w = DensityMatrix::mixture(&[(p, &psi), (1.0 - p, &mixed)]).unwrap();
            let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence(&w).unwrap() - want).abs() < 1e-9, "p = {p}");
        }
    }

    proptest! {
        #[test]
        fn pure_states_match_closed_form(v in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)
            .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-2)) {
            let amps = v.into_iter().map(|(a, b)| c(a, b)).collect();
            let s = StateVector::from_unnormalized(two(), amps).unwrap();
            let got = concurrence(&DensityMatrix::from_pure(&s)).unwrap();
            prop_assert!((got - pure_concurrence(s.amplitudes())).abs() < 1e-9);
        }

        #[test]
        fn x_states_match_closed_form(
            w in proptest::collection::vec(0.01f64..1.0, 4),
            f1 in 0.0f64..1.0, f2 in 0.0f64..1.0, ph1 in 0.0f64..core::f64::consts::TAU, ph2 in 0.0f64..core::f64::consts::TAU,
        ) {
            let total: f64 = w.iter().sum();
            let p: Vec<f64> = w.iter().map(|x| x / total).collect();
            let mut e = vec![Complex64::default(); 16];
            for i in 0..4 {
                e[i * 4 + i] = real(p[i]);
            }
            // coherences scaled inside the positivity bound
            let a = Complex64::from_polar(f1 * sqrt(p[0] * p[3]), ph1);
            let b = Complex64::from_polar(f2 * sqrt(p[1] * p[2]), ph2);
            e[3] = a;
            e[12] = a.conj();
            e[6] = b;
            e[9] = b.conj();
            let rho = DensityMatrix::from_entries(two(), e).unwrap();
            let got = concurrence(&rho).unwrap();
            prop_assert!((got - x_state_concurrence(&rho)).abs() < 1e-8, "{} vs {}", got, x_state_concurrence(&rho));
        }
    }
}
