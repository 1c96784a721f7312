//! Imaginary-time Bloch propagation, ket/bra decomposition of the resulting
//! Gibbs operator and real-time ensemble observables after a quench.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dense::to_dense_with_cap;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::state::{expectation, StateVector};
use crate::structure::Propagation;

/// Density matrices hold `4^n` entries, so they get a tighter limit than state vectors.
pub const DENSITY_MATRIX_CAP: usize = 10;

/// Unnormalized `ρ(β) = e^{−βH₀}`.
#[derive(Clone, Debug)]
pub struct ThermalState {
    rho: DMatrix<Complex64>,
    beta: f64,
    h0: PauliSum,
}

impl ThermalState {
    pub fn rho(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn h0(&self) -> &PauliSum {
        &self.h0
    }

    pub fn n_qubits(&self) -> usize {
        self.h0.n_qubits()
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }
}

/// Integrates `dρ/dβ = −(H₀ρ + ρH₀)/2` from `ρ(0) = 1` with the exact update
/// `ρ ← e^{−δβH₀/2} ρ e^{−δβH₀/2}`.
pub fn bloch_propagate(h0: &PauliSum, beta: f64, steps: usize) -> Result<ThermalState> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter("beta must be finite and non-negative".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("bloch propagation needs at least one step".into()));
    }
    let h = to_dense_with_cap(h0, DENSITY_MATRIX_CAP)?;
    let dim = h.nrows();
    let mut rho = DMatrix::<Complex64>::identity(dim, dim);
    if beta > 0.0 {
        let eig = h.symmetric_eigen();
        let half = beta / steps as f64 / 2.0;
        let v = &eig.eigenvectors;
        let weights = eig.eigenvalues.map(|e| Complex64::new((-half * e).exp(), 0.0));
        let factor = v * DMatrix::from_diagonal(&weights) * v.adjoint();
        for _ in 0..steps {
            rho = &factor * &rho * &factor;
        }
        // symmetrize away rounding so ρ stays Hermitian
        rho = (&rho + rho.adjoint()).scale(0.5);
    }
    Ok(ThermalState { rho, beta, h0: h0.clone() })
}

/// Weighted `|ket⟩⟨bra|` pair of computational basis states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleEntry {
    pub weight: Complex64,
    pub ket: usize,
    pub bra: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureStateEnsemble {
    pub entries: Vec<EnsembleEntry>,
    pub n_qubits: usize,
    pub trace_estimate: f64,
}

impl PureStateEnsemble {
    /// `Σ χ_p |a_p⟩⟨b_p|` as a dense matrix.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for e in &self.entries {
            m[(e.ket, e.bra)] += e.weight;
        }
        m
    }
}

/// Every matrix element with magnitude above `threshold`, in row-major order.
pub fn decompose(ts: &ThermalState, threshold: f64) -> PureStateEnsemble {
    let rho = &ts.rho;
    let mut entries = Vec::new();
    let mut trace = 0.0;
    for a in 0..rho.nrows() {
        for b in 0..rho.ncols() {
            let w = rho[(a, b)];
            if w.norm() > threshold {
                if a == b {
                    trace += w.re;
                }
                entries.push(EnsembleEntry { weight: w, ket: a, bra: b });
            }
        }
    }
    PureStateEnsemble { entries, n_qubits: ts.n_qubits(), trace_estimate: trace }
}

/// `Tr(O e^{iH₁t} ρ̃ e^{−iH₁t}) / Tr ρ̃` for the symmetrized ensemble `(ρ̃ + ρ̃†)/2`.
pub fn ensemble_observable(e: &PureStateEnsemble, h1: &PauliSum, o: &PauliSum, t: f64) -> Result<f64> {
    Ok(ensemble_trajectory(e, h1, o, &[t], Propagation::default())?[0])
}

/// [`ensemble_observable`] at several times, sharing one propagator.
///
/// Diagonal pairs use `⟨a|O(t)|a⟩`. An off-diagonal pair needs `M_ab = ⟨a|O(t)|b⟩`,
/// recovered from the four superpositions `(|a⟩ ± |b⟩)/√2` and `(|a⟩ ± i|b⟩)/√2`:
/// `M_ab = [f(+) − f(−) − i(f(+i) − f(−i))]/2`. The symmetrized pair contributes
/// `Re(χ M_ba)`.
pub fn ensemble_trajectory(
    e: &PureStateEnsemble,
    h1: &PauliSum,
    o: &PauliSum,
    times: &[f64],
    mode: Propagation,
) -> Result<Vec<f64>> {
    let n = e.n_qubits;
    for op in [h1, o] {
        if op.n_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: op.n_qubits() });
        }
    }
    if e.entries.is_empty() || e.trace_estimate == 0.0 {
        return Err(Error::ZeroTrace);
    }
    let probes: Vec<StateVector> = {
        let mut idx: Vec<usize> = e.entries.iter().flat_map(|p| [p.ket, p.bra]).collect();
        idx.sort_unstable();
        idx.dedup();
        idx.iter().map(|&k| StateVector::basis(n, k)).collect::<Result<_>>()?
    };
    let refs: Vec<&StateVector> = probes.iter().collect();
    let prop = crate::structure::TimePropagator::new(h1, &refs, mode)?;
    let sqrt_half = core::f64::consts::FRAC_1_SQRT_2;
    times
        .iter()
        .map(|&t| {
            // U|k⟩ for each basis state that appears; superpositions follow by linearity
            let mut evolved: BTreeMap<usize, StateVector> = BTreeMap::new();
            for p in &e.entries {
                for k in [p.ket, p.bra] {
                    if !evolved.contains_key(&k) {
                        evolved.insert(k, prop.evolve(t, &StateVector::basis(n, k)?)?);
                    }
                }
            }
            let f = |a: &StateVector, b: &StateVector, c: Complex64| -> Result<f64> {
                let mut s = a.clone();
                s.axpy(c, b)?;
                s.scale(Complex64::new(sqrt_half, 0.0));
                expectation(o, &s)
            };
            let mut acc = 0.0;
            for p in &e.entries {
                let a = &evolved[&p.ket];
                if p.ket == p.bra {
                    acc += p.weight.re * expectation(o, a)?;
                    continue;
                }
                let b = &evolved[&p.bra];
                let one = Complex64::new(1.0, 0.0);
                let i = Complex64::new(0.0, 1.0);
                let re = f(a, b, one)? - f(a, b, -one)?;
                let im = f(a, b, i)? - f(a, b, -i)?;
                let m_ab = Complex64::new(re, -im) * 0.5;
                acc += (p.weight * m_ab.conj()).re;
            }
            Ok(acc / e.trace_estimate)
        })
        .collect()
}
