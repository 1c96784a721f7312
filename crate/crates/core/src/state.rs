//! Statevector storage and the apply / expectation / rotation kernels.
//!
//! Qubit `j` is bit `j` of the basis index and `|0⟩` is the `+1` eigenstate of
//! `Z`. Basis labels written as bit strings list qubit 0 first, so `"10"` is
//! index 1.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum, PauliTerm};

/// Largest register a statevector may hold.
pub const MAX_STATE_QUBITS: usize = 30;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::QubitCap { requested: n_qubits, cap: MAX_STATE_QUBITS });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Basis state from a bit string with qubit 0 first, e.g. `"0101"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut index = 0usize;
        for (q, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => index |= 1 << q,
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        message: alloc::format!("bad bit '{c}'"),
                    })
                }
            }
        }
        Self::basis(bits.chars().count(), index)
    }

    /// Wraps raw amplitudes; the length must be a power of two. No normalization.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(alloc::format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::QubitCap { requested: n_qubits, cap: MAX_STATE_QUBITS });
        }
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        let mut s = Self::basis(n_qubits, 0)?;
        s.amplitudes[0] = ZERO;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        fixed_order_sum(self.amplitudes.iter().map(|a| a.norm_sqr()))
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm; a zero vector is left untouched.
    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check(other.n_qubits)?;
        let mut acc = ZERO;
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.check(other.n_qubits)?;
        Ok(fixed_order_sum(
            self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm_sqr()),
        )
        .sqrt())
    }

    pub fn scale(&mut self, c: Complex64) {
        self.amplitudes.iter_mut().for_each(|a| *a *= c);
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: Complex64, other: &StateVector) -> Result<()> {
        self.check(other.n_qubits)?;
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += c * b;
        }
        Ok(())
    }

    /// Probability of each basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨Z_q⟩` for every qubit.
    pub fn z_expectations(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_qubits];
        for (k, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for (q, o) in out.iter_mut().enumerate() {
                if (k >> q) & 1 == 0 {
                    *o += p;
                } else {
                    *o -= p;
                }
            }
        }
        out
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: n });
        }
        Ok(())
    }
}

/// Sum in fixed blocks so the result does not depend on how callers chunk work.
pub(crate) fn fixed_order_sum<I: Iterator<Item = f64>>(it: I) -> f64 {
    const BLOCK: usize = 1024;
    let mut total = 0.0;
    let mut block = 0.0;
    let mut count = 0;
    for v in it {
        block += v;
        count += 1;
        if count == BLOCK {
            total += block;
            block = 0.0;
            count = 0;
        }
    }
    total + block
}

#[inline(always)]
fn phase_factor(string: &PauliString, k: usize) -> (Complex64, usize) {
    let (negative, target) = string.act_on_index(k);
    let mut c = match string.y_count() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    if negative {
        c = -c;
    }
    (c, target)
}

/// Accumulates `coeff · P|s⟩` into `out`.
fn accumulate_string(string: &PauliString, coeff: Complex64, s: &[Complex64], out: &mut [Complex64]) {
    let x = string.x_mask() as usize;
    let z = string.z_mask();
    let base = coeff * phase_factor(string, 0).0;
    for (k, a) in s.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let odd = ((k as u64) & z).count_ones() & 1 == 1;
        let c = if odd { -base } else { base };
        out[k ^ x] += c * a;
    }
}

/// Returns `p|s⟩`.
pub fn apply_term(p: &PauliTerm, s: &StateVector) -> Result<StateVector> {
    s.check(p.n_qubits())?;
    let mut out = vec![ZERO; s.dim()];
    accumulate_string(&p.string, p.complex_coefficient(), &s.amplitudes, &mut out);
    Ok(StateVector { n_qubits: s.n_qubits, amplitudes: out })
}

/// Returns `h|s⟩`.
pub fn apply_sum(h: &PauliSum, s: &StateVector) -> Result<StateVector> {
    s.check(h.n_qubits())?;
    let mut out: Vec<Complex64> = s.amplitudes.iter().map(|a| a * h.constant_offset()).collect();
    for t in h.terms() {
        accumulate_string(&t.string, Complex64::new(t.coefficient, 0.0), &s.amplitudes, &mut out);
    }
    Ok(StateVector { n_qubits: s.n_qubits, amplitudes: out })
}

/// Tolerance on the imaginary residue of a Hermitian expectation value.
pub const EXPECTATION_IMAG_TOLERANCE: f64 = 1e-10;

/// `⟨s|h|s⟩` for a normalized state.
pub fn expectation(h: &PauliSum, s: &StateVector) -> Result<f64> {
    let hs = apply_sum(h, s)?;
    let v = s.inner(&hs)?;
    debug_assert!(
        v.im.abs() <= EXPECTATION_IMAG_TOLERANCE * (1.0 + v.re.abs()),
        "imaginary residue {} in Hermitian expectation",
        v.im
    );
    Ok(v.re)
}

/// Applies `exp(-i·theta·p)` in place. `p` must carry coefficient `+1`.
pub fn exp_term_apply_in_place(theta: f64, p: &PauliTerm, s: &mut StateVector) -> Result<()> {
    if p.coefficient != 1.0 || p.imaginary {
        return Err(Error::NonUnitCoefficient(p.coefficient));
    }
    s.check(p.n_qubits())?;
    rotate(theta, &p.string, &mut s.amplitudes);
    Ok(())
}

/// Returns `exp(-i·theta·p)|s⟩ = cos θ |s⟩ − i sin θ p|s⟩`.
pub fn exp_term_apply(theta: f64, p: &PauliTerm, s: &StateVector) -> Result<StateVector> {
    let mut out = s.clone();
    exp_term_apply_in_place(theta, p, &mut out)?;
    Ok(out)
}

/// In-place `exp(-i·theta·P)` for an unweighted string.
pub(crate) fn rotate(theta: f64, string: &PauliString, amps: &mut [Complex64]) {
    let (sin, cos) = theta.sin_cos();
    let x = string.x_mask() as usize;
    let z = string.z_mask();
    let base = phase_factor(string, 0).0;
    let minus_i_sin = Complex64::new(0.0, -sin);
    if x == 0 {
        // diagonal: P|k⟩ = ±|k⟩
        let plus = Complex64::new(cos, -sin);
        let minus = Complex64::new(cos, sin);
        for (k, a) in amps.iter_mut().enumerate() {
            let odd = ((k as u64) & z).count_ones() & 1 == 1;
            *a *= if odd { minus } else { plus };
        }
        return;
    }
    let high = 1usize << (usize::BITS - 1 - x.leading_zeros());
    for k in 0..amps.len() {
        if k & high != 0 {
            continue;
        }
        let j = k ^ x;
        let sign = |idx: usize| {
            if ((idx as u64) & z).count_ones() & 1 == 1 {
                -base
            } else {
                base
            }
        };
        // P|k⟩ = sign(k)|j⟩, P|j⟩ = sign(j)|k⟩
        let ak = amps[k];
        let aj = amps[j];
        amps[k] = ak * cos + minus_i_sin * sign(j) * aj;
        amps[j] = aj * cos + minus_i_sin * sign(k) * ak;
    }
}

/// Diagonal of a sum restricted to its `I`/`Z` terms, one entry per basis state.
pub(crate) fn diagonal_values(terms: &[PauliTerm], offset: f64, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|k| {
            terms.iter().fold(offset, |acc, t| {
                let odd = ((k as u64) & t.string.z_mask()).count_ones() & 1 == 1;
                if odd {
                    acc - t.coefficient
                } else {
                    acc + t.coefficient
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    fn term(text: &str) -> PauliTerm {
        PauliTerm::new(1.0, text.parse::<PauliString>().unwrap())
    }

    #[test]
    fn bit_flip_and_phase() {
        let s0 = StateVector::from_bits("0").unwrap();
        let out = apply_term(&term("X"), &s0).unwrap();
        assert_eq!(out, StateVector::from_bits("1").unwrap());

        let s1 = StateVector::from_bits("1").unwrap();
        let out = apply_term(&term("Z"), &s1).unwrap();
        assert_eq!(out.amplitudes()[1], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn norm_scales_with_coefficient() {
        let s = StateVector::from_bits("01").unwrap();
        let p = PauliTerm::new(-2.5, "YX".parse().unwrap());
        assert!((apply_term(&p, &s).unwrap().norm() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn z_eigenstate_expectation() {
        let h: PauliSum = "1 Z".parse().unwrap();
        let s = StateVector::from_bits("0").unwrap();
        assert_eq!(expectation(&h, &s).unwrap(), 1.0);
    }

    #[test]
    fn quarter_rotation() {
        let s = StateVector::from_bits("0").unwrap();
        let out = exp_term_apply(core::f64::consts::FRAC_PI_2, &term("X"), &s).unwrap();
        assert!(out.amplitudes()[0].norm() < 1e-15);
        assert!((out.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_angle_is_identity() {
        let mut s = StateVector::from_bits("011").unwrap();
        s.amplitudes_mut()[5] = Complex64::new(0.3, -0.2);
        s.normalize();
        let out = exp_term_apply(0.0, &term("XYZ"), &s).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn non_unit_coefficient_rejected() {
        let s = StateVector::from_bits("0").unwrap();
        let p = PauliTerm::new(0.5, "X".parse().unwrap());
        assert_eq!(exp_term_apply(0.1, &p, &s), Err(Error::NonUnitCoefficient(0.5)));
    }

    #[test]
    fn dimension_mismatch() {
        let s = StateVector::from_bits("00").unwrap();
        assert!(matches!(apply_term(&term("XXX"), &s), Err(Error::DimensionMismatch { .. })));
    }
}
