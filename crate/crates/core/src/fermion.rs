//! Jordan-Wigner images of fermionic operators.
//!
//! Mode `j` lives on qubit `j` and `|1⟩` means occupied, so
//! `a_j† = Z_0 ⋯ Z_{j-1} · |1⟩⟨0|_j` with `|1⟩⟨0| = (X − iY)/2` and
//! `n_j = (I − Z_j)/2`. Mode indices are 0-based.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator, PauliString, PauliSum};

/// Imaginary residue allowed when folding a Hermitian product back to real form.
const HERMITIAN_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FermionKind {
    Create,
    Annihilate,
    /// `a_j† a_j`
    Number,
    /// `a_i† a_j + a_j† a_i`
    Hop,
    /// `n_i n_j`
    DensityDensity,
}

/// A fermionic operator on one or two modes with a real weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FermionOp {
    pub kind: FermionKind,
    pub sites: (usize, Option<usize>),
    pub coefficient: f64,
}

impl FermionOp {
    pub fn number(j: usize, coefficient: f64) -> Self {
        Self { kind: FermionKind::Number, sites: (j, None), coefficient }
    }

    pub fn hop(i: usize, j: usize, coefficient: f64) -> Self {
        Self { kind: FermionKind::Hop, sites: (i, Some(j)), coefficient }
    }

    pub fn density_density(i: usize, j: usize, coefficient: f64) -> Self {
        Self { kind: FermionKind::DensityDensity, sites: (i, Some(j)), coefficient }
    }

    pub fn is_hermitian(&self) -> bool {
        !matches!(self.kind, FermionKind::Create | FermionKind::Annihilate)
    }

    /// Qubit image on `n_modes` modes.
    pub fn to_operator(&self, n_modes: usize) -> Result<PauliOperator> {
        let (i, j) = self.sites;
        let two = |j: Option<usize>| -> Result<usize> {
            let j = j.ok_or_else(|| {
                Error::InvalidParameter(alloc::format!("{:?} needs two sites", self.kind))
            })?;
            if j == i {
                return Err(Error::EqualIndices(i));
            }
            Ok(j)
        };
        let c = Complex64::new(self.coefficient, 0.0);
        let op = match self.kind {
            FermionKind::Create => jw_creation(i, n_modes)?,
            FermionKind::Annihilate => jw_annihilation(i, n_modes)?,
            FermionKind::Number => jw_number(i, n_modes)?.to_operator(),
            FermionKind::Hop => jw_hopping(i, two(j)?, 1.0, n_modes)?.to_operator(),
            FermionKind::DensityDensity => {
                let j = two(j)?;
                jw_number(i, n_modes)?.to_operator().mul(&jw_number(j, n_modes)?.to_operator())?
            }
        };
        Ok(op.scaled(c))
    }
}

/// Sums Hermitian fermionic operators into a qubit Hamiltonian.
pub fn jw_hamiltonian(ops: &[FermionOp], n_modes: usize) -> Result<PauliSum> {
    let mut h = PauliOperator::new(n_modes);
    for op in ops {
        if !op.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        h.add_operator(&op.to_operator(n_modes)?, Complex64::new(1.0, 0.0));
    }
    h.pruned().to_hermitian(HERMITIAN_TOLERANCE)
}

fn check_mode(j: usize, n: usize) -> Result<()> {
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    Ok(())
}

fn ladder(j: usize, n: usize, y_sign: f64) -> Result<PauliOperator> {
    check_mode(j, n)?;
    let string: Vec<(usize, Letter)> = (0..j).map(|i| (i, Letter::Z)).collect();
    let mut with_x = string.clone();
    with_x.push((j, Letter::X));
    let mut with_y = string;
    with_y.push((j, Letter::Y));
    let mut op = PauliOperator::new(n);
    op.add(Complex64::new(0.5, 0.0), PauliString::from_pairs(n, &with_x)?);
    op.add(Complex64::new(0.0, 0.5 * y_sign), PauliString::from_pairs(n, &with_y)?);
    Ok(op)
}

/// `a_j†` as a Z-string dressed `(X − iY)/2`.
pub fn jw_creation(j: usize, n: usize) -> Result<PauliOperator> {
    ladder(j, n, -1.0)
}

/// `a_j` as a Z-string dressed `(X + iY)/2`.
pub fn jw_annihilation(j: usize, n: usize) -> Result<PauliOperator> {
    ladder(j, n, 1.0)
}

/// `n_j = (I − Z_j)/2`.
pub fn jw_number(j: usize, n: usize) -> Result<PauliSum> {
    check_mode(j, n)?;
    let mut h = PauliSum::new(n);
    h.add_constant(0.5);
    h.add(-0.5, PauliString::single(n, j, Letter::Z)?)?;
    Ok(h)
}

/// `c·(a_i† a_j + a_j† a_i)`.
pub fn jw_hopping(i: usize, j: usize, c: f64, n: usize) -> Result<PauliSum> {
    check_mode(i, n)?;
    check_mode(j, n)?;
    if i == j {
        return Err(Error::EqualIndices(i));
    }
    let forward = jw_creation(i, n)?.mul(&jw_annihilation(j, n)?)?;
    let mut op = forward.adjoint();
    op.add_operator(&forward, Complex64::new(1.0, 0.0));
    op.scaled(Complex64::new(c, 0.0)).pruned().to_hermitian(HERMITIAN_TOLERANCE)
}
