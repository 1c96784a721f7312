//! Dense and block-sparse matrix views of Pauli sums.
//!
//! [`ExactPropagator`] splits a Hamiltonian into the connected components of
//! its computational-basis graph and diagonalizes each block once. Particle
//! conserving models fall apart into small blocks, so exact propagation stays
//! cheap well past the size where a full dense matrix would fit.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::state::StateVector;

/// Default qubit cap for dense oracles.
pub const DEFAULT_DENSE_CAP: usize = 14;

/// Matrix elements below this are treated as structural zeros.
const ELEMENT_TOLERANCE: f64 = 1e-14;

/// Terms grouped by their bit-flip mask, so each basis column is a short list.
#[derive(Clone, Debug)]
pub struct SparseColumns {
    n_qubits: usize,
    offset: f64,
    groups: Vec<(usize, Vec<(u64, Complex64)>)>,
}

impl SparseColumns {
    pub fn new(h: &PauliSum) -> Self {
        let mut groups: Vec<(usize, Vec<(u64, Complex64)>)> = Vec::new();
        for t in h.terms() {
            let x = t.string.x_mask() as usize;
            let y_phase = match t.string.y_count() % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            let entry = (t.string.z_mask(), y_phase * t.coefficient);
            match groups.iter_mut().find(|(gx, _)| *gx == x) {
                Some((_, v)) => v.push(entry),
                None => groups.push((x, vec![entry])),
            }
        }
        Self { n_qubits: h.n_qubits(), offset: h.constant_offset(), groups }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Calls `f(row, value)` for every non-negligible element of column `k`.
    pub fn for_each_in_column<F: FnMut(usize, Complex64)>(&self, k: usize, mut f: F) {
        let mut diag = Complex64::new(self.offset, 0.0);
        for (x, entries) in &self.groups {
            let mut v = Complex64::new(0.0, 0.0);
            for &(z, c) in entries {
                if ((k as u64) & z).count_ones() & 1 == 1 {
                    v -= c;
                } else {
                    v += c;
                }
            }
            if *x == 0 {
                diag += v;
            } else if v.norm() > ELEMENT_TOLERANCE {
                f(k ^ x, v);
            }
        }
        if diag.norm() > 0.0 {
            f(k, diag);
        }
    }
}

/// Dense matrix of `h` with the default qubit cap.
pub fn to_dense(h: &PauliSum) -> Result<DMatrix<Complex64>> {
    to_dense_with_cap(h, DEFAULT_DENSE_CAP)
}

pub fn to_dense_with_cap(h: &PauliSum, cap: usize) -> Result<DMatrix<Complex64>> {
    let n = h.n_qubits();
    if n > cap {
        return Err(Error::QubitCap { requested: n, cap });
    }
    let dim = 1usize << n;
    let cols = SparseColumns::new(h);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim {
        cols.for_each_in_column(k, |r, v| m[(r, k)] += v);
    }
    Ok(m)
}

#[derive(Clone, Debug)]
enum Eigenvectors {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Eigendecomposition of `h` restricted to a set of basis states.
#[derive(Clone, Debug)]
pub struct Block {
    basis: Vec<usize>,
    energies: Vec<f64>,
    vectors: Eigenvectors,
}

impl Block {
    fn build(cols: &SparseColumns, basis: Vec<usize>, check_closed: bool) -> Result<Self> {
        let dim = basis.len();
        let mut local = alloc::collections::BTreeMap::new();
        for (i, &k) in basis.iter().enumerate() {
            local.insert(k, i);
        }
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        let mut leaked = false;
        for (c, &k) in basis.iter().enumerate() {
            cols.for_each_in_column(k, |r, v| match local.get(&r) {
                Some(&i) => m[(i, c)] += v,
                None => leaked = true,
            });
        }
        if check_closed && leaked {
            return Err(Error::NotNumberConserving);
        }
        let is_real = m.iter().all(|v| v.im.abs() <= ELEMENT_TOLERANCE);
        let (energies, vectors) = if is_real {
            let eig = m.map(|v| v.re).symmetric_eigen();
            (eig.eigenvalues.iter().copied().collect(), Eigenvectors::Real(eig.eigenvectors))
        } else {
            let eig = m.symmetric_eigen();
            (eig.eigenvalues.iter().copied().collect(), Eigenvectors::Complex(eig.eigenvectors))
        };
        Ok(Self { basis, energies, vectors })
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Component `r` of eigenvector `i`.
    pub fn vector_entry(&self, r: usize, i: usize) -> Complex64 {
        match &self.vectors {
            Eigenvectors::Real(v) => Complex64::new(v[(r, i)], 0.0),
            Eigenvectors::Complex(v) => v[(r, i)],
        }
    }

    /// Eigenvector `i` embedded into the full register.
    pub fn eigenstate(&self, i: usize, n_qubits: usize) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        for (r, &k) in self.basis.iter().enumerate() {
            amps[k] = self.vector_entry(r, i);
        }
        StateVector::from_amplitudes(amps).expect("power-of-two length")
    }

    /// Indices of eigenpairs in ascending energy order.
    pub fn ascending(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.energies.len()).collect();
        order.sort_by(|&a, &b| self.energies[a].total_cmp(&self.energies[b]).then(a.cmp(&b)));
        order
    }

    /// Applies `f(E)` spectrally to the block's amplitudes in place.
    fn apply_function(&self, amps: &mut [Complex64], f: &dyn Fn(f64) -> Complex64) {
        let dim = self.basis.len();
        match &self.vectors {
            Eigenvectors::Real(v) => {
                // real and imaginary parts as two columns
                let mut x = DMatrix::<f64>::zeros(dim, 2);
                for (r, &k) in self.basis.iter().enumerate() {
                    x[(r, 0)] = amps[k].re;
                    x[(r, 1)] = amps[k].im;
                }
                let mut c = v.tr_mul(&x);
                for (i, &e) in self.energies.iter().enumerate() {
                    let z = Complex64::new(c[(i, 0)], c[(i, 1)]) * f(e);
                    c[(i, 0)] = z.re;
                    c[(i, 1)] = z.im;
                }
                let y = v * c;
                for (r, &k) in self.basis.iter().enumerate() {
                    amps[k] = Complex64::new(y[(r, 0)], y[(r, 1)]);
                }
            }
            Eigenvectors::Complex(v) => {
                let x = DVector::from_iterator(dim, self.basis.iter().map(|&k| amps[k]));
                let mut c = v.ad_mul(&x);
                for (ci, &e) in c.iter_mut().zip(&self.energies) {
                    *ci *= f(e);
                }
                let y = v * c;
                for (&k, yi) in self.basis.iter().zip(y.iter()) {
                    amps[k] = *yi;
                }
            }
        }
    }
}

/// Block-diagonalized Hamiltonian supporting exact functions of `H` on states.
#[derive(Clone, Debug)]
pub struct ExactPropagator {
    n_qubits: usize,
    blocks: Vec<Block>,
    block_of: Vec<u32>,
}

const UNDECOMPOSED: u32 = u32::MAX;

fn find(parent: &mut [u32], mut a: u32) -> u32 {
    while parent[a as usize] != a {
        parent[a as usize] = parent[parent[a as usize] as usize];
        a = parent[a as usize];
    }
    a
}

impl ExactPropagator {
    /// Decomposes every block of `h`, subject to the default qubit cap.
    pub fn new(h: &PauliSum) -> Result<Self> {
        Self::with_cap(h, DEFAULT_DENSE_CAP)
    }

    pub fn with_cap(h: &PauliSum, cap: usize) -> Result<Self> {
        Self::build(h, cap, None)
    }

    /// Decomposes only the blocks that `states` have weight on.
    pub fn for_support(h: &PauliSum, states: &[&StateVector], cap: usize) -> Result<Self> {
        let dim = 1usize << h.n_qubits();
        let mut touched = vec![false; dim];
        for s in states {
            s.check(h.n_qubits())?;
            for (k, a) in s.amplitudes().iter().enumerate() {
                if a.norm_sqr() > 0.0 {
                    touched[k] = true;
                }
            }
        }
        Self::build(h, cap, Some(&touched))
    }

    fn build(h: &PauliSum, cap: usize, touched: Option<&[bool]>) -> Result<Self> {
        let n = h.n_qubits();
        if n > cap {
            return Err(Error::QubitCap { requested: n, cap });
        }
        let dim = 1usize << n;
        let cols = SparseColumns::new(h);
        let mut parent: Vec<u32> = (0..dim as u32).collect();
        for k in 0..dim {
            cols.for_each_in_column(k, |r, _| {
                let (a, b) = (find(&mut parent, k as u32), find(&mut parent, r as u32));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            });
        }
        let mut members: alloc::collections::BTreeMap<u32, Vec<usize>> = Default::default();
        for k in 0..dim {
            let root = find(&mut parent, k as u32);
            members.entry(root).or_default().push(k);
        }
        let mut blocks = Vec::new();
        let mut block_of = vec![UNDECOMPOSED; dim];
        for (_, basis) in members {
            if let Some(t) = touched {
                if !basis.iter().any(|&k| t[k]) {
                    continue;
                }
            }
            for &k in &basis {
                block_of[k] = blocks.len() as u32;
            }
            blocks.push(Block::build(&cols, basis, false)?);
        }
        Ok(Self { n_qubits: n, blocks, block_of })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Applies `f(H)` to `s` in place, touching only blocks with weight.
    pub fn apply_function(
        &self,
        s: &mut StateVector,
        f: &dyn Fn(f64) -> Complex64,
    ) -> Result<()> {
        s.check(self.n_qubits)?;
        let mut active = vec![false; self.blocks.len()];
        for (k, a) in s.amplitudes().iter().enumerate() {
            if a.norm_sqr() > 0.0 {
                let b = self.block_of[k];
                if b == UNDECOMPOSED {
                    return Err(Error::OutsideSubspace);
                }
                active[b as usize] = true;
            }
        }
        let amps = s.amplitudes_mut();
        for (block, _) in self.blocks.iter().zip(&active).filter(|(_, &a)| a) {
            block.apply_function(amps, f);
        }
        Ok(())
    }

    /// `exp(-i·H·t)|s⟩`.
    pub fn evolve(&self, t: f64, s: &StateVector) -> Result<StateVector> {
        let mut out = s.clone();
        self.evolve_in_place(t, &mut out)?;
        Ok(out)
    }

    pub fn evolve_in_place(&self, t: f64, s: &mut StateVector) -> Result<()> {
        self.apply_function(s, &|e| {
            let (sin, cos) = (e * t).sin_cos();
            Complex64::new(cos, -sin)
        })
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.blocks.iter().flat_map(|b| b.energies.iter().copied()).collect();
        all.sort_by(|a, b| a.total_cmp(b));
        all
    }

    /// Lowest eigenpair across the decomposed blocks.
    pub fn ground_state(&self) -> (f64, StateVector) {
        let (b, i) = self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(b, blk)| (0..blk.energies.len()).map(move |i| (b, i)))
            .min_by(|&(b1, i1), &(b2, i2)| {
                self.blocks[b1].energies[i1].total_cmp(&self.blocks[b2].energies[i2])
            })
            .expect("at least one block");
        (self.blocks[b].energies[i], self.blocks[b].eigenstate(i, self.n_qubits))
    }
}

/// `exp(-i·h·t)|s0⟩` through exact diagonalization.
pub fn exact_evolve(h: &PauliSum, t: f64, s0: &StateVector) -> Result<StateVector> {
    ExactPropagator::for_support(h, &[s0], DEFAULT_DENSE_CAP)?.evolve(t, s0)
}

/// Spectrum of `h` restricted to the given basis states, which must span an
/// invariant subspace.
pub fn subspace_block(h: &PauliSum, basis: Vec<usize>, cap: usize) -> Result<Block> {
    if h.n_qubits() > cap {
        return Err(Error::QubitCap { requested: h.n_qubits(), cap });
    }
    Block::build(&SparseColumns::new(h), basis, true)
}

/// Basis indices with the given number of set bits, ascending.
pub fn popcount_basis(n_qubits: usize, ones: usize) -> Vec<usize> {
    (0..1usize << n_qubits).filter(|k| k.count_ones() as usize == ones).collect()
}
