#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qlat_core::{Letter, PauliOperator, PauliString, PauliSum, StateVector};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn letter_matrix(l: Letter) -> DMatrix<C> {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match l {
        Letter::I => DMatrix::from_row_slice(2, 2, &[one, o, o, one]),
        Letter::X => DMatrix::from_row_slice(2, 2, &[o, one, one, o]),
        Letter::Y => DMatrix::from_row_slice(2, 2, &[o, c(0.0, -1.0), c(0.0, 1.0), o]),
        Letter::Z => DMatrix::from_row_slice(2, 2, &[one, o, o, -one]),
    }
}

/// Kronecker product with qubit 0 as the least significant factor.
pub fn string_matrix(s: &PauliString) -> DMatrix<C> {
    let letters: Vec<Letter> = s.letters().collect();
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for &l in letters.iter().rev() {
        m = m.kronecker(&letter_matrix(l));
    }
    m
}

pub fn sum_matrix(h: &PauliSum) -> DMatrix<C> {
    let dim = 1usize << h.n_qubits();
    let mut m = DMatrix::<C>::identity(dim, dim) * c(h.constant_offset(), 0.0);
    for t in h.terms() {
        m += string_matrix(&t.string) * t.complex_coefficient();
    }
    m
}

pub fn operator_matrix(op: &PauliOperator) -> DMatrix<C> {
    let dim = 1usize << op.n_qubits();
    let mut m = DMatrix::<C>::zeros(dim, dim);
    for (s, w) in op.terms() {
        m += string_matrix(s) * *w;
    }
    m
}

pub fn column(s: &StateVector) -> DVector<C> {
    DVector::from_column_slice(s.amplitudes())
}

pub fn state(v: &DVector<C>) -> StateVector {
    StateVector::from_amplitudes(v.iter().copied().collect()).unwrap()
}

pub fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `e^{−iHt}` by scaling and squaring a truncated Taylor series.
pub fn expm_taylor(h: &DMatrix<C>, t: f64) -> DMatrix<C> {
    let a = h * c(0.0, -t);
    let norm: f64 = a.iter().map(|v| v.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm / 0.25).log2().ceil().max(0.0) as u32;
    let scaled = &a / c(2f64.powi(squarings as i32), 0.0);
    let n = h.nrows();
    let mut term = DMatrix::<C>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=30 {
        term = &term * &scaled / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Eigenvalues ascending with matching eigenvector columns.
pub fn eigh(h: &DMatrix<C>) -> (Vec<f64>, DMatrix<C>) {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(h.nrows(), h.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

/// Deterministic normalized pseudo-random state.
pub fn scrambled_state(n: usize, seed: u64) -> StateVector {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let amps: Vec<C> = (0..1usize << n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.normalize();
    s
}

/// `⟨ψ|e^{iHt} A e^{−iHt} B|ψ⟩` from the eigendecomposition of `H`.
pub fn spectral_correlator(h: &PauliSum, psi: &StateVector, a: &PauliSum, b: &PauliSum, t: f64) -> C {
    let (e, v) = eigh(&sum_matrix(h));
    let psi = column(psi);
    let left = v.adjoint() * &psi;
    let right = v.adjoint() * (sum_matrix(b) * &psi);
    let a_eig = v.adjoint() * sum_matrix(a) * &v;
    let mut acc = c(0.0, 0.0);
    for m in 0..e.len() {
        for n in 0..e.len() {
            acc += left[m].conj() * C::from_polar(1.0, (e[m] - e[n]) * t) * a_eig[(m, n)] * right[n];
        }
    }
    acc
}

/// `⟨ψ|T{A(t) B(0)}|ψ⟩`, with `B(0) A(t)` for negative `t`, by direct evolution.
pub fn time_ordered(h: &PauliSum, psi: &StateVector, a: &PauliSum, b: &PauliSum, t: f64) -> C {
    let u = expm_taylor(&sum_matrix(h), t);
    let a_t = u.adjoint() * sum_matrix(a) * &u;
    let psi = column(psi);
    let op = if t >= 0.0 { a_t * sum_matrix(b) } else { sum_matrix(b) * a_t };
    (psi.adjoint() * op * &psi)[0]
}
