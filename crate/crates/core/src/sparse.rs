//! A Hamiltonian restricted to an invariant set of basis states, stored
//! column-sparse, with Chebyshev-series time evolution.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dense::SparseColumns;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Bessel coefficients below this magnitude end the series.
const SERIES_CUTOFF: f64 = 1e-17;
const LANCZOS_STEPS: usize = 80;
/// Fraction of the Ritz range added on each side of the estimated spectrum.
const BOUND_MARGIN: f64 = 0.02;

/// Smallest set of basis states containing `seeds` and closed under every `h`.
pub fn closure(hamiltonians: &[&PauliSum], seeds: &[usize]) -> Vec<usize> {
    let cols: Vec<SparseColumns> = hamiltonians.iter().map(|h| SparseColumns::new(h)).collect();
    let mut seen: BTreeSet<usize> = seeds.iter().copied().collect();
    let mut frontier: Vec<usize> = seen.iter().copied().collect();
    while let Some(k) = frontier.pop() {
        for c in &cols {
            c.for_each_in_column(k, |r, _| {
                if seen.insert(r) {
                    frontier.push(r);
                }
            });
        }
    }
    seen.into_iter().collect()
}

/// `h` on the span of `basis` (ascending), which must be invariant under `h`.
#[derive(Clone, Debug)]
pub struct SparseBlock {
    basis: Vec<usize>,
    starts: Vec<usize>,
    rows: Vec<u32>,
    values: Vec<Complex64>,
    /// Real parts of `values` when every element is real.
    real_values: Option<Vec<f64>>,
    lower: f64,
    upper: f64,
}

impl SparseBlock {
    pub fn new(h: &PauliSum, basis: Vec<usize>) -> Result<Self> {
        let cols = SparseColumns::new(h);
        let mut starts = Vec::with_capacity(basis.len() + 1);
        let mut rows = Vec::new();
        let mut values = Vec::new();
        let mut lower = f64::INFINITY;
        let mut upper = f64::NEG_INFINITY;
        let mut leaked = false;
        starts.push(0);
        for (c, &k) in basis.iter().enumerate() {
            let mut diag = 0.0;
            let mut radius = 0.0;
            cols.for_each_in_column(k, |r, v| match basis.binary_search(&r) {
                _ if v == Complex64::new(0.0, 0.0) => {}
                Ok(i) => {
                    if i == c {
                        diag += v.re;
                    } else {
                        radius += v.norm();
                    }
                    rows.push(i as u32);
                    values.push(v);
                }
                Err(_) => leaked = true,
            });
            if leaked {
                return Err(Error::OutsideSubspace);
            }
            lower = lower.min(diag - radius);
            upper = upper.max(diag + radius);
            starts.push(rows.len());
        }
        if basis.is_empty() {
            lower = 0.0;
            upper = 0.0;
        }
        let real_values = values.iter().all(|v| v.im == 0.0).then(|| values.iter().map(|v| v.re).collect());
        let mut block = Self { basis, starts, rows, values, real_values, lower, upper };
        block.tighten_bounds();
        Ok(block)
    }

    /// Narrows the Gershgorin interval to Lanczos extremes plus a safety margin.
    /// A slight underestimate only lengthens the Chebyshev series.
    fn tighten_bounds(&mut self) {
        let n = self.len();
        if n < 2 {
            return;
        }
        let steps = n.min(LANCZOS_STEPS);
        // deterministic start vector with weight on every state
        let mut q: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(1.0 + 0.5 * libm::sin(1.7 * i as f64 + 0.3), 0.0)).collect();
        let norm = q.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        q.iter_mut().for_each(|v| *v /= norm);
        let mut prev = vec![Complex64::new(0.0, 0.0); n];
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        let mut alpha = Vec::with_capacity(steps);
        let mut beta: Vec<f64> = Vec::with_capacity(steps);
        for k in 0..steps {
            self.matvec(&q, &mut w);
            let a: f64 = q.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
            let b_prev = if k > 0 { beta[k - 1] } else { 0.0 };
            for ((wi, qi), pi) in w.iter_mut().zip(&q).zip(&prev) {
                *wi -= qi * a + pi * b_prev;
            }
            alpha.push(a);
            let b = w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if b < 1e-12 || k + 1 == steps {
                break;
            }
            beta.push(b);
            core::mem::swap(&mut prev, &mut q);
            for (qi, wi) in q.iter_mut().zip(&w) {
                *qi = wi / b;
            }
        }
        let m = alpha.len();
        let t = nalgebra::DMatrix::<f64>::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let ritz = t.symmetric_eigenvalues();
        let lo = ritz.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ritz.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let margin = BOUND_MARGIN * (hi - lo).max(1e-12);
        self.lower = self.lower.max(lo - margin);
        self.upper = self.upper.min(hi + margin);
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Interval used to scale the Chebyshev expansion.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    /// `y = H x`, gathered row by row through Hermiticity.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        if let Some(real) = &self.real_values {
            for (r, yr) in y.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in self.starts[r]..self.starts[r + 1] {
                    acc += x[self.rows[e] as usize] * real[e];
                }
                *yr = acc;
            }
            return;
        }
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in self.starts[r]..self.starts[r + 1] {
                acc += self.values[e].conj() * x[self.rows[e] as usize];
            }
            *yr = acc;
        }
    }

    /// `x ← e^{−iHt} x` by a Chebyshev expansion on the estimated spectral interval.
    pub fn evolve(&self, t: f64, x: &mut [Complex64]) {
        if t == 0.0 || x.is_empty() {
            return;
        }
        let center = 0.5 * (self.upper + self.lower);
        let radius = (0.5 * (self.upper - self.lower)).max(f64::MIN_POSITIVE);
        let arg = t * radius;
        let n = x.len();
        // H' = (H − center)/radius, spectrum inside [−1, 1]
        let scaled = |v: &[Complex64], out: &mut [Complex64]| {
            self.matvec(v, out);
            for (o, vi) in out.iter_mut().zip(v) {
                *o = (*o - vi * center) / radius;
            }
        };
        let mut prev = x.to_vec();
        let mut cur = vec![Complex64::new(0.0, 0.0); n];
        scaled(&prev, &mut cur);
        let mut acc: Vec<Complex64> = prev.iter().map(|v| v * libm::j0(arg)).collect();
        let mut next = vec![Complex64::new(0.0, 0.0); n];
        let mut k = 1usize;
        loop {
            let minus_i_pow = match k % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, -1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, 1.0),
            };
            let bessel = libm::jn(k as i32, arg);
            let w = minus_i_pow * (2.0 * bessel);
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += w * c;
            }
            if k as f64 > arg.abs() && bessel.abs() < SERIES_CUTOFF {
                break;
            }
            scaled(&cur, &mut next);
            for (nv, pv) in next.iter_mut().zip(&prev) {
                *nv = *nv * 2.0 - pv;
            }
            core::mem::swap(&mut prev, &mut cur);
            core::mem::swap(&mut cur, &mut next);
            k += 1;
        }
        let phase = Complex64::from_polar(1.0, -t * center);
        for (xi, a) in x.iter_mut().zip(acc) {
            *xi = a * phase;
        }
    }
}
