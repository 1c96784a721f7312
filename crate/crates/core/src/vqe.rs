//! Variational ground-state search: layered ansätze, energy/variance
//! evaluation and a seeded derivative-free optimizer.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::{popcount_basis, subspace_block};
use crate::error::{Error, Result};
use crate::models::{self, ResourceParams, SchwingerParams};
use crate::pauli::{PauliString, PauliSum};
use crate::sparse::{self, SparseBlock};
use crate::state::{apply_sum, StateVector};

/// Parameter vector with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoint(Vec<f64>);

impl ParamPoint {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(alloc::vec![0.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug)]
pub enum Layer {
    /// `e^{−iθG}` with one shared angle.
    Global(PauliSum),
    /// `∏_j e^{−iθ_j (Δ/2) Z_j}` with one angle per qubit.
    LocalZ { delta: f64 },
}

impl Layer {
    pub fn arity(&self, n_qubits: usize) -> usize {
        match self {
            Layer::Global(_) => 1,
            Layer::LocalZ { .. } => n_qubits,
        }
    }
}

#[derive(Clone, Debug)]
enum Kernel {
    /// Index into the shared generator blocks.
    Global(usize),
    LocalZ(f64),
}

/// Ordered layers acting on a fixed initial state.
///
/// States are prepared on the smallest basis subset that contains the initial
/// support and is closed under every global generator.
#[derive(Clone, Debug)]
pub struct Ansatz {
    n_qubits: usize,
    layers: Vec<Layer>,
    kernels: Vec<Kernel>,
    generators: Vec<SparseBlock>,
    initial: StateVector,
    /// Initial amplitudes on the support.
    start: Vec<Complex64>,
    /// `Z_j` eigenvalue of each support state, row-major by state.
    signs: Vec<f64>,
}

impl Ansatz {
    pub fn new(layers: Vec<Layer>, initial: StateVector) -> Result<Self> {
        let n = initial.n_qubits();
        let mut distinct: Vec<&PauliSum> = Vec::new();
        let mut kernels = Vec::with_capacity(layers.len());
        for layer in &layers {
            let kernel = match layer {
                Layer::Global(g) => {
                    if g.n_qubits() != n {
                        return Err(Error::DimensionMismatch { expected: n, found: g.n_qubits() });
                    }
                    let slot = match distinct.iter().position(|d| *d == g) {
                        Some(i) => i,
                        None => {
                            distinct.push(g);
                            distinct.len() - 1
                        }
                    };
                    Kernel::Global(slot)
                }
                Layer::LocalZ { delta } => Kernel::LocalZ(*delta),
            };
            kernels.push(kernel);
        }
        let seeds: Vec<usize> = initial
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(k, _)| k)
            .collect();
        let support = sparse::closure(&distinct, &seeds);
        let generators = distinct
            .iter()
            .map(|g| SparseBlock::new(g, support.clone()))
            .collect::<Result<Vec<_>>>()?;
        let start = support.iter().map(|&k| initial.amplitudes()[k]).collect();
        let signs = support
            .iter()
            .flat_map(|&k| (0..n).map(move |j| if (k >> j) & 1 == 1 { -1.0 } else { 1.0 }))
            .collect();
        Ok(Self { n_qubits: n, layers, kernels, generators, initial, start, signs })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial
    }

    /// Basis states the prepared state can occupy, ascending.
    pub fn support(&self) -> &[usize] {
        match self.generators.first() {
            Some(g) => g.basis(),
            None => &[],
        }
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.arity(self.n_qubits)).sum()
    }

    fn support_indices(&self) -> Vec<usize> {
        if self.generators.is_empty() {
            self.initial
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm_sqr() > 0.0)
                .map(|(k, _)| k)
                .collect()
        } else {
            self.support().to_vec()
        }
    }

    /// Amplitudes of `U(θ)|initial⟩` on the support.
    fn prepare_compressed(&self, params: &ParamPoint) -> Result<Vec<Complex64>> {
        if params.len() != self.parameter_count() {
            return Err(Error::DimensionMismatch { expected: self.parameter_count(), found: params.len() });
        }
        let n = self.n_qubits;
        let mut amps = self.start.clone();
        let mut rest = params.values();
        for kernel in &self.kernels {
            match kernel {
                Kernel::Global(g) => {
                    self.generators[*g].evolve(rest[0], &mut amps);
                    rest = &rest[1..];
                }
                Kernel::LocalZ(delta) => {
                    let (angles, tail) = rest.split_at(n);
                    rest = tail;
                    for (a, signs) in amps.iter_mut().zip(self.signs.chunks_exact(n)) {
                        let phase: f64 = angles.iter().zip(signs).map(|(t, z)| t * z).sum();
                        *a *= Complex64::from_polar(1.0, -0.5 * delta * phase);
                    }
                }
            }
        }
        Ok(amps)
    }

    /// `U(θ)|initial⟩`, layers applied in order.
    pub fn prepare(&self, params: &ParamPoint) -> Result<StateVector> {
        let compressed = self.prepare_compressed(params)?;
        let mut s = StateVector::zero(self.n_qubits)?;
        let amps = s.amplitudes_mut();
        for (k, a) in self.support_indices().into_iter().zip(compressed) {
            amps[k] = a;
        }
        Ok(s)
    }

    /// `h` on the ansatz support, if the support is invariant under it.
    pub fn restrict(&self, h: &PauliSum) -> Option<SparseBlock> {
        if h.n_qubits() != self.n_qubits {
            return None;
        }
        SparseBlock::new(h, self.support_indices()).ok()
    }
}

fn compressed_energy_and_variance(h: &SparseBlock, s: &[Complex64]) -> (f64, f64) {
    let mut hs = alloc::vec![Complex64::new(0.0, 0.0); s.len()];
    h.matvec(s, &mut hs);
    let e: f64 = s.iter().zip(&hs).map(|(a, b)| (a.conj() * b).re).sum();
    let var = s.iter().zip(&hs).map(|(a, b)| (b - a * e).norm_sqr()).sum();
    (e, var)
}

fn string(text: &str) -> PauliString {
    text.parse().expect("valid literal")
}

/// Unitary coupled-cluster ansatz for the deuteron on `|100⟩` (truncated).
/// Parameters follow layer order: `θ` for two levels, `(η, θ)` for three,
/// where `η` drives the `0↔2` excitation applied first.
pub fn ucc_deuteron_ansatz(level_count: usize) -> Result<Ansatz> {
    let (layers, bits) = match level_count {
        2 => {
            let g01 = PauliSum::from_terms(
                2,
                [
                    crate::PauliTerm::new(0.5, string("YX")),
                    crate::PauliTerm::new(-0.5, string("XY")),
                ],
            )?;
            (alloc::vec![Layer::Global(g01)], "10")
        }
        3 => {
            let g02 = PauliSum::from_terms(
                3,
                [
                    crate::PauliTerm::new(0.5, string("YZX")),
                    crate::PauliTerm::new(-0.5, string("XZY")),
                ],
            )?;
            let g01 = PauliSum::from_terms(
                3,
                [
                    crate::PauliTerm::new(0.5, string("YXI")),
                    crate::PauliTerm::new(-0.5, string("XYI")),
                ],
            )?;
            (alloc::vec![Layer::Global(g02), Layer::Global(g01)], "100")
        }
        n => return Err(Error::UnsupportedLevelCount(n)),
    };
    Ansatz::new(layers, StateVector::from_bits(bits)?)
}

/// Alternating resource-Hamiltonian / local-Z layers on the bare vacuum.
/// Odd layers (first, third, …) evolve under the full XY resource Hamiltonian.
pub fn hva_schwinger_ansatz(params: &ResourceParams, n_layers: usize) -> Result<Ansatz> {
    if n_layers == 0 {
        return Err(Error::InvalidParameter("ansatz needs at least one layer".into()));
    }
    let h = models::build_resource_xy(params)?;
    let layers = (0..n_layers)
        .map(|l| {
            if l % 2 == 0 {
                Layer::Global(h.clone())
            } else {
                Layer::LocalZ { delta: params.delta }
            }
        })
        .collect();
    Ansatz::new(layers, models::bare_vacuum(params.n_sites)?)
}

/// `(⟨H⟩, ⟨H²⟩ − ⟨H⟩²)` on a state, with `⟨H²⟩ = ‖H|s⟩‖²`.
pub fn state_energy_and_variance(h: &PauliSum, s: &StateVector) -> Result<(f64, f64)> {
    let hs = apply_sum(h, s)?;
    let e = s.inner(&hs)?.re;
    let mut residual = hs;
    residual.axpy(Complex64::new(-e, 0.0), s)?;
    Ok((e, residual.norm_sqr()))
}

pub fn energy_and_variance(h: &PauliSum, a: &Ansatz, p: &ParamPoint) -> Result<(f64, f64)> {
    match a.restrict(h) {
        Some(block) => Ok(compressed_energy_and_variance(&block, &a.prepare_compressed(p)?)),
        None => state_energy_and_variance(h, &a.prepare(p)?),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Maximum objective evaluations across all starts.
    pub budget: usize,
    pub seed: u64,
    /// Number of starts; the first is the supplied point.
    pub starts: usize,
    /// Initial coordinate bracket.
    pub step: f64,
    /// Half-width of the uniform perturbation used for extra starts.
    pub restart_spread: f64,
    /// Energy change per full cycle below which a start is converged.
    pub tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            budget: 2000,
            seed: 0,
            starts: 1,
            step: 0.5,
            restart_spread: core::f64::consts::FRAC_PI_2,
            tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Search<F> {
    f: F,
    evaluations: usize,
    limit: usize,
}

const GOLD: f64 = 0.381_966_011_250_105_1;
const EXPAND: f64 = 1.618_033_988_749_895;

impl<F: FnMut(&[f64]) -> f64> Search<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.evaluations >= self.limit {
            return None;
        }
        self.evaluations += 1;
        let v = (self.f)(x);
        Some(if v.is_nan() { f64::INFINITY } else { v })
    }

    fn along(&mut self, x: &[f64], d: &[f64], t: f64, buf: &mut Vec<f64>) -> Option<f64> {
        buf.clear();
        buf.extend(x.iter().zip(d).map(|(xi, di)| xi + t * di));
        let v = self.eval(buf);
        v
    }

    /// Golden-section line minimization along `d` starting with a trial move
    /// `step·d`; returns the accepted multiple of `d`.
    fn line(&mut self, x: &mut [f64], fx: &mut f64, d: &[f64], step: f64, tol: f64) -> Option<f64> {
        let mut buf = Vec::with_capacity(x.len());
        let (mut a, mut fa) = (0.0, *fx);
        let (mut b, mut fb) = (step, self.along(x, d, step, &mut buf)?);
        let (mut c, mut fc);
        if fb > fa {
            let fm = self.along(x, d, -step, &mut buf)?;
            if fm >= fa {
                // minimum bracketed by ±step around the current point
                c = step;
                fc = fb;
                b = 0.0;
                fb = fa;
                a = -step;
            } else {
                b = -step;
                fb = fm;
                c = b + EXPAND * (b - a);
                fc = self.along(x, d, c, &mut buf)?;
            }
        } else {
            c = b + EXPAND * (b - a);
            fc = self.along(x, d, c, &mut buf)?;
        }
        let mut expansions = 0;
        while fc < fb && expansions < 40 {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            c = b + EXPAND * (b - a);
            fc = self.along(x, d, c, &mut buf)?;
            expansions += 1;
        }
        let _ = fa;
        let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
        let (mut bb, mut fbb) = (b, fb);
        while hi - lo > tol {
            let t = if bb - lo > hi - bb { bb - GOLD * (bb - lo) } else { bb + GOLD * (hi - bb) };
            let Some(ft) = self.along(x, d, t, &mut buf) else { break };
            if ft < fbb {
                if t < bb {
                    hi = bb;
                } else {
                    lo = bb;
                }
                bb = t;
                fbb = ft;
            } else if t < bb {
                lo = t;
            } else {
                hi = t;
            }
        }
        if fbb < *fx {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += bb * di;
            }
            *fx = fbb;
            Some(bb)
        } else {
            Some(0.0)
        }
    }

    /// Nelder-Mead from `x`; returns true when the simplex collapsed below `ftol`.
    fn nelder_mead(&mut self, x: &mut Vec<f64>, fx: &mut f64, size: f64, ftol: f64) -> Option<bool> {
        let n = x.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = alloc::vec![(x.clone(), *fx)];
        for i in 0..n {
            let mut p = x.clone();
            p[i] += size;
            let v = self.eval(&p)?;
            simplex.push((p, v));
        }
        let result = loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[n].1 - simplex[0].1 <= ftol {
                break true;
            }
            let mut centroid = alloc::vec![0.0; n];
            for (p, _) in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(p) {
                    *c += v / n as f64;
                }
            }
            let toward = |t: f64, worst: &[f64]| -> Vec<f64> {
                centroid.iter().zip(worst).map(|(c, w)| c + t * (w - c)).collect()
            };
            let worst = simplex[n].0.clone();
            let xr = toward(-1.0, &worst);
            let Some(fr) = self.eval(&xr) else { break false };
            if fr < simplex[0].1 {
                let xe = toward(-2.0, &worst);
                let Some(fe) = self.eval(&xe) else { break false };
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let t = if fr < simplex[n].1 { -0.5 } else { 0.5 };
                let xc = toward(t, &worst);
                let Some(fc) = self.eval(&xc) else { break false };
                if fc < simplex[n].1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for (p, v) in simplex.iter_mut().skip(1) {
                        for (pi, bi) in p.iter_mut().zip(&best) {
                            *pi = bi + 0.5 * (*pi - bi);
                        }
                        match self.eval(p) {
                            Some(nv) => *v = nv,
                            None => break,
                        }
                    }
                    if self.evaluations >= self.limit {
                        break false;
                    }
                }
            }
        };
        let (bx, bf) = simplex.iter().min_by(|a, b| a.1.total_cmp(&b.1)).expect("nonempty");
        if *bf < *fx {
            *x = bx.clone();
            *fx = *bf;
        }
        Some(result)
    }

    /// Coordinate cycles, each followed by a line search along the cycle's net
    /// displacement, then a simplex polish; repeated while the polish still helps.
    /// The line tolerance shrinks once a cycle's gain drops to what it can resolve.
    fn local(&mut self, x: &mut Vec<f64>, fx: &mut f64, step: f64, tol: f64) -> bool {
        let floor = 1e-7;
        let n = x.len();
        let mut steps = alloc::vec![step; n];
        let mut line_tol = (step * 0.05).max(floor);
        let mut unit = alloc::vec![0.0; n];
        for _round in 0..50 {
            loop {
                let before = *fx;
                let origin = x.clone();
                for i in 0..n {
                    unit[i] = 1.0;
                    let moved = self.line(x, fx, &unit, steps[i], line_tol);
                    unit[i] = 0.0;
                    match moved {
                        Some(t) => steps[i] = (2.0 * t.abs()).clamp(10.0 * line_tol, step),
                        None => return false,
                    }
                }
                let d: Vec<f64> = x.iter().zip(&origin).map(|(a, b)| a - b).collect();
                let len = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                if len > 0.0 && self.line(x, fx, &d, 1.0, line_tol / len).is_none() {
                    return false;
                }
                let gain = before - *fx;
                if gain < tol && line_tol <= floor {
                    break;
                }
                if gain < 10.0 * line_tol * line_tol {
                    line_tol = (line_tol * 0.1).max(floor);
                }
            }
            let before = *fx;
            let size = steps.iter().fold(0.0f64, |m, s| m.max(*s)).max(1e-3);
            match self.nelder_mead(x, fx, size, tol * 1e-2) {
                Some(true) if before - *fx < tol => return true,
                Some(_) => {}
                None => return false,
            }
        }
        false
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded multi-start minimization of `f` from `initial`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(f: F, initial: &[f64], cfg: &OptimizerConfig) -> Minimum {
    let mut search = Search { f, evaluations: 0, limit: cfg.budget };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut converged = false;
    let starts = cfg.starts.max(1);
    for start in 0..starts {
        let mut x = initial.to_vec();
        if start > 0 {
            for v in x.iter_mut() {
                *v += cfg.restart_spread * (2.0 * uniform(&mut rng) - 1.0);
            }
        }
        let remaining = cfg.budget - search.evaluations;
        if remaining == 0 {
            break;
        }
        search.limit = search.evaluations + remaining / (starts - start);
        let Some(mut fx) = search.eval(&x) else { break };
        let ok = search.local(&mut x, &mut fx, cfg.step, cfg.tolerance);
        let better = best.as_ref().map_or(true, |(_, b)| fx < *b);
        if better {
            best = Some((x, fx));
            converged = ok;
        }
    }
    let (point, value) = best.unwrap_or_else(|| (initial.to_vec(), f64::INFINITY));
    Minimum { point, value, evaluations: search.evaluations, converged }
}

/// One improvement of the best-so-far energy.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub evaluation: usize,
    pub energy: f64,
    pub variance: f64,
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeResult {
    pub best_params: ParamPoint,
    pub energy: f64,
    pub variance: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Best-so-far history; energies are strictly decreasing.
    pub trace: Vec<TraceEntry>,
}

/// Minimizes `⟨H⟩` over the ansatz parameters.
pub fn optimize(h: &PauliSum, a: &Ansatz, initial: &ParamPoint, cfg: &OptimizerConfig) -> Result<VqeResult> {
    if initial.len() != a.parameter_count() {
        return Err(Error::DimensionMismatch { expected: a.parameter_count(), found: initial.len() });
    }
    if h.n_qubits() != a.n_qubits() {
        return Err(Error::DimensionMismatch { expected: a.n_qubits(), found: h.n_qubits() });
    }
    if cfg.budget < a.parameter_count() + 1 {
        return Err(Error::InvalidParameter("budget must exceed the parameter count".into()));
    }
    let restricted = a.restrict(h);
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut failure = None;
    let mut count = 0;
    let objective = |x: &[f64]| -> f64 {
        count += 1;
        let p = ParamPoint(x.to_vec());
        let value = match &restricted {
            Some(block) => a.prepare_compressed(&p).map(|s| compressed_energy_and_variance(block, &s)),
            None => a.prepare(&p).and_then(|s| state_energy_and_variance(h, &s)),
        };
        match value {
            Ok((e, v)) => {
                if trace.last().map_or(true, |t| e < t.energy) {
                    trace.push(TraceEntry { evaluation: count, energy: e, variance: v, params: x.to_vec() });
                }
                e
            }
            Err(err) => {
                failure.get_or_insert(err);
                f64::INFINITY
            }
        }
    };
    let min = minimize(objective, initial.values(), cfg);
    if let Some(err) = failure {
        return Err(err);
    }
    let last = trace.last().expect("at least one evaluation");
    Ok(VqeResult {
        best_params: ParamPoint(last.params.clone()),
        energy: last.energy,
        variance: last.variance,
        evaluations: min.evaluations,
        converged: min.converged,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub mass: f64,
    pub energy: f64,
    pub variance: f64,
    pub order_parameter: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub params: ParamPoint,
}

/// VQE along a mass sequence, each point warm-started from the previous optimum.
/// The first point starts from all-zero angles, i.e. the bare vacuum.
pub fn phase_scan(
    masses: &[f64],
    template: &SchwingerParams,
    ansatz: &Ansatz,
    cfg: &OptimizerConfig,
) -> Result<Vec<ScanRow>> {
    let mut rows: Vec<ScanRow> = Vec::with_capacity(masses.len());
    let mut start = ParamPoint::zeros(ansatz.parameter_count());
    for &mass in masses {
        let h = models::build_schwinger(&SchwingerParams { mass, ..*template })?;
        let r = optimize(&h, ansatz, &start, cfg)?;
        let s = ansatz.prepare(&r.best_params)?;
        rows.push(ScanRow {
            mass,
            energy: r.energy,
            variance: r.variance,
            order_parameter: models::order_parameter(&s),
            evaluations: r.evaluations,
            converged: r.converged,
            params: r.best_params.clone(),
        });
        start = r.best_params;
    }
    Ok(rows)
}

/// Ground energy and order parameter in the zero-charge sector by exact diagonalization.
pub fn dense_scan_point(p: &SchwingerParams, cap: usize) -> Result<(f64, f64)> {
    let h = models::build_schwinger(p)?;
    let n = p.n_sites;
    let block = subspace_block(&h, popcount_basis(n, n / 2), cap)?;
    let lowest = block.ascending()[0];
    let s = block.eigenstate(lowest, n);
    Ok((block.energies()[lowest], models::order_parameter(&s)))
}

/// Midpoint of the consecutive mass pair with the largest `|Δorder/Δm|`.
pub fn steepest_change(points: &[(f64, f64)]) -> Option<f64> {
    points
        .windows(2)
        .filter(|w| w[1].0 != w[0].0)
        .map(|w| {
            let slope = ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs();
            (slope, 0.5 * (w[0].0 + w[1].0))
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, m)| m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_objective() {
        let m = minimize(|x| (x[0] - 0.3).powi(2), &[0.0], &OptimizerConfig::default());
        assert!((m.point[0] - 0.3).abs() < 1e-6, "{:?}", m);
        assert!(m.converged);
    }

    #[test]
    fn rosenbrock_two_dimensional() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let cfg = OptimizerConfig { budget: 20000, ..Default::default() };
        let m = minimize(f, &[-1.0, 1.0], &cfg);
        assert!(m.value < 1e-8, "{:?}", m);
    }

    #[test]
    fn budget_is_respected() {
        let mut calls = 0;
        let cfg = OptimizerConfig { budget: 17, ..Default::default() };
        let m = minimize(
            |x| {
                calls += 1;
                x.iter().map(|v| (v - 1.0).powi(2)).sum()
            },
            &[0.0; 4],
            &cfg,
        );
        assert_eq!(calls, 17);
        assert_eq!(m.evaluations, 17);
        assert!(!m.converged);
    }

    #[test]
    fn ucc_zero_angle_is_reference() {
        let a = ucc_deuteron_ansatz(2).unwrap();
        assert_eq!(a.parameter_count(), 1);
        let s = a.prepare(&ParamPoint::zeros(1)).unwrap();
        assert_eq!(s, StateVector::from_bits("10").unwrap());
        assert_eq!(ucc_deuteron_ansatz(3).unwrap().parameter_count(), 2);
        assert!(ucc_deuteron_ansatz(1).is_err());
    }

    #[test]
    fn hva_parameter_count() {
        let p = ResourceParams { n_sites: 4, j0: 1.0, alpha: 1.0, b_field: 0.0, delta: 1.0 };
        for (layers, count) in [(1, 1), (2, 5), (3, 6), (6, 15)] {
            assert_eq!(hva_schwinger_ansatz(&p, layers).unwrap().parameter_count(), count);
        }
        assert!(hva_schwinger_ansatz(&p, 0).is_err());
    }

    #[test]
    fn wrong_parameter_length() {
        let a = ucc_deuteron_ansatz(3).unwrap();
        assert!(a.prepare(&ParamPoint::zeros(1)).is_err());
        assert!(ParamPoint::new(alloc::vec![f64::NAN]).is_err());
    }

    #[test]
    fn steepest_change_midpoint() {
        let pts = [(-1.0, 0.9), (-0.8, 0.8), (-0.6, 0.1), (-0.4, 0.0)];
        assert_eq!(steepest_change(&pts), Some(-0.7));
        assert_eq!(steepest_change(&pts[..1]), None);
    }
}
