//! Hadron-like sector states, time-separated correlators, the lattice PDF
//! transform and the hadronic tensor.
//!
//! Charges count occupied modes relative to half filling, `popcount − ⌊N/2⌋`.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dense::{popcount_basis, subspace_block, ExactPropagator, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};
use crate::evolution::{trotter_evolve, EvolutionPlan};
use crate::pauli::{Letter, PauliString, PauliSum};
use crate::state::{apply_sum, StateVector};

/// Relative tolerance for uniform grid spacing.
const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectorSpec {
    pub total_charge: i64,
    /// Lattice momentum label. Open chains have no translation symmetry, so
    /// the label is carried as metadata and does not select a state.
    pub momentum_index: Option<i64>,
    /// Eigenstate index within the sector, 0 = lowest.
    pub energy_rank: usize,
}

impl SectorSpec {
    pub fn ground(total_charge: i64) -> Self {
        Self { total_charge, momentum_index: None, energy_rank: 0 }
    }

    /// Number of occupied modes on `n_sites` for this charge.
    pub fn occupation(&self, n_sites: usize) -> Result<usize> {
        let ones = (n_sites / 2) as i64 + self.total_charge;
        if ones < 0 || ones > n_sites as i64 {
            return Err(Error::EmptySector { charge: self.total_charge, n_sites });
        }
        Ok(ones as usize)
    }
}

/// Eigenstate of a number-conserving `h` in the requested sector, with its energy.
pub fn prepare_sector_state(h: &PauliSum, sector: &SectorSpec, cap: usize) -> Result<(f64, StateVector)> {
    let n = h.n_qubits();
    if n > cap {
        return Err(Error::QubitCap { requested: n, cap });
    }
    let ones = sector.occupation(n)?;
    let block = subspace_block(h, popcount_basis(n, ones), cap)?;
    let order = block.ascending();
    let &i = order
        .get(sector.energy_rank)
        .ok_or(Error::RankOutOfRange { rank: sector.energy_rank, size: order.len() })?;
    Ok((block.energies()[i], block.eigenstate(i, n)))
}

/// Linear interpolation from `h_start` to `h_target` over `total_time`, one
/// first-order product-formula step per slice.
pub fn adiabatic_prepare(
    h_start: &PauliSum,
    h_target: &PauliSum,
    s0: &StateVector,
    total_time: f64,
    slices: usize,
) -> Result<StateVector> {
    if slices == 0 {
        return Err(Error::InvalidParameter("adiabatic path needs at least one slice".into()));
    }
    let dt = total_time / slices as f64;
    let mut s = s0.clone();
    for k in 0..slices {
        let lambda = (k as f64 + 0.5) / slices as f64;
        let mut h = h_start.scaled(1.0 - lambda);
        h.add_sum(h_target, lambda)?;
        s = trotter_evolve(&EvolutionPlan::new(h, dt, 1)?, &s)?;
    }
    Ok(s)
}

/// How correlators propagate states in time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// Exact when the register fits the dense cap, otherwise product formula
    /// with the given step count.
    Auto { trotter_steps: usize },
    Exact,
    /// First-order product formula with this many steps for each time.
    Trotter { steps: usize },
}

impl Default for Propagation {
    fn default() -> Self {
        Propagation::Auto { trotter_steps: 256 }
    }
}

#[derive(Clone, Debug)]
pub struct CorrelatorRequest {
    pub op_a: PauliSum,
    pub op_b: PauliSum,
    pub times: Vec<f64>,
    /// Site separations applied to `op_a`.
    pub positions: Vec<i64>,
}

fn uniform_step(grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("grid must be non-empty".into()));
    }
    if grid.len() == 1 {
        return Ok(1.0);
    }
    let step = grid[1] - grid[0];
    if step == 0.0 {
        return Err(Error::NonUniformGrid);
    }
    for w in grid.windows(2) {
        if ((w[1] - w[0]) - step).abs() > GRID_TOLERANCE * step.abs().max(1.0) {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(step)
}

/// `C(y, t)` on a `positions × times` grid, stored row-major by position.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorTable {
    pub positions: Vec<i64>,
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl CorrelatorTable {
    pub fn get(&self, y_index: usize, t_index: usize) -> Complex64 {
        self.values[y_index * self.times.len() + t_index]
    }

    /// Values at fixed time index across positions.
    pub fn slice_at_time(&self, t_index: usize) -> Vec<Complex64> {
        (0..self.positions.len()).map(|y| self.get(y, t_index)).collect()
    }
}

/// Repeated `e^{−iHt}` on states, exact or product-formula per [`Propagation`].
pub struct TimePropagator {
    h: PauliSum,
    exact: Option<ExactPropagator>,
    steps: usize,
}

impl TimePropagator {
    /// Exact propagation decomposes only the blocks that `states` touch.
    pub fn new(h: &PauliSum, states: &[&StateVector], mode: Propagation) -> Result<Self> {
        let (exact, steps) = match mode {
            Propagation::Exact => (true, 0),
            Propagation::Trotter { steps } => (false, steps),
            Propagation::Auto { trotter_steps } => (h.n_qubits() <= DEFAULT_DENSE_CAP, trotter_steps),
        };
        let exact = if exact {
            Some(ExactPropagator::for_support(h, states, DEFAULT_DENSE_CAP)?)
        } else {
            None
        };
        Ok(Self { h: h.clone(), exact, steps })
    }

    pub fn evolve(&self, t: f64, s: &StateVector) -> Result<StateVector> {
        match &self.exact {
            Some(p) => p.evolve(t, s),
            None => trotter_evolve(&EvolutionPlan::new(self.h.clone(), t, self.steps)?, s),
        }
    }
}

/// `C(y, t) = ⟨ψ| e^{iHt} A_y e^{−iHt} B |ψ⟩` with `A_y` the translate of `op_a` by `y` sites.
pub fn two_point(h: &PauliSum, psi: &StateVector, req: &CorrelatorRequest, mode: Propagation) -> Result<CorrelatorTable> {
    let n = h.n_qubits();
    for op in [&req.op_a, &req.op_b] {
        if op.n_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: op.n_qubits() });
        }
    }
    psi.check(n)?;
    uniform_step(&req.times)?;
    let ys: Vec<f64> = req.positions.iter().map(|&y| y as f64).collect();
    uniform_step(&ys)?;
    let shifted: Vec<PauliSum> = req.positions.iter().map(|&y| req.op_a.translated(y)).collect::<Result<_>>()?;
    let phi = apply_sum(&req.op_b, psi)?;
    let prop = TimePropagator::new(h, &[psi, &phi], mode)?;
    let mut values = alloc::vec![Complex64::new(0.0, 0.0); req.positions.len() * req.times.len()];
    for (ti, &t) in req.times.iter().enumerate() {
        let psi_t = prop.evolve(t, psi)?;
        let phi_t = prop.evolve(t, &phi)?;
        for (yi, a) in shifted.iter().enumerate() {
            values[yi * req.times.len() + ti] = psi_t.inner(&apply_sum(a, &phi_t)?)?;
        }
    }
    Ok(CorrelatorTable { positions: req.positions.clone(), times: req.times.clone(), values })
}

/// Samples on a monotone grid with the quadrature used to produce them.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTable {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub quadrature: String,
}

/// `f(x) = √(P⁺/2π) Δy Σ_j e^{i x P⁺ y_j} C(y_j)` on the centred grid
/// `x_k = 2πk / (M Δy P⁺)`, `k = −⌊M/2⌋ … ⌈M/2⌉ − 1`. The prefactor makes the
/// discrete transform unitary, so `Σ|f|²Δx = Σ|C|²Δy`.
pub fn pdf_transform(ys: &[f64], values: &[Complex64], p_plus: f64) -> Result<SpectralTable> {
    if ys.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: ys.len(), found: values.len() });
    }
    if !(p_plus > 0.0 && p_plus.is_finite()) {
        return Err(Error::InvalidParameter("P+ must be positive".into()));
    }
    if ys.len() < 2 {
        return Err(Error::InvalidParameter("transform needs at least two separations".into()));
    }
    let dy = uniform_step(ys)?;
    let m = ys.len();
    let dx = core::f64::consts::TAU / (m as f64 * dy * p_plus);
    let norm = (p_plus / core::f64::consts::TAU).sqrt() * dy;
    let first = -((m / 2) as i64);
    let mut grid = Vec::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    for k in first..first + m as i64 {
        let x = k as f64 * dx;
        let mut acc = Complex64::new(0.0, 0.0);
        for (y, c) in ys.iter().zip(values) {
            acc += Complex64::from_polar(1.0, x * p_plus * y) * c;
        }
        grid.push(x);
        out.push(acc * norm);
    }
    Ok(SpectralTable {
        grid,
        values: out,
        quadrature: alloc::format!("unitary DFT, weight sqrt(P+/2pi)*dy, dy={dy}, dx={dx}"),
    })
}

/// `W(ω, k) = Re Σ_{y,t} Δy Δt e^{i(ωt − ky)} ⟨ψ|T{J(y,t) J(0,0)}|ψ⟩` for a
/// Hermitian current `J` at the origin, with `T{J(y,t)J(0)} = J(y,t)J(0)` for
/// `t ≥ 0` and `J(0)J(y,t)` for `t < 0`. Samples follow `q_grid` order.
pub fn hadronic_tensor(
    h: &PauliSum,
    psi: &StateVector,
    current: &PauliSum,
    positions: &[i64],
    times: &[f64],
    q_grid: &[(f64, f64)],
    mode: Propagation,
) -> Result<SpectralTable> {
    let req = CorrelatorRequest {
        op_a: current.clone(),
        op_b: current.clone(),
        times: times.to_vec(),
        positions: positions.to_vec(),
    };
    let table = two_point(h, psi, &req, mode)?;
    let dt = uniform_step(times)?;
    let ys: Vec<f64> = positions.iter().map(|&y| y as f64).collect();
    let dy = uniform_step(&ys)?;
    let weight = dt.abs() * dy.abs();
    let values = q_grid
        .iter()
        .map(|&(omega, k)| {
            let mut acc = 0.0;
            for (yi, y) in ys.iter().enumerate() {
                for (ti, &t) in times.iter().enumerate() {
                    let c = table.get(yi, ti);
                    // J(0) U† J_y U = (U† J_y U J(0))† for Hermitian currents
                    let ordered = if t >= 0.0 { c } else { c.conj() };
                    acc += (Complex64::from_polar(weight, omega * t - k * y) * ordered).re;
                }
            }
            Complex64::new(acc, 0.0)
        })
        .collect();
    Ok(SpectralTable {
        grid: (0..q_grid.len()).map(|i| i as f64).collect(),
        values,
        quadrature: alloc::format!("rectangle rule, weight dy*dt = {weight}"),
    })
}

/// Occupation `n_j = (I − Z_j)/2`, the default charge density.
pub fn charge_density(site: usize, n_sites: usize) -> Result<PauliSum> {
    crate::fermion::jw_number(site, n_sites)
}

/// Current on bond `(j, j+1)` of a hopping term `c (a_j†a_{j+1} + h.c.)`:
/// `(c/2)(Y_j X_{j+1} − X_j Y_{j+1})`, oriented so that
/// `i[c(a_j†a_{j+1} + h.c.), n_{j+1}] = J_j`.
pub fn bond_current(site: usize, hopping: f64, n_sites: usize) -> Result<PauliSum> {
    if site + 1 >= n_sites {
        return Err(Error::IndexOutOfRange { index: site + 1, len: n_sites });
    }
    let pair = |a, b| PauliString::from_pairs(n_sites, &[(site, a), (site + 1, b)]);
    let mut j = PauliSum::new(n_sites);
    j.add(hopping / 2.0, pair(Letter::Y, Letter::X)?)?;
    j.add(-hopping / 2.0, pair(Letter::X, Letter::Y)?)?;
    Ok(j)
}

/// Hermitian hopping-type bilinear `(a_j†a_{j+1} + h.c.)` spanning one
/// staggered cell, the default PDF integrand.
pub fn cell_bilinear(site: usize, n_sites: usize) -> Result<PauliSum> {
    crate::fermion::jw_hopping(site, site + 1, 1.0, n_sites)
}
