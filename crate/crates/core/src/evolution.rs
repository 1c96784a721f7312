//! First-order product-formula propagation and its error against exact evolution.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dense;
use crate::error::{Error, Result};
use crate::models;
use crate::pauli::PauliSum;
use crate::state::{diagonal_values, expectation, rotate, StateVector};

/// A Hamiltonian split into commuting groups, to be applied `steps` times over `total_time`.
#[derive(Clone, Debug)]
pub struct EvolutionPlan {
    hamiltonian: PauliSum,
    total_time: f64,
    steps: usize,
    groups: Vec<Vec<usize>>,
}

/// Greedy partition: each term joins the first group it commutes with entirely.
pub fn greedy_groups(h: &PauliSum) -> Vec<Vec<usize>> {
    let terms = h.terms();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        let slot = groups
            .iter_mut()
            .find(|g| g.iter().all(|&k| terms[k].string.commutes_with(&t.string)));
        match slot {
            Some(g) => g.push(i),
            None => groups.push(alloc::vec![i]),
        }
    }
    groups
}

impl EvolutionPlan {
    pub fn new(hamiltonian: PauliSum, total_time: f64, steps: usize) -> Result<Self> {
        let groups = greedy_groups(&hamiltonian);
        Self::with_groups(hamiltonian, total_time, steps, groups)
    }

    /// Plan with an explicit term order. Every term must appear exactly once and
    /// each group must commute internally.
    pub fn with_groups(
        hamiltonian: PauliSum,
        total_time: f64,
        steps: usize,
        groups: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidParameter("trotter steps must be positive".into()));
        }
        if !total_time.is_finite() {
            return Err(Error::InvalidParameter("evolution time must be finite".into()));
        }
        let terms = hamiltonian.terms();
        let mut seen = alloc::vec![false; terms.len()];
        for g in &groups {
            for (a, &i) in g.iter().enumerate() {
                if i >= terms.len() {
                    return Err(Error::IndexOutOfRange { index: i, len: terms.len() });
                }
                if core::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidParameter(alloc::format!("term {i} grouped twice")));
                }
                if g[..a].iter().any(|&k| !terms[k].string.commutes_with(&terms[i].string)) {
                    return Err(Error::NonCommutingGroup);
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter(alloc::format!("term {missing} not grouped")));
        }
        Ok(Self { hamiltonian, total_time, steps, groups })
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.steps as f64
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Inverse product formula: negated time with group and term order reversed.
    pub fn reversed(&self) -> Self {
        let groups = self
            .groups
            .iter()
            .rev()
            .map(|g| g.iter().rev().copied().collect())
            .collect();
        Self {
            hamiltonian: self.hamiltonian.clone(),
            total_time: -self.total_time,
            steps: self.steps,
            groups,
        }
    }

    /// Prepared sweep for repeated application.
    pub fn stepper(&self) -> Stepper<'_> {
        let dt = self.dt();
        let dim = 1usize << self.hamiltonian.n_qubits();
        let terms = self.hamiltonian.terms();
        let stages = self
            .groups
            .iter()
            .map(|g| {
                if g.len() > 1 && g.iter().all(|&i| terms[i].string.is_diagonal()) {
                    let sub: Vec<_> = g.iter().map(|&i| terms[i]).collect();
                    let phases = diagonal_values(&sub, 0.0, dim)
                        .into_iter()
                        .map(|e| Complex64::from_polar(1.0, -e * dt))
                        .collect();
                    Stage::Diagonal(phases)
                } else {
                    Stage::Terms(g.clone())
                }
            })
            .collect();
        Stepper {
            plan: self,
            stages,
            global_phase: Complex64::from_polar(1.0, -self.hamiltonian.constant_offset() * dt),
        }
    }
}

enum Stage {
    Terms(Vec<usize>),
    Diagonal(Vec<Complex64>),
}

/// One product-formula sweep with diagonal groups fused into phase vectors.
pub struct Stepper<'a> {
    plan: &'a EvolutionPlan,
    stages: Vec<Stage>,
    global_phase: Complex64,
}

impl Stepper<'_> {
    pub fn step(&self, s: &mut StateVector) -> Result<()> {
        let h = &self.plan.hamiltonian;
        s.check(h.n_qubits())?;
        let dt = self.plan.dt();
        let amps = s.amplitudes_mut();
        for stage in &self.stages {
            match stage {
                Stage::Terms(g) => {
                    for &i in g {
                        let t = &h.terms()[i];
                        rotate(t.coefficient * dt, &t.string, amps);
                    }
                }
                Stage::Diagonal(phases) => {
                    for (a, p) in amps.iter_mut().zip(phases) {
                        *a *= p;
                    }
                }
            }
        }
        if self.global_phase != Complex64::new(1.0, 0.0) {
            for a in amps.iter_mut() {
                *a *= self.global_phase;
            }
        }
        Ok(())
    }
}

/// `[∏_groups ∏_terms e^{−i h_k t/N}]^N |s0⟩`.
pub fn trotter_evolve(plan: &EvolutionPlan, s0: &StateVector) -> Result<StateVector> {
    trotter_trajectory(plan, s0, |_, _, _| {})
}

/// Like [`trotter_evolve`], calling `visit(step, time, state)` at step 0 and after every sweep.
pub fn trotter_trajectory<F>(plan: &EvolutionPlan, s0: &StateVector, mut visit: F) -> Result<StateVector>
where
    F: FnMut(usize, f64, &StateVector),
{
    s0.check(plan.hamiltonian.n_qubits())?;
    let stepper = plan.stepper();
    let mut s = s0.clone();
    visit(0, 0.0, &s);
    for step in 1..=plan.steps {
        stepper.step(&mut s)?;
        visit(step, plan.dt() * step as f64, &s);
    }
    Ok(s)
}

/// `e^{−iHt}|s0⟩` by dense eigendecomposition.
pub fn exact_evolve(h: &PauliSum, t: f64, s0: &StateVector) -> Result<StateVector> {
    dense::exact_evolve(h, t, s0)
}

/// ℓ2 distance between the product-formula and exact final states.
pub fn trotter_error(plan: &EvolutionPlan, s0: &StateVector) -> Result<f64> {
    let approx = trotter_evolve(plan, s0)?;
    let exact = exact_evolve(&plan.hamiltonian, plan.total_time, s0)?;
    approx.distance(&exact)
}

/// One row of a Schwinger trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub time: f64,
    pub energy: f64,
    pub particle_density: f64,
    pub charge: f64,
}

/// Product-formula trajectory recording energy, particle density and charge
/// every `record_every` steps and at the final step.
pub fn schwinger_trajectory(
    plan: &EvolutionPlan,
    s0: &StateVector,
    record_every: usize,
) -> Result<Vec<TrajectoryRecord>> {
    let every = record_every.max(1);
    let n = plan.hamiltonian.n_qubits();
    let mut rows = Vec::new();
    let mut failure = None;
    trotter_trajectory(plan, s0, |step, time, s| {
        if failure.is_some() || (step % every != 0 && step != plan.steps) {
            return;
        }
        let row = expectation(&plan.hamiltonian, s).and_then(|energy| {
            Ok(TrajectoryRecord {
                step,
                time,
                energy,
                particle_density: models::particle_density(s, n)?,
                charge: models::total_charge(s),
            })
        });
        match row {
            Ok(r) => rows.push(r),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(rows),
    }
}
