//! One function per subcommand: read keys, compute, return tables.

use num_complex::Complex64;
use qlat_core::evolution::{schwinger_trajectory, EvolutionPlan};
use qlat_core::models::{
    bare_vacuum, build_deuteron, build_resource_xy, build_schwinger, build_thirring, order_parameter,
    particle_density_operator, DeuteronSpec, ResourceParams, SchwingerParams, ThirringParams,
};
use qlat_core::structure::{
    bond_current, cell_bilinear, charge_density, hadronic_tensor, pdf_transform, prepare_sector_state, two_point,
    CorrelatorRequest, Propagation, SectorSpec,
};
use qlat_core::thermal::{bloch_propagate, decompose, ensemble_trajectory};
use qlat_core::vqe::{
    hva_schwinger_ansatz, optimize, phase_scan, steepest_change, ucc_deuteron_ansatz, Ansatz, OptimizerConfig,
    ParamPoint, VqeResult,
};
use qlat_core::dense::DEFAULT_DENSE_CAP;
use qlat_core::{Letter, PauliString, PauliSum};
use serde_json::{json, Value};

use crate::config::{Config, ConfigError};
use crate::output::{gibbs_dump, num, Csv};
use crate::{RunError, Subcommand};

/// Files and facts produced by one subcommand.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, Vec<u8>)>,
    pub hamiltonians: Vec<(String, PauliSum)>,
    pub results: serde_json::Map<String, Value>,
}

impl Outcome {
    fn result(&mut self, key: &str, v: Value) {
        self.results.insert(key.into(), v);
    }
}

/// Header lines for every CSV: subcommand, seed and the resolved configuration.
fn meta(cmd: Subcommand, seed: u64, cfg: &Config) -> Vec<(String, String)> {
    let mut m = vec![("subcommand".to_string(), cmd.name().to_string()), ("seed".into(), seed.to_string())];
    m.extend(cfg.resolved().iter().map(|(s, k, v)| (format!("{s}.{k}"), v.clone())));
    m
}

fn schwinger_model(cfg: &mut Config, default_spacing: f64) -> Result<SchwingerParams, ConfigError> {
    Ok(SchwingerParams {
        n_sites: cfg.required("model", "n_sites")?,
        mass: cfg.required("model", "mass")?,
        coupling: cfg.optional("model", "coupling", 1.0)?,
        spacing: cfg.optional("model", "spacing", default_spacing)?,
        boundary_field: cfg.optional("model", "boundary_field", 0.0)?,
    })
}

fn thirring_model(cfg: &mut Config) -> Result<ThirringParams, ConfigError> {
    Ok(ThirringParams {
        n_sites: cfg.required("model", "n_sites")?,
        mass: cfg.required("model", "mass")?,
        coupling: cfg.required("model", "coupling")?,
    })
}

fn resource_model(cfg: &mut Config, section: &str, n_sites: usize) -> Result<ResourceParams, ConfigError> {
    Ok(ResourceParams {
        n_sites,
        j0: cfg.optional(section, "j0", 1.0)?,
        alpha: cfg.optional(section, "alpha", 1.0)?,
        b_field: cfg.optional(section, "b_field", 0.0)?,
        delta: cfg.optional(section, "delta", 1.0)?,
    })
}

fn optimizer(cfg: &mut Config, seed: u64, default_budget: usize) -> Result<OptimizerConfig, ConfigError> {
    let d = OptimizerConfig::default();
    Ok(OptimizerConfig {
        budget: cfg.optional("algorithm", "budget", default_budget)?,
        starts: cfg.optional("algorithm", "starts", d.starts)?,
        tolerance: cfg.optional("algorithm", "tolerance", d.tolerance)?,
        seed,
        ..d
    })
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..points).map(|i| start + (stop - start) * i as f64 / (points - 1) as f64).collect(),
    }
}

fn positive(section: &str, key: &str, v: usize) -> Result<usize, ConfigError> {
    if v == 0 {
        return Err(Config::invalid(section, key, v, "must be at least 1"));
    }
    Ok(v)
}

pub fn execute(cmd: Subcommand, cfg: &mut Config, seed: u64) -> Result<Outcome, RunError> {
    match cmd {
        Subcommand::SchwingerQuench => schwinger_quench(cfg, seed),
        Subcommand::SchwingerVqe => schwinger_vqe(cfg, seed),
        Subcommand::DeuteronVqe => deuteron_vqe(cfg, seed),
        Subcommand::PhaseScan => scan(cfg, seed),
        Subcommand::ThirringCorrelator => thirring_correlator(cfg, seed),
        Subcommand::HadronicTensor => tensor(cfg, seed),
        Subcommand::Thermal => thermal(cfg, seed),
        Subcommand::DumpHamiltonian => dump_hamiltonian(cfg),
    }
}

fn schwinger_quench(cfg: &mut Config, seed: u64) -> Result<Outcome, RunError> {
    let p = schwinger_model(cfg, 1.0)?;
    let t_max: f64 = cfg.required("algorithm", "t_max")?;
    let steps = positive("algorithm", "steps", cfg.required("algorithm", "steps")?)?;
    let every = positive("algorithm", "record_every", cfg.optional("algorithm", "record_every", 1)?)?;
    cfg.finish()?;
    let h = build_schwinger(&p)?;
    let plan = EvolutionPlan::new(h.clone(), t_max, steps)?;
    let rows = schwinger_trajectory(&plan, &bare_vacuum(p.n_sites)?, every)?;
    let mut csv = Csv::new(&meta(Subcommand::SchwingerQuench, seed, cfg), &["step", "time", "energy", "particle_density", "charge"]);
    for r in &rows {
        csv.row(&[r.step.to_string(), num(r.time), num(r.energy), num(r.particle_density), num(r.charge)]);
    }
    let mut out = Outcome::default();
    let last = rows.last().expect("trajectory records step 0");
    out.result("final_particle_density", json!(last.particle_density));
    out.result("max_abs_charge", json!(rows.iter().map(|r| r.charge.abs()).fold(0.0, f64::max)));
    out.files.push(("trajectory.csv".into(), csv.into_bytes()));
    out.hamiltonians.push(("hamiltonian.txt".into(), h));
    Ok(out)
}

fn vqe_table(cmd: Subcommand, seed: u64, cfg: &Config, r: &VqeResult) -> Vec<u8> {
    let names: Vec<String> = (0..r.best_params.len()).map(|i| format!("param_{i}")).collect();
    let mut columns = vec!["evaluation", "energy", "variance"];
    columns.extend(names.iter().map(String::as_str));
    let mut csv = Csv::new(&meta(cmd, seed, cfg), &columns);
    for e in &r.trace {
        let mut row = vec![e.evaluation.to_string(), num(e.energy), num(e.variance)];
        row.extend(e.params.iter().map(|&x| num(x)));
        csv.row(&row);
    }
    csv.into_bytes()
}

fn vqe_results(out: &mut Outcome, r: &VqeResult) {
    out.result("energy", json!(r.energy));
    out.result("variance", json!(r.variance));
    out.result("evaluations", json!(r.evaluations));
    out.result("converged", json!(r.converged));
    out.result("best_params", json!(r.best_params.values()));
}

fn run_vqe(h: &PauliSum, a: &Ansatz, cfg: &OptimizerConfig) -> Result<VqeResult, RunError> {
    Ok(optimize(h, a, &ParamPoint::zeros(a.parameter_count()), cfg)?)
}

fn schwinger_vqe(cfg: &mut Config, seed: u64) -> Result<Outcome, RunError> {
    let p = schwinger_model(cfg, 1.0)?;
    let layers = positive("algorithm", "layers", cfg.optional("algorithm", "layers", 6)?)?;
    let opt = optimizer(cfg, seed, 2000)?;
    let rp = resource_model(cfg, "algorithm", p.n_sites)?;
    cfg.finish()?;
    let h = build_schwinger(&p)?;
    let a = hva_schwinger_ansatz(&rp, layers)?;
    let r = run_vqe(&h, &a, &opt)?;
    let mut out = Outcome::default();
    vqe_results(&mut out, &r);
    out.result("order_parameter", json!(order_parameter(&a.prepare(&r.best_params)?)));
    out.files.push(("vqe.csv".into(), vqe_table(Subcommand::SchwingerVqe, seed, cfg, &r)));
    out.hamiltonians.push(("hamiltonian.txt".into(), h));
    Ok(out)
}

fn deuteron_vqe(cfg: &mut Config, seed: u64) -> Result<Outcome, RunError> {
    let levels: usize = cfg.required("model", "level_count")?;
    let opt = optimizer(cfg, seed, 2000)?;
    cfg.finish()?;
    let h = build_deuteron(DeuteronSpec { level_count: levels })?;
    let a = ucc_deuteron_ansatz(levels)?;
    let r = run_vqe(&h, &a, &opt)?;
    let mut out = Outcome::default();
    vqe_results(&mut out, &r);
    out.files.push(("vqe.csv".into(), vqe_table(Subcommand::DeuteronVqe, seed, cfg, &r)));
    out.hamiltonians.push(("hamiltonian.txt".into(), h));
    Ok(out)
}

fn scan(cfg: &mut Config, seed: u64) -> Result<Outcome, RunError> {
    let n: usize = cfg.required("model", "n_sites")?;
    let template = SchwingerParams {
        n_sites: n,
        mass: 0.0,
        coupling: cfg.optional("model", "coupling", 1.0)?,
        spacing: cfg.optional("model", "spacing", 0.5)?,
        boundary_field: cfg.optional("model", "boundary_field", 0.0)?,
    };
    let start: f64 = cfg.optional("algorithm", "mass_start", 0.2)?;
    let stop: f64 = cfg.optional("algorithm", "mass_stop", -1.2)?;
    let step: f64 = cfg.optional("algorithm", "mass_step", 0.1)?;
    let layers = positive("algorithm", "layers", cfg.optional("algorithm", "layers", 6)?)?;
    let opt = optimizer(cfg, seed, 4000)?;
    let rp = resource_model(cfg, "algorithm", n)?;
    cfg.finish()?;
    let span = (stop - start) / step;
    if !(step != 0.0 && span.is_finite() && span >= -1e-9) {
        return Err(Config::invalid("algorithm", "mass_step", step, "must be nonzero and point from mass_start to mass_stop").into());
    }
    let masses = linspace(start, stop, (span + 1e-9).floor() as usize + 1);
    let a = hva_schwinger_ansatz(&rp, layers)?;
    let rows = phase_scan(&masses, &template, &a, &opt)?;
    let mut csv = Csv::new(&meta(Subcommand::PhaseScan, seed, cfg), &["mass", "energy", "variance", "order_parameter"]);
    for r in &rows {
        csv.row(&[num(r.mass), num(r.energy), num(r.variance), num(r.order_parameter)]);
    }
    let mut points: Vec<(f64, f64)> = rows.iter().map(|r| (r.mass, r.order_parameter)).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Outcome::default();
    out.result("steepest_change_mass", json!(steepest_change(&points)));
    out.result("all_converged", json!(rows.iter().all(|r| r.converged)));
    out.result("unconverged_masses", json!(rows.iter().filter(|r| !r.converged).map(|r| r.mass).collect::<Vec<_>>()));
    out.files.push(("scan.csv".into(), csv.into_bytes()));
    out.hamiltonians.push(("hamiltonian.txt".into(), build_schwinger(&SchwingerParams { mass: start, ..template })?));
    Ok(out)
}

fn propagation(cfg: &mut Config) -> Result<Propagation, ConfigError> {
    let steps = positive("algorithm", "trotter_steps", cfg.optional("algorithm", "trotter_steps", 256)?)?;
    Ok(Propagation::Auto { trotter_steps: steps })
}

fn sector(cfg: &mut Config) -> Result<SectorSpec, ConfigError> {
    Ok(SectorSpec {
        total_charge: cfg.optional("algorithm", "charge", 0i64)?,
        momentum_index: None,
        energy_rank: cfg.optional("algorithm", "energy_rank", 0usize)?,
    })
}

/// Separations `y_min, y_min + y_step, …, y_max` keeping an operator on
/// `[site, site + width)` inside the chain by default.
fn positions(cfg: &mut Config, n: usize, site: usize, width: usize) -> Result<Vec<i64>, ConfigError> {
    let lo = cfg.optional("algorithm", "y_min", -(site as i64))?;
    let hi = cfg.optional("algorithm", "y_max", n as i64 - (site + width) as i64)?;
    let step: i64 = cfg.optional("algorithm", "y_step", 1)?;
    if step <= 0 || hi < lo {
        return Err(Config::invalid("algorithm", "y_step", step, "needs y_step > 0 and y_min <= y_max"));
    }
    Ok((lo..=hi).step_by(step as usize).collect())
}

fn thirring_correlator(cfg: &mut Config, seed: u64) -> Result<Outcome, RunError> {
    let p = thirring_model(cfg)?;
    let spec = sector(cfg)?;
    let site: usize = cfg.optional("algorithm", "site", (p.n_sites / 2).saturating_sub(1))?;
    let ys = positions(cfg, p.n_sites, site, 2)?;
    let t_max: f64 = cfg.optional("algorithm", "t_max", 0.0)?;
    let t_points = positive("algorithm", "t_points", cfg.optional("algorithm", "t_points", 1)?)?;
    let p_plus: f64 = cfg.optional("algorithm", "p_plus", 1.0)?;
    let pdf_index: usize = cfg.optional("algorithm", "pdf_time_index", 0)?;
    let mode = propagation(cfg)?;
    cfg.finish()?;
    if pdf_index >= t_points {
        return Err(Config::invalid("algorithm", "pdf_time_index", pdf_index, "must index the time grid").into());
    }
    let h = build_thirring(&p)?;
    let (energy, psi) = prepare_sector_state(&h, &spec, DEFAULT_DENSE_CAP)?;
    let op = cell_bilinear(site, p.n_sites)?;
    let req = CorrelatorRequest { op_a: op.clone(), op_b: op, times: linspace(0.0, t_max, t_points), positions: ys };
    let table = two_point(&h, &psi, &req, mode)?;
    let header = meta(Subcommand::ThirringCorrelator, seed, cfg);
    let mut csv = Csv::new(&header, &["y", "t", "re", "im"]);
    for (yi, y) in table.positions.iter().enumerate() {
        for (ti, t) in table.times.iter().enumerate() {
            let v = table.get(yi, ti);
            csv.row(&[y.to_string(), num(*t), num(v.re), num(v.im)]);
        }
    }
    let yf: Vec<f64> = table.positions.iter().map(|&y| y as f64).collect();
    let pdf = pdf_transform(&yf, &table.slice_at_time(pdf_index), p_plus)?;
    let mut pdf_header = header;
    pdf_header.push(("quadrature".into(), pdf.quadrature.clone()));
    let mut pcsv = Csv::new(&pdf_header, &["x_or_q", "re", "im"]);
    for (x, v) in pdf.grid.iter().zip(&pdf.values) {
        pcsv.row(&[num(*x), num(v.re), num(v.im)]);
    }
    let mut out = Outcome::default();
    out.result("sector_energy", json!(energy));
    out.result("momentum_label", json!("unresolved"));
    out.files.push(("correlator.csv".into(), csv.into_bytes()));
    out.files.push(("pdf.csv".into(), pcsv.into_bytes()));
    out.hamiltonians.push(("hamiltonian.txt".into(), h));
    Ok(out)
}

fn tensor(cfg: &mut Config, seed: u64) -> Result<Outcome, RunError> {
    let p = thirring_model(cfg)?;
    let spec = sector(cfg)?;
    let kind: String = cfg.optional("algorithm", "current", "density".to_string())?;
    let site: usize = cfg.optional("algorithm", "site", (p.n_sites / 2).saturating_sub(1))?;
    let width = if kind == "bond" { 2 } else { 1 };
    let ys = positions(cfg, p.n_sites, site, width)?;
    let t_max: f64 = cfg.required("algorithm", "t_max")?;
    let t_points = positive("algorithm", "t_points", cfg.optional("algorithm", "t_points", 21)?)?;
    let omegas = linspace(
        cfg.optional("algorithm", "omega_min", 0.0)?,
        cfg.optional("algorithm", "omega_max", 4.0)?,
        cfg.optional("algorithm", "omega_points", 41)?,
    );
    let ks = linspace(
        cfg.optional("algorithm", "k_min", -std::f64::consts::PI)?,
        cfg.optional("algorithm", "k_max", std::f64::consts::PI)?,
        cfg.optional("algorithm", "k_points", 9)?,
    );
    let mode = propagation(cfg)?;
    cfg.finish()?;
    let current = match kind.as_str() {
        "density" => charge_density(site, p.n_sites)?,
        // hopping amplitude of the bond in the spin chain, (-1)^{j+1}/2 at 1-based j
        "bond" => bond_current(site, -qlat_core::models::site_parity(site) / 2.0, p.n_sites)?,
        other => return Err(Config::invalid("algorithm", "current", other, "expected `density` or `bond`").into()),
    };
    let h = build_thirring(&p)?;
    let (_, psi) = prepare_sector_state(&h, &spec, DEFAULT_DENSE_CAP)?;
    let q_grid: Vec<(f64, f64)> = omegas.iter().flat_map(|&w| ks.iter().map(move |&k| (w, k))).collect();
    let times = linspace(-t_max, t_max, t_points);
    let w = hadronic_tensor(&h, &psi, &current, &ys, &times, &q_grid, mode)?;
    let mut header = meta(Subcommand::HadronicTensor, seed, cfg);
    header.push(("quadrature".into(), w.quadrature.clone()));
    let mut csv = Csv::new(&header, &["omega", "k", "re", "im"]);
    for ((omega, k), v) in q_grid.iter().zip(&w.values) {
        csv.row(&[num(*omega), num(*k), num(v.re), num(v.im)]);
    }
    let mut out = Outcome::default();
    out.files.push(("tensor.csv".into(), csv.into_bytes()));
    out.hamiltonians.push(("hamiltonian.txt".into(), h));
    Ok(out)
}

enum Lattice {
    Schwinger(SchwingerParams),
    Thirring(ThirringParams),
}

impl Lattice {
    fn read(cfg: &mut Config, kind: &str) -> Result<Self, ConfigError> {
        match kind {
            "schwinger" => Ok(Lattice::Schwinger(schwinger_model(cfg, 1.0)?)),
            "thirring" => Ok(Lattice::Thirring(thirring_model(cfg)?)),
            other => Err(Config::invalid("model", "model", other, "expected `schwinger` or `thirring`")),
        }
    }

    fn mass(&self) -> f64 {
        match self {
            Lattice::Schwinger(p) => p.mass,
            Lattice::Thirring(p) => p.mass,
        }
    }

    fn build(&self, mass: f64) -> qlat_core::Result<PauliSum> {
        match self {
            Lattice::Schwinger(p) => build_schwinger(&SchwingerParams { mass, ..*p }),
            Lattice::Thirring(p) => build_thirring(&ThirringParams { mass, ..*p }),
        }
    }
}

fn observable(name: &str, h1: &PauliSum, kind: &str) -> Result<PauliSum, ConfigError> {
    let n = h1.n_qubits();
    match name {
        "energy" => Ok(h1.clone()),
        "particle_density" if kind == "schwinger" => Ok(particle_density_operator(n)),
        _ => {
            let site = name.strip_prefix('z').and_then(|j| j.parse::<usize>().ok()).filter(|&j| j < n);
            let bad = || Config::invalid("algorithm", "observable", name, "expected `energy`, `particle_density` (Schwinger) or `z<site>`");
            let j = site.ok_or_else(bad)?;
            let mut o = PauliSum::new(n);
            o.add(1.0, PauliString::single(n, j, Letter::Z).map_err(|_| bad())?).map_err(|_| bad())?;
            Ok(o)
        }
    }
}

fn thermal(cfg: &mut Config, seed: u64) -> Result<Outcome, RunError> {
    let kind: String = cfg.optional("model", "model", "schwinger".to_string())?;
    let lattice = Lattice::read(cfg, &kind)?;
    let quench_mass: f64 = cfg.optional("model", "quench_mass", lattice.mass())?;
    let beta: f64 = cfg.required("algorithm", "beta")?;
    let bloch_steps = positive("algorithm", "bloch_steps", cfg.optional("algorithm", "bloch_steps", 1)?)?;
    let threshold: f64 = cfg.optional("algorithm", "threshold", 0.0)?;
    let t_max: f64 = cfg.required("algorithm", "t_max")?;
    let t_points = positive("algorithm", "t_points", cfg.optional("algorithm", "t_points", 11)?)?;
    let obs_name: String = cfg.optional("algorithm", "observable", "energy".to_string())?;
    let dump: bool = cfg.optional("algorithm", "dump_gibbs", false)?;
    let mode = propagation(cfg)?;
    cfg.finish()?;
    if threshold < 0.0 {
        return Err(Config::invalid("algorithm", "threshold", threshold, "must be non-negative").into());
    }
    let h0 = lattice.build(lattice.mass())?;
    let h1 = lattice.build(quench_mass)?;
    let o = observable(&obs_name, &h1, &kind)?;
    let ts = bloch_propagate(&h0, beta, bloch_steps)?;
    let ens = decompose(&ts, threshold);
    let times = linspace(0.0, t_max, t_points);
    let values = ensemble_trajectory(&ens, &h1, &o, &times, mode)?;
    let mut csv = Csv::new(&meta(Subcommand::Thermal, seed, cfg), &["t", "observable", "n_entries", "threshold"]);
    for (t, v) in times.iter().zip(&values) {
        csv.row(&[num(*t), num(*v), ens.entries.len().to_string(), num(threshold)]);
    }
    let mut out = Outcome::default();
    out.result("partition_function", json!(ts.trace()));
    out.result("trace_estimate", json!(ens.trace_estimate));
    out.result("n_entries", json!(ens.entries.len()));
    out.files.push(("thermal.csv".into(), csv.into_bytes()));
    if dump {
        let rho = ts.rho();
        let bytes = gibbs_dump(ts.n_qubits(), rho.nrows(), |r, c| -> Complex64 { rho[(r, c)] });
        out.files.push(("gibbs.bin".into(), bytes));
    }
    out.hamiltonians.push(("hamiltonian.txt".into(), h0));
    out.hamiltonians.push(("hamiltonian_quench.txt".into(), h1));
    Ok(out)
}

fn dump_hamiltonian(cfg: &mut Config) -> Result<Outcome, RunError> {
    let kind: String = cfg.required("model", "model")?;
    let h = match kind.as_str() {
        "deuteron" => build_deuteron(DeuteronSpec { level_count: cfg.required("model", "level_count")? })?,
        "resource" => {
            let n = cfg.required("model", "n_sites")?;
            build_resource_xy(&resource_model(cfg, "model", n)?)?
        }
        other => {
            let lattice = Lattice::read(cfg, other)?;
            lattice.build(lattice.mass())?
        }
    };
    cfg.finish()?;
    let mut out = Outcome::default();
    out.result("terms", json!(h.len()));
    out.hamiltonians.push(("hamiltonian.txt".into(), h));
    Ok(out)
}
