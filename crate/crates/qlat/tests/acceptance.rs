//! End-to-end acceptance gate. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, then exits nonzero on failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use nalgebra::{DMatrix, DVector};
use qlat_core::evolution::{exact_evolve, schwinger_trajectory, trotter_error, trotter_evolve, trotter_trajectory, EvolutionPlan};
use qlat_core::fermion::{jw_annihilation, jw_creation};
use qlat_core::models::{
    bare_vacuum, bare_vacuum_index, build_deuteron, build_schwinger, build_thirring, build_thirring_from_fermions,
    index_bits, particle_density, reconstruct_efield, total_charge, DeuteronSpec, ResourceParams, SchwingerParams,
    ThirringParams,
};
use qlat_core::structure::{
    cell_bilinear, charge_density, hadronic_tensor, pdf_transform, prepare_sector_state, two_point, CorrelatorRequest,
    Propagation, SectorSpec,
};
use qlat_core::thermal::{bloch_propagate, decompose, ensemble_trajectory};
use qlat_core::vqe::{
    dense_scan_point, hva_schwinger_ansatz, optimize, phase_scan, state_energy_and_variance, steepest_change,
    ucc_deuteron_ansatz, OptimizerConfig, ParamPoint,
};
use qlat_core::{Letter, PauliString, PauliSum};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn qlat(subcommand: &str, config: &str, out: &Path, seed: &str) -> std::process::Output {
    std::fs::create_dir_all(out).unwrap();
    let cfg = out.join("run.ini");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_qlat"))
        .args([subcommand, "--seed", seed, "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn deuteron_vqe() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (levels, tol) in [(2, 1e-6), (3, 1e-4)] {
        let dir = tempfile::tempdir().unwrap();
        let clock = Instant::now();
        let out = qlat("deuteron-vqe", &format!("[model]\nlevel_count = {levels}\n"), dir.path(), "0");
        let elapsed = clock.elapsed();
        if !out.status.success() {
            return Err(format!("N={levels}: {}", String::from_utf8_lossy(&out.stderr)));
        }
        let energy = manifest(dir.path())["results"]["energy"].as_f64().unwrap();
        let ground = eigh(&sum_matrix(&build_deuteron(DeuteronSpec { level_count: levels }).unwrap())).0[0];
        let err = (energy - ground).abs();
        ok &= err < tol && within(elapsed, 5.0);
        if levels == 2 {
            ok &= (ground + 1.749).abs() < 1e-3;
        }
        detail.push(format!("N={levels} E={energy:.9} dense={ground:.9} err={err:.1e} {:.2}s", elapsed.as_secs_f64()));
    }
    check(ok, detail.join("; "))
}

fn trotter_convergence() -> Outcome {
    let clock = Instant::now();
    let h = build_schwinger(&SchwingerParams::new(6, 0.5)).unwrap();
    let s0 = bare_vacuum(6).unwrap();
    let steps = [8usize, 16, 32, 64, 128];
    let errors: Vec<f64> =
        steps.iter().map(|&k| trotter_error(&EvolutionPlan::new(h.clone(), 1.0, k).unwrap(), &s0).unwrap()).collect();
    let xs: Vec<f64> = steps.iter().map(|&k| (k as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 5.0, ys.iter().sum::<f64>() / 5.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let monotone = errors.windows(2).all(|w| w[1] <= w[0]);
    let elapsed = clock.elapsed();
    check(
        monotone && (-2.2..=-0.8).contains(&slope) && within(elapsed, 30.0),
        format!("errors {:?} slope {slope:.3} {:.2}s", errors.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(), elapsed.as_secs_f64()),
    )
}

fn pair_production() -> Outcome {
    let clock = Instant::now();
    let n = 8;
    let h = build_schwinger(&SchwingerParams::new(n, 0.5)).unwrap();
    let s0 = bare_vacuum(n).unwrap();
    let initial = particle_density(&s0, n).unwrap();
    // t ∈ [0, 2] in 256 steps: the density and charge trajectories are compared at every step
    let plan = EvolutionPlan::new(h.clone(), 2.0, 256).unwrap();
    let (mut worst, mut density_at_half, mut worst_charge) = (0.0f64, 0.0, 0.0f64);
    trotter_trajectory(&plan, &s0, |step, t, s| {
        let exact = exact_evolve(&h, t, &s0).unwrap();
        let d = particle_density(s, n).unwrap();
        worst = worst.max((d - particle_density(&exact, n).unwrap()).abs());
        worst_charge = worst_charge.max(total_charge(s).abs());
        if step == 64 {
            density_at_half = d;
        }
    })
    .unwrap();
    let elapsed = clock.elapsed();
    check(
        initial == 0.0 && density_at_half > 0.0 && worst < 1e-3 && within(elapsed, 60.0),
        format!(
            "density(0)={initial} density(0.5)={density_at_half:.4e} max |trotter-dense|={worst:.2e} max |charge|={worst_charge:.1e} {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn phase_transition() -> Outcome {
    let clock = Instant::now();
    let masses: Vec<f64> = (0..=14).map(|k| 0.2 - 0.1 * k as f64).collect();
    let template = |n| SchwingerParams { n_sites: n, mass: 0.0, coupling: 1.0, spacing: 0.5, boundary_field: 0.0 };
    let rp = ResourceParams { n_sites: 12, j0: 1.0, alpha: 1.0, b_field: 0.0, delta: 1.0 };
    let ansatz = hva_schwinger_ansatz(&rp, 6).unwrap();
    let cfg = OptimizerConfig { budget: 4000, ..Default::default() };
    let rows = phase_scan(&masses, &template(12), &ansatz, &cfg).unwrap();
    let mut vqe: Vec<(f64, f64)> = rows.iter().map(|r| (r.mass, r.order_parameter)).collect();
    vqe.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut dense: Vec<(f64, f64)> = masses
        .iter()
        .map(|&m| (m, dense_scan_point(&SchwingerParams { mass: m, ..template(8) }, 14).unwrap().1))
        .collect();
    dense.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mv, md) = (steepest_change(&vqe).unwrap(), steepest_change(&dense).unwrap());
    let window = -1.0 - 1e-9..=-0.4 + 1e-9;
    let elapsed = clock.elapsed();
    check(
        window.contains(&mv) && window.contains(&md) && within(elapsed, 600.0),
        format!("N=12 VQE steepest m={mv:.2}, N=8 dense steepest m={md:.2} {:.1}s", elapsed.as_secs_f64()),
    )
}

fn self_verification() -> Outcome {
    let mut worst_dense = 0.0f64;
    let models = [
        build_schwinger(&SchwingerParams::new(6, 0.3)).unwrap(),
        build_thirring(&ThirringParams { n_sites: 6, mass: 0.5, coupling: 0.8 }).unwrap(),
        build_deuteron(DeuteronSpec { level_count: 3 }).unwrap(),
    ];
    for h in &models {
        let (_, v) = eigh(&sum_matrix(h));
        for k in 0..v.ncols() {
            let (_, var) = state_energy_and_variance(h, &state(&v.column(k).into_owned())).unwrap();
            worst_dense = worst_dense.max(var);
        }
    }
    let mut worst_vqe = 0.0f64;
    for levels in [2, 3] {
        let h = build_deuteron(DeuteronSpec { level_count: levels }).unwrap();
        let a = ucc_deuteron_ansatz(levels).unwrap();
        let r = optimize(&h, &a, &ParamPoint::zeros(a.parameter_count()), &OptimizerConfig::default()).unwrap();
        worst_vqe = worst_vqe.max(r.variance);
    }
    check(
        worst_dense < 1e-9 && worst_vqe < 1e-6,
        format!("max dense eigenstate variance {worst_dense:.1e}, max deuteron VQE variance {worst_vqe:.1e}"),
    )
}

fn fermion_map() -> Outcome {
    let mut worst_car = 0.0f64;
    for n in 1..=6 {
        let dim = 1usize << n;
        let ann: Vec<_> = (0..n).map(|j| operator_matrix(&jw_annihilation(j, n).unwrap())).collect();
        let cre: Vec<_> = (0..n).map(|j| operator_matrix(&jw_creation(j, n).unwrap())).collect();
        let id = DMatrix::<C>::identity(dim, dim);
        for i in 0..n {
            for j in 0..n {
                let mut ac = &ann[i] * &cre[j] + &cre[j] * &ann[i];
                if i == j {
                    ac -= &id;
                }
                let aa = &ann[i] * &ann[j] + &ann[j] * &ann[i];
                let cc = &cre[i] * &cre[j] + &cre[j] * &cre[i];
                worst_car = worst_car.max(max_abs(&ac)).max(max_abs(&aa)).max(max_abs(&cc));
            }
        }
    }
    let mut worst_thirring = 0.0f64;
    for n in 2..=8 {
        for (mass, coupling) in [(0.0, 0.0), (0.5, 1.0), (-1.3, 0.4)] {
            let p = ThirringParams { n_sites: n, mass, coupling };
            let diff = sum_matrix(&build_thirring(&p).unwrap()) - sum_matrix(&build_thirring_from_fermions(&p).unwrap());
            worst_thirring = worst_thirring.max(max_abs(&diff));
        }
    }
    check(
        worst_car < 1e-13 && worst_thirring < 1e-13,
        format!("max CAR residual {worst_car:.1e} (n<=6), max Thirring spin/fermion difference {worst_thirring:.1e} (N<=8)"),
    )
}

fn gauss_law() -> Outcome {
    let mut uniform = true;
    for eps in [0.0, 0.5, -1.0] {
        for n in [4, 8, 12] {
            let p = SchwingerParams { boundary_field: eps, ..SchwingerParams::new(n, 0.5) };
            let field = reconstruct_efield(&index_bits(bare_vacuum_index(n), n), &p).unwrap();
            uniform &= field.iter().all(|&l| l == eps);
        }
    }
    let mut worst = 0.0f64;
    for (n, mass) in [(8, 0.5), (8, -0.7), (10, 0.1)] {
        let h = build_schwinger(&SchwingerParams::new(n, mass)).unwrap();
        let rows = schwinger_trajectory(&EvolutionPlan::new(h, 6.0, 200).unwrap(), &bare_vacuum(n).unwrap(), 1).unwrap();
        worst = rows.iter().fold(worst, |w, r| w.max(r.charge.abs()));
    }
    check(uniform && worst < 1e-8, format!("vacuum field uniform: {uniform}, max |charge| along trajectories {worst:.1e}"))
}

fn structure_oracles() -> Outcome {
    let n = 8;
    let h = build_thirring(&ThirringParams { n_sites: n, mass: 0.6, coupling: 0.8 }).unwrap();
    let (_, psi) = prepare_sector_state(&h, &SectorSpec::ground(0), 14).unwrap();
    let op = cell_bilinear(3, n).unwrap();
    let req = CorrelatorRequest {
        op_a: op.clone(),
        op_b: op.clone(),
        times: (0..5).map(|k| 0.75 * k as f64).collect(),
        positions: (-3..=3).collect(),
    };
    let table = two_point(&h, &psi, &req, Propagation::Exact).unwrap();
    let mut worst_two = 0.0f64;
    for (yi, &y) in req.positions.iter().enumerate() {
        let a_y = op.translated(y).unwrap();
        for (ti, &t) in req.times.iter().enumerate() {
            worst_two = worst_two.max((table.get(yi, ti) - spectral_correlator(&h, &psi, &a_y, &op, t)).norm());
        }
    }

    // hadronic tensor against a direct time-ordered sum built from e^{−iHt}
    let current = charge_density(3, n).unwrap();
    let positions = vec![-3, -2, -1, 0, 1, 2, 3, 4];
    let dt = 0.5;
    let times: Vec<f64> = (-4..=4).map(|k| dt * k as f64).collect();
    let q_grid = [(0.0, 0.0), (1.3, 0.5), (-0.7, 2.0), (2.5, -1.0), (4.0, std::f64::consts::PI)];
    let w = hadronic_tensor(&h, &psi, &current, &positions, &times, &q_grid, Propagation::Exact).unwrap();
    let hm = sum_matrix(&h);
    let b = sum_matrix(&current);
    let v = column(&psi);
    let mut want = vec![0.0; q_grid.len()];
    for &t in &times {
        let u = expm_taylor(&hm, t);
        for &y in &positions {
            let a_t = u.adjoint() * sum_matrix(&current.translated(y).unwrap()) * &u;
            let op = if t >= 0.0 { a_t * &b } else { &b * a_t };
            let g: C = (v.adjoint() * op * &v)[0];
            for (qi, &(omega, k)) in q_grid.iter().enumerate() {
                want[qi] += (C::from_polar(dt, omega * t - k * y as f64) * g).re;
            }
        }
    }
    let worst_w = w.values.iter().zip(&want).map(|(g, e)| (g - C::new(*e, 0.0)).norm()).fold(0.0, f64::max);

    // Parseval on a measured correlator slice and on a fixed pseudo-random sequence
    let mut worst_parseval = 0.0f64;
    let ys: Vec<f64> = req.positions.iter().map(|&y| y as f64).collect();
    let noise = scrambled_state(5, 2);
    let samples = [
        (ys, table.slice_at_time(2)),
        ((0..32).map(|j| 0.3 * j as f64 - 4.0).collect(), noise.amplitudes().to_vec()),
    ];
    for (ys, cs) in &samples {
        let f = pdf_transform(ys, cs, 1.7).unwrap();
        let dx = f.grid[1] - f.grid[0];
        let lhs: f64 = f.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx;
        let rhs: f64 = cs.iter().map(|v| v.norm_sqr()).sum::<f64>() * (ys[1] - ys[0]);
        worst_parseval = worst_parseval.max((lhs - rhs).abs() / rhs);
    }
    check(
        worst_two < 1e-6 && worst_w < 1e-6 && worst_parseval < 1e-10,
        format!("two_point {worst_two:.1e}, hadronic_tensor {worst_w:.1e}, Parseval relative {worst_parseval:.1e}"),
    )
}

fn thermal_pipeline() -> Outcome {
    let n = 6;
    let th = |mass| ThirringParams { n_sites: n, mass, coupling: 0.7 };
    let h0 = build_thirring(&th(0.8)).unwrap();
    let h1 = build_thirring(&th(-0.5)).unwrap();
    let beta = 0.9;
    let ts = bloch_propagate(&h0, beta, 4).unwrap();

    let (e, v) = eigh(&sum_matrix(&h0));
    let z: f64 = e.iter().map(|x| (-beta * x).exp()).sum();
    let trace_err = (ts.trace() - z).abs() / z;

    let rho = &v * DMatrix::from_diagonal(&DVector::from_iterator(e.len(), e.iter().map(|x| c((-beta * x).exp(), 0.0)))) * v.adjoint();
    let mut o = PauliSum::new(n);
    o.add(1.0, PauliString::single(n, 2, Letter::Z).unwrap()).unwrap();
    let om = sum_matrix(&o);
    let times: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
    let got = ensemble_trajectory(&decompose(&ts, 0.0), &h1, &o, &times, Propagation::Exact).unwrap();
    let mut worst = 0.0f64;
    for (t, g) in times.iter().zip(&got) {
        let u = expm_taylor(&sum_matrix(&h1), *t);
        let want = ((&om * &u * &rho * u.adjoint()).trace() / rho.trace()).re;
        worst = worst.max((g - want).abs());
    }
    check(
        worst < 1e-8 && trace_err < 1e-10,
        format!("max observable error over t in [0,5] {worst:.1e}, relative trace error {trace_err:.1e}"),
    )
}

fn determinism_and_performance() -> Outcome {
    let runs = [
        ("schwinger-quench", "[model]\nn_sites = 8\nmass = 0.5\n[algorithm]\nt_max = 3\nsteps = 120\n", "trajectory.csv"),
        ("schwinger-vqe", "[model]\nn_sites = 6\nmass = -0.6\nspacing = 0.5\n[algorithm]\nbudget = 500\nstarts = 2\n", "vqe.csv"),
        ("thermal", "[model]\nn_sites = 4\nmass = 0.5\ncoupling = 0.7\nquench_mass = -0.5\n[algorithm]\nbeta = 1\nt_max = 2\nthreshold = 1e-3\n", "thermal.csv"),
    ];
    let mut identical = true;
    for (cmd, cfg, file) in runs {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let ok = qlat(cmd, cfg, a.path(), "11").status.success() && qlat(cmd, cfg, b.path(), "11").status.success();
        identical &= ok && std::fs::read(a.path().join(file)).unwrap() == std::fs::read(b.path().join(file)).unwrap();
    }

    let n = 16;
    let h = build_schwinger(&SchwingerParams::new(n, 0.5)).unwrap();
    let plan = EvolutionPlan::new(h, 1.0, 100).unwrap();
    let clock = Instant::now();
    let s = trotter_evolve(&plan, &bare_vacuum(n).unwrap()).unwrap();
    let elapsed = clock.elapsed();
    let norm_ok = (s.norm() - 1.0).abs() < 1e-10;
    check(
        identical && norm_ok && within(elapsed, 60.0),
        format!("byte-identical CSVs: {identical}; 16-qubit Trotter, 100 sweeps: {:.2}s", elapsed.as_secs_f64()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("deuteron VQE", deuteron_vqe),
        ("Trotter convergence", trotter_convergence),
        ("pair production", pair_production),
        ("phase transition", phase_transition),
        ("self-verification", self_verification),
        ("fermion map", fermion_map),
        ("Gauss law", gauss_law),
        ("structure oracles", structure_oracles),
        ("thermal pipeline", thermal_pipeline),
        ("determinism and performance", determinism_and_performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("acceptance {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
