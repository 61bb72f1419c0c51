use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use walkforge_core::arith::{build_paley_scheme, hiding_success, paley_abs_idempotent_norm, abs_norm_real, paley_report, weil_ratio};
use walkforge_core::distinctness::{build_ed, default_grid, ed_dynamics, ed_query_count, ed_spectrum, project_full_graph};
use walkforge_core::fit::loglog_slope;
use walkforge_core::io::{parse_tree_json, read_matrix};
use walkforge_core::lazy::limit_error;
use walkforge_core::linalg::{basis_vector, eig_hermitian, exact_propagator, operator_norm, CMatrix, HermitianMatrix};
use walkforge_core::phase::{fidelity_bound, simulate_phase_channel, steps_for_fidelity};
use walkforge_core::product::{diagonal_split, product_formula, simulate_tree, Order, WeightedTree};
use walkforge_core::walk::{
    build_walk, dense_isometry, dense_swap, predicted_spectrum, restricted_spectrum, spectrum_mismatch,
    walk_eigenpairs, WalkVariant,
};
use walkforge_core::{Result, Tolerances, WalkError};

use crate::acceptance;
use crate::report::{Check, ExperimentReport};
use crate::{Cli, Command, Variant};

pub fn run(cli: &Cli) -> Result<ExperimentReport> {
    let start = Instant::now();
    let config = serde_json::to_value(cli).expect("config serializes");
    let tol = cli.tol.tolerances();
    let mut report = match &cli.command {
        Command::SpectrumCheck { input, variant } => spectrum_check(input, *variant, &tol),
        Command::LimitSweep { input, tau, eps, state } => limit_sweep(input, tau, eps, *state),
        Command::TrotterBench { input, tree, t, order, steps } => {
            trotter_bench(input.as_deref(), tree.as_deref(), *t, *order, steps)
        }
        Command::PhaseSim { input, t, m, delta, state, strict } => phase_sim(input, *t, *m, *delta, *state, *strict),
        Command::EdRun { n, delta, points } => ed_run(*n, *delta, *points),
        Command::EdOracle { n, pair } => ed_oracle(*n, *pair, &tol),
        Command::Paley { p, c } => paley(*p, *c, &tol),
        Command::SchemeVerify { p } => scheme_verify(*p, &tol),
        Command::AllAcceptance => all_acceptance(cli.seed, !cli.no_timestamp),
    }?;
    report.config = config;
    if !cli.no_timestamp {
        report.duration_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn basis_state(h: &HermitianMatrix, state: usize) -> Result<walkforge_core::CVector> {
    if state >= h.dim() {
        return Err(WalkError::InvalidParameter(format!(
            "state {state} out of range for dimension {}",
            h.dim()
        )));
    }
    Ok(basis_vector(h.dim(), state))
}

#[derive(Serialize)]
struct SpectrumRow {
    lambda: f64,
    mu_plus_re: f64,
    mu_plus_im: f64,
    mu_minus_re: f64,
    mu_minus_im: f64,
    collapsed: bool,
    residual_plus: f64,
    residual_minus: f64,
}

fn spectrum_check(input: &Path, variant: Variant, tol: &Tolerances) -> Result<ExperimentReport> {
    let h = read_matrix(input)?;
    let variant = match variant {
        Variant::Perron => WalkVariant::PerronWeighted,
        Variant::ColumnSum => WalkVariant::ColumnSumWeighted,
    };
    let w = build_walk(&h, variant)?;
    let spec = eig_hermitian(&w.normalized_hamiltonian())?;
    let mut report = ExperimentReport::new("spectrum-check", json!(null));
    let pairs = walk_eigenpairs(&w, &spec)?;
    let mut residual: f64 = 0.0;
    for p in &pairs {
        residual = residual.max(p.residual_plus).max(p.residual_minus);
        report.row(&SpectrumRow {
            lambda: p.lambda,
            mu_plus_re: p.mu_plus.re,
            mu_plus_im: p.mu_plus.im,
            mu_minus_re: p.mu_minus.re,
            mu_minus_im: p.mu_minus.im,
            collapsed: p.collapsed,
            residual_plus: p.residual_plus,
            residual_minus: p.residual_minus,
        });
    }
    let mismatch = spectrum_mismatch(&restricted_spectrum(&w)?, &predicted_spectrum(&spec.eigenvalues));
    let t = dense_isometry(&w);
    let n = h.dim();
    let iso = operator_norm(&(t.adjoint() * &t - CMatrix::identity(n, n)));
    let gram = operator_norm(&(t.adjoint() * dense_swap(w.local_dim()) * &t - w.normalized_hamiltonian().matrix()));
    report.check(Check::at_most("eigenvalue mismatch", mismatch, tol.unitarity));
    report.check(Check::at_most("eigenvector residual", residual, tol.unitarity));
    report.check(Check::at_most("T†T - I", iso, tol.algebraic));
    report.check(Check::at_most("T†ST - H/normalizer", gram, tol.algebraic));
    Ok(report)
}

#[derive(Serialize)]
struct SweepRow {
    tau: usize,
    epsilon: f64,
    measured_error: f64,
    bound: f64,
    ratio: f64,
    leakage: f64,
}

fn limit_sweep(input: &Path, taus: &[usize], eps: &[f64], state: usize) -> Result<ExperimentReport> {
    let h = read_matrix(input)?;
    let phi = basis_state(&h, state)?;
    let mut report = ExperimentReport::new("limit-sweep", json!(null));
    let mut worst: f64 = 0.0;
    for &e in eps {
        for &tau in taus {
            let r = limit_error(&h, &phi, e, tau)?;
            worst = worst.max(r.ratio);
            report.row(&SweepRow {
                tau: r.tau,
                epsilon: r.epsilon,
                measured_error: r.measured_error,
                bound: r.bound,
                ratio: r.ratio,
                leakage: r.leakage,
            });
        }
    }
    report.check(Check::at_most("max error/bound", worst, 1.0));
    Ok(report)
}

#[derive(Serialize)]
struct TrotterRow {
    n: usize,
    order: u32,
    error: f64,
}

fn trotter_bench(input: Option<&Path>, tree: Option<&Path>, t: f64, order: u32, steps: &[usize]) -> Result<ExperimentReport> {
    let formula = Order::try_from(order)?;
    let errors: Vec<f64> = match (input, tree) {
        (Some(path), None) => {
            let h = read_matrix(path)?;
            let (a, b) = diagonal_split(&h);
            let exact = exact_propagator(&h, t)?;
            steps
                .iter()
                .map(|&n| Ok(operator_norm(&(product_formula(&a, &b, t, n, formula)? - &exact))))
                .collect::<Result<_>>()?
        }
        (None, Some(path)) => {
            let file = parse_tree_json(&std::fs::read_to_string(path)?)?;
            let tree = WeightedTree::from_file(&file)?;
            let exact = exact_propagator(&tree.hamiltonian(), t)?;
            steps
                .iter()
                .map(|&n| Ok(operator_norm(&(simulate_tree(&tree, t, n, formula)? - &exact))))
                .collect::<Result<_>>()?
        }
        _ => return Err(WalkError::InvalidParameter("give exactly one of --input and --tree".into())),
    };
    let mut report = ExperimentReport::new("trotter-bench", json!(null));
    for (&n, &error) in steps.iter().zip(&errors) {
        report.row(&TrotterRow { n, order, error });
    }
    let resolvable = errors.iter().all(|&e| e > 1e-13);
    if steps.len() >= 2 && resolvable {
        let xs: Vec<f64> = steps.iter().map(|&n| n as f64).collect();
        let slope = loglog_slope(&xs, &errors);
        report.check(Check::at_most("|slope + order|", (slope + f64::from(order)).abs(), 0.3));
    }
    Ok(report)
}

fn phase_sim(input: &Path, t: f64, m: Option<usize>, delta: f64, state: usize, strict: bool) -> Result<ExperimentReport> {
    let h = read_matrix(input)?;
    let psi = basis_state(&h, state)?;
    let required = steps_for_fidelity(&h, t, delta)?;
    let m = m.unwrap_or(required);
    let (_, channel) = simulate_phase_channel(&h, &psi, t, m)?;
    let mut report = ExperimentReport::new("phase-sim", json!(null));
    report.row(&json!({
        "m": m,
        "m_required": required,
        "t": t,
        "tau_norm": channel.tau_norm,
        "fidelity": channel.fidelity,
        "bound_93": channel.bound_93,
        "variance_max": channel.variance_max,
        "bound_186": channel.bound_186,
        "leakage": channel.leakage,
        "collapsed": channel.collapsed,
    }));
    if m >= 2 {
        report.check(Check::at_least("fidelity vs 1 - 93τ²/M²", channel.fidelity, fidelity_bound(channel.tau_norm, m)));
    }
    if strict {
        report.check(Check::at_least("fidelity vs 1 - δ", channel.fidelity, 1.0 - delta));
    }
    Ok(report)
}

fn ed_run(n: usize, delta: f64, points: usize) -> Result<ExperimentReport> {
    let inst = build_ed(n)?;
    let spectrum = ed_spectrum(&inst)?;
    let dynamics = ed_dynamics(&inst, &default_grid(&spectrum, points.max(3)))?;
    let queries = ed_query_count(&inst, delta)?;
    let mut report = ExperimentReport::new("ed-run", json!(null));
    report.row(&json!({
        "n": n,
        "m": inst.m,
        "lambda_plus": spectrum.lambda_plus,
        "lambda_minus": spectrum.lambda_minus,
        "gap": spectrum.gap,
        "scaled_plus": spectrum.scaled_plus,
        "scaled_minus": spectrum.scaled_minus,
        "vec_plus": spectrum.vec_plus,
        "vec_minus": spectrum.vec_minus,
        "t_peak": dynamics.t_peak,
        "peak_overlap": dynamics.peak_overlap,
        "peak_time_constant": dynamics.peak_time_constant,
        "register_size": queries.register_size,
        "setup_queries": queries.setup,
        "walk_queries": queries.walk_queries,
        "total_queries": queries.total,
        "ratio": queries.ratio,
    }));
    Ok(report)
}

fn ed_oracle(n: usize, pair: (usize, usize), tol: &Tolerances) -> Result<ExperimentReport> {
    let p = project_full_graph(n, pair)?;
    let mut report = ExperimentReport::new("ed-oracle", json!(null));
    report.check(Check::at_most("projection vs reduced matrix", p.max_deviation, tol.algebraic));
    report.check(Check::at_most("subspace invariance residual", p.invariance_residual, tol.algebraic));
    report.row(&p);
    Ok(report)
}

fn paley(p: u64, c: u64, tol: &Tolerances) -> Result<ExperimentReport> {
    let r = paley_report(p, c)?;
    let mut report = ExperimentReport::new("paley", json!(null));
    report.check(Check::at_most("max |K|/2√p", weil_ratio(p)?, 1.0));
    report.check(Check::at_most("Fourier off-diagonal", r.fourier_offdiag, tol.iterative));
    report.check(Check::at_most("Fourier eigenvalue residual", r.eigenvalue_residual, tol.iterative));
    report.check(Check::at_most("|‖abs(H)‖ - 2|X|(p-|X|)/p|", (r.abs_norm - r.expected_abs_norm).abs(), tol.unitarity));
    report.check(Check::at_most("‖H‖ - (2√p + 1)", r.norm - (2.0 * (p as f64).sqrt() + 1.0), 0.0));
    report.row(&r);
    Ok(report)
}

fn scheme_verify(p: u64, tol: &Tolerances) -> Result<ExperimentReport> {
    let scheme = build_paley_scheme(p)?;
    let c = scheme.verify();
    let hiding = hiding_success(&scheme)?;
    let abs_e1 = abs_norm_real(&scheme.idempotents[1])?;
    let mut report = ExperimentReport::new("scheme-verify", json!(null));
    report.check(Check::at_most("scheme and idempotent residual", c.worst(), tol.iterative));
    report.check(Check::at_most("|‖abs(E1)‖ - (√p+1)(p-1)/2p|", (abs_e1 - paley_abs_idempotent_norm(p)).abs(), tol.iterative));
    report.check(Check::at_most("hiding direct vs formula", hiding.max_formula_gap, tol.iterative));
    report.row(&json!({
        "p": p,
        "class_sizes": scheme.class_sizes,
        "dual": scheme.dual,
        "checks": c,
        "abs_e1_norm": abs_e1,
        "hiding": hiding,
    }));
    Ok(report)
}

fn all_acceptance(seed: u64, timings: bool) -> Result<ExperimentReport> {
    let outcomes = acceptance::run_all(seed)?;
    let mut report = ExperimentReport::new("all-acceptance", json!(null));
    for o in &outcomes {
        eprintln!("{}", o.line());
        let failing = o.checks.iter().filter(|c| !c.pass).count();
        report.check(Check::at_most(format!("criterion {}", o.id), failing as f64, 0.0));
        let mut row = serde_json::to_value(o).expect("outcome serializes");
        if timings {
            row["seconds"] = json!(o.seconds);
        }
        report.rows.push(row);
    }
    Ok(report)
}
