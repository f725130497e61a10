//! `run` and `project`: scenario execution.

use std::path::{Path, PathBuf};

use qchar_core::constraints::{
    check_constraint_preservation, check_flow_projection_commute, involution_residual, project, projected_coordinates,
    ConstraintSet,
};
use qchar_core::dynamics::{verify_identity, FlowMode};
use qchar_core::oracle::{PhaseFunction, PolyFunction};
use qchar_core::quadrature::pairwise_sum;
use qchar_core::report::ResidualReport;
use qchar_core::semiclassical::{evolve_observable, propagate, Sample};
use qchar_core::wigner::{mean_and_stderr, sample_points};
use qchar_core::PolySymbol;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::literal::format_polynomial;
use crate::output::{emit_results, Cell, Table};
use crate::scenario::{Format, Integration, Prepared};

/// Files written and whether every requested check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn into_result(self) -> Result<Vec<PathBuf>, CliError> {
        if self.failures.is_empty() {
            Ok(self.files)
        } else {
            Err(CliError::Verification(self.failures.join("; ")))
        }
    }
}

fn residual_row(table: &mut Table, leading: Vec<Cell>, rep: &ResidualReport) {
    let first = rep.first_nonzero().map_or(String::new(), |t| {
        let orders: Vec<String> = t.orders.iter().map(|o| o.to_string()).collect();
        format!("{}[{}]: {}", t.label, orders.join(","), format_polynomial(&t.residual))
    });
    let mut row = leading;
    row.extend([
        rep.is_zero().into(),
        rep.checked.into(),
        rep.nonzero.len().into(),
        first.into(),
    ]);
    table.push(row);
}

fn residual_columns(name: &str, leading: &[&str]) -> Table {
    let mut cols: Vec<&str> = leading.to_vec();
    cols.extend(["residual_zero", "checked", "nonzero", "first_nonzero"]);
    Table::with_columns(name, &cols)
}

fn poly_fn(f: &PolySymbol, hbar: f64) -> Result<PolyFunction, CliError> {
    Ok(PolyFunction::new(f, hbar)?)
}

/// Propagates every point in parallel, keeping the input order.
fn propagate_all(points: &[Vec<f64>], h: &PolyFunction, p: &Prepared) -> Result<Vec<Vec<Sample>>, CliError> {
    let runs: Vec<_> = points.par_iter().map(|x| propagate(x, h, &p.times, p.stepper)).collect();
    runs.into_iter()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| CliError::Numerical(format!("point {i}: {e}"))))
        .collect()
}

fn trajectory_tables(p: &Prepared, h: &PolyFunction) -> Result<Vec<Table>, CliError> {
    let d = p.dim();
    let heff = p.effective_hbar();
    let mut cols = vec!["t".to_string(), "point_id".to_string()];
    cols.extend((1..=d).map(|i| format!("u0_{i}")));
    cols.extend((1..=d).map(|i| format!("u1_{i}")));
    cols.extend(["detJ".to_string(), "energy_residual".to_string()]);
    let mut traj = Table::new("trajectories", cols);
    let mut obs = Table::with_columns("observables", &["t", "point_id", "observable_id", "value"]);
    let fs: Vec<PolyFunction> = p.observables.iter().map(|(_, f)| poly_fn(f, p.hbar)).collect::<Result<_, _>>()?;
    let runs = propagate_all(&p.points, h, p)?;
    for (pid, (x, samples)) in p.points.iter().zip(&runs).enumerate() {
        let e0 = h.value(x)?;
        for s in samples {
            let mut row: Vec<Cell> = vec![s.t.into(), pid.into()];
            row.extend(s.state.u0.iter().map(|v| Cell::Float(*v)));
            row.extend(s.state.u1.iter().map(|v| Cell::Float(*v)));
            row.push(s.state.det_j1().into());
            row.push((evolve_observable(h, &s.state, heff)? - e0).into());
            traj.push(row);
            for (oid, f) in fs.iter().enumerate() {
                obs.push(vec![s.t.into(), pid.into(), oid.into(), evolve_observable(f, &s.state, heff)?.into()]);
            }
        }
    }
    Ok(vec![traj, obs])
}

fn expectation_table(p: &Prepared, h: &PolyFunction) -> Result<Option<Table>, CliError> {
    let Some((state, integration)) = &p.wigner else {
        return Ok(None);
    };
    let heff = p.effective_hbar();
    let mut table = Table::with_columns("expectations", &["t", "observable_id", "method", "value", "stderr"]);
    let fs: Vec<PolyFunction> = p.observables.iter().map(|(_, f)| poly_fn(f, p.hbar)).collect::<Result<_, _>>()?;
    let (points, weights, method) = match *integration {
        Integration::Quadrature { degree } => {
            let grid = state.quadrature_grid(degree)?;
            let (pts, ws): (Vec<_>, Vec<_>) = grid.into_iter().unzip();
            (pts, Some(ws), "quadrature")
        }
        Integration::MonteCarlo { samples } => (sample_points(state, samples, p.seed), None, "montecarlo"),
    };
    let runs = propagate_all(&points, h, p)?;
    for (ti, &t) in p.times.iter().enumerate() {
        for (oid, f) in fs.iter().enumerate() {
            let values: Vec<f64> = runs
                .iter()
                .map(|r| evolve_observable(f, &r[ti].state, heff))
                .collect::<Result<_, _>>()?;
            let (value, stderr) = match &weights {
                Some(ws) => {
                    let wv: Vec<f64> = values.iter().zip(ws).map(|(v, w)| v * w).collect();
                    (pairwise_sum(&wv), 0.0)
                }
                None => mean_and_stderr(&values)?,
            };
            table.push(vec![t.into(), oid.into(), method.into(), value.into(), stderr.into()]);
        }
    }
    Ok(Some(table))
}

fn verification_table(p: &Prepared, failures: &mut Vec<String>) -> Result<Table, CliError> {
    let mut table = residual_columns("verification", &["identity", "order"]);
    let k = p.orders.tau_series;
    let reports: Vec<_> = p
        .verify
        .par_iter()
        .map(|kind| verify_identity(*kind, &p.hamiltonian, k))
        .collect();
    for (kind, rep) in p.verify.iter().zip(reports) {
        let rep = rep?;
        if !rep.is_zero() {
            failures.push(format!("{} residual nonzero", kind.name()));
        }
        residual_row(&mut table, vec![kind.name().into(), k.into()], &rep);
    }
    Ok(table)
}

fn mode_name(mode: FlowMode) -> &'static str {
    match mode {
        FlowMode::Classical => "classical",
        FlowMode::Quantum => "quantum",
    }
}

/// Projected symbols and the preservation/commutation checks.
pub fn projection_tables(p: &Prepared, cs: &ConstraintSet, failures: &mut Vec<String>) -> Result<Vec<Table>, CliError> {
    let max_k = p.orders.projection_max_k;
    let k = p.orders.tau_series;
    let mut symbols = Table::with_columns("projection", &["mode", "item", "projected", "involution_zero", "idempotent"]);
    let mut checks = residual_columns("projection_checks", &["mode", "check", "order"]);
    let mut items: Vec<(String, PolySymbol)> = vec![("H".into(), p.hamiltonian.clone())];
    items.extend(p.observables.iter().cloned());
    for mode in [FlowMode::Classical, FlowMode::Quantum] {
        let coords = projected_coordinates(cs, max_k, mode)?;
        let mut rows: Vec<(String, PolySymbol)> = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| (format!("xi{}", i + 1), c))
            .collect();
        for (name, f) in &items {
            rows.push((name.clone(), project(f, cs, max_k, mode)?));
        }
        for (name, fp) in rows {
            let inv = involution_residual(&fp, cs, mode)?.is_zero();
            let idem = project(&fp, cs, max_k, mode)? == fp;
            if !inv || !idem {
                failures.push(format!("{} projection of {name} not in involution or not idempotent", mode_name(mode)));
            }
            symbols.push(vec![mode_name(mode).into(), name.into(), format_polynomial(&fp).into(), inv.into(), idem.into()]);
        }
        let pres = check_constraint_preservation(&p.hamiltonian, cs, k, mode)?;
        let comm = check_flow_projection_commute(&p.hamiltonian, cs, k, mode)?;
        for (name, rep) in [("constraint-preservation", pres), ("flow-projection-commute", comm)] {
            if !rep.is_zero() {
                failures.push(format!("{} {name} residual nonzero", mode_name(mode)));
            }
            residual_row(&mut checks, vec![mode_name(mode).into(), name.into(), k.into()], &rep);
        }
    }
    Ok(vec![symbols, checks])
}

fn meta(command: &str, p: &Prepared) -> Value {
    let stepper = match p.stepper {
        qchar_core::ode::Stepper::Rk4 { dt } => json!({"method": "rk4", "dt": dt}),
        qchar_core::ode::Stepper::Adaptive {
            abs_tol,
            rel_tol,
            initial_dt,
        } => json!({"method": "dopri5", "abs_tol": abs_tol, "rel_tol": rel_tol, "initial_dt": initial_dt}),
    };
    json!({
        "command": command,
        "n": p.n,
        "hbar": p.hbar,
        "hbar_order": p.orders.hbar_order,
        "hamiltonian": format_polynomial(&p.hamiltonian),
        "observables": p.observables.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>(),
        "tau_series": p.orders.tau_series,
        "projection_max_k": p.orders.projection_max_k,
        "seed": p.seed,
        "stepper": stepper,
    })
}

fn output_dir(p: &Prepared, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf)
        .or_else(|| p.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("qchar-out"))
}

/// Executes a prepared scenario; `out` and `format` override the scenario's
/// output settings.
pub fn run_scenario(p: &Prepared, out: Option<&Path>, format: Option<Format>) -> Result<Outcome, CliError> {
    let h = poly_fn(&p.hamiltonian, p.hbar)?;
    let mut failures = Vec::new();
    let mut tables = Vec::new();
    if !p.times.is_empty() {
        tables.extend(trajectory_tables(p, &h)?);
    }
    if let Some(t) = expectation_table(p, &h)? {
        tables.push(t);
    }
    if let Some((_, cs)) = &p.constraints {
        tables.extend(projection_tables(p, cs, &mut failures)?);
    }
    tables.push(verification_table(p, &mut failures)?);
    let files = emit_results(&output_dir(p, out), "run", format.unwrap_or(p.format), meta("run", p), &tables)?;
    Ok(Outcome { files, failures })
}

/// Projection only; requires constraints.
pub fn project_scenario(p: &Prepared, out: Option<&Path>, format: Option<Format>) -> Result<Outcome, CliError> {
    let Some((_, cs)) = &p.constraints else {
        return Err(CliError::Validation("project needs a constraints list".into()));
    };
    let mut failures = Vec::new();
    let tables = projection_tables(p, cs, &mut failures)?;
    let files = emit_results(&output_dir(p, out), "project", format.unwrap_or(p.format), meta("project", p), &tables)?;
    Ok(Outcome { files, failures })
}
