use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::Path;

use emprint_core::catalog::{generate_family, load_training_csv, write_training, Sampling};
use emprint_core::diagnostics::{
    errors_csv, identity_checks, kappa_csv, lambda_csv, nodes_csv, ratios_csv, run_comparison,
    ComparisonOptions, DiagnosticsError, DiagnosticsReport,
};
use emprint_core::eim::{build_interpolant_with, verify_theorem1, EimError, THEOREM_TOLERANCE};
use emprint_core::rbm::{build_reduced_basis, read_basis, write_basis, write_greedy_errors, RbmError};
use emprint_core::{ReducedBasis, SelectionCriterion, TrainingSet};
use std::collections::BTreeMap;

use crate::config::RunConfig;
use crate::CliError;

/// Writes `name` under `dir` via a temporary sibling and a rename, so
/// readers never see a half-written file.
fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let io = |e: std::io::Error| CliError::Input(format!("cannot write {}: {e}", target.display()));
    {
        let mut f = File::create(&tmp).map_err(io)?;
        f.write_all(bytes).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    fs::rename(&tmp, &target).map_err(io)?;
    Ok(())
}

fn training_set(cfg: &RunConfig) -> Result<TrainingSet, CliError> {
    match &cfg.input {
        Some(path) => {
            if cfg.family_given {
                return Err(CliError::Input("--input and --family are mutually exclusive".into()));
            }
            load_training_csv(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
        None => generate_family(&cfg.family_spec()?).map_err(|e| CliError::Input(e.to_string())),
    }
}

fn greedy(cfg: &RunConfig, ts: &TrainingSet) -> Result<ReducedBasis, CliError> {
    let cap = cfg.n_max.unwrap_or_else(|| ts.len().min(ts.grid().len()));
    build_reduced_basis(ts, cfg.tol, cap).map_err(|e| match e {
        RbmError::DegenerateResidual { .. } => CliError::Degenerate(e.to_string()),
        other => CliError::Input(other.to_string()),
    })
}

fn load_basis(path: &Path) -> Result<ReducedBasis, CliError> {
    let open = |p: &Path| File::open(p).map(BufReader::new);
    let basis = open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    // pick up the greedy curve written next to the basis, if any
    let errors = path.parent().map(|d| d.join("greedy_errors.csv")).and_then(|p| open(&p).ok());
    read_basis(basis, errors).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Basis from `--basis` when given, otherwise from the training data.
fn basis(cfg: &RunConfig) -> Result<ReducedBasis, CliError> {
    match &cfg.basis {
        Some(path) => load_basis(path),
        None => greedy(cfg, &training_set(cfg)?),
    }
}

fn order(cfg: &RunConfig, rb: &ReducedBasis) -> usize {
    cfg.n_max.unwrap_or(rb.len()).min(rb.len())
}

fn eim_err(e: EimError) -> CliError {
    CliError::Interpolant(e.to_string())
}

fn diag_err(e: DiagnosticsError) -> CliError {
    match e {
        DiagnosticsError::GridMismatch | DiagnosticsError::NoCriteria => CliError::Input(e.to_string()),
        other => CliError::Interpolant(other.to_string()),
    }
}

pub fn generate(cfg: &RunConfig) -> Result<String, CliError> {
    let ts = generate_family(&cfg.family_spec()?).map_err(|e| CliError::Input(e.to_string()))?;
    let mut buf = Vec::new();
    write_training(&ts, &mut buf).map_err(|e| CliError::Input(e.to_string()))?;
    write_atomic(&cfg.out_dir, "training.csv", &buf)?;
    Ok(format!("wrote {} waveforms (L = {}) to training.csv", ts.len(), ts.grid().len()))
}

pub fn basis_cmd(cfg: &RunConfig) -> Result<String, CliError> {
    let ts = training_set(cfg)?;
    let rb = greedy(cfg, &ts)?;
    write_basis_files(cfg, &rb)?;
    let last = rb.greedy_errors().last().copied().unwrap_or(f64::NAN);
    Ok(format!("basis of {} vectors, sigma_sq = {last:e}", rb.len()))
}

fn write_basis_files(cfg: &RunConfig, rb: &ReducedBasis) -> Result<(), CliError> {
    let mut b = Vec::new();
    let mut e = Vec::new();
    write_basis(rb, &mut b).map_err(|x| CliError::Input(x.to_string()))?;
    write_greedy_errors(rb, &mut e).map_err(|x| CliError::Input(x.to_string()))?;
    write_atomic(&cfg.out_dir, "basis.csv", &b)?;
    write_atomic(&cfg.out_dir, "greedy_errors.csv", &e)
}

pub fn eim(cfg: &RunConfig) -> Result<String, CliError> {
    let rb = basis(cfg)?;
    let n = order(cfg, &rb);
    let opts = cfg.eim_options();
    let mut summary = Vec::new();
    for &c in &cfg.criteria {
        let itp = build_interpolant_with(&rb, c, n, &opts).map_err(eim_err)?;
        let json = itp.to_record(cfg.embed_matrices).to_json();
        write_atomic(&cfg.out_dir, &format!("interpolant_{c}.json"), json.as_bytes())?;
        summary.push(format!(
            "{c}: n = {n}, kappa = {:.4e}, lambda = {:.4e}",
            itp.condition_number(),
            itp.lebesgue_constant()
        ));
    }
    Ok(summary.join("\n"))
}

pub fn compare(cfg: &RunConfig) -> Result<String, CliError> {
    let ts = training_set(cfg)?;
    let rb = match &cfg.basis {
        Some(path) => load_basis(path)?,
        None => greedy(cfg, &ts)?,
    };
    let dataset_id = match &cfg.input {
        Some(p) => p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        None => format!("{}:K={}:L={}", cfg.family, cfg.k, cfg.l),
    };
    let opts = ComparisonOptions {
        dataset_id,
        eim: cfg.eim_options(),
        n_max: Some(order(cfg, &rb)),
    };
    let reports = run_comparison(&rb, &ts, &cfg.criteria, &opts).map_err(diag_err)?;
    write_reports(&cfg.out_dir, &reports)?;

    let mut checks = String::from("criterion,max_kappa_residual,operator_norm,inverse_norm,operator_relative_residual\n");
    let n = order(cfg, &rb);
    for &c in &cfg.criteria {
        let itp = build_interpolant_with(&rb, c, n, &opts.eim).map_err(eim_err)?;
        let ic = identity_checks(&itp).map_err(diag_err)?;
        match &ic.operator {
            Some(op) => checks.push_str(&format!(
                "{c},{:e},{:e},{:e},{:e}\n",
                ic.max_kappa_residual(),
                op.operator_norm,
                op.inverse_norm,
                op.relative_residual
            )),
            None => checks.push_str(&format!("{c},{:e},,,\n", ic.max_kappa_residual())),
        }
    }
    write_atomic(&cfg.out_dir, "identities.csv", checks.as_bytes())?;

    if let Some(k) = cfg.out_of_sample {
        if cfg.input.is_some() {
            return Err(CliError::Input("--out-of-sample needs a family source, not --input".into()));
        }
        let spec = cfg.family_spec_with(k, Sampling::Random { seed: cfg.seed.wrapping_add(1) })?;
        let validation = generate_family(&spec).map_err(|e| CliError::Input(e.to_string()))?;
        let oos = run_comparison(&rb, &validation, &cfg.criteria, &opts).map_err(diag_err)?;
        write_reports(&cfg.out_dir.join("out_of_sample"), &oos)?;
    }
    Ok(format!(
        "compared {} criteria on {} waveforms, n = 1..{}",
        reports.len(),
        ts.len(),
        opts.n_max.unwrap_or(0)
    ))
}

fn write_reports(dir: &Path, reports: &BTreeMap<SelectionCriterion, DiagnosticsReport>) -> Result<(), CliError> {
    for (c, r) in reports {
        write_atomic(dir, &format!("report_{c}.json"), r.to_json().as_bytes())?;
    }
    write_atomic(dir, "kappa.csv", kappa_csv(reports).as_bytes())?;
    write_atomic(dir, "lambda.csv", lambda_csv(reports).as_bytes())?;
    write_atomic(dir, "errors.csv", errors_csv(reports).as_bytes())?;
    write_atomic(dir, "nodes.csv", nodes_csv(reports).as_bytes())?;
    if let Some(ratios) = ratios_csv(reports) {
        write_atomic(dir, "ratios.csv", ratios.as_bytes())?;
    }
    Ok(())
}

pub fn verify_theorem(cfg: &RunConfig) -> Result<String, CliError> {
    let rb = basis(cfg)?;
    let n = order(cfg, &rb);
    let steps = verify_theorem1(&rb, n).map_err(eim_err)?;
    let mut csv = String::from("step,node,max_residual,max_abs_discrepancy,relative_discrepancy\n");
    for s in &steps {
        csv.push_str(&format!(
            "{},{},{:e},{:e},{:e}\n",
            s.step, s.node, s.max_residual, s.max_abs_discrepancy, s.relative_discrepancy
        ));
    }
    write_atomic(&cfg.out_dir, "theorem.csv", csv.as_bytes())?;
    let worst = steps.iter().map(|s| s.relative_discrepancy).fold(0.0, f64::max);
    let line = format!("n = {n}, max relative discrepancy {worst:e} (tolerance {THEOREM_TOLERANCE:e})");
    if worst <= THEOREM_TOLERANCE {
        Ok(line)
    } else {
        Err(CliError::Verification(line))
    }
}
