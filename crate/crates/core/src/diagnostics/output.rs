//! Plot-ready CSV tables built from comparison reports.
//!
//! | file         | columns                                                    |
//! |--------------|------------------------------------------------------------|
//! | `kappa.csv`  | `n`, then one `κ_n` column per criterion tag               |
//! | `lambda.csv` | `n`, then one `Λ_n` column per criterion tag               |
//! | `errors.csv` | `n,sigma_sq`, then `sigma_tilde_sq_<tag>` per criterion    |
//! | `nodes.csv`  | `criterion,n,nodes` with `;`-separated grid indices        |
//! | `ratios.csv` | `n`, then `classic_over_<tag>` (`σ̃` ratios, not squared)   |

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{error_ratio_curve, DiagnosticsReport, OrderDiagnostics};
use crate::eim::SelectionCriterion;

type Reports = BTreeMap<SelectionCriterion, DiagnosticsReport>;

fn rows(reports: &Reports) -> usize {
    reports.values().map(|r| r.per_n.len()).max().unwrap_or(0)
}

fn per_criterion_table(reports: &Reports, prefix: &str, value: impl Fn(&OrderDiagnostics) -> f64) -> String {
    let mut out = String::from("n");
    for c in reports.keys() {
        let _ = write!(out, ",{prefix}{c}");
    }
    out.push('\n');
    for i in 0..rows(reports) {
        let _ = write!(out, "{}", i + 1);
        for r in reports.values() {
            match r.per_n.get(i) {
                Some(row) => {
                    let _ = write!(out, ",{:e}", value(row));
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

pub fn kappa_csv(reports: &Reports) -> String {
    per_criterion_table(reports, "", |r| r.kappa_n)
}

pub fn lambda_csv(reports: &Reports) -> String {
    per_criterion_table(reports, "", |r| r.lambda_n)
}

pub fn errors_csv(reports: &Reports) -> String {
    let mut out = String::from("n,sigma_sq");
    for c in reports.keys() {
        let _ = write!(out, ",sigma_tilde_sq_{c}");
    }
    out.push('\n');
    let first = reports.values().next();
    for i in 0..rows(reports) {
        let sigma = first.and_then(|r| r.per_n.get(i)).map(|r| r.max_proj_err_sq);
        let _ = write!(out, "{}", i + 1);
        match sigma {
            Some(s) => {
                let _ = write!(out, ",{s:e}");
            }
            None => out.push(','),
        }
        for r in reports.values() {
            match r.per_n.get(i) {
                Some(row) => {
                    let _ = write!(out, ",{:e}", row.max_interp_err_sq);
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

pub fn nodes_csv(reports: &Reports) -> String {
    let mut out = String::from("criterion,n,nodes\n");
    for (c, r) in reports {
        for row in &r.per_n {
            let nodes: Vec<String> = row.nodes.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{c},{},{}", row.n, nodes.join(";"));
        }
    }
    out
}

/// `None` unless the classic criterion and at least one variant are present.
pub fn ratios_csv(reports: &Reports) -> Option<String> {
    let classic = reports.get(&SelectionCriterion::Classic)?;
    let others: Vec<(&SelectionCriterion, Vec<f64>)> = reports
        .iter()
        .filter(|(c, _)| **c != SelectionCriterion::Classic)
        .filter_map(|(c, r)| error_ratio_curve(classic, r).ok().map(|v| (c, v)))
        .collect();
    if others.is_empty() {
        return None;
    }
    let mut out = String::from("n");
    for (c, _) in &others {
        let _ = write!(out, ",classic_over_{c}");
    }
    out.push('\n');
    for i in 0..classic.per_n.len() {
        let _ = write!(out, "{}", i + 1);
        for (_, v) in &others {
            let _ = write!(out, ",{:e}", v[i]);
        }
        out.push('\n');
    }
    Some(out)
}
