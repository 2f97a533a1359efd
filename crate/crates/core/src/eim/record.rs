use serde::{Deserialize, Serialize};

use super::{EmpiricalInterpolant, SelectionCriterion};
use crate::numerics::ComplexMatrix;

/// JSON form of an interpolant. Matrices, when embedded, are CSV blocks with
/// one `re:im` entry per column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolantRecord {
    pub criterion: SelectionCriterion,
    pub n: usize,
    pub grid: GridJson,
    pub node_indices: Vec<usize>,
    pub node_times: Vec<f64>,
    pub per_step: Vec<StepRecordJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v_matrix_csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b_matrix_csv: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub t_start: f64,
    pub t_end: f64,
    #[serde(rename = "L")]
    pub len: usize,
    pub dt: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecordJson {
    pub m: usize,
    pub det_v_re: f64,
    pub det_v_im: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub residual_at_node: f64,
}

impl InterpolantRecord {
    pub(super) fn from_interpolant(itp: &EmpiricalInterpolant, embed_matrices: bool) -> Self {
        let grid = itp.grid();
        Self {
            criterion: itp.criterion(),
            n: itp.len(),
            grid: GridJson {
                t_start: grid.t_start(),
                t_end: grid.t_end(),
                len: grid.len(),
                dt: grid.dt(),
            },
            node_indices: itp.node_indices().to_vec(),
            node_times: itp.node_times(),
            per_step: itp
                .per_step()
                .iter()
                .enumerate()
                .map(|(i, s)| StepRecordJson {
                    m: i + 1,
                    det_v_re: s.det_v.re,
                    det_v_im: s.det_v.im,
                    kappa: s.kappa,
                    lambda: s.lambda,
                    residual_at_node: s.residual_at_node,
                })
                .collect(),
            v_matrix_csv: embed_matrices.then(|| matrix_csv(itp.v_matrix())),
            b_matrix_csv: embed_matrices.then(|| matrix_csv(itp.b_matrix())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

fn matrix_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|z| format!("{:e}:{:e}", z.re, z.im)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
