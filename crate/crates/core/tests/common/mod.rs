//! Independent oracles and fixtures shared by the integration tests. Nothing
//! here calls into the library's numerics beyond constructing matrices.
#![allow(dead_code)]

use emprint_core::{ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Entries uniform in the unit disk.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| loop {
        let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm() <= 1.0 {
            break z;
        }
    })
    .unwrap()
}

pub fn inner(f: &[C64], g: &[C64]) -> C64 {
    f.iter().zip(g).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(f: &[C64]) -> f64 {
    f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `n` Euclidean-orthonormal random rows of length `len`.
pub fn orthonormal_rows(n: usize, len: usize, seed: u64) -> ComplexMatrix {
    let m = random_matrix(n, len, seed);
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for i in 0..n {
        let mut v = m.row(i).to_vec();
        for _ in 0..2 {
            for q in &rows {
                let p = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let nv = norm(&v);
        v.iter_mut().for_each(|z| *z /= nv);
        rows.push(v);
    }
    ComplexMatrix::from_rows(&rows).unwrap()
}

/// Determinant by cofactor expansion along the first row. Exponential; keep
/// `n ≤ 7`.
pub fn cofactor_det(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    match n {
        0 => c(1.0, 0.0),
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<C64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, z)| *z).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                m[0][j] * sign * cofactor_det(&minor)
            })
            .sum(),
    }
}

pub fn to_rows(m: &ComplexMatrix) -> Vec<Vec<C64>> {
    m.row_iter().map(<[C64]>::to_vec).collect()
}

/// Singular values by cyclic one-sided Jacobi rotations, nonincreasing.
pub fn jacobi_singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let a = if m.rows() >= m.cols() { m.clone() } else { m.adjoint() };
    let n = a.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let qcol: Vec<C64> = cols[q].iter().map(|z| z * phase.conj()).collect();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let pcol = cols[p].clone();
                cols[p] = pcol.iter().zip(&qcol).map(|(x, y)| x * cs - y * sn).collect();
                cols[q] = pcol.iter().zip(&qcol).map(|(x, y)| x * sn + y * cs).collect();
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = cols.iter().map(|c| norm(c)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `κ₂` and `‖M⁻¹‖₂` from the Jacobi oracle.
pub fn oracle_kappa_lambda(m: &ComplexMatrix) -> (f64, f64) {
    let s = jacobi_singular_values(m);
    let (max, min) = (s[0], *s.last().unwrap());
    (max / min, 1.0 / min)
}

/// Square matrix `V[i][j] = basis_j(nodes_i)` built directly.
pub fn v_of(basis: &ComplexMatrix, nodes: &[usize]) -> ComplexMatrix {
    let n = nodes.len();
    ComplexMatrix::from_fn(n, n, |i, j| basis[(j, nodes[i])]).unwrap()
}

/// Dense Gaussian elimination with partial pivoting, solving `A x = b`.
pub fn gauss_solve(a: &ComplexMatrix, b: &[C64]) -> Vec<C64> {
    let n = a.rows();
    let mut m: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i]);
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| m[x][k].norm().total_cmp(&m[y][k].norm())).unwrap();
        m.swap(k, p);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..=n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    let mut x = vec![c(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: C64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

/// Interpolant of `h` on the first `nodes.len()` basis rows, built from
/// scratch: solve `V c = h(T)` then expand.
pub fn oracle_interpolate(basis: &ComplexMatrix, nodes: &[usize], h: &[C64]) -> Vec<C64> {
    let v = v_of(basis, nodes);
    let rhs: Vec<C64> = nodes.iter().map(|&t| h[t]).collect();
    let coef = gauss_solve(&v, &rhs);
    (0..basis.cols())
        .map(|t| coef.iter().enumerate().map(|(j, cj)| cj * basis[(j, t)]).sum())
        .collect()
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Determinant by Gaussian elimination with partial pivoting, written
/// separately from the library's LU.
pub fn gauss_det(a: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut m = to_rows(a);
    let mut det = c(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| m[x][k].norm().total_cmp(&m[y][k].norm())).unwrap();
        if m[p][k].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if p != k {
            m.swap(k, p);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    det
}
