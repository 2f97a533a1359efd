//! Seeded random matrices and a one-sided Jacobi SVD used as an oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{lu_factor, ComplexMatrix, C64};

/// Entries uniform in the unit disk.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| loop {
        let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm() <= 1.0 {
            break z;
        }
    })
    .unwrap()
}

/// Unitary matrix from Gram-Schmidt on random columns.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let m = random_matrix(n, n, seed);
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for j in 0..n {
        let mut v = m.column(j);
        for _ in 0..2 {
            for q in &cols {
                let p: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= nrm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]).unwrap()
}

pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
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
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                // rotate column q by the conjugate phase so the inner product is real
                let qcol: Vec<C64> = cols[q].iter().map(|z| z * phase.conj()).collect();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pcol = cols[p].clone();
                cols[p] = pcol.iter().zip(&qcol).map(|(x, y)| x * c - y * s).collect();
                cols[q] = pcol.iter().zip(&qcol).map(|(x, y)| x * s + y * c).collect();
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[test]
fn jacobi_oracle_on_diagonal_and_unitary() {
    let d = ComplexMatrix::from_diagonal(&[C64::new(0.0, 2.0), C64::new(5.0, 0.0)]).unwrap();
    let s = jacobi_singular_values(&d);
    assert!((s[0] - 5.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14);
    let q = random_unitary(4, 2);
    for v in jacobi_singular_values(&q) {
        assert!((v - 1.0).abs() < 1e-12);
    }
    // product of singular values is |det|
    let m = random_matrix(3, 3, 4);
    let prod: f64 = jacobi_singular_values(&m).iter().product();
    let det = lu_factor(&m).unwrap().determinant().norm();
    assert!((prod - det).abs() <= 1e-12 * det);
}
