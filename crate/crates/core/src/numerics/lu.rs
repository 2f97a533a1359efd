use super::{ComplexMatrix, NumericsError, C64};

/// Partial-pivoting LU factorization `P·A = L·U`.
///
/// `factors` packs the unit-lower `L` below the diagonal and `U` on and above it.
/// `pivots[k]` is the row of the original matrix that ended up in row `k`.
#[derive(Clone, Debug)]
pub struct LuFactorization {
    factors: ComplexMatrix,
    pivots: Vec<usize>,
    sign: f64,
}

/// Factors a square matrix with row pivoting on the largest modulus.
pub fn lu_factor(m: &ComplexMatrix) -> Result<LuFactorization, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut pivots: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;

    for k in 0..n {
        let mut p = k;
        let mut best = a[(k, k)].norm();
        for i in k + 1..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Err(NumericsError::ExactlySingular { column: k });
        }
        if p != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = tmp;
            }
            pivots.swap(k, p);
            sign = -sign;
        }
        let pivot = a[(k, k)];
        for i in k + 1..n {
            let factor = a[(i, k)] / pivot;
            a[(i, k)] = factor;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = a[(k, j)];
                a[(i, j)] -= factor * u;
            }
        }
    }

    Ok(LuFactorization {
        factors: a,
        pivots,
        sign,
    })
}

/// Determinant of a square matrix; exactly singular input gives zero.
pub fn determinant(m: &ComplexMatrix) -> Result<C64, NumericsError> {
    match lu_factor(m) {
        Ok(lu) => Ok(lu.determinant()),
        Err(NumericsError::ExactlySingular { .. }) => Ok(C64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// Solves `A·x = rhs` with a factorization of `A`.
pub fn solve(lu: &LuFactorization, rhs: &[C64]) -> Result<Vec<C64>, NumericsError> {
    lu.solve_vec(rhs)
}

impl LuFactorization {
    pub fn dim(&self) -> usize {
        self.factors.rows()
    }

    pub fn factors(&self) -> &ComplexMatrix {
        &self.factors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Parity of the row permutation, `+1` or `-1`.
    pub fn sign(&self) -> f64 {
        self.sign
    }

    pub fn lower(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut l = ComplexMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = self.factors[(i, j)];
            }
        }
        l
    }

    pub fn upper(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut u = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                u[(i, j)] = self.factors[(i, j)];
            }
        }
        u
    }

    /// Applies the row permutation to `m`, giving `P·m`.
    pub fn permute_rows(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
        for (k, &src) in self.pivots.iter().enumerate() {
            out.row_mut(k).copy_from_slice(m.row(src));
        }
        out
    }

    pub fn determinant(&self) -> C64 {
        (0..self.dim()).fold(C64::new(self.sign, 0.0), |acc, k| acc * self.factors[(k, k)])
    }

    pub fn solve_vec(&self, rhs: &[C64]) -> Result<Vec<C64>, NumericsError> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(NumericsError::ShapeMismatch {
                expected: (n, 1),
                found: (rhs.len(), 1),
            });
        }
        let mut x: Vec<C64> = self.pivots.iter().map(|&p| rhs[p]).collect();
        self.substitute(&mut x);
        Ok(x)
    }

    /// Solves for every column of `rhs` at once.
    pub fn solve_matrix(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
        let n = self.dim();
        if rhs.rows() != n {
            return Err(NumericsError::ShapeMismatch {
                expected: (n, rhs.cols()),
                found: (rhs.rows(), rhs.cols()),
            });
        }
        let mut x = self.permute_rows(rhs);
        let cols = rhs.cols();
        // forward substitution with unit L, row-oriented so inner loops stay contiguous
        for i in 0..n {
            for k in 0..i {
                let l = self.factors[(i, k)];
                if l == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..cols {
                    let v = x[(k, j)];
                    x[(i, j)] -= l * v;
                }
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.factors[(i, k)];
                if u == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..cols {
                    let v = x[(k, j)];
                    x[(i, j)] -= u * v;
                }
            }
            let d = self.factors[(i, i)];
            for v in x.row_mut(i) {
                *v /= d;
            }
        }
        Ok(x)
    }

    /// Explicit inverse, column by column.
    pub fn inverse(&self) -> ComplexMatrix {
        self.solve_matrix(&ComplexMatrix::identity(self.dim()))
            .expect("identity has matching shape")
    }

    fn substitute(&self, x: &mut [C64]) {
        let n = self.dim();
        // forward with unit-lower L, then back with U
        for i in 0..n {
            let row = self.factors.row(i);
            let s: C64 = row[..i].iter().zip(&x[..i]).map(|(l, xk)| l * xk).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.factors.row(i);
            let s: C64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, xk)| u * xk).sum();
            x[i] = (x[i] - s) / row[i];
        }
    }
}
