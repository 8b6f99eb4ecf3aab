//! Minimal dense kernels: LDL^T factorization/solves and a rectangular
//! row-major matrix. These are the only dense operations the completion
//! recursion and the desk-scale oracles need.

use super::DenseSymMatrix;

/// Rectangular dense matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 0-based access.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * out.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// In-place LDL^T of a full row-major n×n buffer. On success the strict
/// lower triangle holds L (unit diagonal implicit) and the diagonal holds D.
/// Fails with the offending column when a pivot is ≤ `pivot_tol`.
pub(crate) fn ldlt_factor(a: &mut [f64], n: usize, pivot_tol: f64) -> Result<(), usize> {
    let mut flops = 0u64;
    ldlt_factor_counted(a, n, pivot_tol, &mut flops)
}

pub(crate) fn ldlt_factor_counted(
    a: &mut [f64],
    n: usize,
    pivot_tol: f64,
    flops: &mut u64,
) -> Result<(), usize> {
    for j in 0..n {
        let mut djj = a[j * n + j];
        for k in 0..j {
            let l = a[j * n + k];
            djj -= l * l * a[k * n + k];
        }
        *flops += 2 * j as u64;
        if !(djj > pivot_tol) {
            return Err(j);
        }
        a[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v -= a[i * n + k] * a[k * n + k] * a[j * n + k];
            }
            a[i * n + j] = v / djj;
            *flops += 2 * j as u64 + 1;
        }
    }
    Ok(())
}

/// Solves `A x = b` in place given the LDL^T factor buffer from
/// [`ldlt_factor`].
pub(crate) fn ldlt_solve(f: &[f64], n: usize, b: &mut [f64]) {
    let mut flops = 0u64;
    ldlt_solve_counted(f, n, b, &mut flops);
}

pub(crate) fn ldlt_solve_counted(f: &[f64], n: usize, b: &mut [f64], flops: &mut u64) {
    // forward: L y = b
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= f[i * n + k] * b[k];
        }
        b[i] = v;
    }
    // diagonal
    for i in 0..n {
        b[i] /= f[i * n + i];
    }
    // backward: L^T x = y
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in (i + 1)..n {
            v -= f[k * n + i] * b[k];
        }
        b[i] = v;
    }
    *flops += n as u64 * n as u64 + n as u64;
}

/// Symmetric inverse via LDL^T; `None` when a pivot is not strictly
/// positive.
pub(crate) fn sym_inverse(m: &DenseSymMatrix) -> Option<DenseSymMatrix> {
    let n = m.d();
    let mut f = m.to_full();
    let max_diag = (1..=n).map(|i| m.get(i, i)).fold(0.0f64, f64::max);
    ldlt_factor(&mut f, n, super::PIVOT_TOL * max_diag.max(1e-300)).ok()?;
    let mut inv = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        col.iter_mut().for_each(|v| *v = 0.0);
        col[j] = 1.0;
        ldlt_solve(&f, n, &mut col);
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    Some(DenseSymMatrix::from_full(n, &inv))
}

/// log det of a symmetric positive definite matrix via LDL^T.
pub(crate) fn sym_logdet(m: &DenseSymMatrix) -> Option<f64> {
    let n = m.d();
    let mut f = m.to_full();
    let max_diag = (1..=n).map(|i| m.get(i, i)).fold(0.0f64, f64::max);
    ldlt_factor(&mut f, n, super::PIVOT_TOL * max_diag.max(1e-300)).ok()?;
    Some((0..n).map(|i| f[i * n + i].ln()).sum())
}
