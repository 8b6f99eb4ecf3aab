//! Shared helpers for unit and integration tests: the 4×4 golden instance,
//! deterministic random generators, and a Jacobi eigenvalue oracle that is
//! independent of the Cholesky code paths.

use rand::Rng;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::spmat::{DenseSymMatrix, SparsityPattern, SymSparseMatrix};

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// The 4×4 path matrix with unit diagonal and edge values 0.3, -0.4, 0.2.
pub fn golden_path_matrix() -> SymSparseMatrix {
    SymSparseMatrix::from_entries(
        4,
        vec![1.0; 4],
        &[(1, 2, 0.3), (2, 3, -0.4), (3, 4, 0.2)],
    )
    .unwrap()
}

/// Completion values the golden matrix requires off its support.
pub fn golden_completion_entries() -> Vec<(usize, usize, f64)> {
    vec![(1, 3, -0.12), (1, 4, -0.024), (2, 4, -0.08)]
}

/// The inverse of the completed golden matrix, entry by entry.
pub fn golden_inverse() -> DenseSymMatrix {
    let mut s = DenseSymMatrix::zeros(4);
    s.set(1, 1, 1.0 / 0.91);
    s.set(1, 2, -0.3 / 0.91);
    s.set(2, 2, 1.0 + 0.09 / 0.91 + 0.16 / 0.84);
    s.set(2, 3, 0.4 / 0.84);
    s.set(3, 3, 1.0 + 0.16 / 0.84 + 0.04 / 0.96);
    s.set(3, 4, -0.2 / 0.96);
    s.set(4, 4, 1.0 / 0.96);
    s
}

/// Diagonal of the dual factorization of the golden matrix.
pub fn golden_dvals() -> [f64; 4] {
    [1.0 / 0.91, 1.0 / 0.84, 1.0 / 0.96, 1.0]
}

pub fn random_dense_sym(r: &mut Xoshiro256PlusPlus, d: usize, scale: f64) -> DenseSymMatrix {
    let mut m = DenseSymMatrix::zeros(d);
    for i in 1..=d {
        for j in i..=d {
            m.set(i, j, r.random_range(-scale..scale));
        }
    }
    m
}

/// Random correlation matrix: G G^T + d I rescaled to unit diagonal.
pub fn random_correlation(r: &mut Xoshiro256PlusPlus, d: usize) -> DenseSymMatrix {
    let g: Vec<f64> = (0..d * d).map(|_| r.random_range(-1.0..1.0)).collect();
    let mut x = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let mut v = 0.0;
            for k in 0..d {
                v += g[i * d + k] * g[j * d + k];
            }
            if i == j {
                v += d as f64;
            }
            x[i * d + j] = v;
            x[j * d + i] = v;
        }
    }
    let mut m = DenseSymMatrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let v = x[i * d + j] / (x[i * d + i] * x[j * d + j]).sqrt();
            m.set(i + 1, j + 1, if i == j { 1.0 } else { v });
        }
    }
    m
}

pub fn random_pattern(r: &mut Xoshiro256PlusPlus, d: usize, edge_prob: f64) -> SparsityPattern {
    let mut edges = Vec::new();
    for i in 1..=d {
        for j in (i + 1)..=d {
            if r.random_range(0.0..1.0) < edge_prob {
                edges.push((i, j));
            }
        }
    }
    SparsityPattern::from_edges(d, &edges).unwrap()
}

/// Random banded pattern: edges only within `|i - j| <= band`. Banded
/// patterns stay banded under identity-order fill, so the filled version is
/// chordal with the identity as a perfect elimination ordering.
pub fn random_banded_pattern(
    r: &mut Xoshiro256PlusPlus,
    d: usize,
    band: usize,
    keep_prob: f64,
) -> SparsityPattern {
    let mut edges = Vec::new();
    for i in 1..=d {
        for j in (i + 1)..=d.min(i + band) {
            if j == i + 1 || r.random_range(0.0..1.0) < keep_prob {
                edges.push((i, j));
            }
        }
    }
    SparsityPattern::from_edges(d, &edges).unwrap()
}

/// Full bandwidth-`band` path pattern (deterministic).
pub fn banded_path_pattern(d: usize, band: usize) -> SparsityPattern {
    let mut edges = Vec::new();
    for i in 1..=d {
        for j in (i + 1)..=d.min(i + band) {
            edges.push((i, j));
        }
    }
    SparsityPattern::from_edges(d, &edges).unwrap()
}

/// Eigenvalues by cyclic Jacobi rotations; independent of any LDL^T path.
pub fn jacobi_eigenvalues(m: &DenseSymMatrix) -> Vec<f64> {
    let n = m.d();
    let mut a = m.to_full();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}
