//! Sparse symmetric matrices, sparsity patterns, and the small dense kernels
//! the completion recursion needs.
//!
//! All indices on the public surface are 1-based. Patterns describe
//! off-diagonals only; the diagonal of a [`SymSparseMatrix`] is always
//! structurally present and stored as a dense length-d vector. Exact-zero
//! off-diagonal values are dropped during construction, so a stored edge
//! always carries a nonzero value.

mod dense;
pub mod market;

pub use dense::DenseMat;
pub(crate) use dense::{ldlt_factor, ldlt_factor_counted, ldlt_solve, ldlt_solve_counted, sym_inverse, sym_logdet};

use thiserror::Error;

/// Relative pivot tolerance for positive-definiteness tests.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SpmatError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range 1..={d}")]
    IndexOutOfRange { index: usize, d: usize },
    #[error("index set is not strictly increasing: {0}")]
    NotStrictlyIncreasing(usize),
    #[error("self loop on vertex {0}")]
    SelfLoop(usize),
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("duplicate entry at ({0}, {1})")]
    DuplicateEntry(usize, usize),
}

/// A sorted set of distinct 1-based indices in `1..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Builds an index set from arbitrary order; rejects duplicates and
    /// entries outside `1..=d`.
    pub fn new(mut indices: Vec<usize>, d: usize) -> Result<Self, SpmatError> {
        indices.sort_unstable();
        for (k, &i) in indices.iter().enumerate() {
            if i < 1 || i > d {
                return Err(SpmatError::IndexOutOfRange { index: i, d });
            }
            if k > 0 && indices[k - 1] == i {
                return Err(SpmatError::NotStrictlyIncreasing(i));
            }
        }
        Ok(Self { indices })
    }

    /// The full set `{1, ..., d}`.
    pub fn full(d: usize) -> Self {
        Self {
            indices: (1..=d).collect(),
        }
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The k-th element in sorted order, 0-based position.
    pub fn nth(&self, k: usize) -> usize {
        self.indices[k]
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Position of `i` within the sorted set, if present (0-based).
    pub fn position(&self, i: usize) -> Option<usize> {
        self.indices.binary_search(&i).ok()
    }

    pub fn min(&self) -> Option<usize> {
        self.indices.first().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }
}

/// A bijection `q: {1..d} -> {1..d}` stored as its forward map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
}

impl Permutation {
    pub fn new(forward: Vec<usize>) -> Result<Self, SpmatError> {
        let d = forward.len();
        let mut seen = vec![false; d];
        for &v in &forward {
            if v < 1 || v > d || seen[v - 1] {
                return Err(SpmatError::NotAPermutation(d));
            }
            seen[v - 1] = true;
        }
        Ok(Self { forward })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            forward: (1..=d).collect(),
        }
    }

    /// `i -> d + 1 - i`.
    pub fn reversal(d: usize) -> Self {
        Self {
            forward: (1..=d).rev().collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.forward.len()
    }

    /// Image of `i` under the permutation (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.forward[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0usize; self.forward.len()];
        for (i, &v) in self.forward.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { forward: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

/// Symmetric off-diagonal support of a d×d matrix. No self-loops; the
/// diagonal is implicitly always present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    d: usize,
    adj: Vec<Vec<usize>>, // sorted 1-based neighbor labels per vertex
}

impl SparsityPattern {
    pub fn empty(d: usize) -> Self {
        Self {
            d,
            adj: vec![Vec::new(); d],
        }
    }

    /// Builds a pattern from unordered-pair edges; duplicates collapse.
    pub fn from_edges(d: usize, edges: &[(usize, usize)]) -> Result<Self, SpmatError> {
        let mut adj = vec![Vec::new(); d];
        for &(i, j) in edges {
            if i == j {
                return Err(SpmatError::SelfLoop(i));
            }
            for v in [i, j] {
                if v < 1 || v > d {
                    return Err(SpmatError::IndexOutOfRange { index: v, d });
                }
            }
            adj[i - 1].push(j);
            adj[j - 1].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { d, adj })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Sorted neighbors of vertex `v` (1-based).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn neighbor_set(&self, v: usize) -> IndexSet {
        IndexSet::from_sorted_unchecked(self.adj[v - 1].clone())
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i - 1].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    /// Edges as `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.d).flat_map(move |i| {
            self.adj[i - 1]
                .iter()
                .copied()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Pattern of `Q E Q^T`: edge `(i, j)` maps to `(q(i), q(j))`.
    pub fn permute(&self, q: &Permutation) -> Result<Self, SpmatError> {
        if q.d() != self.d {
            return Err(SpmatError::DimensionMismatch {
                expected: self.d,
                got: q.d(),
            });
        }
        let edges: Vec<(usize, usize)> = self
            .edges()
            .map(|(i, j)| (q.apply(i), q.apply(j)))
            .collect();
        Self::from_edges(self.d, &edges)
    }

    /// Induced subpattern on `vs`, relabeled to `1..=vs.len()` by sorted
    /// position.
    pub fn induced(&self, vs: &IndexSet) -> Self {
        let mut edges = Vec::new();
        for (a, v) in vs.iter().enumerate() {
            for &u in self.neighbors(v) {
                if u > v {
                    if let Some(b) = vs.position(u) {
                        edges.push((a + 1, b + 1));
                    }
                }
            }
        }
        Self::from_edges(vs.len(), &edges).expect("relabeled edges are in range")
    }

    /// Union of two patterns of the same dimension.
    pub fn union(&self, other: &Self) -> Result<Self, SpmatError> {
        if other.d != self.d {
            return Err(SpmatError::DimensionMismatch {
                expected: self.d,
                got: other.d,
            });
        }
        let mut edges: Vec<(usize, usize)> = self.edges().collect();
        edges.extend(other.edges());
        Self::from_edges(self.d, &edges)
    }
}

/// Pattern plus diagonal and one stored value per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSparseMatrix {
    pattern: SparsityPattern,
    diag: Vec<f64>,
    adj_vals: Vec<Vec<f64>>, // aligned with pattern.adj
}

impl SymSparseMatrix {
    /// Builds from a diagonal and unordered-pair entries. Exact-zero
    /// off-diagonal values are dropped; duplicate pairs are rejected.
    pub fn from_entries(
        d: usize,
        diag: Vec<f64>,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self, SpmatError> {
        if diag.len() != d {
            return Err(SpmatError::DimensionMismatch {
                expected: d,
                got: diag.len(),
            });
        }
        if diag.iter().any(|v| !v.is_finite()) {
            return Err(SpmatError::NonFinite);
        }
        let mut seen = std::collections::HashSet::new();
        let mut kept = Vec::with_capacity(entries.len());
        for &(i, j, v) in entries {
            if i == j {
                return Err(SpmatError::SelfLoop(i));
            }
            for x in [i, j] {
                if x < 1 || x > d {
                    return Err(SpmatError::IndexOutOfRange { index: x, d });
                }
            }
            if !v.is_finite() {
                return Err(SpmatError::NonFinite);
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(SpmatError::DuplicateEntry(key.0, key.1));
            }
            if v != 0.0 {
                kept.push((key.0, key.1, v));
            }
        }
        kept.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let pattern =
            SparsityPattern::from_edges(d, &kept.iter().map(|&(i, j, _)| (i, j)).collect::<Vec<_>>())?;
        let mut adj_vals: Vec<Vec<f64>> = pattern.adj.iter().map(|l| vec![0.0; l.len()]).collect();
        for &(i, j, v) in &kept {
            let pi = pattern.adj[i - 1].binary_search(&j).unwrap();
            let pj = pattern.adj[j - 1].binary_search(&i).unwrap();
            adj_vals[i - 1][pi] = v;
            adj_vals[j - 1][pj] = v;
        }
        Ok(Self {
            pattern,
            diag,
            adj_vals,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::from_entries(d, vec![1.0; d], &[]).expect("identity is well formed")
    }

    pub fn d(&self) -> usize {
        self.pattern.d
    }

    pub fn pattern(&self) -> &SparsityPattern {
        &self.pattern
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.diag[i - 1]
    }

    pub fn diag_slice(&self) -> &[f64] {
        &self.diag
    }

    /// Entry `(i, j)`; absent off-diagonals read as 0.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i - 1];
        }
        match self.pattern.adj[i - 1].binary_search(&j) {
            Ok(p) => self.adj_vals[i - 1][p],
            Err(_) => 0.0,
        }
    }

    /// Stored edges as `(i, j, value)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..=self.d()).flat_map(move |i| {
            self.pattern.adj[i - 1]
                .iter()
                .copied()
                .zip(self.adj_vals[i - 1].iter().copied())
                .filter(move |&(j, _)| j > i)
                .map(move |(j, v)| (i, j, v))
        })
    }

    pub fn max_abs_offdiag(&self) -> f64 {
        self.edges().map(|(_, _, v)| v.abs()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseSymMatrix {
        let mut m = DenseSymMatrix::zeros(self.d());
        for i in 1..=self.d() {
            m.set(i, i, self.diag[i - 1]);
        }
        for (i, j, v) in self.edges() {
            m.set(i, j, v);
        }
        m
    }

    /// Entry `(i, j)` of the result equals entry `(q^{ -1}(i), q^{-1}(j))`
    /// of the input.
    pub fn permute(&self, q: &Permutation) -> Result<Self, SpmatError> {
        if q.d() != self.d() {
            return Err(SpmatError::DimensionMismatch {
                expected: self.d(),
                got: q.d(),
            });
        }
        let mut diag = vec![0.0; self.d()];
        for i in 1..=self.d() {
            diag[q.apply(i) - 1] = self.diag[i - 1];
        }
        let entries: Vec<(usize, usize, f64)> = self
            .edges()
            .map(|(i, j, v)| (q.apply(i), q.apply(j), v))
            .collect();
        Self::from_entries(self.d(), diag, &entries)
    }

    /// Dense block `b[a, b] = M[rows(a), cols(b)]`; absent entries read as 0.
    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<DenseMat, SpmatError> {
        check_in_range(rows, self.d())?;
        check_in_range(cols, self.d())?;
        let mut out = DenseMat::zeros(rows.len(), cols.len());
        for (a, i) in rows.iter().enumerate() {
            for (b, j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        Ok(out)
    }

    /// Induced principal submatrix on `vs`, relabeled to `1..=vs.len()`.
    pub fn induced(&self, vs: &IndexSet) -> Self {
        let diag: Vec<f64> = vs.iter().map(|v| self.diag[v - 1]).collect();
        let mut entries = Vec::new();
        for (a, v) in vs.iter().enumerate() {
            for (pos, &u) in self.pattern.adj[v - 1].iter().enumerate() {
                if u > v {
                    if let Some(b) = vs.position(u) {
                        entries.push((a + 1, b + 1, self.adj_vals[v - 1][pos]));
                    }
                }
            }
        }
        Self::from_entries(vs.len(), diag, &entries).expect("relabeled entries are in range")
    }
}

/// Dense symmetric matrix stored as the row-major upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    d: usize,
    up: Vec<f64>, // row-major upper triangle, length d(d+1)/2
}

impl DenseSymMatrix {
    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            up: vec![0.0; d * (d + 1) / 2],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for i in 1..=d {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from a full row-major `d*d` buffer, averaging the two
    /// triangles.
    pub fn from_full(d: usize, full: &[f64]) -> Self {
        assert_eq!(full.len(), d * d);
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in i..d {
                m.up[Self::tri(d, i, j)] = 0.5 * (full[i * d + j] + full[j * d + i]);
            }
        }
        m
    }

    #[inline]
    fn tri(d: usize, i: usize, j: usize) -> usize {
        // 0-based, i <= j
        i * d - i * (i - 1) / 2 - i + j
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i - 1, j - 1) } else { (j - 1, i - 1) };
        self.up[Self::tri(self.d, a, b)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (a, b) = if i <= j { (i - 1, j - 1) } else { (j - 1, i - 1) };
        self.up[Self::tri(self.d, a, b)] = v;
    }

    pub fn to_full(&self) -> Vec<f64> {
        let d = self.d;
        let mut full = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                let v = self.up[Self::tri(d, i, j)];
                full[i * d + j] = v;
                full[j * d + i] = v;
            }
        }
        full
    }

    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<DenseMat, SpmatError> {
        check_in_range(rows, self.d)?;
        check_in_range(cols, self.d)?;
        let mut out = DenseMat::zeros(rows.len(), cols.len());
        for (a, i) in rows.iter().enumerate() {
            for (b, j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn max_abs_offdiag(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 1..=self.d {
            for j in (i + 1)..=self.d {
                m = m.max(self.get(i, j).abs());
            }
        }
        m
    }

    /// Max-norm of the entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.d, other.d);
        self.up
            .iter()
            .zip(other.up.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Inverse via LDL^T; fails on non-positive pivots.
    pub fn inverse(&self) -> Result<DenseSymMatrix, SpmatError> {
        sym_inverse(self).ok_or(SpmatError::NonFinite)
    }
}

fn check_in_range(s: &IndexSet, d: usize) -> Result<(), SpmatError> {
    for i in s.iter() {
        if i < 1 || i > d {
            return Err(SpmatError::IndexOutOfRange { index: i, d });
        }
    }
    Ok(())
}

/// Euclidean projection of a dense matrix onto a sparsity pattern: the
/// diagonal is copied, off-diagonals survive iff the pattern has the edge.
pub fn project(m: &DenseSymMatrix, e: &SparsityPattern) -> Result<SymSparseMatrix, SpmatError> {
    if m.d() != e.d() {
        return Err(SpmatError::DimensionMismatch {
            expected: e.d(),
            got: m.d(),
        });
    }
    let diag: Vec<f64> = (1..=m.d()).map(|i| m.get(i, i)).collect();
    let entries: Vec<(usize, usize, f64)> =
        e.edges().map(|(i, j)| (i, j, m.get(i, j))).collect();
    SymSparseMatrix::from_entries(m.d(), diag, &entries)
}

/// True iff an LDL^T factorization succeeds with every pivot above
/// `PIVOT_TOL` times the largest diagonal entry.
pub fn is_positive_definite(m: &DenseSymMatrix) -> Result<bool, SpmatError> {
    let d = m.d();
    if d == 0 {
        return Ok(true);
    }
    let mut full = m.to_full();
    if full.iter().any(|v| !v.is_finite()) {
        return Err(SpmatError::NonFinite);
    }
    let max_diag = (1..=d).map(|i| m.get(i, i)).fold(f64::NEG_INFINITY, f64::max);
    if max_diag <= 0.0 {
        return Ok(false);
    }
    let tol = PIVOT_TOL * max_diag;
    Ok(ldlt_factor(&mut full, d, tol).is_ok())
}

#[cfg(test)]
mod tests;
