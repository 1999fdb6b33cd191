//! Shared dense/sparse linear algebra kernels.
//!
//! Everything here is deterministic: assembly sums in fixed (sorted) order,
//! factorizations are sequential, and no randomness is involved.

use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Sparse symmetric matrix in CSR layout; both triangles are stored so that
/// matrix-vector products need no branching.
#[derive(Debug, Clone)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSym {
    /// Build from (row, col, value) triplets. Duplicate coordinates are summed
    /// in insertion order, then laid out in sorted order.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet index out of range");
            *map.entry((r, c)).or_insert(0.0) += v;
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &(r, _) in map.keys() {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut col_idx = Vec::with_capacity(map.len());
        let mut vals = Vec::with_capacity(map.len());
        for ((_, c), v) in map {
            col_idx.push(c);
            vals.push(v);
        }
        SparseSym { n, row_ptr, col_idx, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.col_idx[lo..hi].iter().copied().zip(self.vals[lo..hi].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn matvec(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = DVector::zeros(self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for (c, v) in self.row(i) {
                acc += v * x[c];
            }
            y[i] = acc;
        }
        y
    }

    /// Sparse * dense, column by column.
    pub fn mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.n);
        let mut y = DMatrix::zeros(self.n, x.ncols());
        for j in 0..x.ncols() {
            for i in 0..self.n {
                let mut acc = 0.0;
                for (c, v) in self.row(i) {
                    acc += v * x[(c, j)];
                }
                y[(i, j)] = acc;
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (c, v) in self.row(i) {
                d[(i, c)] = v;
            }
        }
        d
    }

    pub fn quadratic_form(&self, x: &DVector<f64>) -> f64 {
        x.dot(&self.matvec(x))
    }

    /// self + sigma * other, patterns merged.
    pub fn add_scaled(&self, other: &SparseSym, sigma: f64) -> SparseSym {
        assert_eq!(self.n, other.n);
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.n {
            for (c, v) in self.row(i) {
                triplets.push((i, c, v));
            }
            for (c, v) in other.row(i) {
                triplets.push((i, c, sigma * v));
            }
        }
        SparseSym::from_triplets(self.n, triplets)
    }

    /// Symmetrically permute: out[p[i], p[j]] = in[i, j].
    pub fn permute(&self, perm: &[usize]) -> SparseSym {
        assert_eq!(perm.len(), self.n);
        let triplets: Vec<_> = (0..self.n)
            .flat_map(|i| self.row(i).map(move |(c, v)| (i, c, v)))
            .map(|(i, c, v)| (perm[i], perm[c], v))
            .collect();
        SparseSym::from_triplets(self.n, triplets)
    }

    pub fn max_symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for (c, v) in self.row(i) {
                worst = worst.max((v - self.get(c, i)).abs());
            }
        }
        worst
    }

    /// Half-bandwidth max|i - j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0usize;
        for i in 0..self.n {
            for (c, _) in self.row(i) {
                bw = bw.max(i.abs_diff(c));
            }
        }
        bw
    }
}

/// A^T * S * B through the sparse operator.
pub fn triple_product(a: &DMatrix<f64>, s: &SparseSym, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.transpose() * s.mul_dense(b)
}

/// Reverse Cuthill-McKee ordering of the sparsity graph. Returns `perm` with
/// `new_index = perm[old_index]`.
pub fn reverse_cuthill_mckee(s: &SparseSym) -> Vec<usize> {
    let n = s.dim();
    let degree: Vec<usize> = (0..n).map(|i| s.row(i).count()).collect();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut queue = std::collections::VecDeque::new();

    // One BFS per connected component, started at a minimum-degree node.
    loop {
        let start = match (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]) {
            Some(v) => v,
            None => break,
        };
        visited[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nbrs: Vec<usize> = s.row(u).map(|(c, _)| c).filter(|&c| !visited[c]).collect();
            nbrs.sort_by_key(|&c| (degree[c], c));
            for c in nbrs {
                visited[c] = true;
                queue.push_back(c);
            }
        }
    }
    order.reverse();
    let mut perm = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    perm
}

/// Cholesky factorization of a symmetric positive definite band matrix.
pub struct BandCholesky {
    n: usize,
    bw: usize,
    // Row-major band: entry (i, j) with i-bw <= j <= i stored at [i * (bw+1) + (j - i + bw)].
    band: Vec<f64>,
}

impl BandCholesky {
    pub fn new(s: &SparseSym) -> Result<Self> {
        let n = s.dim();
        let bw = s.bandwidth();
        let w = bw + 1;
        let mut band = vec![0.0f64; n * w];
        for i in 0..n {
            for (c, v) in s.row(i) {
                if c <= i {
                    band[i * w + (c + bw - i)] = v;
                }
            }
        }
        // In-place banded Cholesky, L overwrites the lower band.
        for j in 0..n {
            let start = j.saturating_sub(bw);
            let mut d = band[j * w + bw];
            for k in start..j {
                let l = band[j * w + (k + bw - j)];
                d -= l * l;
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::Numerical(format!(
                    "band Cholesky broke down at pivot {j} (d = {d:.3e})"
                )));
            }
            let d = d.sqrt();
            band[j * w + bw] = d;
            let iend = (j + bw + 1).min(n);
            for i in (j + 1)..iend {
                let kstart = i.saturating_sub(bw).max(start);
                let mut v = band[i * w + (j + bw - i)];
                for k in kstart..j {
                    v -= band[i * w + (k + bw - i)] * band[j * w + (k + bw - j)];
                }
                band[i * w + (j + bw - i)] = v / d;
            }
        }
        Ok(BandCholesky { n, bw, band })
    }

    /// Solve L L^T x = b.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let mut x = b.clone();
        for i in 0..n {
            let start = i.saturating_sub(bw);
            let mut v = x[i];
            for k in start..i {
                v -= self.band[i * w + (k + bw - i)] * x[k];
            }
            x[i] = v / self.band[i * w + bw];
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            let iend = (i + bw + 1).min(n);
            for k in (i + 1)..iend {
                v -= self.band[k * w + (i + bw - k)] * x[k];
            }
            x[i] = v / self.band[i * w + bw];
        }
        x
    }
}

/// Smallest eigenpairs of the dense generalized symmetric problem
/// A x = lambda B x with B symmetric positive definite. Eigenvalues ascend and
/// the eigenvectors are returned B-orthonormal.
pub fn dense_generalized_eig(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "generalized eig needs square matrices of equal size, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let chol = nalgebra::Cholesky::new(b.clone())
        .ok_or_else(|| Error::Numerical("metric matrix is not positive definite".into()))?;
    let l = chol.l();
    // C = L^-1 A L^-T, symmetric.
    let mut c = a.clone();
    l.solve_lower_triangular_mut(&mut c);
    let mut ct = c.transpose();
    l.solve_lower_triangular_mut(&mut ct);
    let c = (&ct + ct.transpose()) * 0.5;

    let eig = c
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let mut vals = Vec::with_capacity(n);
    let mut vecs = DMatrix::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        vals.push(eig.eigenvalues[i]);
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    // Map back: x = L^-T y, which makes columns B-orthonormal.
    let lt = l.transpose();
    let x = lt
        .solve_upper_triangular(&vecs)
        .ok_or_else(|| Error::Numerical("triangular back-substitution failed".into()))?;
    Ok((vals, x))
}

/// Largest eigenvalue of the dense generalized symmetric problem.
pub fn dense_generalized_eig_max(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    let (vals, _) = dense_generalized_eig(a, b)?;
    vals.last()
        .copied()
        .ok_or_else(|| Error::InvalidArgument("empty eigenproblem".into()))
}
