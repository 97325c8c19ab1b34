//! Dense real symmetric matrices.
//!
//! [`SymmetricMatrix`] wraps an `nalgebra` dense matrix and guarantees exact
//! symmetry of the stored entries: every constructor either mirrors the upper
//! triangle or rejects asymmetric input.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    inner: DMatrix<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle (`i <= j`).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut inner = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                inner[(i, j)] = v;
                inner[(j, i)] = v;
            }
        }
        SymmetricMatrix { inner }
    }

    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        SymmetricMatrix {
            inner: DMatrix::identity(dim, dim),
        }
    }

    /// Row-major entries; rejects anything not exactly symmetric.
    pub fn try_from_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::try_from_dmatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn try_from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymmetricMatrix { inner: m })
    }

    /// Averages `m` with its transpose. Used for results of floating-point
    /// products that are symmetric only up to rounding.
    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        SymmetricMatrix { inner: (m + t) * 0.5 }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.inner.row(i).sum()).collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymmetricMatrix { inner: &self.inner * c }
    }

    /// `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dim();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: perm.len(),
            });
        }
        let mut seen = alloc::vec![false; n];
        for &p in perm {
            if p >= n {
                return Err(Error::VertexOutOfRange { index: p, count: n });
            }
            if core::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "index {p} repeated in permutation"
                )));
            }
        }
        Ok(Self::from_fn(n, |i, j| self.inner[(perm[i], perm[j])]))
    }

    /// Submatrix on `rows x cols`.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.inner[(rows[i], cols[j])])
    }

    pub fn principal(&self, idx: &[usize]) -> SymmetricMatrix {
        SymmetricMatrix {
            inner: self.block(idx, idx),
        }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.inner.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Eigenvalues (ascending) with matching eigenvector columns.
    pub fn eigen(&self) -> (DVector<f64>, DMatrix<f64>) {
        sym_eigen(self.inner.clone())
    }
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
pub(crate) fn sym_eigen(m: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `f(M) = U f(Λ) Uᵀ` for a symmetric `M`, after checking the spectrum is
/// positive relative to its largest value.
pub(crate) fn spd_function(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let (values, vectors) = sym_eigen(m.clone());
    let min = values[0];
    let max = values[n - 1];
    if !(min > 1e-12 * max.abs()) || !min.is_finite() || !max.is_finite() {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    let mut scaled = vectors.clone();
    for c in 0..n {
        let s = f(values[c]);
        for r in 0..n {
            scaled[(r, c)] *= s;
        }
    }
    Ok(scaled * vectors.transpose())
}
