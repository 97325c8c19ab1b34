//! Schur-complement elimination, continued fractions and the reduction of a
//! cut tridiagonal chain to a two-coordinate exponent.
//!
//! Integrating a Gaussian over a set of coordinates replaces its exponent by
//! the Schur complement on the remaining ones. When the integrated
//! coordinates couple to only one side of a bipartition, the reduced state of
//! the other side, and hence the entanglement, is unchanged.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// Symmetric tridiagonal matrix stored by its diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalChain {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalChain {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidArgument(String::from("chain must have dimension >= 1")));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: offdiag.len(),
            });
        }
        if let Some(bad) = diag.iter().chain(&offdiag).find(|x| !x.is_finite()) {
            return Err(Error::Domain {
                quantity: "chain entry",
                value: *bad,
                requirement: "finite",
            });
        }
        Ok(TridiagonalChain { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn to_matrix(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(self.dim(), |i, j| {
            if i == j {
                self.diag[i]
            } else if j == i + 1 {
                self.offdiag[i]
            } else {
                0.0
            }
        })
    }

    /// `shift·I - scale·self`; with `shift = 1 + 2g·degree` and `scale = 2g`
    /// this turns an adjacency chain into the matching potential chain.
    pub fn affine(&self, shift: f64, scale: f64) -> TridiagonalChain {
        TridiagonalChain {
            diag: self.diag.iter().map(|a| shift - scale * a).collect(),
            offdiag: self.offdiag.iter().map(|b| -scale * b).collect(),
        }
    }

    /// LDLᵀ pivots `p_0 = a_0`, `p_i = a_i - b_{i-1}² / p_{i-1}`. The chain is
    /// SPD iff all are positive.
    pub fn pivots(&self) -> Result<Vec<f64>> {
        let mut pivots = Vec::with_capacity(self.dim());
        let mut p = self.diag[0];
        check_pivot(p, 0)?;
        pivots.push(p);
        for i in 1..self.dim() {
            p = self.diag[i] - self.offdiag[i - 1] * self.offdiag[i - 1] / p;
            check_pivot(p, i)?;
            pivots.push(p);
        }
        Ok(pivots)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.pivots().is_ok()
    }
}

fn check_pivot(p: f64, depth: usize) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::SingularChain { depth, pivot: p })
    }
}

/// Exponent `[[a11, a12], [a12, a22]]` of two coordinates facing a cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTwoByTwo {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

/// `M_kk - M_ke M_ee⁻¹ M_ek` with `e` the complement of `keep`. `keep` may be
/// given in any order; the result follows sorted order.
pub fn schur_eliminate(m: &SymmetricMatrix, keep: &[usize]) -> Result<SymmetricMatrix> {
    let n = m.dim();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&last) = keep.last() {
        if last >= n {
            return Err(Error::VertexOutOfRange { index: last, count: n });
        }
    }
    let elim: Vec<usize> = (0..n).filter(|i| keep.binary_search(i).is_err()).collect();
    if elim.is_empty() {
        return Ok(m.clone());
    }
    let mee = m.block(&elim, &elim);
    let chol = Cholesky::new(mee.clone()).ok_or_else(|| Error::NotPositiveDefinite {
        min_eigenvalue: SymmetricMatrix::symmetrized(mee).eigenvalues()[0],
    })?;
    let solved = chol.solve(&m.block(&elim, &keep));
    let reduced = m.block(&keep, &keep) - m.block(&keep, &elim) * solved;
    Ok(SymmetricMatrix::symmetrized(reduced))
}

/// `x - α_k - ω_{k-1} / (x - α_{k-1} - ω_{k-2} / (... / (x - α_1)))`,
/// evaluated from the innermost level outward.
pub fn continued_fraction(x: f64, alphas: &[f64], omegas: &[f64]) -> Result<f64> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument(String::from("need at least one alpha")));
    }
    if omegas.len() + 1 != alphas.len() {
        return Err(Error::DimensionMismatch {
            expected: alphas.len() - 1,
            found: omegas.len(),
        });
    }
    let mut value = x - alphas[0];
    for (depth, (alpha, omega)) in alphas[1..].iter().zip(omegas).enumerate() {
        if value == 0.0 || !value.is_finite() {
            return Err(Error::SingularChain { depth, pivot: value });
        }
        value = x - alpha - omega / value;
    }
    Ok(value)
}

/// Eliminates every coordinate except `split_at - 1` and `split_at`, working
/// inward from both ends, and returns the surviving 2×2 exponent.
pub fn reduce_chain(chain: &TridiagonalChain, split_at: usize) -> Result<EffectiveTwoByTwo> {
    let dim = chain.dim();
    if split_at == 0 || split_at >= dim {
        return Err(Error::InvalidArgument(alloc::format!(
            "split {split_at} must lie in 1..={}",
            dim.saturating_sub(1)
        )));
    }
    chain.pivots()?;
    let (a, b) = (chain.diag(), chain.offdiag());
    let mut left = a[0];
    for i in 1..split_at {
        left = a[i] - b[i - 1] * b[i - 1] / left;
        check_pivot(left, i)?;
    }
    let mut right = a[dim - 1];
    for i in (split_at..dim - 1).rev() {
        right = a[i] - b[i] * b[i] / right;
        check_pivot(right, dim - 1 - i)?;
    }
    Ok(EffectiveTwoByTwo {
        a11: left,
        a12: b[split_at - 1],
        a22: right,
    })
}

/// `γ = a12 / √(a11 a22)`.
pub fn gamma_scalar(e: EffectiveTwoByTwo) -> Result<f64> {
    if !(e.a11 > 0.0) || !(e.a22 > 0.0) {
        return Err(Error::Domain {
            quantity: "diagonal of 2x2 exponent",
            value: e.a11.min(e.a22),
            requirement: "a11 > 0 and a22 > 0",
        });
    }
    if !(e.a12 * e.a12 < e.a11 * e.a22) {
        return Err(Error::Domain {
            quantity: "a12",
            value: e.a12,
            requirement: "a12^2 < a11 a22",
        });
    }
    Ok(e.a12 / libm::sqrt(e.a11 * e.a22))
}
