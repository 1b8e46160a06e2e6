//! Checked wrappers: Hermitian, positive semidefinite, and projection matrices.

use std::ops::Deref;

use super::eigen::eigh;
use super::matrix::{CMatrix, C64};
use super::tol::Tolerances;
use crate::error::{Error, Result};

/// A square matrix equal to its adjoint (after symmetrization within tolerance).
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian(CMatrix);

impl Hermitian {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, &Tolerances::default())
    }

    pub fn with_tolerance(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::dims(
                format!("square matrix ({}x{})", m.rows(), m.rows()),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let asymmetry = m.hermitian_defect();
        if asymmetry > tol.herm * m.max_abs().max(1.0) {
            return Err(Error::NonHermitianInput { asymmetry });
        }
        Ok(Hermitian(m.hermitian_part()))
    }

    /// Symmetrizes without checking; for matrices Hermitian by construction.
    pub(crate) fn from_raw(m: CMatrix) -> Self {
        Hermitian(m.hermitian_part())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = eigh(&self.0)?;
        Ok(vals.last().copied().unwrap_or(0.0))
    }
}

impl Deref for Hermitian {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

/// Positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Psd(Hermitian);

impl Psd {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, &Tolerances::default())
    }

    pub fn with_tolerance(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        Self::from_hermitian(Hermitian::with_tolerance(m, tol)?, tol)
    }

    pub fn from_hermitian(h: Hermitian, tol: &Tolerances) -> Result<Self> {
        let (vals, _) = eigh(&h)?;
        let top = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -tol.psd * top.max(1.0) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        Ok(Psd(h))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows))
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diag_real(diag))
    }

    /// Trusted constructor for matrices that are PSD by construction.
    pub(crate) fn from_raw(m: CMatrix) -> Self {
        Psd(Hermitian::from_raw(m))
    }

    pub fn identity(n: usize) -> Self {
        Psd(Hermitian(CMatrix::identity(n)))
    }

    pub fn zeros(n: usize) -> Self {
        Psd(Hermitian(CMatrix::zeros(n, n)))
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0.into_matrix()
    }

    /// `U X U*`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Psd {
        Psd::from_raw(&(u * self.matrix()) * &u.adjoint())
    }

    pub fn direct_sum(&self, other: &Psd) -> Psd {
        Psd::from_raw(self.matrix().direct_sum(other.matrix()))
    }
}

impl Deref for Psd {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

/// Orthogonal projection: Hermitian and idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    m: Hermitian,
    rank: usize,
}

impl Projection {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, &Tolerances::default())
    }

    pub fn with_tolerance(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        let h = Hermitian::with_tolerance(m, tol)?;
        let sq = &*h * &*h;
        let defect = sq.max_diff(&h);
        if defect > tol.proj {
            return Err(Error::NotProjection {
                reason: format!("|P^2 - P| = {defect:e}"),
            });
        }
        let tr = h.trace().re;
        let rank = tr.round();
        if (tr - rank).abs() > 0.01 || rank < 0.0 {
            return Err(Error::NotProjection {
                reason: format!("trace {tr} is not an integer"),
            });
        }
        Ok(Projection {
            m: h,
            rank: rank as usize,
        })
    }

    /// Projection onto the span of orthonormal vectors (trusted).
    pub(crate) fn from_orthonormal(dim: usize, frame: &[Vec<C64>]) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        for u in frame {
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] += u[i] * u[j].conj();
                }
            }
        }
        Projection {
            m: Hermitian::from_raw(m),
            rank: frame.len(),
        }
    }

    pub(crate) fn from_raw_with_rank(m: CMatrix, rank: usize) -> Self {
        Projection {
            m: Hermitian::from_raw(m),
            rank,
        }
    }

    pub fn zero(n: usize) -> Self {
        Projection {
            m: Hermitian(CMatrix::zeros(n, n)),
            rank: 0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Projection {
            m: Hermitian(CMatrix::identity(n)),
            rank: n,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// `I - P`.
    pub fn complement(&self) -> Projection {
        let n = self.dim();
        Projection {
            m: Hermitian::from_raw(&CMatrix::identity(n) - &self.m),
            rank: n - self.rank,
        }
    }

    pub fn to_psd(&self) -> Psd {
        Psd(self.m.clone())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }
}

impl Deref for Projection {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.m
    }
}
