//! Spectral decompositions with clustered eigenvalues.

use super::eigen::{eig_hermitian, Eigen};
use super::hermitian::{Projection, Psd};
use super::matrix::{CMatrix, C64};
use super::tol::Tolerances;
use crate::error::Result;

/// `A = Σ_k a_k P_k` with `a_1 > … > a_m > 0` and the kernel split off.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub projections: Vec<Projection>,
    pub kernel_projection: Projection,
    /// Orthonormal eigenvectors spanning each `P_k`, in solver order.
    pub bases: Vec<Vec<Vec<C64>>>,
    pub kernel_basis: Vec<Vec<C64>>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.kernel_projection.dim()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Support projection `A⁰ = Σ P_k`.
    pub fn support(&self) -> Projection {
        self.kernel_projection.complement()
    }

    /// `P_1 + … + P_k` (the first `k` projections).
    pub fn partial_sum(&self, k: usize) -> CMatrix {
        let n = self.dim();
        self.projections[..k]
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, p| &acc + p.matrix())
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        self.values
            .iter()
            .zip(&self.projections)
            .fold(CMatrix::zeros(n, n), |acc, (&a, p)| &acc + &p.scale(a))
    }
}

pub fn group_spectrum(a: &Psd, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let eig = eig_hermitian(a.hermitian())?;
    Ok(group_eigen(&eig, tol))
}

/// Clusters an eigen-decomposition of a PSD matrix.
pub(crate) fn group_eigen(eig: &Eigen, tol: &Tolerances) -> SpectralDecomposition {
    let n = eig.vectors.rows();
    let top = eig.values.first().copied().unwrap_or(0.0);
    let zero_cut = tol.zero * top.max(0.0);
    let gap = tol.group * top.abs().max(1.0);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut kernel = Vec::new();
    for (i, &a) in eig.values.iter().enumerate() {
        if top <= 0.0 || a <= zero_cut {
            kernel.push(i);
            continue;
        }
        match clusters.last_mut() {
            Some(c) if eig.values[*c.last().unwrap()] - a <= gap => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut values = Vec::with_capacity(clusters.len());
    let mut projections = Vec::with_capacity(clusters.len());
    let mut bases = Vec::with_capacity(clusters.len());
    for c in &clusters {
        values.push(c.iter().map(|&i| eig.values[i]).sum::<f64>() / c.len() as f64);
        let basis: Vec<Vec<C64>> = c.iter().map(|&i| eig.vector(i)).collect();
        projections.push(Projection::from_orthonormal(n, &basis));
        bases.push(basis);
    }
    let kernel_basis: Vec<Vec<C64>> = kernel.iter().map(|&i| eig.vector(i)).collect();
    SpectralDecomposition {
        values,
        projections,
        kernel_projection: Projection::from_orthonormal(n, &kernel_basis),
        bases,
        kernel_basis,
    }
}
