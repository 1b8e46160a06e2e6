//! One-sided Jacobi on column-graded factors with logarithmic column scales.
//!
//! A factor `F = [e^{s_1} m_1, …, e^{s_k} m_k]` with unit vectors `m_j` is
//! orthogonalized by plane rotations whose coefficients are all computed
//! from the scale ratio `ρ = e^{s_small − s_big} ≤ 1`. No quantity of size
//! `e^{s}` is ever formed, so factors like `K A^{p/2}` with `p` in the
//! thousands are handled without overflow and with their small singular
//! values intact.

use super::matrix::{dot, norm, CMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;
const SKIP: f64 = 1e-15;
const CONVERGED: f64 = 1e-14;
/// Columns that lose this fraction of their norm to cancellation are taken
/// to be linearly dependent on the others and dropped.
const KILL: f64 = 1e-11;

/// `Σ_k e^{logs_k} |u_k⟩⟨u_k|`, with `logs` descending.
#[derive(Debug, Clone)]
pub struct LogSpectrum {
    pub dim: usize,
    pub logs: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

impl LogSpectrum {
    fn sorted(dim: usize, mut pairs: Vec<(f64, Vec<C64>)>) -> Self {
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (logs, vectors) = pairs.into_iter().unzip();
        LogSpectrum { dim, logs, vectors }
    }

    /// Spectrum of `X^{1/p}`.
    pub fn root(&self, p: f64) -> Self {
        self.map_logs(|l| l / p)
    }

    /// Applies `log x ↦ g(log x)` to every nonzero eigenvalue.
    pub fn map_logs(&self, g: impl Fn(f64) -> f64) -> Self {
        let pairs = self
            .logs
            .iter()
            .zip(&self.vectors)
            .map(|(&l, v)| (g(l), v.clone()))
            .collect();
        Self::sorted(self.dim, pairs)
    }

    /// Eigenvalues padded with zeros to the full dimension.
    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.logs.iter().map(|l| l.exp()).collect();
        v.resize(self.dim, 0.0);
        v
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (&l, u) in self.logs.iter().zip(&self.vectors) {
            let w = l.exp();
            if w == 0.0 {
                continue;
            }
            for i in 0..self.dim {
                let ui = u[i] * w;
                for j in 0..self.dim {
                    m[(i, j)] += ui * u[j].conj();
                }
            }
        }
        m
    }

    /// Conjugates the eigenvectors by `W` (which must be an isometry).
    pub fn rotate(&self, w: &CMatrix) -> Self {
        LogSpectrum {
            dim: w.rows(),
            logs: self.logs.clone(),
            vectors: self.vectors.iter().map(|v| w.mul_vec(v)).collect(),
        }
    }
}

/// A factor whose columns carry separate logarithmic scales.
#[derive(Debug, Clone)]
pub struct GradedFactor {
    dim: usize,
    logs: Vec<f64>,
    cols: Vec<Vec<C64>>,
}

impl GradedFactor {
    pub fn new(dim: usize) -> Self {
        GradedFactor {
            dim,
            logs: Vec::new(),
            cols: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    /// Appends the column `e^{log_scale} * col`.
    pub fn push(&mut self, col: &[C64], log_scale: f64) {
        assert_eq!(col.len(), self.dim, "column length");
        let nrm = norm(col);
        if nrm == 0.0 || log_scale == f64::NEG_INFINITY {
            self.logs.push(f64::NEG_INFINITY);
            self.cols.push(vec![ZERO; self.dim]);
        } else {
            self.logs.push(log_scale + nrm.ln());
            self.cols.push(col.iter().map(|z| z / nrm).collect());
        }
    }

    /// Orthogonalizes the columns.
    pub fn orthogonalize(self) -> Result<GradedSvd> {
        hestenes(self)
    }
}

/// Result of orthogonalizing `F`: `F J = [e^{s_j} m_j]` with orthonormal
/// `m_j` for the surviving columns.
#[derive(Debug, Clone)]
pub struct GradedSvd {
    dim: usize,
    log_sv: Vec<f64>,
    left: Vec<Vec<C64>>,
    right: CMatrix,
}

impl GradedSvd {
    /// Spectrum of `F F*`.
    pub fn left_spectrum(&self) -> LogSpectrum {
        let pairs = self
            .log_sv
            .iter()
            .zip(&self.left)
            .filter(|(l, _)| l.is_finite())
            .map(|(&l, v)| (2.0 * l, v.clone()))
            .collect();
        LogSpectrum::sorted(self.dim, pairs)
    }

    /// Spectrum of `F* F`.
    pub fn right_spectrum(&self) -> LogSpectrum {
        let pairs = self
            .log_sv
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_finite())
            .map(|(j, &l)| (2.0 * l, self.right.column(j)))
            .collect();
        LogSpectrum::sorted(self.right.rows(), pairs)
    }
}

fn hestenes(f: GradedFactor) -> Result<GradedSvd> {
    let GradedFactor {
        dim,
        mut logs,
        mut cols,
    } = f;
    let k = cols.len();
    let mut right = CMatrix::identity(k);
    let mut peak = logs.clone();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                if !logs[i].is_finite() || !logs[j].is_finite() {
                    continue;
                }
                let (b, s) = if logs[i] >= logs[j] { (i, j) } else { (j, i) };
                let g = dot(&cols[b], &cols[s]);
                let gn = g.norm();
                off = off.max(gn);
                if gn <= SKIP {
                    continue;
                }
                let phase = g / gn;
                let rho = (logs[s] - logs[b]).exp();
                let r2 = 1.0 - rho * rho;
                let t_over_rho = 2.0 * gn / (r2 + (r2 * r2 + 4.0 * rho * rho * gn * gn).sqrt());
                let t = rho * t_over_rho;
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                let s_over_rho = c * t_over_rho;
                let ph = phase.conj();

                let wb: Vec<C64> = cols[b]
                    .iter()
                    .zip(&cols[s])
                    .map(|(&x, &y)| x * c + y * ph * (sn * rho))
                    .collect();
                let ws: Vec<C64> = cols[b]
                    .iter()
                    .zip(&cols[s])
                    .map(|(&x, &y)| -x * s_over_rho + y * ph * c)
                    .collect();

                for r in 0..k {
                    let jb = right[(r, b)];
                    let js = right[(r, s)];
                    right[(r, b)] = jb * c + js * ph * sn;
                    right[(r, s)] = -jb * sn + js * ph * c;
                }

                let nb = norm(&wb);
                logs[b] += nb.ln();
                cols[b] = wb.iter().map(|z| z / nb).collect();
                peak[b] = peak[b].max(logs[b]);

                let ns = norm(&ws);
                let new_log = logs[s] + ns.ln();
                if ns <= KILL || new_log < peak[s] + KILL.ln() {
                    logs[s] = f64::NEG_INFINITY;
                    cols[s] = vec![ZERO; dim];
                } else {
                    logs[s] = new_log;
                    cols[s] = ws.iter().map(|z| z / ns).collect();
                    peak[s] = peak[s].max(new_log);
                }
            }
        }
        if off <= CONVERGED {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            solver: "graded one-sided jacobi",
            sweeps: MAX_SWEEPS,
        });
    }
    Ok(GradedSvd {
        dim,
        log_sv: logs,
        left: cols,
        right,
    })
}
