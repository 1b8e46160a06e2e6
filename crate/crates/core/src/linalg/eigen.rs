//! Cyclic complex Jacobi eigensolver for Hermitian matrices.

use super::hermitian::Hermitian;
use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V diag(values) V*`.
    pub fn reconstruct(&self) -> CMatrix {
        reassemble(&self.vectors, &self.values)
    }
}

pub fn eig_hermitian(h: &Hermitian) -> Result<Eigen> {
    let (values, vectors) = eigh(h)?;
    Ok(Eigen { values, vectors })
}

/// `V diag(d) V*` for real `d`.
pub(crate) fn reassemble(v: &CMatrix, d: &[f64]) -> CMatrix {
    let n = v.rows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &dk) in d.iter().enumerate() {
        if dk == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v[(i, k)] * dk;
            if vik == ZERO {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj();
            }
        }
    }
    out
}

/// Jacobi diagonalization of the Hermitian part of `m`.
///
/// Pairs are visited in row-cyclic order, so the output is a deterministic
/// function of the input bits.
pub(crate) fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    assert!(m.is_square(), "eigh on a non-square matrix");
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    if n == 0 {
        return Ok((vec![], v));
    }
    let scale = a.frobenius_norm();
    if scale == 0.0 || !scale.is_finite() {
        if !scale.is_finite() {
            return Err(Error::NonFinite);
        }
        return Ok((vec![0.0; n], v));
    }
    // Off-diagonal entries below this are dropped outright.
    let floor = scale * 1e-18;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let bn = b.norm();
                if bn == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Relative criterion keeps small eigenvalues accurate.
                if bn <= floor || bn <= 1e-18 * (app.abs() * aqq.abs()).sqrt() {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                rotated = true;
                rotate(&mut a, &mut v, p, q, app, aqq, b, bn);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            solver: "jacobi eigensolver",
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok((values, vectors))
}

#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, app: f64, aqq: f64, b: C64, bn: f64) {
    let n = a.rows();
    let phase = b / bn; // e^{i phi}
    let tau = (aqq - app) / (2.0 * bn);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J = diag(1, e^{-i phi}) [[c, s], [-s, c]]
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    for k in 0..n {
        let hkp = a[(k, p)];
        let hkq = a[(k, q)];
        a[(k, p)] = hkp * jpp + hkq * jqp;
        a[(k, q)] = hkp * jpq + hkq * jqq;
    }
    for k in 0..n {
        let hpk = a[(p, k)];
        let hqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * hpk + jqp.conj() * hqk;
        a[(q, k)] = jpq.conj() * hpk + jqq.conj() * hqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * bn, 0.0);
    a[(q, q)] = C64::new(aqq + t * bn, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(rows: &[&[f64]]) -> Hermitian {
        Hermitian::from_real_rows(rows).unwrap()
    }

    #[test]
    fn diagonal_input_is_left_alone() {
        let e = eig_hermitian(&herm(&[&[2.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
        assert!(e.vectors.max_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn rank_one_projection() {
        let e = eig_hermitian(&herm(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!(e.values[1].abs() < 1e-15);
        let v = e.vector(0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(((v[0] * v[1].conj()).re - 0.5).abs() < 1e-15);
        assert!((v[0].norm() - s).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let m = CMatrix::from_fn(4, 4, |i, j| {
            let x = (i * 7 + j * 3) as f64 * 0.37;
            C64::new(x.sin(), if i == j { 0.0 } else { x.cos() })
        });
        let h = Hermitian::from_raw(&m + &m.adjoint());
        let e = eig_hermitian(&h).unwrap();
        assert!(e.reconstruct().max_diff(&h) < 1e-12);
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!(gram.max_diff(&CMatrix::identity(4)) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn graded_spectrum_keeps_relative_accuracy() {
        let h = herm(&[&[1.0, 1e-9], &[1e-9, 1e-16]]);
        let e = eig_hermitian(&h).unwrap();
        // determinant 1e-16 - 1e-18
        let expected = (1e-16 - 1e-18) / e.values[0];
        assert!(((e.values[1] - expected) / expected).abs() < 1e-6);
    }
}
