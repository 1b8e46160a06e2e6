//! Log-domain evaluation of `Φ((A + s)^p)` through graded factors.

use crate::error::Result;
use crate::linalg::eigen::Eigen;
use crate::linalg::{CMatrix, GradedFactor, LogSpectrum};

/// Spectrum of `Σ_r K_r (A + shift)^p K_r*`.
///
/// With `shift == 0` the power is taken on the support of `A` only
/// (eigenvalues at most `zero * a_1` are exact zeros); a positive shift
/// includes every eigenvalue.
pub(crate) fn map_power_spectrum(
    ops: &[CMatrix],
    eig: &Eigen,
    p: f64,
    shift: f64,
    zero: f64,
) -> Result<LogSpectrum> {
    let out = ops.first().map_or(0, |k| k.rows());
    let top = eig.values.first().copied().unwrap_or(0.0);
    let mut f = GradedFactor::new(out);
    for (i, &a) in eig.values.iter().enumerate() {
        let x = if shift > 0.0 {
            a.max(0.0) + shift
        } else if top > 0.0 && a > zero * top {
            a
        } else {
            continue;
        };
        let v = eig.vector(i);
        let log_scale = 0.5 * p * x.ln();
        for k in ops {
            f.push(&k.mul_vec(&v), log_scale);
        }
    }
    Ok(f.orthogonalize()?.left_spectrum())
}

/// `Φ(A^p)^{1/p}` as a spectrum.
pub(crate) fn map_root(ops: &[CMatrix], eig: &Eigen, p: f64, zero: f64) -> Result<LogSpectrum> {
    Ok(map_power_spectrum(ops, eig, p, 0.0, zero)?.root(p))
}

/// `Φ((A + shift)^{-p})^{-1/p}` in the generalized-inverse sense.
pub(crate) fn neg_map_root(
    ops: &[CMatrix],
    eig: &Eigen,
    p: f64,
    shift: f64,
    zero: f64,
) -> Result<LogSpectrum> {
    Ok(map_power_spectrum(ops, eig, -p, shift, zero)?.map_logs(|l| -l / p))
}
