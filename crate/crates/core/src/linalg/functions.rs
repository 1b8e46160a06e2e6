//! Functional calculus and log-domain matrix powers.

use super::eigen::{eig_hermitian, eigh, reassemble};
use super::hermitian::{Hermitian, Psd};
use super::matrix::CMatrix;
use super::tol::Tolerances;
use crate::error::{Error, Result};

/// `A^p = exp(log_scale) * scaled`, with `scaled` of unit spectral norm.
///
/// Keeping the scale as a logarithm lets callers take `(A^p)^{1/p}` for
/// large `p` without ever forming `a^p`.
#[derive(Debug, Clone)]
pub struct PowerScaled {
    pub scaled: Psd,
    pub log_scale: f64,
}

impl PowerScaled {
    /// Materializes `A^p`; may overflow for large exponents.
    pub fn value(&self) -> CMatrix {
        self.scaled.scale(self.log_scale.exp())
    }
}

/// Where a scalar function may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Real,
    /// `[0, ∞)`; eigenvalues slightly below zero are clamped.
    NonNegative,
    /// `(0, ∞)`.
    Positive,
}

/// `A^p` over the support of `A`.
///
/// For `p < 0` this is the generalized inverse power; `p = 0` gives the
/// support projection.
pub fn matrix_power(a: &Psd, p: f64) -> Result<PowerScaled> {
    matrix_power_tol(a, p, &Tolerances::default())
}

pub fn matrix_power_tol(a: &Psd, p: f64, tol: &Tolerances) -> Result<PowerScaled> {
    let e = eig_hermitian(a.hermitian())?;
    let n = a.dim();
    let top = e.values.first().copied().unwrap_or(0.0);
    let cut = tol.zero * top;
    let logs: Vec<Option<f64>> = e
        .values
        .iter()
        .map(|&x| (top > 0.0 && x > cut).then(|| p * x.ln()))
        .collect();
    let log_scale = logs
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !log_scale.is_finite() {
        return Ok(PowerScaled {
            scaled: Psd::zeros(n),
            log_scale: 0.0,
        });
    }
    let d: Vec<f64> = logs
        .iter()
        .map(|l| l.map_or(0.0, |l| (l - log_scale).exp()))
        .collect();
    Ok(PowerScaled {
        scaled: Psd::from_raw(reassemble(&e.vectors, &d)),
        log_scale,
    })
}

/// `V diag(f(λ_i)) V*`.
pub fn apply_function(h: &Hermitian, domain: Domain, f: impl Fn(f64) -> f64) -> Result<Hermitian> {
    let e = eig_hermitian(h)?;
    let top = e.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let slack = Tolerances::default().psd * top.max(1.0);
    let mut d = Vec::with_capacity(e.values.len());
    for &x in &e.values {
        let x = match domain {
            Domain::Real => x,
            Domain::NonNegative if x >= 0.0 => x,
            Domain::NonNegative if x >= -slack => 0.0,
            Domain::Positive if x > 0.0 => x,
            _ => {
                return Err(Error::DomainError {
                    function: format!("{domain:?} function"),
                    value: x,
                })
            }
        };
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::DomainError {
                function: "scalar function".into(),
                value: x,
            });
        }
        d.push(y);
    }
    Ok(Hermitian::from_raw(reassemble(&e.vectors, &d)))
}

/// Moore–Penrose power on the support: eigenvalues at most `zero * λ_max`
/// are treated as exact zeros.
pub(crate) fn support_power(m: &CMatrix, p: f64, zero: f64) -> Result<CMatrix> {
    let (vals, v) = eigh(m)?;
    let top = vals.first().copied().unwrap_or(0.0);
    let d: Vec<f64> = vals
        .iter()
        .map(|&x| if top > 0.0 && x > zero * top { x.powf(p) } else { 0.0 })
        .collect();
    Ok(reassemble(&v, &d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_power_of_singular_matrix_stays_on_support() {
        let a = Psd::from_diag(&[1.0, 0.0]).unwrap();
        let r = matrix_power(&a, -7.0).unwrap();
        assert!(r.value().max_diff(&CMatrix::from_diag_real(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn projection_powers_are_idempotent() {
        let p = Psd::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let r = matrix_power(&p, 5.0).unwrap();
        assert!(r.value().max_diff(&p) < 1e-14);
    }

    #[test]
    fn square_root() {
        let a = Psd::from_diag(&[4.0, 1.0]).unwrap();
        let r = matrix_power(&a, 0.5).unwrap();
        assert!(r.value().max_diff(&CMatrix::from_diag_real(&[2.0, 1.0])) < 1e-15);
    }

    #[test]
    fn huge_power_keeps_scale_as_log() {
        let a = Psd::from_diag(&[3.0, 2.0]).unwrap();
        let r = matrix_power(&a, 16384.0).unwrap();
        assert!((r.log_scale - 16384.0 * 3f64.ln()).abs() < 1e-9);
        assert!((r.scaled[(0, 0)].re - 1.0).abs() < 1e-15);
        assert_eq!(r.scaled[(1, 1)].re, 0.0); // (2/3)^16384 underflows
    }

    #[test]
    fn function_application() {
        let h = Hermitian::from_real_rows(&[&[4.0, 0.0], &[0.0, 1.0]]).unwrap();
        let r = apply_function(&h, Domain::Positive, |x| x.powf(-0.5)).unwrap();
        assert!(r.max_diff(&CMatrix::from_diag_real(&[0.5, 1.0])) < 1e-15);
        let id = apply_function(&h, Domain::Real, |x| x).unwrap();
        assert!(id.max_diff(&h) < 1e-15);
        let g = Hermitian::from_real_rows(&[&[2.0, 0.0], &[0.0, 0.5]]).unwrap();
        let m = apply_function(&g, Domain::Real, |x| x.max(1.0)).unwrap();
        assert!(m.max_diff(&CMatrix::from_diag_real(&[2.0, 1.0])) < 1e-15);
    }

    #[test]
    fn domain_violation_is_reported() {
        let h = Hermitian::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        assert!(matches!(
            apply_function(&h, Domain::Positive, f64::ln),
            Err(Error::DomainError { .. })
        ));
    }
}
