//! Numeric `p`-sweeps of `Φ(A^p)^{1/p}`, `(A^p σ B)^{1/p}` and
//! `(A^p B A^p)^{1/p}`, evaluated in the log domain.
//!
//! Every power `A^p` enters only through factors whose columns carry
//! logarithmic scales (see [`GradedFactor`]), so the grid may run up to
//! `p = 2^14` without overflow and without losing the small eigenvalues
//! that decide the limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eigen::{eig_hermitian, eigh, Eigen};
use crate::linalg::functions::support_power;
use crate::linalg::matrix::norm;
use crate::linalg::{CMatrix, GradedFactor, LogSpectrum, Psd, Tolerances, C64};
use crate::logdomain::{map_root, neg_map_root};
use crate::maps::PositiveMapSpec;
use crate::means::{is_positive_definite, reduction_projection, MeanKind, MeanSpec};

pub const MAX_P: f64 = 16384.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotone {
    Decreasing,
    Increasing,
    None,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub p_grid: Vec<f64>,
    pub iterates: Vec<CMatrix>,
    pub target: Option<CMatrix>,
    /// `‖iterate − target‖₂`, empty without a target.
    pub errors: Vec<f64>,
    /// Descending spectra of the iterates.
    pub eigenvalue_tracks: Vec<Vec<f64>>,
    pub monotone: Monotone,
    /// Largest Loewner-order violation of the reported direction (of the
    /// smaller of the two when neither holds).
    pub max_violation: f64,
    pub decreasing_violation: f64,
    pub increasing_violation: f64,
    pub cauchy_delta: f64,
}

impl ConvergenceReport {
    pub fn last(&self) -> &CMatrix {
        self.iterates.last().expect("grids are non-empty")
    }

    pub fn final_error(&self) -> Option<f64> {
        self.errors.last().copied()
    }
}

/// `{1, 2, 4, …, 2^12}`.
pub fn default_grid() -> Vec<f64> {
    dyadic_grid(4096.0)
}

/// Powers of two from 1 up to `p_max`.
pub fn dyadic_grid(p_max: f64) -> Vec<f64> {
    let mut g = vec![1.0];
    while g.last().unwrap() * 2.0 <= p_max {
        let next = g.last().unwrap() * 2.0;
        g.push(next);
    }
    g
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if let Some(p) = grid.iter().find(|p| !(**p >= 1.0 && **p <= MAX_P)) {
        return Err(Error::InvalidGrid(format!("p = {p} outside [1, {MAX_P}]")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid is not strictly increasing".into()));
    }
    Ok(())
}

/// Spectral norm of a Hermitian matrix.
pub fn spectral_norm(h: &CMatrix) -> Result<f64> {
    let (vals, _) = eigh(&h.hermitian_part())?;
    Ok(vals.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

fn min_eigenvalue(h: &CMatrix) -> Result<f64> {
    let (vals, _) = eigh(&h.hermitian_part())?;
    Ok(vals.last().copied().unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoewnerOrder {
    Equal,
    /// `X ⪯ Y`.
    Below,
    /// `Y ⪯ X`.
    Above,
    Incomparable,
}

pub fn loewner_compare(x: &CMatrix, y: &CMatrix, tau: f64) -> Result<LoewnerOrder> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::dims(
            format!("{}x{}", x.rows(), x.cols()),
            format!("{}x{}", y.rows(), y.cols()),
        ));
    }
    let below = min_eigenvalue(&(y - x))? >= -tau;
    let above = min_eigenvalue(&(x - y))? >= -tau;
    Ok(match (below, above) {
        (true, true) => LoewnerOrder::Equal,
        (true, false) => LoewnerOrder::Below,
        (false, true) => LoewnerOrder::Above,
        (false, false) => LoewnerOrder::Incomparable,
    })
}

/// Runs `iterate` over the grid and collects the diagnostics.
pub fn sweep_family(
    p_grid: &[f64],
    target: Option<&CMatrix>,
    iterate: impl Fn(f64) -> Result<CMatrix>,
) -> Result<ConvergenceReport> {
    validate_grid(p_grid)?;
    let iterates = p_grid.iter().map(|&p| iterate(p)).collect::<Result<Vec<_>>>()?;
    if let Some(t) = target {
        if t.rows() != iterates[0].rows() {
            return Err(Error::dims(iterates[0].rows(), t.rows()));
        }
    }
    let errors = match target {
        Some(t) => iterates.iter().map(|x| spectral_norm(&(x - t))).collect::<Result<_>>()?,
        None => vec![],
    };
    let eigenvalue_tracks = iterates
        .iter()
        .map(|x| Ok(eigh(&x.hermitian_part())?.0))
        .collect::<Result<Vec<_>>>()?;
    let mut dec: f64 = 0.0;
    let mut inc: f64 = 0.0;
    for w in iterates.windows(2) {
        dec = dec.max(-min_eigenvalue(&(&w[0] - &w[1]))?);
        inc = inc.max(-min_eigenvalue(&(&w[1] - &w[0]))?);
    }
    let scale = iterates.iter().map(|x| x.max_abs()).fold(1.0, f64::max);
    let slack = 1e-8 * scale;
    let (monotone, max_violation) = if dec <= slack {
        (Monotone::Decreasing, dec)
    } else if inc <= slack {
        (Monotone::Increasing, inc)
    } else {
        (Monotone::None, dec.min(inc))
    };
    let cauchy_delta = match iterates.len() {
        0 | 1 => 0.0,
        k => spectral_norm(&(&iterates[k - 1] - &iterates[k - 2]))?,
    };
    Ok(ConvergenceReport {
        p_grid: p_grid.to_vec(),
        target: target.cloned(),
        iterates,
        errors,
        eigenvalue_tracks,
        monotone,
        max_violation: max_violation.max(0.0) + 0.0,
        decreasing_violation: dec.max(0.0) + 0.0,
        increasing_violation: inc.max(0.0) + 0.0,
        cauchy_delta,
    })
}

/// `Φ(A^p)^{1/p}`.
pub fn map_iterate(phi: &PositiveMapSpec, a: &Psd, p: f64, tol: &Tolerances) -> Result<CMatrix> {
    check_in(phi, a)?;
    let eig = eig_hermitian(a.hermitian())?;
    Ok(map_root(&phi.kraus_operators()?, &eig, p, tol.zero)?.to_matrix())
}

/// `Φ(A^{-p})^{-1/p}` with generalized inverses on supports.
pub fn neg_map_iterate(phi: &PositiveMapSpec, a: &Psd, p: f64, tol: &Tolerances) -> Result<CMatrix> {
    check_in(phi, a)?;
    let eig = eig_hermitian(a.hermitian())?;
    Ok(neg_map_root(&phi.kraus_operators()?, &eig, p, 0.0, tol.zero)?.to_matrix())
}

fn check_in(phi: &PositiveMapSpec, a: &Psd) -> Result<()> {
    if phi.in_dim() != a.dim() {
        return Err(Error::dims(phi.in_dim(), a.dim()));
    }
    Ok(())
}

pub fn sweep_map(
    phi: &PositiveMapSpec,
    a: &Psd,
    p_grid: &[f64],
    target: Option<&CMatrix>,
    tol: &Tolerances,
) -> Result<ConvergenceReport> {
    check_in(phi, a)?;
    let ops = phi.kraus_operators()?;
    let eig = eig_hermitian(a.hermitian())?;
    sweep_family(p_grid, target, |p| Ok(map_root(&ops, &eig, p, tol.zero)?.to_matrix()))
}

pub fn sweep_neg_map(
    phi: &PositiveMapSpec,
    a: &Psd,
    p_grid: &[f64],
    target: Option<&CMatrix>,
    tol: &Tolerances,
) -> Result<ConvergenceReport> {
    check_in(phi, a)?;
    let ops = phi.kraus_operators()?;
    let eig = eig_hermitian(a.hermitian())?;
    sweep_family(p_grid, target, |p| Ok(neg_map_root(&ops, &eig, p, 0.0, tol.zero)?.to_matrix()))
}

/// Support eigenpairs of `A` as `(log a_i, v_i)`.
fn support_logs(eig: &Eigen, zero: f64) -> Vec<(f64, Vec<C64>)> {
    let top = eig.values.first().copied().unwrap_or(0.0);
    eig.values
        .iter()
        .enumerate()
        .filter(|(_, &a)| top > 0.0 && a > zero * top)
        .map(|(i, &a)| (a.ln(), eig.vector(i)))
        .collect()
}

/// `Σ_k e^{w_k} M u_k u_k* M*` as a graded factor.
fn conjugated(m: &CMatrix, s: &LogSpectrum, weight: impl Fn(f64) -> f64) -> GradedFactor {
    let mut f = GradedFactor::new(m.rows());
    for (&l, u) in s.logs.iter().zip(&s.vectors) {
        f.push(&m.mul_vec(u), 0.5 * weight(l));
    }
    f
}

/// Orthonormal basis of the complement of `span(vectors)`.
fn complement_basis(dim: usize, vectors: &[Vec<C64>]) -> Result<Vec<Vec<C64>>> {
    let mut proj = CMatrix::identity(dim);
    for u in vectors {
        proj = &proj - &CMatrix::outer(u);
    }
    let (vals, vecs) = eigh(&proj)?;
    Ok(vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| vecs.column(i))
        .collect())
}

/// `(A^p σ B)^{1/p}`, computed in the log domain.
///
/// Positive definite `B` uses `B^{1/2} f̃(B^{-1/2} A^p B^{-1/2}) B^{1/2}`;
/// singular `B` with `f(0) = 0` and `f(x)/x → 0` uses the support
/// reduction `B^{1/2} f̂(G B^{1/2} A^{-p} B^{1/2} G) B^{1/2}` on the support
/// of `A`. The arithmetic mean is the factor
/// `[√(1−α) A^{p/2}, √α B^{1/2}]`. Remaining cases (custom means with
/// singular `B` and `f(0) > 0`) replace `B` by `B + 10^{-12} λ_max(B)`.
pub fn mean_iterate(spec: &MeanSpec, a: &Psd, b: &Psd, p: f64, tol: &Tolerances) -> Result<CMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::dims(a.dim(), b.dim()));
    }
    let n = a.dim();
    let eig = eig_hermitian(a.hermitian())?;
    let support = support_logs(&eig, tol.zero);
    let alpha = spec.alpha();
    let trivial = matches!(spec.kind(), MeanKind::Arithmetic | MeanKind::Geometric | MeanKind::Harmonic);
    if trivial && alpha == 0.0 {
        let mut f = GradedFactor::new(n);
        for (l, v) in &support {
            f.push(v, 0.5 * p * l);
        }
        return Ok(f.orthogonalize()?.left_spectrum().root(p).to_matrix());
    }
    if trivial && alpha == 1.0 {
        return support_power(b, 1.0 / p, tol.zero);
    }
    let bh = support_power(b, 0.5, tol.zero)?;
    let spectrum = if spec.kind() == MeanKind::Arithmetic {
        let mut f = GradedFactor::new(n);
        let wa = (1.0 - alpha).sqrt();
        for (l, v) in &support {
            let col: Vec<C64> = v.iter().map(|z| z * wa).collect();
            f.push(&col, 0.5 * p * l);
        }
        for col in bh.columns() {
            let col: Vec<C64> = col.iter().map(|z| z * alpha.sqrt()).collect();
            f.push(&col, 0.0);
        }
        f.orthogonalize()?.left_spectrum()
    } else if is_positive_definite(b, tol)? {
        transpose_route(spec, &support, &bh, &support_power(b, -0.5, 0.0)?, p)?
    } else if spec.vanishes_at_both_ends() {
        let a0 = support_power(a, 0.0, tol.zero)?;
        let g = reduction_projection(&bh, &a0, b, tol)?;
        let gb = g.matrix() * &bh;
        let cols: Vec<(f64, Vec<C64>)> = support.iter().map(|(l, v)| (*l, gb.mul_vec(v))).collect();
        let max_norm = cols.iter().map(|(_, c)| norm(c)).fold(0.0, f64::max);
        let mut f = GradedFactor::new(n);
        for (l, c) in &cols {
            if norm(c) > tol.zero * max_norm {
                f.push(c, -0.5 * p * l);
            }
        }
        let x = f.orthogonalize()?.left_spectrum();
        conjugated(&bh, &x, |l| spec.log_f_hat(l)).orthogonalize()?.left_spectrum()
    } else {
        let top = eigh(b)?.0.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        let reg = b.matrix() + &CMatrix::identity(n).scale(1e-12 * top);
        transpose_route(spec, &support, &support_power(&reg, 0.5, 0.0)?, &support_power(&reg, -0.5, 0.0)?, p)?
    };
    Ok(spectrum.root(p).to_matrix())
}

fn transpose_route(
    spec: &MeanSpec,
    support: &[(f64, Vec<C64>)],
    bh: &CMatrix,
    b_inv_half: &CMatrix,
    p: f64,
) -> Result<LogSpectrum> {
    let n = bh.rows();
    let mut f = GradedFactor::new(n);
    for (l, v) in support {
        f.push(&b_inv_half.mul_vec(v), 0.5 * p * l);
    }
    let y = f.orthogonalize()?.left_spectrum();
    let mut z = conjugated(bh, &y, |l| spec.log_f_tilde(l));
    let c0 = spec.f_tilde(0.0);
    if c0 > 0.0 {
        for w in complement_basis(n, &y.vectors)? {
            z.push(&bh.mul_vec(&w), 0.5 * c0.ln());
        }
    }
    Ok(z.orthogonalize()?.left_spectrum())
}

pub fn sweep_mean(
    spec: &MeanSpec,
    a: &Psd,
    b: &Psd,
    p_grid: &[f64],
    target: Option<&CMatrix>,
    tol: &Tolerances,
) -> Result<ConvergenceReport> {
    sweep_family(p_grid, target, |p| mean_iterate(spec, a, b, p, tol))
}

/// `(A^p B A^p)^{1/p}`.
pub fn sandwich_iterate(a: &Psd, b: &Psd, p: f64, tol: &Tolerances) -> Result<CMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::dims(a.dim(), b.dim()));
    }
    let n = a.dim();
    let eig = eig_hermitian(a.hermitian())?;
    let bh = support_power(b, 0.5, tol.zero)?;
    let top = eig.values.first().copied().unwrap_or(0.0);
    // columns of B^{1/2} V D^p; F*F = D^p V*BV D^p is A^pBA^p in the V basis
    let mut f = GradedFactor::new(n);
    for (i, &a_i) in eig.values.iter().enumerate() {
        let log_scale = if top > 0.0 && a_i > tol.zero * top {
            p * a_i.ln()
        } else {
            f64::NEG_INFINITY
        };
        f.push(&bh.mul_vec(&eig.vector(i)), log_scale);
    }
    let s = f.orthogonalize()?.right_spectrum().rotate(&eig.vectors);
    Ok(s.root(p).to_matrix())
}

pub fn sweep_sandwich(a: &Psd, b: &Psd, p_grid: &[f64], tol: &Tolerances) -> Result<ConvergenceReport> {
    sweep_family(p_grid, None, |p| sandwich_iterate(a, b, p, tol))
}

/// `(A^p ! B^p)^{1/p}` for the harmonic mean `X ! Y = 2(X^{-1} + Y^{-1})^{-1}`.
///
/// Kernel eigenvalues are replaced by `10^{-14} λ_max`, which perturbs the
/// iterate by the same relative amount.
pub fn harmonic_power_iterate(a: &Psd, b: &Psd, p: f64, tol: &Tolerances) -> Result<CMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::dims(a.dim(), b.dim()));
    }
    let n = a.dim();
    let ea = eig_hermitian(a.hermitian())?;
    let eb = eig_hermitian(b.hermitian())?;
    let top = ea.values[0].max(eb.values[0]).max(f64::MIN_POSITIVE);
    let floor = 1e-14 * top;
    let mut f = GradedFactor::new(n);
    for e in [&ea, &eb] {
        for (i, &x) in e.values.iter().enumerate() {
            let x = if x > tol.zero * top { x } else { floor };
            f.push(&e.vector(i), -0.5 * p * x.ln());
        }
    }
    let s = f.orthogonalize()?.left_spectrum();
    Ok(s.map_logs(|l| (std::f64::consts::LN_2 - l) / p).to_matrix())
}

pub fn sweep_harmonic_power(a: &Psd, b: &Psd, p_grid: &[f64], target: Option<&CMatrix>, tol: &Tolerances) -> Result<ConvergenceReport> {
    sweep_family(p_grid, target, |p| harmonic_power_iterate(a, b, p, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::map_limit;
    use crate::linalg::Projection;
    use crate::maps::diagonal_to_lines_map;
    use crate::means::geometric_limit;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn half() -> Projection {
        Projection::new(CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap()
    }

    #[test]
    fn grids() {
        assert_eq!(default_grid().len(), 13);
        assert!(validate_grid(&[0.5, 1.0]).is_err());
        assert!(validate_grid(&[1.0, 1.0]).is_err());
        assert!(validate_grid(&[1.0, 32768.0]).is_err());
        assert!(validate_grid(&[]).is_err());
        assert!(validate_grid(&dyadic_grid(MAX_P)).is_ok());
    }

    #[test]
    fn identity_congruence_is_constant() {
        let a = Psd::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]).unwrap();
        let phi = PositiveMapSpec::congruence(CMatrix::identity(2)).unwrap();
        let r = sweep_map(&phi, &a, &default_grid(), Some(a.matrix()), &tol()).unwrap();
        assert!(r.errors.iter().all(|e| *e < 1e-12));
    }

    #[test]
    fn non_unital_fixture_converges() {
        let phi = diagonal_to_lines_map();
        let a = Psd::from_diag(&[2.0, 1.0]).unwrap();
        let target = map_limit(&phi, &a, &tol()).unwrap().limit;
        let r = sweep_map(&phi, &a, &default_grid(), Some(target.matrix()), &tol()).unwrap();
        assert!(r.final_error().unwrap() <= 1e-3);
    }

    #[test]
    fn mean_iterate_matches_direct_evaluation() {
        let a = Psd::from_real_rows(&[&[2.0, 0.5, 0.0], &[0.5, 1.0, 0.2], &[0.0, 0.2, 0.5]]).unwrap();
        let b = Psd::from_real_rows(&[&[1.0, 0.0, 0.3], &[0.0, 2.0, 0.0], &[0.3, 0.0, 1.0]]).unwrap();
        let p = 3.0;
        let ap = support_power(&a, p, 0.0).unwrap();
        for spec in [
            MeanSpec::geometric(0.3).unwrap(),
            MeanSpec::harmonic(0.5).unwrap(),
            MeanSpec::arithmetic(0.4).unwrap(),
            MeanSpec::logarithmic(),
        ] {
            let direct = crate::means::mean_eval(&spec, &Psd::from_raw(ap.clone()), &b, &tol()).unwrap();
            let direct = support_power(&direct, 1.0 / p, 0.0).unwrap();
            let it = mean_iterate(&spec, &a, &b, p, &tol()).unwrap();
            assert!(it.max_diff(&direct) < 1e-10, "{}: {}", spec.name(), it.max_diff(&direct));
        }
    }

    #[test]
    fn singular_mean_iterate_matches_direct_evaluation() {
        let a = Psd::from_real_rows(&[&[2.0, 0.5, 0.0], &[0.5, 1.0, 0.2], &[0.0, 0.2, 0.5]]).unwrap();
        let e = Projection::new(CMatrix::from_real_rows(&[&[0.5, 0.0, 0.5], &[0.0, 1.0, 0.0], &[0.5, 0.0, 0.5]])).unwrap().to_psd();
        let p = 2.0;
        let ap = Psd::from_raw(support_power(&a, p, 0.0).unwrap());
        for spec in [MeanSpec::geometric(0.3).unwrap(), MeanSpec::harmonic(0.5).unwrap(), MeanSpec::logarithmic()] {
            let direct = crate::means::mean_eval(&spec, &ap, &e, &tol()).unwrap();
            let direct = support_power(&direct, 1.0 / p, 1e-12).unwrap();
            let it = mean_iterate(&spec, &a, &e, p, &tol()).unwrap();
            assert!(it.max_diff(&direct) < 1e-10, "{}: {}", spec.name(), it.max_diff(&direct));
        }
    }

    #[test]
    fn geometric_projection_fixture_sweep() {
        let a = Psd::from_diag(&[4.0, 2.0]).unwrap();
        let e = half().to_psd();
        let spec = MeanSpec::geometric(0.5).unwrap();
        let target = geometric_limit(&a, &e, 0.5, &tol()).unwrap();
        let r = sweep_mean(&spec, &a, &e, &default_grid(), Some(target.matrix()), &tol()).unwrap();
        assert!(r.final_error().unwrap() < 1e-3, "{:?}", r.errors);
        assert_eq!(r.monotone, Monotone::Decreasing);
    }

    #[test]
    fn sandwich_cases() {
        let a = Psd::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]).unwrap();
        let a2 = a.matrix() * a.matrix();
        let r = sweep_sandwich(&a, &Psd::identity(2), &default_grid(), &tol()).unwrap();
        assert!(r.iterates.iter().all(|x| x.max_diff(&a2) < 1e-10));
        let d = Psd::from_diag(&[3.0, 2.0, 0.5]).unwrap();
        let b = Psd::from_diag(&[0.5, 0.0, 2.0]).unwrap();
        let it = sandwich_iterate(&d, &b, 1024.0, &tol()).unwrap();
        let lim = CMatrix::from_diag_real(&[9.0, 0.0, 0.25]);
        assert!(it.max_diff(&lim) < 1e-2);
        assert!(it.max_diff(&CMatrix::from_diag_real(&[9.0 * 0.5f64.powf(1.0 / 1024.0), 0.0, 0.25 * 2f64.powf(1.0 / 1024.0)])) < 1e-10);
    }

    #[test]
    fn loewner_cases() {
        let x = CMatrix::from_diag_real(&[1.0, 1.0]);
        assert_eq!(loewner_compare(&x, &x, 1e-12).unwrap(), LoewnerOrder::Equal);
        assert_eq!(loewner_compare(&x, &CMatrix::from_diag_real(&[2.0, 3.0]), 1e-12).unwrap(), LoewnerOrder::Below);
        assert_eq!(loewner_compare(&CMatrix::from_diag_real(&[2.0, 3.0]), &x, 1e-12).unwrap(), LoewnerOrder::Above);
        let d = CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, -0.5]]);
        assert_eq!(loewner_compare(&d, &CMatrix::zeros(2, 2), 1e-12).unwrap(), LoewnerOrder::Incomparable);
    }

    #[test]
    fn harmonic_power_commuting() {
        let a = Psd::from_diag(&[3.0, 1.0]).unwrap();
        let b = Psd::from_diag(&[2.0, 2.0]).unwrap();
        let it = harmonic_power_iterate(&a, &b, 2.0, &tol()).unwrap();
        let h = |x: f64, y: f64| (2.0 / (x.powi(-2) + y.powi(-2))).sqrt();
        assert!(it.max_diff(&CMatrix::from_diag_real(&[h(3.0, 2.0), h(1.0, 2.0)])) < 1e-12);
    }
}
