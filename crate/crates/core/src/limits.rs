//! Closed-form limits of `Φ(A^p)^{1/p}`, `Φ(A^{-p})^{-1/p}` and the
//! spectral-order supremum and infimum.

use crate::error::{Error, Result};
use crate::linalg::eigen::eig_hermitian;
use crate::linalg::gram_schmidt::Frame;
use crate::linalg::lattice::{projection_meet, range_of};
use crate::linalg::matrix::norm;
use crate::linalg::spectral::SpectralDecomposition;
use crate::linalg::{group_spectrum, CMatrix, Projection, Psd, Tolerances, C64};
use crate::logdomain::neg_map_root;
use crate::maps::PositiveMapSpec;

/// `lim (K A^p K*)^{1/p} = Σ_k a_{l_k} |u_k⟩⟨u_k|`.
#[derive(Debug, Clone)]
pub struct CongruenceLimitResult {
    pub limit: Psd,
    /// Zero-based positions in the descending eigenvalue list of `A`.
    pub selected_indices: Vec<usize>,
    pub selected_values: Vec<f64>,
    pub orthonormal_frame: Vec<Vec<C64>>,
    /// Limit eigenvalues `a_{l_1}, …, a_{l_m}` padded with zeros.
    pub predicted_spectrum: Vec<f64>,
}

/// Limit of `Φ(A^p)^{1/p}` as `Σ a_k P_{M_k}`.
#[derive(Debug, Clone)]
pub struct MapLimitResult {
    pub limit: Psd,
    pub coefficients: Vec<f64>,
    pub projections: Vec<Projection>,
}

/// Predicted limit spectrum and whether the selection kept every vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedEigenvalues {
    pub values: Vec<f64>,
    /// `{K v_i : a_i > 0}` is linearly independent.
    pub independent: bool,
}

fn check_cols(k: &CMatrix, a: &Psd) -> Result<()> {
    if k.cols() != a.dim() {
        return Err(Error::dims(
            format!("K with {} columns", a.dim()),
            format!("{}x{}", k.rows(), k.cols()),
        ));
    }
    Ok(())
}

/// Eigen-clusters of `A` in descending order, the kernel last.
fn clusters_with_kernel(sd: &SpectralDecomposition) -> Vec<(f64, &[Vec<C64>])> {
    let mut out: Vec<(f64, &[Vec<C64>])> = sd
        .values
        .iter()
        .zip(&sd.bases)
        .map(|(&v, b)| (v, b.as_slice()))
        .collect();
    if !sd.kernel_basis.is_empty() {
        out.push((0.0, sd.kernel_basis.as_slice()));
    }
    out
}

struct Selected {
    indices: Vec<usize>,
    values: Vec<f64>,
    frame: Vec<Vec<C64>>,
    positive_total: usize,
    positive_selected: usize,
}

/// Gram–Schmidt over `K v_1, …, K v_n`, one eigen-cluster at a time, so the
/// selected subspace per cluster does not depend on the eigenbasis chosen
/// inside degenerate eigenspaces.
fn select(k: &CMatrix, a: &Psd, tol: &Tolerances) -> Result<Selected> {
    check_cols(k, a)?;
    let sd = group_spectrum(a, tol)?;
    let clusters = clusters_with_kernel(&sd);
    let images: Vec<Vec<Vec<C64>>> = clusters
        .iter()
        .map(|(_, basis)| basis.iter().map(|v| k.mul_vec(v)).collect())
        .collect();
    let max_norm = images.iter().flatten().map(|v| norm(v)).fold(0.0, f64::max);
    let threshold = tol.rank * max_norm.max(tol.abs);

    let mut frame = Frame::default();
    let mut sel = Selected {
        indices: vec![],
        values: vec![],
        frame: vec![],
        positive_total: 0,
        positive_selected: 0,
    };
    let mut index = 0;
    for ((value, _), imgs) in clusters.iter().zip(&images) {
        for img in imgs {
            let positive = *value > 0.0;
            if positive {
                sel.positive_total += 1;
            }
            if frame.vectors.len() < k.rows() && frame.try_push(img, threshold) {
                sel.indices.push(index);
                sel.values.push(*value);
                if positive {
                    sel.positive_selected += 1;
                }
            }
            index += 1;
        }
    }
    sel.frame = frame.vectors;
    Ok(sel)
}

pub fn congruence_limit(k: &CMatrix, a: &Psd, tol: &Tolerances) -> Result<CongruenceLimitResult> {
    let sel = select(k, a, tol)?;
    let out = k.rows();
    let mut limit = CMatrix::zeros(out, out);
    for (&v, u) in sel.values.iter().zip(&sel.frame) {
        if v > 0.0 {
            limit = &limit + &CMatrix::outer(u).scale(v);
        }
    }
    let mut predicted = sel.values.clone();
    predicted.resize(out, 0.0);
    Ok(CongruenceLimitResult {
        limit: Psd::from_raw(limit),
        selected_indices: sel.indices,
        selected_values: sel.values,
        orthonormal_frame: sel.frame,
        predicted_spectrum: predicted,
    })
}

/// Limit spectrum of `(K A^p K*)^{1/p}` plus the independence criterion.
///
/// For singular `A` the flag only concerns the positive eigenvalues.
pub fn predicted_eigenvalues(k: &CMatrix, a: &Psd, tol: &Tolerances) -> Result<PredictedEigenvalues> {
    let sel = select(k, a, tol)?;
    let mut values = sel.values;
    values.resize(k.rows(), 0.0);
    Ok(PredictedEigenvalues {
        values,
        independent: sel.positive_total > 0 && sel.positive_selected == sel.positive_total,
    })
}

fn map_scale(phi: &PositiveMapSpec) -> Result<f64> {
    let w = phi.apply_raw(&CMatrix::identity(phi.in_dim()))?;
    Ok(eig_hermitian(&crate::linalg::Hermitian::from_raw(w))?
        .values
        .first()
        .copied()
        .unwrap_or(0.0))
}

fn check_map_input(phi: &PositiveMapSpec, a: &Psd) -> Result<()> {
    if phi.in_dim() != a.dim() {
        return Err(Error::dims(
            format!("{0}x{0} input", phi.in_dim()),
            format!("{0}x{0}", a.dim()),
        ));
    }
    Ok(())
}

/// Range projection of `Φ(Σ P_k)` for a set of spectral projections.
fn image_range(
    phi: &PositiveMapSpec,
    sd: &SpectralDecomposition,
    ks: std::ops::Range<usize>,
    scale: f64,
    tol: &Tolerances,
) -> Result<Projection> {
    let n = sd.dim();
    let sum = sd.projections[ks]
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, p| &acc + p.matrix());
    range_of(&phi.apply_raw(&sum)?, tol.rank, scale)
}

fn assemble(coefficients: Vec<f64>, projections: Vec<Projection>, out: usize) -> MapLimitResult {
    let limit = coefficients
        .iter()
        .zip(&projections)
        .fold(CMatrix::zeros(out, out), |acc, (&a, p)| &acc + &p.scale(a));
    MapLimitResult {
        limit: Psd::from_raw(limit),
        coefficients,
        projections,
    }
}

fn difference(bigger: &Projection, smaller: &Projection) -> Projection {
    let rank = bigger.rank().saturating_sub(smaller.rank());
    Projection::from_raw_with_rank(bigger.matrix() - smaller.matrix(), rank)
}

/// `lim Φ(A^p)^{1/p} = Σ a_k (F_k − F_{k−1})` with
/// `F_k = ran Φ(P_1 + … + P_k)`.
pub fn map_limit(phi: &PositiveMapSpec, a: &Psd, tol: &Tolerances) -> Result<MapLimitResult> {
    check_map_input(phi, a)?;
    let sd = group_spectrum(a, tol)?;
    let scale = map_scale(phi)?;
    let out = phi.out_dim();
    let mut prev = Projection::zero(out);
    let mut projections = Vec::with_capacity(sd.len());
    for k in 0..sd.len() {
        let f = image_range(phi, &sd, 0..k + 1, scale, tol)?;
        projections.push(difference(&f, &prev));
        prev = f;
    }
    Ok(assemble(sd.values.clone(), projections, out))
}

/// `lim Φ(A^{-p})^{-1/p} = Σ a_k (F̃_k − F̃_{k+1})` with
/// `F̃_k = ran Φ(P_k + … + P_m)`, inverses in the generalized sense.
pub fn neg_map_limit(phi: &PositiveMapSpec, a: &Psd, tol: &Tolerances) -> Result<MapLimitResult> {
    check_map_input(phi, a)?;
    let sd = group_spectrum(a, tol)?;
    let scale = map_scale(phi)?;
    let out = phi.out_dim();
    let m = sd.len();
    let mut next = Projection::zero(out);
    let mut projections = vec![Projection::zero(out); m];
    for k in (0..m).rev() {
        let f = image_range(phi, &sd, k..m, scale, tol)?;
        projections[k] = difference(&f, &next);
        next = f;
    }
    Ok(assemble(sd.values.clone(), projections, out))
}

/// Outcome of the `ε ↘ 0` regularized negative-power evaluation.
#[derive(Debug, Clone)]
pub struct EpsilonLimit {
    pub value: Psd,
    /// Last `ε` used.
    pub epsilon: f64,
    /// `‖X_{ε_k} − X_{ε_{k−1}}‖` at the stopping point.
    pub cauchy_delta: f64,
    /// Iterates decreased (Loewner, within tolerance) at every step.
    pub monotone: bool,
}

/// `lim_{ε↘0} Φ((A + εI)^{-p})^{-1/p}` along `ε_k = 10^{-k}`, `k = 1..12`,
/// stopping once successive iterates differ by at most `1e-9`.
pub fn epsilon_neg_limit(phi: &PositiveMapSpec, a: &Psd, p: f64, tol: &Tolerances) -> Result<EpsilonLimit> {
    check_map_input(phi, a)?;
    if p < 1.0 {
        return Err(Error::InvalidGrid(format!("p must be at least 1, got {p}")));
    }
    let ops = phi.kraus_operators()?;
    let eig = eig_hermitian(a.hermitian())?;
    let mut prev: Option<CMatrix> = None;
    let mut monotone = true;
    let mut delta = f64::INFINITY;
    let mut eps = 1.0;
    for _ in 1..=12 {
        eps /= 10.0;
        let x = neg_map_root(&ops, &eig, p, eps, tol.zero)?.to_matrix();
        if let Some(prev) = &prev {
            let diff = prev - &x;
            delta = diff.frobenius_norm();
            let min = eig_hermitian(&crate::linalg::Hermitian::from_raw(diff))?
                .values
                .last()
                .copied()
                .unwrap_or(0.0);
            if min < -tol.psd * prev.max_abs().max(1.0) {
                monotone = false;
            }
        }
        let done = delta <= 1e-9;
        prev = Some(x);
        if done {
            break;
        }
    }
    if delta > 1e-9 {
        return Err(Error::NoConvergence(format!(
            "epsilon schedule ended with successive difference {delta:e}"
        )));
    }
    Ok(EpsilonLimit {
        value: Psd::from_raw(prev.expect("schedule is non-empty")),
        epsilon: eps,
        cauchy_delta: delta,
        monotone,
    })
}

fn check_pair(a: &Psd, b: &Psd) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dims(a.dim(), b.dim()));
    }
    Ok(())
}

/// Supremum in the spectral order, as the limit of the block-average map on
/// `A ⊕ B`.
pub fn spectral_sup(a: &Psd, b: &Psd, tol: &Tolerances) -> Result<Psd> {
    check_pair(a, b)?;
    let phi = PositiveMapSpec::block_average(a.dim());
    Ok(map_limit(&phi, &a.direct_sum(b), tol)?.limit)
}

/// Infimum in the spectral order: levels `c_k` from both spectra,
/// `G_k = E_{[c_k,∞)}(A) ∧ E_{[c_k,∞)}(B)` and `Σ c_k (G_k − G_{k−1})`.
pub fn spectral_inf(a: &Psd, b: &Psd, tol: &Tolerances) -> Result<Psd> {
    check_pair(a, b)?;
    let n = a.dim();
    let sa = group_spectrum(a, tol)?;
    let sb = group_spectrum(b, tol)?;
    let mut levels: Vec<f64> = sa.values.iter().chain(&sb.values).copied().collect();
    levels.sort_by(|x, y| y.total_cmp(x));
    let top = levels.first().copied().unwrap_or(0.0);
    let gap = tol.group * top.max(1.0);
    levels.dedup_by(|x, y| (*y - *x) <= gap);

    let upper = |sd: &SpectralDecomposition, c: f64| -> Result<Projection> {
        let m = sd
            .values
            .iter()
            .zip(&sd.projections)
            .filter(|(&v, _)| v >= c - gap)
            .fold(CMatrix::zeros(n, n), |acc, (_, p)| &acc + p.matrix());
        range_of(&m, 0.5, 1.0)
    };

    let mut prev = Projection::zero(n);
    let mut c_mat = CMatrix::zeros(n, n);
    for &c in &levels {
        let g = projection_meet(&upper(&sa, c)?, &upper(&sb, c)?, tol)?;
        c_mat = &c_mat + &(g.matrix() - prev.matrix()).scale(c);
        prev = g;
    }
    Ok(Psd::from_raw(c_mat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::diagonal_to_lines_map;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_congruence_returns_a() {
        let a = Psd::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]).unwrap();
        let r = congruence_limit(&CMatrix::identity(2), &a, &tol()).unwrap();
        assert!(r.limit.max_diff(&a) < 1e-12);
        let e = eig_hermitian(a.hermitian()).unwrap();
        for (x, y) in r.predicted_spectrum.iter().zip(&e.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn row_vector_against_projection() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let k = CMatrix::from_real_rows(&[&[h, h]]);
        let a = Psd::from_diag(&[1.0, 0.0]).unwrap();
        let r = congruence_limit(&k, &a, &tol()).unwrap();
        assert!((r.limit[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coordinate_projection_picks_top_direction() {
        // v1 = (1,1)/√2 with a1 = 2, v2 = (1,-1)/√2 with a2 = 1
        let a = Psd::from_real_rows(&[&[1.5, 0.5], &[0.5, 1.5]]).unwrap();
        let k = CMatrix::from_diag_real(&[1.0, 0.0]);
        let r = congruence_limit(&k, &a, &tol()).unwrap();
        assert!(r.limit.max_diff(&CMatrix::from_diag_real(&[2.0, 0.0])) < 1e-12);
        assert_eq!(r.predicted_spectrum, vec![2.0, 0.0]);
        assert!((r.orthonormal_frame[0][0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independence_flag() {
        let a = Psd::from_diag(&[3.0, 2.0, 1.0]).unwrap();
        let full = predicted_eigenvalues(&CMatrix::identity(3), &a, &tol()).unwrap();
        assert!(full.independent);
        assert_eq!(full.values, vec![3.0, 2.0, 1.0]);
        let zero = predicted_eigenvalues(&CMatrix::zeros(3, 3), &a, &tol()).unwrap();
        assert!(!zero.independent);
        assert_eq!(zero.values, vec![0.0; 3]);
        let rank_one = CMatrix::from_real_rows(&[&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0], &[0.0, 0.0, 0.0]]);
        let r = predicted_eigenvalues(&rank_one, &a, &tol()).unwrap();
        assert_eq!(r.values.iter().filter(|&&v| v > 0.0).count(), 1);
    }

    #[test]
    fn lines_map_limits() {
        let phi = diagonal_to_lines_map();
        let a = Psd::from_diag(&[2.0, 1.0]).unwrap();
        let pos = map_limit(&phi, &a, &tol()).unwrap();
        assert!(pos.limit.max_diff(&CMatrix::from_diag_real(&[2.0, 1.0])) < 1e-10);
        let neg = neg_map_limit(&phi, &a, &tol()).unwrap();
        let expected = CMatrix::from_real_rows(&[&[1.5, -0.5], &[-0.5, 1.5]]);
        assert!(neg.limit.max_diff(&expected) < 1e-10);
    }

    #[test]
    fn unitary_congruence_negative_limit() {
        let (c, s) = (0.6, 0.8);
        let u = CMatrix::from_real_rows(&[&[c, -s], &[s, c]]);
        let a = Psd::from_diag(&[3.0, 1.0]).unwrap();
        let phi = PositiveMapSpec::congruence(u.clone()).unwrap();
        let neg = neg_map_limit(&phi, &a, &tol()).unwrap();
        assert!(neg.limit.max_diff(&a.conjugate_by(&u)) < 1e-10);
    }

    #[test]
    fn state_negative_limit_and_epsilon_value() {
        let rho = Psd::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let phi = PositiveMapSpec::trace_state(rho).unwrap();
        let a = Psd::from_diag(&[1.0, 0.0]).unwrap();
        let neg = neg_map_limit(&phi, &a, &tol()).unwrap();
        assert!((neg.limit[(0, 0)].re - 1.0).abs() < 1e-10);
        for p in [1.0, 2.0, 4.0, 16.0] {
            let e = epsilon_neg_limit(&phi, &a, p, &tol()).unwrap();
            assert!(e.value[(0, 0)].re.abs() < 1e-8, "p = {p}");
            assert!(e.monotone);
        }
    }

    #[test]
    fn epsilon_limit_matches_inverse_congruence_formula() {
        let (a_, b_, c_, d_) = (
            C64::new(1.0, 0.5),
            C64::new(0.3, 0.0),
            C64::new(-0.4, 0.2),
            C64::new(2.0, -0.1),
        );
        let k = CMatrix::from_vec(2, 2, vec![a_, b_, c_, d_]).unwrap();
        let phi = PositiveMapSpec::congruence(k).unwrap();
        let a = Psd::from_diag(&[1.0, 0.0]).unwrap();
        let p = 2.0;
        let e = epsilon_neg_limit(&phi, &a, p, &tol()).unwrap();
        let det = (a_ * d_ - b_ * c_).norm();
        let nb = b_.norm_sqr() + d_.norm_sqr();
        let pref = 1.0 / (det.powf(2.0 / p) * nb.powf(1.0 - 1.0 / p));
        let expected = CMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(d_.norm_sqr(), 0.0),
                -b_ * d_.conj(),
                -b_.conj() * d_,
                C64::new(b_.norm_sqr(), 0.0),
            ],
        )
        .unwrap()
        .scale(pref);
        assert!(e.value.max_diff(&expected) < 1e-8);
    }

    #[test]
    fn sup_and_inf_of_commuting_pair() {
        let a = Psd::from_diag(&[2.0, 1.0]).unwrap();
        let b = Psd::from_diag(&[1.0, 3.0]).unwrap();
        let sup = spectral_sup(&a, &b, &tol()).unwrap();
        assert!(sup.max_diff(&CMatrix::from_diag_real(&[2.0, 3.0])) < 1e-12);
        let inf = spectral_inf(&a, &b, &tol()).unwrap();
        assert!(inf.max_diff(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn sup_of_two_lines_is_identity() {
        let a = Psd::from_diag(&[1.0, 0.0]).unwrap();
        let b = Psd::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(spectral_sup(&a, &b, &tol()).unwrap().max_diff(&CMatrix::identity(2)) < 1e-10);
        assert!(spectral_inf(&a, &b, &tol()).unwrap().max_abs() < 1e-10);
        assert!(spectral_sup(&b, &b, &tol()).unwrap().max_diff(&b) < 1e-10);
        assert!(spectral_inf(&b, &b, &tol()).unwrap().max_diff(&b) < 1e-10);
    }
}
