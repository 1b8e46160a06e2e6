//! Rényi relative entropies and their `α → 0` limits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::congruence_limit;
use crate::linalg::eigen::{eig_hermitian, eigh};
use crate::linalg::functions::support_power;
use crate::linalg::lattice::range_of;
use crate::linalg::{group_spectrum, CMatrix, Projection, Psd, Tolerances, C64};
use crate::logdomain::map_power_spectrum;

/// A positive semidefinite matrix of unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix(Psd);

impl DensityMatrix {
    pub fn new(m: Psd) -> Result<Self> {
        let t = m.trace();
        if (t.re - 1.0).abs() > 1e-10 {
            return Err(Error::NotDensity(format!("trace is {}", t.re)));
        }
        Ok(DensityMatrix(m))
    }

    /// Normalizes a nonzero PSD matrix to unit trace.
    pub fn normalized(m: Psd) -> Result<Self> {
        let t = m.trace().re;
        if !(t > 0.0) {
            return Err(Error::NotDensity("zero trace".into()));
        }
        Ok(DensityMatrix(Psd::from_raw(m.scale(1.0 / t))))
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        Self::new(Psd::from_diag(d)?)
    }

    pub fn psd(&self) -> &Psd {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn support(&self, tol: &Tolerances) -> Result<Projection> {
        range_of(&self.0, tol.rank, 0.0)
    }
}

impl std::ops::Deref for DensityMatrix {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        self.0.matrix()
    }
}

/// A divergence value, possibly `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Divergence::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Divergence::Finite(v) => Some(v),
            Divergence::Infinite => None,
        }
    }

    /// `−log q`, infinite for `q ≤ 0`.
    fn neg_log(q: f64) -> Self {
        if q > 0.0 {
            Divergence::Finite(-q.ln())
        } else {
            Divergence::Infinite
        }
    }

    /// `a ≤ b + slack` with `+∞` as the top element.
    pub fn le(&self, other: &Divergence, slack: f64) -> bool {
        match (self, other) {
            (_, Divergence::Infinite) => true,
            (Divergence::Infinite, Divergence::Finite(_)) => false,
            (Divergence::Finite(a), Divergence::Finite(b)) => *a <= *b + slack,
        }
    }
}

impl std::fmt::Display for Divergence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Divergence::Finite(v) => write!(f, "{v}"),
            Divergence::Infinite => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZeroLimitReport {
    pub d0: Divergence,
    pub d0_tilde: Divergence,
    pub q0_tilde: f64,
    pub witness_projection: Projection,
    pub commutes: bool,
    pub equality: bool,
}

fn check_pair(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dims(rho.dim(), sigma.dim()));
    }
    Ok(())
}

/// `(D_α, D̃_α)`, the traditional and the sandwiched Rényi divergence.
pub fn renyi_divergences(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    alpha: f64,
    tol: &Tolerances,
) -> Result<(Divergence, Divergence)> {
    check_pair(rho, sigma)?;
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::BadAlpha(alpha));
    }
    if alpha > 1.0 {
        let rs = rho.support(tol)?;
        let ss = sigma.support(tol)?;
        let leak = (ss.complement().matrix() * rs.matrix()).frobenius_norm();
        if leak > tol.rank {
            return Ok((Divergence::Infinite, Divergence::Infinite));
        }
    }
    let scale = 1.0 / (alpha - 1.0);
    let wrap = |q: f64| {
        if q > 0.0 {
            Divergence::Finite(scale * q.ln())
        } else {
            Divergence::Infinite
        }
    };
    let ra = support_power(rho, alpha, tol.zero)?;
    let sa = support_power(sigma, 1.0 - alpha, tol.zero)?;
    let q = (&ra * &sa).trace().re;

    let gamma = (1.0 - alpha) / (2.0 * alpha);
    let sg = support_power(sigma, gamma, tol.zero)?;
    let inner = &(&sg * rho) * &sg;
    let (vals, _) = eigh(&inner)?;
    let top = vals.first().copied().unwrap_or(0.0);
    let q_tilde: f64 = vals
        .iter()
        .filter(|&&v| v > tol.zero * top)
        .map(|v| v.powf(alpha))
        .sum();
    Ok((wrap(q), wrap(q_tilde)))
}

/// `D₀ = −log Tr ρ⁰σ` and `D̃₀ = −log Q̃₀`, where `Q̃₀` is attained at the
/// projection onto the σ-eigenvectors selected by Gram–Schmidt on `ρ⁰ v_i`.
pub fn zero_limits(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<ZeroLimitReport> {
    check_pair(rho, sigma)?;
    let n = rho.dim();
    let r0 = rho.support(tol)?;
    let d0 = Divergence::neg_log((r0.matrix() * sigma).trace().re);

    let sel = congruence_limit(r0.matrix(), sigma.psd(), tol)?;
    let sd = group_spectrum(sigma.psd(), tol)?;
    let basis: Vec<Vec<C64>> = sd.bases.iter().flatten().chain(&sd.kernel_basis).cloned().collect();
    let frame: Vec<Vec<C64>> = sel.selected_indices.iter().map(|&i| basis[i].clone()).collect();
    let witness = Projection::from_orthonormal(n, &frame);
    let q0_tilde = (witness.matrix() * sigma).trace().re.clamp(0.0, 1.0);
    let d0_tilde = Divergence::neg_log(q0_tilde);

    let commutes = r0.commutator(sigma).frobenius_norm() <= 1e-9;
    let equality = match (d0, d0_tilde) {
        (Divergence::Finite(a), Divergence::Finite(b)) => (a - b).abs() <= 1e-9,
        (Divergence::Infinite, Divergence::Infinite) => true,
        _ => false,
    };
    Ok(ZeroLimitReport {
        d0,
        d0_tilde,
        q0_tilde,
        witness_projection: witness,
        commutes,
        equality,
    })
}

/// Fixed, generic unitary used to break symmetry inside degenerate
/// eigenspaces.
fn generic_unitary(k: usize) -> CMatrix {
    let raw: Vec<Vec<C64>> = (0..k)
        .map(|j| {
            (0..k)
                .map(|i| {
                    let t = (i * 7 + j * 13 + 1) as f64;
                    C64::new((t * 1.618_033_988_7).sin(), (t * 2.718_281_828_4).cos())
                })
                .collect()
        })
        .collect();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(k);
    for mut v in raw {
        for b in &basis {
            let c: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let nrm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        basis.push(v.into_iter().map(|x| x / nrm).collect());
    }
    CMatrix::from_columns(k, &basis)
}

/// Exhaustive `max Tr(Pσ)` over projections `P` commuting with σ such that
/// `ρ⁰` is injective on `ran P`.
///
/// Every subset of a σ-eigenbasis is tried; inside degenerate eigenspaces
/// the basis is rotated generically, so a subset of a given size realizes
/// the largest admissible rank there.
pub fn q0_brute(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    check_pair(rho, sigma)?;
    let n = rho.dim();
    if n > 6 {
        return Err(Error::TooLarge { n, max: 6 });
    }
    let r0 = rho.support(tol)?;
    let (vals, vecs) = eigh(sigma)?;
    let top = vals.first().copied().unwrap_or(0.0).max(1.0);
    // rotate inside clusters
    let mut basis = vecs.clone();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end - 1] - vals[end] <= tol.group * top {
            end += 1;
        }
        if end - start > 1 {
            let u = generic_unitary(end - start);
            let block: Vec<usize> = (start..end).collect();
            let rotated = &vecs.select(&(0..n).collect::<Vec<_>>(), &block) * &u;
            for (c, col) in block.iter().zip(rotated.columns()) {
                basis.set_column(*c, &col);
            }
        }
        start = end;
    }
    let images: Vec<Vec<C64>> = basis.columns().iter().map(|v| r0.mul_vec(v)).collect();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let value: f64 = idx.iter().map(|&i| vals[i].max(0.0)).sum();
        if value <= best {
            continue;
        }
        let gram = CMatrix::from_fn(idx.len(), idx.len(), |a, b| {
            images[idx[a]].iter().zip(&images[idx[b]]).map(|(x, y)| x.conj() * y).sum()
        });
        let admissible = idx.is_empty() || eigh(&gram)?.0.last().copied().unwrap_or(0.0) > 1e-12;
        if admissible {
            best = value;
        }
    }
    Ok(best)
}

/// `Tr(ρ⁰σ^pρ⁰)^{1/p}` along an increasing grid of `p > 0`.
pub fn alt_trace_monotone(
    support: &Projection,
    sigma: &DensityMatrix,
    p_grid: &[f64],
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    if support.dim() != sigma.dim() {
        return Err(Error::dims(support.dim(), sigma.dim()));
    }
    if p_grid.len() < 2 {
        return Err(Error::InvalidGrid("need at least two grid points".into()));
    }
    if p_grid.iter().any(|p| !(*p > 0.0) || !p.is_finite()) || p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be positive and strictly increasing".into()));
    }
    let eig = eig_hermitian(sigma.psd().hermitian())?;
    let ops = [support.matrix().clone()];
    p_grid
        .iter()
        .map(|&p| {
            let s = map_power_spectrum(&ops, &eig, p, 0.0, tol.zero)?.root(p);
            Ok(s.logs.iter().map(|l| l.exp()).sum())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn pure(v: &[f64]) -> DensityMatrix {
        let c: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        DensityMatrix::normalized(Psd::from_raw(CMatrix::outer(&c))).unwrap()
    }

    #[test]
    fn identical_states_have_zero_divergence() {
        let r = DensityMatrix::from_diag(&[0.6, 0.4]).unwrap();
        for a in [0.5, 2.0, 3.0] {
            let (d, dt) = renyi_divergences(&r, &r, a, &tol()).unwrap();
            assert!(d.finite().unwrap().abs() < 1e-12 && dt.finite().unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn commuting_order_two() {
        let r = DensityMatrix::from_diag(&[0.5, 0.5]).unwrap();
        let s = DensityMatrix::from_diag(&[0.75, 0.25]).unwrap();
        let expected: f64 = (0.25 / 0.75 + 0.25 / 0.25f64).ln();
        let (d, dt) = renyi_divergences(&r, &s, 2.0, &tol()).unwrap();
        assert!((d.finite().unwrap() - expected).abs() < 1e-12);
        assert!((dt.finite().unwrap() - expected).abs() < 1e-12);
        assert!((expected - (4.0f64 / 3.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn unsupported_state_is_infinite_above_one() {
        let r = DensityMatrix::from_diag(&[0.5, 0.5]).unwrap();
        let s = DensityMatrix::from_diag(&[1.0, 0.0]).unwrap();
        let (d, dt) = renyi_divergences(&r, &s, 2.0, &tol()).unwrap();
        assert!(d.is_infinite() && dt.is_infinite());
        assert!(matches!(renyi_divergences(&r, &s, 1.0, &tol()), Err(Error::BadAlpha(_))));
        assert!(matches!(renyi_divergences(&r, &s, -0.5, &tol()), Err(Error::BadAlpha(_))));
    }

    #[test]
    fn zero_limit_fixtures() {
        let s = DensityMatrix::from_diag(&[0.75, 0.25]).unwrap();
        let full = DensityMatrix::from_diag(&[0.3, 0.7]).unwrap();
        let rep = zero_limits(&full, &s, &tol()).unwrap();
        assert!((rep.q0_tilde - 1.0).abs() < 1e-12 && rep.commutes && rep.equality);

        let rep = zero_limits(&pure(&[1.0, 0.0]), &s, &tol()).unwrap();
        assert!((rep.q0_tilde - 0.75).abs() < 1e-12);
        assert!((rep.d0.finite().unwrap() + 0.75f64.ln()).abs() < 1e-12);
        assert!(rep.equality && rep.commutes);

        let w = pure(&[1.0, 1.0]);
        let rep = zero_limits(&w, &s, &tol()).unwrap();
        assert!((rep.d0.finite().unwrap() + 0.5f64.ln()).abs() < 1e-12);
        assert!((rep.q0_tilde - 0.75).abs() < 1e-12);
        assert!(rep.d0_tilde.le(&rep.d0, 0.0) && !rep.equality && !rep.commutes);
        assert!((q0_brute(&w, &s, &tol()).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn brute_force_fixtures() {
        let s = DensityMatrix::from_diag(&[0.75, 0.25]).unwrap();
        assert!((q0_brute(&DensityMatrix::from_diag(&[0.5, 0.5]).unwrap(), &s, &tol()).unwrap() - 1.0).abs() < 1e-12);
        // σ singular: the kernel direction adds nothing
        let s = DensityMatrix::from_diag(&[0.6, 0.4, 0.0]).unwrap();
        let r = pure(&[1.0, 0.0, 1.0]);
        assert!((q0_brute(&r, &s, &tol()).unwrap() - 0.6).abs() < 1e-12);
        assert!((zero_limits(&r, &s, &tol()).unwrap().q0_tilde - 0.6).abs() < 1e-12);
        let big = DensityMatrix::from_diag(&[1.0 / 7.0; 7]).unwrap();
        assert!(matches!(q0_brute(&big, &big, &tol()), Err(Error::TooLarge { n: 7, max: 6 })));
    }

    #[test]
    fn degenerate_sigma_counts_rank() {
        // ρ⁰ of rank 2 inside a 3-fold degenerate σ eigenspace
        let s = DensityMatrix::from_diag(&[0.3, 0.3, 0.3, 0.1]).unwrap();
        let r = DensityMatrix::normalized(Psd::from_raw(CMatrix::from_real_rows(&[
            &[1.0, 0.5, 0.0, 0.0],
            &[0.5, 1.0, 0.5, 0.0],
            &[0.0, 0.5, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ])))
        .unwrap();
        let r = DensityMatrix::normalized(Psd::from_raw(
            (r.support(&tol()).unwrap().matrix() * &CMatrix::identity(4)).scale(1.0),
        ))
        .unwrap();
        let brute = q0_brute(&r, &s, &tol()).unwrap();
        assert!((brute - 0.9).abs() < 1e-12, "{brute}");
        assert!((zero_limits(&r, &s, &tol()).unwrap().q0_tilde - brute).abs() < 1e-9);
    }

    #[test]
    fn alt_sequence() {
        let s = DensityMatrix::from_diag(&[0.75, 0.25]).unwrap();
        let w = pure(&[1.0, 1.0]).support(&tol()).unwrap();
        let grid: Vec<f64> = (0..13).map(|k| 2f64.powi(k)).collect();
        let v = alt_trace_monotone(&w, &s, &grid, &tol()).unwrap();
        assert!((v[0] - 0.5).abs() < 1e-12);
        assert!(v.windows(2).all(|x| x[1] > x[0]));
        assert!((v.last().unwrap() - 0.75).abs() < 1e-3);
        let e1 = pure(&[1.0, 0.0]).support(&tol()).unwrap();
        let v = alt_trace_monotone(&e1, &s, &grid, &tol()).unwrap();
        assert!(v.iter().all(|x| (x - 0.75).abs() < 1e-12));
        assert!(alt_trace_monotone(&e1, &s, &[1.0], &tol()).is_err());
    }
}
