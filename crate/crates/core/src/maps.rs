//! Positive linear maps `Φ: M_n → M_n′` in closed, serializable forms.

use crate::error::{Error, Result};
use crate::linalg::eigen::eigh;
use crate::linalg::lattice::range_of;
use crate::linalg::{CMatrix, Hermitian, Psd, C64};

/// The shape of a positive map.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    /// `X ↦ Σ K_i X K_i*`.
    Kraus(Vec<CMatrix>),
    /// `X ↦ K X K*`.
    Congruence(CMatrix),
    /// `[[X11, X12], [X21, X22]] ↦ (X11 + X22) / 2` with `n×n` blocks.
    BlockAverage { n: usize },
    /// `X ↦ [Tr(ρ X)]`.
    TraceState(Psd),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMapSpec {
    kind: MapKind,
    in_dim: usize,
    out_dim: usize,
}

/// Result of [`PositiveMapSpec::is_unital`].
#[derive(Debug, Clone)]
pub struct UnitalCheck {
    pub unital: bool,
    /// `Φ(I)`.
    pub witness: Hermitian,
}

impl PositiveMapSpec {
    pub fn kraus(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidMap("kraus list is empty".into()))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        for (i, k) in ops.iter().enumerate() {
            if (k.rows(), k.cols()) != (out_dim, in_dim) {
                return Err(Error::InvalidMap(format!(
                    "operator {i} is {}x{}, expected {out_dim}x{in_dim}",
                    k.rows(),
                    k.cols()
                )));
            }
            if !k.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(PositiveMapSpec {
            kind: MapKind::Kraus(ops),
            in_dim,
            out_dim,
        })
    }

    pub fn congruence(k: CMatrix) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(PositiveMapSpec {
            in_dim: k.cols(),
            out_dim: k.rows(),
            kind: MapKind::Congruence(k),
        })
    }

    pub fn block_average(n: usize) -> Self {
        PositiveMapSpec {
            kind: MapKind::BlockAverage { n },
            in_dim: 2 * n,
            out_dim: n,
        }
    }

    /// The state `X ↦ Tr(ρX)`; `ρ` must be a density matrix.
    pub fn trace_state(rho: Psd) -> Result<Self> {
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::NotDensity(format!("trace is {tr}, expected 1")));
        }
        Ok(PositiveMapSpec {
            in_dim: rho.dim(),
            out_dim: 1,
            kind: MapKind::TraceState(rho),
        })
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Kraus operators (`n′×n`) realizing the map.
    pub fn kraus_operators(&self) -> Result<Vec<CMatrix>> {
        Ok(match &self.kind {
            MapKind::Kraus(ops) => ops.clone(),
            MapKind::Congruence(k) => vec![k.clone()],
            MapKind::BlockAverage { n } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let n = *n;
                let left = CMatrix::from_fn(n, 2 * n, |i, j| if i == j { C64::new(h, 0.0) } else { C64::new(0.0, 0.0) });
                let right = CMatrix::from_fn(n, 2 * n, |i, j| if j == i + n { C64::new(h, 0.0) } else { C64::new(0.0, 0.0) });
                vec![left, right]
            }
            MapKind::TraceState(rho) => {
                let (vals, v) = eigh(rho)?;
                let n = rho.dim();
                let mut ops: Vec<CMatrix> = vals
                    .iter()
                    .enumerate()
                    .filter(|(_, &mu)| mu > 0.0)
                    .map(|(k, &mu)| {
                        let s = mu.sqrt();
                        CMatrix::from_fn(1, n, |_, j| v[(j, k)].conj() * s)
                    })
                    .collect();
                if ops.is_empty() {
                    ops.push(CMatrix::zeros(1, n));
                }
                ops
            }
        })
    }

    fn check_input(&self, x: &CMatrix) -> Result<()> {
        if x.rows() != self.in_dim || x.cols() != self.in_dim {
            return Err(Error::dims(
                format!("{0}x{0}", self.in_dim),
                format!("{}x{}", x.rows(), x.cols()),
            ));
        }
        Ok(())
    }

    /// Evaluates `Φ(X)` on any square input of the right size.
    pub(crate) fn apply_raw(&self, x: &CMatrix) -> Result<CMatrix> {
        self.check_input(x)?;
        Ok(match &self.kind {
            MapKind::Kraus(ops) => {
                let mut acc = CMatrix::zeros(self.out_dim, self.out_dim);
                for k in ops {
                    acc = &acc + &(&(k * x) * &k.adjoint());
                }
                acc
            }
            MapKind::Congruence(k) => &(k * x) * &k.adjoint(),
            MapKind::BlockAverage { n } => {
                let n = *n;
                CMatrix::from_fn(n, n, |i, j| (x[(i, j)] + x[(i + n, j + n)]) * 0.5)
            }
            MapKind::TraceState(rho) => {
                let tr = (rho.matrix() * x).trace();
                CMatrix::from_fn(1, 1, |_, _| tr)
            }
        })
    }

    pub fn apply(&self, x: &Hermitian) -> Result<Hermitian> {
        Ok(Hermitian::from_raw(self.apply_raw(x)?))
    }

    /// `Φ` maps PSD matrices to PSD matrices, so no re-check is needed.
    pub fn apply_psd(&self, x: &Psd) -> Result<Psd> {
        Ok(Psd::from_raw(self.apply_raw(x)?))
    }

    pub fn is_unital(&self) -> Result<UnitalCheck> {
        let w = self.apply_raw(&CMatrix::identity(self.in_dim))?;
        let unital = self.in_dim > 0 && w.max_diff(&CMatrix::identity(self.out_dim)) <= 1e-10;
        Ok(UnitalCheck {
            unital,
            witness: Hermitian::from_raw(w),
        })
    }

    /// Restricts the output to `ran Φ(I)`, making the map strictly positive.
    pub fn support_compress(&self) -> Result<PositiveMapSpec> {
        let w = self.apply_raw(&CMatrix::identity(self.in_dim))?;
        let support = range_of(&w, 1e-9, 0.0)?;
        if support.rank() == 0 {
            return Err(Error::ZeroMap);
        }
        if support.rank() == self.out_dim {
            return Ok(self.clone());
        }
        let (vals, v) = eigh(&support)?;
        let r = support.rank();
        debug_assert!(vals[r - 1] > 0.5);
        let iso = CMatrix::from_fn(self.out_dim, r, |i, j| v[(i, j)]);
        let ops: Vec<CMatrix> = self
            .kraus_operators()?
            .iter()
            .map(|k| &iso.adjoint() * k)
            .collect();
        match &self.kind {
            MapKind::Congruence(_) => PositiveMapSpec::congruence(ops.into_iter().next().unwrap()),
            _ => PositiveMapSpec::kraus(ops),
        }
    }
}

/// `X ↦ a11 P1 + a22 Q1` on `M_2`: a non-unital map whose positive and
/// negative power limits are not Loewner ordered.
pub fn diagonal_to_lines_map() -> PositiveMapSpec {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let k1 = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let k2 = CMatrix::from_real_rows(&[&[0.0, h], &[0.0, h]]);
    PositiveMapSpec::kraus(vec![k1, k2]).expect("fixed operators are consistent")
}
