//! JSON formats for matrices, positive maps and reports.
//!
//! A matrix is `{"n": rows, "m": cols, "re": [[..]], "im": [[..]]}` in row
//! major order; `m` is omitted for square matrices and `im` when the matrix
//! is real. A map is `{"kind": "kraus" | "congruence" | "block_average" |
//! "trace_state", ...}` with its matrices inline.

use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{CongruenceLimitResult, EpsilonLimit, MapLimitResult};
use crate::linalg::{CMatrix, Projection, Psd, C64};
use crate::maps::{MapKind, PositiveMapSpec};
use crate::renyi::{Divergence, ZeroLimitReport};
use crate::sweep::{ConvergenceReport, Monotone};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(a: &CMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..a.rows()).map(|i| (0..a.cols()).map(|j| f(&a[(i, j)])).collect()).collect()
        };
        let real = a.data().iter().all(|z| z.im.to_bits() == 0);
        MatrixJson {
            n: a.rows(),
            m: (a.rows() != a.cols()).then_some(a.cols()),
            re: rows(|z| z.re),
            im: if real { None } else { Some(rows(|z| z.im)) },
        }
    }

    /// Converts to a matrix; `location` names the file or field in errors.
    pub fn to_matrix(&self, location: &str) -> Result<CMatrix> {
        let (n, m) = (self.n, self.m.unwrap_or(self.n));
        let check = |rows: &Vec<Vec<f64>>, field: &str| -> Result<()> {
            if rows.len() != n {
                return Err(Error::input(
                    format!("{location}.{field}"),
                    format!("expected {n} rows, found {}", rows.len()),
                ));
            }
            if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
                return Err(Error::input(
                    format!("{location}.{field}[{i}]"),
                    format!("expected {m} entries, found {}", r.len()),
                ));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        let a = CMatrix::from_fn(n, m, |i, j| {
            C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        });
        if !a.is_finite() {
            return Err(Error::input(location, "non-finite entry"));
        }
        Ok(a)
    }
}

impl From<&CMatrix> for MatrixJson {
    fn from(a: &CMatrix) -> Self {
        Self::from_matrix(a)
    }
}

/// On-disk form of a [`PositiveMapSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapJson {
    Kraus { ops: Vec<MatrixJson> },
    Congruence { k: MatrixJson },
    BlockAverage { n: usize },
    TraceState { rho: MatrixJson },
}

impl MapJson {
    pub fn from_spec(phi: &PositiveMapSpec) -> Self {
        match phi.kind() {
            MapKind::Kraus(ops) => MapJson::Kraus {
                ops: ops.iter().map(MatrixJson::from_matrix).collect(),
            },
            MapKind::Congruence(k) => MapJson::Congruence { k: k.into() },
            MapKind::BlockAverage { n } => MapJson::BlockAverage { n: *n },
            MapKind::TraceState(rho) => MapJson::TraceState { rho: rho.matrix().into() },
        }
    }

    pub fn to_spec(&self, location: &str) -> Result<PositiveMapSpec> {
        let wrap = |e: Error| match e {
            Error::Input { .. } => e,
            other => Error::input(location, other),
        };
        match self {
            MapJson::Kraus { ops } => {
                let ops = ops
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.to_matrix(&format!("{location}.ops[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                PositiveMapSpec::kraus(ops).map_err(wrap)
            }
            MapJson::Congruence { k } => {
                PositiveMapSpec::congruence(k.to_matrix(&format!("{location}.k"))?).map_err(wrap)
            }
            MapJson::BlockAverage { n } => Ok(PositiveMapSpec::block_average(*n)),
            MapJson::TraceState { rho } => {
                let m = rho.to_matrix(&format!("{location}.rho"))?;
                let psd = Psd::new(m).map_err(|e| Error::input(format!("{location}.rho"), e))?;
                PositiveMapSpec::trace_state(psd).map_err(wrap)
            }
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let loc = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::input(&loc, e))?;
    serde_json::from_str(&text).map_err(|e| Error::input(&loc, e))
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let m: MatrixJson = read_json(path)?;
    m.to_matrix(&path.display().to_string())
}

/// Reads a PSD matrix; validation failures are reported against the file.
pub fn read_psd(path: &Path) -> Result<Psd> {
    let m = read_matrix(path)?;
    Psd::new(m).map_err(|e| Error::input(path.display(), e))
}

pub fn read_projection(path: &Path) -> Result<Projection> {
    let m = read_matrix(path)?;
    Projection::new(m).map_err(|e| Error::input(path.display(), e))
}

pub fn read_map(path: &Path) -> Result<PositiveMapSpec> {
    let m: MapJson = read_json(path)?;
    m.to_spec(&path.display().to_string())
}

pub fn write_matrix(path: &Path, a: &CMatrix) -> Result<()> {
    let text = serde_json::to_string_pretty(&MatrixJson::from_matrix(a)).expect("matrices serialize");
    std::fs::write(path, text).map_err(|e| Error::input(path.display(), e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceLimitJson {
    pub limit: MatrixJson,
    pub selected_indices: Vec<usize>,
    pub selected_values: Vec<f64>,
    pub predicted_spectrum: Vec<f64>,
}

impl From<&CongruenceLimitResult> for CongruenceLimitJson {
    fn from(r: &CongruenceLimitResult) -> Self {
        CongruenceLimitJson {
            limit: r.limit.matrix().into(),
            selected_indices: r.selected_indices.clone(),
            selected_values: r.selected_values.clone(),
            predicted_spectrum: r.predicted_spectrum.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapLimitJson {
    pub limit: MatrixJson,
    pub coefficients: Vec<f64>,
    pub projections: Vec<MatrixJson>,
}

impl From<&MapLimitResult> for MapLimitJson {
    fn from(r: &MapLimitResult) -> Self {
        MapLimitJson {
            limit: r.limit.matrix().into(),
            coefficients: r.coefficients.clone(),
            projections: r.projections.iter().map(|p| p.matrix().into()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonLimitJson {
    pub value: MatrixJson,
    pub epsilon: f64,
    pub cauchy_delta: f64,
    pub monotone: bool,
}

impl From<&EpsilonLimit> for EpsilonLimitJson {
    fn from(r: &EpsilonLimit) -> Self {
        EpsilonLimitJson {
            value: r.value.matrix().into(),
            epsilon: r.epsilon,
            cauchy_delta: r.cauchy_delta,
            monotone: r.monotone,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroLimitJson {
    pub d0: Divergence,
    pub d0_tilde: Divergence,
    pub q0_tilde: f64,
    pub witness_projection: MatrixJson,
    pub commutes: bool,
    pub equality: bool,
}

impl From<&ZeroLimitReport> for ZeroLimitJson {
    fn from(r: &ZeroLimitReport) -> Self {
        ZeroLimitJson {
            d0: r.d0,
            d0_tilde: r.d0_tilde,
            q0_tilde: r.q0_tilde,
            witness_projection: r.witness_projection.matrix().into(),
            commutes: r.commutes,
            equality: r.equality,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceJson {
    pub p_grid: Vec<f64>,
    pub iterates: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<MatrixJson>,
    pub errors: Vec<f64>,
    pub eigenvalue_tracks: Vec<Vec<f64>>,
    pub monotone: Monotone,
    pub max_violation: f64,
    pub cauchy_delta: f64,
}

impl From<&ConvergenceReport> for ConvergenceJson {
    fn from(r: &ConvergenceReport) -> Self {
        ConvergenceJson {
            p_grid: r.p_grid.clone(),
            iterates: r.iterates.iter().map(MatrixJson::from_matrix).collect(),
            target: r.target.as_ref().map(MatrixJson::from_matrix),
            errors: r.errors.clone(),
            eigenvalue_tracks: r.eigenvalue_tracks.clone(),
            monotone: r.monotone,
            max_violation: r.max_violation,
            cauchy_delta: r.cauchy_delta,
        }
    }
}
