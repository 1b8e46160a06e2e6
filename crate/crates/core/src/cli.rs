//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{
    read_map, read_matrix, read_psd, CongruenceLimitJson, ConvergenceJson, MapLimitJson, MatrixJson, ZeroLimitJson,
};
use crate::limits::{congruence_limit, map_limit, neg_map_limit, spectral_inf, spectral_sup};
use crate::linalg::{CMatrix, Projection, Psd, Tolerances};
use crate::maps::{diagonal_to_lines_map, PositiveMapSpec};
use crate::means::{geometric_limit, mean_eval, MeanKind, MeanSpec};
use crate::renyi::{renyi_divergences, zero_limits, DensityMatrix, Divergence};
use crate::sweep::{dyadic_grid, sweep_map, sweep_mean, sweep_sandwich, ConvergenceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "kato", version, about = "Limits of (Φ(A^p))^{1/p} and (A^p σ B)^{1/p}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Relative rank tolerance for Gram–Schmidt and range projections.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,

    /// Relative tolerance for grouping equal eigenvalues.
    #[arg(long, global = true)]
    pub tol_group: Option<f64>,

    /// Largest p used by sweeps.
    #[arg(long, global = true, default_value_t = 4096.0)]
    pub p_max: f64,

    /// Weight of the mean (overrides the weight in --mean).
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long = "A", value_name = "FILE")]
    pub a: PathBuf,
    #[arg(long = "B", value_name = "FILE")]
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long, value_name = "FILE")]
    pub map: PathBuf,
    #[arg(long = "A", value_name = "FILE")]
    pub a: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Map,
    Mean,
    Sandwich,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// lim (K A^p K*)^{1/p}.
    Limit {
        #[arg(long = "K", value_name = "FILE")]
        k: PathBuf,
        #[arg(long = "A", value_name = "FILE")]
        a: PathBuf,
    },
    /// lim Φ(A^p)^{1/p}.
    MapLimit(MapArgs),
    /// lim Φ(A^{-p})^{-1/p}.
    NegLimit(MapArgs),
    /// Spectral-order supremum A ∨ B.
    Sup(PairArgs),
    /// Spectral-order infimum A ∧ B.
    Inf(PairArgs),
    /// A σ B for a mean given as name[:alpha].
    Mean {
        #[arg(long, value_name = "NAME[:ALPHA]")]
        mean: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// lim (A^p σ B)^{1/p}: closed form for geometric means, sweep estimate otherwise.
    MeanLimit {
        #[arg(long, value_name = "NAME[:ALPHA]", default_value = "geometric")]
        mean: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Rényi divergences and their α → 0 limits.
    Renyi {
        #[arg(long, value_name = "FILE")]
        rho: PathBuf,
        #[arg(long, value_name = "FILE")]
        sigma: PathBuf,
        /// Order of D_α and D̃_α (in addition to the α → 0 report).
        #[arg(long)]
        order: Option<f64>,
    },
    /// Numeric p-sweep on the dyadic grid up to --p-max.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        #[arg(long, value_name = "FILE")]
        map: Option<PathBuf>,
        #[arg(long, value_name = "NAME[:ALPHA]")]
        mean: Option<String>,
        #[arg(long = "A", value_name = "FILE")]
        a: PathBuf,
        #[arg(long = "B", value_name = "FILE")]
        b: Option<PathBuf>,
    },
    /// Runs the built-in reference fixtures.
    Selftest,
}

/// Parses `argv` (including the program name), runs the job and writes the
/// report. Returns the exit code: 0 success, 1 numeric failure, 2 bad input.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            if matches!(cli.command, Command::Selftest) && !text.contains("4/4") {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 1 for numeric failures, 2 for everything attributable to the input.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() {
        1
    } else {
        2
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances> {
    let mut t = Tolerances::default();
    for (name, v, slot) in [("--tol-rank", cli.tol_rank, &mut t.rank), ("--tol-group", cli.tol_group, &mut t.group)] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::input(name, format!("tolerance must be positive, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(t)
}

fn grid(cli: &Cli) -> Result<Vec<f64>> {
    if !(cli.p_max >= 1.0 && cli.p_max <= crate::sweep::MAX_P) {
        return Err(Error::input("--p-max", format!("must lie in [1, {}], got {}", crate::sweep::MAX_P, cli.p_max)));
    }
    Ok(dyadic_grid(cli.p_max))
}

fn mean_spec(cli: &Cli, text: &str) -> Result<MeanSpec> {
    let text = match cli.alpha {
        Some(a) => format!("{}:{a}", text.split(':').next().unwrap_or(text)),
        None => text.to_string(),
    };
    MeanSpec::parse(&text).map_err(|e| Error::input("--mean", e))
}

fn density(path: &Path) -> Result<DensityMatrix> {
    DensityMatrix::new(read_psd(path)?).map_err(|e| Error::input(path.display(), e))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn format_matrix(a: &CMatrix) -> String {
    let complex = a.data().iter().any(|z| z.im.abs() > 1e-14 * a.max_abs().max(1.0));
    let mut s = String::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let z = a[(i, j)];
            if complex {
                s.push_str(&format!(" {:>11.6}{:+.6}i", z.re, z.im));
            } else {
                s.push_str(&format!(" {:>11.6}", z.re));
            }
        }
        s.push('\n');
    }
    s
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ")
}

fn map_limit_table(title: &str, r: &crate::limits::MapLimitResult) -> String {
    format!(
        "{title}\n{}coefficients: [{}]\nprojection ranks: [{}]\n",
        format_matrix(&r.limit),
        list(&r.coefficients),
        r.projections.iter().map(|p| p.rank().to_string()).collect::<Vec<_>>().join(", ")
    )
}

fn report_table(title: &str, r: &ConvergenceReport) -> String {
    let mut s = format!("{title}\n{:>8} {:>14} {:>40}\n", "p", "error", "spectrum");
    for (k, p) in r.p_grid.iter().enumerate() {
        let e = r.errors.get(k).map_or("-".to_string(), |e| format!("{e:.3e}"));
        s.push_str(&format!("{p:>8} {e:>14} {:>40}\n", list(&r.eigenvalue_tracks[k])));
    }
    s.push_str(&format!(
        "monotone: {:?} (violation {:.3e}); cauchy delta {:.3e}\nlast iterate:\n{}",
        r.monotone,
        r.max_violation,
        r.cauchy_delta,
        format_matrix(r.last())
    ));
    s
}

#[derive(Serialize)]
struct MatrixReport {
    result: MatrixJson,
}

#[derive(Serialize)]
struct MeanLimitReport {
    mean: String,
    closed_form: bool,
    limit: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    cauchy_delta: Option<f64>,
}

#[derive(Serialize)]
struct RenyiReport {
    zero_limits: ZeroLimitJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_alpha: Option<Divergence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_tilde_alpha: Option<Divergence>,
}

#[derive(Serialize)]
struct SelftestReport {
    passed: usize,
    total: usize,
    fixtures: Vec<(String, bool)>,
}

fn execute(cli: &Cli) -> Result<String> {
    let tol = tolerances(cli)?;
    let table = cli.format == Format::Table;
    let matrix_out = |title: &str, m: &CMatrix| {
        if table {
            format!("{title}\n{}", format_matrix(m))
        } else {
            json(&MatrixReport { result: m.into() })
        }
    };
    Ok(match &cli.command {
        Command::Limit { k, a } => {
            let k = read_matrix(k)?;
            let a = read_psd(a)?;
            let r = congruence_limit(&k, &a, &tol).map_err(|e| input_or_numeric(e, "--K"))?;
            if table {
                format!(
                    "lim (K A^p K*)^(1/p)\n{}selected eigenvalue indices: {:?}\npredicted spectrum: [{}]\n",
                    format_matrix(&r.limit),
                    r.selected_indices,
                    list(&r.predicted_spectrum)
                )
            } else {
                json(&CongruenceLimitJson::from(&r))
            }
        }
        Command::MapLimit(m) | Command::NegLimit(m) => {
            let phi = read_map(&m.map)?;
            let a = read_psd(&m.a)?;
            let neg = matches!(cli.command, Command::NegLimit(_));
            let r = if neg { neg_map_limit(&phi, &a, &tol) } else { map_limit(&phi, &a, &tol) }
                .map_err(|e| input_or_numeric(e, "--map"))?;
            if table {
                map_limit_table(if neg { "lim Φ(A^-p)^(-1/p)" } else { "lim Φ(A^p)^(1/p)" }, &r)
            } else {
                json(&MapLimitJson::from(&r))
            }
        }
        Command::Sup(pair) | Command::Inf(pair) => {
            let (a, b) = (read_psd(&pair.a)?, read_psd(&pair.b)?);
            if matches!(cli.command, Command::Sup(_)) {
                matrix_out("A ∨ B", spectral_sup(&a, &b, &tol).map_err(|e| input_or_numeric(e, "--B"))?.matrix())
            } else {
                matrix_out("A ∧ B", spectral_inf(&a, &b, &tol).map_err(|e| input_or_numeric(e, "--B"))?.matrix())
            }
        }
        Command::Mean { mean, pair } => {
            let spec = mean_spec(cli, mean)?;
            let (a, b) = (read_psd(&pair.a)?, read_psd(&pair.b)?);
            let r = mean_eval(&spec, &a, &b, &tol).map_err(|e| input_or_numeric(e, "--B"))?;
            matrix_out(&format!("A σ B ({})", spec.name()), &r)
        }
        Command::MeanLimit { mean, pair } => {
            let spec = mean_spec(cli, mean)?;
            let (a, b) = (read_psd(&pair.a)?, read_psd(&pair.b)?);
            let (limit, delta) = if spec.kind() == MeanKind::Geometric {
                (geometric_limit(&a, &b, spec.alpha(), &tol).map_err(|e| input_or_numeric(e, "--B"))?.into_matrix(), None)
            } else {
                let r = sweep_mean(&spec, &a, &b, &grid(cli)?, None, &tol).map_err(|e| input_or_numeric(e, "--B"))?;
                (r.last().clone(), Some(r.cauchy_delta))
            };
            if table {
                let how = match delta {
                    None => "closed form".to_string(),
                    Some(d) => format!("sweep estimate at p = {}, cauchy delta {d:.3e}", grid(cli)?.last().unwrap()),
                };
                format!("lim (A^p σ B)^(1/p) ({}; {how})\n{}", spec.name(), format_matrix(&limit))
            } else {
                json(&MeanLimitReport {
                    mean: spec.name().to_string(),
                    closed_form: delta.is_none(),
                    limit: (&limit).into(),
                    cauchy_delta: delta,
                })
            }
        }
        Command::Renyi { rho, sigma, order } => {
            let (r, s) = (density(rho)?, density(sigma)?);
            let z = zero_limits(&r, &s, &tol).map_err(|e| input_or_numeric(e, "--sigma"))?;
            let div = match order {
                Some(a) => Some(renyi_divergences(&r, &s, *a, &tol).map_err(|e| input_or_numeric(e, "--order"))?),
                None => None,
            };
            if table {
                let mut t = format!(
                    "D0 = {}\nD0~ = {}\nQ0~ = {:.12}\ncommutes: {}\nequality: {}\nwitness projection:\n{}",
                    z.d0,
                    z.d0_tilde,
                    z.q0_tilde,
                    z.commutes,
                    z.equality,
                    format_matrix(&z.witness_projection)
                );
                if let (Some(a), Some((d, dt))) = (order, div) {
                    t.push_str(&format!("D_{a} = {d}\nD~_{a} = {dt}\n"));
                }
                t
            } else {
                json(&RenyiReport {
                    zero_limits: (&z).into(),
                    order: *order,
                    d_alpha: div.map(|d| d.0),
                    d_tilde_alpha: div.map(|d| d.1),
                })
            }
        }
        Command::Sweep { kind, map, mean, a, b } => {
            let grid = grid(cli)?;
            let a_m = read_psd(a)?;
            let need_b = || -> Result<Psd> {
                match b {
                    Some(p) => read_psd(p),
                    None => Err(Error::input("--B", "required for this sweep kind")),
                }
            };
            let (title, r) = match kind {
                SweepKind::Map => {
                    let phi = match map {
                        Some(p) => read_map(p)?,
                        None => return Err(Error::input("--map", "required for --kind map")),
                    };
                    let target = map_limit(&phi, &a_m, &tol).map_err(|e| input_or_numeric(e, "--map"))?.limit;
                    let r = sweep_map(&phi, &a_m, &grid, Some(target.matrix()), &tol).map_err(|e| input_or_numeric(e, "--map"))?;
                    ("Φ(A^p)^(1/p)".to_string(), r)
                }
                SweepKind::Mean => {
                    let spec = mean_spec(cli, mean.as_deref().unwrap_or("geometric"))?;
                    let b_m = need_b()?;
                    let target = if spec.kind() == MeanKind::Geometric {
                        Some(geometric_limit(&a_m, &b_m, spec.alpha(), &tol).map_err(|e| input_or_numeric(e, "--B"))?)
                    } else {
                        None
                    };
                    let r = sweep_mean(&spec, &a_m, &b_m, &grid, target.as_ref().map(|t| t.matrix()), &tol)
                        .map_err(|e| input_or_numeric(e, "--B"))?;
                    (format!("(A^p σ B)^(1/p), {}", spec.name()), r)
                }
                SweepKind::Sandwich => {
                    let b_m = need_b()?;
                    let r = sweep_sandwich(&a_m, &b_m, &grid, &tol).map_err(|e| input_or_numeric(e, "--B"))?;
                    ("(A^p B A^p)^(1/p)".to_string(), r)
                }
            };
            if table {
                report_table(&title, &r)
            } else {
                json(&ConvergenceJson::from(&r))
            }
        }
        Command::Selftest => {
            let results = selftest(&tol);
            let passed = results.iter().filter(|(_, ok)| *ok).count();
            if table {
                let mut s = String::new();
                for (name, ok) in &results {
                    s.push_str(&format!("{} {name}\n", if *ok { "PASS" } else { "FAIL" }));
                }
                s.push_str(&format!("{passed}/{} fixtures passed\n", results.len()));
                s
            } else {
                json(&SelftestReport {
                    passed,
                    total: results.len(),
                    fixtures: results,
                })
            }
        }
    })
}

/// Validation failures raised deep inside a computation are attributed to
/// the given argument; numeric failures pass through.
fn input_or_numeric(e: Error, arg: &str) -> Error {
    if e.is_numeric() || matches!(e, Error::Input { .. }) {
        e
    } else {
        Error::input(arg, e)
    }
}

fn selftest(tol: &Tolerances) -> Vec<(String, bool)> {
    let check = |f: &dyn Fn() -> Result<bool>| f().unwrap_or(false);
    let lines_map = || -> Result<bool> {
        let phi = diagonal_to_lines_map();
        let a = Psd::from_diag(&[2.0, 1.0])?;
        let pos = map_limit(&phi, &a, tol)?.limit;
        let neg = neg_map_limit(&phi, &a, tol)?.limit;
        let expected_neg = CMatrix::from_real_rows(&[&[1.5, -0.5], &[-0.5, 1.5]]);
        Ok(pos.max_diff(&CMatrix::from_diag_real(&[2.0, 1.0])) < 1e-10 && neg.max_diff(&expected_neg) < 1e-10)
    };
    let state = || -> Result<bool> {
        let rho = Psd::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])?;
        let phi = PositiveMapSpec::trace_state(rho)?;
        let a = Psd::from_diag(&[1.0, 0.0])?;
        let neg = neg_map_limit(&phi, &a, tol)?.limit;
        let eps = crate::limits::epsilon_neg_limit(&phi, &a, 2.0, tol)?.value;
        let pos = crate::sweep::map_iterate(&phi, &a, 2.0, tol)?;
        Ok((neg[(0, 0)].re - 1.0).abs() < 1e-10
            && eps[(0, 0)].re.abs() < 1e-8
            && (pos[(0, 0)].re - 0.5f64.sqrt()).abs() < 1e-12)
    };
    let commuting_sup = || -> Result<bool> {
        let a = Psd::from_diag(&[2.0, 1.0, 0.5])?;
        let b = Psd::from_diag(&[1.0, 3.0, 0.25])?;
        Ok(spectral_sup(&a, &b, tol)?.max_diff(&CMatrix::from_diag_real(&[2.0, 3.0, 0.5])) < 1e-12)
    };
    let projection_case = || -> Result<bool> {
        let e = Projection::new(CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]))?;
        let a = Psd::from_diag(&[4.0, 2.0])?;
        let r = geometric_limit(&a, &e.to_psd(), 0.5, tol)?;
        let p = Psd::from_diag(&[1.0, 0.0])?;
        let meet = geometric_limit(&p, &e.to_psd(), 0.5, tol)?;
        Ok(r.max_diff(&e.scale(2f64.sqrt())) < 1e-10 && meet.max_abs() < 1e-10)
    };
    vec![
        ("non-unital map: positive and negative limits".to_string(), check(&lines_map)),
        ("state: generalized inverse vs regularized".to_string(), check(&state)),
        ("commuting spectral supremum".to_string(), check(&commuting_sup)),
        ("geometric limit against a projection".to_string(), check(&projection_case)),
    ]
}
