//! Kubo–Ando operator means given by their representing functions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::MapLimitResult;
use crate::linalg::eigen::{eigh, reassemble};
use crate::linalg::functions::support_power;
use crate::linalg::lattice::{projection_meet, range_of};
use crate::linalg::{group_spectrum, CMatrix, Projection, Psd, Tolerances};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Logarithmic,
    Custom,
}

/// An operator mean `σ_f` with `f(1) = 1`.
#[derive(Clone)]
pub struct MeanSpec {
    name: String,
    kind: MeanKind,
    alpha: f64,
    f_at_zero: f64,
    /// `lim_{x→∞} f(x)/x`, i.e. `f̃(0)`.
    f_hat_at_infinity: f64,
    f: ScalarFn,
}

impl fmt::Debug for MeanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeanSpec")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("alpha", &self.alpha)
            .field("f_at_zero", &self.f_at_zero)
            .finish()
    }
}

/// Power-monotonicity class of a representing function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerClass {
    /// `f(x^r) ≥ f(x)^r` for `r > 1`.
    Pmi,
    /// `f(x^r) ≤ f(x)^r` for `r > 1`.
    Pmd,
    Both,
    Neither,
}

/// Transpose `f̃(x) = x f(1/x)` and `f̂(x) = f(x)/x` (with `f̂(0) = 0`).
#[derive(Clone)]
pub struct DerivedFunctions {
    pub f_tilde: ScalarFn,
    pub f_hat: ScalarFn,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
        return Err(Error::InvalidMean(format!("weight {alpha} is outside [0, 1]")));
    }
    Ok(())
}

/// `log(e^a + e^b)` with `-inf` handled.
fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `log((e^y − 1)/y)`.
fn log_logmean(y: f64) -> f64 {
    if y.abs() < 1e-8 {
        y / 2.0
    } else if y > 0.0 {
        y + (-(-y).exp_m1()).ln() - y.ln()
    } else {
        (-y.exp_m1()).ln() - (-y).ln()
    }
}

impl MeanSpec {
    pub fn arithmetic(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(MeanSpec {
            name: format!("arithmetic:{alpha}"),
            kind: MeanKind::Arithmetic,
            alpha,
            f_at_zero: 1.0 - alpha,
            f_hat_at_infinity: alpha,
            f: Arc::new(move |x| 1.0 - alpha + alpha * x),
        })
    }

    pub fn geometric(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(MeanSpec {
            name: format!("geometric:{alpha}"),
            kind: MeanKind::Geometric,
            alpha,
            f_at_zero: if alpha == 0.0 { 1.0 } else { 0.0 },
            f_hat_at_infinity: if alpha == 1.0 { 1.0 } else { 0.0 },
            f: Arc::new(move |x| if x == 0.0 && alpha > 0.0 { 0.0 } else { x.powf(alpha) }),
        })
    }

    pub fn harmonic(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(MeanSpec {
            name: format!("harmonic:{alpha}"),
            kind: MeanKind::Harmonic,
            alpha,
            f_at_zero: if alpha == 0.0 { 1.0 } else { 0.0 },
            f_hat_at_infinity: if alpha == 1.0 { 1.0 } else { 0.0 },
            f: Arc::new(move |x| {
                if alpha == 0.0 {
                    1.0
                } else {
                    x / ((1.0 - alpha) * x + alpha)
                }
            }),
        })
    }

    /// `f(x) = (x − 1)/log x`.
    pub fn logarithmic() -> Self {
        MeanSpec {
            name: "logarithmic".into(),
            kind: MeanKind::Logarithmic,
            alpha: 0.5,
            f_at_zero: 0.0,
            f_hat_at_infinity: 0.0,
            f: Arc::new(|x: f64| {
                if x == 0.0 {
                    0.0
                } else {
                    log_logmean(x.ln()).exp()
                }
            }),
        }
    }

    /// A user-supplied representing function.
    ///
    /// Only necessary conditions are checked (`f(1) = 1`, nondecreasing and
    /// concave on a log grid); operator monotonicity is the caller's
    /// responsibility.
    pub fn custom(name: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let f: ScalarFn = Arc::new(f);
        if (f(1.0) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMean(format!("{name}: f(1) = {} != 1", f(1.0))));
        }
        let grid = logspace(1e-6, 1e6, 121);
        let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidMean(format!("{name}: f must be finite and non-negative")));
        }
        for w in vals.windows(2) {
            if w[1] < w[0] - 1e-12 * w[0].abs().max(1.0) {
                return Err(Error::InvalidMean(format!("{name}: f is not nondecreasing")));
            }
        }
        for i in 1..grid.len() - 1 {
            let (x0, x1, x2) = (grid[i - 1], grid[i], grid[i + 1]);
            let chord = vals[i - 1] + (vals[i + 1] - vals[i - 1]) * (x1 - x0) / (x2 - x0);
            if vals[i] < chord - 1e-9 * chord.abs().max(1.0) {
                return Err(Error::InvalidMean(format!("{name}: f is not concave")));
            }
        }
        let h = 1e-6;
        let alpha = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
        let f0 = f(0.0);
        let f_at_zero = if f0.is_finite() { f0 } else { f(1e-300) };
        let big = 1e12;
        let hat_inf = f(big) / big;
        Ok(MeanSpec {
            name: name.to_string(),
            kind: MeanKind::Custom,
            alpha,
            f_at_zero,
            f_hat_at_infinity: if hat_inf < 1e-6 { 0.0 } else { hat_inf },
            f,
        })
    }

    /// Parses `name[:alpha]`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, alpha) = match s.split_once(':') {
            Some((n, a)) => {
                let a: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidMean(format!("cannot parse weight in '{s}'")))?;
                (n.trim(), Some(a))
            }
            None => (s.trim(), None),
        };
        let alpha_or_half = alpha.unwrap_or(0.5);
        match name.to_ascii_lowercase().as_str() {
            "arithmetic" | "arith" => Self::arithmetic(alpha_or_half),
            "geometric" | "geo" => Self::geometric(alpha_or_half),
            "harmonic" | "harm" => Self::harmonic(alpha_or_half),
            "logarithmic" | "log" => match alpha {
                Some(a) if a != 0.5 => Err(Error::InvalidMean(
                    "the logarithmic mean takes no weight".into(),
                )),
                _ => Ok(Self::logarithmic()),
            },
            other => Err(Error::InvalidMean(format!("unknown mean '{other}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> MeanKind {
        self.kind
    }

    /// `f′(1)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn f_at_zero(&self) -> f64 {
        self.f_at_zero
    }

    pub fn f(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn f_tilde(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.f_hat_at_infinity
        } else {
            x * self.f(1.0 / x)
        }
    }

    pub fn f_hat(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            self.f(x) / x
        }
    }

    pub fn derived(&self) -> DerivedFunctions {
        let a = self.clone();
        let b = self.clone();
        DerivedFunctions {
            f_tilde: Arc::new(move |x| a.f_tilde(x)),
            f_hat: Arc::new(move |x| b.f_hat(x)),
        }
    }

    /// Exact trivial weights: `α = 0` gives `A`, `α = 1` gives `B`.
    fn trivial_weight(&self) -> Option<bool> {
        match self.kind {
            MeanKind::Arithmetic | MeanKind::Geometric | MeanKind::Harmonic => {
                if self.alpha == 0.0 {
                    Some(false)
                } else if self.alpha == 1.0 {
                    Some(true)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// `f(0) = 0` and `f(x)/x → 0`: the mean is supported on the meet of
    /// the arguments' supports.
    pub(crate) fn vanishes_at_both_ends(&self) -> bool {
        self.f_at_zero == 0.0 && self.f_hat_at_infinity == 0.0
    }

    /// The transposed mean `B σ A`.
    pub fn transpose(&self) -> MeanSpec {
        let a = self.alpha;
        match self.kind {
            MeanKind::Arithmetic => Self::arithmetic(1.0 - a).expect("weight stays in range"),
            MeanKind::Geometric => Self::geometric(1.0 - a).expect("weight stays in range"),
            MeanKind::Harmonic => Self::harmonic(1.0 - a).expect("weight stays in range"),
            MeanKind::Logarithmic => self.clone(),
            MeanKind::Custom => {
                let me = self.clone();
                MeanSpec {
                    name: format!("{}~", self.name),
                    kind: MeanKind::Custom,
                    alpha: 1.0 - self.alpha,
                    f_at_zero: self.f_hat_at_infinity,
                    f_hat_at_infinity: self.f_at_zero,
                    f: Arc::new(move |x| me.f_tilde(x)),
                }
            }
        }
    }

    /// `log f̃(e^y)`, evaluated without overflow for the built-in means.
    pub(crate) fn log_f_tilde(&self, y: f64) -> f64 {
        if y == f64::NEG_INFINITY {
            return self.f_hat_at_infinity.ln();
        }
        let a = self.alpha;
        match self.kind {
            MeanKind::Arithmetic => logaddexp((1.0 - a).ln() + y, a.ln()),
            MeanKind::Geometric => (1.0 - a) * y,
            MeanKind::Harmonic => y - logaddexp((1.0 - a).ln(), a.ln() + y),
            MeanKind::Logarithmic => log_logmean(y),
            MeanKind::Custom => y + self.f((-y).exp()).ln(),
        }
    }

    /// `log f̂(e^y) = log f̃(e^{−y})`.
    pub(crate) fn log_f_hat(&self, y: f64) -> f64 {
        self.log_f_tilde(-y)
    }
}

pub(crate) fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Sign pattern of `f(x^r) − f(x)^r` on `x ∈ logspace(1e-3, 1e3, 60)`,
/// `r ∈ {1.5, 2, 4}`.
pub fn classify_power_monotonicity(spec: &MeanSpec) -> PowerClass {
    let mut pmi = true;
    let mut pmd = true;
    for &x in &logspace(1e-3, 1e3, 60) {
        for r in [1.5, 2.0, 4.0] {
            let lhs = spec.f(x.powf(r));
            let rhs = spec.f(x).powf(r);
            let slack = 1e-12 * lhs.abs().max(rhs.abs()).max(1.0);
            if lhs < rhs - slack {
                pmi = false;
            }
            if lhs > rhs + slack {
                pmd = false;
            }
        }
    }
    match (pmi, pmd) {
        (true, true) => PowerClass::Both,
        (true, false) => PowerClass::Pmi,
        (false, true) => PowerClass::Pmd,
        (false, false) => PowerClass::Neither,
    }
}

/// `lim_{p→∞} f̃(x^p)^{1/p}`.
///
/// Closed forms for the built-in means; custom means get the estimate at
/// `p = 2^12` (see [`f_tilde_infinity_estimate`]), accepted only if it moved
/// by at most `1e-2` since `p = 2^10`.
pub fn f_tilde_infinity(spec: &MeanSpec, x: f64) -> Result<f64> {
    if x < 0.0 || !x.is_finite() {
        return Err(Error::DomainError {
            function: "f_tilde_infinity".into(),
            value: x,
        });
    }
    let a = spec.alpha;
    let at_zero = if spec.f_hat_at_infinity > 0.0 { 1.0 } else { 0.0 };
    Ok(match spec.kind {
        MeanKind::Arithmetic if a > 0.0 => x.max(1.0),
        MeanKind::Arithmetic => x,
        MeanKind::Geometric => {
            if x == 0.0 {
                if a == 1.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                x.powf(1.0 - a)
            }
        }
        MeanKind::Harmonic if a > 0.0 => x.min(1.0),
        MeanKind::Harmonic => x,
        MeanKind::Logarithmic => {
            if x == 0.0 {
                at_zero
            } else {
                x.max(1.0)
            }
        }
        MeanKind::Custom => return f_tilde_infinity_estimate(spec, x).map(|(v, _)| v),
    })
}

/// Numeric `f̃(x^p)^{1/p}` at `p = 2^12` and its change since `p = 2^10`.
///
/// The exponent is capped so that `|p log x| ≤ 600`, keeping `f` inside
/// the floating-point range; the cap scales both evaluation points.
pub fn f_tilde_infinity_estimate(spec: &MeanSpec, x: f64) -> Result<(f64, f64)> {
    let p_hi = if x > 0.0 && x != 1.0 { 4096f64.min(600.0 / x.ln().abs()) } else { 4096.0 };
    let at = |p: f64| -> f64 {
        if x == 0.0 {
            spec.f_tilde(0.0).powf(1.0 / p)
        } else {
            (spec.log_f_tilde(p * x.ln()) / p).exp()
        }
    };
    let (hi, lo) = (at(p_hi), at(p_hi / 4.0));
    let delta = (hi - lo).abs();
    if !hi.is_finite() || delta > 1e-2 * hi.abs().max(1.0) {
        return Err(Error::NoConvergence(format!(
            "f~(x^p)^(1/p) at x = {x}: estimate {hi}, change {delta:e}"
        )));
    }
    Ok((hi, delta))
}

fn check_pair(a: &Psd, b: &Psd) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dims(a.dim(), b.dim()));
    }
    Ok(())
}

/// Positive definite in the sense that no eigenvalue is routed to the kernel.
pub(crate) fn is_positive_definite(a: &Psd, tol: &Tolerances) -> Result<bool> {
    Ok(a.dim() == 0 || group_spectrum(a, tol)?.kernel_projection.rank() == 0)
}

/// `f` applied to a PSD matrix, snapping eigenvalues at most
/// `zero * max(λ_max, scale)` to exactly zero where `f(0) = zero_value`.
fn snapped(m: &CMatrix, zero: f64, scale: f64, zero_value: f64, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, v) = eigh(m)?;
    let top = vals.first().copied().unwrap_or(0.0).max(scale);
    let mut d = Vec::with_capacity(vals.len());
    for &x in &vals {
        let y = if x <= zero * top { zero_value } else { f(x) };
        if !y.is_finite() {
            return Err(Error::DomainError {
                function: "representing function".into(),
                value: x,
            });
        }
        d.push(y);
    }
    Ok(reassemble(&v, &d))
}

/// `A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}` for positive definite `A`.
fn definition(spec: &MeanSpec, a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let half = support_power(a, 0.5, 0.0)?;
    let inv_half = support_power(a, -0.5, 0.0)?;
    let x = &(&inv_half * b) * &inv_half;
    let fx = snapped(&x, tol.zero, 0.0, spec.f_at_zero, |t| spec.f(t))?;
    Ok(&(&half * &fx) * &half)
}

/// `B^{1/2} f̂(G B^{1/2} A^+ B^{1/2} G) B^{1/2}` where `G` projects onto the
/// kernel of `B^{1/2}(I − A⁰)B^{1/2}`; exact when `f(0) = 0` and
/// `f(x)/x → 0`.
fn support_reduction(spec: &MeanSpec, a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let bh = support_power(b, 0.5, tol.zero)?;
    let a_plus = support_power(a, -1.0, tol.zero)?;
    let a0 = support_power(a, 0.0, tol.zero)?;
    let g = reduction_projection(&bh, &a0, b, tol)?;
    let inner = &(&bh * &a_plus) * &bh;
    let scale = eigh(&inner)?.0.first().copied().unwrap_or(0.0);
    let x = &(g.matrix() * &inner) * g.matrix();
    let fx = snapped(&x, tol.zero, scale, 0.0, |t| spec.f_hat(t))?;
    Ok(&(&bh * &fx) * &bh)
}

pub(crate) fn reduction_projection(bh: &CMatrix, a0: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<Projection> {
    let n = bh.rows();
    let perp = &CMatrix::identity(n) - a0;
    let nmat = &(bh * &perp) * bh;
    let b_top = eigh(b)?.0.first().copied().unwrap_or(0.0);
    Ok(range_of(&nmat, tol.rank, b_top.max(f64::MIN_POSITIVE))?.complement())
}

/// `A σ B`.
///
/// Positive definite `A` uses the defining formula, positive definite `B`
/// the transposed one. When both are singular, means with `f(0) = 0` and
/// `f(x)/x → 0` (weighted geometric and harmonic means with `0 < α < 1`,
/// the logarithmic mean) are evaluated exactly by a support reduction, the
/// arithmetic mean by its formula, and other means by the `ε ↘ 0` limit
/// along `ε_k = 10^{-k}` with a Cauchy stop at `1e-9`.
pub fn mean_eval(spec: &MeanSpec, a: &Psd, b: &Psd, tol: &Tolerances) -> Result<Psd> {
    check_pair(a, b)?;
    if let Some(second) = spec.trivial_weight() {
        return Ok(if second { b.clone() } else { a.clone() });
    }
    if spec.kind == MeanKind::Arithmetic {
        let al = spec.alpha;
        return Ok(Psd::from_raw(&a.scale(1.0 - al) + &b.scale(al)));
    }
    if is_positive_definite(a, tol)? {
        return Ok(Psd::from_raw(definition(spec, a, b, tol)?));
    }
    if is_positive_definite(b, tol)? {
        return Ok(Psd::from_raw(definition(&spec.transpose(), b, a, tol)?));
    }
    if spec.vanishes_at_both_ends() {
        return Ok(Psd::from_raw(support_reduction(spec, a, b, tol)?));
    }
    epsilon_mean(spec, a, b, tol)
}

fn epsilon_mean(spec: &MeanSpec, a: &Psd, b: &Psd, tol: &Tolerances) -> Result<Psd> {
    let n = a.dim();
    let id = CMatrix::identity(n);
    let mut prev: Option<CMatrix> = None;
    let mut eps = 1.0;
    let mut delta = f64::INFINITY;
    for _ in 1..=12 {
        eps /= 10.0;
        let x = definition(spec, &(a.matrix() + &id.scale(eps)), &(b.matrix() + &id.scale(eps)), tol)?;
        if let Some(p) = &prev {
            delta = (p - &x).frobenius_norm();
        }
        prev = Some(x);
        if delta <= 1e-9 {
            break;
        }
    }
    if delta > 1e-9 {
        return Err(Error::NoConvergence(format!(
            "{}: epsilon limit stalled with successive difference {delta:e}",
            spec.name
        )));
    }
    Ok(Psd::from_raw(prev.expect("schedule is non-empty")))
}

/// `A σ_f E = f̂(E A^{-1} E)` for positive definite `A` and `f(0) = 0`.
pub fn mean_projection_eval(spec: &MeanSpec, a: &Psd, e: &Projection, tol: &Tolerances) -> Result<Psd> {
    if a.dim() != e.dim() {
        return Err(Error::dims(a.dim(), e.dim()));
    }
    if spec.f_at_zero != 0.0 {
        return Err(Error::RequiresVanishingAtZero {
            f_at_zero: spec.f_at_zero,
        });
    }
    if !is_positive_definite(a, tol)? {
        return Err(Error::RequiresPositiveDefinite);
    }
    let a_inv = support_power(a, -1.0, 0.0)?;
    let x = &(e.matrix() * &a_inv) * e.matrix();
    Ok(Psd::from_raw(snapped(&x, tol.zero, 0.0, 0.0, |t| spec.f_hat(t))?))
}

/// Closed form of `lim (A^p #_α B)^{1/p} = Σ a_k^{1−α} Q_k` with
/// `Q_k = (P_1+…+P_k) ∧ E − (P_1+…+P_{k−1}) ∧ E`, `E` the support of `B`.
pub fn geometric_limit(a: &Psd, b: &Psd, alpha: f64, tol: &Tolerances) -> Result<Psd> {
    Ok(geometric_limit_decomposition(a, b, alpha, tol)?.limit)
}

/// [`geometric_limit`] together with its coefficients and the `Q_k`.
pub fn geometric_limit_decomposition(a: &Psd, b: &Psd, alpha: f64, tol: &Tolerances) -> Result<MapLimitResult> {
    check_pair(a, b)?;
    check_alpha(alpha)?;
    let n = a.dim();
    let e = range_of(b, tol.rank, 0.0)?;
    let sd = group_spectrum(a, tol)?;
    if alpha == 0.0 {
        return Ok(MapLimitResult {
            limit: a.clone(),
            coefficients: sd.values.clone(),
            projections: sd.projections.clone(),
        });
    }
    if alpha == 1.0 {
        return Ok(MapLimitResult {
            limit: e.to_psd(),
            coefficients: vec![1.0],
            projections: vec![e],
        });
    }
    let mut prev = Projection::zero(n);
    let mut limit = CMatrix::zeros(n, n);
    let mut coefficients = Vec::with_capacity(sd.len());
    let mut projections = Vec::with_capacity(sd.len());
    for k in 0..sd.len() {
        let partial = range_of(&sd.partial_sum(k + 1), 0.5, 1.0)?;
        let m = projection_meet(&partial, &e, tol)?;
        let q = Projection::from_raw_with_rank(m.matrix() - prev.matrix(), m.rank().saturating_sub(prev.rank()));
        let c = sd.values[k].powf(1.0 - alpha);
        limit = &limit + &q.scale(c);
        coefficients.push(c);
        projections.push(q);
        prev = m;
    }
    Ok(MapLimitResult {
        limit: Psd::from_raw(limit),
        coefficients,
        projections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn half_projection() -> Projection {
        Projection::new(CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap()
    }

    #[test]
    fn derived_function_identities() {
        for spec in [
            MeanSpec::arithmetic(0.3).unwrap(),
            MeanSpec::geometric(0.25).unwrap(),
            MeanSpec::harmonic(0.6).unwrap(),
            MeanSpec::logarithmic(),
        ] {
            assert!((spec.f(1.0) - 1.0).abs() < 1e-12);
            assert!((spec.f_tilde(1.0) - 1.0).abs() < 1e-12);
            for x in logspace(1e-3, 1e3, 25) {
                assert!((spec.f_hat(x) * x - spec.f(x)).abs() <= 1e-12 * spec.f(x).max(1.0));
                let lt = spec.log_f_tilde(x.ln()).exp();
                assert!((lt - spec.f_tilde(x)).abs() <= 1e-12 * lt.max(1.0), "{}", spec.name());
            }
        }
        assert_eq!(MeanSpec::harmonic(0.5).unwrap().f_hat(0.0), 0.0);
    }

    #[test]
    fn parse_names() {
        assert_eq!(MeanSpec::parse("geometric:0.3").unwrap().kind(), MeanKind::Geometric);
        assert_eq!(MeanSpec::parse("harmonic").unwrap().alpha(), 0.5);
        assert_eq!(MeanSpec::parse("log").unwrap().kind(), MeanKind::Logarithmic);
        assert!(MeanSpec::parse("median").is_err());
        assert!(MeanSpec::parse("geometric:1.5").is_err());
        assert!(MeanSpec::parse("geometric:x").is_err());
    }

    #[test]
    fn custom_specs_are_screened() {
        assert!(MeanSpec::custom("sqrt", f64::sqrt).is_ok());
        assert!(MeanSpec::custom("square", |x| x * x).is_err());
        assert!(MeanSpec::custom("shifted", |x| x.sqrt() + 1.0).is_err());
        let c = MeanSpec::custom("sqrt", f64::sqrt).unwrap();
        assert!((c.alpha() - 0.5).abs() < 1e-8);
        assert_eq!(c.f_at_zero(), 0.0);
    }

    #[test]
    fn power_monotonicity_classes() {
        assert_eq!(classify_power_monotonicity(&MeanSpec::geometric(0.3).unwrap()), PowerClass::Both);
        assert_eq!(classify_power_monotonicity(&MeanSpec::harmonic(0.5).unwrap()), PowerClass::Pmd);
        assert_eq!(classify_power_monotonicity(&MeanSpec::logarithmic()), PowerClass::Pmi);
        assert_eq!(classify_power_monotonicity(&MeanSpec::arithmetic(0.5).unwrap()), PowerClass::Pmi);
    }

    #[test]
    fn f_tilde_infinity_closed_forms() {
        let v = f_tilde_infinity(&MeanSpec::arithmetic(0.3).unwrap(), 2.0).unwrap();
        assert_eq!(v, 2.0);
        let v = f_tilde_infinity(&MeanSpec::geometric(0.25).unwrap(), 16.0).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
        let v = f_tilde_infinity(&MeanSpec::harmonic(0.5).unwrap(), 0.5).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn custom_f_tilde_infinity_estimate() {
        let c = MeanSpec::custom("sqrt", f64::sqrt).unwrap();
        let v = f_tilde_infinity(&c, 16.0).unwrap();
        assert!((v - 4.0).abs() < 1e-9);
    }

    #[test]
    fn mean_of_equal_arguments() {
        let a = Psd::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]).unwrap();
        for spec in [
            MeanSpec::arithmetic(0.3).unwrap(),
            MeanSpec::geometric(0.7).unwrap(),
            MeanSpec::harmonic(0.5).unwrap(),
            MeanSpec::logarithmic(),
        ] {
            assert!(mean_eval(&spec, &a, &a, &tol()).unwrap().max_diff(&a) < 1e-12);
        }
    }

    #[test]
    fn commuting_geometric_and_harmonic() {
        let a = Psd::from_diag(&[4.0, 1.0]).unwrap();
        let b = Psd::from_diag(&[1.0, 4.0]).unwrap();
        let al = 0.3;
        let g = mean_eval(&MeanSpec::geometric(al).unwrap(), &a, &b, &tol()).unwrap();
        let expected = CMatrix::from_diag_real(&[4f64.powf(1.0 - al), 4f64.powf(al)]);
        assert!(g.max_diff(&expected) < 1e-12);
        let h = mean_eval(
            &MeanSpec::harmonic(0.5).unwrap(),
            &Psd::from_diag(&[2.0, 2.0]).unwrap(),
            &Psd::identity(2),
            &tol(),
        )
        .unwrap();
        assert!(h.max_diff(&CMatrix::identity(2).scale(4.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn projection_formula_fixture() {
        let a = Psd::from_diag(&[4.0, 1.0]).unwrap();
        let e = half_projection();
        let r = mean_projection_eval(&MeanSpec::geometric(0.5).unwrap(), &a, &e, &tol()).unwrap();
        let expected = e.scale((5.0f64 / 8.0).powf(-0.5));
        assert!(r.max_diff(&expected) < 1e-12);
        assert!((expected[(0, 0)].re * 2.0 - 1.26491).abs() < 1e-5);
        let err = mean_projection_eval(&MeanSpec::arithmetic(0.5).unwrap(), &a, &e, &tol());
        assert!(matches!(err, Err(Error::RequiresVanishingAtZero { .. })));
        let err = mean_projection_eval(&MeanSpec::geometric(0.5).unwrap(), &Psd::from_diag(&[1.0, 0.0]).unwrap(), &e, &tol());
        assert_eq!(err.unwrap_err(), Error::RequiresPositiveDefinite);
    }

    #[test]
    fn harmonic_with_identity_projection() {
        let a = Psd::from_diag(&[3.0, 0.5]).unwrap();
        let al = 0.4;
        let r = mean_projection_eval(&MeanSpec::harmonic(al).unwrap(), &a, &Projection::identity(2), &tol()).unwrap();
        let h = |x: f64| 1.0 / ((1.0 - al) / x + al);
        assert!(r.max_diff(&CMatrix::from_diag_real(&[h(3.0), h(0.5)])) < 1e-12);
    }

    #[test]
    fn singular_pair_geometric_mean_is_meet() {
        let p = Psd::from_diag(&[1.0, 0.0]).unwrap();
        let e = half_projection().to_psd();
        let r = mean_eval(&MeanSpec::geometric(0.5).unwrap(), &p, &e, &tol()).unwrap();
        assert!(r.max_abs() < 1e-12);
        let q = Psd::from_diag(&[1.0, 1.0, 0.0]).unwrap();
        let f = Psd::from_diag(&[1.0, 0.0, 1.0]).unwrap();
        let r = mean_eval(&MeanSpec::harmonic(0.5).unwrap(), &q, &f, &tol()).unwrap();
        assert!(r.max_diff(&CMatrix::from_diag_real(&[1.0, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn geometric_limit_fixtures() {
        let e = half_projection().to_psd();
        let a = Psd::from_diag(&[4.0, 2.0]).unwrap();
        let r = geometric_limit(&a, &e, 0.5, &tol()).unwrap();
        assert!(r.max_diff(&e.scale(2f64.sqrt())) < 1e-10);
        let r = geometric_limit(&a, &Psd::identity(2), 0.3, &tol()).unwrap();
        assert!(r.max_diff(&CMatrix::from_diag_real(&[4f64.powf(0.7), 2f64.powf(0.7)])) < 1e-12);
        let p = Psd::from_diag(&[1.0, 0.0]).unwrap();
        assert!(geometric_limit(&p, &e, 0.4, &tol()).unwrap().max_abs() < 1e-10);
        assert!(geometric_limit(&a, &e, 0.0, &tol()).unwrap().max_diff(&a) < 1e-15);
        assert!(geometric_limit(&a, &e, 1.0, &tol()).unwrap().max_diff(&e) < 1e-12);
    }

    #[test]
    fn support_reduction_matches_regularization() {
        let a = Psd::from_raw(CMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]));
        let b = Psd::from_raw(CMatrix::from_real_rows(&[&[1.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 3.0]]));
        let id = CMatrix::identity(3);
        let reg = |spec: &MeanSpec, eps: f64| {
            definition(spec, &(a.matrix() + &id.scale(eps)), &(b.matrix() + &id.scale(eps)), &tol()).unwrap()
        };
        for spec in [MeanSpec::geometric(0.5).unwrap(), MeanSpec::harmonic(0.3).unwrap()] {
            let exact = mean_eval(&spec, &a, &b, &tol()).unwrap();
            assert!(exact.max_diff(&reg(&spec, 1e-11)) < 1e-4, "{}", spec.name());
        }
        // the logarithmic mean approaches its limit only like 1/log(1/eps)
        let spec = MeanSpec::logarithmic();
        let exact = mean_eval(&spec, &a, &b, &tol()).unwrap();
        let (d1, d2) = (exact.max_diff(&reg(&spec, 1e-5)), exact.max_diff(&reg(&spec, 1e-10)));
        assert!(d2 < d1 && (d1 / d2 - 2.0).abs() < 0.3, "{d1} {d2}");
    }
}
