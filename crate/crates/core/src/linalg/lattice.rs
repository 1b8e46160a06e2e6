//! Range projections and the projection lattice.

use super::eigen::eigh;
use super::hermitian::{Projection, Psd};
use super::matrix::{CMatrix, C64};
use super::tol::Tolerances;
use crate::error::{Error, Result};

/// Projection onto the span of eigenvectors with eigenvalue above
/// `tol.rank * λ_max(M)`.
pub fn range_projection(m: &Psd, tol: &Tolerances) -> Result<Projection> {
    range_of(m, tol.rank, 0.0)
}

/// Like [`range_projection`], with the cut taken relative to
/// `max(λ_max, scale)`; use when `M` is known to live at scale `scale`, so
/// that a numerically zero `M` maps to the zero projection.
pub fn range_projection_at_scale(m: &Psd, scale: f64, tol: &Tolerances) -> Result<Projection> {
    range_of(m, tol.rank, scale)
}

/// Eigenvalues above `rel * max(λ_max, floor)` span the range.
pub(crate) fn range_of(m: &CMatrix, rel: f64, floor: f64) -> Result<Projection> {
    let n = m.rows();
    let (vals, v) = eigh(m)?;
    let top = vals.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Ok(Projection::zero(n));
    }
    let cut = rel * top.max(floor);
    let frame: Vec<Vec<C64>> = vals
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > cut)
        .map(|(i, _)| v.column(i))
        .collect();
    Ok(Projection::from_orthonormal(n, &frame))
}

fn same_dim(p: &Projection, e: &Projection) -> Result<()> {
    if p.dim() != e.dim() {
        return Err(Error::dims(p.dim(), e.dim()));
    }
    Ok(())
}

/// `P ∨ E`: projection onto `ran P + ran E`.
pub fn projection_join(p: &Projection, e: &Projection, tol: &Tolerances) -> Result<Projection> {
    same_dim(p, e)?;
    range_of(&(p.matrix() + e.matrix()), tol.rank, 1.0)
}

/// `P ∧ E`: projection onto `ran P ∩ ran E`, computed as
/// `E − ran(E(I−P)E)` and then rounded back to an exact idempotent.
pub fn projection_meet(p: &Projection, e: &Projection, tol: &Tolerances) -> Result<Projection> {
    same_dim(p, e)?;
    let n = p.dim();
    let perp = p.complement();
    let epe = &(e.matrix() * perp.matrix()) * e.matrix();
    let r = range_of(&epe, tol.rank, 1.0)?;
    let q = e.matrix() - r.matrix();
    // re-idempotize: eigenvalues are near 0 or 1
    let (vals, v) = eigh(&q)?;
    let frame: Vec<Vec<C64>> = vals
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0.5)
        .map(|(i, _)| v.column(i))
        .collect();
    Ok(Projection::from_orthonormal(n, &frame))
}

/// Meet of several projections, folded left to right.
pub fn projection_meet_all(ps: &[&Projection], tol: &Tolerances) -> Result<Projection> {
    let mut it = ps.iter();
    let first = match it.next() {
        Some(p) => (*p).clone(),
        None => return Err(Error::InvalidMap("empty meet".into())),
    };
    it.try_fold(first, |acc, p| projection_meet(&acc, p, tol))
}
