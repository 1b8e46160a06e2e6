//! Rank-tolerant Gram–Schmidt selection.

use super::matrix::{axpy, dot, norm, C64};
use super::tol::Tolerances;
use crate::error::{Error, Result};

/// Output of [`gram_schmidt_select`]: zero-based indices of the kept inputs
/// and the orthonormalized residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub vectors: Vec<Vec<C64>>,
}

impl Selection {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// A growing orthonormal family.
#[derive(Debug, Clone, Default)]
pub(crate) struct Frame {
    pub vectors: Vec<Vec<C64>>,
}

impl Frame {
    pub fn residual(&self, v: &[C64]) -> Vec<C64> {
        let mut r = v.to_vec();
        // Two passes: classical Gram-Schmidt twice is enough for orthogonality.
        for _ in 0..2 {
            for u in &self.vectors {
                let c = dot(u, &r);
                axpy(&mut r, -c, u);
            }
        }
        r
    }

    /// Appends the normalized residual of `v` if it exceeds `threshold`.
    pub fn try_push(&mut self, v: &[C64], threshold: f64) -> bool {
        let r = self.residual(v);
        let rn = norm(&r);
        if rn > threshold && rn > 0.0 {
            self.vectors.push(r.iter().map(|z| z / rn).collect());
            true
        } else {
            false
        }
    }
}

/// Scans `vectors` in order and keeps those not (numerically) in the span
/// of the ones already kept.
///
/// A vector is kept when its residual norm exceeds
/// `tol.rank * max(max input norm, tol.abs)`.
pub fn gram_schmidt_select(vectors: &[Vec<C64>], tol: &Tolerances) -> Result<Selection> {
    let dim = vectors.first().map_or(0, Vec::len);
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::dims(dim, bad.len()));
    }
    let max_norm = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let threshold = tol.rank * max_norm.max(tol.abs);
    let mut frame = Frame::default();
    let mut indices = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if frame.vectors.len() == dim {
            break;
        }
        if frame.try_push(v, threshold) {
            indices.push(i);
        }
    }
    Ok(Selection {
        indices,
        vectors: frame.vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn duplicates_are_dropped() {
        let s = gram_schmidt_select(
            &[real(&[1.0, 0.0]), real(&[1.0, 0.0]), real(&[0.0, 1.0])],
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(s.indices, vec![0, 2]);
        assert_eq!(s.vectors, vec![real(&[1.0, 0.0]), real(&[0.0, 1.0])]);
    }

    #[test]
    fn leading_zero_vector_is_skipped() {
        let s = gram_schmidt_select(&[real(&[0.0, 0.0]), real(&[0.0, 1.0])], &Tolerances::default())
            .unwrap();
        assert_eq!(s.indices, vec![1]);
    }

    #[test]
    fn parallel_vectors_give_rank_one() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = gram_schmidt_select(
            &[real(&[h * 3.0, h * 3.0]), real(&[-h * 0.2, -h * 0.2])],
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(s.indices, vec![0]);
    }

    #[test]
    fn all_zero_gives_empty_selection() {
        let s = gram_schmidt_select(&[real(&[0.0, 0.0])], &Tolerances::default()).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn ragged_input_is_rejected() {
        let r = gram_schmidt_select(&[real(&[1.0]), real(&[1.0, 2.0])], &Tolerances::default());
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }
}
