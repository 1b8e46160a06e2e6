//! Compound matrices (antisymmetric tensor powers).

use super::matrix::{determinant, CMatrix};
use crate::error::{Error, Result};

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance the rightmost index that can still move
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The `k`-th compound: entry `(I, J)` is `det M[I, J]` over lexicographically
/// ordered `k`-subsets.
pub fn compound(m: &CMatrix, k: usize) -> Result<CMatrix> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::dims(format!("square matrix ({n}x{n})"), format!("{}x{}", n, m.cols())));
    }
    if k == 0 || k > n {
        return Err(Error::BadOrder { k, n });
    }
    let subsets = k_subsets(n, k);
    let size = subsets.len();
    Ok(CMatrix::from_fn(size, size, |i, j| {
        determinant(&m.select(&subsets[i], &subsets[j]))
    }))
}
