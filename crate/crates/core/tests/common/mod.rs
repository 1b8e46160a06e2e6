#![allow(dead_code)]

use kato::linalg::{eig_hermitian, CMatrix, Hermitian, Projection, Psd, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(r: &mut impl Rng) -> f64 {
    // Box–Muller
    let u: f64 = r.gen_range(f64::EPSILON..1.0);
    let v: f64 = r.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn complex_gaussian(r: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(gaussian(r), gaussian(r)))
}

/// Haar-ish unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn unitary(r: &mut impl Rng, n: usize) -> CMatrix {
    let g = complex_gaussian(r, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for c in &cols {
                let d: C64 = c.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= d * ci;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / nrm).collect());
    }
    CMatrix::from_columns(n, &cols)
}

/// `count` descending values in `(0, 4]` with consecutive ratios in
/// `[0.3, 0.8]`, i.e. relative gaps of at least 0.2.
pub fn gapped_values(r: &mut impl Rng, count: usize) -> Vec<f64> {
    let mut v = vec![r.gen_range(1.0..4.0)];
    while v.len() < count {
        let next = v.last().unwrap() * r.gen_range(0.3..0.8);
        v.push(next);
    }
    v
}

pub fn with_spectrum(u: &CMatrix, values: &[f64]) -> Psd {
    let d = CMatrix::from_diag_real(values);
    Psd::new(&(u * &d) * &u.adjoint()).unwrap()
}

/// PSD matrix with a random eigenbasis and gapped spectrum.
pub fn gapped_psd(r: &mut impl Rng, n: usize) -> Psd {
    let u = unitary(r, n);
    with_spectrum(&u, &gapped_values(r, n))
}

/// Projection onto `rank` random orthonormal directions.
pub fn projection(r: &mut impl Rng, n: usize, rank: usize) -> Projection {
    let u = unitary(r, n);
    let mut d = vec![0.0; n];
    d[..rank].iter_mut().for_each(|x| *x = 1.0);
    Projection::new(with_spectrum(&u, &d).into_matrix()).unwrap()
}

/// Random density matrix of the given rank.
pub fn density(r: &mut impl Rng, n: usize, rank: usize) -> Psd {
    let u = unitary(r, n);
    let mut d: Vec<f64> = (0..n).map(|i| if i < rank { r.gen_range(0.1..1.0) } else { 0.0 }).collect();
    let t: f64 = d.iter().sum();
    d.iter_mut().for_each(|x| *x /= t);
    with_spectrum(&u, &d)
}

pub fn min_eig(m: &CMatrix) -> f64 {
    *eig_hermitian(&Hermitian::new(m.clone()).unwrap()).unwrap().values.last().unwrap()
}

pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    eig_hermitian(&Hermitian::new(m.clone()).unwrap()).unwrap().values
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    eigenvalues(m).iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// `P ∧ E` as the kernel of `(I − P) + (I − E)`.
pub fn meet_oracle(p: &Projection, e: &Projection) -> CMatrix {
    let n = p.dim();
    let s = p.complement().matrix() + e.complement().matrix();
    let eig = eig_hermitian(&Hermitian::new(s).unwrap()).unwrap();
    let mut m = CMatrix::zeros(n, n);
    for (k, &v) in eig.values.iter().enumerate() {
        if v.abs() < 1e-8 {
            m = &m + &CMatrix::outer(&eig.vector(k));
        }
    }
    m
}
