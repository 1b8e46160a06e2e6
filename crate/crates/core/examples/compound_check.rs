//! Antisymmetric compounds: top eigenvalue of C_k(X) is λ_1 ⋯ λ_k.

use kato::limits::congruence_limit;
use kato::linalg::{compound, eig_hermitian, CMatrix, Psd, Tolerances};

fn main() -> kato::Result<()> {
    let tol = Tolerances::default();
    let a = Psd::from_diag(&[4.0, 2.0, 1.0, 0.5])?;
    let k = CMatrix::from_fn(4, 4, |i, j| kato::linalg::C64::new(1.0 / (1 + i + j) as f64, (i as f64 - j as f64) * 0.1));
    let limit = congruence_limit(&k, &a, &tol)?.limit;
    let lambda = eig_hermitian(limit.hermitian())?.values;

    for order in 1..=4 {
        let c = Psd::new(compound(limit.matrix(), order)?)?;
        let top = eig_hermitian(c.hermitian())?.values[0];
        let product: f64 = lambda[..order].iter().product();
        println!("k = {order}: λ_max(C_k) = {top:.10}, λ_1⋯λ_k = {product:.10}");
    }
    Ok(())
}
