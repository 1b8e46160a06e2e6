//! Spectral-order supremum and infimum of two positive matrices.

use kato::cli::format_matrix;
use kato::limits::{spectral_inf, spectral_sup};
use kato::linalg::{Psd, Tolerances};
use kato::sweep::{loewner_compare, sweep_harmonic_power, default_grid};

fn main() -> kato::Result<()> {
    let tol = Tolerances::default();
    let a = Psd::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]])?;
    let b = Psd::from_diag(&[1.0, 3.0])?;

    let sup = spectral_sup(&a, &b, &tol)?;
    let inf = spectral_inf(&a, &b, &tol)?;
    println!("A ∨ B:\n{}", format_matrix(sup.matrix()));
    println!("A ∧ B:\n{}", format_matrix(inf.matrix()));

    // Spectral order implies Loewner order, so both comparisons are Below.
    println!("A vs A ∨ B: {:?}", loewner_compare(a.matrix(), sup.matrix(), 1e-9)?);
    println!("A ∧ B vs B: {:?}", loewner_compare(inf.matrix(), b.matrix(), 1e-9)?);

    let r = sweep_harmonic_power(&a, &b, &default_grid(), Some(inf.matrix()), &tol)?;
    println!("((A^-p + B^-p)/2)^(-1/p) → A ∧ B, final error {:.3e}", r.final_error().unwrap_or(f64::NAN));
    Ok(())
}
