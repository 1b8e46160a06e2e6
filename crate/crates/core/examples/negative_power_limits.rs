//! Φ(A^{-p})^{-1/p}: closed form, ε-regularized limit and sweep.

use kato::cli::format_matrix;
use kato::limits::{epsilon_neg_limit, neg_map_limit};
use kato::linalg::{Psd, Tolerances};
use kato::maps::diagonal_to_lines_map;
use kato::sweep::{default_grid, sweep_neg_map};

fn main() -> kato::Result<()> {
    let tol = Tolerances::default();
    let phi = diagonal_to_lines_map();
    let a = Psd::from_diag(&[2.0, 1.0])?;

    let closed = neg_map_limit(&phi, &a, &tol)?;
    println!("closed form:\n{}", format_matrix(closed.limit.matrix()));

    let eps = epsilon_neg_limit(&phi, &a, 8.0, &tol)?;
    println!(
        "ε-limit at p = 8 (ε = {:.0e}, Cauchy δ = {:.1e}, monotone: {}):\n{}",
        eps.epsilon,
        eps.cauchy_delta,
        eps.monotone,
        format_matrix(eps.value.matrix())
    );

    let r = sweep_neg_map(&phi, &a, &default_grid(), Some(closed.limit.matrix()), &tol)?;
    println!("sweep monotone: {:?}, final error {:.3e}", r.monotone, r.final_error().unwrap_or(f64::NAN));
    Ok(())
}
