//! Limit of (K A^p K*)^{1/p} from a Gram–Schmidt selection, compared with
//! the direct power at a large p.

use kato::cli::format_matrix;
use kato::limits::{congruence_limit, predicted_eigenvalues};
use kato::linalg::{CMatrix, Psd, Tolerances};
use kato::sweep::{dyadic_grid, sweep_map};
use kato::maps::PositiveMapSpec;

fn main() -> kato::Result<()> {
    let tol = Tolerances::default();
    let a = Psd::from_diag(&[3.0, 2.0, 1.0])?;
    let k = CMatrix::from_real_rows(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0]]);

    let r = congruence_limit(&k, &a, &tol)?;
    println!("selected eigenvalue indices: {:?}", r.selected_indices);
    println!("predicted spectrum: {:?}", r.predicted_spectrum);
    println!("limit:\n{}", format_matrix(r.limit.matrix()));

    let pred = predicted_eigenvalues(&k, &a, &tol)?;
    println!("independent columns: {}", pred.independent);

    let phi = PositiveMapSpec::congruence(k)?;
    let sweep = sweep_map(&phi, &a, &dyadic_grid(1024.0), Some(r.limit.matrix()), &tol)?;
    for (p, e) in sweep.p_grid.iter().zip(&sweep.errors) {
        println!("p = {p:>6}: ‖X_p − limit‖ = {e:.3e}");
    }
    Ok(())
}
