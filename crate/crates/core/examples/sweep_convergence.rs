//! Numeric p-sweep with monotonicity diagnostics, emitted as JSON.

use kato::io::ConvergenceJson;
use kato::linalg::{Psd, Tolerances};
use kato::sweep::{dyadic_grid, sweep_sandwich};

fn main() -> kato::Result<()> {
    let tol = Tolerances::default();
    let a = Psd::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]])?;
    let b = Psd::from_diag(&[1.0, 0.5])?;

    // (A^p B A^p)^{1/p}: no closed form in general; the scale tends to A² on supp B
    let r = sweep_sandwich(&a, &b, &dyadic_grid(256.0), &tol)?;
    println!("monotone: {:?}, Cauchy δ at the top: {:.3e}", r.monotone, r.cauchy_delta);
    for (p, track) in r.p_grid.iter().zip(&r.eigenvalue_tracks) {
        println!("p = {p:>4}: eigenvalues {track:.6?}");
    }
    let json = serde_json::to_string_pretty(&ConvergenceJson::from(&r)).expect("report serializes");
    println!("{} bytes of JSON report", json.len());
    Ok(())
}
