//! Operator means A σ B and the limits of (A^p σ B)^{1/p}.

use kato::cli::format_matrix;
use kato::linalg::{Psd, Tolerances};
use kato::means::{classify_power_monotonicity, f_tilde_infinity, geometric_limit, mean_eval, MeanSpec};
use kato::sweep::{default_grid, sweep_mean};

fn main() -> kato::Result<()> {
    let tol = Tolerances::default();
    let a = Psd::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]])?;
    let b = Psd::from_diag(&[1.0, 0.0])?;

    for name in ["arithmetic:0.3", "geometric:0.3", "harmonic:0.3", "logarithmic"] {
        let spec = MeanSpec::parse(name)?;
        let m = mean_eval(&spec, &a, &b, &tol)?;
        println!(
            "{name}: power class {:?}, f̃∞(2) = {:.4}\nA σ B =\n{}",
            classify_power_monotonicity(&spec),
            f_tilde_infinity(&spec, 2.0)?,
            format_matrix(&m)
        );
    }

    let geo = MeanSpec::geometric(0.3)?;
    let limit = geometric_limit(&a, &b, 0.3, &tol)?;
    println!("lim (A^p #_0.3 B)^(1/p):\n{}", format_matrix(limit.matrix()));
    let r = sweep_mean(&geo, &a, &b, &default_grid(), Some(limit.matrix()), &tol)?;
    for (p, e) in r.p_grid.iter().zip(&r.errors) {
        println!("p = {p:>6}: error {e:.3e}");
    }
    Ok(())
}
