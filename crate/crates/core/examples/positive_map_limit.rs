//! Limits of Φ(A^p)^{1/p} and Φ(A^{-p})^{-1/p} for a Kraus map.

use kato::cli::format_matrix;
use kato::limits::{map_limit, neg_map_limit};
use kato::linalg::{CMatrix, Psd, Tolerances};
use kato::maps::PositiveMapSpec;

fn main() -> kato::Result<()> {
    let tol = Tolerances::default();
    let s = 0.5f64.sqrt();
    // Φ(X) = ½ (X + S X S) with S the coordinate swap
    let ops = vec![
        CMatrix::from_real_rows(&[&[s, 0.0], &[0.0, s]]),
        CMatrix::from_real_rows(&[&[0.0, s], &[s, 0.0]]),
    ];
    let phi = PositiveMapSpec::kraus(ops)?;
    println!("unital: {}", phi.is_unital()?.unital);

    let a = Psd::from_real_rows(&[&[4.0, 1.0], &[1.0, 1.0]])?;
    let pos = map_limit(&phi, &a, &tol)?;
    println!("coefficients: {:?}", pos.coefficients);
    for (c, p) in pos.coefficients.iter().zip(&pos.projections) {
        println!("projection for {c:.6} (rank {}):\n{}", p.rank(), format_matrix(p.matrix()));
    }
    println!("lim Φ(A^p)^(1/p):\n{}", format_matrix(pos.limit.matrix()));

    let neg = neg_map_limit(&phi, &a, &tol)?;
    println!("lim Φ(A^-p)^(-1/p):\n{}", format_matrix(neg.limit.matrix()));
    Ok(())
}
