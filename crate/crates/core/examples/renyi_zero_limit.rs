//! Rényi divergences and their α → 0 limits for non-commuting states.

use kato::linalg::{CMatrix, Psd, Tolerances};
use kato::renyi::{alt_trace_monotone, q0_brute, renyi_divergences, zero_limits, DensityMatrix};

fn main() -> kato::Result<()> {
    let tol = Tolerances::default();
    // rank-one ρ = |ψ⟩⟨ψ| with ψ = (1, 1, 0)/√2
    let rho = DensityMatrix::new(Psd::new(CMatrix::from_real_rows(&[
        &[0.5, 0.5, 0.0],
        &[0.5, 0.5, 0.0],
        &[0.0, 0.0, 0.0],
    ]))?)?;
    let sigma = DensityMatrix::from_diag(&[0.5, 0.3, 0.2])?;

    for alpha in [0.5, 0.1, 0.01] {
        let (d, dt) = renyi_divergences(&rho, &sigma, alpha, &tol)?;
        println!("α = {alpha:<5} D = {d}, D̃ = {dt}");
    }

    let rep = zero_limits(&rho, &sigma, &tol)?;
    println!("D_0 = {}, D̃_0 = {}, Q̃_0 = {:.6}", rep.d0, rep.d0_tilde, rep.q0_tilde);
    println!("commuting: {}, equality: {}", rep.commutes, rep.equality);
    println!("brute-force Q̃_0 = {:.6}", q0_brute(&rho, &sigma, &tol)?);

    let grid: Vec<f64> = (0..=8).map(|k| 2f64.powi(k)).collect();
    let alt = alt_trace_monotone(&rho.support(&tol)?, &sigma, &grid, &tol)?;
    println!("Tr(ρ⁰ σ^(1/p) ρ⁰)^p, increasing in p: {alt:.6?}");
    Ok(())
}
