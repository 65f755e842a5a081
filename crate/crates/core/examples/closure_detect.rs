//! Detecting a closure ansatz `[H,[H,X]] = W₁(H)X + W₂(H)[H,X] + W₀(H)` from matrices alone,
//! fitting tridiagonal constants, and testing the spectrum of `X` for an Askey–Wilson grid.

use quasilin::reps::{
    aw_grid_check, detect_closure, fit_tridiagonal_constants, grid_verdict, rep_krawtchouk, rep_pauli_dg,
    rep_random_tridiagonal, DEFAULT_BOUNDS,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Both reps use X = diag(s), so both spectra lie on a linear grid; only the closure tells them apart.
    for rep in [rep_krawtchouk(12, 1.0 / 3.0)?, rep_random_tridiagonal(12, 4)] {
        let (h, x) = rep.pair().expect("both reps name a pair");
        let fit = detect_closure(h, x, DEFAULT_BOUNDS)?;
        let spectrum: Vec<_> = x.diagonal().iter().copied().collect();
        let grid = aw_grid_check(&spectrum)?;
        println!(
            "{}: closure residual {:.2e}, grid {}",
            if rep.metadata().contains_key("p") { "Krawtchouk" } else { "random" },
            fit.residual,
            grid_verdict(&grid, 1e-10)
        );
        println!("  W1 = {:.4?}", fit.w1.iter().map(|c| c.re).collect::<Vec<_>>());
    }

    let pauli = rep_pauli_dg();
    let fit = fit_tridiagonal_constants(pauli.op("A0")?, pauli.op("A1")?)?;
    let c = &fit.constants;
    println!(
        "Pauli pair: beta = {:.6}, gamma = {:.6}, gamma1 = {:.6}, alpha = {:.6}, alpha1 = {:.6} (residual {:.1e}{})",
        c.beta.re,
        c.gamma.re,
        c.gamma1.re,
        c.alpha.re,
        c.alpha1.re,
        fit.residual,
        if fit.underdetermined { ", underdetermined" } else { "" }
    );
    Ok(())
}
