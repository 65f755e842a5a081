//! Dolan–Grady relations on the Pauli pair `(σx, σz)`: the closed-form flow under `A₁`
//! and Onsager's commuting transfer matrix `T = e^{−τA₀}e^{tA₁}`.

use num_complex::Complex64;
use quasilin::flow::{dg_closed_flow, matrix_exp, onsager_transfer_check, onsager_transfer_residual, DgHamiltonian, DgPair};
use quasilin::linalg::{max_abs, CMatrix};
use quasilin::reps::rep_pauli_dg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rep = rep_pauli_dg();
    let pair = DgPair::new(rep.op("A0")?.clone(), rep.op("A1")?.clone())?;
    let omega = Complex64::new(2.0, 0.0);
    println!("Dolan-Grady residual at omega = 2: {:.2e}", pair.dg_residual(omega));

    for t in [0.1, 0.5, 1.0] {
        let flow = dg_closed_flow(&pair, omega, DgHamiltonian::A1, t, 1e-12)?;
        let u = matrix_exp(&pair.a1, t)?;
        let u_inv = matrix_exp(&pair.a1, -t)?;
        let oracle: CMatrix = &u * &pair.a0 * &u_inv;
        println!("t = {t}: |closed - exp| = {:.2e}", max_abs(&(&flow["A0"] - &oracle)));
    }

    for (t, tau, gamma) in [(0.3, 0.7, 1.0), (1.0, 0.5, -0.4)] {
        let exact = onsager_transfer_check(&pair, omega, t, tau, gamma, 1e-12)?;
        let perturbed = onsager_transfer_residual(&pair, omega, t, tau, gamma, 1.1)?;
        println!("t = {t}, tau = {tau}: |[T, W]| = {exact:.2e}; with alpha * 1.1: {perturbed:.3e}");
    }
    Ok(())
}
