//! Heisenberg flow of the q-oscillator `XY − qYX = 1` under `H = Y`: the closed form
//! `e^{tY} X e^{−tY}` against a dense matrix-exponential oracle on a truncated Fock space.

use quasilin::flow::{heisenberg_oracle, numeric_flow, qosc_closed_flow, AdAction};
use quasilin::linalg::max_abs;
use quasilin::poly::RationalComplex;
use quasilin::reps::rep_q_oscillator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = RationalComplex::from_ratio(1, 2);
    let rep = rep_q_oscillator(40, &q)?;
    let (y, x) = rep.pair().expect("the q-oscillator rep names its pair");
    let cols = rep.verified_cols();
    let action = AdAction::q_oscillator(&q);
    println!("d = {}, comparing the first {cols} columns (truncation corrupts the rest)", rep.dim());
    println!("{:>6}  {:>14}  {:>14}", "t", "closed form", "ad-action exp");
    for t in [-0.5, -0.1, 0.0, 0.1, 0.5, 1.0] {
        let oracle = heisenberg_oracle(y, x, t)?;
        let closed = qosc_closed_flow(y, x, &q, t)?;
        let numeric = numeric_flow(&action, y, rep.ops(), t)?;
        let dev = |m: &quasilin::linalg::CMatrix| max_abs(&(m - &oracle).columns(0, cols).into_owned());
        println!("{t:>6.2}  {:>14.3e}  {:>14.3e}", dev(&closed), dev(&numeric["X"]));
    }
    Ok(())
}
