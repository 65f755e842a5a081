//! Askey–Wilson flow coefficients at an eigenvalue `x` of `Y`: the closed form
//! `X(t) = E₁X + E₂Z + E₀` against the Taylor series built from the exact `U_n, V_n, W_n`.

use num_complex::Complex64;
use quasilin::flow::{aw_closed_flow, uvw_recurrence};
use quasilin::poly::RationalComplex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (q, c1, c3) = (RationalComplex::from_ratio(1, 2), RationalComplex::from_ratio(3, 2), RationalComplex::from_ratio(-1, 3));
    let terms = uvw_recurrence(30, &q, &c1, &c3)?;
    let x = Complex64::new(0.7, 0.0);
    println!("{:>5}  {:>24}  {:>24}  {:>24}  {:>10}", "t", "E1", "E2", "E0", "|series-closed|");
    for t in [0.05, 0.1, 0.25, 0.5] {
        let flow = aw_closed_flow(x, q.to_c64(), c1.to_c64(), c3.to_c64(), t)?;
        let (mut e1, mut e2, mut e0) = (Complex64::default(), Complex64::default(), Complex64::default());
        let mut factor = 1.0;
        for (n, term) in terms.iter().enumerate() {
            if n > 0 {
                factor *= t / n as f64;
            }
            e1 += term.u.eval_c64(x) * factor;
            e2 += term.v.eval_c64(x) * factor;
            e0 += term.w.eval_c64(x) * factor;
        }
        let dev = [(e1 - flow.e1).norm(), (e2 - flow.e2).norm(), (e0 - flow.e0).norm()].into_iter().fold(0.0, f64::max);
        println!("{t:>5.2}  {:>24.15}  {:>24.15}  {:>24.15}  {dev:>10.2e}", flow.e1.re, flow.e2.re, flow.e0.re);
    }
    // At q = 1 the flow is a rotation: E₁ = cos t, E₂ = −sin t.
    let flow = aw_closed_flow(x, Complex64::new(1.0, 0.0), Complex64::default(), Complex64::default(), 1.0)?;
    println!("q = 1, t = 1: E1 = {:.15}, E2 = {:.15} (cos 1 = {:.15})", flow.e1.re, flow.e2.re, 1f64.cos());
    Ok(())
}
