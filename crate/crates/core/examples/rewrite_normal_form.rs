//! Normal ordering in the q-oscillator and the Askey–Wilson Z-presentation, and the
//! coefficient polynomials of iterated commutators `ad_Y^n X = U_n(Y)X + V_n(Y)Z + W_n(Y)`.

use std::collections::BTreeMap;

use quasilin::flow::uvw_recurrence;
use quasilin::ncrewrite::{NcExpression, RewriteSystem};
use quasilin::poly::RationalComplex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let half = RationalComplex::from_ratio(1, 2);

    let osc = RewriteSystem::q_oscillator(half.clone());
    let e = NcExpression::parse("X*X*Y*Y", &["X", "Y"], &BTreeMap::new())?;
    println!("q-oscillator, q = 1/2:  X*X*Y*Y = {}", osc.normal_form(&e)?);

    let (c1, c2, c3) = (RationalComplex::from_ratio(3, 2), RationalComplex::one(), RationalComplex::from_ratio(-1, 3));
    let aw = RewriteSystem::aw_z(half.clone(), c1.clone(), c2, c3.clone())?;
    let x = NcExpression::generator("X");
    let recurrence = uvw_recurrence(6, &half, &c1, &c3)?;
    for (n, expected) in recurrence.iter().enumerate() {
        let parts = aw.ad_power_nf("Y", &x, n)?.split_leading_powers("Y");
        let get = |g: &str| parts.get(&vec![g.to_string()]).cloned().unwrap_or_default();
        let w = parts.get(&Vec::new()).cloned().unwrap_or_default();
        let agrees = get("X") == expected.u && get("Z") == expected.v && w == expected.w;
        println!(
            "n = {n}: U = {}  V = {}  W = {}  (recurrence {})",
            get("X").display_with("Y"),
            get("Z").display_with("Y"),
            w.display_with("Y"),
            if agrees { "agrees" } else { "DISAGREES" }
        );
    }
    Ok(())
}
