//! Polynomial Poisson brackets: the Jacobi identity, the canonical forms in three and two
//! variables, and the classical quasi-linear flow against Runge–Kutta.

use std::collections::BTreeMap;

use quasilin::poisson::{
    classical_flow_series, classify_canonical_20, classify_canonical_30, jacobi_defect, ode_oracle, satisfies_jacobi,
    PoissonStructure,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let none = BTreeMap::new();
    let xyz = ["x", "y", "z"];
    let structures = [
        ("Askey-Wilson type", [("y", "z", "2*y*z + x + 1"), ("z", "x", "2*x*z + y"), ("x", "y", "2*x*y + z")]),
        ("Lie-Poisson so(3)", [("y", "z", "x"), ("z", "x", "y"), ("x", "y", "z")]),
        ("broken", [("y", "z", "z"), ("z", "x", "x"), ("x", "y", "y")]),
    ];
    for (name, brackets) in &structures {
        let s = PoissonStructure::parse(&xyz, brackets, &none)?;
        let form = classify_canonical_30(&s)?;
        println!("{name}: Jacobi {}, case {}", satisfies_jacobi(&s), form.case_label.as_str());
        for ((i, j, k), defect) in jacobi_defect(&s) {
            if !defect.is_zero() {
                println!("  defect at ({i},{j},{k}): {}", defect.display_with(&xyz));
            }
        }
    }

    let plane = PoissonStructure::parse(&["x", "y"], &[("x", "y", "2*x*y - 1")], &none)?;
    println!("two variables: {:?}", classify_canonical_20(&plane)?.kind);

    // Flow of H = y: x(t) = Σ_n c_n(y) tⁿ/n! with c_n linear in x; compare with RK4.
    let series = classical_flow_series(&plane, 1, 20)?;
    let (x0, t) = ([0.3, 0.8], 0.4);
    let mut x_t = 0.0;
    let mut factor = 1.0;
    for (n, level) in series.iter().enumerate() {
        if n > 0 {
            factor *= t / n as f64;
        }
        x_t += level[&0].eval_f64(&x0) * factor;
    }
    let rk = ode_oracle(&plane, 1, &x0, t, 2000)?;
    println!("x(t = {t}) series {x_t:.12}, RK4 {:.12}", rk[0]);
    Ok(())
}
