use std::collections::BTreeMap;

use super::{PoissonError, PoissonStructure};
use crate::flow::{AdAction, UNIT};
use crate::poly::{Poly1, PolyN};

/// `{x_k, x_j} = Σ′_s F_s(x_j) x_s + Φ(x_j)` for a Hamiltonian `x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiLinearDecomposition {
    pub hamiltonian: usize,
    pub k: usize,
    /// `s ↦ F_s`, only nonzero entries, `s ≠ j`.
    pub f: BTreeMap<usize, Poly1>,
    pub phi: Poly1,
}

impl QuasiLinearDecomposition {
    /// `Σ′_s F_s(x_j) x_s + Φ(x_j)` as a polynomial in `nvars` variables.
    pub fn reassemble(&self, nvars: usize) -> PolyN {
        let j = self.hamiltonian;
        let mut out = PolyN::from_univariate(&self.phi, nvars, j);
        for (&s, p) in &self.f {
            out = &out + &(&PolyN::from_univariate(p, nvars, j) * &PolyN::var(nvars, s));
        }
        out
    }
}

/// Decomposes every `{x_k, x_j}`, `k ≠ j`; fails with the first bracket that is not
/// of degree ≤ 1 in the non-Hamiltonian variables.
pub fn quasi_linear_decompose(
    s: &PoissonStructure,
    j: usize,
) -> Result<BTreeMap<usize, QuasiLinearDecomposition>, PoissonError> {
    let n = s.nvars();
    if j >= n {
        return Err(PoissonError::IndexOutOfRange { index: j, nvars: n });
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let mut out = BTreeMap::new();
    for &k in &others {
        let b = s.bracket(k, j);
        if b.degree_profile(&others) > 1 {
            return Err(PoissonError::NotQuasiLinear(k));
        }
        let mut f: BTreeMap<usize, Vec<_>> = BTreeMap::new();
        let mut phi = Vec::new();
        for (m, c) in b.terms() {
            let power = m.0[j] as usize;
            let slot = match others.iter().find(|&&s| m.0[s] == 1) {
                Some(&s) => f.entry(s).or_default(),
                None => &mut phi,
            };
            if slot.len() <= power {
                slot.resize(power + 1, Default::default());
            }
            slot[power] = c.clone();
        }
        let f = f.into_iter().map(|(s, cs)| (s, Poly1::new(cs))).filter(|(_, p)| !p.is_zero()).collect();
        out.insert(k, QuasiLinearDecomposition { hamiltonian: j, k, f, phi: Poly1::new(phi) });
    }
    Ok(out)
}

/// `{·, x_j}` on the basis `(x_k)_{k≠j}` plus the unit slot, as an [`AdAction`].
pub fn classical_ad_action(s: &PoissonStructure, j: usize) -> Result<AdAction, PoissonError> {
    let dec = quasi_linear_decompose(s, j)?;
    let others: Vec<usize> = dec.keys().copied().collect();
    let mut basis: Vec<&str> = others.iter().map(|&k| s.vars()[k].as_str()).collect();
    basis.push(UNIT);
    let m = basis.len();
    let mut f = vec![vec![Poly1::zero(); m]; m];
    for (row, k) in others.iter().enumerate() {
        let d = &dec[k];
        for (col, s_idx) in others.iter().enumerate() {
            if let Some(p) = d.f.get(s_idx) {
                f[row][col] = p.clone();
            }
        }
        f[row][m - 1] = d.phi.clone();
    }
    Ok(AdAction::new(&s.vars()[j], &basis, f).expect("basis built from distinct variable names"))
}

/// Coefficients of `tⁿ/n!` in `x_k(t)` for `n = 0..=order`: entry `n` maps `k ↦ {x_k, H⁽ⁿ⁾}`,
/// linear in the `x_s(0)`, `s ≠ j`, with polynomial coefficients in `x_j`.
pub fn classical_flow_series(
    s: &PoissonStructure,
    j: usize,
    order: usize,
) -> Result<Vec<BTreeMap<usize, PolyN>>, PoissonError> {
    let action = classical_ad_action(s, j)?;
    let n = s.nvars();
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let m = action.dim();
    let mut rows: Vec<Vec<Poly1>> = (0..others.len())
        .map(|r| (0..m).map(|c| if c == r { Poly1::one() } else { Poly1::zero() }).collect())
        .collect();
    let mut out = Vec::with_capacity(order + 1);
    for step in 0..=order {
        if step > 0 {
            rows = rows
                .iter()
                .map(|row| {
                    (0..m)
                        .map(|c| {
                            (0..m)
                                .filter(|&s| !row[s].is_zero() && !action.f()[s][c].is_zero())
                                .fold(Poly1::zero(), |acc, s| acc + &row[s] * &action.f()[s][c])
                        })
                        .collect()
                })
                .collect();
        }
        let mut level = BTreeMap::new();
        for (r, &k) in others.iter().enumerate() {
            let mut p = PolyN::from_univariate(&rows[r][m - 1], n, j);
            for (c, &s_idx) in others.iter().enumerate() {
                if !rows[r][c].is_zero() {
                    p = &p + &(&PolyN::from_univariate(&rows[r][c], n, j) * &PolyN::var(n, s_idx));
                }
            }
            level.insert(k, p);
        }
        out.push(level);
    }
    Ok(out)
}

/// Classical fourth-order Runge–Kutta for `ẋ_k = {x_k, x_j}` with fixed steps.
/// `x_j` stays at its initial value since `{x_j, x_j} = 0`.
pub fn ode_oracle(
    s: &PoissonStructure,
    j: usize,
    x0: &[f64],
    t: f64,
    steps: usize,
) -> Result<Vec<f64>, PoissonError> {
    let n = s.nvars();
    if j >= n {
        return Err(PoissonError::IndexOutOfRange { index: j, nvars: n });
    }
    if x0.len() != n {
        return Err(PoissonError::VarCount { expected: n, found: x0.len() });
    }
    let rhs: Vec<PolyN> = (0..n).map(|k| s.bracket(k, j)).collect();
    let field = |x: &[f64]| -> Vec<f64> { rhs.iter().map(|p| p.eval_f64(x)).collect() };
    let axpy = |x: &[f64], a: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect() };
    let steps = steps.max(1);
    let h = t / steps as f64;
    let mut x = x0.to_vec();
    for _ in 0..steps {
        let k1 = field(&x);
        let k2 = field(&axpy(&x, h / 2.0, &k1));
        let k3 = field(&axpy(&x, h / 2.0, &k2));
        let k4 = field(&axpy(&x, h, &k3));
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(x)
}
