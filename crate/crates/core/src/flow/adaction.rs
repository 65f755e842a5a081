use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{matrix_exp, FlowError};
use crate::linalg::{identity, CMatrix};
use crate::poly::{parse_poly_with, Poly1, RationalComplex};

/// Name of the distinguished unit slot in an [`AdAction`] basis.
pub const UNIT: &str = "1";

/// `ad_H` on a finite basis: `[H, b_k] = Σ_s F_ks(H) b_s`, with `F_ks` polynomials in `H`.
///
/// The basis contains the unit slot [`UNIT`] exactly once; its row is zero
/// (`[H, 1] = 0`) and its column carries the inhomogeneous terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdAction {
    hamiltonian: String,
    basis: Vec<String>,
    f: Vec<Vec<Poly1>>,
}

type PolyMatrix = Vec<Vec<Poly1>>;

fn poly_identity(n: usize) -> PolyMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Poly1::one() } else { Poly1::zero() }).collect()).collect()
}

fn poly_matmul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .filter(|&k| !a[i][k].is_zero() && !b[k][j].is_zero())
                        .fold(Poly1::zero(), |acc, k| acc + &a[i][k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

impl AdAction {
    pub fn new(hamiltonian: &str, basis: &[&str], f: Vec<Vec<Poly1>>) -> Result<Self, FlowError> {
        let n = basis.len();
        let unique: BTreeSet<_> = basis.iter().collect();
        if unique.len() != n {
            return Err(FlowError::InvalidAdAction("duplicate basis name".into()));
        }
        if basis.iter().filter(|b| **b == UNIT).count() != 1 {
            return Err(FlowError::InvalidAdAction(format!("basis must contain the unit slot '{UNIT}' once")));
        }
        if basis.contains(&hamiltonian) {
            return Err(FlowError::InvalidAdAction(format!("hamiltonian '{hamiltonian}' cannot be a basis element")));
        }
        if f.len() != n || f.iter().any(|row| row.len() != n) {
            return Err(FlowError::InvalidAdAction(format!("F must be {n}x{n}")));
        }
        let u = basis.iter().position(|b| *b == UNIT).expect("checked above");
        if f[u].iter().any(|p| !p.is_zero()) {
            return Err(FlowError::InvalidAdAction("unit row must be zero".into()));
        }
        Ok(Self { hamiltonian: hamiltonian.to_string(), basis: basis.iter().map(|s| s.to_string()).collect(), f })
    }

    /// Builds an action from textual entries in the reserved Hamiltonian symbol `H`.
    pub fn parse(
        hamiltonian: &str,
        basis: &[&str],
        f: &[Vec<String>],
        params: &BTreeMap<String, RationalComplex>,
    ) -> Result<Self, FlowError> {
        let rows = f
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        let p = parse_poly_with(s, &["H"], params)?;
                        Ok(p.as_univariate(0).expect("single variable"))
                    })
                    .collect::<Result<Vec<_>, FlowError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(hamiltonian, basis, rows)
    }

    /// `q`-oscillator `XY − qYX = 1` under `ad_Y`: basis `(X, 1)`, `F = [[ωH, −1], [0, 0]]`, `ω = 1 − q`.
    pub fn q_oscillator(q: &RationalComplex) -> Self {
        let omega = RationalComplex::one() - q;
        let f = vec![vec![Poly1::monomial(omega, 1), Poly1::constant(-RationalComplex::one())], vec![
            Poly1::zero(),
            Poly1::zero(),
        ]];
        Self::new("Y", &["X", UNIT], f).expect("valid builtin")
    }

    /// Weyl pair `XY = qYX` under `ad_Y`: `[Y, X] = (1 − q) Y X`.
    pub fn weyl(q: &RationalComplex) -> Self {
        let omega = RationalComplex::one() - q;
        let f = vec![vec![Poly1::monomial(omega, 1), Poly1::zero()], vec![Poly1::zero(), Poly1::zero()]];
        Self::new("Y", &["X", UNIT], f).expect("valid builtin")
    }

    /// Askey–Wilson Z-presentation under `ad_Y` on the basis `(X, Z, 1)`:
    /// `[Y,X] = (1−q)YX − Z − C₃`, `[Y,Z] = q⁻¹X + (1−q⁻¹)YZ + q⁻¹C₁`.
    pub fn aw_z(q: &RationalComplex, c1: &RationalComplex, c3: &RationalComplex) -> Result<Self, FlowError> {
        let qi = q.inv().ok_or(FlowError::ZeroParameter("q"))?;
        let one = RationalComplex::one();
        let f = vec![
            vec![Poly1::monomial(&one - q, 1), Poly1::constant(-one.clone()), Poly1::constant(-c3.clone())],
            vec![Poly1::constant(qi.clone()), Poly1::monomial(&one - &qi, 1), Poly1::constant(&qi * c1)],
            vec![Poly1::zero(), Poly1::zero(), Poly1::zero()],
        ];
        Self::new("Y", &["X", "Z", UNIT], f)
    }

    pub fn hamiltonian(&self) -> &str {
        &self.hamiltonian
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn f(&self) -> &[Vec<Poly1>] {
        &self.f
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn unit_index(&self) -> usize {
        self.index_of(UNIT).expect("unit slot is an invariant")
    }

    /// Coordinates of `ad_H^n b_k`: row `k` of `F^n`.
    pub fn ad_power_row(&self, k: usize, n: usize) -> Vec<Poly1> {
        let dim = self.dim();
        let mut row: Vec<Poly1> = (0..dim).map(|j| if j == k { Poly1::one() } else { Poly1::zero() }).collect();
        for _ in 0..n {
            row = (0..dim)
                .map(|j| {
                    (0..dim)
                        .filter(|&s| !row[s].is_zero() && !self.f[s][j].is_zero())
                        .fold(Poly1::zero(), |acc, s| acc + &row[s] * &self.f[s][j])
                })
                .collect();
        }
        row
    }

    /// Evaluates every entry of `F` at the matrix `H`.
    pub fn eval_f(&self, h: &CMatrix) -> Result<Vec<Vec<CMatrix>>, FlowError> {
        self.f
            .iter()
            .map(|row| row.iter().map(|p| p.eval_matrix(h).map_err(FlowError::from)).collect())
            .collect()
    }

    /// Largest relative residual of `[H, b_k] − Σ_s F_ks(H) b_s` over the non-unit basis,
    /// i.e. how well the concrete matrices realise the declared commutation relations.
    pub fn relation_residual(&self, h: &CMatrix, ops: &BTreeMap<String, CMatrix>) -> Result<f64, FlowError> {
        let mats = self.basis_matrices(h, ops)?;
        let fh = self.eval_f(h)?;
        let mut worst: f64 = 0.0;
        for (k, name) in self.basis.iter().enumerate() {
            if name == UNIT {
                continue;
            }
            let lhs = crate::linalg::commutator(h, &mats[k]);
            let mut rhs = CMatrix::zeros(h.nrows(), h.nrows());
            for s in 0..self.dim() {
                rhs += &fh[k][s] * &mats[s];
            }
            let scale = crate::linalg::frobenius(&lhs).max(crate::linalg::frobenius(&rhs));
            worst = worst.max(crate::linalg::relative(crate::linalg::frobenius(&(lhs - rhs)), scale));
        }
        Ok(worst)
    }

    /// The basis matrices in basis order with the identity in the unit slot.
    fn basis_matrices(&self, h: &CMatrix, ops: &BTreeMap<String, CMatrix>) -> Result<Vec<CMatrix>, FlowError> {
        if !h.is_square() {
            return Err(FlowError::NonSquare { rows: h.nrows(), cols: h.ncols() });
        }
        let d = h.nrows();
        self.basis
            .iter()
            .map(|name| {
                if name == UNIT {
                    return Ok(identity(d));
                }
                let m = ops.get(name).ok_or_else(|| FlowError::MissingOperator(name.clone()))?;
                if m.shape() != (d, d) {
                    return Err(FlowError::DimensionMismatch { expected: d, found: m.nrows().max(m.ncols()) });
                }
                Ok(m.clone())
            })
            .collect()
    }
}

/// Exact Taylor coefficients of `exp(tF(H))`: `coeffs[n] = F^n / n!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowSeries {
    basis: Vec<String>,
    coeffs: Vec<PolyMatrix>,
}

impl FlowSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    /// The matrix `F^n / n!`.
    pub fn coeff_matrix(&self, n: usize) -> &[Vec<Poly1>] {
        &self.coeffs[n]
    }

    /// Coefficient of `tⁿ` in the `col` component of the evolved `row` element.
    pub fn coeff(&self, n: usize, row: &str, col: &str) -> Option<&Poly1> {
        let i = self.basis.iter().position(|b| b == row)?;
        let j = self.basis.iter().position(|b| b == col)?;
        self.coeffs.get(n).map(|m| &m[i][j])
    }

    /// Evaluates the truncated flow on matrices: `b_k(t) ≈ Σ_n tⁿ Σ_s (Fⁿ/n!)_ks(H) b_s`.
    pub fn evaluate(
        &self,
        action: &AdAction,
        h: &CMatrix,
        ops: &BTreeMap<String, CMatrix>,
        t: f64,
    ) -> Result<BTreeMap<String, CMatrix>, FlowError> {
        let mats = action.basis_matrices(h, ops)?;
        let d = h.nrows();
        let mut out = BTreeMap::new();
        for (k, name) in self.basis.iter().enumerate() {
            if name == UNIT {
                continue;
            }
            let mut acc = CMatrix::zeros(d, d);
            for (n, cm) in self.coeffs.iter().enumerate() {
                let tn = t.powi(n as i32);
                for (s, p) in cm[k].iter().enumerate() {
                    if !p.is_zero() {
                        acc += p.eval_matrix(h)? * &mats[s] * crate::linalg::c(tn, 0.0);
                    }
                }
            }
            out.insert(name.clone(), acc);
        }
        Ok(out)
    }
}

/// Exact series `exp(tF) = Σ tⁿ Fⁿ/n!` up to `order`, unit column included.
pub fn series_flow(action: &AdAction, order: usize) -> FlowSeries {
    let n = action.dim();
    let mut coeffs = vec![poly_identity(n)];
    for k in 1..=order {
        let inv_k = RationalComplex::real(BigRational::new(BigInt::from(1), BigInt::from(k)));
        let next = poly_matmul(&coeffs[k - 1], &action.f)
            .into_iter()
            .map(|row| row.into_iter().map(|p| p.scale(&inv_k)).collect())
            .collect();
        coeffs.push(next);
    }
    FlowSeries { basis: action.basis.clone(), coeffs }
}

/// Evolves every non-unit basis matrix under `H` for time `t`.
///
/// The stacked vector `V = (b_1, …, b_m)` obeys `V' = F(H) V` blockwise, so
/// `V(t) = exp(t·F(H)) V(0)`; the unit block carries `G(H; t)` automatically.
pub fn numeric_flow(
    action: &AdAction,
    h: &CMatrix,
    ops: &BTreeMap<String, CMatrix>,
    t: f64,
) -> Result<BTreeMap<String, CMatrix>, FlowError> {
    let mats = action.basis_matrices(h, ops)?;
    let d = h.nrows();
    let m = action.dim();
    let fh = action.eval_f(h)?;
    let mut block = CMatrix::zeros(m * d, m * d);
    for k in 0..m {
        for s in 0..m {
            block.view_mut((k * d, s * d), (d, d)).copy_from(&fh[k][s]);
        }
    }
    let mut stacked = CMatrix::zeros(m * d, d);
    for (s, mat) in mats.iter().enumerate() {
        stacked.view_mut((s * d, 0), (d, d)).copy_from(mat);
    }
    let evolved = matrix_exp(&block, t)? * stacked;
    Ok(action
        .basis
        .iter()
        .enumerate()
        .filter(|(_, name)| *name != UNIT)
        .map(|(k, name)| (name.clone(), evolved.view((k * d, 0), (d, d)).into_owned()))
        .collect())
}
