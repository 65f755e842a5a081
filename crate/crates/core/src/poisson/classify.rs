use std::fmt;

use super::{curl_test_3, PoissonError, PoissonStructure};
use crate::poly::{PolyN, RationalComplex};

/// Canonical cases for three generators with `F_i = α_i x_k x_l + Σ_s β_is x_s + γ_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// All `β_ii ≠ 0`, `α₁ = α₂ = α₃ ≠ 0` (classical Askey–Wilson).
    I,
    /// One zero diagonal entry, equal nonzero `α`.
    Ii,
    /// Two zero diagonal entries, equal nonzero `α`.
    Iii,
    /// Two zero diagonal entries, `α_k = α_l ≠ α_i`, all nonzero (not of Nambu type).
    Iv,
    /// Degeneration of (iv) with `α_i = 0`.
    VA,
    /// Degeneration of (iv) with `α_k = α_l = 0`.
    VB,
    /// All `β_ii = 0`, `α₁α₂α₃ ≠ 0`.
    Vi,
    /// All `α_i = 0`.
    LiePoisson,
    Unclassified,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::I => "i",
            CaseLabel::Ii => "ii",
            CaseLabel::Iii => "iii",
            CaseLabel::Iv => "iv",
            CaseLabel::VA => "v-a",
            CaseLabel::VB => "v-b",
            CaseLabel::Vi => "vi",
            CaseLabel::LiePoisson => "lie_poisson",
            CaseLabel::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Extracted coefficients and the case they fall into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical30Form {
    pub alphas: [RationalComplex; 3],
    pub betas: [[RationalComplex; 3]; 3],
    pub gammas: [RationalComplex; 3],
    pub case_label: CaseLabel,
    /// Why the structure is unclassified, if it is.
    pub note: Option<String>,
}

impl Canonical30Form {
    /// `F_i = α_i x_k x_l + Σ_s β_is x_s + γ_i`.
    pub fn reconstruct(&self, i: usize) -> PolyN {
        let (k, l) = others(i);
        let mut p = PolyN::constant(3, self.gammas[i].clone());
        p = &p + &(&PolyN::var(3, k) * &PolyN::var(3, l)).scale(&self.alphas[i]);
        for s in 0..3 {
            p = &p + &PolyN::var(3, s).scale(&self.betas[i][s]);
        }
        p
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// `F_i = {x_k, x_l}` with `(i, k, l)` cyclic.
fn f_component(s: &PoissonStructure, i: usize) -> PolyN {
    s.bracket((i + 1) % 3, (i + 2) % 3)
}

/// Classifies a three-generator structure by the zero pattern of `diag β` and the `α_i`.
///
/// Both are invariant under `x_i → ξ_i x_i + η_i`, so the label does not depend on the
/// affine frame. Structures violating the shape or the Jacobi identity are unclassified.
pub fn classify_canonical_30(s: &PoissonStructure) -> Result<Canonical30Form, PoissonError> {
    if s.nvars() != 3 {
        return Err(PoissonError::VarCount { expected: 3, found: s.nvars() });
    }
    let zero = RationalComplex::zero;
    let mut form = Canonical30Form {
        alphas: [zero(), zero(), zero()],
        betas: Default::default(),
        gammas: [zero(), zero(), zero()],
        case_label: CaseLabel::Unclassified,
        note: None,
    };
    for i in 0..3 {
        let (k, l) = others(i);
        for (m, c) in f_component(s, i).terms() {
            let e = &m.0;
            match e.iter().sum::<u32>() {
                0 => form.gammas[i] = c.clone(),
                1 => form.betas[i][e.iter().position(|&x| x == 1).expect("degree one")] = c.clone(),
                2 if e[k] == 1 && e[l] == 1 => form.alphas[i] = c.clone(),
                _ => {
                    form.note = Some(format!("F{} has a term outside the quasi-linear shape", i + 1));
                    return Ok(form);
                }
            }
        }
    }
    if !curl_test_3(s)?.is_zero() {
        form.note = Some("Jacobi identity violated (F . rot F != 0)".into());
        return Ok(form);
    }
    let (label, note) = case_of(&form.alphas, &form.betas);
    form.case_label = label;
    form.note = note;
    Ok(form)
}

fn case_of(alphas: &[RationalComplex; 3], betas: &[[RationalComplex; 3]; 3]) -> (CaseLabel, Option<String>) {
    let nz = |c: &RationalComplex| !c.is_zero();
    if alphas.iter().all(|a| a.is_zero()) {
        return (CaseLabel::LiePoisson, None);
    }
    let equal = alphas[0] == alphas[1] && alphas[1] == alphas[2];
    let diag: Vec<usize> = (0..3).filter(|&i| nz(&betas[i][i])).collect();
    let unclassified = |why: &str| (CaseLabel::Unclassified, Some(why.to_string()));
    match diag.len() {
        3 if equal => (CaseLabel::I, None),
        2 if equal => (CaseLabel::Ii, None),
        3 | 2 => unclassified("nonzero diagonal of beta requires alpha_1 = alpha_2 = alpha_3"),
        1 => {
            if equal {
                return (CaseLabel::Iii, None);
            }
            let p = diag[0];
            let (k, l) = others(p);
            if alphas[k] != alphas[l] {
                return unclassified("alpha entries off the distinguished generator differ");
            }
            match (nz(&alphas[p]), nz(&alphas[k])) {
                (true, true) => (CaseLabel::Iv, None),
                (false, true) => (CaseLabel::VA, None),
                (true, false) => (CaseLabel::VB, None),
                (false, false) => unreachable!("all-zero alphas handled above"),
            }
        }
        _ if alphas.iter().all(nz) => (CaseLabel::Vi, None),
        _ => unclassified("zero diagonal with some alpha_i = 0 matches no canonical case"),
    }
}

/// Canonical form of a two-generator bracket `{x, y} = αxy + β₁x + β₂y + γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoVarKind {
    /// `α ≠ 0`, irreducible: affinely equivalent to `{x, y} = αxy − 1`.
    QOscillator,
    /// `α ≠ 0`, reducible (`αγ = β₁β₂`): affinely equivalent to `{x, y} = αxy`.
    Weyl,
    /// `α = 0`: a linear (Lie–Poisson) bracket.
    Linear,
    /// Not of the quasi-linear shape.
    NotQuasiLinear,
}

impl fmt::Display for TwoVarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwoVarKind::QOscillator => "(2,0): canonical q-oscillator bracket {x,y} = alpha*x*y - 1",
            TwoVarKind::Weyl => "(2,0): canonical Weyl bracket {x,y} = alpha*x*y",
            TwoVarKind::Linear => "(2,0): linear bracket (alpha = 0)",
            TwoVarKind::NotQuasiLinear => "not quasi-linear",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical20Form {
    pub alpha: RationalComplex,
    pub beta1: RationalComplex,
    pub beta2: RationalComplex,
    pub gamma: RationalComplex,
    pub kind: TwoVarKind,
    /// `(ξ, η)` with `x'_i = ξ_i x_i + η_i` carrying the bracket to its canonical form,
    /// when `α ≠ 0`.
    pub transform: Option<([RationalComplex; 2], [RationalComplex; 2])>,
}

/// Reads `{x₁, x₂}` as `αx₁x₂ + β₁x₁ + β₂x₂ + γ` and names its canonical form.
pub fn classify_canonical_20(s: &PoissonStructure) -> Result<Canonical20Form, PoissonError> {
    if s.nvars() != 2 {
        return Err(PoissonError::VarCount { expected: 2, found: s.nvars() });
    }
    let h = s.bracket(0, 1);
    let coeff = |e: [u32; 2]| h.coeff(&e);
    let mut form = Canonical20Form {
        alpha: coeff([1, 1]),
        beta1: coeff([1, 0]),
        beta2: coeff([0, 1]),
        gamma: coeff([0, 0]),
        kind: TwoVarKind::NotQuasiLinear,
        transform: None,
    };
    if h.terms().any(|(m, _)| m.0[0] > 1 || m.0[1] > 1) {
        return Ok(form);
    }
    let Some(inv_alpha) = form.alpha.inv() else {
        form.kind = TwoVarKind::Linear;
        return Ok(form);
    };
    // αxy + β₁x + β₂y + γ = α(x + β₂/α)(y + β₁/α) + δ with δ = γ − β₁β₂/α.
    let shift_x = &form.beta2 * &inv_alpha;
    let shift_y = &form.beta1 * &inv_alpha;
    let delta = &form.gamma - &(&(&form.beta1 * &form.beta2) * &inv_alpha);
    let one = RationalComplex::one();
    form.transform = Some(match (-&delta).inv() {
        // Rescaling x by −1/δ turns the constant δ into −1.
        Some(k) => {
            form.kind = TwoVarKind::QOscillator;
            ([k.clone(), one], [&shift_x * &k, shift_y])
        }
        None => {
            form.kind = TwoVarKind::Weyl;
            ([one.clone(), one], [shift_x, shift_y])
        }
    });
    Ok(form)
}

/// The structure in the coordinates `x'_i = ξ_i x_i + η_i`:
/// `{x'_i, x'_k} = ξ_i ξ_k h_ik((x' − η)/ξ)`.
pub fn affine_transform(
    s: &PoissonStructure,
    xi: &[RationalComplex],
    eta: &[RationalComplex],
) -> Result<PoissonStructure, PoissonError> {
    let n = s.nvars();
    if xi.len() != n || eta.len() != n {
        return Err(PoissonError::VarCount { expected: n, found: xi.len().min(eta.len()) });
    }
    let inv: Vec<RationalComplex> = xi
        .iter()
        .enumerate()
        .map(|(i, x)| x.inv().ok_or(PoissonError::SingularTransform(i)))
        .collect::<Result<_, _>>()?;
    let shift: Vec<RationalComplex> = eta.iter().zip(&inv).map(|(e, v)| -(e * v)).collect();
    let mut out = PoissonStructure::new(&s.var_refs())?;
    for (i, k, h) in s.brackets() {
        let image = h.compose_affine(&inv, &shift).scale(&(&xi[i] * &xi[k]));
        out.set_bracket(i, k, image)?;
    }
    Ok(out)
}

/// Checks that `x'_i = ξ_i x_i + η_i` carries `s` exactly onto `target`.
pub fn verify_affine(
    s: &PoissonStructure,
    xi: &[RationalComplex],
    eta: &[RationalComplex],
    target: &PoissonStructure,
) -> Result<bool, PoissonError> {
    let image = affine_transform(s, xi, eta)?;
    let n = s.nvars();
    if target.nvars() != n {
        return Err(PoissonError::VarCount { expected: n, found: target.nvars() });
    }
    Ok((0..n).all(|i| (i + 1..n).all(|k| image.bracket(i, k) == target.bracket(i, k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn structure(f: [&str; 3]) -> PoissonStructure {
        PoissonStructure::parse(&["x", "y", "z"], &[("y", "z", f[0]), ("z", "x", f[1]), ("x", "y", f[2])], &BTreeMap::new())
            .unwrap()
    }

    fn label(f: [&str; 3]) -> CaseLabel {
        classify_canonical_30(&structure(f)).unwrap().case_label
    }

    #[test]
    fn canonical_cases() {
        assert_eq!(label(["2*y*z + x + 1", "2*x*z + y - 3", "2*x*y + z + 5"]), CaseLabel::I);
        assert_eq!(label(["2*y*z + x + 1", "2*x*z + y - 3", "2*x*y + 5"]), CaseLabel::Ii);
        assert_eq!(label(["2*y*z + x + 1", "2*x*z - 3", "2*x*y + 5"]), CaseLabel::Iii);
        assert_eq!(label(["3*y*z + x", "2*x*z", "2*x*y"]), CaseLabel::Iv);
        assert_eq!(label(["x + 4", "2*x*z", "2*x*y"]), CaseLabel::VA);
        assert_eq!(label(["3*y*z + x + 4", "z", "y"]), CaseLabel::VB);
        assert_eq!(label(["y*z", "2*x*z", "3*x*y"]), CaseLabel::Vi);
        assert_eq!(label(["y*z", "x*z", "x*y"]), CaseLabel::Vi);
        assert_eq!(label(["x", "y", "z"]), CaseLabel::LiePoisson);
        assert_eq!(label(["0", "0", "0"]), CaseLabel::LiePoisson);
    }

    #[test]
    fn case_i_with_symmetric_beta_and_identity() {
        // β = I, γ arbitrary.
        let f = classify_canonical_30(&structure(["y*z + x + 7", "x*z + y", "x*y + z - 1/2"])).unwrap();
        assert_eq!(f.case_label, CaseLabel::I);
        assert_eq!(f.gammas[0], RationalComplex::from_int(7));
        assert_eq!(f.betas[1][1], RationalComplex::one());
        let s = structure(["y*z + x + 7", "x*z + y", "x*y + z - 1/2"]);
        for i in 0..3 {
            assert_eq!(f.reconstruct(i), f_component(&s, i));
        }
    }

    #[test]
    fn rejects_non_symmetric_beta() {
        let f = classify_canonical_30(&structure(["y*z + x + y", "x*z + y", "x*y + z"])).unwrap();
        assert_eq!(f.case_label, CaseLabel::Unclassified);
        assert!(f.note.unwrap().contains("Jacobi"));
    }

    #[test]
    fn rejects_wrong_shape_and_dimension() {
        let f = classify_canonical_30(&structure(["x^2", "0", "0"])).unwrap();
        assert_eq!(f.case_label, CaseLabel::Unclassified);
        assert!(f.note.unwrap().contains("shape"));
        let two = PoissonStructure::new(&["x", "y"]).unwrap();
        assert!(classify_canonical_30(&two).is_err());
    }

    #[test]
    fn two_variable_forms() {
        let parse = |t: &str| PoissonStructure::parse(&["x", "y"], &[("x", "y", t)], &BTreeMap::new()).unwrap();
        let s = parse("3*x*y + 2*x - y + 5");
        let f = classify_canonical_20(&s).unwrap();
        assert_eq!(f.kind, TwoVarKind::QOscillator);
        let (xi, eta) = f.transform.unwrap();
        assert!(verify_affine(&s, &xi, &eta, &parse("3*x*y - 1")).unwrap());
        let s = parse("2*x*y + 2*x + 4*y + 4");
        let f = classify_canonical_20(&s).unwrap();
        assert_eq!(f.kind, TwoVarKind::Weyl);
        let (xi, eta) = f.transform.unwrap();
        assert!(verify_affine(&s, &xi, &eta, &parse("2*x*y")).unwrap());
        assert_eq!(classify_canonical_20(&parse("x + 1")).unwrap().kind, TwoVarKind::Linear);
        assert_eq!(classify_canonical_20(&parse("x^2*y")).unwrap().kind, TwoVarKind::NotQuasiLinear);
        assert!(classify_canonical_20(&structure(["0", "0", "0"])).is_err());
    }

    #[test]
    fn affine_verifier() {
        // Shifting x → x + 1 in the case-(i) canonical form moves α into β.
        let canonical = structure(["y*z + x", "x*z + y", "x*y + z"]);
        let one = RationalComplex::one;
        let xi = [one(), one(), one()];
        let eta = [one(), RationalComplex::zero(), RationalComplex::zero()];
        let moved = affine_transform(&canonical, &xi, &eta).unwrap();
        assert_eq!(moved.bracket(1, 2), crate::poly::parse_poly("y*z + x - 1", &["x", "y", "z"]).unwrap());
        assert_eq!(moved.bracket(2, 0), crate::poly::parse_poly("x*z - z + y", &["x", "y", "z"]).unwrap());
        let minus = [-one(), RationalComplex::zero(), RationalComplex::zero()];
        assert!(verify_affine(&moved, &xi, &minus, &canonical).unwrap());
        assert!(!verify_affine(&moved, &xi, &eta, &canonical).unwrap());
        assert_eq!(classify_canonical_30(&moved).unwrap().case_label, CaseLabel::I);
        let bad = [RationalComplex::zero(), one(), one()];
        assert!(matches!(affine_transform(&canonical, &bad, &eta), Err(PoissonError::SingularTransform(0))));
    }
}
