//! The `jacobi`, `classify`, `flow`, `detect` and `export` commands.

use std::path::Path;

use num_complex::Complex64;

use super::algebra::{load_source, parse_rep, Loaded, Params};
use super::report::{val, Check, Report, Table};
use super::{CliError, Context};
use crate::flow::{heisenberg_oracle, matrix_exp, numeric_flow, series_flow, AdAction};
use crate::linalg::{c, max_abs, CMatrix};
use crate::poisson::{
    classify_canonical_20, classify_canonical_30, curl_test_3, jacobi_defect, quasi_linear_decompose, verify_affine,
    CaseLabel, PoissonStructure, TwoVarKind,
};
use crate::poly::{parse_scalar, PolyN, RationalComplex};
use crate::reps::{
    aw_grid_check, detect_closure, detect_dual_closure, fit_tridiagonal_constants, grid_verdict, ClosureFit, OperatorRep,
};

fn poisson_of(loaded: &Loaded) -> Result<&PoissonStructure, CliError> {
    loaded
        .poisson
        .as_ref()
        .ok_or_else(|| CliError::Unsupported(format!("'{}' is not a Poisson structure", loaded.name)))
}

/// Per-triple Jacobi checks; for three generators also the curl criterion `F · rot F = 0`.
pub fn cmd_jacobi(loaded: &Loaded) -> Result<Report, CliError> {
    let s = poisson_of(loaded)?;
    let names = s.var_refs();
    let mut report = Report::new(format!("jacobi: {}", names.join(", ")));
    if s.nvars() < 3 {
        report.check(Check::exact("jacobi", true).with_note("vacuous for fewer than three generators"));
        return Ok(report);
    }
    for ((i, k, j), defect) in jacobi_defect(s) {
        let name = format!("jacobi {},{},{}", names[i], names[k], names[j]);
        let mut check = Check::exact(name, defect.is_zero());
        if !defect.is_zero() {
            check = check.with_note(format!("defect = {}", defect.display_with(&names)));
        }
        report.check(check);
    }
    if s.nvars() == 3 {
        let curl = curl_test_3(s)?;
        let mut check = Check::exact("curl F.rot F = 0", curl.is_zero());
        if !curl.is_zero() {
            check = check.with_note(format!("F.rot F = {}", curl.display_with(&names)));
        }
        report.check(check);
    }
    Ok(report)
}

/// Canonical form for two or three generators plus the quasi-linearity verdict per Hamiltonian.
pub fn cmd_classify(loaded: &Loaded) -> Result<Report, CliError> {
    let s = poisson_of(loaded)?;
    let names = s.var_refs();
    let mut report = Report::new(format!("classify: {}", names.join(", ")));
    match s.nvars() {
        3 => {
            let form = classify_canonical_30(s)?;
            let label = match (&form.case_label, &form.note) {
                (CaseLabel::Unclassified, Some(n)) => format!("unclassified ({n})"),
                (CaseLabel::Unclassified, None) => "unclassified".to_string(),
                (CaseLabel::LiePoisson, _) => "lie_poisson (all alpha = 0)".to_string(),
                (l, _) => format!("case ({l})"),
            };
            let mut check = Check::exact("canonical form", form.case_label != CaseLabel::Unclassified).with_note(&label);
            if let (Some(n), false) = (&form.note, form.case_label == CaseLabel::Unclassified) {
                check = check.with_note(format!("{label}; {n}"));
            }
            report.check(check);
            report.note(label);
            if form.case_label != CaseLabel::Unclassified {
                let list = |v: &[RationalComplex]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
                report.note(format!("alpha = ({})", list(&form.alphas)));
                let diag: Vec<RationalComplex> = (0..3).map(|i| form.betas[i][i].clone()).collect();
                report.note(format!("diag beta = ({})", list(&diag)));
                report.note(format!("gamma = ({})", list(&form.gammas)));
            }
        }
        2 => {
            let form = classify_canonical_20(s)?;
            report.check(Check::exact("canonical form", form.kind != TwoVarKind::NotQuasiLinear).with_note(form.kind.to_string()));
            report.note(form.kind.to_string());
            if let Some((xi, eta)) = &form.transform {
                let n = 2;
                let xy = &PolyN::var(n, 0) * &PolyN::var(n, 1);
                let mut target = xy.scale(&form.alpha);
                if form.kind == TwoVarKind::QOscillator {
                    target = &target - &PolyN::one(n);
                }
                let target = PoissonStructure::new(&names)?.with_bracket(0, 1, target)?;
                let ok = verify_affine(s, xi, eta, &target)?;
                let shown = |v: &[RationalComplex]| format!("({}, {})", v[0], v[1]);
                report.check(
                    Check::exact("affine map to canonical form", ok)
                        .with_note(format!("x' = xi*x + eta with xi = {}, eta = {}", shown(xi), shown(eta))),
                );
            }
        }
        n => return Err(CliError::Unsupported(format!("classification needs two or three generators, got {n}"))),
    }
    for (j, name) in names.iter().enumerate() {
        match quasi_linear_decompose(s, j) {
            Ok(_) => report.note(format!("H = {name}: quasi-linear")),
            Err(e) => report.note(format!("H = {name}: not quasi-linear ({e})")),
        }
    }
    Ok(report)
}

/// Parses `a`, `a,b,c` or `start:end:count`; entries may be rationals such as `1/10`.
pub fn parse_t_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let scalar = |s: &str| -> Result<f64, CliError> {
        let v = parse_scalar(s.trim(), &Params::new())
            .map_err(|e| CliError::Parameter(format!("time '{s}': {e}")))?
            .to_c64();
        if v.im != 0.0 || !v.re.is_finite() {
            return Err(CliError::Parameter(format!("time '{s}' must be a finite real number")));
        }
        Ok(v.re)
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, end, count] => {
            let (a, b) = (scalar(start)?, scalar(end)?);
            let n: usize = count
                .trim()
                .parse()
                .map_err(|_| CliError::Parameter(format!("grid count '{count}' must be a positive integer")))?;
            match n {
                0 => Err(CliError::Parameter("grid count must be positive".into())),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        [list] => list.split(',').map(scalar).collect(),
        _ => Err(CliError::Parameter(format!("unrecognized time grid '{text}'"))),
    }
}

pub struct FlowArgs<'a> {
    pub hamiltonian: Option<&'a str>,
    pub t: Vec<f64>,
    pub rep: Option<&'a str>,
    pub h: &'a str,
}

const FLOW_COLUMNS: [&str; 6] = ["t", "target", "component", "value_re", "value_im", "oracle_dev"];

/// Series order used to cross-check the scalar coefficient table.
const SERIES_ORDER: usize = 40;

/// Evolved coefficients at a scalar Hamiltonian value, or evolved matrices on a representation
/// compared against `e^{tH} X e^{−tH}`.
pub fn cmd_flow(loaded: &Loaded, args: &FlowArgs, ctx: &Context) -> Result<Report, CliError> {
    let action = loaded.action(args.hamiltonian)?;
    let rep = match args.rep {
        Some(spec) => Some(parse_rep(spec)?),
        None => loaded.rep.clone(),
    };
    let mut report = Report::new(format!("flow: {} under ad_{}", loaded.name, action.hamiltonian()));
    let mut table = Table::new("flow", &FLOW_COLUMNS);
    match rep {
        Some(rep) => flow_on_rep(&action, &rep, &args.t, ctx, &mut report, &mut table)?,
        None => {
            let h = parse_scalar(args.h, &loaded.params)
                .map_err(|e| CliError::Parameter(format!("--h '{}': {e}", args.h)))?
                .to_c64();
            flow_coefficients(&action, h, &args.t, ctx, &mut report, &mut table)?;
        }
    }
    report.tables.push(table);
    Ok(report)
}

fn flow_coefficients(
    action: &AdAction,
    h: Complex64,
    ts: &[f64],
    ctx: &Context,
    report: &mut Report,
    table: &mut Table,
) -> Result<(), CliError> {
    let m = action.dim();
    let fh = CMatrix::from_fn(m, m, |k, s| action.f()[k][s].eval_c64(h));
    let series = series_flow(action, SERIES_ORDER);
    let basis = action.basis();
    report.note(format!("coefficients E_ks(H; t) of exp(t F(H)) at H = {}", complex(h)));
    let mut worst: f64 = 0.0;
    for &t in ts {
        let e = matrix_exp(&fh, t)?;
        for k in 0..m {
            if k == action.unit_index() {
                continue;
            }
            for s in 0..m {
                let mut sum = c(0.0, 0.0);
                let mut tn = 1.0;
                for n in 0..=SERIES_ORDER {
                    sum += series.coeff_matrix(n)[k][s].eval_c64(h) * tn;
                    tn *= t;
                }
                let scale = e[(k, s)].norm().max(1.0);
                worst = worst.max((sum - e[(k, s)]).norm() / scale);
                table.rows.push(vec![
                    val(t),
                    basis[k].clone(),
                    basis[s].clone(),
                    val(e[(k, s)].re),
                    val(e[(k, s)].im),
                    String::new(),
                ]);
            }
        }
    }
    report.check(
        Check::at_most("exp(tF) vs exact series", worst, ctx.tol)
            .with_note(format!("order {SERIES_ORDER}, relative max deviation")),
    );
    Ok(())
}

fn flow_on_rep(
    action: &AdAction,
    rep: &OperatorRep,
    ts: &[f64],
    ctx: &Context,
    report: &mut Report,
    table: &mut Table,
) -> Result<(), CliError> {
    let h = rep.op(action.hamiltonian())?;
    let cols = rep.verified_cols();
    report.note("components: trace, and proj:B = <B, X(t)> / <B, B> (Hilbert-Schmidt) for each operator B");
    if cols < rep.dim() {
        report.note(format!("deviations measured on the first {} of {} columns", cols, rep.dim()));
    }
    let mut worst = std::collections::BTreeMap::<String, f64>::new();
    for &t in ts {
        let evolved = numeric_flow(action, h, rep.ops(), t)?;
        for (name, m) in &evolved {
            let oracle = heisenberg_oracle(h, rep.op(name)?, t)?;
            let dev = max_abs(&(m - &oracle).columns(0, cols).into_owned());
            let entry = worst.entry(name.clone()).or_insert(0.0);
            *entry = entry.max(dev);
            let tr = m.trace();
            table.rows.push(vec![val(t), name.clone(), "trace".into(), val(tr.re), val(tr.im), val(dev)]);
            for (basis_name, b) in rep.ops() {
                let norm = b.norm_squared();
                if norm == 0.0 {
                    continue;
                }
                let p = b.dotc(m) / norm;
                table.rows.push(vec![val(t), name.clone(), format!("proj:{basis_name}"), val(p.re), val(p.im), val(dev)]);
            }
        }
    }
    for (name, dev) in worst {
        report.check(Check::at_most(format!("flow {name} vs e^(tH) X e^(-tH)"), dev, ctx.tol).with_note("max-abs"));
    }
    Ok(())
}

fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn poly_coeffs(v: &[Complex64]) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:.6}", Rounded(*z))).collect();
    format!("[{}]", parts.join(", "))
}

/// Prints tiny components as zero so `-0.000000` and round-off noise do not appear.
struct Rounded(Complex64);

impl std::fmt::Display for Rounded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let p = f.precision().unwrap_or(6);
        let clean = |x: f64| if x.abs() < 0.5 * 10f64.powi(-(p as i32)) { 0.0 } else { x };
        let (re, im) = (clean(self.0.re), clean(self.0.im));
        if im == 0.0 {
            write!(f, "{re:.p$}")
        } else {
            write!(f, "{re:.p$}{im:+.p$}i")
        }
    }
}

fn closure_notes(report: &mut Report, label: &str, fit: &ClosureFit) {
    report.note(format!(
        "{label}: W1 = {}, W2 = {}, W0 = {} (ascending powers{})",
        poly_coeffs(&fit.w1),
        poly_coeffs(&fit.w2),
        poly_coeffs(&fit.w0),
        if fit.rank_deficient { "; rank deficient, minimum-norm solution" } else { "" }
    ));
}

fn parse_bounds(text: &str) -> Result<(usize, usize, usize), CliError> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Parameter(format!("--deg '{text}' must be three nonnegative integers")))?;
    match parts.as_slice() {
        [a, b, c] => Ok((*a, *b, *c)),
        _ => Err(CliError::Parameter(format!("--deg '{text}' must be three nonnegative integers"))),
    }
}

/// Closure ansätze in both directions, tridiagonal constants and the grid verdict for the
/// distinguished pair of a representation.
pub fn cmd_detect(
    source: Option<&str>,
    rep: Option<&str>,
    deg: &str,
    params: &Params,
    ctx: &Context,
) -> Result<Report, CliError> {
    let bounds = parse_bounds(deg)?;
    let (label, rep) = match (rep, source) {
        (Some(spec), _) => (spec.to_string(), parse_rep(spec)?),
        (None, Some(src)) => {
            let loaded = load_source(src, params)?;
            let rep = loaded
                .rep
                .ok_or_else(|| CliError::Unsupported(format!("'{src}' carries no operator representation")))?;
            (src.to_string(), rep)
        }
        (None, None) => return Err(CliError::Parameter("give a source or --rep".into())),
    };
    let (h_name, x_name) = rep
        .pair_names()
        .ok_or_else(|| CliError::Unsupported(format!("'{label}' has no distinguished operator pair")))?;
    let (h_name, x_name) = (h_name.to_string(), x_name.to_string());
    let (h, x) = rep.pair().expect("pair names resolve");
    let mut report = Report::new(format!("detect: {label} (H = {h_name}, X = {x_name})"));
    let (d1, d2, d0) = bounds;
    report.note(format!("degree bounds: deg W1 <= {d1}, deg W2 <= {d2}, deg W0 <= {d0}"));

    let closure = detect_closure(h, x, bounds)?;
    report.check(Check::at_most("closure [H,[H,X]] = W1(H)X + W2(H)Y + W0(H)", closure.residual, ctx.tol));
    closure_notes(&mut report, "closure", &closure);
    let dual = detect_dual_closure(h, x, bounds)?;
    report.check(Check::at_most("dual closure [Y,X] = W1(X)H + W2(X)Y + W0(X)", dual.residual, ctx.tol));
    closure_notes(&mut report, "dual closure", &dual);

    let tri = fit_tridiagonal_constants(h, x)?;
    let k = &tri.constants;
    report.check(Check::at_most("tridiagonal relations", tri.residual, ctx.tol));
    report.note(format!(
        "tridiagonal constants: beta = {:.6}, gamma = {:.6}, gamma1 = {:.6}, alpha = {:.6}, alpha1 = {:.6}{}",
        Rounded(k.beta),
        Rounded(k.gamma),
        Rounded(k.gamma1),
        Rounded(k.alpha),
        Rounded(k.alpha1),
        if tri.underdetermined { " (underdetermined; anchored at beta = 2, gamma = gamma1 = 0)" } else { "" }
    ));

    let off_diagonal = max_abs(&(x - CMatrix::from_diagonal(&x.diagonal())));
    if off_diagonal > 0.0 {
        report.note("grid: X is not diagonal; no grid check");
    } else if x.nrows() < 5 {
        report.note(format!("grid: {} points are too few for a grid check", x.nrows()));
    } else {
        let xs: Vec<Complex64> = x.diagonal().iter().copied().collect();
        match aw_grid_check(&xs) {
            Ok(fit) => {
                let verdict = grid_verdict(&fit, ctx.tol);
                report.check(Check::at_most("Askey-Wilson grid", fit.residual, ctx.tol).with_note(verdict.to_string()));
                report.note(format!(
                    "grid: {verdict}; x(s+1) + x(s-1) + eta x(s) + zeta = 0 with eta = {:.6}, zeta = {:.6}",
                    Rounded(fit.eta),
                    Rounded(fit.zeta)
                ));
            }
            Err(e) => report.check(Check::exact("Askey-Wilson grid", false).with_note(e.to_string())),
        }
    }
    Ok(report)
}

/// The exported files as pretty JSON (separated by blank lines), or written to `out`.
pub fn cmd_export(loaded: &Loaded, out: Option<&Path>) -> Result<String, CliError> {
    let files = loaded.export();
    if files.is_empty() {
        return Err(CliError::Unsupported(format!("'{}' has nothing to export", loaded.name)));
    }
    match out {
        None => Ok(files.iter().map(|f| f.to_json() + "\n").collect::<Vec<_>>().join("\n")),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            let mut written = String::new();
            for (i, f) in files.iter().enumerate() {
                let path = dir.join(format!("{}-{i}.json", loaded.name));
                std::fs::write(&path, f.to_json() + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                written.push_str(&format!("{}\n", path.display()));
            }
            Ok(written)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::algebra::{builtin, AlgebraFile};

    fn poisson(text: &str) -> Loaded {
        AlgebraFile::from_json(text).unwrap().load().unwrap()
    }

    #[test]
    fn jacobi_reports() {
        let nambu = poisson(r#"{"kind":"poisson","vars":["x","y","z"],"brackets":{"y,z":"y*z","z,x":"x*z","x,y":"x*y"}}"#);
        assert!(cmd_jacobi(&nambu).unwrap().all_passed());
        let bad = poisson(r#"{"kind":"poisson","vars":["x","y","z"],"brackets":{"y,z":"z","z,x":"x","x,y":"y"}}"#);
        let r = cmd_jacobi(&bad).unwrap();
        assert_eq!(r.failures(), 2);
        assert!(r.checks[0].note.as_ref().unwrap().starts_with("defect = "));
        let two = poisson(r#"{"kind":"poisson","vars":["x","y"],"brackets":{"x,y":"2*x*y - 1"}}"#);
        let r = cmd_jacobi(&two).unwrap();
        assert!(r.all_passed() && r.checks[0].note.as_deref() == Some("vacuous for fewer than three generators"));
    }

    #[test]
    fn classify_reports() {
        let aw = poisson(
            r#"{"kind":"poisson","vars":["x","y","z"],"brackets":{"y,z":"2*y*z + x + 1","z,x":"2*x*z + y - 3","x,y":"2*x*y + z + 5"}}"#,
        );
        let r = cmd_classify(&aw).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.notes[0], "case (i)");
        let q = poisson(r#"{"kind":"poisson","vars":["x","y"],"brackets":{"x,y":"3*x*y + x - 2*y + 1"}}"#);
        let r = cmd_classify(&q).unwrap();
        assert!(r.all_passed(), "{}", r.render(crate::cli::Format::Text));
        assert!(r.notes[0].starts_with("(2,0): canonical q-oscillator bracket"));
        let bad = poisson(r#"{"kind":"poisson","vars":["x","y","z"],"brackets":{"y,z":"z","z,x":"x","x,y":"y"}}"#);
        let r = cmd_classify(&bad).unwrap();
        assert!(!r.all_passed());
        assert!(r.notes[0].starts_with("unclassified (Jacobi"), "{}", r.notes[0]);
    }

    #[test]
    fn t_grids() {
        assert_eq!(parse_t_grid("0.1").unwrap(), vec![0.1]);
        assert_eq!(parse_t_grid("0, 1/2,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_t_grid("-1:1:5").unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(parse_t_grid("0:1:0").is_err());
        assert!(parse_t_grid("i").is_err());
    }

    #[test]
    fn flow_on_qosc_rep() {
        let loaded = builtin("qosc", &Params::new()).unwrap();
        let args = FlowArgs { hamiltonian: None, t: vec![0.0, 0.1], rep: Some("qosc:40:1/2"), h: "1" };
        let r = cmd_flow(&loaded, &args, &Context { tol: 1e-12, seed: 0 }).unwrap();
        assert!(r.all_passed(), "{}", r.render(crate::cli::Format::Text));
        assert_eq!(r.tables[0].columns, FLOW_COLUMNS);
    }

    #[test]
    fn flow_coefficient_table_starts_at_identity() {
        let loaded = builtin("aw_z", &Params::new()).unwrap();
        let args = FlowArgs { hamiltonian: Some("Y"), t: vec![0.0, 0.3], rep: None, h: "1" };
        let r = cmd_flow(&loaded, &args, &Context::default()).unwrap();
        assert!(r.all_passed());
        for row in r.tables[0].rows.iter().filter(|row| row[0] == val(0.0)) {
            let expected = if row[1] == row[2] { 1.0 } else { 0.0 };
            assert_eq!(row[3], val(expected), "{row:?}");
        }
        let err = cmd_flow(&loaded, &FlowArgs { hamiltonian: Some("Q"), ..args }, &Context::default());
        assert!(matches!(err, Err(CliError::UnknownHamiltonian(_))));
    }

    #[test]
    fn detect_reports() {
        let ctx = Context::default();
        let r = cmd_detect(None, Some("krawtchouk:12:1/3"), "2,1,2", &Params::new(), &ctx).unwrap();
        assert!(r.all_passed(), "{}", r.render(crate::cli::Format::Text));
        assert!(r.notes.iter().any(|n| n.starts_with("grid: linear (degenerate AW)")));
        let r = cmd_detect(None, Some("random_tridiagonal:8:3"), "2,1,2", &Params::new(), &ctx).unwrap();
        assert!(r.checks[0].residual > 1e-2 && !r.all_passed());
        let r = cmd_detect(Some("dg_pauli"), None, "2,1,2", &Params::new(), &ctx).unwrap();
        let tri = r.notes.iter().find(|n| n.starts_with("tridiagonal constants")).unwrap();
        assert!(tri.contains("beta = 2.000000") && tri.contains("alpha = 4.000000") && tri.contains("alpha1 = 4.000000"));
        assert!(cmd_detect(Some("qosc"), None, "2,1,2", &Params::new(), &ctx).is_err());
        assert!(cmd_detect(None, Some("dg_pauli"), "2,1", &Params::new(), &ctx).is_err());
    }
}
