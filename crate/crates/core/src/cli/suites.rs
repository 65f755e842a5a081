//! The `verify` suites. Each suite is a list of independent jobs; jobs run on a rayon pool
//! (capped by `QUASILIN_THREADS`) and their checks are collected in job order, so the
//! report does not depend on scheduling.

use std::collections::BTreeMap;

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::algebra::Params;
use super::report::{Check, Report};
use super::{CliError, Context};
use crate::flow::{
    aw_closed_flow, dg_closed_flow, heisenberg_oracle, numeric_flow, onsager_transfer_check, onsager_transfer_residual,
    qosc_closed_flow, uvw_recurrence, DGSystem, DgHamiltonian, DgPair,
};
use crate::linalg::{c, max_abs};
use crate::ncrewrite::{NcExpression, RewriteSystem};
use crate::poisson::{
    classical_flow_series, classify_canonical_20, classify_canonical_30, curl_test_3, nambu_from_potential,
    ode_oracle, satisfies_jacobi, CaseLabel, PoissonStructure, TwoVarKind,
};
use crate::poly::{parse_poly, PolyN, RationalComplex};
use crate::reps::{
    aw_grid_check, detect_closure, detect_dual_closure, fit_tridiagonal_constants, grid_verdict, rep_krawtchouk,
    rep_pauli_dg, rep_q_oscillator, rep_random_tridiagonal, GridSpec, GridVerdict, DEFAULT_BOUNDS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Poisson,
    Qosc,
    Aw,
    Dg,
    Onsager,
    Detect,
    All,
}

impl Suite {
    const EACH: [Suite; 6] = [Suite::Poisson, Suite::Qosc, Suite::Aw, Suite::Dg, Suite::Onsager, Suite::Detect];

    fn name(self) -> &'static str {
        match self {
            Suite::Poisson => "poisson",
            Suite::Qosc => "qosc",
            Suite::Aw => "aw",
            Suite::Dg => "dg",
            Suite::Onsager => "onsager",
            Suite::Detect => "detect",
            Suite::All => "all",
        }
    }

    /// Parameters a suite accepts through `--param`.
    fn parameters(self) -> &'static [&'static str] {
        match self {
            Suite::Qosc => &["q"],
            Suite::Aw => &["q", "C1", "C3"],
            _ => &[],
        }
    }
}

type Job<'a> = Box<dyn Fn() -> Result<Vec<Check>, CliError> + Send + Sync + 'a>;

/// Runs one suite (or all of them in a fixed order).
pub fn cmd_verify(suite: Suite, params: &Params, ctx: &Context) -> Result<Report, CliError> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for key in params.keys() {
        if !suites.iter().any(|s| s.parameters().contains(&key.as_str())) {
            return Err(CliError::Parameter(format!("suite '{}' has no parameter '{key}'", suite.name())));
        }
    }
    let mut jobs: Vec<(Suite, Job)> = Vec::new();
    for &s in &suites {
        let list = match s {
            Suite::Poisson => poisson_jobs(ctx),
            Suite::Qosc => qosc_jobs(params, ctx)?,
            Suite::Aw => aw_jobs(params, ctx)?,
            Suite::Dg => dg_jobs(ctx),
            Suite::Onsager => onsager_jobs(ctx),
            Suite::Detect => detect_jobs(ctx),
            Suite::All => unreachable!("expanded above"),
        };
        jobs.extend(list.into_iter().map(|j| (s, j)));
    }
    let results: Vec<Result<Vec<Check>, CliError>> = pool().install(|| jobs.par_iter().map(|(_, job)| job()).collect());
    let mut report = Report::new(format!("verify --suite {}", suite.name()));
    for ((s, _), checks) in jobs.iter().zip(results) {
        for mut check in checks? {
            if suite == Suite::All {
                check.name = format!("{}: {}", s.name(), check.name);
            }
            report.check(check);
        }
    }
    report.note(format!("seed = {}", ctx.seed));
    Ok(report)
}

fn pool() -> rayon::ThreadPool {
    let threads = std::env::var("QUASILIN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

fn rc(n: i64, d: i64) -> RationalComplex {
    RationalComplex::from_ratio(n, d)
}

fn xyz(f: [&str; 3]) -> PoissonStructure {
    PoissonStructure::parse(&["x", "y", "z"], &[("y", "z", f[0]), ("z", "x", f[1]), ("x", "y", f[2])], &BTreeMap::new())
        .expect("suite structures parse")
}

/// A three-generator structure whose brackets have random small-integer coefficients on
/// every monomial of degree ≤ 2 (each present with probability 1/2).
pub fn random_quadratic_structure(rng: &mut impl Rng) -> PoissonStructure {
    let monomials: Vec<[u32; 3]> = (0..3u32)
        .flat_map(|a| (0..3u32).flat_map(move |b| (0..3u32).map(move |c| [a, b, c])))
        .filter(|m| m.iter().sum::<u32>() <= 2)
        .collect();
    let mut s = PoissonStructure::with_default_names(3);
    for (i, k) in [(1, 2), (2, 0), (0, 1)] {
        let mut terms = Vec::new();
        for m in &monomials {
            if rng.random_bool(0.5) {
                let c = rng.random_range(-2i64..=2);
                terms.push((m.to_vec(), RationalComplex::from_int(c)));
            }
        }
        let p = PolyN::from_terms(3, terms);
        s.set_bracket(i, k, p).expect("distinct indices");
    }
    s
}

/// A Nambu structure from a random cubic potential, so Jacobi holds by construction.
fn random_nambu_structure(rng: &mut impl Rng) -> PoissonStructure {
    let mut terms = Vec::new();
    for a in 0..4u32 {
        for b in 0..4 - a {
            for c in 0..4 - a - b {
                if rng.random_bool(0.4) {
                    terms.push((vec![a, b, c], RationalComplex::from_int(rng.random_range(-2i64..=2))));
                }
            }
        }
    }
    let q = PolyN::from_terms(3, terms);
    nambu_from_potential(&q).expect("three variables")
}

/// Random structures for the curl/Jacobi comparison.
const RANDOM_STRUCTURES: usize = 200;

fn poisson_jobs(ctx: &Context) -> Vec<Job<'static>> {
    let seed = ctx.seed;
    vec![
        Box::new(|| {
            let q = parse_poly("x*y*z", &["x", "y", "z"])?;
            let s = nambu_from_potential(&q)?;
            Ok(vec![Check::exact("Nambu structure from Q = xyz satisfies Jacobi", satisfies_jacobi(&s))])
        }),
        Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut agree, mut jacobi) = (0, 0);
            for i in 0..RANDOM_STRUCTURES {
                let s = if i % 2 == 0 { random_nambu_structure(&mut rng) } else { random_quadratic_structure(&mut rng) };
                let by_jacobi = satisfies_jacobi(&s);
                let by_curl = curl_test_3(&s)?.is_zero();
                agree += usize::from(by_jacobi == by_curl);
                jacobi += usize::from(by_jacobi);
            }
            Ok(vec![Check::exact("curl test agrees with Jacobi on random structures", agree == RANDOM_STRUCTURES)
                .with_note(format!("{agree}/{RANDOM_STRUCTURES} agree, {jacobi} Poisson"))])
        }),
        Box::new(|| {
            let cases = [
                (["2*y*z + x + 1", "2*x*z + y - 3", "2*x*y + z + 5"], CaseLabel::I),
                (["2*y*z + x + 1", "2*x*z + y - 3", "2*x*y + 5"], CaseLabel::Ii),
                (["2*y*z + x + 1", "2*x*z - 3", "2*x*y + 5"], CaseLabel::Iii),
                (["3*y*z + x", "2*x*z", "2*x*y"], CaseLabel::Iv),
                (["x + 4", "2*x*z", "2*x*y"], CaseLabel::VA),
                (["3*y*z + x + 4", "z", "y"], CaseLabel::VB),
                (["y*z", "2*x*z", "3*x*y"], CaseLabel::Vi),
                (["x", "y", "z"], CaseLabel::LiePoisson),
            ];
            let mut out = Vec::new();
            for (f, want) in cases {
                let got = classify_canonical_30(&xyz(f))?.case_label;
                out.push(Check::exact(format!("canonical case ({want})"), got == want).with_note(format!("got {got}")));
            }
            let control = classify_canonical_30(&xyz(["y*z + x + y", "x*z + y", "x*y + z"]))?;
            out.push(Check::exact("non-symmetric beta rejected", control.case_label == CaseLabel::Unclassified));
            let two = PoissonStructure::parse(&["x", "y"], &[("x", "y", "2*x*y - 1")], &BTreeMap::new())?;
            out.push(Check::exact("(2,0) bracket 2xy - 1 is a q-oscillator", classify_canonical_20(&two)?.kind == TwoVarKind::QOscillator));
            Ok(out)
        }),
        Box::new(|| {
            let two = PoissonStructure::parse(&["x", "y"], &[("x", "y", "2*x*y - 1")], &BTreeMap::new())?;
            let case_i = xyz(["2*y*z + x + 1", "2*x*z + y - 3", "2*x*y + z + 5"]);
            let mut out = Vec::new();
            for (label, s, x0, alt) in [
                ("(2,0)", &two, vec![0.3, 0.7], vec![-0.4, 0.7]),
                ("case (i)", &case_i, vec![0.2, -0.1, 0.5], vec![-0.3, 0.4, 0.5]),
            ] {
                let j = s.nvars() - 1;
                out.extend(classical_checks(label, s, j, &x0, &alt)?);
            }
            Ok(out)
        }),
    ]
}

const CLASSICAL_T: f64 = 0.1;
const CLASSICAL_ORDER: usize = 12;
const RK4_STEPS: usize = 2000;

/// Series vs RK4 and affine superposition in the initial data (with `x_j` held fixed).
fn classical_checks(label: &str, s: &PoissonStructure, j: usize, x0: &[f64], alt: &[f64]) -> Result<Vec<Check>, CliError> {
    let series = classical_flow_series(s, j, CLASSICAL_ORDER)?;
    let eval_series = |x: &[f64]| -> Vec<f64> {
        let mut out = x.to_vec();
        for (k, slot) in out.iter_mut().enumerate() {
            if k == j {
                continue;
            }
            let mut coef = 1.0;
            let mut sum = 0.0;
            for (n, level) in series.iter().enumerate() {
                if n > 0 {
                    coef *= CLASSICAL_T / n as f64;
                }
                sum += coef * level[&k].eval_f64(x);
            }
            *slot = sum;
        }
        out
    };
    let rel = |a: &[f64], b: &[f64]| {
        let diff = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        diff / b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1.0)
    };
    let ode = ode_oracle(s, j, x0, CLASSICAL_T, RK4_STEPS)?;
    let series_dev = rel(&eval_series(x0), &ode);
    let lambda = 0.3;
    let mixed: Vec<f64> = x0.iter().zip(alt).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
    let ode_mixed = ode_oracle(s, j, &mixed, CLASSICAL_T, RK4_STEPS)?;
    let ode_alt = ode_oracle(s, j, alt, CLASSICAL_T, RK4_STEPS)?;
    let combined: Vec<f64> = ode.iter().zip(&ode_alt).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
    let affine_dev = rel(&ode_mixed, &combined);
    Ok(vec![
        Check::at_most(format!("{label}: order-{CLASSICAL_ORDER} series vs RK4 at t = {CLASSICAL_T}"), series_dev, 1e-9),
        Check::at_most(format!("{label}: flow is affine in the initial data"), affine_dev, 1e-8),
    ])
}

const QOSC_VALUES: [(i64, i64); 3] = [(1, 2), (2, 1), (-1, 3)];
const QOSC_MAX_POWER: usize = 8;

fn qosc_jobs(params: &Params, ctx: &Context) -> Result<Vec<Job<'static>>, CliError> {
    let qs: Vec<RationalComplex> = match params.get("q") {
        Some(q) => vec![q.clone()],
        None => QOSC_VALUES.iter().map(|&(n, d)| rc(n, d)).collect(),
    };
    let mut jobs: Vec<Job> = Vec::new();
    for q in qs {
        let q2 = q.clone();
        jobs.push(Box::new(move || {
            let sys = RewriteSystem::q_oscillator(q.clone());
            let omega = RationalComplex::one() - &q;
            let x = NcExpression::generator("X");
            let mut ok = true;
            for n in 1..=QOSC_MAX_POWER {
                let ys = |k: usize| vec!["Y"; k];
                let mut yx = ys(n);
                yx.push("X");
                let w = |k: usize| omega.powi(k as i32).unwrap_or_else(RationalComplex::zero);
                let expected = NcExpression::word(&yx, w(n)).sub(&NcExpression::word(&ys(n - 1), w(n - 1)));
                ok &= sys.ad_power_nf("Y", &x, n)? == expected;
            }
            Ok(vec![Check::exact(format!("ad_Y^n X = w^n Y^n X - w^(n-1) Y^(n-1), n <= {QOSC_MAX_POWER}, q = {q}"), ok)])
        }));
        if q2.is_zero() {
            return Err(CliError::Parameter("q = 0 is outside the q-oscillator family".into()));
        }
    }
    let q = params.get("q").cloned().unwrap_or_else(|| rc(1, 2));
    let tol = ctx.tol.min(1e-12);
    jobs.push(Box::new(move || {
        if q.is_one() {
            return Ok(vec![Check::exact("operator flow", true).with_note("q = 1: no closed form to compare")]);
        }
        let rep = rep_q_oscillator(40, &q)?;
        let (y, x) = rep.pair().expect("q-oscillator pair");
        let t = 0.1;
        let closed = qosc_closed_flow(y, x, &q, t)?;
        let oracle = heisenberg_oracle(y, x, t)?;
        let cols = rep.verified_cols();
        let dev = max_abs(&(closed - oracle).columns(0, cols).into_owned());
        Ok(vec![Check::at_most(format!("closed-form flow vs e^(tY) X e^(-tY), d = 40, q = {q}, t = {t}"), dev, tol)
            .with_note(format!("max-abs on the first {cols} columns"))])
    }));
    Ok(jobs)
}

const AW_MAX_POWER: usize = 8;
const AW_DEGREE_LAW: usize = 30;

fn aw_jobs(params: &Params, ctx: &Context) -> Result<Vec<Job<'static>>, CliError> {
    let get = |k: &str, d: RationalComplex| params.get(k).cloned().unwrap_or(d);
    let (q, c1, c3) = (get("q", rc(1, 2)), get("C1", rc(3, 2)), get("C3", rc(-1, 3)));
    if q.is_zero() {
        return Err(CliError::Parameter("Askey-Wilson suite needs q != 0".into()));
    }
    let tol = ctx.tol;
    let (qa, c1a, c3a) = (q.clone(), c1.clone(), c3.clone());
    let (qb, c1b, c3b) = (q.clone(), c1.clone(), c3.clone());
    Ok(vec![
        Box::new(move || {
            let sys = RewriteSystem::aw_z(qa.clone(), c1a.clone(), RationalComplex::one(), c3a.clone())?;
            let uvw = uvw_recurrence(AW_MAX_POWER, &qa, &c1a, &c3a)?;
            let x = NcExpression::generator("X");
            let mut ok = true;
            for (n, triple) in uvw.iter().enumerate().skip(1) {
                let parts = sys.ad_power_nf("Y", &x, n)?.split_leading_powers("Y");
                let part = |w: &[&str]| {
                    let key: Vec<String> = w.iter().map(|s| s.to_string()).collect();
                    parts.get(&key).cloned().unwrap_or_default()
                };
                ok &= parts.len() <= 3 && part(&["X"]) == triple.u && part(&["Z"]) == triple.v && part(&[]) == triple.w;
            }
            Ok(vec![Check::exact(format!("rewrite ad-powers match U/V/W recurrence, n <= {AW_MAX_POWER}"), ok)])
        }),
        Box::new(move || {
            let uvw = uvw_recurrence(AW_DEGREE_LAW, &qb, &c1b, &c3b)?;
            let ok = uvw.iter().all(|t| t.u.degree() == Some(t.n));
            let note = if (RationalComplex::one() - &qb).is_zero() { "q = 1: U_n has degree < n" } else { "deg U_n = n" };
            Ok(vec![Check::exact(format!("degree law, n <= {AW_DEGREE_LAW}"), ok).with_note(note)])
        }),
        Box::new(move || {
            let (x, t, order) = (1.0, 0.1, 20);
            let closed = aw_closed_flow(c(x, 0.0), q.to_c64(), c1.to_c64(), c3.to_c64(), t)?;
            let uvw = uvw_recurrence(order, &q, &c1, &c3)?;
            let (mut e1, mut e2, mut e0) = (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
            let mut coef = 1.0;
            for (n, tr) in uvw.iter().enumerate() {
                if n > 0 {
                    coef *= t / n as f64;
                }
                e1 += tr.u.eval_c64(c(x, 0.0)) * coef;
                e2 += tr.v.eval_c64(c(x, 0.0)) * coef;
                e0 += tr.w.eval_c64(c(x, 0.0)) * coef;
            }
            let dev = (closed.e1 - e1).norm().max((closed.e2 - e2).norm()).max((closed.e0 - e0).norm());
            let limit = [-1.0, 0.1, 0.5, 2.0]
                .iter()
                .map(|&t| {
                    let f = aw_closed_flow(c(0.8, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), t)?;
                    Ok((f.e1 - c(t.cos(), 0.0)).norm().max((f.e2 - c(-t.sin(), 0.0)).norm()))
                })
                .collect::<Result<Vec<f64>, CliError>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(vec![
                Check::at_most(format!("closed form vs order-{order} series at x = {x}, t = {t}"), dev, 1e-12),
                Check::at_most("q = 1 limit gives (cos t, -sin t)", limit, tol),
            ])
        }),
    ])
}

const DG_RANDOM_TIMES: usize = 20;

fn dg_jobs(ctx: &Context) -> Vec<Job<'static>> {
    let seed = ctx.seed;
    let tol = ctx.tol;
    let pauli = || {
        let rep = rep_pauli_dg();
        let (a0, a1) = rep.pair().expect("Pauli pair");
        DgPair::new(a0.clone(), a1.clone()).expect("2x2")
    };
    let omega = c(2.0, 0.0);
    vec![
        Box::new(move || Ok(vec![Check::at_most("Dolan-Grady relations on the Pauli pair, omega = 2", pauli().dg_residual(omega), 1e-14)])),
        Box::new(move || {
            let pair = pauli();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ts: Vec<f64> = (0..DG_RANDOM_TIMES).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let ops = pair.operators();
            let mut out = Vec::new();
            for (ham, h_name) in [(DgHamiltonian::A0, "A0"), (DgHamiltonian::A1, "A1")] {
                let h = &ops[h_name];
                let action = DGSystem::plain(RationalComplex::from_int(2)).ad_action(ham);
                let (mut closed_dev, mut series_dev) = (0.0f64, 0.0f64);
                for &t in &ts {
                    let closed = dg_closed_flow(&pair, omega, ham, t, 1e-12)?;
                    let numeric = numeric_flow(&action, h, &ops, t)?;
                    for (name, m) in &closed {
                        let oracle = heisenberg_oracle(h, &ops[name], t)?;
                        closed_dev = closed_dev.max(max_abs(&(m - &oracle)));
                        if let Some(n) = numeric.get(name) {
                            series_dev = series_dev.max(max_abs(&(n - &oracle)));
                        }
                    }
                }
                out.push(Check::at_most(format!("cosh/sinh closed flow under {h_name} vs oracle, {DG_RANDOM_TIMES} random t"), closed_dev, 1e-11));
                out.push(Check::at_most(format!("ad-action flow under {h_name} vs oracle"), series_dev, 1e-11));
            }
            Ok(out)
        }),
        Box::new(move || {
            let pair = pauli();
            let fit = fit_tridiagonal_constants(&pair.a0, &pair.a1)?;
            let k = &fit.constants;
            let want = [2.0, 0.0, 0.0, 4.0, 4.0];
            let got = [k.beta, k.gamma, k.gamma1, k.alpha, k.alpha1];
            let dev = got.iter().zip(want).map(|(g, w)| (g - c(w, 0.0)).norm()).fold(0.0, f64::max);
            Ok(vec![
                Check::at_most("tridiagonal constants (2, 0, 0, 4, 4) on the Pauli pair", dev, tol),
                Check::at_most("tridiagonal fit residual", fit.residual, 1e-12),
            ])
        }),
    ]
}

const ONSAGER_TIMES: [f64; 3] = [0.2, 0.3, 0.5];

fn onsager_jobs(ctx: &Context) -> Vec<Job<'static>> {
    let tol = ctx.tol;
    let mut jobs: Vec<Job> = Vec::new();
    for t in ONSAGER_TIMES {
        for tau in ONSAGER_TIMES {
            jobs.push(Box::new(move || {
                let rep = rep_pauli_dg();
                let (a0, a1) = rep.pair().expect("Pauli pair");
                let pair = DgPair::new(a0.clone(), a1.clone())?;
                let omega: Complex64 = c(2.0, 0.0);
                let r = onsager_transfer_check(&pair, omega, t, tau, 1.0, 1e-12)?;
                let perturbed = onsager_transfer_residual(&pair, omega, t, tau, 1.0, 1.1)?;
                Ok(vec![
                    Check::at_most(format!("TW = WT at t = {t}, tau = {tau}"), r, tol),
                    Check::above(format!("alpha * 1.1 breaks TW = WT at t = {t}, tau = {tau}"), perturbed, 1e-3),
                ])
            }));
        }
    }
    jobs
}

fn detect_jobs(ctx: &Context) -> Vec<Job<'static>> {
    let seed = ctx.seed;
    let tol = ctx.tol;
    vec![
        Box::new(move || {
            let rep = rep_krawtchouk(12, 1.0 / 3.0)?;
            let (h, x) = rep.pair().expect("Krawtchouk pair");
            let closure = detect_closure(h, x, DEFAULT_BOUNDS)?;
            let dual = detect_dual_closure(h, x, DEFAULT_BOUNDS)?;
            Ok(vec![
                Check::at_most("Krawtchouk d = 12, p = 1/3: closure", closure.residual, tol),
                Check::at_most("Krawtchouk d = 12, p = 1/3: dual closure", dual.residual, tol),
            ])
        }),
        Box::new(move || {
            let rep = rep_random_tridiagonal(12, seed);
            let (h, x) = rep.pair().expect("random pair");
            let closure = detect_closure(h, x, DEFAULT_BOUNDS)?;
            Ok(vec![Check::above("random tridiagonal control: closure fails", closure.residual, 1e-2)])
        }),
        Box::new(|| {
            let real = |v: f64| c(v, 0.0);
            let cases = [
                (GridSpec::QQuadratic { q: real(0.5), c0: real(1.0), c1: real(2.0), c2: real(-0.5) }, GridVerdict::QQuadratic),
                (GridSpec::Quadratic { c0: real(1.0), c1: real(3.0), c2: real(0.25) }, GridVerdict::Quadratic),
                (GridSpec::Linear { c0: real(4.0), c1: real(-1.5) }, GridVerdict::Linear),
            ];
            let mut out = Vec::new();
            for (spec, want) in cases {
                let fit = aw_grid_check(&spec.values(12))?;
                let got = grid_verdict(&fit, 1e-10);
                out.push(
                    Check::at_most(format!("{} grid certified", spec.kind()), if got == want { fit.residual } else { f64::INFINITY }, 1e-12)
                        .with_note(got.to_string()),
                );
            }
            let cubic: Vec<Complex64> = (0..12).map(|s| real((s * s * s) as f64)).collect();
            let fit = aw_grid_check(&cubic)?;
            out.push(
                Check::exact("cubic grid rejected", grid_verdict(&fit, 1e-10) == GridVerdict::NotAskeyWilson)
                    .with_note(format!("residual {:.3e}", fit.residual)),
            );
            Ok(out)
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::Format;

    #[test]
    fn every_suite_passes() {
        let ctx = Context::default();
        for s in Suite::EACH {
            let r = cmd_verify(s, &Params::new(), &ctx).unwrap();
            assert!(r.all_passed(), "{}", r.render(Format::Text));
        }
    }

    #[test]
    fn zero_q_is_a_parameter_error() {
        let mut p = Params::new();
        p.insert("q".into(), RationalComplex::zero());
        assert!(matches!(cmd_verify(Suite::Aw, &p, &Context::default()), Err(CliError::Parameter(_))));
        assert!(matches!(cmd_verify(Suite::Dg, &p, &Context::default()), Err(CliError::Parameter(_))));
    }

    #[test]
    fn random_structures_are_seeded() {
        let a = random_quadratic_structure(&mut ChaCha8Rng::seed_from_u64(5));
        let b = random_quadratic_structure(&mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }
}
