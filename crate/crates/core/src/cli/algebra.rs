//! Algebra-definition files, the builtin registry and representation specs.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::flow::{AWKPresentation, AdAction, DGSystem, DgHamiltonian, KHamiltonian, TridiagonalConstants};
use crate::ncrewrite::{NcExpression, RewriteSystem};
use crate::poisson::PoissonStructure;
use crate::poly::{parse_scalar, RationalComplex};
use crate::reps::{
    rep_krawtchouk, rep_pauli_dg, rep_q_oscillator, rep_random_tridiagonal, DifferenceOp, GridSpec, OperatorRep,
};

pub type Params = BTreeMap<String, RationalComplex>;

/// One algebra definition. Expressions and parameter values are strings in the
/// polynomial grammar; parameters are substituted at load time.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraFile {
    Poisson(PoissonFile),
    Rewrite(RewriteFile),
    Adaction(AdactionFile),
    DifferenceOp(DifferenceOpFile),
    Builtin(BuiltinFile),
}

type RawParams = BTreeMap<String, String>;

/// `brackets` maps `"x,y"` to `{x, y}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonFile {
    pub vars: Vec<String>,
    pub brackets: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: RawParams,
}

/// `generators` in normal order; `rules` maps `"X*Y"` to its rewrite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewriteFile {
    pub generators: Vec<String>,
    pub rules: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: RawParams,
}

/// `F` entries are polynomials in the reserved symbol `H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdactionFile {
    pub hamiltonian: String,
    pub basis: Vec<String>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: RawParams,
}

/// Stencil expressions in `s`, `q^s`, `q^-s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferenceOpFile {
    pub d: usize,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "C")]
    pub c: String,
    pub grid: GridFile,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: RawParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltinFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: RawParams,
}

/// `{"kind": "q_quadratic" | "quadratic" | "linear" | "custom", ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
}

/// Everything a file or builtin provides; commands pick the parts they need.
#[derive(Clone, Debug, Default)]
pub struct Loaded {
    pub name: String,
    pub params: Params,
    pub poisson: Option<PoissonStructure>,
    pub rewrite: Option<RewriteSystem>,
    pub actions: Vec<AdAction>,
    pub difference_op: Option<DifferenceOp>,
    pub rep: Option<OperatorRep>,
}

pub fn parse_params(raw: &BTreeMap<String, String>) -> Result<Params, CliError> {
    let mut out = Params::new();
    for (k, v) in raw {
        let value = parse_scalar(v, &out)
            .map_err(|e| CliError::Parameter(format!("parameter '{k}' = '{v}': {e}")))?;
        out.insert(k.clone(), value);
    }
    Ok(out)
}

fn scalar_c64(text: &Option<String>, params: &Params, field: &str) -> Result<Complex64, CliError> {
    match text {
        Some(t) => Ok(parse_scalar(t, params).map_err(|e| CliError::Schema(format!("grid.{field}: {e}")))?.to_c64()),
        None => Err(CliError::Schema(format!("grid.{field} is required"))),
    }
}

fn scalar_or_zero(text: &Option<String>, params: &Params, field: &str) -> Result<Complex64, CliError> {
    if text.is_none() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    scalar_c64(text, params, field)
}

impl GridFile {
    pub fn to_spec(&self, params: &Params) -> Result<GridSpec, CliError> {
        let z = |t: &Option<String>, f: &str| scalar_or_zero(t, params, f);
        Ok(match self.kind.as_str() {
            "q_quadratic" => GridSpec::QQuadratic {
                q: scalar_c64(&self.q, params, "q")?,
                c0: z(&self.c0, "c0")?,
                c1: z(&self.c1, "c1")?,
                c2: z(&self.c2, "c2")?,
            },
            "quadratic" => GridSpec::Quadratic { c0: z(&self.c0, "c0")?, c1: z(&self.c1, "c1")?, c2: z(&self.c2, "c2")? },
            "linear" => GridSpec::Linear { c0: z(&self.c0, "c0")?, c1: z(&self.c1, "c1")? },
            "custom" => {
                let values = self.values.as_ref().ok_or_else(|| CliError::Schema("grid.values is required".into()))?;
                GridSpec::Custom(
                    values
                        .iter()
                        .map(|v| scalar_c64(&Some(v.clone()), params, "values"))
                        .collect::<Result<_, _>>()?,
                )
            }
            other => return Err(CliError::Schema(format!("unknown grid kind '{other}'"))),
        })
    }

    fn from_spec(spec: &GridSpec) -> Self {
        let s = |z: &Complex64| {
            Some(
                RationalComplex::from_f64(z.re, z.im)
                    .map(|r| r.to_string())
                    .unwrap_or_else(|| "nan".to_string()),
            )
        };
        let mut g = GridFile { kind: spec.kind().to_string(), q: None, c0: None, c1: None, c2: None, values: None };
        match spec {
            GridSpec::QQuadratic { q, c0, c1, c2 } => (g.q, g.c0, g.c1, g.c2) = (s(q), s(c0), s(c1), s(c2)),
            GridSpec::Quadratic { c0, c1, c2 } => (g.c0, g.c1, g.c2) = (s(c0), s(c1), s(c2)),
            GridSpec::Linear { c0, c1 } => (g.c0, g.c1) = (s(c0), s(c1)),
            GridSpec::Custom(v) => g.values = Some(v.iter().filter_map(s).collect()),
        }
        g
    }
}

impl AlgebraFile {
    /// Parses a file; errors carry the line and column reported by the JSON parser.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        #[derive(Deserialize)]
        struct Kind {
            kind: String,
        }
        fn body<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
            serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
        }
        let kind: Kind = body(text)?;
        Ok(match kind.kind.as_str() {
            "poisson" => AlgebraFile::Poisson(body(text)?),
            "rewrite" => AlgebraFile::Rewrite(body(text)?),
            "adaction" => AlgebraFile::Adaction(body(text)?),
            "difference_op" => AlgebraFile::DifferenceOp(body(text)?),
            "builtin" => AlgebraFile::Builtin(body(text)?),
            other => {
                return Err(CliError::Schema(format!(
                    "unknown kind '{other}' (expected poisson, rewrite, adaction, difference_op or builtin)"
                )))
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra files are serializable")
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        match self {
            AlgebraFile::Poisson(PoissonFile { vars, brackets, params }) => {
                let params = parse_params(params)?;
                let names: Vec<&str> = vars.iter().map(String::as_str).collect();
                let mut pairs = Vec::new();
                for (key, text) in brackets {
                    let (a, b) = key
                        .split_once(',')
                        .ok_or_else(|| CliError::Schema(format!("bracket key '{key}' must look like \"x,y\"")))?;
                    pairs.push((a.trim(), b.trim(), text.as_str()));
                }
                let s = PoissonStructure::parse(&names, &pairs, &params)?;
                Ok(Loaded { name: "poisson".into(), params, poisson: Some(s), ..Default::default() })
            }
            AlgebraFile::Rewrite(RewriteFile { generators, rules, params }) => {
                let params = parse_params(params)?;
                let gens: Vec<&str> = generators.iter().map(String::as_str).collect();
                let mut sys = RewriteSystem::new(&gens)?;
                for (key, text) in rules {
                    let (a, b) = key
                        .split_once('*')
                        .ok_or_else(|| CliError::Schema(format!("rule key '{key}' must look like \"X*Y\"")))?;
                    let rhs = NcExpression::parse(text, &gens, &params)?;
                    sys = sys.with_rule((a.trim(), b.trim()), &rhs)?;
                }
                Ok(Loaded { name: "rewrite".into(), params, rewrite: Some(sys), ..Default::default() })
            }
            AlgebraFile::Adaction(AdactionFile { hamiltonian, basis, f, params }) => {
                let params = parse_params(params)?;
                let names: Vec<&str> = basis.iter().map(String::as_str).collect();
                let action = AdAction::parse(hamiltonian, &names, f, &params)?;
                Ok(Loaded { name: "adaction".into(), params, actions: vec![action], ..Default::default() })
            }
            AlgebraFile::DifferenceOp(DifferenceOpFile { d, a, b, c, grid, params }) => {
                let params = parse_params(params)?;
                let op = DifferenceOp::parse(*d, a, b, c, grid.to_spec(&params)?, &params)?;
                let rep = op.rep()?;
                Ok(Loaded {
                    name: "difference_op".into(),
                    params,
                    difference_op: Some(op),
                    rep: Some(rep),
                    ..Default::default()
                })
            }
            AlgebraFile::Builtin(BuiltinFile { name, params }) => builtin(name, &parse_params(params)?),
        }
    }
}

/// Reads a JSON algebra file.
pub fn load_path(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    AlgebraFile::from_json(&text).and_then(|f| f.load()).map_err(|e| match e {
        CliError::Schema(msg) => CliError::Schema(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// A path to an algebra file, or a builtin name when no such file exists.
pub fn load_source(source: &str, overrides: &Params) -> Result<Loaded, CliError> {
    let path = Path::new(source);
    if path.exists() {
        load_path(path)
    } else if BUILTINS.contains(&source) {
        builtin(source, overrides)
    } else {
        Err(CliError::Io(format!("'{source}' is neither a file nor a builtin ({})", BUILTINS.join(", "))))
    }
}

pub const BUILTINS: [&str; 9] = ["qosc", "weyl", "aw_z", "aw_k", "qj3", "dg", "dg_pauli", "krawtchouk", "tridiagonal"];

fn defaults(name: &str) -> &'static [(&'static str, &'static str)] {
    match name {
        "qosc" | "weyl" => &[("q", "1/2")],
        "aw_z" => &[("q", "1/2"), ("C1", "3/2"), ("C2", "1"), ("C3", "-1/3")],
        "aw_k" => &[
            ("rho", "1/2"),
            ("a1", "1"),
            ("a2", "-1"),
            ("c1", "2"),
            ("c2", "3"),
            ("d", "1/3"),
            ("g1", "1/2"),
            ("g2", "-1"),
        ],
        "qj3" => &[("a1", "1"), ("c1", "2"), ("c2", "3"), ("g1", "1/2"), ("g2", "-1")],
        "dg" => &[("omega", "2")],
        "krawtchouk" => &[("d", "12"), ("p", "1/3")],
        "tridiagonal" => &[("beta", "2"), ("gamma", "0"), ("gamma1", "0"), ("alpha", "4"), ("alpha1", "4")],
        _ => &[],
    }
}

/// Resolves a builtin with `overrides` applied on top of its default parameters.
pub fn builtin(name: &str, overrides: &Params) -> Result<Loaded, CliError> {
    if !BUILTINS.contains(&name) {
        return Err(CliError::UnknownBuiltin(name.to_string()));
    }
    let mut params = Params::new();
    for (k, v) in defaults(name) {
        params.insert(k.to_string(), v.parse().expect("builtin defaults parse"));
    }
    for (k, v) in overrides {
        if !params.contains_key(k) {
            return Err(CliError::Parameter(format!("builtin '{name}' has no parameter '{k}'")));
        }
        params.insert(k.clone(), v.clone());
    }
    let p = |k: &str| params[k].clone();
    let mut out = Loaded { name: name.to_string(), params: params.clone(), ..Default::default() };
    match name {
        "qosc" => {
            out.rewrite = Some(RewriteSystem::q_oscillator(p("q")));
            out.actions = vec![AdAction::q_oscillator(&p("q"))];
        }
        "weyl" => {
            out.rewrite = Some(RewriteSystem::weyl(p("q")));
            out.actions = vec![AdAction::weyl(&p("q"))];
        }
        "aw_z" => {
            out.rewrite = Some(RewriteSystem::aw_z(p("q"), p("C1"), p("C2"), p("C3"))?);
            out.actions = vec![AdAction::aw_z(&p("q"), &p("C1"), &p("C3"))?];
        }
        "aw_k" | "qj3" => {
            let k = if name == "qj3" {
                AWKPresentation::qj3(p("a1"), p("c1"), p("c2"), p("g1"), p("g2"))
            } else {
                AWKPresentation {
                    rho: p("rho"),
                    a1: p("a1"),
                    a2: p("a2"),
                    c1: p("c1"),
                    c2: p("c2"),
                    d: p("d"),
                    g1: p("g1"),
                    g2: p("g2"),
                }
            };
            out.actions = vec![k.ad_action(KHamiltonian::K1), k.ad_action(KHamiltonian::K2)];
        }
        "dg" | "dg_pauli" => {
            let omega = if name == "dg" { p("omega") } else { RationalComplex::from_int(2) };
            let sys = DGSystem::plain(omega);
            out.actions = vec![sys.ad_action(DgHamiltonian::A0), sys.ad_action(DgHamiltonian::A1)];
            if name == "dg_pauli" {
                out.rep = Some(rep_pauli_dg());
            }
        }
        "tridiagonal" => {
            let c = TridiagonalConstants {
                beta: p("beta"),
                gamma: p("gamma"),
                gamma1: p("gamma1"),
                alpha: p("alpha"),
                alpha1: p("alpha1"),
            };
            let sys = DGSystem::tridiagonal(&c);
            out.actions = vec![sys.ad_action(DgHamiltonian::A0), sys.ad_action(DgHamiltonian::A1)];
        }
        "krawtchouk" => {
            let d = integer_param(&params, "d")?;
            let prob = p("p");
            let grid = GridSpec::Linear { c0: Complex64::new(0.0, 0.0), c1: Complex64::new(1.0, 0.0) };
            let top = d.checked_sub(1).ok_or_else(|| CliError::Parameter("d must be positive".into()))?;
            let a = format!("p*({top} - s)");
            let c = "(1 - p)*s";
            let b = format!("-({a}) - {c}");
            let mut stencil_params = Params::new();
            stencil_params.insert("p".into(), prob.clone());
            out.difference_op = Some(DifferenceOp::parse(d, &a, &b, c, grid, &stencil_params)?);
            out.rep = Some(rep_krawtchouk(d, prob.to_c64().re)?);
        }
        _ => unreachable!("checked against the registry"),
    }
    Ok(out)
}

fn integer_param(params: &Params, key: &str) -> Result<usize, CliError> {
    let v = params[key].to_c64();
    if v.im != 0.0 || v.re < 0.0 || v.re.fract() != 0.0 {
        return Err(CliError::Parameter(format!("'{key}' must be a nonnegative integer")));
    }
    Ok(v.re as usize)
}

impl Loaded {
    /// The structural parts as standalone files (parameters already substituted).
    pub fn export(&self) -> Vec<AlgebraFile> {
        let mut out = Vec::new();
        if let Some(s) = &self.poisson {
            let names = s.var_refs();
            let mut brackets = BTreeMap::new();
            for (i, k, _) in s.brackets() {
                brackets.insert(format!("{},{}", names[i], names[k]), s.bracket_string(i, k));
            }
            out.push(AlgebraFile::Poisson(PoissonFile { vars: s.vars().to_vec(), brackets, params: BTreeMap::new() }));
        }
        if let Some(sys) = &self.rewrite {
            let rules = sys.rules().into_iter().map(|((a, b), rhs)| (format!("{a}*{b}"), rhs.to_string())).collect();
            out.push(AlgebraFile::Rewrite(RewriteFile { generators: sys.generators().to_vec(), rules, params: BTreeMap::new() }));
        }
        for a in &self.actions {
            let f = a.f().iter().map(|row| row.iter().map(|p| p.display_with("H").to_string()).collect()).collect();
            out.push(AlgebraFile::Adaction(AdactionFile {
                hamiltonian: a.hamiltonian().to_string(),
                basis: a.basis().to_vec(),
                f,
                params: BTreeMap::new(),
            }));
        }
        if let Some(op) = &self.difference_op {
            let vars = crate::reps::STENCIL_VARS;
            let show = |p: &crate::poly::PolyN| p.display_with(&vars).to_string();
            let mut params = BTreeMap::new();
            if let Some(q) = op.q {
                if let Some(r) = RationalComplex::from_f64(q.re, q.im) {
                    params.insert("q".to_string(), r.to_string());
                }
            }
            out.push(AlgebraFile::DifferenceOp(DifferenceOpFile {
                d: op.d,
                a: show(&op.a),
                b: show(&op.b),
                c: show(&op.c),
                grid: GridFile::from_spec(&op.grid),
                params,
            }));
        }
        out
    }

    /// The action whose Hamiltonian is `name`, or the only one when `name` is `None`.
    pub fn action(&self, name: Option<&str>) -> Result<AdAction, CliError> {
        if let Some(s) = &self.poisson {
            let names = s.var_refs();
            let j = match name {
                Some(n) => s.index_of(n).ok_or_else(|| CliError::UnknownHamiltonian(n.to_string()))?,
                None => return Err(CliError::UnknownHamiltonian(format!("choose one of {}", names.join(", ")))),
            };
            return Ok(crate::poisson::classical_ad_action(s, j)?);
        }
        if self.actions.is_empty() {
            return Err(CliError::Unsupported(format!(
                "{} defines no ad-action; flows need a poisson or adaction source",
                self.name
            )));
        }
        let available: Vec<&str> = self.actions.iter().map(AdAction::hamiltonian).collect();
        match name {
            Some(n) => self
                .actions
                .iter()
                .find(|a| a.hamiltonian() == n)
                .cloned()
                .ok_or_else(|| CliError::UnknownHamiltonian(format!("'{n}' (available: {})", available.join(", ")))),
            None if self.actions.len() == 1 => Ok(self.actions[0].clone()),
            None => Err(CliError::UnknownHamiltonian(format!("choose one of {}", available.join(", ")))),
        }
    }
}

/// `qosc:D:Q`, `dg_pauli`, `krawtchouk:D:P` or `random_tridiagonal:D:SEED`.
pub fn parse_rep(spec: &str) -> Result<OperatorRep, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Parameter(format!("unrecognized representation '{spec}'"));
    let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let scalar = |s: &str| parse_scalar(s, &Params::new()).map_err(|_| bad());
    Ok(match parts.as_slice() {
        ["qosc", d, q] => rep_q_oscillator(int(d)?, &scalar(q)?)?,
        ["dg_pauli"] => rep_pauli_dg(),
        ["krawtchouk", d, p] => rep_krawtchouk(int(d)?, scalar(p)?.to_c64().re)?,
        ["random_tridiagonal", d, seed] => rep_random_tridiagonal(int(d)?, int(seed)? as u64),
        _ => return Err(bad()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip() {
        for name in BUILTINS {
            let loaded = builtin(name, &Params::new()).unwrap();
            let files = loaded.export();
            assert!(!files.is_empty(), "{name}");
            for file in files {
                let json = file.to_json();
                let again = AlgebraFile::from_json(&json).unwrap();
                assert_eq!(again, file);
                let reloaded = again.load().unwrap();
                match &file {
                    AlgebraFile::Rewrite(_) => assert_eq!(reloaded.rewrite, loaded.rewrite, "{name}"),
                    AlgebraFile::Adaction(AdactionFile { hamiltonian, .. }) => {
                        assert_eq!(reloaded.actions[0], loaded.action(Some(hamiltonian)).unwrap(), "{name}")
                    }
                    AlgebraFile::DifferenceOp(_) => {
                        assert_eq!(reloaded.difference_op, loaded.difference_op, "{name}")
                    }
                    other => panic!("unexpected export {other:?}"),
                }
            }
        }
    }

    #[test]
    fn poisson_file_round_trip() {
        let text = r#"{"kind":"poisson","vars":["x","y","z"],
            "brackets":{"y,z":"a*y*z + x","z,x":"a*x*z + y","x,y":"a*x*y + z - 1/2"},
            "params":{"a":"2"}}"#;
        let loaded = AlgebraFile::from_json(text).unwrap().load().unwrap();
        let s = loaded.poisson.clone().unwrap();
        assert_eq!(s.bracket_string(1, 2), "2*y*z + x");
        let files = loaded.export();
        assert_eq!(files.len(), 1);
        assert_eq!(files[0].load().unwrap().poisson.unwrap(), s);
    }

    #[test]
    fn schema_errors_have_locations() {
        let err = AlgebraFile::from_json("{\n \"kind\": \"poisson\",\n \"vars\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = AlgebraFile::from_json(r#"{"kind":"nope"}"#).unwrap_err();
        assert!(matches!(err, CliError::Schema(_)));
        let bad_key = r#"{"kind":"poisson","vars":["x","y"],"brackets":{"xy":"1"}}"#;
        assert!(matches!(AlgebraFile::from_json(bad_key).unwrap().load(), Err(CliError::Schema(_))));
    }

    #[test]
    fn builtin_parameters() {
        let mut o = Params::new();
        o.insert("q".into(), RationalComplex::from_int(3));
        assert!(builtin("qosc", &o).is_ok());
        o.insert("zzz".into(), RationalComplex::one());
        assert!(matches!(builtin("qosc", &o), Err(CliError::Parameter(_))));
        let mut zero_q = Params::new();
        zero_q.insert("q".into(), RationalComplex::zero());
        assert!(builtin("aw_z", &zero_q).is_err());
        assert!(matches!(builtin("nope", &Params::new()), Err(CliError::UnknownBuiltin(_))));
    }

    #[test]
    fn rep_specs() {
        assert_eq!(parse_rep("qosc:40:1/2").unwrap().dim(), 40);
        assert_eq!(parse_rep("qosc:40:1/2").unwrap().verified_cols(), 20);
        assert_eq!(parse_rep("dg_pauli").unwrap().dim(), 2);
        assert_eq!(parse_rep("krawtchouk:12:1/3").unwrap().dim(), 12);
        assert!(parse_rep("krawtchouk:12").is_err());
        assert!(parse_rep("random_tridiagonal:6:1").is_ok());
    }
}
