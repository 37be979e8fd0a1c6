//! Command-line front end: one process, one command, JSON records on stdout.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::acover::{
    build_cover, change_basis, check_generator_laws, check_induced_action, cuspidality_certificate, pi_star_check,
    projection_report, psi_symbolic, reference_frame, AcoverError, CoverModule, CoverOptions,
};
use crate::enveloping::{verify_intro_identity, verify_key_identity, verify_solenoidal_identity, IdentityMode, IdentityRecord};
use crate::lie::LatticeAutomorphism;
use crate::modules::{
    annihilates, build_preset, check_aw_compat, check_module_axioms, de_rham_homology, de_rham_homomorphism_check,
    graded_dual, jets_module, omega_forms, tensor_density, tensor_field, twist, weight_report, AnyModule, JetRep,
    ModuleError, Param, PolyWeightModule, RepFile,
};
use crate::scalar::{binomial, Field, Poly, Rational, Ring, Vars};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "wittforge", version, about = "Exact verification for Witt-type algebras and their weight modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Record format on stdout.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub emit: Emit,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The quadratic identity between differentiator anticommutators.
    VerifyIdentity {
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, value_enum, default_value = "symbolic")]
        mode: Mode,
        /// Grid range for each of k, s, p, q.
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
        range: IntRange,
        /// Check the `m = r` specialization instead.
        #[arg(long)]
        intro: bool,
        /// Run over the solenoidal algebra with symbolic direction in rank `n`.
        #[arg(long)]
        n: Option<usize>,
        /// Step radius for the solenoidal run.
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
    /// Does the differentiator of order `m` act by zero?
    Annihilator {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        h: i64,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Module axioms, AW-compatibility and a weight table.
    ModuleCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Build the A-cover and certify it.
    Acover {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 7)]
        window: i64,
    },
    /// Homology of the twisted de Rham complex.
    Derham {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 1)]
        window: i64,
    },
    /// Build a jet module from a representation file.
    Jets {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        beta: Option<String>,
    },
    /// Twist a module by a lattice automorphism, rows separated by `;`.
    Twist {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        g: String,
    },
    /// Graded dual of a module.
    Dual {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// A built-in module: punctured_functions, virasoro_adjoint, feigin_fuks_length2,
    /// tensor_density, tensor_field, omega_forms, jets.
    #[arg(long, conflicts_with = "module", required_unless_present = "module")]
    pub preset: Option<String>,
    /// A module document.
    #[arg(long)]
    pub module: Option<PathBuf>,
    /// A representation document for tensor_field and jets.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    /// Comma-separated parameters; each entry is a rational or a symbol.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Symbolic,
    Grid,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got `{s}`"))?;
        let lo = a.trim().parse().map_err(|_| format!("bad lower bound `{a}`"))?;
        let hi = b.trim().parse().map_err(|_| format!("bad upper bound `{b}`"))?;
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(IntRange { lo, hi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Schema = 2,
    Inconclusive = 3,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }

    fn of(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug)]
pub struct Report {
    pub records: Vec<Value>,
    pub table: Vec<String>,
    pub status: Status,
}

#[derive(Debug)]
enum CliError {
    Schema(String),
    Inconclusive(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(s) => write!(f, "error: {s}"),
            CliError::Inconclusive(s) => write!(f, "inconclusive: {s}"),
        }
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<AcoverError> for CliError {
    fn from(e: AcoverError) -> Self {
        match e {
            AcoverError::Inconclusive { .. } => CliError::Inconclusive(e.to_string()),
            e => CliError::Schema(e.to_string()),
        }
    }
}

type Outcome = Result<Report, CliError>;

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn report(records: Vec<Value>, table: Vec<String>, pass: bool) -> Outcome {
    Ok(Report { records, table, status: Status::of(pass) })
}

pub fn run(cli: &Cli) -> Report {
    let out = match &cli.command {
        Command::VerifyIdentity { m, r, mode, range, intro, n, window } => {
            verify_identity(*m, *r, *mode, *range, *intro, *n, *window)
        }
        Command::Annihilator { source, m, h, window } => {
            load(source).and_then(|a| with_module!(a, x => annihilator(&x, *m, *h, *window)))
        }
        Command::ModuleCheck { source, window } => load(source).and_then(|a| with_module!(a, x => module_check(&x, *window))),
        Command::Acover { source, window } => load(source).and_then(|a| acover(a, source.preset.as_deref(), *window, cli.seed)),
        Command::Derham { n, beta, window } => derham(*n, beta.as_deref(), *window),
        Command::Jets { rep, beta } => jets(rep, beta.as_deref()),
        Command::Twist { source, g } => load(source).and_then(|a| {
            let g = parse_matrix(g)?;
            with_module!(a, x => twist_cmd(&x, &g))
        }),
        Command::Dual { source } => load(source).and_then(|a| with_module!(a, x => dual_cmd(&x))),
    };
    match out {
        Ok(r) => r,
        Err(e) => {
            let status = match e {
                CliError::Schema(_) => Status::Schema,
                CliError::Inconclusive(_) => Status::Inconclusive,
            };
            Report { records: vec![], table: vec![e.to_string()], status }
        }
    }
}

macro_rules! with_module {
    ($any:expr, $m:ident => $body:expr) => {
        match $any {
            AnyModule::Rational($m) => $body,
            AnyModule::Quad($m) => $body,
        }
    };
}
use with_module;

impl Report {
    /// Writes the records; CSV flattens nested values to compact JSON.
    pub fn write(&self, emit: Emit, out: &mut impl std::io::Write) -> std::io::Result<()> {
        match emit {
            Emit::Json => {
                for r in &self.records {
                    writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))?;
                }
            }
            Emit::Csv => {
                let keys: BTreeSet<&String> = self.records.iter().filter_map(Value::as_object).flat_map(|o| o.keys()).collect();
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&keys)?;
                for r in &self.records {
                    let row = keys.iter().map(|k| match r.get(k.as_str()) {
                        None | Some(Value::Null) => String::new(),
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                    });
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

// ---- inputs

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn parse_params(csv: &str) -> Result<Vec<Param<Rational>>, CliError> {
    csv.split(',')
        .map(str::trim)
        .map(|t| {
            if let Ok(q) = t.parse::<Rational>() {
                Ok(Param::Value(q))
            } else if !t.is_empty() && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && t.chars().next().unwrap().is_ascii_alphabetic() {
                Ok(Param::sym(t))
            } else {
                Err(CliError::Schema(format!("bad parameter `{t}`")))
            }
        })
        .collect()
}

fn params_or_zero(beta: Option<&str>, n: usize) -> Result<Vec<Param<Rational>>, CliError> {
    let b = match beta {
        Some(s) => parse_params(s)?,
        None => vec![Param::Value(Rational::zero()); n],
    };
    if b.len() != n {
        return Err(CliError::Schema(format!("expected {n} entries in --beta, got {}", b.len())));
    }
    Ok(b)
}

fn parse_matrix(text: &str) -> Result<LatticeAutomorphism, CliError> {
    let rows: Result<Vec<Vec<i64>>, _> = text.split(';').map(|r| r.split(',').map(|x| x.trim().parse::<i64>()).collect()).collect();
    let rows = rows.map_err(|e| CliError::Schema(format!("bad matrix `{text}`: {e}")))?;
    LatticeAutomorphism::new(rows).map_err(|e| CliError::Schema(e.to_string()))
}

fn load(source: &Source) -> Result<AnyModule, CliError> {
    if let Some(path) = &source.module {
        return Ok(AnyModule::from_json(&read(path)?)?);
    }
    let name = source.preset.as_deref().expect("clap enforces one source");
    let rep = || -> Result<RepFile, CliError> {
        let path = source.rep.as_ref().ok_or_else(|| CliError::Schema(format!("preset {name} needs --rep")))?;
        Ok(RepFile::from_json(&read(path)?)?)
    };
    let m = match name {
        "tensor_density" => {
            let p = params_or_zero(source.beta.as_deref(), 2)?;
            tensor_density(p[0].clone(), p[1].clone())
        }
        "omega_forms" => {
            let n = source.n.unwrap_or(1);
            let k = source.k.unwrap_or(0);
            omega_forms(n, k, &params_or_zero(source.beta.as_deref(), n)?)?
        }
        "tensor_field" => match rep()? {
            RepFile::Gln(u) => tensor_field(&u, &params_or_zero(source.beta.as_deref(), u.n())?)?,
            RepFile::Jet(_) => return Err(CliError::Schema("tensor_field needs a gln representation".into())),
        },
        "jets" => {
            let j = match rep()? {
                RepFile::Gln(u) => JetRep::from_gln(&u)?,
                RepFile::Jet(j) => j,
            };
            jets_module(&j, &params_or_zero(source.beta.as_deref(), j.n())?)?
        }
        other => return Ok(build_preset(other)?),
    };
    Ok(AnyModule::Rational(m))
}

// ---- commands

fn verify_identity(m: u32, r: u32, mode: Mode, range: IntRange, intro: bool, n: Option<usize>, window: i64) -> Outcome {
    let schema = |e: crate::enveloping::EnvelopingError| CliError::Schema(e.to_string());
    let (label, recs): (String, Vec<IdentityRecord>) = match (n, intro, mode) {
        (Some(n), _, _) => {
            let hs = box_points(n, window);
            (format!("solenoidal n={n} m={m} r={r}"), verify_solenoidal_identity(n, m, r, &hs).map_err(schema)?)
        }
        (None, true, _) => (format!("intro m={m}"), vec![verify_intro_identity(m).map_err(schema)?]),
        (None, false, Mode::Symbolic) => (format!("symbolic m={m} r={r}"), verify_key_identity(m, r, IdentityMode::Symbolic).map_err(schema)?),
        (None, false, Mode::Grid) => (
            format!("grid m={m} r={r} range={}..{}", range.lo, range.hi),
            verify_key_identity(m, r, IdentityMode::Grid { lo: range.lo, hi: range.hi }).map_err(schema)?,
        ),
    };
    let passed = recs.iter().filter(|r| r.pass).count();
    let table = vec![format!("verify-identity {label}: {passed}/{} pass", recs.len())];
    report(recs.iter().map(value).collect(), table, passed == recs.len())
}

fn box_points(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-r..=r).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

fn annihilator<F: Field>(module: &PolyWeightModule<F>, m: u32, h: i64, window: i64) -> Outcome {
    let cert = annihilates(module, m, h, window)?;
    let mut table = vec![format!("annihilator m={m} h={h}: {}", if cert.annihilates { "annihilates" } else { "does not annihilate" })];
    if let Some(w) = &cert.witness {
        table.push(format!("  witness k={} s={} p={} {}: {}", w.k, w.s, w.p, w.label, w.image));
    }
    report(vec![value(&cert)], table, cert.annihilates)
}

fn module_check<F: Field>(module: &PolyWeightModule<F>, window: i64) -> Outcome {
    let axioms = check_module_axioms(module, window);
    let aw = match check_aw_compat(module) {
        Ok(v) => Some(v),
        Err(ModuleError::Unsupported(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let weights = weight_report(module, window);
    let aw_ok = aw.as_ref().is_none_or(Vec::is_empty);
    let table = vec![
        format!("axioms: {} ({} symbolic, {} window)", pass_word(axioms.pass), axioms.symbolic_checked, axioms.window_checked),
        format!("aw-compatibility: {}", aw.as_ref().map_or("n/a", |v| pass_word(v.is_empty()))),
        format!("weight spaces: max dim {} on |o| <= {window}", weights.max_dim),
    ];
    let rec = json!({ "axioms": axioms, "aw_residues": aw, "weights": weights, "pass": axioms.pass && aw_ok });
    report(vec![rec], table, axioms.pass && aw_ok)
}

fn pass_word(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn cover_records<F: Field>(cover: &CoverModule<F>, window: i64, seed: u64) -> Result<(Vec<Value>, Vec<String>, bool), CliError> {
    let module = &cover.source;
    let cusp = cuspidality_certificate(cover, -window, window, &CoverOptions::default())?;
    let projections = (-2..=2).map(|w| projection_report(cover, w, 2)).collect::<Result<Vec<_>, _>>()?;
    let action = check_induced_action(cover, 2)?;
    let laws = check_generator_laws(module, 2)?;
    let axioms = check_module_axioms(&cover.presentation, 3);
    let aw = check_aw_compat(&cover.presentation)?;
    let pistar = pi_star_check(module, 32, seed, 2)?;
    let proj_ok = projections.iter().all(|p| p.pass);
    let pass = cusp.pass && proj_ok && action.pass && laws.pass && axioms.pass && aw.is_empty() && pistar.pass;
    let mut table = vec![format!(
        "cover rank {} (degree bound {}) on weights {}..{}: {}",
        cover.rank(),
        cover.frame.degree,
        -window,
        window,
        if cusp.uniform { "uniform" } else { "NOT uniform" }
    )];
    table.extend(cover.action.table().into_iter().map(|l| format!("  {l}")));
    table.push(format!(
        "cuspidality {} | projection {} | induced action {} | generator laws {} | axioms {} | pi* {}",
        pass_word(cusp.pass),
        pass_word(proj_ok),
        pass_word(action.pass),
        pass_word(laws.pass),
        pass_word(axioms.pass && aw.is_empty()),
        pass_word(pistar.pass)
    ));
    let rec = json!({
        "rank": cover.rank(),
        "degree": cover.frame.degree,
        "action": cover.action.table(),
        "presentation": cover.to_doc(),
        "cuspidality": cusp,
        "projection": projections,
        "induced_action_check": action,
        "generator_laws": laws,
        "presentation_axioms": axioms,
        "presentation_aw_residues": aw,
        "pi_star": pistar,
        "pass": pass,
    });
    Ok((vec![rec], table, pass))
}

fn reference_record(module: &PolyWeightModule<Rational>, cover: &CoverModule<Rational>, preset: &str) -> Result<Option<(Value, bool)>, CliError> {
    let Some(r) = reference_frame(preset) else { return Ok(None) };
    let act = change_basis(module, &cover.frame, &r.basis, &r.names)?;
    let opw = Vars::new(["o", "p", "w"]);
    let mut action_ok = true;
    for (i, row) in r.action.iter().enumerate() {
        for (l, text) in row.iter().enumerate() {
            let want = Poly::<Rational>::parse(text, &opw).map_err(|e| CliError::Schema(e.to_string()))?;
            action_ok &= act.coeffs.get(i).and_then(|row| row.get(l)) == Some(&want);
        }
    }
    let psi = psi_symbolic(module, &r.basis, 0)?;
    let oj = Vars::new(["o", "j"]);
    let psi_ok = psi.len() == r.psi.len()
        && psi.iter().zip(&r.psi).all(|(c, t)| Poly::parse(t, &oj).map(|w| *c == w).unwrap_or(false));
    let rec = json!({
        "frame": r.names,
        "action": act.table(),
        "expected_action": r.action,
        "action_matches": action_ok,
        "psi": psi.iter().map(Poly::to_string).collect::<Vec<_>>(),
        "psi_matches": psi_ok,
    });
    Ok(Some((rec, action_ok && psi_ok)))
}

fn acover(any: AnyModule, preset: Option<&str>, window: i64, seed: u64) -> Outcome {
    match any {
        AnyModule::Rational(m) => {
            let cover = build_cover(&m, &CoverOptions::default())?;
            let (mut records, mut table, mut pass) = cover_records(&cover, window, seed)?;
            if let Some((rec, ok)) = preset.map(|p| reference_record(&m, &cover, p)).transpose()?.flatten() {
                let names: Vec<&str> = rec["frame"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                table.push(format!("reference frame ({}): {}", names.join(", "), pass_word(ok)));
                table.extend(rec["action"].as_array().into_iter().flatten().map(|l| format!("  {}", l.as_str().unwrap_or(""))));
                records.push(rec);
                pass &= ok;
            }
            report(records, table, pass)
        }
        AnyModule::Quad(m) => {
            let cover = build_cover(&m, &CoverOptions::default())?;
            let (records, table, pass) = cover_records(&cover, window, seed)?;
            report(records, table, pass)
        }
    }
}

fn derham(n: usize, beta: Option<&str>, window: i64) -> Outcome {
    if n == 0 {
        return Err(CliError::Schema("n must be positive".into()));
    }
    let beta: Vec<Rational> = params_or_zero(beta, n)?
        .into_iter()
        .map(|p| match p {
            Param::Value(q) => Ok(q),
            Param::Symbol(s) => Err(CliError::Schema(format!("derham needs a concrete weight, got `{s}`"))),
        })
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut table = Vec::new();
    let mut ranks_ok = true;
    for w in box_points(n, window) {
        let h = de_rham_homology(n, &beta, &w);
        // The complex at weight s is the Koszul complex of (s_1, ..., s_n):
        // exact unless s = 0, where the differential vanishes.
        let zero = beta.iter().zip(&w).all(|(b, &x)| (b.clone() + Rational::from_i64(x)).is_zero());
        let expected: Vec<usize> = (0..=n).map(|k| if zero { binomial(n as u32, k as u32) as usize } else { 0 }).collect();
        ranks_ok &= h == expected;
        table.push(format!("  {w:?}: {h:?}"));
        rows.push(json!({ "offset": w, "ranks": h, "expected": expected }));
    }
    let hom = de_rham_homomorphism_check::<Rational>(n)?;
    table.insert(0, format!("de Rham n={n}: homology {} | d homomorphism {} | d^2 = 0 {}", pass_word(ranks_ok), pass_word(hom.pass), pass_word(hom.d_squared_zero)));
    let pass = ranks_ok && hom.pass;
    report(vec![json!({ "n": n, "beta": beta.iter().map(|b| b.to_string()).collect::<Vec<_>>(), "homology": rows, "homomorphism": hom, "pass": pass })], table, pass)
}

fn jets(rep: &PathBuf, beta: Option<&str>) -> Outcome {
    let (module, reference) = match RepFile::from_json(&read(rep)?)? {
        RepFile::Gln(u) => {
            let beta = params_or_zero(beta, u.n())?;
            (jets_module(&JetRep::from_gln(&u)?, &beta)?, Some(tensor_field(&u, &beta)?))
        }
        RepFile::Jet(j) => (jets_module(&j, &params_or_zero(beta, j.n())?)?, None),
    };
    let axioms = check_module_axioms(&module, 2);
    let aw = check_aw_compat(&module)?;
    let matches = reference.as_ref().map(|t| t.terms() == module.terms());
    let pass = axioms.pass && aw.is_empty() && matches.unwrap_or(true);
    let table = vec![format!(
        "jets: axioms {} | aw {} | tensor-field comparison {}",
        pass_word(axioms.pass),
        pass_word(aw.is_empty()),
        matches.map_or("n/a", pass_word)
    )];
    let rec = json!({ "module": module.to_doc(), "axioms": axioms, "aw_residues": aw, "matches_tensor_field": matches, "pass": pass });
    report(vec![rec], table, pass)
}

fn twist_cmd<F: Field>(module: &PolyWeightModule<F>, g: &LatticeAutomorphism) -> Outcome {
    let t = twist(module, g)?;
    let back = twist(&t, &g.inverse())?;
    let axioms = check_module_axioms(&t, 2);
    let roundtrip = back == *module;
    let pass = axioms.pass && roundtrip;
    let table = vec![format!("twist: axioms {} | untwist recovers input {}", pass_word(axioms.pass), pass_word(roundtrip))];
    report(vec![json!({ "module": t.to_doc(), "axioms": axioms, "roundtrip": roundtrip, "pass": pass })], table, pass)
}

fn dual_cmd<F: Field>(module: &PolyWeightModule<F>) -> Outcome {
    let d = graded_dual(module)?;
    let dd = graded_dual(&d)?;
    let axioms = check_module_axioms(&d, 2);
    let roundtrip = dd == *module;
    let pass = axioms.pass && roundtrip;
    let table = vec![format!("dual: axioms {} | double dual is the input {}", pass_word(axioms.pass), pass_word(roundtrip))];
    report(vec![json!({ "module": d.to_doc(), "axioms": axioms, "roundtrip": roundtrip, "pass": pass })], table, pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!("-2..2".parse::<IntRange>().unwrap(), IntRange { lo: -2, hi: 2 });
        assert!("3..1".parse::<IntRange>().is_err());
        assert!("3".parse::<IntRange>().is_err());
    }

    #[test]
    fn params_mix_values_and_symbols() {
        let p = parse_params("1/2, alpha,0").unwrap();
        assert_eq!(p[0], Param::Value(Rational::new(1, 2)));
        assert_eq!(p[1], Param::sym("alpha"));
        assert!(parse_params("1/0").is_err() || parse_params("x+y").is_err());
    }

    #[test]
    fn csv_has_sorted_header() {
        let r = Report { records: vec![json!({"b": 1, "a": [1, 2]})], table: vec![], status: Status::Pass };
        let mut buf = Vec::new();
        r.write(Emit::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n\"[1,2]\",1\n");
    }
}
