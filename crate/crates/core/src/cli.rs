//! `frustra` command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{proof_step_check, report_from_spectra, ExcitedAnalyzer, Spectra};
use crate::entanglement::{Bipartition, EntanglementOptions};
use crate::error::{Error, Result};
use crate::hamiltonian::{builtin, ising2, load_model, split, SpinModel, SplitPolicy, Splitting, TermRole, BUILTINS};
use crate::ising;
use crate::saturation::{saturation_sweep, schmidt_splitting};
use crate::suites::{run_all, theorem_trial, SuiteSizes};

/// Environment variable overriding the dense dimension cap.
pub const DIM_CAP_VAR: &str = "FRUSTRA_DIM_CAP";

pub const EXIT_OK: i32 = 0;
/// A verification suite reported failures.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "frustra", version, about = "Entanglement-frustration bounds for small spin Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground-state frustration report.
    Analyze {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Also verify the intermediate steps of the ground-state bound.
        #[arg(long)]
        proof: bool,
    },
    /// Transverse Ising sweep against the closed forms.
    Sweep {
        #[arg(long, value_parser = parse_range, default_value = "0.01,5")]
        g_range: (f64, f64),
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Excited-state bounds for a list of eigenstates.
    Excited {
        #[command(flatten)]
        model: ModelArgs,
        /// Indices as `a..b` (inclusive) or a comma list.
        #[arg(long, default_value = "0")]
        j: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Schmidt-splitting sweep over γ.
    Saturate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3")]
        gammas: Vec<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Randomized checks of the eigenspace perturbation theorem.
    Perturb {
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        dims: Vec<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Runs every randomized property suite.
    Selftest {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Lists the built-in models and their parameters.
    ListModels,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Built-in model name or path to a model JSON file.
    #[arg(long)]
    pub model: String,
    /// Model parameter `k=v`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// `default`, `file:PATH` or `schmidt:GAMMA`.
    #[arg(long, default_value = "default")]
    pub split: String,
    /// Two-party grouping over site labels, e.g. `B|AC`.
    #[arg(long)]
    pub bipartition: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Convergence tolerance of the entanglement optimizer.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected k=v, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{v:?}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a,b, got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

/// Parses `a..b` (inclusive) or `a,b,c`.
pub fn parse_indices(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("bad index list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Computation(String),
    Checks(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Computation(_) => EXIT_COMPUTATION,
            Failure::Checks(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidModel(_)
            | Error::InvalidAssignment(_)
            | Error::InvalidBipartition(_)
            | Error::InvalidArgument(_)
            | Error::NotBipartite(_)
            | Error::DimensionCap { .. }
            | Error::NonHermitianTerm { .. }
            | Error::IndexOutOfRange { .. }
            | Error::EnumerationCap { .. }
            | Error::OracleScaleExceeded(_) => Failure::Config(msg),
            _ => Failure::Computation(msg),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn entanglement_options(run: &RunArgs) -> EntanglementOptions {
    let mut o = EntanglementOptions {
        seed: run.seed,
        ..EntanglementOptions::default()
    };
    if let Some(t) = run.tol {
        o.tol = t;
    }
    o
}

fn dim_cap_override() -> std::result::Result<Option<usize>, Failure> {
    match std::env::var(DIM_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Config(format!("{DIM_CAP_VAR}={v:?} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

/// Loads the model, applies the cap override and the bipartition grouping.
pub fn load(args: &ModelArgs) -> std::result::Result<SpinModel, Failure> {
    let params: BTreeMap<String, f64> = args.params.iter().cloned().collect();
    let mut model = if BUILTINS.iter().any(|b| b.name == args.model) {
        builtin(&args.model, &params)?
    } else {
        if !params.is_empty() {
            return Err(Failure::Config("--param applies to built-in models only".into()));
        }
        load_model(std::path::Path::new(&args.model))?
    };
    if let Some(cap) = dim_cap_override()? {
        model = model.with_dim_cap(cap);
    }
    if let Some(spec) = &args.bipartition {
        let bip = Bipartition::parse(spec, model.labels())?;
        model = model.grouped(&bip.parties())?;
    }
    Ok(model)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitFile {
    local: Vec<usize>,
}

pub fn splitting(model: &SpinModel, spec: &str) -> std::result::Result<Splitting, Failure> {
    if spec == "default" {
        return Ok(split(model, &SplitPolicy::ByLocalityDegree)?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{path}: {e}")))?;
        let f: SplitFile = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{path}: {e}")))?;
        let policy = SplitPolicy::local_indices(model.terms().len(), &f.local)?;
        return Ok(split(model, &policy)?);
    }
    if let Some(g) = spec.strip_prefix("schmidt:") {
        let gamma: f64 = g
            .parse()
            .map_err(|_| Failure::Config(format!("bad gamma {g:?}")))?;
        return Ok(schmidt_splitting(model, gamma)?.splitting);
    }
    Err(Failure::Config(format!("unknown split {spec:?}")))
}

fn emit(run: &RunArgs, text: &str) -> CmdResult {
    match &run.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Config(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Computation(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> std::result::Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Computation(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// 17 significant digits; empty for absent or non-finite values.
pub fn csv_num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.16e}"),
        _ => String::new(),
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> std::result::Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Config(e.to_string()))?;
    Ok(pool.install(f))
}

fn require_json(run: &RunArgs, cmd: &str) -> CmdResult {
    if run.format == Format::Csv {
        return Err(Failure::Config(format!("{cmd} writes JSON only")));
    }
    Ok(())
}

fn cmd_analyze(model: &ModelArgs, run: &RunArgs, proof: bool) -> CmdResult {
    require_json(run, "analyze")?;
    let m = load(model)?;
    let s = splitting(&m, &model.split)?;
    let opts = entanglement_options(run);
    let sp = Spectra::new(&s)?;
    let report = report_from_spectra(&s, &sp, &opts)?;
    let mut value = serde_json::to_value(&report).map_err(|e| Failure::Computation(e.to_string()))?;
    if proof && report.ef_bound.is_some() {
        let check = proof_step_check(&s, &report, &opts)?;
        value["proof_step"] = serde_json::to_value(check).map_err(|e| Failure::Computation(e.to_string()))?;
    }
    emit(run, &to_json(&value)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub entanglement: f64,
    pub ef_bound_symmetric: Option<f64>,
    pub ef_bound_asymmetric: Option<f64>,
    pub closed_form_gse: f64,
    pub closed_form_fb: f64,
    pub closed_form_fb2: f64,
    pub dev_gse: f64,
    pub dev_fb: Option<f64>,
    pub dev_fb2: Option<f64>,
}

pub const SWEEP_HEADER: &str = "g,entanglement,ef_bound_symmetric,ef_bound_asymmetric,closed_form_gse,closed_form_fb,closed_form_fb2,dev_gse,dev_fb,dev_fb2";

/// Symmetric (H_L = −g(X₁ + X₂)) and single-site (H_L = −gX₁) bounds at g.
pub fn sweep_row(g: f64, opts: &EntanglementOptions) -> Result<SweepRow> {
    let m = ising2(g);
    let sym = split(&m, &SplitPolicy::ByLocalityDegree)?;
    let asym = split(
        &m,
        &SplitPolicy::Explicit(vec![TermRole::Local, TermRole::Interaction, TermRole::Interaction]),
    )?;
    let rs = report_from_spectra(&sym, &Spectra::new(&sym)?, opts)?;
    let ra = report_from_spectra(&asym, &Spectra::new(&asym)?, opts)?;
    let gse = ising::entanglement(g);
    let fb = ising::ef_bound(g);
    let fb2 = ising::ef_bound_single_site(g);
    let dev = |x: Option<f64>, y: f64| x.filter(|_| y.is_finite()).map(|x| (x - y).abs());
    Ok(SweepRow {
        g,
        entanglement: rs.entanglement,
        ef_bound_symmetric: rs.ef_bound,
        ef_bound_asymmetric: ra.ef_bound,
        closed_form_gse: gse,
        closed_form_fb: fb,
        closed_form_fb2: fb2,
        dev_gse: (rs.entanglement - gse).abs(),
        dev_fb: dev(rs.ef_bound, fb),
        dev_fb2: dev(ra.ef_bound, fb2),
    })
}

pub fn grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![a],
        n => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn cmd_sweep(range: (f64, f64), points: usize, run: &RunArgs) -> CmdResult {
    if points == 0 || !(range.0 >= 0.0) || !(range.1 >= range.0) {
        return Err(Failure::Config("sweep needs 0 <= a <= b and at least one point".into()));
    }
    let opts = entanglement_options(run);
    let gs = grid(range.0, range.1, points);
    let rows = with_pool(run.jobs, || {
        gs.par_iter().map(|&g| sweep_row(g, &opts)).collect::<Result<Vec<_>>>()
    })??;
    let text = match run.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut s = String::from(SWEEP_HEADER);
            s.push('\n');
            for r in &rows {
                let cells = [
                    Some(r.g),
                    Some(r.entanglement),
                    r.ef_bound_symmetric,
                    r.ef_bound_asymmetric,
                    Some(r.closed_form_gse),
                    Some(r.closed_form_fb),
                    Some(r.closed_form_fb2),
                    Some(r.dev_gse),
                    r.dev_fb,
                    r.dev_fb2,
                ];
                let line: Vec<String> = cells.into_iter().map(csv_num).collect();
                let _ = writeln!(s, "{}", line.join(","));
            }
            s
        }
    };
    emit(run, &text)
}

fn cmd_excited(model: &ModelArgs, j: &str, run: &RunArgs) -> CmdResult {
    let js = parse_indices(j)?;
    let m = load(model)?;
    let s = splitting(&m, &model.split)?;
    let opts = entanglement_options(run);
    let an = ExcitedAnalyzer::new(&s)?;
    let reports = with_pool(run.jobs, || {
        js.par_iter().map(|&j| an.analyze(j, &opts)).collect::<Result<Vec<_>>>()
    })??;
    let text = match run.format {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut s = String::from("j,e_j,local_energy,delta_j_ent,delta_j_kperp,h_i_norm,bound_29,bound_30,bound_dk,entanglement,precondition_met\n");
            for r in &reports {
                let nums: Vec<String> = [
                    Some(r.e_j),
                    Some(r.local_energy),
                    Some(r.delta_j_ent),
                    Some(r.delta_j_kperp),
                    Some(r.h_i_norm),
                    r.bound_29,
                    r.bound_30,
                    r.bound_dk,
                    Some(r.entanglement),
                ]
                .into_iter()
                .map(csv_num)
                .collect();
                let _ = writeln!(s, "{},{},{}", r.j, nums.join(","), r.precondition_met);
            }
            s
        }
    };
    emit(run, &text)
}

fn cmd_saturate(model: &ModelArgs, gammas: &[f64], run: &RunArgs) -> CmdResult {
    if model.split != "default" {
        return Err(Failure::Config("saturate builds its own splitting; drop --split".into()));
    }
    let m = load(model)?;
    let opts = entanglement_options(run);
    let sweep = saturation_sweep(&m, gammas, &opts)?;
    let text = match run.format {
        Format::Json => to_json(&sweep)?,
        Format::Csv => {
            let mut s = String::from("gamma,E0,E0_L,E0_I,E_f,delta_e_ent,ef_bound,entanglement,excess,overshoot_interaction,unreliable\n");
            for r in &sweep.records {
                let nums: Vec<String> = [
                    r.gamma,
                    r.e0,
                    r.e0_l,
                    r.e0_i,
                    r.e_f,
                    r.delta_e_ent,
                    r.ef_bound,
                    r.entanglement,
                    r.excess,
                    r.overshoot_interaction,
                ]
                .into_iter()
                .map(|x| csv_num(Some(x)))
                .collect();
                let _ = writeln!(s, "{},{}", nums.join(","), r.unreliable);
            }
            s
        }
    };
    emit(run, &text)
}

#[derive(Serialize)]
struct PerturbLine<'a> {
    trial: usize,
    dim: usize,
    c_norm: f64,
    passed: bool,
    report: &'a crate::perturbation::PerturbationCheckReport,
}

#[derive(Serialize)]
struct PerturbSummary {
    trials: usize,
    passed: usize,
    failed: usize,
    errors: usize,
    worst_margin: f64,
    worst_margin_trial: Option<usize>,
}

fn cmd_perturb(dims: &[usize], run: &RunArgs) -> CmdResult {
    require_json(run, "perturb")?;
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Failure::Config("--dims needs sizes of at least 2".into()));
    }
    let trials = run.trials.unwrap_or(500);
    let results = with_pool(run.jobs, || {
        (0..trials)
            .into_par_iter()
            .map(|t| theorem_trial(run.seed, t, dims))
            .collect::<Vec<_>>()
    })?;
    let mut text = String::new();
    let mut summary = PerturbSummary {
        trials,
        passed: 0,
        failed: 0,
        errors: 0,
        worst_margin: f64::INFINITY,
        worst_margin_trial: None,
    };
    for (t, r) in results.iter().enumerate() {
        match r {
            Ok((dim, c_norm, rep)) => {
                let passed = rep.passed();
                if passed {
                    summary.passed += 1;
                } else {
                    summary.failed += 1;
                }
                if rep.op_ineq_margin < summary.worst_margin {
                    summary.worst_margin = rep.op_ineq_margin;
                    summary.worst_margin_trial = Some(t);
                }
                let line = PerturbLine { trial: t, dim: *dim, c_norm: *c_norm, passed, report: rep };
                text.push_str(&serde_json::to_string(&line).map_err(|e| Failure::Computation(e.to_string()))?);
            }
            Err(e) => {
                summary.errors += 1;
                text.push_str(&serde_json::json!({ "trial": t, "error": e.to_string() }).to_string());
            }
        }
        text.push('\n');
    }
    text.push_str(&serde_json::json!({ "summary": summary }).to_string());
    text.push('\n');
    emit(run, &text)?;
    if summary.failed + summary.errors > 0 {
        return Err(Failure::Checks(format!("{} of {trials} trials failed", summary.failed + summary.errors)));
    }
    Ok(())
}

fn cmd_selftest(run: &RunArgs) -> CmdResult {
    let sizes = run.trials.map(SuiteSizes::uniform).unwrap_or_default();
    let opts = entanglement_options(run);
    let outcomes = with_pool(run.jobs, || run_all(&sizes, run.seed, &opts))?;
    let text = match run.format {
        Format::Json => to_json(&outcomes)?,
        Format::Csv => {
            let mut s = String::from("suite,trials,failures,status\n");
            for o in &outcomes {
                let _ = writeln!(s, "{},{},{},{}", o.name, o.trials, o.failures, if o.passed() { "pass" } else { "FAIL" });
            }
            s
        }
    };
    emit(run, &text)?;
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.name.as_str()).collect();
    for o in outcomes.iter().filter(|o| !o.passed()) {
        for n in &o.notes {
            eprintln!("{}: {n}", o.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(format!("failed suites: {}", failed.join(", "))))
    }
}

fn cmd_list_models() -> CmdResult {
    let mut s = String::new();
    for b in BUILTINS {
        let params: Vec<String> = b.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "{:<10} {:<24} {}", b.name, params.join(" "), b.description);
    }
    print!("{s}");
    Ok(())
}

pub fn execute(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Analyze { model, run, proof } => cmd_analyze(model, run, *proof),
        Command::Sweep { g_range, points, run } => cmd_sweep(*g_range, *points, run),
        Command::Excited { model, j, run } => cmd_excited(model, j, run),
        Command::Saturate { model, gammas, run } => cmd_saturate(model, gammas, run),
        Command::Perturb { dims, run } => cmd_perturb(dims, run),
        Command::Selftest { run } => cmd_selftest(run),
        Command::ListModels => cmd_list_models(),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("error: {m}"),
                Failure::Computation(m) => eprintln!("computation failed: {m}"),
                Failure::Checks(m) => eprintln!("{m}"),
            }
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lists() {
        assert_eq!(parse_indices("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_indices("2, 5").unwrap(), vec![2, 5]);
        assert!(parse_indices("3..1").is_err());
        assert!(parse_indices("x").is_err());
    }

    #[test]
    fn params_and_ranges() {
        assert_eq!(parse_param("g=1.5").unwrap(), ("g".to_string(), 1.5));
        assert!(parse_param("g").is_err());
        assert_eq!(parse_range("0.01,5").unwrap(), (0.01, 5.0));
    }

    #[test]
    fn csv_numbers_round_trip() {
        let x = 0.1 + 0.2;
        let s = csv_num(Some(x));
        assert_eq!(s.parse::<f64>().unwrap(), x);
        assert_eq!(csv_num(None), "");
        assert_eq!(csv_num(Some(f64::NAN)), "");
    }

    #[test]
    fn sweep_row_at_zero_field() {
        let r = sweep_row(0.0, &EntanglementOptions::default()).unwrap();
        assert!((r.entanglement - 0.5).abs() < 1e-9);
        assert!(r.ef_bound_symmetric.is_none());
        assert!(r.dev_fb.is_none());
    }

    #[test]
    fn grid_endpoints() {
        let g = grid(0.01, 5.0, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[199], 5.0);
    }

    #[test]
    fn config_errors_map_to_exit_two() {
        let f: Failure = Error::InvalidModel("x".into()).into();
        assert_eq!(f.code(), EXIT_CONFIG);
        let f: Failure = Error::NoConvergence { sweeps: 1, residual: 1.0 }.into();
        assert_eq!(f.code(), EXIT_COMPUTATION);
    }
}
