//! `isobound` subcommands.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isobound_core::explorer::{evaluate_instance, instances, min_slack, Family, FamilySpec, Grid, SweepRow};
use isobound_core::inequalities::{
    parse_ids, run_mesh_suite, run_suite, CheckParams, Status, SuiteConfig, SuiteReport,
};
use isobound_core::mesh3d::{icosphere, TriMesh};
use isobound_core::spectra::{ball_spectrum, solve, BallProblem, DensityFn, Problem};
use isobound_core::{CheckId, DomainSpec2D, SolverConfig};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{LabError, Result};
use crate::off::read_off;
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_THEOREM_FAIL: i32 = 2;
pub const EXIT_CONJECTURE_FAIL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "isobound", version, about = "Eigenvalue inequality checks on planar domains and closed surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form ball spectra.
    Ball(BallArgs),
    /// Run checks on one planar domain.
    Check(CheckArgs),
    /// Run checks over a family of domains.
    Sweep(SweepArgs),
    /// Eigenvalues against trial-space order.
    Converge(ConvergeArgs),
    /// Run the applicable checks on a closed surface.
    MeshCheck(MeshCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BallKind {
    Biharmonic,
    Steklov,
    Wentzell,
    Tension,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Curve,
    Steklov,
    Wentzell,
    Biharmonic,
    Tension,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Ellipse,
    Pdisk,
    FourierRandom,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Trial space order K.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(2..=40))]
    pub order: u32,
    /// Boundary quadrature nodes N.
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
    #[arg(long, default_value_t = 256)]
    pub interior_theta: usize,
    #[arg(long, default_value_t = 24)]
    pub interior_radial: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub eps_b: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub eps_c: f64,
    /// Nonzero eigenvalues per spectrum.
    #[arg(long, default_value_t = 4)]
    pub count: usize,
    /// Skip the coarse solve behind the error estimate.
    #[arg(long)]
    pub no_estimate: bool,
}

impl SolverArgs {
    pub fn config(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            order: self.order,
            boundary_nodes: self.nodes,
            interior_theta: self.interior_theta,
            interior_radial: self.interior_radial,
            eps_b: self.eps_b,
            eps_c: self.eps_c,
            count: self.count,
            estimate: !self.no_estimate,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Boundary stiffness β of the Wentzell condition.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Tension τ.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Boundary density: `const:c` or `cos:c0,c1,m`.
    #[arg(long, default_value = "const:1", value_parser = parse_rho)]
    pub rho: DensityFn,
}

impl ParamArgs {
    pub fn params(&self) -> Result<CheckParams> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(LabError::Usage(format!("--beta must be nonnegative, got {}", self.beta)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(LabError::Usage(format!("--tau must be positive, got {}", self.tau)));
        }
        Ok(CheckParams { beta: self.beta, tau: self.tau, rho: self.rho })
    }
}

fn parse_rho(s: &str) -> std::result::Result<DensityFn, String> {
    s.parse().map_err(|e: isobound_core::Error| e.to_string())
}

fn parse_domain(s: &str) -> std::result::Result<DomainSpec2D, String> {
    let d: DomainSpec2D = s.parse().map_err(|e: isobound_core::Error| e.to_string())?;
    d.validate().map_err(|e| e.to_string())?;
    Ok(d)
}

/// A parsed `--checks` list, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckList(pub Vec<CheckId>);

fn parse_checks(s: &str) -> std::result::Result<CheckList, String> {
    parse_ids(s).map(CheckList).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct BallArgs {
    #[arg(long, value_enum)]
    pub problem: BallKind,
    #[arg(long, default_value_t = 2)]
    pub dim: u32,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 3)]
    pub levels: u32,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// `disk:R`, `ellipse:a,b`, `pdisk:R,eps,m` or `fourier:a0,a1,b1,...`, optionally `@x,y`.
    #[arg(long, value_parser = parse_domain)]
    pub domain: DomainSpec2D,
    /// Comma-separated check ids, or `all`.
    #[arg(long, value_parser = parse_checks)]
    pub checks: CheckList,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[arg(long, value_parser = parse_checks)]
    pub checks: CheckList,
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub stop: Option<f64>,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    /// Wave number of the perturbed-disk family.
    #[arg(long, default_value_t = 2)]
    pub waves: u32,
    /// Sample count of the random family.
    #[arg(long, default_value_t = 25)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.15)]
    pub bound: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Report the minimal-slack member for each check instead of the table.
    #[arg(long)]
    pub min_slack: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_parser = parse_domain)]
    pub domain: DomainSpec2D,
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    /// `start:stop:step`.
    #[arg(long, default_value = "8:24:4")]
    pub orders: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("surface").required(true).args(["mesh", "icosphere"])))]
pub struct MeshCheckArgs {
    /// OFF file.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Coarser OFF mesh of the same surface, for error estimates.
    #[arg(long, requires = "mesh")]
    pub reference: Option<PathBuf>,
    /// Icosphere subdivision level; level `L - 1` serves as the reference.
    #[arg(long)]
    pub icosphere: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, value_parser = parse_checks, default_value = "REILLY,T1_SUM,T1_CURV,CONJ_2_1,REM_2_2,J0_MIN,JPROD,LEMMA_4_1")]
    pub checks: CheckList,
    #[command(flatten)]
    pub out: Output,
}

fn emit(out: &Output, text: &str) -> Result<()> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| LabError::io(p.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Exit code for a set of check outcomes: theorem fails win over conjecture fails.
pub fn exit_code<'a>(reports: impl Iterator<Item = &'a isobound_core::CheckReport>) -> i32 {
    let (mut theorem, mut conjecture) = (false, false);
    for r in reports {
        if r.status == Status::Fail {
            if r.conjecture {
                conjecture = true;
            } else {
                theorem = true;
            }
        }
    }
    if theorem {
        EXIT_THEOREM_FAIL
    } else if conjecture {
        EXIT_CONJECTURE_FAIL
    } else {
        EXIT_OK
    }
}

fn suite_exit(report: &SuiteReport) -> i32 {
    let code = exit_code(report.checks.iter().filter_map(|e| e.report()));
    if code == EXIT_OK && report.errors() > 0 {
        EXIT_USAGE
    } else {
        code
    }
}

fn ball(a: &BallArgs) -> Result<i32> {
    let problem = match a.problem {
        BallKind::Biharmonic => BallProblem::Biharmonic,
        BallKind::Steklov => BallProblem::Wentzell { beta: 0.0 },
        BallKind::Wentzell => BallProblem::Wentzell { beta: a.beta },
        BallKind::Tension => BallProblem::Tension { tau: a.tau },
        BallKind::Sphere => BallProblem::SphereLaplace,
    };
    let levels = ball_spectrum(problem, a.dim, a.radius, a.levels)?;
    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Csv => report::ball_csv(&levels)?,
        Format::Json => {
            let mut cfg = Map::new();
            cfg.insert("command".into(), json!("ball"));
            cfg.insert("problem".into(), json!(problem.name()));
            cfg.insert("dim".into(), json!(a.dim));
            cfg.insert("radius".into(), report::num(a.radius));
            match problem {
                BallProblem::Wentzell { beta } => {
                    cfg.insert("beta".into(), report::num(beta));
                }
                BallProblem::Tension { tau } => {
                    cfg.insert("tau".into(), report::num(tau));
                }
                _ => {}
            }
            pretty(&report::ball_json(cfg, &levels))?
        }
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn check(a: &CheckArgs) -> Result<i32> {
    let ids = a.checks.0.clone();
    let suite = SuiteConfig { solver: a.solver.config()?, params: a.params.params()? };
    let rep = run_suite(&a.domain, &ids, &suite)?;
    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Csv => report::suite_csv(&rep)?,
        Format::Json => {
            let mut cfg = Map::new();
            cfg.insert("command".into(), json!("check"));
            cfg.insert("domain".into(), json!(a.domain.to_string()));
            cfg.insert("checks".into(), json!(ids.iter().map(|i| i.as_str()).collect::<Vec<_>>()));
            cfg.extend(report::solver_json(rep.config.as_ref().unwrap_or(&suite.solver)));
            cfg.extend(report::params_json(&suite.params));
            pretty(&report::suite_json(cfg, &rep))?
        }
    };
    emit(&a.out, &text)?;
    Ok(suite_exit(&rep))
}

fn family(a: &SweepArgs) -> Result<Family> {
    let grid = |lo: f64, hi: f64| Grid::new(a.start.unwrap_or(lo), a.stop.unwrap_or(hi), a.steps);
    Ok(match a.family {
        FamilyKind::Ellipse => Family::Ellipse { grid: grid(1.0, 2.0) },
        FamilyKind::Pdisk => Family::PerturbedDisk { grid: grid(0.0, 0.3), waves: a.waves },
        FamilyKind::FourierRandom => {
            if a.start.is_some() || a.stop.is_some() {
                return Err(LabError::Usage("fourier-random takes --samples/--bound/--seed, not a grid".into()));
            }
            Family::FourierRandom { count: a.samples, bound: a.bound, seed: a.seed }
        }
    })
}

/// Evaluates every family member in parallel; rows keep family order.
pub fn parallel_sweep(fam: &FamilySpec) -> Result<Vec<SweepRow>> {
    let inst = instances(fam)?;
    Ok(inst.par_iter().map(|i| evaluate_instance(i, fam)).collect())
}

fn sweep(a: &SweepArgs) -> Result<i32> {
    let ids = a.checks.0.clone();
    let suite = SuiteConfig { solver: a.solver.config()?, params: a.params.params()? };
    let fam = FamilySpec::new(family(a)?, ids.clone()).with_suite(suite);
    fam.validate()?;
    if a.min_slack {
        let found: Vec<_> = ids.par_iter().map(|id| min_slack(&fam, *id)).collect::<std::result::Result<_, _>>()?;
        let mut cfg = Map::new();
        cfg.insert("command".into(), json!("sweep"));
        cfg.insert("family".into(), json!(fam.family.name()));
        let doc = json!({
            "version": report::SCHEMA_VERSION,
            "config": Value::Object(cfg),
            "min_slack": found.iter().map(report::min_slack_json).collect::<Vec<_>>(),
        });
        emit(&a.out, &pretty(&doc)?)?;
        return Ok(exit_code(found.iter().map(|m| &m.report)));
    }
    let rows = parallel_sweep(&fam)?;
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => report::sweep_csv(&rows, &ids)?,
        Format::Json => {
            let mut cfg = Map::new();
            cfg.insert("command".into(), json!("sweep"));
            cfg.insert("family".into(), json!(fam.family.name()));
            cfg.insert("checks".into(), json!(ids.iter().map(|i| i.as_str()).collect::<Vec<_>>()));
            cfg.extend(report::solver_json(&suite.solver));
            cfg.extend(report::params_json(&suite.params));
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| match &r.checks {
                    Ok(entries) => json!({
                        "param": report::num(r.param),
                        "domain": r.domain,
                        "checks": entries.iter().map(report::check_json).collect::<Vec<_>>(),
                    }),
                    Err(e) => json!({"param": report::num(r.param), "domain": r.domain, "error": e.to_string()}),
                })
                .collect();
            pretty(&json!({"version": report::SCHEMA_VERSION, "config": Value::Object(cfg), "rows": rows_json}))?
        }
    };
    emit(&a.out, &text)?;
    let reports = rows.iter().filter_map(|r| r.checks.as_ref().ok()).flatten().filter_map(|e| e.report());
    Ok(exit_code(reports))
}

/// Parses `start:stop:step` into the listed orders.
pub fn parse_orders(s: &str) -> Result<Vec<u32>> {
    let bad = || LabError::Usage(format!("--orders expects start:stop:step, got {s:?}"));
    let parts: Vec<u32> = s.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if step == 0 || start > stop || start < 2 {
        return Err(bad());
    }
    Ok((start..=stop).step_by(step as usize).collect())
}

fn converge(a: &ConvergeArgs) -> Result<i32> {
    let orders = parse_orders(&a.orders)?;
    let base = a.solver.config()?;
    let p = a.params.params()?;
    let problem = match a.problem {
        ProblemKind::Curve => Problem::CurveLaplace,
        ProblemKind::Steklov => Problem::SteklovWentzell { beta: 0.0, rho: DensityFn::Constant(1.0) },
        ProblemKind::Wentzell => Problem::SteklovWentzell { beta: p.beta, rho: p.rho },
        ProblemKind::Biharmonic => Problem::BiharmonicSteklov { rho: p.rho },
        ProblemKind::Tension => Problem::Tension { tau: p.tau },
    };
    let results: Vec<_> = orders
        .par_iter()
        .map(|k| solve(&a.domain, &problem, &base.with_order(*k)))
        .collect::<std::result::Result<_, _>>()?;
    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["order", "index", "eigenvalue", "estimate"])?;
            for (k, r) in orders.iter().zip(&results) {
                for (i, (v, e)) in r.eigenvalues.iter().zip(&r.error_estimate).enumerate() {
                    w.write_record([k.to_string(), (i + 1).to_string(), report::cell(*v), report::cell(*e)])?;
                }
            }
            String::from_utf8(w.into_inner().map_err(|e| LabError::Usage(e.to_string()))?).expect("utf-8")
        }
        Format::Json => {
            let mut cfg = Map::new();
            cfg.insert("command".into(), json!("converge"));
            cfg.insert("domain".into(), json!(a.domain.to_string()));
            cfg.insert("problem".into(), json!(problem.to_string()));
            cfg.insert("orders".into(), json!(orders));
            cfg.extend(report::solver_json(&base));
            let rows: Vec<Value> = orders
                .iter()
                .zip(&results)
                .map(|(k, r)| {
                    json!({"order": k, "eigenvalues": report::nums(&r.eigenvalues), "error_estimate": report::nums(&r.error_estimate)})
                })
                .collect();
            pretty(&json!({"version": report::SCHEMA_VERSION, "config": Value::Object(cfg), "rows": rows}))?
        }
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn mesh_check(a: &MeshCheckArgs) -> Result<i32> {
    let (mesh, reference, source): (TriMesh, Option<TriMesh>, String) = match (&a.mesh, a.icosphere) {
        (Some(path), _) => {
            let m = read_off(path)?;
            let r = a.reference.as_deref().map(read_off).transpose()?;
            (
                if a.radius == 1.0 { m } else { m.scaled(a.radius) },
                r.map(|r| r.scaled(a.radius)),
                path.display().to_string(),
            )
        }
        (None, Some(level)) => {
            let m = icosphere(level, a.radius)?;
            let r = if level > 0 { Some(icosphere(level - 1, a.radius)?) } else { None };
            (m, r, format!("icosphere:{level},{}", a.radius))
        }
        (None, None) => return Err(LabError::Usage("give --mesh FILE or --icosphere L".into())),
    };
    let ids: Vec<CheckId> = a.checks.0.clone();
    let rep = run_mesh_suite(&mesh, reference.as_ref(), &ids)?;
    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Csv => report::suite_csv(&rep)?,
        Format::Json => {
            let mut cfg = Map::new();
            cfg.insert("command".into(), json!("mesh-check"));
            cfg.insert("mesh".into(), json!(source));
            cfg.insert("vertices".into(), json!(mesh.vertex_count()));
            cfg.insert("faces".into(), json!(mesh.faces().len()));
            cfg.insert("reference".into(), json!(reference.as_ref().map(|r| r.vertex_count())));
            cfg.insert("checks".into(), json!(ids.iter().map(|i| i.as_str()).collect::<Vec<_>>()));
            pretty(&report::suite_json(cfg, &rep))?
        }
    };
    emit(&a.out, &text)?;
    Ok(suite_exit(&rep))
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Ball(a) => ball(a),
        Command::Check(a) => check(a),
        Command::Sweep(a) => sweep(a),
        Command::Converge(a) => converge(a),
        Command::MeshCheck(a) => mesh_check(a),
    }
}

/// Parses `args`, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
