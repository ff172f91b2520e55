//! Argument parsing and subcommand dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use kplane_core::fields::{make_star_set, oracle_jk, oracle_kplane, Domain, FieldKind, ScalarField, StarKind};
use kplane_core::grassmann::{haar_subspace, AffinePlane};
use kplane_core::harness::{
    explore_conjecture, registry, run_check, Budget, CheckResult, ConjectureReport, ConjectureTarget, ExploreSpec, Family,
    Params, RelationKind,
};
use kplane_core::rng::Stream;
use kplane_core::special::{sharp_constant, ConstantKind, Exponent};
use kplane_core::transforms::{funk_transform, jk_transform, kplane_transform, Quadrature};

use crate::experiment::{BudgetOverride, CheckEntry, ExperimentFile, Format, Overrides, DEFAULT_SUITE, SCHEMA_VERSION};
use crate::report::{checks_csv, explore_csv, sig15, to_json, CheckReport, Summary};
use crate::{exec, exit, CliError, Pool};

#[derive(Debug, Parser)]
#[command(name = "kplane", version, about = "Sharp constants, k-plane transforms and seeded verification checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Master seed (overrides the experiment file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte-Carlo samples per outer integral (overrides every budget).
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Worker threads; never changes reported numbers.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a sharp constant.
    Constants(ConstantsArgs),
    /// Evaluate a transform on seeded random planes.
    Transform(TransformArgs),
    /// Run registered checks from an experiment file, a single id, or the default suite.
    Check(CheckArgs),
    /// Search a conjecture target over a parametric family.
    Explore(ExploreArgs),
    /// List the check registry.
    ListChecks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstKind {
    /// ω_{k,p,μ}(n), or ω_{j,k,p,μ}(n) when --j is given.
    Omega,
    /// Ω_k(n), or Ω_{j,k}(n) when --j is given.
    BigOmega,
    Gardner,
    Schneider,
    Dpp,
    /// Funk constant between G_{n,j} and G_{n,k}, or from the sphere without --j.
    FunkWeighted,
    /// The p = 1 sphere Funk constant.
    FunkTilde,
    /// Leading coefficient of ω as n → ∞.
    Asymptotic,
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    match s {
        "inf" | "infinity" => Ok(Exponent::Infinite),
        _ => {
            let p: f64 = s.parse().map_err(|_| format!("`{s}` is not a number or `inf`"))?;
            Exponent::new(p).map_err(|e| e.to_string())
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[arg(value_enum)]
    pub kind: ConstKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_parser = parse_exponent)]
    pub p: Option<Exponent>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    /// R_k on ℝⁿ.
    Kplane,
    /// R_{j,k} on A_{n,j}.
    Jk,
    /// F_k on the sphere.
    Funk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadArg {
    TensorTan,
    MonteCarlo,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    #[arg(value_enum)]
    pub op: TransformOp,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub j: usize,
    #[arg(long)]
    pub k: usize,
    /// `gaussian`, `extremizer`, `ball`, `constant`, or a field as JSON.
    #[arg(long, default_value = "gaussian")]
    pub field: String,
    #[arg(long, default_value_t = 5)]
    pub planes: usize,
    /// Standard deviation of the random plane offsets.
    #[arg(long, default_value_t = 0.6)]
    pub spread: f64,
    #[arg(long, value_enum, default_value_t = QuadArg::TensorTan)]
    pub quadrature: QuadArg,
    #[arg(long, default_value_t = 32)]
    pub order: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Experiment file (schema v1).
    pub file: Option<PathBuf>,
    /// Run a single check instead of a file.
    #[arg(long, conflicts_with = "file")]
    pub id: Option<String>,
    #[arg(long, requires = "id")]
    pub n: Option<usize>,
    #[arg(long, requires = "id")]
    pub j: Option<usize>,
    #[arg(long, requires = "id")]
    pub k: Option<usize>,
    #[arg(long, requires = "id", value_parser = parse_exponent)]
    pub p: Option<Exponent>,
    #[arg(long, requires = "id", allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, requires = "id")]
    pub m: Option<f64>,
    #[arg(long, requires = "id")]
    pub members: Option<usize>,
    /// Field descriptor as JSON.
    #[arg(long, requires = "id")]
    pub field: Option<String>,
    /// Star-set descriptor as JSON.
    #[arg(long, requires = "id")]
    pub star: Option<String>,
    #[arg(long, requires = "id")]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    JkLpLq,
    StarSections,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Extremizer,
    RandomSmooth,
    Ball,
}

#[derive(Debug, Clone, Args)]
pub struct ExploreArgs {
    #[arg(long, value_enum)]
    pub target: TargetArg,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub j: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: Option<f64>,
    /// Random candidates before refinement.
    #[arg(long)]
    pub members: Option<usize>,
    #[arg(long)]
    pub refine: Option<usize>,
    #[arg(long)]
    pub order: Option<usize>,
}

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let g = &cli.global;
    if g.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let pooled = |f: &(dyn Fn() -> Result<i32, CliError> + Sync)| {
        exec::with_threads(g.threads, f).map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
    };
    match &cli.command {
        Command::Constants(a) => constants(g, a),
        Command::Transform(a) => pooled(&|| transform(g, a)),
        Command::Check(a) => pooled(&|| check(g, a)),
        Command::Explore(a) => pooled(&|| explore(g, a)),
        Command::ListChecks => list_checks(g),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| CliError::Io("stdout".into(), e))
        }
    }
}

pub fn constant_kind(a: &ConstantsArgs) -> Result<ConstantKind, CliError> {
    let n = need(a.n, "n");
    let p = || need(a.p, "p");
    let mu = a.mu.unwrap_or(0.0);
    Ok(match a.kind {
        ConstKind::Omega => match a.j {
            Some(j) => ConstantKind::OmegaJKPMu { n: n?, j, k: need(a.k, "k")?, p: p()?, mu },
            None => ConstantKind::OmegaKPMu { n: n?, k: need(a.k, "k")?, p: p()?, mu },
        },
        ConstKind::BigOmega => match a.j {
            Some(j) => ConstantKind::BigOmegaJK { n: n?, j, k: need(a.k, "k")? },
            None => ConstantKind::BigOmegaK { n: n?, k: need(a.k, "k")? },
        },
        ConstKind::Gardner => ConstantKind::GardnerC { n: n?, k: need(a.k, "k")? },
        ConstKind::Schneider => ConstantKind::SchneiderC { n: n?, k: need(a.k, "k")?, m: need(a.m, "m")? },
        ConstKind::Dpp => ConstantKind::DppC { n: n?, k: need(a.k, "k")? },
        ConstKind::FunkWeighted => match a.j {
            Some(j) => ConstantKind::FunkWeightedC { n: n?, j, k: need(a.k, "k")?, p: p()?, mu },
            None => ConstantKind::FunkWeightedC1 { n: n?, k: need(a.k, "k")?, p: p()?, mu },
        },
        ConstKind::FunkTilde => ConstantKind::FunkTildeC1 { n: n?, k: need(a.k, "k")?, mu },
        ConstKind::Asymptotic => ConstantKind::AsymptoticLimit { j: a.j.unwrap_or(0), k: need(a.k, "k")?, p: p()? },
    })
}

#[derive(Serialize)]
struct ConstantRecord {
    kind: String,
    value: f64,
}

fn constants(g: &Global, a: &ConstantsArgs) -> Result<i32, CliError> {
    let kind = constant_kind(a)?;
    let value = sharp_constant(kind)?;
    let text = match g.format {
        None => format!("{}\n", sig15(value)),
        Some(Format::Json) => to_json(&ConstantRecord { kind: format!("{kind:?}"), value })?,
        Some(Format::Csv) => format!("kind,value\n\"{kind:?}\",{}\n", sig15(value)),
    };
    write_output(g.out.as_deref(), text.as_bytes())?;
    Ok(exit::OK)
}

fn named_field(op: TransformOp, n: usize, k: usize, name: &str) -> Result<FieldKind, CliError> {
    Ok(match (op, name) {
        (TransformOp::Kplane, "gaussian") => FieldKind::Gaussian { center: None },
        (TransformOp::Kplane, "extremizer") => FieldKind::Extremizer { k, map: None },
        (TransformOp::Kplane, "ball") => FieldKind::Indicator { body: make_star_set(n, StarKind::Ball { radius: 1.0 })? },
        (TransformOp::Jk, "gaussian") => FieldKind::PlaneGaussian { center: None },
        (TransformOp::Jk, "extremizer") => FieldKind::PlaneExtremizer { k, map: None },
        (TransformOp::Funk, "constant") => FieldKind::Constant { value: 1.0 },
        _ => serde_json::from_str(name)
            .map_err(|e| CliError::Usage(format!("--field is neither a known name for this transform nor a field: {e}")))?,
    })
}

#[derive(Debug, Clone, Serialize)]
struct TransformRecord {
    index: usize,
    /// Distance of the plane from the origin (0 for subspaces).
    distance: f64,
    value: f64,
    stderr: f64,
    oracle: Option<f64>,
}

fn transform(g: &Global, a: &TransformArgs) -> Result<i32, CliError> {
    let domain = match a.op {
        TransformOp::Kplane => Domain::Euclidean(a.n),
        TransformOp::Jk => Domain::AffineGrassmannian { n: a.n, j: a.j },
        TransformOp::Funk => Domain::Sphere(a.n),
    };
    let field = ScalarField::new(domain, named_field(a.op, a.n, a.k, &a.field)?)?;
    let seed = g.seed.unwrap_or(1);
    let q = match a.quadrature {
        QuadArg::TensorTan => Quadrature::tensor_tan(a.order),
        QuadArg::MonteCarlo => Quadrature::monte_carlo(g.samples.unwrap_or(20_000), seed),
    };
    q.validate()?;
    let stream = Stream::new(seed, "transform-planes");
    let records: Result<Vec<TransformRecord>, CliError> = (0..a.planes)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.sample(i as u64);
            let dir = haar_subspace(a.n, a.k, &mut rng)?;
            if a.op == TransformOp::Funk {
                let e = funk_transform(&field, &dir, &q)?;
                return Ok(TransformRecord { index: i, distance: 0.0, value: e.value, stderr: e.stderr, oracle: None });
            }
            let mut x = vec![0.0; a.n];
            rng.fill_normal(&mut x);
            x.iter_mut().for_each(|v| *v *= a.spread);
            let tau = AffinePlane::through(dir, &x)?;
            let distance = tau.offset.iter().map(|v| v * v).sum::<f64>().sqrt();
            let (e, oracle) = match a.op {
                TransformOp::Kplane => (kplane_transform(&field, &tau, &q)?, oracle_kplane(&field, &tau).ok()),
                _ => (jk_transform(&field, &tau, &q)?, oracle_jk(&field, &tau).ok()),
            };
            Ok(TransformRecord { index: i, distance, value: e.value, stderr: e.stderr, oracle })
        })
        .collect();
    let records = records?;
    let bytes = match g.format.unwrap_or_default() {
        Format::Json => to_json(&records)?.into_bytes(),
        Format::Csv => {
            let mut s = String::from("index,distance,value,stderr,oracle\n");
            for r in &records {
                let oracle = r.oracle.map(sig15).unwrap_or_default();
                s.push_str(&format!("{},{},{},{},{oracle}\n", r.index, sig15(r.distance), sig15(r.value), sig15(r.stderr)));
            }
            s.into_bytes()
        }
    };
    write_output(g.out.as_deref(), &bytes)?;
    Ok(exit::OK)
}

fn parse_json<T: serde::de::DeserializeOwned>(flag: &str, s: &Option<String>) -> Result<Option<T>, CliError> {
    s.as_deref().map(|s| serde_json::from_str(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))).transpose()
}

fn single_check(g: &Global, a: &CheckArgs, id: &str) -> Result<ExperimentFile, CliError> {
    let params = Params {
        n: a.n,
        j: a.j,
        k: a.k,
        p: a.p,
        mu: a.mu,
        m: a.m,
        field: parse_json("field", &a.field)?,
        star: parse_json("star", &a.star)?,
        members: a.members,
    };
    Ok(ExperimentFile {
        schema_version: SCHEMA_VERSION,
        seed: g.seed.unwrap_or(1),
        checks: vec![CheckEntry {
            check_id: id.into(),
            params,
            budget: BudgetOverride { samples: None, order: a.order },
            tolerance: None,
            seed: None,
        }],
        output: None,
    })
}

/// Runs every check of `file` on the current pool, in file order.
pub fn run_file(file: &ExperimentFile, o: Overrides) -> Result<Vec<CheckResult>, CliError> {
    let specs = file.specs(o)?;
    specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| run_check(s, &Pool).map_err(|e| CliError::Check { index: i, id: s.check_id.clone(), source: e }))
        .collect()
}

/// Report bytes for `results` in `format`.
pub fn render_checks(results: &[CheckResult], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => Ok(to_json(&CheckReport::new(results))?.into_bytes()),
        Format::Csv => {
            let mut buf = Vec::new();
            checks_csv(results, &mut buf)?;
            Ok(buf)
        }
    }
}

fn check(g: &Global, a: &CheckArgs) -> Result<i32, CliError> {
    let file = match (&a.file, &a.id) {
        (Some(path), _) => ExperimentFile::load(path)?,
        (None, Some(id)) => single_check(g, a, id)?,
        (None, None) => ExperimentFile::parse(DEFAULT_SUITE)?,
    };
    let results = run_file(&file, Overrides { seed: g.seed, samples: g.samples })?;
    let output = file.output.clone().unwrap_or_default();
    let format = g.format.unwrap_or(output.format);
    let out = g.out.clone().or(output.path);
    write_output(out.as_deref(), &render_checks(&results, format)?)?;
    let mut err = std::io::stderr().lock();
    for r in &results {
        let _ = writeln!(
            err,
            "{:<24} {:<15} ratio {:.6} gap {:+.2e} margin {:.2}",
            r.check_id,
            format!("{:?}", r.verdict),
            r.ratio,
            r.relative_gap,
            r.margin_sigma
        );
    }
    Ok(Summary::of(&results).exit_code())
}

/// The explorer spec described by the arguments.
pub fn explore_spec(g: &Global, a: &ExploreArgs) -> ExploreSpec {
    let target = match a.target {
        TargetArg::JkLpLq => ConjectureTarget::JkLpLq,
        TargetArg::StarSections => ConjectureTarget::StarSections,
    };
    let family = match a.family {
        FamilyArg::Extremizer => Family::Extremizer,
        FamilyArg::RandomSmooth => Family::RandomSmooth,
        FamilyArg::Ball => Family::Ball,
    };
    let mut spec = ExploreSpec::new(target, family, a.n, a.j, a.k, g.seed.unwrap_or(1));
    spec.m = a.m;
    if let Some(m) = a.members {
        spec.members = m;
    }
    if let Some(r) = a.refine {
        spec.refine = r;
    }
    if let Some(s) = g.samples {
        spec.budget.samples = s;
    }
    if let Some(o) = a.order {
        spec.budget.order = o;
    }
    spec
}

pub fn render_explore(r: &ConjectureReport, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => Ok(to_json(r)?.into_bytes()),
        Format::Csv => {
            let mut buf = Vec::new();
            explore_csv(r, &mut buf)?;
            Ok(buf)
        }
    }
}

fn explore(g: &Global, a: &ExploreArgs) -> Result<i32, CliError> {
    let report = explore_conjecture(&explore_spec(g, a), &Pool)?;
    write_output(g.out.as_deref(), &render_explore(&report, g.format.unwrap_or_default())?)?;
    eprintln!(
        "best ratio {:.6} ± {:.1e} against bound {:.6}; {} evaluated, {} skipped, {} inconclusive",
        report.best_ratio, report.stderr, report.bound, report.evaluated, report.skipped, report.inconclusive
    );
    if report.violation_found {
        eprintln!("violation candidate: {:?}", report.best_params);
        return Ok(exit::VIOLATION);
    }
    Ok(exit::OK)
}

#[derive(Serialize)]
struct CheckListing {
    id: &'static str,
    kind: RelationKind,
    relation: &'static str,
    params: &'static [&'static str],
    budget: Budget,
}

fn list_checks(g: &Global) -> Result<i32, CliError> {
    let rows: Vec<CheckListing> = registry()
        .iter()
        .map(|c| CheckListing { id: c.id, kind: c.kind, relation: c.relation, params: c.params, budget: c.budget })
        .collect();
    let bytes = match g.format.unwrap_or_default() {
        Format::Json => to_json(&rows)?.into_bytes(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Schema(format!("csv: {e}"));
            w.write_record(["id", "kind", "samples", "order", "params", "relation"]).map_err(csv_err)?;
            for r in &rows {
                let kind = if r.kind == RelationKind::Equality { "equality" } else { "inequality" };
                let row =
                    [r.id, kind, &r.budget.samples.to_string(), &r.budget.order.to_string(), &r.params.join(" "), r.relation];
                w.write_record(row).map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| CliError::Schema(format!("csv: {e}")))?
        }
    };
    write_output(g.out.as_deref(), &bytes)?;
    Ok(exit::OK)
}
