use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dilations::diagnostics::{
    exponent_table, hua_ratio, main_inequality_report, montgomery_check, pair_counts, weyl_average,
};
use dilations::dilation::{
    find_structure, glasner_scan, inductive_descent, search_poly_dilation, DescentOutcome, DilationError,
    GlasnerOutcome, Outcome, SearchBudget, SearchOptions,
};
use dilations::linalg::Rational;
use dilations::polymatrix::{check_conditions, decompose, ConditionB, PolyMatrix};
use dilations::torus::{
    covering_radius, density_in_translate, is_eps_dense, membership_in_translate, TorusPointSet,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::input::{
    format_matrix, format_points, parse_int_list, parse_matrix, parse_points, parse_poly, parse_rational,
    parse_rational_list, parse_vectors,
};
use crate::report::{Envelope, ExitStatus, Timing};
use crate::scenario::{self, Scenario};

/// Experiments on dilations of finite subsets of the torus.
#[derive(Debug, Parser)]
#[command(name = "dilate", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall-clock time in the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn rational_flag(s: &str) -> Result<String, String> {
    parse_rational(s).map(|_| s.to_string()).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check conditions (a) and (b) on a polynomial matrix.
    CheckConditions(ConditionArgs),
    /// Split A = T B with B made of independent rows.
    Decompose(MatrixArgs),
    /// Decide whether a point set is eps-dense in the torus.
    Density(DensityArgs),
    /// Bracket the covering radius of a point set.
    CoveringRadius(RadiusArgs),
    /// Search for a dense dilation, descending into subtori on failure.
    Search(SearchArgs),
    /// Scan primitive linear maps into T^L.
    GlasnerScan(GlasnerArgs),
    /// Largest subset on a hyperplane w . (y - y0) = J.
    Structure(StructureArgs),
    #[command(subcommand)]
    Diagnostics(DiagnosticsCommand),
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand)]
pub enum DiagnosticsCommand {
    /// Pair counts h_m and their prefix sums for a 1-D set.
    PairCounts(PairCountArgs),
    /// Cesaro mean of e(c_1 r + ... + c_d r^d).
    Weyl(WeylArgs),
    /// Normalized complete exponential sum of an integer polynomial.
    Hua(HuaArgs),
    /// Both sides of the Montgomery-type lower bound.
    Montgomery(MontgomeryArgs),
    /// Right-hand side of the main inequality and k^2 / RHS.
    MainInequality(MainArgs),
    /// Exponents c1, c2 from their recursion.
    Exponents(ExponentArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    Example1(Example1Args),
    Example2(Example2Args),
    Farey(FareyArgs),
    Random(RandomArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct MatrixArgs {
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ConditionArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub height_bound: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, value_parser = rational_flag)]
    pub eps: String,
}

#[derive(Debug, Args, Serialize)]
pub struct RadiusArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, value_parser = rational_flag, default_value = "1/1024")]
    pub tol: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, value_parser = rational_flag)]
    pub eps: String,
    #[arg(long, default_value_t = 10_000)]
    pub nmax: u64,
    #[arg(long, default_value_t = 2)]
    pub height_bound: u64,
    /// Run even when condition (a) or (b) fails.
    #[arg(long)]
    pub no_enforce: bool,
    /// Stop after the full-torus scan and structure search.
    #[arg(long)]
    pub single_level: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct GlasnerArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, value_parser = rational_flag)]
    pub eps: String,
    /// Target dimension L.
    #[arg(long = "target-dim", default_value_t = 2)]
    pub target_dim: usize,
    #[arg(long, default_value_t = 10_000)]
    pub nmax: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct StructureArgs {
    #[arg(long)]
    pub points: PathBuf,
    /// Comma-separated integers.
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
}

#[derive(Debug, Args, Serialize)]
pub struct PairCountArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub m: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct WeylArgs {
    /// Comma-separated rationals c_1,...,c_d.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
}

#[derive(Debug, Args, Serialize)]
pub struct HuaArgs {
    /// Integer polynomial in r, e.g. "r^2" or "3r^3 - r".
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct MontgomeryArgs {
    /// Points in R^ell; coordinates are not reduced mod 1.
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, value_parser = rational_flag)]
    pub eps: String,
}

#[derive(Debug, Args, Serialize)]
pub struct MainArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, value_parser = rational_flag)]
    pub eps: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ExponentArgs {
    #[arg(long = "n")]
    pub n: u32,
    #[arg(long = "l")]
    pub l: u32,
    #[arg(long = "d")]
    pub d: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct Outputs {
    /// Write the matrix in the text format.
    #[arg(long)]
    pub out_matrix: Option<PathBuf>,
    /// Write the points in the text format.
    #[arg(long)]
    pub out_points: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct Example1Args {
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 81)]
    pub den: u64,
    #[arg(long, value_parser = rational_flag, default_value = "1/4")]
    pub eps: String,
    #[command(flatten)]
    pub out: Outputs,
}

#[derive(Debug, Args, Serialize)]
pub struct Example2Args {
    #[arg(long, default_value_t = 39)]
    pub count: usize,
    #[arg(long, value_parser = rational_flag, default_value = "1/4")]
    pub eps: String,
    #[command(flatten)]
    pub out: Outputs,
}

#[derive(Debug, Args, Serialize)]
pub struct FareyArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long = "n", default_value_t = 1)]
    pub n: usize,
    #[arg(long = "l", default_value_t = 1)]
    pub l: usize,
    /// Dilation factors examined for the avoided corner cube.
    #[arg(long, default_value_t = 100)]
    pub nmax: u64,
    #[arg(long, value_parser = rational_flag, default_value = "1/4")]
    pub eps: String,
    #[command(flatten)]
    pub out: Outputs,
}

#[derive(Debug, Args, Serialize)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 50)]
    pub max_den: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = rational_flag, default_value = "1/4")]
    pub eps: String,
    #[command(flatten)]
    pub out: Outputs,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_points(path: &Path) -> Result<TorusPointSet> {
    parse_points(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_matrix(path: &Path) -> Result<PolyMatrix> {
    parse_matrix(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn inputs_of<T: Serialize>(args: &T) -> Map<String, Value> {
    match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    }
}

fn to_json<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn budget(nmax: u64, height_bound: u64) -> Result<SearchBudget> {
    Ok(SearchBudget::new(nmax, height_bound)?)
}

type Run = Result<(Envelope, ExitStatus)>;

/// Runs one command; the returned string is what goes to stdout.
pub fn execute(cli: &Cli) -> (String, ExitStatus) {
    let start = Instant::now();
    let (mut env, status) = match dispatch(&cli.command) {
        Ok(done) => done,
        Err(e) => {
            let mut env = Envelope::new(command_name(&cli.command), Map::new());
            env.verdict = "invalid".into();
            env.witnesses = json!({ "error": format!("{e:#}") });
            (env, ExitStatus::Invalid)
        }
    };
    if cli.timing {
        env.timing = Some(Timing { elapsed_ms: start.elapsed().as_millis() as u64 });
    }
    let rendered = match cli.format {
        Format::Json => env.to_json(),
        Format::Csv => env.to_csv(),
    };
    match rendered {
        Ok(s) => (s, status),
        Err(e) => (format!("{{\"error\": {:?}}}", e.to_string()), ExitStatus::Invalid),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckConditions(_) => "check-conditions",
        Command::Decompose(_) => "decompose",
        Command::Density(_) => "density",
        Command::CoveringRadius(_) => "covering-radius",
        Command::Search(_) => "search",
        Command::GlasnerScan(_) => "glasner-scan",
        Command::Structure(_) => "structure",
        Command::Diagnostics(d) => match d {
            DiagnosticsCommand::PairCounts(_) => "diagnostics pair-counts",
            DiagnosticsCommand::Weyl(_) => "diagnostics weyl",
            DiagnosticsCommand::Hua(_) => "diagnostics hua",
            DiagnosticsCommand::Montgomery(_) => "diagnostics montgomery",
            DiagnosticsCommand::MainInequality(_) => "diagnostics main-inequality",
            DiagnosticsCommand::Exponents(_) => "diagnostics exponents",
        },
        Command::Gen(g) => match g {
            GenCommand::Example1(_) => "gen example1",
            GenCommand::Example2(_) => "gen example2",
            GenCommand::Farey(_) => "gen farey",
            GenCommand::Random(_) => "gen random",
        },
    }
}

fn dispatch(c: &Command) -> Run {
    let name = command_name(c);
    match c {
        Command::CheckConditions(a) => check_conditions_cmd(Envelope::new(name, inputs_of(a)), a),
        Command::Decompose(a) => decompose_cmd(Envelope::new(name, inputs_of(a)), a),
        Command::Density(a) => density_cmd(Envelope::new(name, inputs_of(a)), a),
        Command::CoveringRadius(a) => radius_cmd(Envelope::new(name, inputs_of(a)), a),
        Command::Search(a) => search_cmd(Envelope::new(name, inputs_of(a)), a),
        Command::GlasnerScan(a) => glasner_cmd(Envelope::new(name, inputs_of(a)), a),
        Command::Structure(a) => structure_cmd(Envelope::new(name, inputs_of(a)), a),
        Command::Diagnostics(d) => match d {
            DiagnosticsCommand::PairCounts(a) => pair_counts_cmd(Envelope::new(name, inputs_of(a)), a),
            DiagnosticsCommand::Weyl(a) => weyl_cmd(Envelope::new(name, inputs_of(a)), a),
            DiagnosticsCommand::Hua(a) => hua_cmd(Envelope::new(name, inputs_of(a)), a),
            DiagnosticsCommand::Montgomery(a) => montgomery_cmd(Envelope::new(name, inputs_of(a)), a),
            DiagnosticsCommand::MainInequality(a) => main_inequality_cmd(Envelope::new(name, inputs_of(a)), a),
            DiagnosticsCommand::Exponents(a) => exponents_cmd(Envelope::new(name, inputs_of(a)), a),
        },
        Command::Gen(g) => match g {
            GenCommand::Example1(a) => {
                let s = scenario::example1(a.count, a.den, parse_rational(&a.eps)?)?;
                emit_scenario(Envelope::new(name, inputs_of(a)), s, &a.out)
            }
            GenCommand::Example2(a) => {
                let s = scenario::example2(a.count, parse_rational(&a.eps)?)?;
                emit_scenario(Envelope::new(name, inputs_of(a)), s, &a.out)
            }
            GenCommand::Farey(a) => farey_cmd(Envelope::new(name, inputs_of(a)), a),
            GenCommand::Random(a) => {
                let s = scenario::random_scenario(a.dim, a.count, a.max_den, a.seed, parse_rational(&a.eps)?)?;
                emit_scenario(Envelope::new(name, inputs_of(a)), s, &a.out)
            }
        },
    }
}

fn check_conditions_cmd(mut env: Envelope, a: &ConditionArgs) -> Run {
    let m = load_matrix(&a.matrix)?;
    let report = check_conditions(&m, a.height_bound);
    env.verdict = match (&report.cond_a, &report.cond_b) {
        (false, _) => "condition_a_fails",
        (true, ConditionB::Holds(_)) => "conditions_hold",
        (true, ConditionB::Fails(_)) => "condition_b_fails",
        (true, ConditionB::Unknown { .. }) => "condition_b_unknown",
    }
    .into();
    let verified = match &report.cond_b {
        ConditionB::Fails(w) => Some(w.verify(&m)),
        _ => None,
    };
    env.witnesses = json!({ "report": to_json(&report)?, "witness_verified": verified });
    Ok((env, ExitStatus::Completed))
}

fn decompose_cmd(mut env: Envelope, a: &MatrixArgs) -> Run {
    let m = load_matrix(&a.matrix)?;
    let dec = decompose(&m)?;
    env.verdict = "decomposed".into();
    env.witnesses = json!({
        "decomposition": to_json(&dec)?,
        "reconstructs": dec.reconstructs(&m),
        "qt_bound": dilations::polymatrix::Decomposition::qt_bound(dec.ell, &m.nonconstant_height()).to_string(),
    });
    Ok((env, ExitStatus::Completed))
}

fn density_cmd(mut env: Envelope, a: &DensityArgs) -> Run {
    let x = load_points(&a.points)?;
    let v = is_eps_dense(&x, &parse_rational(&a.eps)?)?;
    env.verdict = if v.dense { "dense" } else { "not_dense" }.into();
    env.witnesses = json!({ "points": x.len(), "hole": to_json(&v.hole)? });
    Ok((env, ExitStatus::Completed))
}

fn radius_cmd(mut env: Envelope, a: &RadiusArgs) -> Run {
    let x = load_points(&a.points)?;
    let (lo, hi) = covering_radius(&x, &parse_rational(&a.tol)?)?;
    env.verdict = "bracketed".into();
    env.ratio("lower", lo.to_f64().unwrap_or(f64::NAN));
    env.ratio("upper", hi.to_f64().unwrap_or(f64::NAN));
    env.witnesses = json!({ "lower": lo.to_string(), "upper": hi.to_string() });
    Ok((env, ExitStatus::Completed))
}

fn search_cmd(mut env: Envelope, a: &SearchArgs) -> Run {
    let m = load_matrix(&a.matrix)?;
    let x = load_points(&a.points)?;
    let eps = parse_rational(&a.eps)?;
    let b = budget(a.nmax, a.height_bound)?;
    let options = SearchOptions { enforce_conditions: !a.no_enforce };
    if a.single_level {
        return match search_poly_dilation(&m, &x, &eps, b, options) {
            Ok(r) => {
                let status = match &r.outcome {
                    Outcome::Found { .. } => ExitStatus::Completed,
                    Outcome::Exhausted { .. } => ExitStatus::Exhausted,
                };
                env.verdict = if status == ExitStatus::Completed { "found" } else { "exhausted" }.into();
                if let Outcome::Exhausted { structure: Some(s) } = &r.outcome {
                    env.ratio("structure_fraction", s.y.len() as f64 / x.len() as f64);
                }
                env.witnesses = to_json(&r)?;
                Ok((env, status))
            }
            Err(e) => search_error(env, e),
        };
    }
    match inductive_descent(&m, &x, &eps, b, options) {
        Ok(report) => {
            let status = match &report.outcome {
                DescentOutcome::Found { n, subtorus, covered, .. } => {
                    let image = covered.map_integer(&m.evaluate(&BigInt::from(*n)));
                    let members = image.iter().all(|p| membership_in_translate(p, subtorus).unwrap_or(false));
                    let density = density_in_translate(&image, subtorus, &eps)?;
                    env.verdict = "found".into();
                    env.ratio("covered_fraction", covered.len() as f64 / x.len() as f64);
                    env.witnesses = json!({
                        "report": to_json(&report)?,
                        "verification": { "members": members, "density": to_json(&density)? },
                    });
                    ExitStatus::Completed
                }
                DescentOutcome::Exhausted { .. } => {
                    env.verdict = "exhausted".into();
                    env.witnesses = json!({ "report": to_json(&report)? });
                    ExitStatus::Exhausted
                }
            };
            Ok((env, status))
        }
        Err(e) => search_error(env, e),
    }
}

fn search_error(mut env: Envelope, e: DilationError) -> Run {
    match e {
        DilationError::ConditionViolated { reason, report } => {
            env.verdict = "condition_violated".into();
            env.witnesses = json!({ "reason": reason, "report": to_json(&*report)? });
            Ok((env, ExitStatus::Invalid))
        }
        DilationError::DescentStalled { level, points } => {
            env.verdict = "stalled".into();
            env.witnesses = json!({ "level": level, "points": points });
            Ok((env, ExitStatus::Exhausted))
        }
        other => Err(other.into()),
    }
}

fn glasner_cmd(mut env: Envelope, a: &GlasnerArgs) -> Run {
    let x = load_points(&a.points)?;
    let eps = parse_rational(&a.eps)?;
    let outcome = glasner_scan(&x, &eps, a.target_dim, budget(a.nmax, 1)?)?;
    let status = match &outcome {
        GlasnerOutcome::Found(r) => {
            env.verdict = "found".into();
            env.witnesses = json!({
                "outcome": to_json(&outcome)?,
                "verified_dense": is_eps_dense(&x.map_integer(&r.t), &eps)?.dense,
            });
            ExitStatus::Completed
        }
        GlasnerOutcome::Exhausted { .. } => {
            env.verdict = "exhausted".into();
            env.witnesses = json!({ "outcome": to_json(&outcome)? });
            ExitStatus::Exhausted
        }
    };
    Ok((env, status))
}

fn structure_cmd(mut env: Envelope, a: &StructureArgs) -> Run {
    let x = load_points(&a.points)?;
    let w = parse_int_list(&a.w)?;
    let s = find_structure(&x, &w)?;
    env.verdict = "structure".into();
    env.ratio("fraction", s.y.len() as f64 / x.len() as f64);
    env.witnesses = json!({
        "structure": to_json(&s)?,
        "verified": s.verify(),
        "guaranteed_size": s.guaranteed_size(),
    });
    Ok((env, ExitStatus::Completed))
}

fn pair_counts_cmd(mut env: Envelope, a: &PairCountArgs) -> Run {
    let x = load_points(&a.points)?;
    let pc = pair_counts(&x, a.m)?;
    let ok = pc.within_count_bound();
    env.verdict = if ok { "pass" } else { "fail" }.into();
    let worst = pc
        .cumulative
        .iter()
        .enumerate()
        .map(|(i, &h)| h as f64 / (pc.k as f64 * ((i + 1) as f64).powi(2)))
        .fold(0.0, f64::max);
    env.ratio("max_h_over_km2", worst);
    env.witnesses = to_json(&pc)?;
    Ok((env, ExitStatus::Completed))
}

fn weyl_cmd(mut env: Envelope, a: &WeylArgs) -> Run {
    let r = weyl_average(&parse_rational_list(&a.coeffs)?)?;
    env.verdict = "computed".into();
    env.ratio("modulus", r.modulus.to_f64());
    env.witnesses = to_json(&r)?;
    Ok((env, ExitStatus::Completed))
}

fn hua_cmd(mut env: Envelope, a: &HuaArgs) -> Run {
    let r = hua_ratio(&parse_poly(&a.poly)?, a.q)?;
    env.verdict = "computed".into();
    env.ratio("ratio", r.ratio);
    env.witnesses = to_json(&r)?;
    Ok((env, ExitStatus::Completed))
}

fn montgomery_cmd(mut env: Envelope, a: &MontgomeryArgs) -> Run {
    let pts = parse_vectors(&read(&a.points)?)?;
    let r = montgomery_check(&pts, &parse_rational(&a.eps)?)?;
    env.verdict = if r.pass { "pass" } else { "fail" }.into();
    env.ratio("lhs", r.lhs.to_f64().unwrap_or(f64::NAN));
    env.ratio("rhs", r.rhs);
    env.witnesses = to_json(&r)?;
    Ok((env, ExitStatus::Completed))
}

fn main_inequality_cmd(mut env: Envelope, a: &MainArgs) -> Run {
    let m = load_matrix(&a.matrix)?;
    let x = load_points(&a.points)?;
    let r = main_inequality_report(&m, &x, &parse_rational(&a.eps)?)?;
    env.verdict = "computed".into();
    env.ratio("rhs", r.rhs);
    if let Some(ratio) = r.ratio {
        env.ratio("k2_over_rhs", ratio);
    }
    env.witnesses = to_json(&r)?;
    Ok((env, ExitStatus::Completed))
}

fn exponents_cmd(mut env: Envelope, a: &ExponentArgs) -> Run {
    let t = exponent_table(a.n, a.l, a.d)?;
    env.verdict = "computed".into();
    env.witnesses = to_json(&t)?;
    Ok((env, ExitStatus::Completed))
}

fn write_outputs(s: &Scenario, out: &Outputs) -> Result<()> {
    if let Some(p) = &out.out_matrix {
        std::fs::write(p, format_matrix(&s.matrix)).with_context(|| format!("cannot write {}", p.display()))?;
    }
    if let Some(p) = &out.out_points {
        std::fs::write(p, format_points(&s.points)).with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}

fn emit_scenario(mut env: Envelope, s: Scenario, out: &Outputs) -> Run {
    write_outputs(&s, out)?;
    env.verdict = s.expected.clone().unwrap_or_else(|| "generated".into());
    env.witnesses = json!({ "scenario": to_json(&s)?, "points": s.points.len() });
    Ok((env, ExitStatus::Completed))
}

fn farey_cmd(mut env: Envelope, a: &FareyArgs) -> Run {
    let s = scenario::farey_scenario(a.m, a.n, a.l, parse_rational(&a.eps)?)?;
    write_outputs(&s, &a.out)?;
    let cube = scenario::farey_avoided_cube(a.m, a.l, a.nmax);
    let m_times_delta = &cube.delta * Rational::from_integer(a.m.into());
    env.verdict = "generated".into();
    env.ratio("delta", cube.delta.to_f64().unwrap_or(f64::NAN));
    env.ratio("m_times_delta", m_times_delta.to_f64().unwrap_or(f64::NAN));
    env.witnesses = json!({
        "scenario": to_json(&s)?,
        "points": s.points.len(),
        "avoided_cube": to_json(&cube)?,
    });
    Ok((env, ExitStatus::Completed))
}
