use std::path::PathBuf;

use fwkit::apps::{approx_caratheodory_with, separate_with, AppError, SeparationOutcome};
use fwkit::certify::{
    certify_contraction, certify_dual_prices, certify_dual_rate, certify_lower_bound, certify_monotone,
    certify_nonconvex, certify_primal_rate, certify_smoothness_progress, check_convexity, check_smoothness,
    sample_pairs, sample_points, CertificateReport, LowerBoundTarget, NonconvexVariant,
};
use fwkit::solver::read_rows_csv;
use fwkit::{
    run, FwError, Objective, ObjectiveKind, Region, RunTrace, SolverConfig, StepRegistry, StepStrategy,
    Termination, Vector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{to_json, write_output, CliError, Status};
use crate::problem::{Problem, ProblemSpec};

/// Options shared by every subcommand.
#[derive(Clone, Copy, Debug)]
pub struct Globals {
    pub seed: u64,
    pub timing: bool,
}

fn step_rule(rule: &str) -> Result<Box<dyn StepStrategy>, CliError> {
    Ok(StepRegistry::builtin().create(rule)?)
}

fn solve_config(
    problem: &Problem,
    rule: &str,
    max_iter: usize,
    epsilon: f64,
    timing: bool,
) -> Result<SolverConfig, CliError> {
    let mut config = SolverConfig::new(step_rule(rule)?)
        .max_iterations(max_iter)
        .epsilon(epsilon)
        .record_active_set(true)
        .timing(timing);
    if let Some(f) = problem.f_star {
        config = config.f_star(f);
    }
    config.validate()?;
    Ok(config)
}

fn execute(problem: &Problem, config: &SolverConfig) -> Result<RunTrace, CliError> {
    run(&problem.region, &problem.objective, &problem.x0, config).map_err(|e| CliError::Solver(e.to_string()))
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::GapReached => "gap_reached",
        Termination::IterationLimit => "iteration_limit",
        Termination::Stationary => "stationary",
        Termination::Stopped => "stopped",
    }
}

fn summarize(trace: &RunTrace) {
    let last = trace.final_row();
    eprintln!(
        "{}: {} at t = {}, f = {:e}, fw_gap = {:e}",
        trace.rule,
        termination_name(trace.termination),
        last.t,
        last.f,
        last.fw_gap
    );
}

fn trace_csv(trace: &RunTrace) -> Result<Vec<u8>, CliError> {
    let mut bytes = Vec::new();
    trace.write_csv(&mut bytes).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(bytes)
}

pub struct SolveArgs {
    pub spec: PathBuf,
    pub step: String,
    pub max_iter: usize,
    pub epsilon: f64,
    pub out: Option<PathBuf>,
}

pub fn cmd_solve(args: &SolveArgs, globals: Globals) -> Result<Status, CliError> {
    let problem = ProblemSpec::load(&args.spec)?.build()?;
    let config = solve_config(&problem, &args.step, args.max_iter, args.epsilon, globals.timing)?;
    let trace = execute(&problem, &config)?;
    summarize(&trace);
    write_output(args.out.as_deref(), &trace_csv(&trace)?)?;
    Ok(Status::Ok)
}

pub struct CompareArgs {
    pub spec: Option<PathBuf>,
    pub rules: Vec<String>,
    pub max_iter: usize,
    pub epsilon: f64,
    pub out: Option<PathBuf>,
    pub save_spec: Option<PathBuf>,
}

/// Runs every rule on the same problem, one thread per rule.
pub fn cmd_compare(args: &CompareArgs, globals: Globals) -> Result<Status, CliError> {
    let spec = match &args.spec {
        Some(path) => ProblemSpec::load(path)?,
        None => ProblemSpec::default_ksparse(globals.seed),
    };
    if let Some(path) = &args.save_spec {
        write_output(Some(path), &to_json(&spec)?)?;
    }
    let problem = spec.build()?;
    if args.rules.is_empty() {
        return Err(CliError::BadInput("no step rules given".into()));
    }
    for (i, rule) in args.rules.iter().enumerate() {
        if args.rules[..i].contains(rule) {
            return Err(CliError::BadInput(format!("rule `{rule}` listed twice")));
        }
    }
    // a single rule gives the plain trace, with timings if requested
    let timing = globals.timing && args.rules.len() == 1;
    let configs = args
        .rules
        .iter()
        .map(|rule| solve_config(&problem, rule, args.max_iter, args.epsilon, timing))
        .collect::<Result<Vec<_>, _>>()?;

    let traces = std::thread::scope(|scope| {
        let handles: Vec<_> =
            configs.iter().map(|config| scope.spawn(|| execute(&problem, config))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(CliError::Solver("worker thread panicked".into()))))
            .collect::<Result<Vec<_>, _>>()
    })?;
    for trace in &traces {
        summarize(trace);
    }
    let bytes = match traces.as_slice() {
        [single] => trace_csv(single)?,
        _ => wide_csv(&args.rules, &traces, problem.f_star.is_some())?,
    };
    write_output(args.out.as_deref(), &bytes)?;
    Ok(Status::Ok)
}

/// One row per `t`; per rule a `fw_gap[rule]` column and, with a known
/// optimum, a `primal_gap[rule]` column. Cells past the end of a shorter run
/// stay empty.
fn wide_csv(labels: &[String], traces: &[RunTrace], primal: bool) -> Result<Vec<u8>, CliError> {
    let io = |e: csv::Error| CliError::Io(format!("csv: {e}"));
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_owned()];
    for label in labels {
        header.push(format!("fw_gap[{label}]"));
        if primal {
            header.push(format!("primal_gap[{label}]"));
        }
    }
    writer.write_record(&header).map_err(io)?;
    let rows = traces.iter().map(|t| t.rows.len()).max().unwrap_or(0);
    for t in 0..rows {
        let mut record = vec![t.to_string()];
        for trace in traces {
            let row = trace.rows.get(t);
            record.push(row.map(|r| r.fw_gap.to_string()).unwrap_or_default());
            if primal {
                record.push(row.and_then(|r| r.primal_gap).map(|g| g.to_string()).unwrap_or_default());
            }
        }
        writer.write_record(&record).map_err(io)?;
    }
    writer.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))
}

/// Certificates the `certify` command can run against a trace file.
pub const CERTIFICATES: [&str; 11] = [
    "primal-rate",
    "dual-rate",
    "contraction",
    "smoothness-progress",
    "monotone",
    "nonconvex",
    "nonconvex-geometric",
    "lower-bound",
    "convexity",
    "smoothness",
    "dual-prices",
];

pub struct CertifyArgs {
    pub spec: PathBuf,
    pub trace: PathBuf,
    pub which: Vec<String>,
    pub pairs: usize,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ReportBundle {
    spec: String,
    trace: String,
    seed: u64,
    passed: bool,
    reports: Vec<CertificateReport>,
}

/// Rebuilds a trace from its CSV after checking that it starts where the
/// spec starts.
fn load_trace(path: &std::path::Path, problem: &Problem) -> Result<RunTrace, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::BadInput(format!("cannot read {}: {e}", path.display())))?;
    let rows = read_rows_csv(file).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
    let f0 = problem.objective.value(&problem.x0)?;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()));
    if !close(rows[0].f, f0) {
        return Err(CliError::BadInput(format!(
            "trace does not match the problem spec: f at t = 0 is {} but the spec starts at f = {f0}",
            rows[0].f
        )));
    }
    if let Some(f_star) = problem.f_star {
        if let Some(row) = rows.iter().find(|r| r.primal_gap.is_some_and(|g| !close(g, r.f - f_star))) {
            return Err(CliError::BadInput(format!(
                "trace does not match the problem spec: primal gap at t = {} disagrees with f_star = {f_star}",
                row.t
            )));
        }
    }
    Ok(RunTrace {
        rule: path.display().to_string(),
        rows,
        final_x: problem.x0.clone(),
        termination: Termination::IterationLimit,
        active_set: None,
        iterates: None,
    })
}

fn lower_bound_target(problem: &Problem) -> Result<(usize, LowerBoundTarget), CliError> {
    let not_instance =
        || CliError::BadInput("lower-bound needs the simplex instance written by `lowerbound`".into());
    let Region::Simplex { n } = problem.region else { return Err(not_instance()) };
    let ObjectiveKind::DistanceSquared { center } = problem.objective.kind() else {
        return Err(not_instance());
    };
    if center.iter().all(|&c| c == 0.0) {
        Ok((n, LowerBoundTarget::Origin))
    } else if center.iter().all(|&c| c == 1.0 / n as f64) {
        Ok((n, LowerBoundTarget::Uniform))
    } else {
        Err(not_instance())
    }
}

pub fn cmd_certify(args: &CertifyArgs, globals: Globals) -> Result<Status, CliError> {
    let problem = ProblemSpec::load(&args.spec)?.build()?;
    let trace = load_trace(&args.trace, &problem)?;
    let d = problem.region.diameter();
    let smoothness = || {
        problem
            .objective
            .smoothness()
            .ok_or_else(|| CliError::BadInput("certificate needs a declared smoothness constant".into()))
    };
    let f_star = || {
        problem
            .f_star
            .ok_or_else(|| CliError::BadInput("certificate needs f_star in the problem spec".into()))
    };
    let horizon = trace.rows.len() - 1;

    let mut reports = Vec::new();
    for name in &args.which {
        let report = match name.as_str() {
            "primal-rate" => certify_primal_rate(&trace, smoothness()?, d, f_star()?)?,
            "dual-rate" => certify_dual_rate(&trace, smoothness()?, d)?,
            "contraction" => certify_contraction(&trace, smoothness()?, d, f_star()?)?,
            "smoothness-progress" => certify_smoothness_progress(&trace, smoothness()?, d)?,
            "monotone" => certify_monotone(&trace),
            "nonconvex" | "nonconvex-geometric" => {
                let variant = if name == "nonconvex" {
                    NonconvexVariant::Arithmetic
                } else {
                    NonconvexVariant::Geometric
                };
                let h0 = trace.rows[0].f - f_star()?;
                certify_nonconvex(&trace, h0, smoothness()?, d, horizon, variant)?
            }
            "lower-bound" => {
                let (n, target) = lower_bound_target(&problem)?;
                certify_lower_bound(&trace, n, target)
            }
            "convexity" => {
                check_convexity(&problem.objective, &sample_pairs(&problem.region, args.pairs, globals.seed))?
            }
            "smoothness" => check_smoothness(
                &problem.objective,
                &sample_pairs(&problem.region, args.pairs, globals.seed),
            )?,
            "dual-prices" => dual_prices(&problem.region, &problem.objective, args.pairs, globals.seed)?,
            other => {
                return Err(CliError::BadInput(format!(
                    "unknown certificate `{other}`; expected one of {}",
                    CERTIFICATES.join(", ")
                )))
            }
        };
        eprintln!(
            "{}: {} ({} checks, {} violations)",
            report.name,
            if report.passed { "pass" } else { "FAIL" },
            report.checked_points,
            report.violations.len()
        );
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed);
    let bundle = ReportBundle {
        spec: args.spec.display().to_string(),
        trace: args.trace.display().to_string(),
        seed: globals.seed,
        passed,
        reports,
    };
    write_output(args.out.as_deref(), &to_json(&bundle)?)?;
    Ok(if passed { Status::Ok } else { Status::CertificateFailed })
}

/// Dual-price identities at `count` sampled points, merged into one report.
fn dual_prices(
    region: &Region,
    objective: &Objective,
    count: usize,
    seed: u64,
) -> Result<CertificateReport, CliError> {
    let mut merged = CertificateReport {
        name: "dual-prices".into(),
        checked_points: 0,
        passed: true,
        violations: Vec::new(),
        warnings: Vec::new(),
        seed: Some(seed),
        min_slack: None,
    };
    for (i, x) in sample_points(region, count, seed).iter().enumerate() {
        let report = certify_dual_prices(region, objective, x)?;
        merged.checked_points += report.checked_points;
        merged.passed &= report.passed;
        merged.min_slack = match (merged.min_slack, report.min_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        merged.violations.extend(report.violations.into_iter().map(|mut v| {
            v.location = format!("point {i}: {}", v.location);
            v
        }));
    }
    Ok(merged)
}

/// Target point for `caratheodory`: `uniform`/`center`, `random`, or
/// comma-separated coordinates.
pub fn parse_target(text: &str, region: &Region, seed: u64) -> Result<Vector, CliError> {
    match text {
        "uniform" | "center" => Ok(region.center()),
        "random" => Ok(region.sample_point(&mut ChaCha8Rng::seed_from_u64(seed))),
        _ => parse_point(text),
    }
}

pub fn parse_point(text: &str) -> Result<Vector, CliError> {
    let coords = text
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::BadInput(format!("cannot parse point `{text}`: {e}")))?;
    Ok(Vector::new(coords)?)
}

fn check_dim(point: &Vector, region: &Region) -> Result<(), CliError> {
    if point.dim() != region.dim() {
        return Err(CliError::BadInput(format!(
            "point has dimension {} but region {region} has dimension {}",
            point.dim(),
            region.dim()
        )));
    }
    Ok(())
}

/// Default iteration budget `⌈factor·D²/ε²⌉`.
fn budget(factor: f64, region: &Region, epsilon: f64) -> usize {
    let d = region.diameter();
    ((factor * d * d / (epsilon * epsilon)).ceil() as usize).max(1)
}

fn app_error(e: AppError) -> CliError {
    match e {
        AppError::Solver(e @ FwError::InvalidInput(_)) => CliError::BadInput(e.to_string()),
        AppError::Solver(e) => CliError::Solver(e.to_string()),
        other => CliError::Undecided(other.to_string()),
    }
}

pub struct CaratheodoryArgs {
    pub spec: Option<PathBuf>,
    pub region: Option<Region>,
    pub target: Option<String>,
    pub epsilon: f64,
    pub max_iter: Option<usize>,
    pub step: String,
    pub out: Option<PathBuf>,
}

pub fn cmd_caratheodory(args: &CaratheodoryArgs, globals: Globals) -> Result<Status, CliError> {
    let (region, target) = match (&args.spec, &args.region, &args.target) {
        (Some(path), None, None) => {
            let problem = ProblemSpec::load(path)?.build()?;
            let ObjectiveKind::DistanceSquared { center } = problem.objective.kind() else {
                return Err(CliError::BadInput(
                    "caratheodory spec needs a distance_squared objective".into(),
                ));
            };
            let center = center.clone();
            (problem.region, center)
        }
        (None, Some(region), Some(target)) => (region.clone(), parse_target(target, region, globals.seed)?),
        _ => return Err(CliError::BadInput("give either --spec, or --region together with --target".into())),
    };
    check_dim(&target, &region)?;
    let max_iter = args.max_iter.unwrap_or_else(|| budget(4.0, &region, args.epsilon));
    let result = approx_caratheodory_with(&region, &target, args.epsilon, max_iter, step_rule(&args.step)?);
    match result {
        Ok(decomposition) => {
            eprintln!(
                "cardinality {} after {} iterations, error {:e}",
                decomposition.cardinality, decomposition.iterations, decomposition.error
            );
            write_output(args.out.as_deref(), &to_json(&decomposition)?)?;
            Ok(Status::Ok)
        }
        Err(AppError::Partial { decomposition }) => {
            write_output(args.out.as_deref(), &to_json(&decomposition)?)?;
            Err(CliError::Solver(format!(
                "accuracy {} not reached in {} iterations (error {:e}); partial decomposition written",
                args.epsilon, decomposition.iterations, decomposition.error
            )))
        }
        Err(e) => Err(app_error(e)),
    }
}

pub struct SeparateArgs {
    pub region: Region,
    pub point: String,
    pub epsilon: f64,
    pub max_iter: Option<usize>,
    pub step: String,
    pub out: Option<PathBuf>,
}

pub fn cmd_separate(args: &SeparateArgs, _globals: Globals) -> Result<Status, CliError> {
    let point = parse_point(&args.point)?;
    check_dim(&point, &args.region)?;
    let max_iter = args.max_iter.unwrap_or_else(|| budget(13.5, &args.region, args.epsilon));
    let outcome = separate_with(&args.region, &point, args.epsilon, max_iter, step_rule(&args.step)?)
        .map_err(app_error)?;
    match &outcome {
        SeparationOutcome::Hyperplane { hyperplane, iterations } => eprintln!(
            "separated after {iterations} iterations, margin at point {:e}",
            hyperplane.margin(&point)
        ),
        SeparationOutcome::Membership { witness } => {
            eprintln!("within epsilon: distance {:e} with {} atoms", witness.error, witness.cardinality)
        }
    }
    write_output(args.out.as_deref(), &to_json(&outcome)?)?;
    Ok(Status::Ok)
}

pub fn cmd_lowerbound(
    n: usize,
    target: LowerBoundTarget,
    out: Option<&std::path::Path>,
) -> Result<Status, CliError> {
    let spec = ProblemSpec::lower_bound(n, target)?;
    write_output(out, &to_json(&spec)?)?;
    Ok(Status::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fwkit::solver::CSV_HEADER;

    fn trace_with(rows: usize) -> RunTrace {
        let (region, obj, x0) = fwkit::certify::lower_bound_instance(3, LowerBoundTarget::Origin).unwrap();
        let config = SolverConfig::new(step_rule("short:2").unwrap()).max_iterations(rows).timing(false);
        run(&region, &obj, &x0, &config).unwrap()
    }

    #[test]
    fn wide_csv_pads_short_runs() {
        let traces = [trace_with(5), trace_with(1)];
        let labels = ["a".to_owned(), "b".to_owned()];
        let text = String::from_utf8(wide_csv(&labels, &traces, false).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,fw_gap[a],fw_gap[b]");
        // short:2 reaches the barycenter of the 3-simplex at t = 2
        assert_eq!(lines.len(), 1 + traces[0].rows.len());
        assert!(lines.last().unwrap().ends_with(','));
    }

    #[test]
    fn points_and_targets_parse() {
        let region = Region::simplex(3).unwrap();
        assert_eq!(parse_point("1, 0.5,-2").unwrap().as_slice(), &[1.0, 0.5, -2.0]);
        assert!(parse_point("1,x").is_err());
        assert!(parse_point("nan").is_err());
        assert_eq!(parse_target("uniform", &region, 0).unwrap(), Vector::filled(3, 1.0 / 3.0));
        let r = parse_target("random", &region, 5).unwrap();
        assert_eq!(r, parse_target("random", &region, 5).unwrap());
        assert!(region.contains(&r, 1e-12));
    }

    #[test]
    fn budgets_match_the_closed_forms() {
        let simplex = Region::simplex(2).unwrap();
        // D² = 2, ε = 0.1
        assert_eq!(budget(13.5, &simplex, 0.1), 2700);
        assert_eq!(budget(4.0, &Region::simplex(100).unwrap(), 0.1), 800);
    }

    #[test]
    fn csv_header_is_the_library_header() {
        let text = String::from_utf8(trace_csv(&trace_with(2)).unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    }
}
