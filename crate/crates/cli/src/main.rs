//! Command-line surface for the analysis pipeline.
//!
//! stdout carries only the requested artifact (text, JSON, or CSV); stderr
//! carries diagnostics. Exit codes: 0 success, 2 parse/usage error,
//! 3 assumption violated, 4 undetermined index or inapplicable theorem,
//! 5 numeric verification failed.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use newton_sobolev::exponents::AnalyzeError;
use newton_sobolev::regions::{RegionError, RegionPolygon};
use newton_sobolev::*;

const EXIT_OK: u8 = 0;
const EXIT_PARSE: u8 = 2;
const EXIT_ASSUMPTION: u8 = 3;
const EXIT_UNDETERMINED: u8 = 4;
const EXIT_VERIFY_FAILED: u8 = 5;

#[derive(Parser)]
#[command(
    name = "newton-sobolev",
    about = "Newton-polygon growth indices and operator boundedness regions for bivariate polynomial surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute eta, eta', the regime, and the sharpness verdict.
    Analyze {
        /// Surface polynomial in x, y (aliases t1, t2), e.g. "y^4 + x^4*y^2 + x^8"
        poly: String,
        #[arg(long)]
        json: bool,
    },
    /// Emit a boundedness region as exact vertices.
    Region {
        /// 1.1 | 1.2 | 1.3 | 1.4 | isase:a,b
        #[arg(long)]
        theorem: String,
        /// Surface polynomial; may be empty for isase:a,b
        poly: String,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Verify the exact indices against Monte Carlo sublevel estimates.
    Verify {
        poly: String,
        /// PRNG seed (default: NEWTON_SOBOLEV_SEED environment variable, then 0)
        #[arg(long)]
        seed: Option<u64>,
        /// Samples per ladder rung
        #[arg(long)]
        samples: Option<u64>,
        /// Box half-width as a rational, e.g. 1/4
        #[arg(long, value_name = "P/Q")]
        half_width: Option<String>,
        /// Smallest ladder exponent j0 (delta = 2^-j)
        #[arg(long, value_name = "J0")]
        delta_min: Option<u32>,
        /// Largest ladder exponent j1
        #[arg(long, value_name = "J1")]
        delta_max: Option<u32>,
        /// Absolute tolerance on |eta_hat - eta|
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, value_enum)]
        sampler: Option<SamplerArg>,
        #[arg(long)]
        json: bool,
    },
    /// Test whether a point lies in a boundedness region.
    Member {
        #[arg(long)]
        theorem: String,
        /// Point as "x,y" with exact rational coordinates, e.g. 1/2,1/4
        #[arg(long, value_name = "X,Y")]
        point: String,
        /// Include the boundary (theorem regions are open by default)
        #[arg(long)]
        closed: bool,
        poly: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Grid,
    Halton,
    Prng,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Analyze { poly, json } => cmd_analyze(&poly, json),
        Command::Region {
            theorem,
            poly,
            json,
            csv,
        } => cmd_region(&theorem, &poly, json, csv),
        Command::Verify {
            poly,
            seed,
            samples,
            half_width,
            delta_min,
            delta_max,
            tolerance,
            sampler,
            json,
        } => {
            let mut cfg = SublevelConfig {
                seed: resolve_seed(seed),
                ..SublevelConfig::default()
            };
            if let Some(n) = samples {
                cfg.samples_per_rung = n;
            }
            if let Some(h) = half_width {
                match h.parse::<Rat>() {
                    Ok(r) => cfg.half_width = r.to_f64(),
                    Err(e) => {
                        eprintln!("error: invalid --half-width: {e}");
                        return EXIT_PARSE;
                    }
                }
            }
            if let Some(j) = delta_min {
                cfg.delta_min_exp = j;
            }
            if let Some(j) = delta_max {
                cfg.delta_max_exp = j;
            }
            if let Some(t) = tolerance {
                cfg.tolerance = t;
            }
            if let Some(s) = sampler {
                cfg.sampler = match s {
                    SamplerArg::Grid => Sampler::Grid,
                    SamplerArg::Halton => Sampler::Halton,
                    SamplerArg::Prng => Sampler::Prng,
                };
            }
            cmd_verify(&poly, &cfg, json)
        }
        Command::Member {
            theorem,
            point,
            closed,
            poly,
        } => cmd_member(&theorem, &point, closed, &poly),
    }
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("NEWTON_SOBOLEV_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

/// Exit code plus the partial report when only an index was missing.
struct CliFailure {
    code: u8,
    partial: Option<Box<AnalysisReport>>,
}

impl CliFailure {
    fn code(code: u8) -> Self {
        CliFailure {
            code,
            partial: None,
        }
    }
}

/// Parses the polynomial and runs the analysis, mapping failures to exit
/// codes; diagnostics go to stderr only.
fn analyzed(poly_text: &str) -> Result<AnalysisReport, CliFailure> {
    let poly = match parse_poly(poly_text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return Err(CliFailure::code(EXIT_PARSE));
        }
    };
    match analyze(&poly, &GrowthConfig::default()) {
        Ok(report) => Ok(report),
        Err(AnalyzeError::AssumptionViolated { failed, .. }) => {
            eprintln!("error: assumption violated: {}", failed.join(", "));
            Err(CliFailure::code(EXIT_ASSUMPTION))
        }
        Err(AnalyzeError::UndeterminedIndex { target, report }) => {
            eprintln!("error: growth index undetermined for {target}");
            Err(CliFailure {
                code: EXIT_UNDETERMINED,
                partial: Some(report),
            })
        }
        Err(AnalyzeError::HessianIdenticallyZero) => {
            eprintln!("error: assumption violated: hessian_not_identically_zero");
            Err(CliFailure::code(EXIT_ASSUMPTION))
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(CliFailure::code(EXIT_PARSE))
        }
    }
}

fn fmt_index(gi: &GrowthIndex) -> String {
    match &gi.value {
        Some(v) => format!("{v} (method {:?}, hit {:?})", gi.method, gi.hit.kind),
        None => format!("undetermined (hit {:?})", gi.hit.kind),
    }
}

fn emit_report(report: &AnalysisReport, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string(report).expect("report serializes")
        );
        return;
    }
    println!("eta = {}", fmt_index(&report.eta));
    println!("eta' = {}", fmt_index(&report.eta_prime));
    match &report.eta1 {
        Some(v) => println!("eta1 = {v}"),
        None => println!("eta1 = undetermined"),
    }
    println!("regime = {:?}", report.regime);
    println!("thm11_sharp = {:?}", report.sharpness.thm11_sharp);
    println!("thm13_sharp = {:?}", report.sharpness.thm13_sharp);
    for reason in &report.sharpness.reasons {
        println!("  - {reason}");
    }
    if !report.eta.shears_applied.is_empty() {
        let steps: Vec<String> = report
            .eta
            .shears_applied
            .iter()
            .map(|s| format!("({}, m={}, {:?})", s.c, s.m, s.axis))
            .collect();
        println!("shears(S) = {}", steps.join(" "));
    }
    if !report.eta_prime.shears_applied.is_empty() {
        let steps: Vec<String> = report
            .eta_prime
            .shears_applied
            .iter()
            .map(|s| format!("({}, m={}, {:?})", s.c, s.m, s.axis))
            .collect();
        println!("shears(H) = {}", steps.join(" "));
    }
}

fn cmd_analyze(poly_text: &str, json: bool) -> u8 {
    match analyzed(poly_text) {
        Ok(report) => {
            emit_report(&report, json);
            EXIT_OK
        }
        Err(failure) => {
            // an undetermined index still yields the partial report
            if let Some(report) = failure.partial {
                emit_report(&report, json);
            }
            failure.code
        }
    }
}

enum TheoremSelector {
    T11,
    T12,
    T13,
    T14,
    ISaSe(i64, i64),
}

fn parse_selector(text: &str) -> Option<TheoremSelector> {
    match text {
        "1.1" => Some(TheoremSelector::T11),
        "1.2" => Some(TheoremSelector::T12),
        "1.3" => Some(TheoremSelector::T13),
        "1.4" => Some(TheoremSelector::T14),
        _ => {
            let rest = text.strip_prefix("isase:")?;
            let (a, b) = rest.split_once(',')?;
            Some(TheoremSelector::ISaSe(
                a.trim().parse().ok()?,
                b.trim().parse().ok()?,
            ))
        }
    }
}

/// Builds the selected region, running the analysis when the theorem needs
/// it. Returns the exit code on failure.
fn selected_region(selector: &TheoremSelector, poly_text: &str) -> Result<RegionPolygon, u8> {
    let build = |result: Result<RegionPolygon, RegionError>| {
        result.map_err(|e| {
            eprintln!("error: {e}");
            match e {
                RegionError::UndeterminedRegime => EXIT_UNDETERMINED,
                RegionError::InvalidExponents(_) => EXIT_PARSE,
                _ => EXIT_UNDETERMINED,
            }
        })
    };
    match selector {
        TheoremSelector::ISaSe(a, b) => build(isase_region(*a, *b)),
        TheoremSelector::T11 => {
            let report = analyzed(poly_text).map_err(|f| f.code)?;
            let eta1 = report.eta1.clone().expect("determined report has eta1");
            build(theorem_11_trapezoid(&eta1))
        }
        TheoremSelector::T12 => {
            let report = analyzed(poly_text).map_err(|f| f.code)?;
            if report.regime == Regime::Thm11Sharp {
                eprintln!(
                    "error: theorem 1.2 does not apply: regime is {:?}",
                    report.regime
                );
                return Err(EXIT_UNDETERMINED);
            }
            build(sobolev_region(&report))
        }
        TheoremSelector::T13 => {
            let report = analyzed(poly_text).map_err(|f| f.code)?;
            if report.regime != Regime::Thm11Sharp {
                eprintln!(
                    "error: theorem 1.3 does not apply: regime is {:?}",
                    report.regime
                );
                return Err(EXIT_UNDETERMINED);
            }
            build(lebesgue_region(&report))
        }
        TheoremSelector::T14 => {
            let report = analyzed(poly_text).map_err(|f| f.code)?;
            if report.regime == Regime::Thm11Sharp {
                eprintln!(
                    "error: theorem 1.4 does not apply: regime is {:?} (use 1.3)",
                    report.regime
                );
                return Err(EXIT_UNDETERMINED);
            }
            build(lebesgue_region(&report))
        }
    }
}

fn cmd_region(theorem: &str, poly_text: &str, json: bool, csv: bool) -> u8 {
    let Some(selector) = parse_selector(theorem) else {
        eprintln!(
            "error: unknown theorem selector `{theorem}` (use 1.1, 1.2, 1.3, 1.4, or isase:a,b)"
        );
        return EXIT_PARSE;
    };
    match selected_region(&selector, poly_text) {
        Ok(region) => {
            if json {
                println!("{}", region.to_json());
            } else if csv {
                print!("{}", region.to_csv());
            } else {
                println!("theorem = {:?}, plane = {:?}", region.theorem, region.plane);
                for (x, y) in &region.vertices {
                    println!("({x}, {y})");
                }
            }
            EXIT_OK
        }
        Err(code) => code,
    }
}

fn cmd_verify(poly_text: &str, cfg: &SublevelConfig, json: bool) -> u8 {
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return EXIT_PARSE;
    }
    let poly = match parse_poly(poly_text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    // verification runs on whatever indices are determined
    let report = match analyze(&poly, &GrowthConfig::default()) {
        Ok(r) => r,
        Err(AnalyzeError::AssumptionViolated { failed, .. }) => {
            eprintln!("error: assumption violated: {}", failed.join(", "));
            return EXIT_ASSUMPTION;
        }
        Err(AnalyzeError::HessianIdenticallyZero) => {
            eprintln!("error: assumption violated: hessian_not_identically_zero");
            return EXIT_ASSUMPTION;
        }
        Err(AnalyzeError::UndeterminedIndex { report, .. }) => *report,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let verification = match verify_indices(&poly, &report, cfg) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    if json {
        println!("{}", verification.to_json());
    } else {
        for t in &verification.targets {
            let exact = t
                .exact
                .as_ref()
                .map_or("undetermined".to_string(), |r| r.to_string());
            let estimate = t.estimate.map_or("none".to_string(), |e| format!("{e:.4}"));
            let deviation = t.deviation.map_or("n/a".to_string(), |d| format!("{d:.4}"));
            println!(
                "target {}: exact = {exact}, estimate = {estimate}, deviation = {deviation}, pass = {}",
                t.target, t.pass
            );
        }
    }
    let determined: Vec<_> = verification
        .targets
        .iter()
        .filter(|t| t.exact.is_some())
        .collect();
    if determined.is_empty() {
        eprintln!("error: no determined index to verify");
        return EXIT_UNDETERMINED;
    }
    if determined.iter().all(|t| t.pass) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn parse_point(text: &str) -> Option<(Rat, Rat)> {
    let (x, y) = text.split_once(',')?;
    Some((x.trim().parse().ok()?, y.trim().parse().ok()?))
}

fn cmd_member(theorem: &str, point: &str, closed: bool, poly_text: &str) -> u8 {
    let Some(selector) = parse_selector(theorem) else {
        eprintln!("error: unknown theorem selector `{theorem}`");
        return EXIT_PARSE;
    };
    let Some(pt) = parse_point(point) else {
        eprintln!("error: malformed point `{point}` (expected X,Y with rational coordinates)");
        return EXIT_PARSE;
    };
    match selected_region(&selector, poly_text) {
        Ok(region) => {
            println!("{}", region.contains(&pt, closed));
            EXIT_OK
        }
        Err(code) => code,
    }
}
