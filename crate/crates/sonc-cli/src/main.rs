//! `sonc` — certified lower bounds for sparse exponential sums and
//! positive-orthant polynomials via dual-cone linear programming.
//!
//! Exit codes: 0 success, 1 input/usage error, 2 negative verdict
//! (infeasible bound, non-member vector, uncertified circuit or relaxation).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sonc_core::{
    check_membership_lambda, check_membership_tau, circuit_number, circuit_nonnegative,
    dual_sonc_bound, lambda_feasible, parse_instance, relaxed_bound, sample_min, sign_split,
    BoundOutcome, CircuitError, CircuitInstance, DualMembershipCertificate, DualVector,
    ExponentialSum, OracleConfig, TauMembership,
};

/// `out!` that ignores broken pipes so `sonc ... | head` exits cleanly.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "sonc",
    version,
    about = "Certified lower bounds via the dual SONC cone"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the certified lower bound -gamma* for an instance
    Bound {
        file: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Solve the violation-tolerant program with this epsilon
        #[arg(long, value_name = "EPS")]
        relax: Option<f64>,
        /// Append a brute-force sampled minimum to the report
        #[arg(long)]
        oracle: bool,
    },
    /// Test dual-cone membership of the coefficient vector in both forms
    CheckDual {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Certify nonnegativity of a single-circuit instance by its circuit number
    CheckCircuit {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Bound every instance in a directory and tabulate the results
    Bench {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Sample the minimum on a grid (soundness check, not a certified bound)
    Oracle {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Grid points per dimension
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Half-width of the scanned box
        #[arg(long, default_value_t = 5.0)]
        range: f64,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
struct CertEntry {
    beta: Vec<f64>,
    tau: Vec<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
struct Relaxation {
    epsilon: f64,
    tol: f64,
}

/// One bound result; also the row format of `bench --json`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
struct Report {
    instance: String,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    opt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    branch: Option<String>,
    wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Vec<CertEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relaxation: Option<Relaxation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load(path: &Path) -> Result<ExponentialSum, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("reading {}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("parsing {}: {e}", path.display()))
}

fn cert_entries(cert: &DualMembershipCertificate) -> Vec<CertEntry> {
    cert.iter()
        .map(|(beta, tau)| CertEntry { beta: beta.to_vec(), tau: tau.to_vec() })
        .collect()
}

fn run_bound(path: &Path, relax: Option<f64>, with_oracle: bool) -> Result<Report, String> {
    let f = load(path)?;
    let start = Instant::now();
    let mut report = match relax {
        None => match dual_sonc_bound(&f).map_err(|e| e.to_string())? {
            BoundOutcome::Bounded(b) => Report {
                instance: stem(path),
                status: "bounded".into(),
                opt: Some(b.gamma_star),
                lower_bound: Some(b.lower_bound),
                branch: Some(b.branch.to_string()),
                wall_time_ms: 0.0,
                certificate: Some(cert_entries(&b.certificate)),
                relaxation: None,
                oracle_min: None,
                error: None,
            },
            BoundOutcome::Infeasible => Report {
                instance: stem(path),
                status: "infeasible".into(),
                opt: None,
                lower_bound: None,
                branch: None,
                wall_time_ms: 0.0,
                certificate: None,
                relaxation: None,
                oracle_min: None,
                error: None,
            },
        },
        Some(eps) => {
            let r = relaxed_bound(&f, eps).map_err(|e| e.to_string())?;
            Report {
                instance: stem(path),
                status: if r.is_certified() { "bounded" } else { "uncertified" }.into(),
                opt: Some(r.gamma_star),
                lower_bound: Some(r.lower_bound),
                branch: Some(r.branch.to_string()),
                wall_time_ms: 0.0,
                certificate: Some(cert_entries(&r.certificate)),
                relaxation: Some(Relaxation { epsilon: r.epsilon, tol: r.tol }),
                oracle_min: None,
                error: None,
            }
        }
    };
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    if with_oracle {
        let min = sample_min(&f, &OracleConfig::default()).map_err(|e| e.to_string())?;
        report.oracle_min = Some(min.value);
    }
    Ok(report)
}

fn print_bound_text(r: &Report) {
    out!("instance: {}", r.instance);
    out!("status: {}", r.status);
    if let (Some(opt), Some(lb)) = (r.opt, r.lower_bound) {
        out!("opt: {opt}");
        out!("lower_bound: {lb}");
    }
    if let Some(branch) = &r.branch {
        out!("branch: {branch}");
    }
    if let Some(rel) = &r.relaxation {
        out!("relaxation: epsilon = {}, tol = {}", rel.epsilon, rel.tol);
    }
    if let Some(min) = r.oracle_min {
        out!("oracle_min: {min}");
    }
    if let Some(cert) = &r.certificate {
        out!("certificate:");
        for entry in cert {
            out!("  beta {:?}: tau = {:?}", entry.beta, entry.tau);
        }
    }
    out!("wall_time_ms: {:.3}", r.wall_time_ms);
}

fn cmd_bound(path: &Path, json: bool, relax: Option<f64>, oracle: bool) -> ExitCode {
    match run_bound(path, relax, oracle) {
        Ok(report) => {
            if json {
                out!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                print_bound_text(&report);
            }
            match report.status.as_str() {
                "bounded" => ExitCode::SUCCESS,
                _ => ExitCode::from(2), // infeasible or uncertified
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[derive(Serialize)]
struct DualReport {
    instance: String,
    tau_form: String,
    lambda_form: String,
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Vec<CertEntry>>,
}

fn cmd_check_dual(path: &Path, json: bool) -> ExitCode {
    let f = match load(path) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let dec = match sign_split(&f) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let w = DualVector::from_sum(&f);
    let tau = check_membership_tau(&w, &dec);
    let lambda = check_membership_lambda(&w, &dec);
    if tau.is_member() != lambda.is_member() {
        eprintln!(
            "internal error: representations disagree (tau {}, lambda {})",
            tau.is_member(),
            lambda.is_member()
        );
        return ExitCode::from(1);
    }
    let member = tau.is_member();
    let verdict = |m: bool| if m { "member" } else { "not_member" };
    let certificate = match &tau {
        TauMembership::Member(cert) => Some(cert_entries(cert)),
        TauMembership::NotMember(_) => None,
    };
    if json {
        let report = DualReport {
            instance: stem(path),
            tau_form: verdict(tau.is_member()).into(),
            lambda_form: verdict(lambda.is_member()).into(),
            member,
            certificate,
        };
        out!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        out!("instance: {}", stem(path));
        match &tau {
            TauMembership::Member(cert) => {
                out!("tau form: member");
                for (beta, tau) in cert.iter() {
                    out!("  beta {}: tau = {tau:?}", beta);
                }
            }
            TauMembership::NotMember(reason) => out!("tau form: not_member ({reason})"),
        }
        out!("lambda form: {}", verdict(lambda.is_member()));
        out!("verdict: {}", verdict(member));
    }
    if member {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

#[derive(Serialize)]
struct CircuitReport {
    instance: String,
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<Vec<CertEntry>>,
}

fn cmd_check_circuit(path: &Path, json: bool) -> ExitCode {
    let f = match load(path) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let emit = |report: &CircuitReport| {
        if json {
            out!("{}", serde_json::to_string_pretty(report).unwrap());
        } else {
            out!("instance: {}", report.instance);
            if let Some(theta) = report.theta {
                out!("theta: {theta}");
            }
            if let Some(lambda) = &report.lambda {
                for entry in lambda {
                    out!("  lambda{:?} = {:?}", entry.beta, entry.tau[0]);
                }
            }
            out!("verdict: {}", report.verdict);
        }
    };
    let inst = match CircuitInstance::from_sum(&f) {
        Ok(inst) => inst,
        Err(CircuitError::NegativeTermCount(0)) => {
            emit(&CircuitReport {
                instance: stem(path),
                verdict: "nonnegative (no negative terms)".into(),
                theta: None,
                lambda: None,
            });
            return ExitCode::SUCCESS;
        }
        Err(CircuitError::NegativeTermCount(k)) => {
            eprintln!("error: {k} negative terms; check-circuit handles exactly one (use `bound` for general instances)");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let points: Vec<_> = inst.outer().iter().map(|(p, _)| p.clone()).collect();
    let verdict = match circuit_nonnegative(&inst) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let (inner_point, _) = inst.inner();
    let lambda = lambda_feasible(&points, inner_point).expect("hull-checked above");
    let theta = circuit_number(&inst, &lambda).expect("lambda is valid").theta;
    let entries: Vec<CertEntry> = lambda
        .iter()
        .map(|(p, w)| CertEntry { beta: p.to_vec(), tau: vec![w] })
        .collect();
    emit(&CircuitReport {
        instance: stem(path),
        verdict: if verdict { "nonnegative" } else { "not certified" }.into(),
        theta: Some(theta),
        lambda: Some(entries),
    });
    if verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn cmd_bench(dir: &Path, json: bool) -> ExitCode {
    let entries = match std::fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: reading {}: {e}", dir.display());
            return ExitCode::from(1);
        }
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json")
                && stem(p) != "references"
        })
        .collect();
    files.sort();

    let references: std::collections::BTreeMap<String, f64> = std::fs::read_to_string(
        dir.join("references.json"),
    )
    .ok()
    .and_then(|text| serde_json::from_str(&text).ok())
    .unwrap_or_default();

    let reports: Vec<Report> = files
        .iter()
        .map(|path| {
            run_bound(path, None, false).unwrap_or_else(|msg| Report {
                instance: stem(path),
                status: "error".into(),
                opt: None,
                lower_bound: None,
                branch: None,
                wall_time_ms: 0.0,
                certificate: None,
                relaxation: None,
                oracle_min: None,
                error: Some(msg),
            })
        })
        .collect();

    if json {
        out!("{}", serde_json::to_string_pretty(&reports).unwrap());
        return ExitCode::SUCCESS;
    }

    out!(
        "{:<16} {:<11} {:>22} {:>22} {:>9} {:>12}",
        "instance", "status", "opt", "lower_bound", "time_ms", "deviation"
    );
    for r in &reports {
        let mut line = String::new();
        let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_else(|| "-".into());
        write!(
            line,
            "{:<16} {:<11} {:>22} {:>22} {:>9.3}",
            r.instance,
            r.status,
            fmt_opt(r.opt),
            fmt_opt(r.lower_bound),
            r.wall_time_ms
        )
        .unwrap();
        match (r.opt, references.get(&r.instance)) {
            (Some(opt), Some(reference)) => {
                write!(line, " {:>12.3e}", opt - reference).unwrap()
            }
            _ => write!(line, " {:>12}", "-").unwrap(),
        }
        if let Some(err) = &r.error {
            write!(line, "  ({err})").unwrap();
        }
        out!("{line}");
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct OracleReport {
    instance: String,
    oracle_min: f64,
    point: Vec<f64>,
    evaluations: u64,
    wall_time_ms: f64,
}

fn cmd_oracle(path: &Path, json: bool, grid: usize, range: f64) -> ExitCode {
    let f = match load(path) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let config = OracleConfig { grid_points: grid, radius: range, ..Default::default() };
    let start = Instant::now();
    match sample_min(&f, &config) {
        Ok(min) => {
            let report = OracleReport {
                instance: stem(path),
                oracle_min: min.value,
                point: min.point,
                evaluations: min.evaluations,
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            if json {
                out!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                out!("instance: {}", report.instance);
                out!("oracle_min: {}", report.oracle_min);
                out!("point: {:?}", report.point);
                out!("evaluations: {}", report.evaluations);
                out!("wall_time_ms: {:.3}", report.wall_time_ms);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Bound { file, json, relax, oracle } => cmd_bound(&file, json, relax, oracle),
        Command::CheckDual { file, json } => cmd_check_dual(&file, json),
        Command::CheckCircuit { file, json } => cmd_check_circuit(&file, json),
        Command::Bench { dir, json } => cmd_bench(&dir, json),
        Command::Oracle { file, json, grid, range } => cmd_oracle(&file, json, grid, range),
    }
}
