use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyon_cs::corr::{corr_csv, corr_eval, CorrSpec};
use anyon_cs::json::{duality_json, eigen_json, jack_json, sympoly_json};
use anyon_cs::partition::{partitions_bounded, Partition};
use anyon_cs::quad::{parse_rational, rational_string};
use anyon_cs::solver::{build_eigenvector, duality_check, eigenvalue, eigenvalue_gauged};
use anyon_cs::sympoly::{admissible_points, assemble_eigenfunction, eigen_polynomial, jack_compare};
use anyon_cs::verify::{run_suite, Suite};
use anyon_cs::vertex::{anyon_momenta, MomentumVector};
use anyon_cs::{Error, QuadNum};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "anyon-cs", version, about = "Exact anyon and Calogero-Sutherland computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    /// Ring length; momenta scale by 2π/L and energies by (2π/L)²
    #[arg(long = "L", default_value_t = 2.0 * PI)]
    length: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Energies over all ordered labels with at most N parts up to a degree
    Spectrum {
        #[arg(long)]
        nu2: String,
        #[arg(long = "N")]
        particles: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Centre-of-mass gauge μ_g
        #[arg(long)]
        gauge: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Certified eigenvector for one label
    Eigen {
        #[arg(long)]
        nu2: String,
        /// Comma-separated n₁ ≥ ⋯ ≥ n_N ≥ 0
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        gauge: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Compares an eigenfunction polynomial with the Jack polynomial
    Jack {
        #[arg(long)]
        nu2: String,
        /// Partition λ, comma-separated
        #[arg(long)]
        n: String,
        /// Number of variables; defaults to the length of λ
        #[arg(long = "N")]
        particles: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluates a regularized correlation function, optionally along a sweep
    Corr {
        #[arg(long)]
        nu0: f64,
        #[arg(long, allow_hyphen_values = true)]
        charges: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        w1: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        w2: i64,
        /// Sweep `j:from:to:steps` of position x_j (1-based)
        #[arg(long, allow_hyphen_values = true)]
        sweep: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluates an eigenfunction at random admissible points
    Wavefn {
        #[arg(long)]
        nu2: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        gauge: Option<u32>,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Runs verification suites; exit status 1 when any check fails
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tests the dual eigenvectors Ψ_{−1/ν} against H at ν
    Duality {
        #[arg(long)]
        nu2: String,
        #[arg(long = "N")]
        particles: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::NotOrdered(_) | Error::InadmissiblePoint(_) | Error::MissingParameter(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn parse_nu(nu2: &str) -> Result<(BigRational, QuadNum), Failure> {
    let q = parse_rational(nu2)?;
    let nu = QuadNum::sqrt_of(&q)?;
    Ok((q, nu))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Failure::Input(format!("bad {what} entry {t:?}"))))
        .collect()
}

fn parse_label(s: &str) -> Result<MomentumVector, Failure> {
    let v: Vec<i64> = parse_list(s, "momentum")?;
    if v.is_empty() {
        return Err(Failure::Input("empty momentum label".into()));
    }
    Ok(MomentumVector::new(v))
}

fn check_length(l: f64) -> Result<f64, Failure> {
    if l > 0.0 && l.is_finite() {
        Ok(l)
    } else {
        Err(Failure::Input(format!("ring length {l} must be positive")))
    }
}

fn emit(output: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn emit_json(output: &Option<PathBuf>, v: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    emit(output, &s)
}

fn energy_entry(nu: &QuadNum, n: &MomentumVector, gauge: Option<u32>, length: f64) -> Value {
    let u = 2.0 * PI / length;
    let e = match gauge {
        None => eigenvalue(nu, n),
        Some(mu) => eigenvalue_gauged(nu, n, mu as i64),
    };
    let momenta: Vec<String> = anyon_momenta(nu, n).iter().map(ToString::to_string).collect();
    json!({
        "n": n.entries(),
        "P": momenta,
        "E": e.to_string(),
        "E_L": e.to_f64() * u * u,
    })
}

fn spectrum(nu2: &str, particles: usize, max_degree: u32, gauge: Option<u32>, format: Format, common: &Common) -> Outcome {
    let (q, nu) = parse_nu(nu2)?;
    let length = check_length(common.length)?;
    if particles == 0 {
        return Err(Failure::Input("N must be positive".into()));
    }
    let labels: Vec<MomentumVector> = (0..=max_degree)
        .flat_map(|d| partitions_bounded(d, particles))
        .map(|p| MomentumVector::from_partition(&p, particles).expect("bounded length"))
        .collect();
    let rows: Vec<Value> = labels.iter().map(|n| energy_entry(&nu, n, gauge, length)).collect();
    match format {
        Format::Csv => {
            let mut out = String::from("n,E,E_L\n");
            for r in &rows {
                let n: Vec<String> = r["n"].as_array().unwrap().iter().map(ToString::to_string).collect();
                out.push_str(&format!("\"{}\",{},{:.12e}\n", n.join(","), r["E"].as_str().unwrap(), r["E_L"].as_f64().unwrap()));
            }
            emit(&common.output, &out)?;
        }
        _ => emit_json(&common.output, &json!({ "nu2": rational_string(&q), "N": particles, "gauge": gauge, "L": length, "levels": rows }))?,
    }
    Ok(true)
}

fn eigen(nu2: &str, n: &str, gauge: Option<u32>, common: &Common) -> Outcome {
    let (_, nu) = parse_nu(nu2)?;
    let length = check_length(common.length)?;
    let n = parse_label(n)?;
    let res = build_eigenvector(&nu, &n)?;
    let mut doc = eigen_json(&res)?;
    let poly = eigen_polynomial(&res)?;
    doc["polynomial"] = sympoly_json(&poly);
    doc["L"] = json!(length);
    doc["energy"] = energy_entry(&nu, &n, gauge, length);
    emit_json(&common.output, &doc)?;
    Ok(res.certified)
}

fn jack(nu2: &str, n: &str, particles: Option<usize>, common: &Common) -> Outcome {
    let (q, nu) = parse_nu(nu2)?;
    let parts: Vec<u32> = parse_list(n, "partition")?;
    let lambda = Partition::new(parts);
    let vars = particles.unwrap_or(lambda.len().max(1));
    let report = jack_compare(&nu, &lambda, vars)?;
    emit_json(&common.output, &jack_json(&q, &report))?;
    Ok(report.matches())
}

#[allow(clippy::too_many_arguments)]
fn corr(
    nu0: f64,
    charges: &str,
    x: &str,
    eps: &str,
    w1: i64,
    w2: i64,
    sweep: &Option<String>,
    format: Format,
    common: &Common,
) -> Outcome {
    let length = check_length(common.length)?;
    let base = CorrSpec {
        length,
        nu0,
        charges: parse_list(charges, "charge")?,
        positions: parse_list(x, "position")?,
        eps: parse_list(eps, "regulator")?,
        w1,
        w2,
    };
    base.validate()?;
    let specs = match sweep {
        None => vec![base],
        Some(s) => {
            let f: Vec<&str> = s.split(':').collect();
            let bad = || Failure::Input(format!("sweep {s:?} is not j:from:to:steps"));
            if f.len() != 4 {
                return Err(bad());
            }
            let j: usize = f[0].parse().map_err(|_| bad())?;
            let from: f64 = f[1].parse().map_err(|_| bad())?;
            let to: f64 = f[2].parse().map_err(|_| bad())?;
            let steps: usize = f[3].parse().map_err(|_| bad())?;
            if j == 0 || j > base.positions.len() || steps < 2 {
                return Err(bad());
            }
            (0..steps)
                .map(|i| {
                    let mut s = base.clone();
                    s.positions[j - 1] = from + (to - from) * i as f64 / (steps - 1) as f64;
                    s
                })
                .collect()
        }
    };
    match format {
        Format::Json => {
            let rows = specs
                .iter()
                .map(|s| corr_eval(s).map(|c| json!({ "x": s.positions, "eps": s.eps, "re": c.re, "im": c.im })))
                .collect::<Result<Vec<_>, _>>()?;
            emit_json(&common.output, &Value::Array(rows))?;
        }
        _ => emit(&common.output, &corr_csv(&specs)?)?,
    }
    Ok(true)
}

fn wavefn(nu2: &str, n: &str, gauge: Option<u32>, points: usize, seed: u64, common: &Common) -> Outcome {
    let (_, nu) = parse_nu(nu2)?;
    let length = check_length(common.length)?;
    let n = parse_label(n)?;
    let res = build_eigenvector(&nu, &n)?;
    let spec = assemble_eigenfunction(&res, gauge, length)?;
    let pts = admissible_points(n.len(), length, points, seed);
    emit(&common.output, &spec.evaluation_csv(&pts)?)?;
    let r = spec.analytic_checks(&pts)?;
    Ok(r.pde_residual <= 1e-8 && r.momentum_residual <= 1e-8)
}

fn verify(suite: &str, format: Format, output: &Option<PathBuf>) -> Outcome {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite);
    let body = match format {
        Format::Json => report.to_json(),
        _ => report.to_text(),
    };
    emit(output, &body)?;
    Ok(report.passed())
}

fn duality(nu2: &str, particles: usize, max_degree: u32, common: &Common) -> Outcome {
    let (q, nu) = parse_nu(nu2)?;
    if particles == 0 {
        return Err(Failure::Input("N must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut all_eigen = true;
    for d in 0..=max_degree {
        for p in partitions_bounded(d, particles) {
            let n = MomentumVector::from_partition(&p, particles).expect("bounded length");
            let r = duality_check(&nu, &n)?;
            all_eigen &= r.is_eigen;
            rows.push(duality_json(&r));
        }
    }
    emit_json(&common.output, &json!({ "nu2": rational_string(&q), "N": particles, "reports": rows }))?;
    Ok(all_eigen)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Spectrum { nu2, particles, max_degree, gauge, format, common } => {
            spectrum(nu2, *particles, *max_degree, *gauge, *format, common)
        }
        Command::Eigen { nu2, n, gauge, common } => eigen(nu2, n, *gauge, common),
        Command::Jack { nu2, n, particles, common } => jack(nu2, n, *particles, common),
        Command::Corr { nu0, charges, x, eps, w1, w2, sweep, format, common } => {
            corr(*nu0, charges, x, eps, *w1, *w2, sweep, *format, common)
        }
        Command::Wavefn { nu2, n, gauge, points, seed, common } => wavefn(nu2, n, *gauge, *points, *seed, common),
        Command::Verify { suite, format, output } => verify(suite, *format, output),
        Command::Duality { nu2, particles, max_degree, common } => duality(nu2, *particles, *max_degree, common),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
