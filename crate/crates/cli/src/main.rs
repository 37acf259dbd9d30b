use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use uncertainty_core::bspline::rect_scan;
use uncertainty_core::dictionaries::{dict_table, Family};
use uncertainty_core::moments::{atom_moments, moments_report, AtomParams};
use uncertainty_core::ratpoly::parse_rational;
use uncertainty_core::spectrum::fourier_eval;
use uncertainty_core::symmetry::{theorem_bound_check, Axis};
use uncertainty_core::{verify, Error, PiecewisePoly};

#[derive(Parser)]
#[command(
    name = "uncert",
    version,
    about = "Exact time-frequency uncertainty for piecewise polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean, variances and uncertainty product of a function (JSON)
    Moments {
        /// Function descriptor JSON; `-` or omitted reads stdin
        input: Option<PathBuf>,
        /// Atom parameters `t,xi,u`: moments of `t^{-1/2} f((x-u)/t) e^{2πiξx}`
        #[arg(long, value_name = "T,XI,U")]
        gamma: Option<String>,
        /// Float tolerance for the endpoint-zero and evenness checks
        #[arg(long, default_value_t = 0.0)]
        class_tol: f64,
    },
    /// Exact dictionary table (CSV)
    DictTable {
        /// `G`, `F`, or omit for both
        #[arg(long)]
        family: Option<Family>,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// Exact uncertainty of rect^p over a range of orders (CSV)
    RectScan {
        #[arg(long, default_value_t = 2)]
        p_min: usize,
        #[arg(long, default_value_t = 16)]
        p_max: usize,
    },
    /// Reflection bounds for a nonnegative function vanishing at its edges (JSON)
    SymmetryCheck {
        input: Option<PathBuf>,
        #[arg(long, value_parser = ["origin", "barycenter"])]
        axis: Option<String>,
        /// Reflect about the origin without translating to the barycenter
        #[arg(long)]
        no_centering: bool,
        #[arg(long, default_value_t = 0.0)]
        class_tol: f64,
    },
    /// Fourier transform samples on a uniform grid (CSV)
    SpectrumSample {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = -50.0, allow_hyphen_values = true)]
        omega_min: f64,
        #[arg(long, default_value_t = 50.0, allow_hyphen_values = true)]
        omega_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Recompute every reference value and claim; exit 1 on any failure
    Verify {
        /// Group name (dict, rect, symmetry, property, spectrum) or claim substring
        #[arg(long)]
        filter: Option<String>,
        /// Emit JSON instead of the text table
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ParseRational { .. }
            | Error::InvalidPiecewise(_)
            | Error::ReversedInterval { .. }
            | Error::Precondition(_)
            | Error::InvalidDictionary { .. } => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read_function(path: &Option<PathBuf>) -> Result<PiecewisePoly, Failure> {
    let text = match path.as_deref() {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(PiecewisePoly::from_json(&text)?)
}

fn parse_gamma(s: &str) -> Result<AtomParams, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [t, xi, u] = parts.as_slice() else {
        return Err(Failure::Usage(format!("--gamma expects t,xi,u, got {s:?}")));
    };
    AtomParams::new(parse_rational(t)?, parse_rational(xi)?, parse_rational(u)?)
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn print_json(v: &Value) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Failure::Check(e.to_string()))?;
    writeln!(out)?;
    Ok(ExitCode::SUCCESS)
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn moments(input: &Option<PathBuf>, gamma: &Option<String>, class_tol: f64) -> Outcome {
    let f = read_function(input)?;
    let report = match gamma {
        Some(g) => atom_moments(&f, &parse_gamma(g)?, class_tol)?,
        None => moments_report(&f, class_tol)?,
    };
    let mut v = to_value(&report);
    v["class"] = to_value(f.classify(class_tol));
    print_json(&v)
}

fn dict(family: Option<Family>, n_max: u32) -> Outcome {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["family", "n", "sigma_x2", "sigma_w2", "U", "U_float"])?;
    let families = family.map_or(vec![Family::G, Family::F], |f| vec![f]);
    for fam in families {
        for row in dict_table(fam, n_max)? {
            w.write_record([
                fam.to_string(),
                row.id.n().to_string(),
                row.sigma_x2.to_string(),
                row.sigma_w2.to_string(),
                row.uncertainty.to_string(),
                row.uncertainty_float().to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn rect(p_min: usize, p_max: usize) -> Outcome {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["p", "u_p", "nu_p", "U", "U_float"])?;
    for row in rect_scan(p_min, p_max)? {
        w.write_record([
            row.p.to_string(),
            row.u_p.to_string(),
            row.nu_p.to_string(),
            row.uncertainty.to_string(),
            row.uncertainty_float.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn symmetry(
    input: &Option<PathBuf>,
    axis: &Option<String>,
    no_centering: bool,
    class_tol: f64,
) -> Outcome {
    let axis = axis.as_deref().map(str::parse::<Axis>).transpose()?;
    let centered = match (axis, no_centering) {
        (Some(Axis::Barycenter), true) => {
            return Err(Failure::Usage(
                "--no-centering reflects about the origin; drop --axis barycenter".into(),
            ))
        }
        (Some(Axis::Origin), _) | (None, true) => false,
        (Some(Axis::Barycenter), false) | (None, false) => true,
    };
    let f = read_function(input)?;
    let report = theorem_bound_check(&f, centered, class_tol)?;
    let mut v = to_value(&report);
    v["class"] = to_value(f.classify(class_tol));
    print_json(&v)
}

fn spectrum(input: &Option<PathBuf>, lo: f64, hi: f64, points: usize) -> Outcome {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || points == 0 || (points == 1 && lo != hi) {
        return Err(Failure::Usage(
            "need a finite grid omega-min <= omega-max with points >= 1".into(),
        ));
    }
    let f = read_function(input)?;
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["omega", "re", "im", "abs2"])?;
    let step = if points > 1 {
        (hi - lo) / (points - 1) as f64
    } else {
        0.0
    };
    for i in 0..points {
        let omega = if i + 1 == points {
            hi
        } else {
            lo + step * i as f64
        };
        let s = fourier_eval(&f, omega);
        w.write_record([omega, s.re, s.im, s.abs2()].map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(filter: &Option<String>, as_json: bool) -> Outcome {
    let outcomes = verify::run(filter.as_deref());
    if outcomes.is_empty() {
        return Err(Failure::Usage(format!(
            "filter {:?} matches no check",
            filter.as_deref().unwrap_or("")
        )));
    }
    if as_json {
        print_json(&json!(outcomes))?;
    } else {
        print!("{}", verify::render_table(&outcomes));
    }
    Ok(if outcomes.iter().all(|o| o.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Moments {
            input,
            gamma,
            class_tol,
        } => moments(input, gamma, *class_tol),
        Command::DictTable { family, n_max } => dict(*family, *n_max),
        Command::RectScan { p_min, p_max } => rect(*p_min, *p_max),
        Command::SymmetryCheck {
            input,
            axis,
            no_centering,
            class_tol,
        } => symmetry(input, axis, *no_centering, *class_tol),
        Command::SpectrumSample {
            input,
            omega_min,
            omega_max,
            points,
        } => spectrum(input, *omega_min, *omega_max, *points),
        Command::Verify { filter, json } => run_verify(filter, *json),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
