//! Command-line frontend: classify group specs from JSON, verify
//! certificates, emit the classification table, classify single orbits, and
//! run the embedded property suites.
//!
//! Exit codes: 0 success / all checks pass, 1 failed verification or
//! selftest, 2 invalid input, 3 out-of-scope input (sigma spans all of
//! Sym(2,R)).

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use e2class::{
    classify, eta, eta_type_of, phi_inv, verify, CanonicalLabel, Certificate, Error, GroupSpec,
    LabelId, Mat2, OrbitClass, Sym2, Tolerances, Vec3,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "e2class",
    version,
    about = "Conjugacy classifier for semidirect products in the parabolic of Sp(2,R)"
)]
struct Cli {
    /// Residual tolerance for span membership and certificates.
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    /// Rank threshold for singular-value decisions.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Tolerance for comparing continuous parameters.
    #[arg(long, global = true)]
    param_tol: Option<f64>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Input path; "-" or absent reads stdin.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Output path; "-" or absent writes stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a group spec read as JSON.
    Classify,
    /// Re-check a (spec, label, certificate) triple from scratch.
    Verify,
    /// Emit the 26-entry classification table as JSON.
    Table,
    /// Classify one symmetric matrix or one 3-vector into its orbit.
    Orbit,
    /// Run the embedded property suites.
    Selftest,
}

fn tolerances(cli: &Cli) -> Result<Tolerances, String> {
    let mut tol = Tolerances::default();
    if let Some(r) = cli.tol_residual {
        tol.residual = r;
    }
    if let Some(r) = cli.tol_rank {
        tol.rank = r;
    }
    if let Some(p) = cli.param_tol {
        tol.param_tol = p;
    }
    if !tol.validate() {
        return Err("tolerances must be strictly positive".to_string());
    }
    Ok(tol)
}

fn read_input(cli: &Cli) -> Result<String, String> {
    match cli.input.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            Ok(buf)
        }
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}")),
    }
}

fn write_output(cli: &Cli, body: &str) -> Result<(), String> {
    match cli.output.as_deref() {
        None | Some("-") => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| format!("cannot write stdout: {e}")),
        Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {path}: {e}")),
    }
}

/// Rounds to 12 significant digits so numeric output is byte-stable.
fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = (12 - x.abs().log10().ceil() as i32).clamp(-300, 300);
    let factor = 10f64.powi(digits);
    (x * factor).round() / factor
}

#[derive(Debug, Deserialize)]
struct SpecInput {
    sigma_generators: Vec<[[f64; 2]; 2]>,
    h_generators: Vec<[[f64; 2]; 2]>,
}

#[derive(Debug, Deserialize)]
struct LabelInput {
    id: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
struct CertificateInput {
    conjugator: [[f64; 2]; 2],
    #[serde(default)]
    residual_sigma: f64,
    #[serde(default)]
    residual_h: f64,
}

#[derive(Debug, Deserialize)]
struct VerifyInput {
    spec: SpecInput,
    label: LabelInput,
    certificate: CertificateInput,
}

#[derive(Debug, Serialize)]
struct ResidualsOut {
    sigma: f64,
    h: f64,
}

#[derive(Debug, Serialize)]
struct ClassifyOut {
    label: String,
    dimension: usize,
    params: BTreeMap<String, f64>,
    conjugator: [[f64; 2]; 2],
    residuals: ResidualsOut,
}

#[derive(Debug, Serialize)]
struct VerifyOut {
    pass: bool,
    label: String,
    residuals: ResidualsOut,
    detail: String,
}

#[derive(Debug, Serialize)]
struct OrbitOut {
    eta_type: String,
    orbit: String,
}

fn json_position(err: &serde_json::Error) -> String {
    format!("line {}, column {}", err.line(), err.column())
}

fn parse_spec(body: &str, tol: &Tolerances) -> Result<GroupSpec, (u8, String)> {
    let raw: SpecInput = serde_json::from_str(body)
        .map_err(|e| (2, format!("malformed JSON at {}: {e}", json_position(&e))))?;
    build_spec(&raw, tol)
}

fn build_spec(raw: &SpecInput, tol: &Tolerances) -> Result<GroupSpec, (u8, String)> {
    let mut sigma = Vec::new();
    for (i, m) in raw.sigma_generators.iter().enumerate() {
        let scale = m.iter().flatten().fold(0.0_f64, |a, v| a.max(v.abs()));
        if (m[0][1] - m[1][0]).abs() > tol.residual * (1.0 + scale) {
            return Err((2, format!("sigma generator {i} is not symmetric")));
        }
        sigma.push(Sym2::new(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1]));
    }
    let h: Vec<Mat2> = raw
        .h_generators
        .iter()
        .map(|m| Mat2::new(m[0][0], m[0][1], m[1][0], m[1][1]))
        .collect();
    GroupSpec::new(&sigma, &h, tol).map_err(|e| (2, e.to_string()))
}

fn run_classify(cli: &Cli, tol: &Tolerances) -> Result<(), (u8, String)> {
    let body = read_input(cli).map_err(|e| (2, e))?;
    let spec = parse_spec(&body, tol)?;
    let (label, cert) = classify(&spec, tol).map_err(|e| match e {
        Error::DimensionOutOfScope { .. } => (3, e.to_string()),
        _ => (2, e.to_string()),
    })?;
    let out = ClassifyOut {
        label: label.id.to_string(),
        dimension: label.dim_total,
        params: label
            .params
            .iter()
            .map(|(k, v)| (k.clone(), round_sig(*v)))
            .collect(),
        conjugator: {
            let mut m = cert.conjugator.row_major();
            for row in &mut m {
                for v in row {
                    *v = round_sig(*v);
                }
            }
            m
        },
        residuals: ResidualsOut {
            sigma: round_sig(cert.residual_sigma),
            h: round_sig(cert.residual_h),
        },
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out).unwrap() + "\n",
        Format::Text => format!(
            "label     {}\ndimension {}\nparams    {:?}\nconjugator {:?}\nresiduals sigma={:.3e} h={:.3e}\n",
            out.label, out.dimension, out.params, out.conjugator, out.residuals.sigma, out.residuals.h
        ),
    };
    write_output(cli, &body).map_err(|e| (2, e))
}

fn run_verify(cli: &Cli, tol: &Tolerances) -> Result<bool, (u8, String)> {
    let body = read_input(cli).map_err(|e| (2, e))?;
    let raw: VerifyInput = serde_json::from_str(&body)
        .map_err(|e| (2, format!("malformed JSON at {}: {e}", json_position(&e))))?;
    let spec = build_spec(&raw.spec, tol)?;
    let id: LabelId = raw
        .label
        .id
        .parse()
        .map_err(|e: Error| (2, e.to_string()))?;
    let label = CanonicalLabel {
        id,
        dim_total: id.dim as usize,
        params: raw.label.params.clone(),
    };
    let c = raw.certificate.conjugator;
    let cert = Certificate {
        conjugator: Mat2::new(c[0][0], c[0][1], c[1][0], c[1][1]),
        residual_sigma: raw.certificate.residual_sigma,
        residual_h: raw.certificate.residual_h,
    };
    let report = verify(&spec, &label, &cert, tol);
    let out = VerifyOut {
        pass: report.pass,
        label: label.id.to_string(),
        residuals: ResidualsOut {
            sigma: round_sig(report.residual_sigma),
            h: round_sig(report.residual_h),
        },
        detail: report.detail.clone(),
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out).unwrap() + "\n",
        Format::Text => format!(
            "{}: {} (sigma={:.3e}, h={:.3e})\n",
            if report.pass { "PASS" } else { "FAIL" },
            report.detail,
            report.residual_sigma,
            report.residual_h
        ),
    };
    write_output(cli, &body).map_err(|e| (2, e))?;
    Ok(report.pass)
}

fn run_orbit(cli: &Cli, tol: &Tolerances) -> Result<(), (u8, String)> {
    let body = read_input(cli).map_err(|e| (2, e))?;
    let value: serde_json::Value = serde_json::from_str(&body)
        .map_err(|e| (2, format!("malformed JSON at {}: {e}", json_position(&e))))?;

    let (vector, sym): (Vec3, Option<Sym2>) = if let Ok(m) =
        serde_json::from_value::<[[f64; 2]; 2]>(value.clone())
    {
        let scale = m.iter().flatten().fold(0.0_f64, |a, v| a.max(v.abs()));
        if (m[0][1] - m[1][0]).abs() > tol.residual * (1.0 + scale) {
            return Err((2, "matrix input is not symmetric".to_string()));
        }
        let s = Sym2::new(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1]);
        (phi_inv(&s), Some(s))
    } else if let Ok(v) = serde_json::from_value::<[f64; 3]>(value) {
        (Vec3::new(v[0], v[1], v[2]), None)
    } else {
        return Err((
            2,
            "input must be a symmetric 2x2 matrix [[p,q],[q,r]] or a 3-vector [x,y,t]".to_string(),
        ));
    };

    let orbit = e2class::classify_vector(&vector, tol);
    let eta_name = if orbit == OrbitClass::Present {
        "Null".to_string()
    } else {
        match sym {
            Some(s) => eta_type_of(&s, tol)
                .map_err(|e| (2, e.to_string()))?
                .as_str()
                .to_string(),
            None => {
                let e = eta(&vector);
                let n2 = vector.x * vector.x + vector.y * vector.y + vector.t * vector.t;
                if e.abs() <= tol.residual * (1.0 + n2) {
                    "Null".to_string()
                } else if e > 0.0 {
                    "Pos".to_string()
                } else {
                    "Neg".to_string()
                }
            }
        }
    };
    let out = OrbitOut {
        eta_type: eta_name,
        orbit: orbit.as_str().to_string(),
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string(&out).unwrap() + "\n",
        Format::Text => format!("eta_type {}\norbit    {}\n", out.eta_type, out.orbit),
    };
    write_output(cli, &body).map_err(|e| (2, e))
}

fn run_selftest(cli: &Cli, tol: &Tolerances) -> Result<bool, (u8, String)> {
    let report = e2class::selftest::run(cli.seed, tol);
    let body = match cli.format {
        Format::Json => {
            serde_json::to_string_pretty(&serde_json::json!({
                "seed": report.seed,
                "pass": report.all_passed(),
                "suites": report.suites.iter().map(|s| serde_json::json!({
                    "name": s.name,
                    "pass": s.passed,
                    "detail": s.detail,
                })).collect::<Vec<_>>(),
            }))
            .unwrap()
                + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            for s in &report.suites {
                out.push_str(&format!(
                    "{} {:28} {}\n",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.name,
                    s.detail
                ));
            }
            out.push_str(&format!(
                "selftest: {}\n",
                if report.all_passed() {
                    "all suites passed"
                } else {
                    "FAILURES"
                }
            ));
            out
        }
    };
    write_output(cli, &body).map_err(|e| (2, e))?;
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match tolerances(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome: Result<bool, (u8, String)> = match cli.command {
        Command::Classify => run_classify(&cli, &tol).map(|_| true),
        Command::Verify => run_verify(&cli, &tol),
        Command::Table => write_output(&cli, &e2class::catalog_json())
            .map(|_| true)
            .map_err(|e| (2, e)),
        Command::Orbit => run_orbit(&cli, &tol).map(|_| true),
        Command::Selftest => run_selftest(&cli, &tol),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
