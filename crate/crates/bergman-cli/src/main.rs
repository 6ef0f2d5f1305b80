//! Command-line front end: kernel evaluation, transform application, limit
//! scans, norms, and the verification suite, with text/JSON/CSV output.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 domain or usage error,
//! 3 convergence failure. All numerical work happens in the library; this
//! binary only parses flags, dispatches, and formats.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use bergman_spaces::kernels::{
    bargmann_kernel, bargmann_kernel_series, bergman_kernel, bergman_kernel_series, hardy_kernel,
    hardy_kernel_series,
};
use bergman_spaces::spaces::{
    dirichlet_norm, BargmannDirichletParams, BergmanDirichletParams, HardyDirichletParams,
    LaurentSeries, SpaceParams,
};
use bergman_spaces::transforms::{
    apply_transform_coeff, apply_transform_quadrature, vector_to_laurent,
    FamilyParams, Parity, Side, SubspaceVector, TransformKind, TransformSpec, TransformVector,
};
use bergman_spaces::verify::{
    check_limit, hardy_inner_product_oracle, quadrature_dirichlet_inner_product, run_suite,
    LimitTarget, SuiteConfig, VerificationReport,
};
use bergman_spaces::Error;

#[derive(Parser)]
#[command(
    name = "bergman",
    version,
    about = "Reproducing kernels, norms and Segal-Bargmann transforms for weighted Bergman-type spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a reproducing kernel at one or more points
    Kernel(KernelArgs),
    /// Apply a Segal-Bargmann transform to basis coefficients
    Transform(TransformArgs),
    /// Run the verification suite
    Verify(VerifyArgs),
    /// Scan a kernel toward its plane or circle limit
    Limit(LimitArgs),
    /// Compute the space norm of a Laurent series
    Norm(NormArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelFamily {
    Bergman,
    Bargmann,
    Hardy,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, value_enum)]
    family: KernelFamily,
    /// Disk weight exponent at the boundary (bergman only)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Fractional part of the weight exponent at the origin, in (-1, 0]
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta0: f64,
    /// Integer part of the weight exponent at the origin
    #[arg(long, default_value_t = 0)]
    p: u32,
    /// Dirichlet order of the space
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Disk radius (bergman only)
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    /// Gaussian decay rate (bargmann only)
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Circle-norm exponent (hardy only)
    #[arg(long, default_value_t = 2.0)]
    s: f64,
    /// Evaluation point xi = z * conj(w), as RE or RE,IM; repeatable
    #[arg(long = "xi", value_parser = parse_complex, required = true, allow_hyphen_values = true)]
    xi: Vec<Complex64>,
    /// Also evaluate the brute-force series with this truncation
    #[arg(long)]
    series_truncation: Option<i64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformFamilyArg {
    Disk,
    Fock,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Full,
    EvenEven,
    OddOdd,
    EvenOdd,
    Involution,
}

impl From<KindArg> for TransformKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Full => TransformKind::Full,
            KindArg::EvenEven => TransformKind::EvenEven,
            KindArg::OddOdd => TransformKind::OddOdd,
            KindArg::EvenOdd => TransformKind::EvenOdd,
            KindArg::Involution => TransformKind::Involution,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Full,
    Even,
    Odd,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, value_enum)]
    family: TransformFamilyArg,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    q: u32,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta0: f64,
    /// Basis coefficients as a JSON array of [re, im] pairs
    #[arg(long, conflicts_with = "input")]
    coeffs: Option<String>,
    /// File holding the same JSON array
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// How the coefficient vector indexes the basis
    #[arg(long, value_enum, default_value_t = ParityArg::Full)]
    parity: ParityArg,
    /// Evaluate the transformed function here by both paths; repeatable
    #[arg(long = "point", value_parser = parse_complex, allow_hyphen_values = true)]
    points: Vec<Complex64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0x5EED_0BE5)]
    seed: u64,
    /// Multiplies every tolerance (0 forces failures)
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitKindArg {
    Bargmann,
    Hardy,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, value_enum)]
    kind: LimitKindArg,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    xi: Complex64,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta0: f64,
    #[arg(long, default_value_t = 0)]
    p: u32,
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Comma-separated scan values: radii (bargmann) or alphas (hardy)
    #[arg(long, allow_hyphen_values = true)]
    sequence: Option<String>,
    #[arg(long, default_value_t = 1e-2)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long, value_enum)]
    family: KernelFamily,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta0: f64,
    #[arg(long, default_value_t = 0)]
    p: u32,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Laurent series as JSON: `{"min_index": n, "coefficients": [[re, im], ...]}`
    #[arg(long, conflicts_with = "input")]
    coeffs: Option<String>,
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// Also compute the independent quadrature (or circle) oracle value
    #[arg(long)]
    quadrature: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => re
            .trim()
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|e| format!("bad real part: {e}")),
        [re, im] => {
            let re = re.trim().parse::<f64>().map_err(|e| format!("bad real part: {e}"))?;
            let im = im.trim().parse::<f64>().map_err(|e| format!("bad imaginary part: {e}"))?;
            Ok(Complex64::new(re, im))
        }
        _ => Err("expected RE or RE,IM".into()),
    }
}

/// JSON serializer emitting every float with 17 significant digits.
struct Sci17;

impl serde_json::ser::Formatter for Sci17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sci17);
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    String::from_utf8(out).expect("serializer emits utf-8")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Convergence(_) => 3,
                _ => 2,
            }
        }
    };
    ExitCode::from(code)
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Kernel(args) => cmd_kernel(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Verify(args) => Ok(cmd_verify(args)),
        Command::Limit(args) => cmd_limit(args),
        Command::Norm(args) => cmd_norm(args),
    }
}

#[derive(Serialize)]
struct KernelRow {
    xi: [f64; 2],
    value: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff: Option<f64>,
}

fn cmd_kernel(args: KernelArgs) -> Result<u8, Error> {
    let mut rows = Vec::new();
    for &xi in &args.xi {
        let (value, series) = match args.family {
            KernelFamily::Bergman => {
                let params = BergmanDirichletParams::new(
                    args.alpha,
                    args.beta0,
                    args.p,
                    args.radius,
                    args.m,
                )?;
                (
                    bergman_kernel(xi, &params)?,
                    args.series_truncation
                        .map(|t| bergman_kernel_series(xi, &params, t))
                        .transpose()?,
                )
            }
            KernelFamily::Bargmann => {
                let params =
                    BargmannDirichletParams::new(args.theta, args.beta0, args.p, args.m)?;
                (
                    bargmann_kernel(xi, &params)?,
                    args.series_truncation
                        .map(|t| bargmann_kernel_series(xi, &params, t))
                        .transpose()?,
                )
            }
            KernelFamily::Hardy => {
                let params = HardyDirichletParams::new(args.beta0, args.p, args.m, args.s)?;
                (
                    hardy_kernel(xi, &params)?,
                    args.series_truncation
                        .map(|t| hardy_kernel_series(xi, &params, t))
                        .transpose()?,
                )
            }
        };
        rows.push(KernelRow {
            xi: [xi.re, xi.im],
            value: [value.re, value.im],
            series: series.map(|s| [s.re, s.im]),
            abs_diff: series.map(|s| (value - s).norm()),
        });
    }
    match args.format {
        OutputFormat::Json => println!("{}", to_json(&rows)),
        OutputFormat::Csv => {
            println!("xi_re,xi_im,value_re,value_im,series_re,series_im,abs_diff");
            for r in &rows {
                let (sre, sim, d) = match (r.series, r.abs_diff) {
                    (Some(s), Some(d)) => {
                        (format!("{:.16e}", s[0]), format!("{:.16e}", s[1]), format!("{d:.16e}"))
                    }
                    _ => (String::new(), String::new(), String::new()),
                };
                println!(
                    "{:.16e},{:.16e},{:.16e},{:.16e},{sre},{sim},{d}",
                    r.xi[0], r.xi[1], r.value[0], r.value[1]
                );
            }
        }
        OutputFormat::Text => {
            for r in &rows {
                let mut line = format!(
                    "K({}) = {} + {}i",
                    fmt_c(Complex64::new(r.xi[0], r.xi[1])),
                    r.value[0],
                    r.value[1]
                );
                if let (Some(s), Some(d)) = (r.series, r.abs_diff) {
                    line += &format!("   series = {} + {}i   |diff| = {d:.3e}", s[0], s[1]);
                }
                println!("{line}");
            }
        }
    }
    Ok(0)
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn read_coeffs(
    inline: &Option<String>,
    file: &Option<std::path::PathBuf>,
) -> Result<String, Error> {
    match (inline, file) {
        (Some(s), _) => Ok(s.clone()),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(Error::Domain(
            "provide the coefficients with --coeffs or --input".into(),
        )),
    }
}

#[derive(Serialize)]
struct PointRow {
    z: [f64; 2],
    coefficient_path: [f64; 2],
    quadrature_path: [f64; 2],
    abs_diff: f64,
}

#[derive(Serialize)]
struct TransformOutput {
    spec: TransformSpec,
    parity: String,
    coefficients: Vec<[f64; 2]>,
    points: Vec<PointRow>,
}

fn cmd_transform(args: TransformArgs) -> Result<u8, Error> {
    let params = match args.family {
        TransformFamilyArg::Disk => FamilyParams::Disk {
            alpha: args
                .alpha
                .ok_or_else(|| Error::Domain("disk transforms need --alpha".into()))?,
            beta0: args.beta0,
        },
        TransformFamilyArg::Fock => FamilyParams::Fock {
            theta: args
                .theta
                .ok_or_else(|| Error::Domain("fock transforms need --theta".into()))?,
            beta0: args.beta0,
        },
    };
    let spec = TransformSpec::new(args.kind.into(), args.p, args.q, params)?;
    let raw = read_coeffs(&args.coeffs, &args.input)?;
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&raw)
        .map_err(|e| Error::Domain(format!("coefficient JSON is malformed: {e}")))?;
    let coeffs: Vec<Complex64> = pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    let vector = match args.parity {
        ParityArg::Full => TransformVector::Full(coeffs),
        ParityArg::Even => TransformVector::Sub(SubspaceVector {
            parity: Parity::Even,
            coeffs,
        }),
        ParityArg::Odd => TransformVector::Sub(SubspaceVector {
            parity: Parity::Odd,
            coeffs,
        }),
    };
    let transformed = apply_transform_coeff(&spec, &vector)?;

    let mut points = Vec::new();
    if !args.points.is_empty() {
        let source = vector_to_laurent(&spec, Side::Source, &vector)?;
        let target = vector_to_laurent(&spec, Side::Target, &transformed)?;
        let rule = spec.measure(Side::Source).build_rule(96, 192)?;
        for &z in &args.points {
            let direct = target.evaluate(z)?;
            let integral = apply_transform_quadrature(&spec, &source, z, &rule)?;
            points.push(PointRow {
                z: [z.re, z.im],
                coefficient_path: [direct.re, direct.im],
                quadrature_path: [integral.re, integral.im],
                abs_diff: (direct - integral).norm(),
            });
        }
    }

    let (parity_label, out_coeffs) = match &transformed {
        TransformVector::Full(c) => ("full".to_string(), c.clone()),
        TransformVector::Sub(s) => (
            match s.parity {
                Parity::Even => "even".to_string(),
                Parity::Odd => "odd".to_string(),
            },
            s.coeffs.clone(),
        ),
    };
    let output = TransformOutput {
        spec,
        parity: parity_label,
        coefficients: out_coeffs.iter().map(|c| [c.re, c.im]).collect(),
        points,
    };
    match args.format {
        OutputFormat::Json => println!("{}", to_json(&output)),
        OutputFormat::Csv => {
            println!("index,re,im");
            for (i, c) in output.coefficients.iter().enumerate() {
                println!("{i},{:.16e},{:.16e}", c[0], c[1]);
            }
            if !output.points.is_empty() {
                println!("z_re,z_im,coeff_re,coeff_im,quad_re,quad_im,abs_diff");
                for p in &output.points {
                    println!(
                        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                        p.z[0],
                        p.z[1],
                        p.coefficient_path[0],
                        p.coefficient_path[1],
                        p.quadrature_path[0],
                        p.quadrature_path[1],
                        p.abs_diff
                    );
                }
            }
        }
        OutputFormat::Text => {
            println!("parity: {}", output.parity);
            println!(
                "coefficients: {}",
                to_json(&output.coefficients)
            );
            for p in &output.points {
                println!(
                    "T f({}) = {} + {}i   (quadrature {} + {}i, |diff| = {:.3e})",
                    fmt_c(Complex64::new(p.z[0], p.z[1])),
                    p.coefficient_path[0],
                    p.coefficient_path[1],
                    p.quadrature_path[0],
                    p.quadrature_path[1],
                    p.abs_diff
                );
            }
        }
    }
    Ok(0)
}

fn print_reports(reports: &[VerificationReport], format: OutputFormat) {
    match format {
        OutputFormat::Json => println!("{}", to_json(&reports)),
        OutputFormat::Csv => {
            println!("check_name,measured_error,tolerance,passed");
            for r in reports {
                println!(
                    "{},{:.16e},{:.16e},{}",
                    r.check_name, r.measured_error, r.tolerance, r.passed
                );
            }
        }
        OutputFormat::Text => {
            for r in reports {
                println!(
                    "{} {:<38} measured {:<12.3e} tolerance {:<10.1e} ({:.0} ms)",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.check_name,
                    r.measured_error,
                    r.tolerance,
                    r.runtime_ms
                );
            }
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let config = SuiteConfig {
        seed: args.seed,
        tolerance_scale: args.tolerance_scale,
        sections: None,
    };
    let reports = run_suite(&config);
    print_reports(&reports, args.format);
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", reports.len());
        1
    } else {
        0
    }
}

fn cmd_limit(args: LimitArgs) -> Result<u8, Error> {
    let (target, default_seq) = match args.kind {
        LimitKindArg::Bargmann => (
            LimitTarget::Bargmann(BargmannDirichletParams::new(
                args.theta, args.beta0, args.p, args.m,
            )?),
            "5,10,20,40,100",
        ),
        LimitKindArg::Hardy => (
            LimitTarget::Hardy(HardyDirichletParams::hilbert(args.beta0, args.p, args.m)?),
            "-0.9,-0.99,-0.999",
        ),
    };
    let seq_text = args.sequence.as_deref().unwrap_or(default_seq);
    let sequence = seq_text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Domain(format!("bad sequence entry '{s}': {e}")))
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let report = check_limit(&target, args.xi, &sequence, args.tolerance)?;
    print_reports(std::slice::from_ref(&report), args.format);
    Ok(if report.passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct NormOutput {
    norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff: Option<f64>,
}

fn cmd_norm(args: NormArgs) -> Result<u8, Error> {
    let raw = read_coeffs(&args.coeffs, &args.input)?;
    let series: LaurentSeries = serde_json::from_str(&raw)
        .map_err(|e| Error::Domain(format!("series JSON is malformed: {e}")))?;
    let space = match args.family {
        KernelFamily::Bergman => SpaceParams::Bergman(BergmanDirichletParams::new(
            args.alpha, args.beta0, args.p, args.radius, args.m,
        )?),
        KernelFamily::Bargmann => SpaceParams::Bargmann(BargmannDirichletParams::new(
            args.theta, args.beta0, args.p, args.m,
        )?),
        KernelFamily::Hardy => {
            SpaceParams::Hardy(HardyDirichletParams::hilbert(args.beta0, args.p, args.m)?)
        }
    };
    let norm = dirichlet_norm(&series, &space)?;
    let quad = if args.quadrature {
        let value = match &space {
            SpaceParams::Bergman(s) => {
                let rule =
                    bergman_spaces::measures::build_disk_quadrature(&s.measure(), 128, 256)?;
                quadrature_dirichlet_inner_product(&series, &series, s.m, s.p, &rule)?
            }
            SpaceParams::Bargmann(s) => {
                let rule =
                    bergman_spaces::measures::build_fock_quadrature(&s.measure(), 128, 256)?;
                quadrature_dirichlet_inner_product(&series, &series, s.m, s.p, &rule)?
            }
            SpaceParams::Hardy(s) => hardy_inner_product_oracle(&series, &series, s.m, s.p)?,
        };
        Some(value.re.max(0.0).sqrt())
    } else {
        None
    };
    let output = NormOutput {
        norm,
        quadrature_norm: quad,
        abs_diff: quad.map(|q| (norm - q).abs()),
    };
    match args.format {
        OutputFormat::Json => println!("{}", to_json(&output)),
        OutputFormat::Csv => {
            println!("norm,quadrature_norm,abs_diff");
            let (q, d) = match (output.quadrature_norm, output.abs_diff) {
                (Some(q), Some(d)) => (format!("{q:.16e}"), format!("{d:.16e}")),
                _ => (String::new(), String::new()),
            };
            println!("{:.16e},{q},{d}", output.norm);
        }
        OutputFormat::Text => {
            print!("norm = {}", output.norm);
            if let (Some(q), Some(d)) = (output.quadrature_norm, output.abs_diff) {
                print!("   quadrature = {q}   |diff| = {d:.3e}");
            }
            println!();
        }
    }
    Ok(0)
}
