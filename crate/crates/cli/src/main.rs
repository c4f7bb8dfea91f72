//! Command-line front end: certify factor families, evaluate compositions
//! and Poincaré functions with certified error, emit limit-series
//! coefficients, run the verification suite, and produce grid data for
//! plotting.
//!
//! Exit status: 0 on success, 1 on validation errors (including failed
//! verification), 2 when a family does not certify, 3 on budget exhaustion
//! or overflow.

use std::fs;
use std::io::Write;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use infcomp::composer::{self, DEFAULT_MAX_FACTORS};
use infcomp::verify;
use infcomp::{Complex64, FactorFamily, FamilyDescription, PoincareSpec};

#[derive(Parser)]
#[command(
    name = "infcomp",
    version,
    about = "Certified evaluation of infinite compositions of entire functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a family's convergence and emit its constants
    Certify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate the infinite composition at a point with certified error
    Eval {
        #[command(flatten)]
        family: FamilyArgs,
        /// evaluation point as one or two floats: re [im]
        #[arg(long, num_args = 1..=2, allow_negative_numbers = true, required = true)]
        z: Vec<f64>,
        /// certified error bound to request
        #[arg(long, default_value_t = 1e-9)]
        epsilon: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit the limit function's jet coefficients with stabilization metadata
    Series {
        #[command(flatten)]
        family: FamilyArgs,
        /// jet degree
        #[arg(long, default_value_t = 16)]
        degree: usize,
        /// per-coefficient stabilization threshold
        #[arg(long, default_value_t = 1e-9)]
        epsilon: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate the Poincaré function F(sz) = sF(z) + sF(z)² anywhere in ℂ
    Poincare {
        /// multiplier s as one or two floats: re [im]; requires |s| > 1
        #[arg(long, num_args = 1..=2, allow_negative_numbers = true, required = true)]
        s: Vec<f64>,
        /// evaluation point as one or two floats: re [im]
        #[arg(long, num_args = 1..=2, allow_negative_numbers = true, required = true)]
        z: Vec<f64>,
        /// certified error bound to request
        #[arg(long, default_value_t = 1e-9)]
        epsilon: f64,
        /// direct-evaluation radius (defaults to the certified safe radius)
        #[arg(long)]
        base_radius: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the verification suite and emit a pass/fail table
    Verify {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate on a rectangular grid and emit rows for plotting
    Grid {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_negative_numbers = true)]
        re_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        re_max: f64,
        #[arg(long, allow_negative_numbers = true)]
        im_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        im_max: f64,
        /// grid points per axis (total rows = steps²)
        #[arg(long, default_value_t = 32)]
        steps: u32,
        /// certified error bound per grid point
        #[arg(long, default_value_t = 1e-9)]
        epsilon: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// family kind (geometric | power_law | explicit), inline JSON
    /// {"kind":...}, or @file containing that JSON
    #[arg(long)]
    family: String,
    /// multiplier s as one or two floats: re [im] (geometric families)
    #[arg(long, num_args = 1..=2, allow_negative_numbers = true)]
    s: Vec<f64>,
    /// decay exponent p (power-law families)
    #[arg(long)]
    p: Option<f64>,
    /// degree of the nonlinear term z^r0
    #[arg(long, default_value_t = 2)]
    r0: u32,
    /// explicit factors as JSON [[[re,im],...],...] or @file
    #[arg(long)]
    factors: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// output path, or - for standard output
    #[arg(long, default_value = "-")]
    output: String,
    /// json (default) or csv; csv applies to grid and verify
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn complex_from(parts: &[f64]) -> Complex64 {
    Complex64::new(parts[0], parts.get(1).copied().unwrap_or(0.0))
}

fn read_inline_or_file(text: &str) -> anyhow::Result<String> {
    if let Some(path) = text.strip_prefix('@') {
        fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
    } else {
        Ok(text.to_string())
    }
}

impl FamilyArgs {
    fn build(&self) -> anyhow::Result<FactorFamily> {
        let text = read_inline_or_file(&self.family)?;
        if text.trim_start().starts_with('{') {
            let desc: FamilyDescription =
                serde_json::from_str(&text).context("invalid family JSON")?;
            return Ok(desc.build()?);
        }
        match text.as_str() {
            "geometric" => {
                if self.s.is_empty() {
                    bail!("geometric family requires --s");
                }
                Ok(FactorFamily::geometric(complex_from(&self.s), self.r0)?)
            }
            "power_law" => {
                let p = self.p.context("power_law family requires --p")?;
                Ok(FactorFamily::power_law(p, self.r0)?)
            }
            "explicit" => {
                let factors = self
                    .factors
                    .as_deref()
                    .context("explicit family requires --factors")?;
                let text = read_inline_or_file(factors)?;
                let coeffs: Vec<Vec<[f64; 2]>> =
                    serde_json::from_str(&text).context("invalid factors JSON")?;
                Ok(FamilyDescription::Explicit { factors: coeffs }.build()?)
            }
            other => {
                bail!("unknown family kind '{other}' (expected geometric, power_law or explicit)")
            }
        }
    }
}

#[derive(Serialize)]
struct CertifyDoc {
    alpha: f64,
    safe_radius: f64,
    cn: Vec<f64>,
    tail_formula: String,
}

#[derive(Serialize)]
struct EvalDoc {
    value: [f64; 2],
    error_bound: f64,
    #[serde(rename = "N_used")]
    n_used: u32,
    m1: u32,
}

#[derive(Serialize)]
struct SeriesDoc {
    degree: usize,
    coefficients: Vec<[f64; 2]>,
    #[serde(rename = "N_used")]
    n_used: u32,
    last_movement: f64,
    epsilon: f64,
}

#[derive(Serialize)]
struct PoincareDoc {
    value: [f64; 2],
    error_bound: f64,
    #[serde(rename = "N_used")]
    n_used: u32,
    m1: u32,
    k: u32,
}

#[derive(Serialize)]
struct VerifyDoc {
    all_passed: bool,
    criteria: Vec<verify::CriterionReport>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum GridRow {
    Value {
        re: f64,
        im: f64,
        f_re: f64,
        f_im: f64,
        error_bound: f64,
    },
    Overflow {
        re: f64,
        im: f64,
        overflow: bool,
    },
}

#[derive(Serialize)]
struct GridDoc {
    steps: u32,
    rows: Vec<GridRow>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let is_help = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            std::process::exit(if is_help { 0 } else { 1 });
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(exit_code(&err));
        }
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<infcomp::Error>() {
        Some(infcomp::Error::DivergentFamily(_)) => 2,
        Some(infcomp::Error::BudgetExceeded(_)) | Some(infcomp::Error::Overflow(_)) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Certify { family, out } => {
            let family = family.build()?;
            let cert = family.certify()?;
            let doc = CertifyDoc {
                alpha: cert.alpha(),
                safe_radius: cert.safe_radius(),
                cn: (1..=20).map(|n| cert.cn(n)).collect(),
                tail_formula: tail_formula(&family),
            };
            emit_json(&out, &doc)?;
            Ok(0)
        }
        Command::Eval {
            family,
            z,
            epsilon,
            out,
        } => {
            let family = family.build()?;
            let res = composer::eval_certified(&family, complex_from(&z), epsilon)?;
            let doc = EvalDoc {
                value: [res.value.re, res.value.im],
                error_bound: res.error_bound,
                n_used: res.plan.last_factor,
                m1: res.plan.tail_start,
            };
            emit_json(&out, &doc)?;
            Ok(0)
        }
        Command::Series {
            family,
            degree,
            epsilon,
            out,
        } => {
            let family = family.build()?;
            let report =
                composer::limit_series_with_report(&family, degree, epsilon, DEFAULT_MAX_FACTORS)?;
            let doc = SeriesDoc {
                degree,
                coefficients: report
                    .series
                    .coeffs()
                    .iter()
                    .map(|c| [c.re, c.im])
                    .collect(),
                n_used: report.last_factor,
                last_movement: report.last_movement,
                epsilon,
            };
            emit_json(&out, &doc)?;
            Ok(0)
        }
        Command::Poincare {
            s,
            z,
            epsilon,
            base_radius,
            out,
        } => {
            let s = complex_from(&s);
            let spec = match base_radius {
                Some(r) => PoincareSpec::with_base_radius(s, r)?,
                None => PoincareSpec::new(s)?,
            };
            let res = spec.eval(complex_from(&z), epsilon)?;
            let doc = PoincareDoc {
                value: [res.value.re, res.value.im],
                error_bound: res.error_bound,
                n_used: res.plan.last_factor,
                m1: res.plan.tail_start,
                k: res.depth,
            };
            emit_json(&out, &doc)?;
            Ok(0)
        }
        Command::Verify { out } => {
            let criteria = verify::run_all();
            let all_passed = criteria.iter().all(|c| c.passed);
            match out.format.unwrap_or(Format::Json) {
                Format::Json => emit_json_forced(&out.output, &VerifyDoc { all_passed, criteria })?,
                Format::Csv => {
                    let mut text = String::from("name,passed,max_residual,tolerance\n");
                    for c in &criteria {
                        text.push_str(&format!(
                            "{},{},{:?},{:?}\n",
                            c.name, c.passed, c.max_residual, c.tolerance
                        ));
                    }
                    write_output(&out.output, &text)?;
                }
            }
            Ok(if all_passed { 0 } else { 1 })
        }
        Command::Grid {
            family,
            re_min,
            re_max,
            im_min,
            im_max,
            steps,
            epsilon,
            out,
        } => {
            if steps < 2 {
                bail!("grid requires at least 2 steps per axis");
            }
            if re_min > re_max || im_min > im_max {
                bail!("grid bounds must satisfy re_min <= re_max and im_min <= im_max");
            }
            let family = family.build()?;
            let cert = family.certify()?;
            let n = steps as usize;
            let coord = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
            // row order is (im index, re index); evaluation may run in
            // parallel but the collected order is fixed
            let cells: Vec<(usize, usize)> = (0..n)
                .flat_map(|j| (0..n).map(move |i| (j, i)))
                .collect();
            let rows = cells
                .par_iter()
                .map(|&(j, i)| {
                    let z = Complex64::new(coord(re_min, re_max, i), coord(im_min, im_max, j));
                    match composer::eval_certified_with(
                        &family,
                        &cert,
                        z,
                        epsilon,
                        DEFAULT_MAX_FACTORS,
                    ) {
                        Ok(res) => Ok(GridRow::Value {
                            re: z.re,
                            im: z.im,
                            f_re: res.value.re,
                            f_im: res.value.im,
                            error_bound: res.error_bound,
                        }),
                        Err(infcomp::Error::Overflow(_)) => Ok(GridRow::Overflow {
                            re: z.re,
                            im: z.im,
                            overflow: true,
                        }),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            match out.format.unwrap_or(Format::Csv) {
                Format::Json => emit_json_forced(&out.output, &GridDoc { steps, rows })?,
                Format::Csv => {
                    let mut text = String::from("re,im,f_re,f_im,error_bound\n");
                    for row in &rows {
                        match row {
                            GridRow::Value {
                                re,
                                im,
                                f_re,
                                f_im,
                                error_bound,
                            } => text.push_str(&format!(
                                "{re:?},{im:?},{f_re:?},{f_im:?},{error_bound:?}\n"
                            )),
                            GridRow::Overflow { re, im, .. } => text
                                .push_str(&format!("{re:?},{im:?},overflow,overflow,overflow\n")),
                        }
                    }
                    write_output(&out.output, &text)?;
                }
            }
            Ok(0)
        }
    }
}

fn tail_formula(family: &FactorFamily) -> String {
    match family {
        FactorFamily::Explicit { factors } => format!(
            "alpha_m = sum of C_n for n >= m; zero beyond {} factors",
            factors.len()
        ),
        FactorFamily::Geometric { s, exponent } => format!(
            "alpha_m = beta^(1-m)/(beta-1), beta = |s|^(1/(r0-1)) = {:?}",
            s.norm().powf(1.0 / (*exponent as f64 - 1.0))
        ),
        FactorFamily::PowerLaw { p, exponent } => format!(
            "alpha_m <= m^(-q) + m^(1-q)/(q-1), q = p/(r0-1) = {:?}",
            p / (*exponent as f64 - 1.0)
        ),
    }
}

/// JSON-only commands reject a csv format request.
fn emit_json<T: Serialize>(out: &OutputArgs, doc: &T) -> anyhow::Result<()> {
    if out.format == Some(Format::Csv) {
        bail!("csv format is only available for the grid and verify commands");
    }
    emit_json_forced(&out.output, doc)
}

fn emit_json_forced<T: Serialize>(output: &str, doc: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string(doc)?;
    text.push('\n');
    write_output(output, &text)
}

fn write_output(output: &str, text: &str) -> anyhow::Result<()> {
    if output == "-" {
        std::io::stdout()
            .write_all(text.as_bytes())
            .context("cannot write to standard output")?;
    } else {
        fs::write(output, text).with_context(|| format!("cannot write {output}"))?;
    }
    Ok(())
}
