//! Command-line front door: run verification suites, single sweeps, and
//! operator evaluations. Exit codes: 0 all checks pass, 1 check failure,
//! 2 usage or configuration error.

use clap::{Args, Parser, Subcommand};
use fraclab::backend::Backend;
use fraclab::config::RunConfig;
use fraclab::error::FraclabError;
use fraclab::fields::{io, sample, Grid, ScalarField, TestFunction, VectorField};
use fraclab::norms::lp_norm_vec;
use fraclab::quadrature::{self, QuadratureConfig};
use fraclab::verify::suite::{run_suite, write_reports, Suite};
use fraclab::verify::{limits, ConvergenceReport};
use fraclab::Result;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fraclab", version, about = "fractional operator laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write CSV reports.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Optional key=value config file over the frozen defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory override.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one parameter sweep and write a report CSV plus a .dat file.
    Sweep {
        /// One of: nabla-vs-riesz, nabla-vs-grad, energy,
        /// laplacian-identity, alpha-continuity, tail-scaling.
        op: String,
        #[command(flatten)]
        field: FieldArgs,
        /// Sweep parameter list (orders, or radii for tail-scaling).
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Base order for alpha-continuity and tail-scaling.
        #[arg(long)]
        alpha0: Option<f64>,
        #[arg(long, default_value = "spectral")]
        backend: String,
        #[arg(long, default_value = "fraclab-out")]
        out: PathBuf,
    },
    /// Evaluate one operator on a sampled field and write the result.
    Eval {
        /// One of: nabla, div, laplacian, riesz, potential, dee, tail-op.
        op: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Cutoff radius for tail-op.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value = "spectral")]
        backend: String,
        #[arg(long, default_value = "field-out.csv")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field spec: gaussian[:sigma], odd-gaussian,
    /// gaussian-derivative[:sigma], gaussian-dilated:lambda,
    /// annulus:ximin,ximax, indicator:a,b, eta:R, besov:alpha.
    #[arg(long, default_value = "gaussian")]
    field: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

impl FieldArgs {
    fn grid(&self) -> Result<Grid> {
        let l = self
            .half_width
            .unwrap_or(if self.n == 2 { 6.0 } else { 12.0 });
        let nn = self.points.unwrap_or(if self.n == 2 { 96 } else { 1024 });
        Grid::new(self.n, l, nn)
    }

    fn sample(&self) -> Result<ScalarField> {
        let grid = self.grid()?;
        let (name, params) = match self.field.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (self.field.as_str(), None),
        };
        let nums: Vec<f64> = match params {
            Some(p) => p
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| FraclabError::Parse(format!("bad field parameter: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?,
            None => Vec::new(),
        };
        let get = |i: usize, default: f64| nums.get(i).copied().unwrap_or(default);
        match name {
            "gaussian" => sample(&TestFunction::Gaussian { sigma: get(0, 1.0) }, &grid),
            "gaussian-derivative" => sample(
                &TestFunction::GaussianDerivative { sigma: get(0, 1.0) },
                &grid,
            ),
            "odd-gaussian" => Ok(sample(
                &TestFunction::GaussianDerivative { sigma: get(0, 1.0) },
                &grid,
            )?
            .scale(-0.5)),
            "gaussian-dilated" => sample(
                &TestFunction::GaussianDilated { lambda: get(0, 2.0) },
                &grid,
            ),
            "annulus" => sample(
                &TestFunction::AnnulusSpectrum {
                    xi_min: get(0, 0.5),
                    xi_max: get(1, 1.5),
                },
                &grid,
            ),
            "indicator" => sample(
                &TestFunction::IndicatorInterval {
                    a: get(0, 0.0),
                    b: get(1, 1.0),
                },
                &grid,
            ),
            "eta" => sample(&TestFunction::CutoffEta { radius: get(0, 1.0) }, &grid),
            "besov" => sample(
                &TestFunction::BesovCounterexample { alpha: get(0, 0.5) },
                &grid,
            ),
            other => Err(FraclabError::Parse(format!("unknown field `{other}`"))),
        }
    }
}

fn parse_backend(name: &str) -> Result<Backend> {
    match name {
        "spectral" => Ok(Backend::Spectral { pad: 4 }),
        "quadrature" => Ok(Backend::Quadrature(QuadratureConfig::default())),
        other => Err(FraclabError::Config(format!("unknown backend `{other}`"))),
    }
}

fn write_sweep_outputs(report: &ConvergenceReport, op: &str, out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    write_reports(&[report.clone().into()], out)?;
    let dat = out.join(format!("{op}.dat"));
    let mut body = String::new();
    for row in &report.rows {
        body.push_str(&format!(
            "{} {}\n",
            io::format_f64(row.param),
            io::format_f64(row.value)
        ));
    }
    std::fs::write(dat, body)?;
    Ok(())
}

fn cmd_verify(suite: &str, config: Option<&Path>, out: Option<&Path>) -> Result<bool> {
    let suite = Suite::parse(suite)?;
    let cfg = match config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    let out_dir = out.map(Path::to_path_buf).unwrap_or(cfg.output_dir.clone());
    let records = run_suite(suite, &cfg)?;
    let (passed, total) = write_reports(&records, &out_dir)?;
    for rec in &records {
        println!("{}: {}", rec.check_id, rec.verdict.as_str());
    }
    println!("SUITE,{passed}/{total}");
    Ok(passed == total)
}

fn cmd_sweep(
    op: &str,
    field: &FieldArgs,
    alphas: &[f64],
    p: f64,
    alpha0: Option<f64>,
    backend: &str,
    out: &Path,
) -> Result<bool> {
    if alphas.is_empty() {
        return Err(FraclabError::Config("empty sweep parameter list".into()));
    }
    let f = field.sample()?;
    let backend = parse_backend(backend)?;
    let mut desc = alphas.to_vec();
    desc.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut asc = alphas.to_vec();
    asc.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let report = match op {
        "nabla-vs-riesz" => limits::sweep_limit_zero(&f, p, &desc, &backend, 0.05)?,
        "nabla-vs-grad" => limits::sweep_limit_one(&f, p, &asc, &backend, 0.02)?,
        "energy" => limits::energy_limit(&f, &desc, &backend, 0.05)?,
        "laplacian-identity" => limits::laplacian_identity_sweep(&f, p, &desc, &backend, 0.03)?,
        "alpha-continuity" => {
            let a0 = alpha0
                .ok_or_else(|| FraclabError::Config("alpha-continuity needs --alpha0".into()))?;
            limits::alpha_continuity_sweep(&f, p, a0, &desc, &backend, 0.01)?
        }
        "tail-scaling" => {
            let beta = alpha0.ok_or_else(|| {
                FraclabError::Config("tail-scaling needs --alpha0 as the order".into())
            })?;
            limits::tail_scaling_check(&f, beta, &asc, 0.05)?
        }
        other => return Err(FraclabError::Config(format!("unknown sweep op `{other}`"))),
    };
    write_sweep_outputs(&report, op, out)?;
    println!("{}: {}", report.check_id, report.verdict.as_str());
    Ok(report.verdict.passed())
}

fn write_vector(v: &VectorField, out: &Path) -> Result<()> {
    io::write_field(v.component(0), out)?;
    for axis in 1..v.dim() {
        let mut alt = out.to_path_buf();
        let stem = alt
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| "field".into());
        alt.set_file_name(format!("{stem}_c{axis}.csv"));
        io::write_field(v.component(axis), &alt)?;
    }
    Ok(())
}

fn cmd_eval(
    op: &str,
    field: &FieldArgs,
    alpha: f64,
    radius: Option<f64>,
    backend: &str,
    out: &Path,
) -> Result<()> {
    let f = field.sample()?;
    let backend = parse_backend(backend)?;
    match op {
        "nabla" => {
            let v = backend.nabla(&f, alpha)?;
            write_vector(&v, out)?;
        }
        "div" => {
            let phi = VectorField::from_scalar(f);
            let d = backend.div(&phi, alpha)?;
            io::write_field(&d, out)?;
        }
        "laplacian" => io::write_field(&backend.frac_laplacian(&f, alpha)?, out)?,
        "riesz" => {
            let v = backend.riesz(&f)?;
            write_vector(&v, out)?;
            let origin = quadrature::quad_riesz_at_origin(&f, &QuadratureConfig::default())?;
            println!("origin_value={}", io::format_f64(origin[0]));
        }
        "potential" => io::write_field(&backend.riesz_potential(&f, alpha)?, out)?,
        "dee" => io::write_field(
            &quadrature::quad_dee_alpha(&f, alpha, &QuadratureConfig::default())?,
            out,
        )?,
        "tail-op" => {
            let r =
                radius.ok_or_else(|| FraclabError::Config("tail-op needs --radius".into()))?;
            let v = quadrature::quad_tail_op(&f, alpha, r, &QuadratureConfig::default())?;
            write_vector(&v, out)?;
            println!("tail_l1={}", io::format_f64(lp_norm_vec(&v, 1.0)?));
        }
        other => return Err(FraclabError::Config(format!("unknown eval op `{other}`"))),
    }
    Ok(())
}

fn exit_code_for(e: &FraclabError) -> u8 {
    match e {
        FraclabError::Io(_) => 1,
        // Domain, hypothesis, config and parse problems are usage errors.
        _ => 2,
    }
}

fn main() -> ExitCode {
    if let Ok(raw) = std::env::var("FRACLAB_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("FRACLAB_THREADS must be a positive integer, got `{raw}`");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify { suite, config, out } => {
            cmd_verify(suite, config.as_deref(), out.as_deref())
        }
        Command::Sweep {
            op,
            field,
            alphas,
            p,
            alpha0,
            backend,
            out,
        } => cmd_sweep(op, field, alphas, *p, *alpha0, backend, out),
        Command::Eval {
            op,
            field,
            alpha,
            radius,
            backend,
            out,
        } => cmd_eval(op, field, *alpha, *radius, backend, out).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
