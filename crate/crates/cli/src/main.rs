use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mpr_core::estimator::MomentReport;
use mpr_core::harness::{report_assumptions, report_scaling, run_sweep, ExperimentConfig, SignalFamily};
use mpr_core::model::{generate, make_signal, Distribution, LinkFunction, MeasurementSet, SignalSpec};
use mpr_core::solver::{
    estimate_gaussian_width, recover, recover_k_pca, ProjectionOracle, SdpConfig, Segment, Singleton,
    SparseSpectrahedron, Spectrahedron,
};
use mpr_core::SymMatrix;
use serde_json::json;

#[derive(Parser)]
#[command(name = "mpr", version, about = "Sparse phase retrieval under an unknown link function")]
struct Cli {
    /// Base seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output path; stdout when omitted (a directory for `generate`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a signal and measurements and write them to disk.
    Generate(GenerateArgs),
    /// Recover one instance and print the JSON report.
    Recover(RecoverArgs),
    /// Run a sweep from a JSON config and write the per-trial CSV.
    Sweep(SweepArgs),
    /// Print the moment functionals of a link as JSON.
    Moments(ModelArgs),
    /// Check the correlation assumptions; exits 1 unless μ > 0 holds.
    Check(ModelArgs),
    /// Monte-Carlo Gaussian width of a named constraint set.
    Width(WidthArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// quadratic, abs, onebit[:τ] or noisy:σ.
    #[arg(long, default_value = "quadratic")]
    link: String,
    /// gaussian, rademacher or uniform.
    #[arg(long, default_value = "gaussian")]
    dist: String,
    /// Support size.
    #[arg(long, default_value_t = 4)]
    s: usize,
}

impl ModelArgs {
    fn parse(&self) -> Result<(LinkFunction, Distribution)> {
        Ok((self.link.parse()?, Distribution::parse(&self.dist)?))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalArg {
    Admissible,
    SparseGaussian,
    Dense,
}

impl From<SignalArg> for SignalFamily {
    fn from(s: SignalArg) -> Self {
        match s {
            SignalArg::Admissible => SignalFamily::RandomAdmissible,
            SignalArg::SparseGaussian => SignalFamily::SparseGaussian,
            SignalArg::Dense => SignalFamily::DenseUnit,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value = "admissible")]
    signal: SignalArg,
    /// File name prefix inside the output directory.
    #[arg(long, default_value = "measurements")]
    stem: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    /// ADMM on the sparse-PCA relaxation.
    Sdp,
    /// Projected gradient through the sparse-spectrahedron oracle.
    Kpca,
}

#[derive(Args)]
struct RecoverArgs {
    /// Directory written by `generate`.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "measurements")]
    stem: String,
    /// ℓ1 radius; defaults to the support size of the stored truth.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, value_enum, default_value = "sdp")]
    solver: SolverArg,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Drop the solution matrix from the report.
    #[arg(long)]
    brief: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    /// `{I/n}`; width 0.
    Singleton,
    /// Segment between `e₁e₁ᵀ` and `e₂e₂ᵀ`.
    Segment,
    /// `{X ⪰ 0, Tr X = 1}`.
    Spectrahedron,
    /// Spectrahedron intersected with `‖X‖₁ ≤ radius`.
    Sparse,
}

#[derive(Args)]
struct WidthArgs {
    #[arg(long, value_enum)]
    set: SetArg,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// ℓ1 radius for `sparse`.
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match &cli.command {
        Command::Generate(a) => cmd_generate(cli, a).map(|_| 0),
        Command::Recover(a) => cmd_recover(cli, a).map(|_| 0),
        Command::Sweep(a) => cmd_sweep(cli, a).map(|_| 0),
        Command::Moments(a) => cmd_moments(cli, a).map(|_| 0),
        Command::Check(a) => cmd_check(cli, a),
        Command::Width(a) => cmd_width(cli, a).map(|_| 0),
    }
}

fn emit_json(out: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn cmd_generate(cli: &Cli, a: &GenerateArgs) -> Result<()> {
    let (link, dist) = a.model.parse()?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let spec = SignalSpec {
        dim: a.n,
        kind: SignalFamily::from(a.signal).kind(a.model.s),
    };
    let x_star = make_signal(&spec, cli.seed)?;
    let data = generate(&x_star, &dist, &link, a.m, cli.seed)?;
    data.write(&dir, &a.stem)?;
    eprintln!("wrote {} measurements of dimension {} to {}", a.m, a.n, dir.display());
    Ok(())
}

fn cmd_recover(cli: &Cli, a: &RecoverArgs) -> Result<()> {
    let data = MeasurementSet::read(&a.data, &a.stem)
        .with_context(|| format!("reading '{}' from {}", a.stem, a.data.display()))?;
    let truth = data.meta.x_star.clone();
    let radius = match (a.radius, &truth) {
        (Some(r), _) => r,
        (None, Some(t)) => t.support().len() as f64,
        (None, None) => bail!("no stored truth to size the ℓ1 radius; pass --radius"),
    };
    let mut cfg = SdpConfig::new(radius);
    cfg.max_iters = a.max_iters;
    let report = match a.solver {
        SolverArg::Sdp => recover(&data, &cfg, truth.as_ref())?,
        SolverArg::Kpca => recover_k_pca(&data, &SparseSpectrahedron::new(radius)?, &cfg, truth.as_ref())?,
    };
    let mut value = serde_json::to_value(&report)?;
    if a.brief {
        if let Some(obj) = value.as_object_mut() {
            obj.remove("x_hat_matrix");
        }
    }
    emit_json(cli.out.as_deref(), &value)
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&a.config).with_context(|| format!("loading {}", a.config.display()))?;
    if cli.seed != 0 {
        cfg.base_seed = cli.seed;
    }
    if let Some(out) = &cli.out {
        cfg.output.csv = Some(out.clone());
    }
    let result = run_sweep(&cfg)?;
    match &cfg.output.csv {
        Some(path) => result.save_csv(path)?,
        None => result.write_csv(io::stdout().lock())?,
    }
    let failures = result.rows.iter().filter(|r| r.failure.is_some()).count();
    if failures > 0 {
        eprintln!("{failures} of {} trials failed; see the failure column", result.rows.len());
    }
    if let Some(path) = &cfg.output.summary {
        let scaling = match report_scaling(&result) {
            Ok(fits) => json!(fits),
            Err(e) => json!({ "error": e.to_string() }),
        };
        let s = cfg.s.iter().copied().min().unwrap_or(1);
        let assumptions = report_assumptions(&cfg.link, &cfg.distribution, s, cfg.base_seed)?;
        emit_json(
            Some(path),
            &json!({ "scaling": scaling, "assumptions": assumptions, "failures": failures }),
        )?;
    }
    Ok(())
}

fn cmd_moments(cli: &Cli, a: &ModelArgs) -> Result<()> {
    let (link, dist) = a.parse()?;
    let report: MomentReport = mpr_core::harness::moments_auto(&link, &dist, a.s, cli.seed)?;
    emit_json(cli.out.as_deref(), &report)
}

fn cmd_check(cli: &Cli, a: &ModelArgs) -> Result<u8> {
    let (link, dist) = a.parse()?;
    let report = report_assumptions(&link, &dist, a.s, cli.seed)?;
    emit_json(cli.out.as_deref(), &report)?;
    let v = &report.verdict.mu_positive;
    eprintln!(
        "mu = {:.6} ({})",
        v.estimate,
        if v.holds { "positive" } else { "not established" }
    );
    Ok(report.exit_code() as u8)
}

fn basis_projector(n: usize, i: usize) -> SymMatrix {
    SymMatrix::from_upper_fn(n, |r, c| if r == i && c == i { 1.0 } else { 0.0 })
}

fn cmd_width(cli: &Cli, a: &WidthArgs) -> Result<()> {
    if a.n < 2 {
        bail!("width needs n ≥ 2");
    }
    let barycenter = SymMatrix::identity(a.n).scaled(1.0 / a.n as f64);
    let (oracle, reference, radius): (Box<dyn ProjectionOracle>, SymMatrix, f64) = match a.set {
        SetArg::Singleton => (Box::new(Singleton(barycenter.clone())), barycenter, 1.0),
        SetArg::Segment => {
            let p = basis_projector(a.n, 0);
            (Box::new(Segment::new(p.clone(), basis_projector(a.n, 1))?), p, 1.0)
        }
        SetArg::Spectrahedron => (Box::new(Spectrahedron), barycenter, 1.0),
        SetArg::Sparse => (Box::new(SparseSpectrahedron::new(a.radius)?), barycenter, a.radius),
    };
    let est = estimate_gaussian_width(oracle.as_ref(), &reference, a.samples, cli.seed, &SdpConfig::new(radius))?;
    emit_json(
        cli.out.as_deref(),
        &json!({ "set": oracle.name(), "n": a.n, "width": est }),
    )
}
