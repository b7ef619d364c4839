use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nptcert::harness::{
    example1_check, horodecki_sweep, open_question_scan, run_trials, seeded_rng, Theorem,
    TrialConfig,
};
use nptcert::io::{
    read_component, read_mixture, to_json_string, write_atomic, CertificateJson, ComponentJson,
    MixtureJson, StateJson,
};
use nptcert::ppt::{classify, scan_partitions, DEFAULT_TOL};
use nptcert::qstate::{
    haar_vector, sample_mixture, sample_product, sample_pure_schmidt_n, Bipartition, DimsSpec,
    PureState,
};
use nptcert::witness::certify;

/// Partial-transpose classification and NPT certificates.
///
/// Exit status: 0 on success, 1 when a check or verification fails, 2 on
/// usage errors and malformed input.
#[derive(Parser)]
#[command(name = "nptcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partial-transpose test of a state or density file.
    Classify {
        #[arg(long)]
        state: PathBuf,
        /// Transposed subsystems, 0-based and comma separated. Without it a
        /// bipartite input uses {0} and a multipartite input scans every cut.
        #[arg(long)]
        partition: Option<Indices>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Witness certificate for a mixture, with the spectral fallback.
    Witness {
        #[arg(long)]
        mixture: PathBuf,
        #[arg(long)]
        partition: Option<Indices>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Reproduces the 3x3 example that stays PPT.
    Example1 {
        #[command(flatten)]
        out: Output,
    },
    /// Classifies the one-parameter 3x3 family over a grid of alpha.
    Sweep {
        #[arg(long, default_value_t = 2.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 5.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 301)]
        steps: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Seeded verification campaign.
    Verify {
        #[arg(long, value_parser = parse_theorem)]
        theorem: Theorem,
        #[arg(long)]
        dims: Indices,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Counterexample scan at K = n(n-1)/2.
    ScanOpen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dims: Indices,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Writes a random state or mixture file.
    Sample {
        #[arg(value_enum)]
        kind: SampleKind,
        #[command(flatten)]
        opts: SampleOpts,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Pure,
    Product,
    Mixture,
}

#[derive(Args)]
struct SampleOpts {
    #[arg(long)]
    dims: Indices,
    /// Schmidt number across the partition (Haar-random state if omitted for `pure`).
    #[arg(long)]
    n: Option<usize>,
    /// Number of product states in a mixture.
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long)]
    partition: Option<Indices>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Output {
    /// Written atomically; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(p) => Ok(write_atomic(p, text)?),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Comma-separated list such as `3,3` or `0,2`.
#[derive(Clone, Debug)]
struct Indices(Vec<usize>);

impl std::str::FromStr for Indices {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(Indices)
    }
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|e: nptcert::Error| e.to_string())
}

/// Failed check: exit status 1. Everything else that goes wrong is 2.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn partition(dims: &DimsSpec, y: Option<&Indices>) -> anyhow::Result<Bipartition> {
    Ok(match y {
        Some(y) => Bipartition::new(dims.clone(), &y.0).context("--partition")?,
        None => Bipartition::first(dims.clone()),
    })
}

fn dims_arg(d: &Indices) -> anyhow::Result<DimsSpec> {
    DimsSpec::new(d.0.clone()).context("--dims")
}

fn in_file(path: &Path) -> impl Fn(nptcert::Error) -> anyhow::Error + '_ {
    move |e| anyhow!("{}: {e}", path.display())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Classify {
            state,
            partition: y,
            tol,
            out,
        } => {
            let component = read_component(&state)?;
            if let ComponentJson::State(s) = &component {
                let (_, renormalized) = s.to_state().map_err(in_file(&state))?;
                if renormalized {
                    eprintln!("warning: {}: amplitudes renormalized", state.display());
                }
            }
            let rho = component.to_density().map_err(in_file(&state))?;
            if y.is_none() && rho.dims().subsystems() > 2 {
                out.emit(&to_json_string(&scan_partitions(&rho, tol)?))
            } else {
                let part = partition(rho.dims(), y.as_ref())?;
                out.emit(&to_json_string(&classify(&rho, &part, tol)?))
            }
        }
        Command::Witness {
            mixture,
            partition: y,
            tol,
            out,
        } => {
            let spec = read_mixture(&mixture)?
                .to_spec()
                .map_err(in_file(&mixture))?;
            let part = partition(spec.dims(), y.as_ref())?;
            let verdict = certify(&spec, &part, tol).map_err(in_file(&mixture))?;
            out.emit(&to_json_string(&CertificateJson::from_certification(
                &verdict,
                part.y(),
                tol,
            )))
        }
        Command::Example1 { out } => {
            let report = example1_check().map_err(|e| Failed(e.to_string()))?;
            out.emit(&to_json_string(&report))
        }
        Command::Sweep {
            alpha_min,
            alpha_max,
            steps,
            out,
        } => {
            let sweep = horodecki_sweep(alpha_min, alpha_max, steps)?;
            if let Some(b) = sweep.boundary {
                eprintln!("sign change of the minimum eigenvalue at alpha = {b:.6}");
            }
            out.emit(&sweep.to_csv())
        }
        Command::Verify {
            theorem,
            dims,
            n,
            k,
            trials,
            seed,
            tol,
            out,
        } => {
            let mut cfg = TrialConfig::new(theorem, dims_arg(&dims)?, n, k, trials, seed);
            cfg.tolerance = tol;
            let summary = run_trials(&cfg)?;
            eprintln!(
                "{} of {} trials passed in {:.2?}",
                summary.passed, summary.total, summary.wall_time
            );
            out.emit(&to_json_string(&summary))?;
            if !summary.all_passed() {
                return Err(Failed(summary.verdict.clone()).into());
            }
            Ok(())
        }
        Command::ScanOpen {
            n,
            dims,
            trials,
            seed,
            out,
        } => {
            let report = open_question_scan(n, dims_arg(&dims)?, trials, seed)?;
            eprintln!(
                "{} counterexamples ({} candidates) in {} trials, {:.2?}",
                report.counterexample_count,
                report.candidates,
                report.summary.total,
                report.summary.wall_time
            );
            out.emit(&to_json_string(&report))?;
            // n = 2 is settled; a counterexample there is a bug, not a finding
            if n == 2 && report.counterexample_count > 0 {
                return Err(Failed("counterexample found at n = 2".into()).into());
            }
            Ok(())
        }
        Command::Sample { kind, opts, out } => {
            let dims = dims_arg(&opts.dims)?;
            let part = partition(&dims, opts.partition.as_ref())?;
            let mut rng = seeded_rng(opts.seed);
            let text = match kind {
                SampleKind::Pure => {
                    let psi = match opts.n {
                        Some(n) => sample_pure_schmidt_n(n, &part, &mut rng).context("--n")?,
                        None => PureState::new(haar_vector(dims.total(), &mut rng), dims)?,
                    };
                    to_json_string(&StateJson::from_state(&psi))
                }
                SampleKind::Product => {
                    to_json_string(&StateJson::from_state(&sample_product(&part, &mut rng)))
                }
                SampleKind::Mixture => {
                    let n = opts
                        .n
                        .ok_or_else(|| anyhow!("--n is required for a mixture"))?;
                    let spec = sample_mixture(n, opts.k, &part, &mut rng).context("--n/--k")?;
                    to_json_string(&MixtureJson::from_spec(&spec))
                }
            };
            out.emit(&text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli);
    eprintln!("wall time {:.2?}", start.elapsed());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Failed>() => {
            eprintln!("check failed: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
