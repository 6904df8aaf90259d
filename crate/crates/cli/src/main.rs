use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use p2mu_cli::{
    parse_complex, resolve_output, run_experiment, write_outputs, CliError, Experiment, ExperimentConfig, GridSpec,
    OUT_DIR_ENV,
};
use p2mu_core::C64;

#[derive(Parser)]
#[command(name = "p2mu", version, about = "Cauchy transforms, Plemelj jumps and P2(mu) experiments")]
struct Cli {
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Default output directory when --out is not given.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Out {
    /// Report path (`.json`), or `.csv` for the primary table of a map or scan.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Cauchy transforms.
    #[command(subcommand)]
    Cauchy(CauchyCmd),
    /// Point evaluations and invariant subspaces of P2(mu).
    #[command(subcommand)]
    P2(P2Cmd),
    /// The sigma + A_alpha counterexample.
    #[command(subcommand)]
    Hz(HzCmd),
    /// Randomized 3r-covering check.
    CoveringTest {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 200)]
        disks: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Lens harmonic measure.
    #[command(subcommand)]
    Lens(LensCmd),
    /// Stolz-region membership and tangent reflection.
    Stolz {
        /// Boundary point angle in radians.
        #[arg(long, allow_hyphen_values = true)]
        zeta: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        delta: Option<f64>,
        /// Query point RE,IM; repeatable.
        #[arg(long = "point", value_parser = parse_complex, allow_hyphen_values = true)]
        points: Vec<C64>,
        #[command(flatten)]
        out: Out,
    },
    /// Run an experiment from a JSON configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum CauchyCmd {
    /// Principal value (or truncated transform with --eps) at points.
    Eval {
        #[arg(long)]
        measure: PathBuf,
        /// Evaluation point RE,IM; repeatable.
        #[arg(long, required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Vec<C64>,
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        out: Out,
    },
    /// One-sided limits and jump at a boundary point.
    Scan {
        #[arg(long)]
        measure: PathBuf,
        /// Boundary point angle in radians.
        #[arg(long, allow_hyphen_values = true)]
        zeta: f64,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-3, 1e-4])]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum P2Cmd {
    /// k_n over a grid for n = nmax/4, nmax/2, nmax.
    BpeMap {
        #[arg(long)]
        measure: PathBuf,
        /// xmin,xmax,nx,ymin,ymax,ny
        #[arg(long, value_parser = GridSpec::parse, allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long, default_value_t = 40)]
        nmax: usize,
        #[command(flatten)]
        out: Out,
    },
    /// dim(M_n ⊖ z M_(n-1)) for M = {p : p(a) = 0}.
    Wandering {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: C64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        svtol: f64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum HzCmd {
    /// All residual families and generation checks.
    Verify {
        #[arg(long, default_value = "0.9", value_parser = parse_complex, allow_hyphen_values = true)]
        a: C64,
        #[arg(long, default_value_t = 5)]
        alpha: u32,
        #[arg(long, default_value_t = 0.3)]
        c: f64,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 20, 40])]
        distance_ns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [10, 20, 30])]
        wandering_ns: Vec<usize>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum LensCmd {
    /// Harmonic measure at the origin as a measure spec with density samples.
    Export {
        #[arg(long = "lens-c", default_value_t = 0.3)]
        c: f64,
        #[arg(long, default_value_t = 33)]
        samples: usize,
        #[command(flatten)]
        out: Out,
    },
}

fn config(command: Command) -> Result<ExperimentConfig, CliError> {
    let with = |experiment, out: Out| ExperimentConfig {
        output_path: out.out,
        ..ExperimentConfig::new(experiment)
    };
    Ok(match command {
        Command::Cauchy(CauchyCmd::Eval { measure, z, eps, out }) => with(
            Experiment::CauchyEval {
                measure_path: measure,
                z,
                eps,
            },
            out,
        ),
        Command::Cauchy(CauchyCmd::Scan {
            measure,
            zeta,
            r,
            deltas,
            tol,
            out,
        }) => with(
            Experiment::PlemeljScan {
                measure_path: measure,
                zeta,
                r,
                deltas,
                tol,
            },
            out,
        ),
        Command::P2(P2Cmd::BpeMap { measure, grid, nmax, out }) => with(
            Experiment::BpeMap {
                measure_path: measure,
                grid,
                nmax,
            },
            out,
        ),
        Command::P2(P2Cmd::Wandering {
            measure,
            a,
            n,
            svtol,
            out,
        }) => with(
            Experiment::P2Wandering {
                measure_path: measure,
                a,
                n,
                svtol,
            },
            out,
        ),
        Command::Hz(HzCmd::Verify {
            a,
            alpha,
            c,
            n,
            tol,
            distance_ns,
            wandering_ns,
            out,
        }) => with(
            Experiment::HzVerify {
                a,
                alpha,
                c,
                n,
                tol,
                distance_ns,
                wandering_ns,
            },
            out,
        ),
        Command::CoveringTest {
            instances,
            disks,
            samples,
            seed,
            out,
        } => ExperimentConfig {
            seed,
            ..with(
                Experiment::CoveringTest {
                    instances,
                    disks,
                    samples_per_disk: samples,
                },
                out,
            )
        },
        Command::Lens(LensCmd::Export { c, samples, out }) => with(
            Experiment::LensExport {
                c,
                samples_per_side: samples,
            },
            out,
        ),
        Command::Stolz {
            zeta,
            r,
            delta,
            points,
            out,
        } => with(Experiment::Stolz { zeta, r, delta, points }, out),
        Command::Run { config, out } => {
            let text = std::fs::read_to_string(&config).map_err(|source| CliError::Io { path: config, source })?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if out.out.is_some() {
                cfg.output_path = out.out;
            }
            cfg
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<bool, CliError> {
        let mut cfg = config(cli.command)?;
        cfg.timing |= cli.timing;
        let report = run_experiment(&cfg)?;
        match resolve_output(&cfg, cli.out_dir.clone()) {
            Some(path) => {
                for p in write_outputs(&report, &path)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            None => print!("{}", report.to_json()),
        }
        for c in &report.checks {
            eprintln!(
                "{} {} (value {:e}, tolerance {:e}; {})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.tolerance,
                c.oracle
            );
        }
        Ok(report.pass)
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
