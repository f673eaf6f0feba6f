use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use soestim_core::harness::{
    build_soe_design, simulate, vander_comparison_matrices, Figure, MatrixKind, ScenarioConfig,
};
use soestim_core::linalg::text::{read_matrix, read_vector, write_matrix, write_vector};
use soestim_core::recovery::omp;
use soestim_core::soe::{
    blocking_for, calibrate_mos_for_scheme, estimate_order, estimate_order_noiseless,
    extract_blocks, Overlap,
};
use soestim_core::vandermonde::{coherence_bounds, optimal_c};
use soestim_core::Error;

#[derive(Parser)]
#[command(name = "soestim", version, about = "Sparsity order estimation and sensing matrix design")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coherence bounds of the two-ring Vandermonde design, as `n,m,c,lower,achieved,upper`.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Ring radius in (0, 1]; defaults to the coherence-optimal value.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Writes a sensing matrix in the text matrix format.
    Design {
        #[arg(long = "signal-dim", short = 'N')]
        signal_dim: usize,
        #[arg(long)]
        m: usize,
        /// Block advance, or `none` for disjoint blocks.
        #[arg(long, default_value = "none")]
        p: String,
        /// gaussian_kr, vander_kr, gaussian_dense, vander_uniform, vander_grid or vander_alg1.
        #[arg(long, default_value = "auto")]
        kind: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimates the sparsity order of a measurement vector.
    Soe {
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long, default_value = "none")]
        p: String,
        /// Noise variance per complex sample. Without it the numerical rank is reported.
        #[arg(long)]
        variance: Option<f64>,
        #[arg(long, default_value_t = 0.005)]
        pfa: f64,
        #[arg(long, default_value_t = 2000)]
        mos_trials: usize,
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Runs OMP on a matrix and a measurement vector.
    Recover {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a Monte-Carlo sweep and writes its CSV table.
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=6))]
        figure: u32,
        /// Flat `key = value` file applied on top of the figure's defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; overrides SOESTIM_THREADS. 0 picks one per core.
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("soestim: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_overlap(p: &str) -> Result<Overlap, Error> {
    match p {
        "none" | "ell" => Ok(Overlap::Disjoint),
        v => v
            .parse()
            .map(Overlap::from_advance)
            .map_err(|_| Error::Config(format!("invalid block advance {v:?}"))),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Bounds { n, m, c } => {
            let c = match c {
                Some(c) => c,
                None => optimal_c(n, m)?,
            };
            println!("{}", coherence_bounds(n, m, c)?.csv_row());
        }
        Command::Design { signal_dim, m, p, kind, seed, out } => {
            let mut cfg = ScenarioConfig::preset(Figure::Soe);
            cfg.n = signal_dim;
            cfg.m = m;
            cfg.seed = seed;
            cfg.overlap = parse_overlap(&p)?;
            cfg.matrix_kind = match kind.as_str() {
                "auto" => None,
                k => Some(k.parse()?),
            };
            let matrix = match cfg.matrix_kind {
                None | Some(MatrixKind::GaussianKr) | Some(MatrixKind::VanderKr) => {
                    let d = build_soe_design(&cfg)?;
                    let s = d.scheme();
                    eprintln!("blocks: ell={}, p={}, k={}", s.ell(), s.p(), s.k());
                    d.into_matrix()
                }
                Some(other) => {
                    let [uniform, grid, alg1, gaussian] = vander_comparison_matrices(&cfg)?;
                    match other {
                        MatrixKind::VanderUniform => uniform,
                        MatrixKind::VanderGrid => grid,
                        MatrixKind::VanderAlg1 => alg1,
                        _ => gaussian,
                    }
                }
            };
            emit(&write_matrix(&matrix), out.as_deref())?;
        }
        Command::Soe { measurements, p, variance, pfa, mos_trials, rel_tol, seed } => {
            let b = read_vector(&fs::read_to_string(&measurements)?)?;
            let scheme = blocking_for(b.len(), parse_overlap(&p)?)?;
            let blocks = extract_blocks(&b, &scheme)?;
            let order = match variance {
                Some(v) => {
                    let cal = calibrate_mos_for_scheme(&scheme, v, pfa, mos_trials, seed)?;
                    estimate_order(&blocks, &cal)?
                }
                None => estimate_order_noiseless(&blocks, rel_tol)?,
            };
            println!("{order}");
        }
        Command::Recover { matrix, measurements, steps, out } => {
            let a = read_matrix(&fs::read_to_string(&matrix)?)?;
            let b = read_vector(&fs::read_to_string(&measurements)?)?;
            let result = omp(&a, &b, steps)?;
            eprintln!(
                "support {:?}, residual {:e}",
                result.estimate.support(),
                result.residual_norm
            );
            emit(&write_vector(&result.estimate.to_dense()), out.as_deref())?;
        }
        Command::Simulate { figure, config, out, threads } => {
            let figure = Figure::from_number(figure)?;
            let mut cfg = ScenarioConfig::preset(figure);
            if let Some(path) = config {
                let text = fs::read_to_string(&path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                cfg = cfg.apply_text(&text)?;
            }
            let output = simulate(figure, &cfg, threads)?;
            for note in &output.notes {
                eprintln!("{note}");
            }
            emit(&output.table.to_csv(), out.as_deref())?;
        }
    }
    Ok(())
}
