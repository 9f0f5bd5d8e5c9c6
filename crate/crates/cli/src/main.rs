//! `fracwave`: run, verify, fit and sweep from the command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

mod verify;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracwave::experiment::{
    fit_growth_column, parse_alpha_grid, parse_seed_range, run_experiment, run_sweep, theorem_exponent,
    ExperimentConfig, GrowthModel,
};
use fracwave::{Error, TrajectoryRecord};

#[derive(Parser, Debug)]
#[command(
    name = "fracwave",
    version,
    about = "Fractional NLS, half-wave and Szego experiments on the torus"
)]
struct Cli {
    /// Worker threads for ensembles and sweeps (0 = all cores).
    #[arg(long, global = true, env = "FRACWAVE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one config file and write its trajectory CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` in the config; stdout if neither is given.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check one inequality numerically and write a verdict CSV.
    Verify(verify::VerifyArgs),
    /// Fit growth exponents to the norm columns of a trajectory CSV.
    Fit(FitArgs),
    /// Run a base config over an alpha grid and a seed range, one CSV per cell.
    Sweep {
        /// `start:step:end`, inclusive.
        #[arg(long)]
        alpha: String,
        /// `a..b` (exclusive) or `a..=b`.
        #[arg(long, default_value = "0..1")]
        seeds: String,
        /// Output directory.
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
        /// Base config; the built-in default otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct FitArgs {
    csv: PathBuf,
    #[arg(long, default_value = "power")]
    model: String,
    /// Fit the `hs_<s>` column only.
    #[arg(long, conflicts_with = "column")]
    s: Option<f64>,
    #[arg(long)]
    column: Option<String>,
    /// With `--n`, report the polynomial bound exponent and the margin to it.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::Config { .. } | Error::Io(_) => 1,
        _ => 2,
    }
}

fn fit(args: &FitArgs) -> fracwave::Result<()> {
    let model: GrowthModel = args.model.parse()?;
    let record = TrajectoryRecord::read_csv(BufReader::new(File::open(&args.csv)?))?;
    let columns: Vec<String> = match (&args.column, args.s) {
        (Some(c), _) => vec![c.clone()],
        (None, Some(s)) => vec![format!("hs_{}", fracwave::record::format_param(s))],
        (None, None) => record.columns().iter().filter(|c| c.contains("hs_")).cloned().collect(),
    };
    if columns.is_empty() {
        return Err(Error::InvalidParameter("no hs_ columns to fit".into()));
    }
    // The bound is on the H^{alpha+n} norm, so only that column gets a margin.
    let bound = args
        .alpha
        .map(|a| {
            Ok::<_, Error>((
                format!("hs_{}", fracwave::record::format_param(a + args.n as f64)),
                theorem_exponent(a, args.n)?,
            ))
        })
        .transpose()?;
    let mut out = output(args.out.as_ref())?;
    writeln!(
        out,
        "column,model,exponent,intercept,residual,samples{}",
        if bound.is_some() { ",bound,margin" } else { "" }
    )?;
    for column in &columns {
        let f = fit_growth_column(&record, column, model)?;
        write!(
            out,
            "{},{},{:?},{:?},{:?},{}",
            f.column, f.model, f.exponent, f.intercept, f.residual, f.samples
        )?;
        match &bound {
            Some((col, a)) if model == GrowthModel::Power && col == column => {
                writeln!(out, ",{a:?},{:?}", a - f.exponent)?
            }
            Some(_) => writeln!(out, ",,")?,
            None => writeln!(out)?,
        }
    }
    if let Some(t) = record.truncated_at() {
        eprintln!("warning: record is truncated at t = {t:?}");
    }
    out.flush()?;
    Ok(())
}

fn dispatch(cli: Cli) -> fracwave::Result<()> {
    match cli.command {
        Command::Run { config, out, seed } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if out.is_some() {
                cfg.output = out;
            }
            let record = run_experiment(&cfg)?;
            if cfg.output.is_none() {
                let mut stdout = io::stdout().lock();
                record.write_csv(&mut stdout, &fracwave::experiment::csv_preamble(&cfg))?;
            }
            Ok(())
        }
        Command::Verify(args) => verify::run(&args),
        Command::Fit(args) => fit(&args),
        Command::Sweep {
            alpha,
            seeds,
            out,
            config,
        } => {
            let base = match config {
                Some(p) => ExperimentConfig::from_file(&p)?,
                None => ExperimentConfig::default(),
            };
            let cells = run_sweep(
                &base,
                &parse_alpha_grid(&alpha)?,
                &parse_seed_range(&seeds)?,
                &out,
                cli.threads,
            )?;
            for cell in &cells {
                match cell.truncated_at {
                    Some(t) => eprintln!("{} truncated at t = {t:?}", cell.path.display()),
                    None => eprintln!("{}", cell.path.display()),
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        // Fails only if the global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
