//! `ldseds`: sample generators, dispersion reports, experiments and rank
//! tables from the command line.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ldseds_core::harness::{
    dispersion_report, load_config, load_results, read_summary, run_experiment, write_summary, SamplerSpec,
    ToleranceReport, SUMMARY_FILE,
};
use ldseds_core::lds::{write_points, Generator, GeneratorId};
use ldseds_core::stream::{build_stream_combined, build_stream_direct, build_stream_random, Construction, SwarmMode};
use ldseds_core::Error;

#[derive(Parser)]
#[command(name = "ldseds", version, about = "Low-discrepancy sampling in the expanded dimensional space for PSO/CLPSO")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pso,
    Clpso,
}

impl From<Mode> for SwarmMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Pso => SwarmMode::Pso,
            Mode::Clpso => SwarmMode::Clpso,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print a point set, or one block of an expanded-dimensional stream.
    Sample {
        #[arg(long, default_value = "halton")]
        generator: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        start_index: Option<u64>,
        /// random, direct or combined; prints a stream block instead of the set.
        #[arg(long)]
        construction: Option<String>,
        #[arg(long, default_value_t = 1)]
        horizon: usize,
        #[arg(long, value_enum, default_value = "pso")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        block: usize,
        #[arg(long, default_value_t = 0)]
        permutation_seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo dispersion of flattened expanded-dimensional sets.
    Dispersion {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        horizon: usize,
        #[arg(long, value_enum, default_value = "pso")]
        mode: Mode,
        /// Comma-separated samplers: random, direct:<generator>, combined:<generator>.
        #[arg(long, default_value = "random,direct:halton,combined:scrambled_halton")]
        samplers: String,
        #[arg(long, default_value_t = 100_000)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add cube vertices and local ascent to the probes.
        #[arg(long)]
        refine: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run an experiment from a TOML config, then summarize it.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        tol: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Summarize a results directory into CS rank tables and test reports.
    Rank {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',')]
        tol: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Render the stored summary of a results directory.
    Report {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Exit status: 1 for unusable input, 2 for runtime failures.
enum Failure {
    Input(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse { .. } | Error::InvalidArgument(_) => Failure::Input(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn parse_sampler(text: &str) -> Result<SamplerSpec, Failure> {
    let (kind, generator) = match text.split_once(':') {
        Some((k, g)) => (k, Some(g.parse::<GeneratorId>()?)),
        None => (text, None),
    };
    let construction = match kind {
        "random" | "rand" => Construction::Random,
        "direct" | "ldseds1" => Construction::DirectLds,
        "combined" | "ldseds2" => Construction::CombinedLds,
        other => return Err(Failure::Input(format!("unknown construction '{other}'"))),
    };
    Ok(SamplerSpec { construction, generator, start_index: None, seed_set_path: None })
}

fn output(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(
            std::fs::File::create(p).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn summarize_dir(dir: &Path, tolerances: &[f64], alpha: f64) -> Result<Vec<ToleranceReport>, Failure> {
    let results = load_results(dir)?;
    let reports = tolerances
        .iter()
        .map(|&t| ToleranceReport::build(&results, t, alpha))
        .collect::<Result<Vec<_>, _>>()?;
    write_summary(dir.join(SUMMARY_FILE), &reports)?;
    Ok(reports)
}

fn render(reports: &[ToleranceReport], format: Format) -> String {
    match format {
        Format::Text => reports.iter().map(|r| r.render_text()).collect::<Vec<_>>().join("\n"),
        Format::Csv => reports
            .iter()
            .map(|r| format!("# eps_tol={}\n{}", r.summary.tolerance, r.summary.table.render_csv(r.report.as_ref())))
            .collect::<Vec<_>>()
            .join(""),
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Sample { generator, n, d, seed, start_index, construction, horizon, mode, block, permutation_seed, out } => {
            let id: GeneratorId = generator.parse()?;
            let mut generator = Generator::new(id, seed);
            if let Some(s) = start_index {
                generator = generator.with_start_index(s);
            }
            let points = match construction.as_deref() {
                None => generator.generate(n, d)?.into_points(),
                Some(kind) => {
                    let mode = mode.into();
                    let stream = match parse_sampler(kind)?.construction {
                        Construction::Random => build_stream_random(n, d, horizon, mode, seed),
                        Construction::DirectLds => build_stream_direct(generator, n, d, horizon, mode)?,
                        Construction::CombinedLds => {
                            build_stream_combined(&generator.generate(n, d)?, d, horizon, mode, permutation_seed)?
                        }
                    };
                    stream.block_at(block)?
                }
            };
            let mut w = output(out.as_deref())?;
            write_points(&mut w, points.view())?;
            w.flush()?;
        }
        Command::Dispersion { n, d, horizon, mode, samplers, probes, seed, refine, format } => {
            let specs = samplers.split(',').map(|s| parse_sampler(s.trim())).collect::<Result<Vec<_>, _>>()?;
            let rows = dispersion_report(&specs, n, d, horizon, mode.into(), probes, seed, seed, seed, refine)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
                Format::Text | Format::Csv => {
                    let mut s = String::from("construction,generator,total_dim,dispersion,probes,probe_seed,refined\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{:?},{},{},{},{},{},{}\n",
                            r.sampler.construction,
                            r.sampler.generator.map_or("uniform".to_string(), |g| g.to_string()),
                            r.total_dim,
                            r.estimate.value,
                            r.estimate.probe_count,
                            r.estimate.probe_seed,
                            r.estimate.refined
                        ));
                    }
                    s
                }
            };
            print!("{text}");
        }
        Command::Run { config, out, jobs, seed, tol, alpha } => {
            let mut cfg = load_config(&config)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(t) = tol {
                cfg.tolerances = t;
            }
            cfg.validate()?;
            let results = run_experiment(&cfg)?;
            let failures = results.failure_count();
            let reports = summarize_dir(&cfg.output_dir, &cfg.tolerances, alpha)?;
            print!("{}", render(&reports, Format::Text));
            if failures > 0 {
                return Err(Failure::Runtime(format!(
                    "{failures} run(s) failed; see {} for seeds and errors",
                    cfg.output_dir.join("manifest.json").display()
                )));
            }
        }
        Command::Rank { out, tol, alpha } => {
            let tolerances = match tol {
                Some(t) => t,
                None => load_results(&out)?.manifest.config.tolerances,
            };
            if let Some(t) = tolerances.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
                return Err(Failure::Input(format!("tolerance {t} outside (0, 1)")));
            }
            let reports = summarize_dir(&out, &tolerances, alpha)?;
            print!("{}", render(&reports, Format::Text));
        }
        Command::Report { out, format } => {
            let reports = read_summary(out.join(SUMMARY_FILE))?;
            print!("{}", render(&reports, format));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
