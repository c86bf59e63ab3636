mod commands;
mod dataset;
mod error;
mod format;
mod scenario;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Lane-choice equilibria at weaving ramps under mixed autonomy.
#[derive(Parser)]
#[command(name = "weave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// HDV equilibrium, social optimum and their gap.
    Solve {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Sweep the CAV penetration rate over the scenario grid.
    Sweep {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Chart of j_soc against p.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Efficiency and saturation penetration thresholds.
    Thresholds {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Plateau intervals of a heterogeneous population.
    Plateaus {
        scenario: PathBuf,
        /// Check `lo:hi` against every plateau.
        #[arg(long, value_parser = parse_range)]
        range: Option<(f64, f64)>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Fit cost coefficients to an observed dataset.
    Calibrate {
        dataset: PathBuf,
        /// Starting coefficients; calibrated defaults when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, env = "SEED", default_value_t = 0)]
        seed: u64,
        /// Objective evaluations over all restarts.
        #[arg(long, default_value_t = 40_000)]
        budget: usize,
        /// Also fit the four unit costs.
        #[arg(long)]
        free_unit_costs: bool,
        /// Per-observation relative errors behind the MPER.
        #[arg(long)]
        mper: bool,
        /// Scenario file with the fitted coefficients.
        #[arg(long)]
        scenario_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Stackelberg,
    Svo,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { error::INPUT as u8 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Solve { scenario, format } => commands::solve(&mut out, &scenario, format),
        Command::Sweep {
            scenario,
            mode,
            out: csv,
            svg,
        } => commands::sweep(&mut out, &scenario, mode, csv.as_deref(), svg.as_deref()),
        Command::Thresholds { scenario, format } => commands::thresholds(&mut out, &scenario, format),
        Command::Plateaus {
            scenario,
            range,
            format,
        } => commands::plateaus(&mut out, &scenario, range, format),
        Command::Calibrate {
            dataset,
            scenario,
            seed,
            budget,
            free_unit_costs,
            mper,
            scenario_out,
        } => commands::calibrate(
            &mut out,
            &commands::CalibrateArgs {
                dataset,
                scenario,
                seed,
                budget,
                free_unit_costs,
                mper,
                scenario_out,
            },
        ),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
