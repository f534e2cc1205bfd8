use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "spinfano", version, about = "Spin readout through a Fano antiresonance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Device configuration (JSON).
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,

    /// Override a config value, e.g. `--set J=2` or `--set modes.0.bottom_energy=-5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-electron level diagram of the dot.
    Levels {
        #[command(flatten)]
        common: Common,
    },
    /// Per-mode transmission and reflection versus energy.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Energy grid in meV; defaults to the resonance ± 10 Gamma.
        #[arg(long, value_name = "START:STOP:COUNT", allow_hyphen_values = true)]
        grid: Option<Grid>,
    },
    /// Current and differential conductance versus bias for both spin orientations.
    Iv {
        #[command(flatten)]
        common: Common,
        /// Bias grid in mV; defaults to ± 4 Gamma.
        #[arg(long, value_name = "START:STOP:COUNT", allow_hyphen_values = true)]
        grid: Option<Grid>,
    },
    /// Readout figures of merit and the non-demolition verdict.
    Readout {
        #[command(flatten)]
        common: Common,
        /// Threshold for the beta/Gamma and J/Gamma criteria.
        #[arg(long, default_value_t = 3.0)]
        strictness: f64,
        /// Also tabulate the currents over a grid of this parameter.
        #[arg(long, value_enum)]
        sweep_over: Option<SweepParameter>,
        /// Grid for `--sweep-over` (mV for v, meV for gamma).
        #[arg(long, value_name = "START:STOP:COUNT", requires = "sweep_over", allow_hyphen_values = true)]
        grid: Option<Grid>,
    },
    /// Compare the Fano lineshape with an exact tight-binding chain.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Chain hopping t in meV.
        #[arg(long, default_value_t = 1000.0)]
        hopping: f64,
        /// Dot-chain hopping t' in meV.
        #[arg(long, default_value_t = 100.0)]
        coupling: f64,
        /// Dot level in meV.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        eps_d: f64,
        /// Half-width of the comparison window in units of the fitted broadening.
        #[arg(long, default_value_t = 5.0)]
        window: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Levels { .. } => "levels",
            Command::Sweep { .. } => "sweep",
            Command::Iv { .. } => "iv",
            Command::Readout { .. } => "readout",
            Command::Oracle { .. } => "oracle",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Levels { common }
            | Command::Sweep { common, .. }
            | Command::Iv { common, .. }
            | Command::Readout { common, .. }
            | Command::Oracle { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParameter {
    V,
    Gamma,
}

/// Evenly spaced grid; both endpoints are hit exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == self.count - 1 {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / n)
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("expected START:STOP:COUNT, got `{s}`"));
        };
        let start: f64 = start.parse().map_err(|_| format!("bad start `{start}`"))?;
        let stop: f64 = stop.parse().map_err(|_| format!("bad stop `{stop}`"))?;
        let count: usize = count.parse().map_err(|_| format!("bad count `{count}`"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        if count > 1 && stop <= start {
            return Err("grid stop must exceed start".into());
        }
        Ok(Grid { start, stop, count })
    }
}
