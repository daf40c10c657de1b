use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::invariants::MultiIndex;
use crate::reflection::AjlMode;

#[derive(Debug, Parser)]
#[command(
    name = "refinv",
    version,
    about = "Reflection differential systems and crossed matrix invariants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate X(t) and X'(t) of a reflection system on a time grid (CSV).
    Fundamental(FundamentalArgs),
    /// Compute a crossed invariant Z_{index}(matrices).
    Invariant(InvariantArgs),
    /// Run the closure search for determinant invariants.
    Closure(ClosureArgs),
    /// Integrate the fundamental pair X0, X1 of a complex system (CSV).
    ComplexSolve(ComplexSolveArgs),
    /// Run verification suites and write a pass/fail report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FundamentalArgs {
    /// Reflection system file with fields F, G, A, B.
    #[arg(long, value_name = "PATH")]
    pub system: PathBuf,
    #[arg(
        long,
        value_name = "START:STOP:STEP",
        allow_hyphen_values = true,
        default_value = "-1:1:0.1"
    )]
    pub t_grid: TGrid,
    /// Residual tolerance, relative to 1 + ||system||.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    /// File holding {"matrices": [..]} or a bare array of matrices.
    #[arg(long, value_name = "PATH")]
    pub matrices: PathBuf,
    /// Comma-separated indices, one per matrix.
    #[arg(long, value_name = "a,b,c", allow_hyphen_values = true)]
    pub index: MultiIndex,
    /// Agreement tolerance between the evaluation routes.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ClosureArgs {
    /// Matrix size.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = crate::closure::DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
    /// Optional reflection system to check a closed transition against.
    #[arg(long, value_name = "PATH")]
    pub system: Option<PathBuf>,
    #[arg(
        long,
        value_name = "START:STOP:STEP",
        allow_hyphen_values = true,
        default_value = "-1:1:0.1"
    )]
    pub t_grid: TGrid,
    /// Finite-difference step for the numeric check.
    #[arg(long, default_value_t = 5e-3)]
    pub h: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ComplexSolveArgs {
    /// Complex system file with fields A, B.
    #[arg(long, value_name = "PATH")]
    pub system: PathBuf,
    /// Output times; the grid must start at or after 0 and lie on multiples of h.
    #[arg(
        long,
        value_name = "START:STOP:STEP",
        allow_hyphen_values = true,
        default_value = "0:1:0.1"
    )]
    pub t_grid: TGrid,
    /// RK4 step.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Reflection,
    Ajl,
    Riccati,
    Graded,
    Invariants,
    Derivatives,
    Closure,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Reflection,
                Suite::Ajl,
                Suite::Riccati,
                Suite::Graded,
                Suite::Invariants,
                Suite::Derivatives,
                Suite::Closure,
            ],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Reflection => "reflection",
            Suite::Ajl => "ajl",
            Suite::Riccati => "riccati",
            Suite::Graded => "graded",
            Suite::Invariants => "invariants",
            Suite::Derivatives => "derivatives",
            Suite::Closure => "closure",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "section45")]
    Section45,
    #[value(name = "paper-theorem2")]
    PaperTheorem2,
}

impl From<ModeArg> for AjlMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Section45 => AjlMode::Section45,
            ModeArg::PaperTheorem2 => AjlMode::PaperTheorem2,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Random trials per check.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    /// Sign convention of the n = 2 determinant system under test.
    #[arg(long, value_enum, default_value = "section45")]
    pub mode: ModeArg,
    /// Replace every check tolerance by this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

/// Uniform grid `start:stop:step` with `step > 0` and `stop >= start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl TGrid {
    /// Grid points, the last one within `1e-9 * step` of `stop` snapped to it.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|k| (self.start + k as f64 * self.step).min(self.stop))
            .collect()
    }
}

impl FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("expected START:STOP:STEP, got {s:?}"));
        };
        let num = |p: &str, what: &str| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad {what} {p:?} in t-grid"))
        };
        let grid = TGrid {
            start: num(start, "start")?,
            stop: num(stop, "stop")?,
            step: num(step, "step")?,
        };
        if grid.step <= 0.0 {
            return Err("t-grid step must be > 0".into());
        }
        if grid.stop < grid.start {
            return Err("t-grid stop must be >= start".into());
        }
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: TGrid = "-1:1:0.1".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 21);
        assert_eq!(p[0], -1.0);
        assert_eq!(*p.last().unwrap(), 1.0);
        assert_eq!("0:0:1".parse::<TGrid>().unwrap().points(), vec![0.0]);
        assert!("1:0:0.1".parse::<TGrid>().is_err());
        assert!("0:1:0".parse::<TGrid>().is_err());
        assert!("0:1".parse::<TGrid>().is_err());
        assert!("0:x:1".parse::<TGrid>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
