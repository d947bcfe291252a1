//! Command-line grammar.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use opa_core::{Complex64, Profile, Solver, Space};

#[derive(Debug, Parser)]
#[command(name = "opa-cli", version, about = "Optimal polynomial approximants, Rudin functions and zero-free approximation")]
pub struct Cli {
    /// Artifact path, or a directory to place it in. Defaults to
    /// ./runs/<timestamp>-<command>.json, or $OPA_OUT_DIR/… when set.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Key-value TOML file with grid sizes, budgets and truncation defaults.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal polynomial approximants of 1/f.
    #[command(subcommand)]
    Opa(OpaCommand),
    /// Rudin peak functions and capacities.
    #[command(subcommand)]
    Rudin(RudinCommand),
    /// Zero-free polynomial approximation with boundary targets.
    #[command(subcommand)]
    Zerofree(ZerofreeCommand),
    /// Perturb f so that an approximant hits prescribed boundary values.
    Steer(SteerArgs),
    /// Run the built-in invariant suite.
    Selftest,
}

impl Command {
    /// Name used in artifacts and default file names.
    pub fn name(&self) -> &'static str {
        match self {
            Command::Opa(OpaCommand::Solve(_)) => "opa solve",
            Command::Opa(OpaCommand::Converge(_)) => "opa converge",
            Command::Rudin(RudinCommand::Build(_)) => "rudin build",
            Command::Rudin(RudinCommand::Capacity(_)) => "rudin capacity",
            Command::Zerofree(ZerofreeCommand::Approx(_)) => "zerofree approx",
            Command::Steer(_) => "steer",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum OpaCommand {
    /// Solve for Q_n(1/f).
    Solve(SolveArgs),
    /// Residual and pointwise errors for n = 0..=n_max, also written as CSV.
    Converge(ConvergeArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Coefficient file of f.
    #[arg(long, value_name = "FILE")]
    pub f: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    pub solver: SolverArg,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, value_name = "FILE")]
    pub f: PathBuf,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Circle grid size for the sup error.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum RudinCommand {
    /// Build a Rudin function peaking on a finite set.
    Build(BuildArgs),
    /// Discrete equilibrium measure and capacity of a union of arcs.
    Capacity(CapacityArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("nbhd").required(true).args(["width", "u"])))]
pub struct BuildArgs {
    /// Boundary set file of the peak set E.
    #[arg(long, value_name = "FILE")]
    pub set: PathBuf,
    /// Half-width of the arcs of U around E.
    #[arg(long)]
    pub width: Option<f64>,
    /// Boundary set file of U, instead of --width.
    #[arg(long, value_name = "FILE")]
    pub u: Option<PathBuf>,
    #[arg(long)]
    pub eps: f64,
    /// Peak height M (Hardy construction).
    #[arg(long)]
    pub peak: Option<f64>,
    #[arg(long, value_enum, default_value_t = SpaceArg::Hardy)]
    pub space: SpaceArg,
    /// Number of nested sets (Dirichlet construction).
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, value_enum, default_value_t = ProfileArg::Gaussian)]
    pub profile: ProfileArg,
    /// log2 of the starting circle grid (Hardy construction).
    #[arg(long)]
    pub grid_log2: Option<u32>,
    /// Degree at which h and the completion are written out.
    #[arg(long)]
    pub output_degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Boundary set file; must consist of arcs.
    #[arg(long, value_name = "FILE")]
    pub set: PathBuf,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ZerofreeCommand {
    /// Zero-free P close to g in norm and close to the targets on E.
    Approx(ApproxArgs),
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Coefficient file of g.
    #[arg(long, value_name = "FILE")]
    pub g: PathBuf,
    /// Boundary set file of E (finite).
    #[arg(long, value_name = "FILE")]
    pub set: PathBuf,
    /// Target values at the points of E in order, as `re` or `re,im`.
    #[arg(long = "target", value_name = "RE[,IM]", value_parser = parse_complex, allow_hyphen_values = true)]
    pub targets: Vec<Complex64>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = SpaceArg::Hardy)]
    pub space: SpaceArg,
}

#[derive(Debug, Args)]
pub struct SteerArgs {
    #[arg(long, value_name = "FILE")]
    pub f: PathBuf,
    /// Coefficient file of the boundary target g.
    #[arg(long, value_name = "FILE")]
    pub g: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub set: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = SpaceArg::Hardy)]
    pub space: SpaceArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolverArg {
    Auto,
    Dense,
    Levinson,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Auto => Solver::Auto,
            SolverArg::Dense => Solver::Dense,
            SolverArg::Levinson => Solver::Levinson,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpaceArg {
    Hardy,
    Dirichlet,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Hardy => Space::Hardy,
            SpaceArg::Dirichlet => Space::Dirichlet,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileArg {
    Gaussian,
    Bump,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Gaussian => Profile::Gaussian,
            ProfileArg::Bump => Profile::Bump,
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let z = match s.split_once(',') {
        Some((re, im)) => Complex64::new(parse(re)?, parse(im)?),
        None => Complex64::new(parse(s)?, 0.0),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("-1, 0.5").unwrap(), Complex64::new(-1.0, 0.5));
        assert!(parse_complex("inf").is_err());
        assert!(parse_complex("1,x").is_err());
    }

    #[test]
    fn grammar_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
