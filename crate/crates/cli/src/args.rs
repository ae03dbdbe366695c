use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use subelliptic::ModelKind;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "subelliptic", version, about = "Gamma calculus, heat kernels and Li-Yau constants on model subelliptic groups")]
pub struct Cli {
    /// Output format of the main document.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Output file; defaults to $SUBELLIPTIC_OUT_DIR/<command>.<ext>, then stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also write an SVG line plot derived from the CSV.
    #[arg(long, global = true)]
    pub plot: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gamma-two expansion, structural identities and the lower bound.
    VerifyIdentities(VerifyIdentitiesArgs),
    /// Li-Yau coefficients by quadrature and in closed form.
    LiyauCoeffs(LiyauCoeffsArgs),
    /// Li-Yau margin at sample points from a heat semigroup estimate.
    CheckLiyau(CheckLiyauArgs),
    /// Functionals of V, best constant search, long-time decay fit.
    OptimizeV(OptimizeVArgs),
    /// Variance decay rate on SU(2) and the Poincare check.
    SpectralGap(SpectralGapArgs),
    /// Carnot-Caratheodory distance between two points.
    CcDistance(CcDistanceArgs),
    /// Distances between Haar-random pairs on SU(2).
    Diameter(DiameterArgs),
    /// On-diagonal heat kernel decay on the Heisenberg group.
    ShortTime(ShortTimeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyIdentities(_) => "verify-identities",
            Command::LiyauCoeffs(_) => "liyau-coeffs",
            Command::CheckLiyau(_) => "check-liyau",
            Command::OptimizeV(_) => "optimize-v",
            Command::SpectralGap(_) => "spectral-gap",
            Command::CcDistance(_) => "cc-distance",
            Command::Diameter(_) => "diameter",
            Command::ShortTime(_) => "short-time",
        }
    }
}

fn model(s: &str) -> Result<ModelKind, String> {
    s.parse::<ModelKind>().map_err(|e| e.to_string())
}

/// Comma-separated numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatList(pub Vec<f64>);

fn float_list(s: &str) -> Result<FloatList, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad number `{v}`")))
        .collect::<Result<_, _>>()
        .map(FloatList)
}

#[derive(Args, Debug)]
pub struct VerifyIdentitiesArgs {
    #[arg(long, value_parser = model, default_value = "heisenberg")]
    pub model: ModelKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random test functions.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Number of random evaluation points.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Power,
    Exp,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Power => "power",
            Profile::Exp => "exp",
        }
    }
}

#[derive(Args, Debug)]
pub struct LiyauCoeffsArgs {
    #[arg(long, value_enum)]
    pub profile: Profile,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long)]
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Mc,
    Grid,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Mc => "mc",
            Route::Grid => "grid",
        }
    }
}

#[derive(Args, Debug)]
pub struct CheckLiyauArgs {
    #[arg(long, value_parser = model, default_value = "heisenberg")]
    pub model: ModelKind,
    #[arg(long, value_enum, default_value_t = Route::Grid)]
    pub route: Route,
    /// Positive initial function in the expression grammar.
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 3.0)]
    pub alpha: f64,
    /// Evaluation points; defaults to 50 on the grid route and 4 for Monte Carlo.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 20_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub step: f64,
    /// Finite-difference width of the Monte Carlo route.
    #[arg(long, default_value_t = 2e-2)]
    pub eps: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OptimizeMode {
    FamilyScan,
    GridSearch,
}

impl OptimizeMode {
    pub fn name(self) -> &'static str {
        match self {
            OptimizeMode::FamilyScan => "family-scan",
            OptimizeMode::GridSearch => "grid-search",
        }
    }
}

#[derive(Args, Debug)]
pub struct OptimizeVArgs {
    #[arg(long, value_enum, default_value_t = OptimizeMode::GridSearch)]
    pub mode: OptimizeMode,
    /// Zero runs the functionals table and the best-constant search;
    /// positive values run the long-time decay fit.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 40)]
    pub eps_points: usize,
    #[arg(long, default_value_t = 40)]
    pub gamma_points: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 16)]
    pub grid_nodes: usize,
    #[arg(long, default_value_t = 60)]
    pub grid_sweeps: usize,
    /// Family exponent used by the decay fit.
    #[arg(long, default_value_t = 2.75)]
    pub gamma: f64,
    /// Scale of the offset in ln eps used by the decay fit.
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, value_parser = float_list, default_value = "10,15,20,25,30,35,40")]
    pub t_grid: FloatList,
}

#[derive(Args, Debug)]
pub struct SpectralGapArgs {
    #[arg(long, value_parser = float_list, default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    pub t_grid: FloatList,
    #[arg(long, default_value_t = 20_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub step: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Test function on SU(2); defaults to `u11r`.
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long, default_value_t = 20_000)]
    pub poincare_samples: usize,
}

#[derive(Args, Debug)]
pub struct CcDistanceArgs {
    #[arg(long, value_parser = model, default_value = "heisenberg")]
    pub model: ModelKind,
    /// `identity`, `exp:a,b,c` or `entries:<free entries>`.
    #[arg(long, default_value = "identity", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
    #[arg(long, default_value_t = 32)]
    pub controls: usize,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct DiameterArgs {
    #[arg(long, default_value_t = 100)]
    pub n_pairs: usize,
    #[arg(long, default_value_t = 32)]
    pub controls: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Repeat with twice the controls and compare the maxima.
    #[arg(long)]
    pub refine: bool,
}

#[derive(Args, Debug)]
pub struct ShortTimeArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 0.05)]
    pub t_min: f64,
    #[arg(long, default_value_t = 0.4)]
    pub t_max: f64,
    #[arg(long, default_value_t = 8)]
    pub n_times: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20_000)]
    pub pilot_paths: usize,
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn positive(name: &str, v: f64) -> Result<(), String> {
    check(v > 0.0 && v.is_finite(), || format!("--{name} must be positive, got {v}"))
}

fn alpha(v: f64) -> Result<(), String> {
    check(v > 2.0 && v.is_finite(), || format!("--alpha must exceed 2, got {v}"))
}

fn paths(v: usize) -> Result<(), String> {
    check(v >= 1000, || format!("--paths must be at least 1000, got {v}"))
}

fn times(name: &str, v: &[f64]) -> Result<(), String> {
    check(
        v.len() >= 2 && v.iter().all(|t| *t > 0.0 && t.is_finite()) && v.windows(2).all(|w| w[1] > w[0]),
        || format!("--{name} needs at least two increasing positive times"),
    )
}

impl Cli {
    /// Range checks done before any computation.
    pub fn validate(&self) -> Result<(), String> {
        if let Some(n) = self.threads {
            check(n > 0, || "--threads must be positive".into())?;
        }
        match &self.command {
            Command::VerifyIdentities(a) => {
                check(a.count > 0, || "--count must be positive".into())?;
                check(a.points > 0, || "--points must be positive".into())
            }
            Command::LiyauCoeffs(a) => {
                alpha(a.alpha)?;
                positive("t", a.t)?;
                check(a.rho.is_finite(), || "--rho must be finite".into())?;
                if a.profile == Profile::Exp {
                    check(a.rho > 0.0, || format!("--profile exp needs --rho > 0, got {}", a.rho))?;
                }
                Ok(())
            }
            Command::CheckLiyau(a) => {
                alpha(a.alpha)?;
                positive("t", a.t)?;
                positive("step", a.step)?;
                positive("eps", a.eps)?;
                paths(a.paths)?;
                check(a.points != Some(0), || "--points must be positive".into())?;
                if a.route == Route::Grid {
                    check(a.model == ModelKind::Heisenberg, || {
                        format!("the grid route is only available on heisenberg, not {}", a.model)
                    })?;
                }
                Ok(())
            }
            Command::OptimizeV(a) => {
                check(a.rho >= 0.0 && a.rho.is_finite(), || format!("--rho must be non-negative, got {}", a.rho))?;
                check(a.eps_min > 0.0 && a.eps_min < 1.0, || {
                    format!("--eps-min must lie in (0,1), got {}", a.eps_min)
                })?;
                check(a.eps_points >= 2 && a.gamma_points >= 2, || {
                    "--eps-points and --gamma-points must be at least 2".into()
                })?;
                check(a.gamma > 2.5 && a.gamma < 3.0, || format!("--gamma must lie in (5/2,3), got {}", a.gamma))?;
                positive("c", a.c)?;
                if a.rho > 0.0 {
                    times("t-grid", &a.t_grid.0)?;
                }
                Ok(())
            }
            Command::SpectralGap(a) => {
                times("t-grid", &a.t_grid.0)?;
                paths(a.paths)?;
                positive("step", a.step)?;
                check(a.poincare_samples >= 2, || "--poincare-samples must be at least 2".into())
            }
            Command::CcDistance(a) => {
                check(a.controls > 0 && a.starts > 0, || "--controls and --starts must be positive".into())
            }
            Command::Diameter(a) => {
                check(a.n_pairs > 0, || "--n-pairs must be positive".into())?;
                check(a.controls > 0, || "--controls must be positive".into())
            }
            Command::ShortTime(a) => {
                paths(a.paths)?;
                positive("t-min", a.t_min)?;
                check(a.t_max >= 2.0 * a.t_min, || "--t-max must be at least twice --t-min".into())?;
                check(a.n_times >= 2, || "--n-times must be at least 2".into())?;
                positive("step", a.step)?;
                check(a.step < a.t_min, || "--step must be below --t-min".into())
            }
        }
    }
}
