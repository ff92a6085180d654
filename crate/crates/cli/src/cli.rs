//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "npms",
    version,
    about = "Lensing, quasilocal mass and Weyl-metric diagnostics for negative point masses"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// `key = value` file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Lens {
    /// Point mass (negative for a negative mass).
    #[arg(long, default_value_t = -1.0)]
    pub m: f64,
    /// Convergence.
    #[arg(long, default_value_t = 0.0)]
    pub kappa: f64,
    /// Shear magnitude.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Shear angle.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileName {
    Flat,
    NegSchwarzschild,
    PowerLaw,
    Tabulated,
}

#[derive(Debug, Args)]
pub struct Profile {
    #[arg(long, value_enum, default_value = "flat")]
    pub profile: ProfileName,
    /// Mass of `neg-schwarzschild`.
    #[arg(long, default_value_t = -1.0)]
    pub mass: f64,
    /// Coefficient of `power-law` (`A = k r^p` near the center).
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Exponent of `power-law`.
    #[arg(long, default_value_t = 4.0 / 3.0)]
    pub p: f64,
    /// `r,A` table for `tabulated`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Images of one source.
    #[command(allow_negative_numbers = true)]
    LensImages {
        #[command(flatten)]
        lens: Lens,
        /// Source position `y1,y2`.
        #[arg(long, default_value = "3,0", allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        output: Output,
    },
    /// Isolated-lens light curve along a straight track.
    #[command(allow_negative_numbers = true)]
    LensLightcurve {
        #[arg(long, default_value_t = -1.0)]
        m: f64,
        /// Impact parameter.
        #[arg(long, default_value_t = 3.0)]
        d: f64,
        #[arg(long, default_value_t = -5.0)]
        t0: f64,
        #[arg(long, default_value_t = 5.0)]
        t1: f64,
        /// Number of samples.
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Critical curve.
    #[command(allow_negative_numbers = true)]
    LensCritical {
        #[command(flatten)]
        lens: Lens,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Caustic.
    #[command(allow_negative_numbers = true)]
    LensCaustics {
        #[command(flatten)]
        lens: Lens,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Cusps of the caustic.
    #[command(allow_negative_numbers = true)]
    LensCusps {
        #[command(flatten)]
        lens: Lens,
        #[command(flatten)]
        output: Output,
    },
    /// Image counts over a square grid of sources.
    #[command(allow_negative_numbers = true)]
    LensSurvey {
        #[command(flatten)]
        lens: Lens,
        /// Half-width of the source square.
        #[arg(long, default_value_t = 4.0)]
        radius: f64,
        /// Grid points per side.
        #[arg(long, default_value_t = 41)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Curvature, Hawking mass and capacity of coordinate spheres, plus the mass report.
    #[command(allow_negative_numbers = true)]
    SphericalReport {
        #[command(flatten)]
        profile: Profile,
        /// Smallest tabulated radius.
        #[arg(long, default_value_t = 1e-3)]
        r0: f64,
        /// Largest tabulated radius.
        #[arg(long, default_value_t = 1e3)]
        radius: f64,
        #[arg(long, default_value_t = 61)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Inverse mean curvature flow of a coordinate sphere.
    #[command(allow_negative_numbers = true)]
    ImcfFlow {
        #[command(flatten)]
        profile: Profile,
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        #[arg(long = "t-end", default_value_t = 2.0)]
        t_end: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Zipoy-Voorhees cylinder areas and energies, plus flux mass and exponents.
    #[command(allow_negative_numbers = true)]
    WeylZv {
        #[arg(long, default_value_t = -1.0)]
        m: f64,
        /// Rod half-length.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Largest cylinder radius; the table spans three decades below it.
        #[arg(long, default_value_t = 0.1)]
        rho: f64,
        /// Radius of the flux sphere.
        #[arg(long, default_value_t = 5.0)]
        radius: f64,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
}

impl Command {
    pub fn output(&self) -> &Output {
        match self {
            Command::LensImages { output, .. }
            | Command::LensLightcurve { output, .. }
            | Command::LensCritical { output, .. }
            | Command::LensCaustics { output, .. }
            | Command::LensCusps { output, .. }
            | Command::LensSurvey { output, .. }
            | Command::SphericalReport { output, .. }
            | Command::ImcfFlow { output, .. }
            | Command::WeylZv { output, .. } => output,
        }
    }
}
