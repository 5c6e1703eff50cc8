use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "beamsym", version, about = "Symmetry and closed-form checks for axially loaded beams")]
pub struct Cli {
    /// Relative tolerance for residual and determining-equation checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Output file for CSV/TOML data (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Offset of the low-discrepancy sample sequence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Beam config (TOML) replacing the case's EI, m, T and domain.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a case bundle: coefficients, generator and solution.
    Catalog {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the PDE residual and the certified determining equations.
    Verify {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        n: Option<f64>,
        /// Scale a coefficient, e.g. `ei=1.1` (repeatable; roles ei, m, t).
        #[arg(long, value_name = "ROLE=FACTOR")]
        perturb: Vec<String>,
        /// Number of (x, t, u) samples for the determining equations.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Rebuild the solution from the generator and report S.
    Reduce {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        n: Option<f64>,
        /// Normalization point of the profile (`inf` allowed); default domain midpoint.
        #[arg(long)]
        x0: Option<f64>,
        /// Initial value F(0) of the temporal factor.
        #[arg(long, default_value_t = 1.0)]
        init_u: f64,
        /// Initial rate F'(0) of the temporal factor.
        #[arg(long, default_value_t = 0.0)]
        init_v: f64,
    },
    /// Integrate the beam numerically and write the trajectory.
    Simulate {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Integrate numerically and compare with the closed-form solution.
    Compare {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Largest accepted max-norm error relative to the amplitude.
        #[arg(long, default_value_t = 0.01)]
        max_rel_error: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Toml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Initial {
    /// Start from rest at zero displacement.
    Zero,
    /// Start from the closed-form solution at t = 0.
    Profile,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Interior grid points.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 2.0)]
    pub t_end: f64,
    /// Initial displacement.
    #[arg(long, value_enum, default_value_t = Initial::Profile)]
    pub h: Initial,
    /// Write every k-th time step.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    /// Polynomial exponent of case c (`--n` is the grid size here).
    #[arg(long)]
    pub case_n: Option<f64>,
}

macro_rules! case_args {
    ($($field:ident => $flag:literal),* $(,)?) => {
        #[derive(Debug, Args)]
        pub struct CaseArgs {
            /// Case name: a1, a2, b, c or bvp.
            #[arg(long)]
            pub case: String,
            $(
                #[arg(long = $flag, allow_hyphen_values = true)]
                pub $field: Option<f64>,
            )*
        }

        impl CaseArgs {
            /// Parameter overrides that were given, in flag order.
            pub fn overrides(&self) -> Vec<(&'static str, f64)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = self.$field {
                        out.push(($flag, v));
                    }
                )*
                out
            }
        }
    };
}

case_args! {
    k => "k",
    f0 => "f0",
    t0 => "T0",
    m0 => "m0",
    c2 => "c2",
    omega => "omega",
    a0 => "a0",
    a1 => "a1",
    r0 => "r0",
    v => "v",
    t1 => "T1",
    g0 => "g0",
    g1 => "g1",
    amp1 => "A1",
    amp2 => "A2",
    amp3 => "A3",
    tau0 => "tau0",
    alpha => "alpha",
    d1 => "d1",
    d2 => "d2",
}
