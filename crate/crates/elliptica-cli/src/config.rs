//! Command-line configuration.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use elliptica::C64;

use crate::parse;

#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "elliptica", version, about = "Evaluate and verify elliptic R-matrix identities")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Common {
    /// Seed of the sample generator.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Also write residuals as CSV rows.
    #[arg(long, global = true)]
    pub csv: Option<std::path::PathBuf>,
    /// Per-direction term cap (overrides ELLIPTICA_MAX_TERMS).
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    /// Term tolerance of the truncation rule.
    #[arg(long, global = true)]
    pub term_tol: Option<f64>,
}

/// Parameter point. `s` wins over `p` (`s = −p^{1/2}`); `s*` wins over `p*`,
/// which wins over `c` (`s* = s q^{−c}`); with none of them `s* = s`.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ParamArgs {
    /// Nome q, 0 < |q| < 1.
    #[arg(long, value_parser = parse::complex)]
    pub q: Option<C64>,
    /// Elliptic nome p = s².
    #[arg(long, value_parser = parse::complex)]
    pub p: Option<C64>,
    /// Shift s, overrides --p.
    #[arg(long, value_parser = parse::complex)]
    pub s: Option<C64>,
    /// Starred nome p*.
    #[arg(long, value_parser = parse::complex)]
    pub p_star: Option<C64>,
    /// Starred shift s*, overrides --p-star and --c.
    #[arg(long, value_parser = parse::complex)]
    pub s_star: Option<C64>,
    /// Central charge (rational, e.g. 1 or -2/3).
    #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
    pub c: Option<Ratio<i64>>,
    /// Rank N.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LabelArgs {
    /// First label ℓ.
    #[arg(long, allow_hyphen_values = true)]
    pub ell: i64,
    /// Second label ℓ′.
    #[arg(long, allow_hyphen_values = true)]
    pub ell_prime: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum RCheck {
    All,
    Ybe,
    Unitarity,
    Crossing,
    Antisymmetry,
    Identities,
    Tau,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
pub enum Command {
    /// Jacobi theta with characteristic, or its identity suite.
    Theta {
        /// First characteristic (rational).
        #[arg(long, value_parser = parse::rational, default_value = "1/2", allow_hyphen_values = true)]
        gamma1: Ratio<i64>,
        /// Second characteristic (rational).
        #[arg(long, value_parser = parse::rational, default_value = "1/2", allow_hyphen_values = true)]
        gamma2: Ratio<i64>,
        /// Argument.
        #[arg(long, value_parser = parse::complex, default_value = "0.1", allow_hyphen_values = true)]
        xi: C64,
        /// Modulus, Im > 0.
        #[arg(long, value_parser = parse::complex, default_value = "0.5i", allow_hyphen_values = true)]
        tau: C64,
        /// Run the identity suite for this rank instead of a single value.
        #[arg(long)]
        verify: Option<i64>,
        /// Number of random sample points.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Pass threshold on the maximum residual.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// R-matrix identity sweeps (eight-vertex for N = 2, Belavin otherwise).
    Rmatrix {
        #[command(flatten)]
        params: ParamArgs,
        /// Which identity family to sweep.
        #[arg(long, value_enum, default_value = "all")]
        check: RCheck,
        /// Number of random sample points.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Pass threshold on the maximum residual.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Structure-function values, or the shift and compatibility suites.
    Exchange {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        labels: LabelArgs,
        /// Second label pair as `l,l'` (defaults to the first).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Evaluation points; repeat the flag for several.
        #[arg(long = "z", value_parser = parse::complex, allow_hyphen_values = true)]
        z: Vec<C64>,
        /// Run the F-identity and compatibility suites.
        #[arg(long)]
        verify: bool,
        /// Number of random sample points.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Pass threshold on the maximum residual.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Solve, check or enumerate surface conditions.
    Surface {
        #[command(flatten)]
        params: ParamArgs,
        /// List ℓ′ with an exact solution for --ell at --c, --n.
        #[arg(long)]
        solve: bool,
        /// First label ℓ.
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
        /// Second label ℓ′.
        #[arg(long, allow_hyphen_values = true)]
        ell_prime: Option<i64>,
        /// ℓ′ window for --solve, or label window for enumeration.
        #[arg(long, value_parser = parse::range, default_value = "-10..10", allow_hyphen_values = true)]
        window: (i64, i64),
        /// Pass threshold on the maximum residual.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Tableau of structure functions at c = 1, p = q³.
    Table {
        /// Nome q.
        #[arg(long, value_parser = parse::complex, default_value = "0.55")]
        q: C64,
        /// Number of spectral sample points.
        #[arg(long, default_value_t = 10)]
        z_samples: usize,
        /// Pass threshold on the maximum residual.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Splitting-factor check of the structure function.
    Rhsplit {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        labels: LabelArgs,
        /// Number of spectral sample points.
        #[arg(long, default_value_t = 10)]
        z_samples: usize,
        /// Pass threshold on the maximum residual.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// β → 0 limit of the structure function against the Poisson kernel.
    Classical {
        #[command(flatten)]
        labels: LabelArgs,
        /// Integer point of s = q^(k − β/η).
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
        /// Nome q.
        #[arg(long, value_parser = parse::complex, default_value = "0.5")]
        q: C64,
        /// Number of spectral sample points.
        #[arg(long, default_value_t = 10)]
        z_samples: usize,
        /// Pass threshold on the maximum residual.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Vertex-coefficient identities and the zero/pole scan.
    Vo {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of random sample points.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Pass threshold on the maximum residual.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Label window of the zero/pole scan.
        #[arg(long, value_parser = parse::range, default_value = "-4..4", allow_hyphen_values = true)]
        labels: (i64, i64),
    },
}
