//! Command-line front end for the `superiso` library.

mod commands;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use superiso::Error;

pub use output::{Artifact, Format, Table};

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNKNOWN_FIELD: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_MALFORMED: u8 = 5;
pub const EXIT_CATALOG: u8 = 6;

#[derive(Parser, Debug)]
#[command(name = "superiso", version, about = "Weil generators in CM fields and super-isolated abelian varieties")]
pub struct Cli {
    /// Catalog JSON file (default: $SUPERISO_CATALOG, then the built-in catalog)
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the artifact here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate Weil generators of a catalog field
    WeilSearch(WeilSearchArgs),
    /// Count Weil generators with h(alpha) <= N over a grid of N (CSV: N,count,predicted)
    Census(CensusArgs),
    /// Congruence classes and the density constant rho of a quartic field
    QuarticDensity(FieldArg),
    /// eta-curves of a sextic CM field
    #[command(subcommand)]
    EtaCurve(EtaCommand),
    /// Super-isolation of an elliptic curve from (q, t)
    ClassifyEc(ClassifyEcArgs),
    /// Point counts, Frobenius charpoly and zeta numerator of a curve
    Zeta(ZetaArgs),
    /// Super-isolation of an ordinary simple abelian variety
    ClassifyAv(ClassifyAvArgs),
    /// Isogeny classes of elliptic curves over a small field
    IsogenyCensus(IsogenyCensusArgs),
    /// Primes p = N(b + gamma) with Weil-generator Frobenius
    CmPrimeSearch(CmPrimeArgs),
    /// Re-check every invariant of the catalog
    CatalogValidate,
    /// Effective bounds for a sextic field, reported symbolically
    BakerCoates(FieldArg),
}

#[derive(Args, Debug)]
pub struct FieldArg {
    #[arg(long)]
    pub field: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Via {
    /// quadratic closed form for g = 1, unit-height search otherwise
    Auto,
    Units,
    EtaCurves,
    Quadratic,
}

#[derive(Args, Debug)]
pub struct WeilSearchArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub via: Via,
    /// Unit height bound B
    #[arg(long, default_value = "10")]
    pub bound: String,
    /// Height bound N for quadratic fields: h(alpha) <= N
    #[arg(long, default_value = "10")]
    pub n: String,
    /// Coordinate bound for integral points on eta-curves
    #[arg(long = "box", default_value = "100")]
    pub box_bound: String,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    pub field: String,
    /// Comma-separated values of N
    #[arg(long, default_value = "100,1000,10000,100000")]
    pub grid: String,
    /// Unit height bound (default 10*sqrt(max N) + 10)
    #[arg(long)]
    pub bound: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum EtaCommand {
    /// f_eta and H_eta
    Build {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 0)]
        eta: usize,
    },
    /// Integral points with coordinates bounded by --box
    Points {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 0)]
        eta: usize,
        #[arg(long = "box", default_value = "100")]
        box_bound: String,
    },
    /// Weil generators over a point (A,B)
    Lift {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 0)]
        eta: usize,
        /// "A,B"
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// The change of variables from C_{eta2} to C_{eta1}
    Transform {
        #[arg(long)]
        field: String,
        #[arg(long)]
        eta1: usize,
        #[arg(long)]
        eta2: usize,
    },
}

#[derive(Args, Debug)]
pub struct ClassifyEcArgs {
    #[arg(long)]
    pub q: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    /// e.g. "y^2 = x^5 + 4 over GF(11)"
    #[arg(long)]
    pub curve: String,
    /// Maximum field size for a direct point count
    #[arg(long, default_value_t = superiso::finite_geometry::COUNT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["curve", "charpoly"])))]
pub struct ClassifyAvArgs {
    #[arg(long)]
    pub curve: Option<String>,
    /// Frobenius charpoly in x; requires --q
    #[arg(long, requires = "q")]
    pub charpoly: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = superiso::finite_geometry::COUNT_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct IsogenyCensusArgs {
    #[arg(long)]
    pub q: u64,
}

#[derive(Args, Debug)]
pub struct CmPrimeArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub b_min: i64,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    pub b_max: i64,
    /// Test a single element, a polynomial in x over the field's power basis
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["b_min", "b_max"])]
    pub alpha: Option<String>,
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::UnknownField(_)) => EXIT_UNKNOWN_FIELD,
        Some(Error::Budget(_)) => EXIT_BUDGET,
        Some(Error::Parse(_) | Error::Singular(_)) => EXIT_MALFORMED,
        Some(Error::Catalog(_)) => EXIT_CATALOG,
        _ => EXIT_OTHER,
    }
}

/// Parse `args` (without the program name) and run; returns the exit code,
/// the rendered artifact and any error text.
pub fn execute<I, T>(args: I) -> (u8, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("superiso")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { (EXIT_USAGE, String::new(), text) } else { (0, text, String::new()) };
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global();
    }
    let result = commands::run(&cli).and_then(|a| Ok((a.exit, a.render(cli.format)?)));
    match result {
        Ok((code, text)) => match &cli.output {
            Some(p) => match std::fs::write(p, &text) {
                Ok(()) => (code as u8, String::new(), String::new()),
                Err(e) => (EXIT_OTHER, String::new(), format!("error: {}: {e}", p.display())),
            },
            None => (code as u8, text, String::new()),
        },
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}")),
    }
}
