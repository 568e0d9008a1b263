use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use blockheat::operator::{BoundaryKind, StencilOrder};

#[derive(Parser, Debug)]
#[command(name = "blockheat", version, about = "Two-point block finite differences for u_t = u_xx + F")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate one configuration and write x, numerical, exact and error columns.
    Solve(SolveArgs),
    /// Run a convergence study and write the order table.
    Converge(ConvergeArgs),
    /// Symbols, eigenvector conditioning and stability verdict for a periodic grid.
    Analyze(AnalyzeArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    SecondBlock,
    FourthBlock,
}

impl From<Scheme> for StencilOrder {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::SecondBlock => StencilOrder::SecondBlock,
            Scheme::FourthBlock => StencilOrder::FourthBlock,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bc {
    Periodic,
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryKind {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Periodic => BoundaryKind::Periodic,
            Bc::Dirichlet => BoundaryKind::Dirichlet,
            Bc::Neumann => BoundaryKind::Neumann,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SchemeArgs {
    #[arg(long, value_enum)]
    pub scheme: Scheme,

    #[arg(long, value_enum)]
    pub bc: Bc,

    /// Manufactured problem: exp-cos-periodic, exp-cos-ibvp or poly:a0,a1,...
    /// [default: exp-cos-periodic for periodic, exp-cos-ibvp otherwise]
    #[arg(long)]
    pub problem: Option<String>,

    /// Domain length.
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,

    #[arg(long = "t-end", default_value_t = 1.0)]
    pub t_end: f64,

    /// Step coefficient in dt = kappa·s² [default: 0.1 second-block, 0.05 fourth-block]
    #[arg(long)]
    pub kappa: Option<f64>,

    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: SchemeArgs,

    /// Free parameter c (decimal or fraction such as -1/4).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "-1/4")]
    pub c: f64,

    /// Block count N.
    #[arg(long, default_value_t = 32)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: SchemeArgs,

    /// Comma-separated c values [default: -1/4,0,1/6,-1/6 second-block; 4/13,0,1/6,-1/6 fourth-block]
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_rational)]
    pub c: Vec<f64>,

    /// Comma-separated block counts.
    #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
    pub n: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum, default_value_t = Scheme::SecondBlock)]
    pub scheme: Scheme,

    /// Block count N.
    #[arg(long, default_value_t = 16)]
    pub n: usize,

    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "-1/4")]
    pub c: f64,

    /// Period of the analysed grid [default: 2π]
    #[arg(long)]
    pub length: Option<f64>,

    /// Dirichlet and Neumann symbols by frequency on [0, π] instead.
    #[arg(long)]
    pub table: bool,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Parse `p/q` or a decimal.
pub fn parse_rational(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in {text:?}"));
            }
            p / q
        }
        None => text.parse().map_err(|_| format!("not a number: {text:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not finite: {text:?}"))
    }
}
