use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mabuchi_core::{AdmissibleManifold, Error, Manifest};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "mabuchi",
    version,
    about = "Exact existence checks for Kähler-Einstein metrics and Mabuchi solitons on Fano admissible manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moments, Futaki invariant, Mabuchi constant and existence verdicts.
    Classify(InputArgs),
    /// The Mabuchi constant in both closed forms, with projection coefficients.
    Mconst(InputArgs),
    /// Exhaustive exact scan over P^n bundles.
    Scan(ScanArgs),
    /// Certified soliton profile for the KE or Mabuchi weight.
    Profile(ProfileArgs),
    /// Numerical Kähler-Ricci soliton parameter.
    Krs(KrsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Decimal digits for numerical output and presentation-only decimals.
    #[arg(
        long,
        env = "MABUCHI_PRECISION",
        default_value_t = 64,
        value_parser = clap::value_parser!(u32).range(16..)
    )]
    pub precision: u32,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// P^n bundle tuple `n,k,d0,dinf`.
    #[arg(long, value_name = "n,k,d0,dinf")]
    pub pn: Option<String>,
    /// JSON manifest describing the manifold.
    #[arg(long, value_name = "path.json")]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    #[arg(long, default_value_t = 6)]
    pub k_max: u32,
    #[arg(long, default_value_t = 4)]
    pub d0_max: u32,
    #[arg(long, default_value_t = 4)]
    pub dinf_max: u32,
    /// Report skipped non-Fano tuples on standard error.
    #[arg(long)]
    pub verbose: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightKind {
    Mabuchi,
    Ke,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value = "mabuchi")]
    pub weight: WeightKind,
    /// Number of equally spaced samples of Θ on [-1, 1].
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub samples: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct KrsArgs {
    #[command(flatten)]
    pub source: Source,
    /// Number of equally spaced samples of Θ on [-1, 1].
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub samples: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

/// Failures the front end reports; the exit code follows from the kind.
pub enum Failure {
    Input(String),
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_internal() => 1,
            Failure::Io(_) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
            Failure::Io(m) => format!("IoError: {m}"),
        }
    }
}

pub fn parse_pn(text: &str) -> Result<[u32; 4], Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure::Input(format!("Parse: --pn expects n,k,d0,dinf, got {text:?}"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let mut out = [0u32; 4];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| bad())?;
    }
    Ok(out)
}

pub fn load_manifold(source: &Source) -> Result<AdmissibleManifold, Failure> {
    match (&source.pn, &source.manifest) {
        (Some(pn), None) => {
            let [n, k, d0, d_inf] = parse_pn(pn)?;
            if n == 0 || k == 0 {
                return Err(Failure::Input("Parse: n and k must be at least 1".into()));
            }
            Ok(AdmissibleManifold::from_pn_bundle(n, k, d0, d_inf)?)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Failure::Input(format!("Parse: cannot read {}: {e}", path.display()))
            })?;
            Ok(Manifest::from_json(&text)?.build()?)
        }
        _ => Err(Failure::Input(
            "Parse: give exactly one of --pn or --manifest".into(),
        )),
    }
}

fn emit(common: &Common, body: String) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, body) = match &cli.command {
        Command::Classify(a) => (&a.common, commands::classify(a)?),
        Command::Mconst(a) => (&a.common, commands::mconst(a)?),
        Command::Scan(a) => (&a.common, commands::scan(a)?),
        Command::Profile(a) => (&a.common, commands::profile(a)?),
        Command::Krs(a) => (&a.common, commands::krs(a)?),
    };
    emit(common, body)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pn_tuple_parsing() {
        assert_eq!(parse_pn("1,1,0,1").ok(), Some([1, 1, 0, 1]));
        assert_eq!(parse_pn(" 6, 2 ,0,4").ok(), Some([6, 2, 0, 4]));
        assert!(parse_pn("1,1,0").is_err());
        assert!(parse_pn("1,1,0,-1").is_err());
        assert!(parse_pn("1,1,0,1,2").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
