use clap::{Args, Parser, Subcommand};
use cli_reports::commands::{self, Command};
use cli_reports::config::{RunConfig, Settings};
use cli_reports::exit_code;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "eiszero", version, about = "Zeros of Eisenstein series for genus-zero groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Locate zeros and write CSV, SVG or JSON
    Zeros,
    /// Per-weight verdict table; exits 1 if an asserted verdict fails
    Verify,
    /// Half-period conjugation identities for two groups
    ConjugateCheck,
    /// Rescaling identities for two groups
    IdentityCheck,
    /// Exact q-expansion as exponent<TAB>num/den lines
    Qexp,
    /// Divisor polynomial coefficients
    Divpoly,
    /// List the registry
    Groups,
}

#[derive(Args)]
struct Flags {
    /// Group name(s), comma-separated or repeated
    #[arg(long, global = true, value_delimiter = ',')]
    group: Vec<String>,
    /// A..B[/step], or single weights, comma-separated
    #[arg(long, global = true)]
    weights: Option<String>,
    /// Working precision in bits
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Number of q-expansion coefficients
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Any of csv,svg,json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// key=value file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Distance from the arc still counted as on it
    #[arg(long, global = true)]
    delta_geom: Option<f64>,
    /// Imaginary part of j still counted as real
    #[arg(long, global = true)]
    delta_imag: Option<f64>,
    /// winding or divisor
    #[arg(long, global = true)]
    convention: Option<String>,
    /// eisenstein or hauptmodul (qexp)
    #[arg(long, global = true)]
    form: Option<String>,
}

impl Flags {
    fn settings(&self) -> Settings {
        Settings {
            group: (!self.group.is_empty()).then(|| self.group.join(",")),
            weights: self.weights.clone(),
            precision: self.precision,
            trunc: self.trunc,
            out: self.out.clone(),
            format: self.format.clone(),
            jobs: self.jobs,
            delta_geom: self.delta_geom,
            delta_imag: self.delta_imag,
            convention: self.convention.clone(),
            form: self.form.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd = match cli.cmd {
        Cmd::Zeros => Command::Zeros,
        Cmd::Verify => Command::Verify,
        Cmd::ConjugateCheck => Command::ConjugateCheck,
        Cmd::IdentityCheck => Command::IdentityCheck,
        Cmd::Qexp => Command::Qexp,
        Cmd::Divpoly => Command::Divpoly,
        Cmd::Groups => Command::Groups,
    };
    let result = (|| {
        let base = match &cli.flags.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        let cfg = RunConfig::resolve(base.overlay(cli.flags.settings()), cmd.default_weights())?;
        let stdout = std::io::stdout();
        let stderr = std::io::stderr();
        commands::run(cmd, &cfg, &mut stdout.lock(), &mut stderr.lock())
    })();
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
