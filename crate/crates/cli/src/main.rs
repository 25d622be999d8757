use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bbloc::schema::{export_generic, load_model, load_points, LoadedModel};
use bbloc::{report, seed_from_env, svg, verify, CliError, EXIT_INPUT, EXIT_OK, EXIT_VERIFY_FAILED};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "bbloc",
    version,
    about = "Closure chains, coefficients and Duistermaat-Heckman measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the complex of closure chains.
    Complex {
        #[command(flatten)]
        common: Common,
        /// Emit the model re-expressed as a generic model file instead of a report.
        #[arg(long)]
        as_model: bool,
    },
    /// Print the coefficient of every maximal chain and the degree.
    Coeffs(Common),
    /// Evaluate the density at the points of a JSON file.
    Density(Common),
    /// Run every applicable identity check; exits 1 if any fails.
    Verify(Common),
    /// Draw a planar toric model as SVG.
    Svg(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(p.display().to_string(), e.to_string())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Text => text(value),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

fn load(common: &Common) -> Result<LoadedModel, CliError> {
    load_model(&common.model)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Complex { common, as_model } => {
            let loaded = load(&common)?;
            let text = if as_model {
                let file = export_generic(&loaded.model, loaded.file.name().map(String::from))?;
                let mut s = serde_json::to_string_pretty(&file).expect("model files serialize");
                s.push('\n');
                s
            } else {
                render(common.format, &report::complex_report(&loaded), |r| r.to_text())
            };
            emit(common.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Coeffs(common) => {
            let loaded = load(&common)?;
            let r = report::coeffs_report(&loaded)?;
            emit(common.out.as_deref(), &render(common.format, &r, |r| r.to_text()))?;
            Ok(EXIT_OK)
        }
        Command::Density(common) => {
            let loaded = load(&common)?;
            let path = common
                .points
                .as_deref()
                .ok_or_else(|| CliError::Input("density needs --points FILE".into()))?;
            let pts = load_points(path)?;
            let r = report::density_report(&loaded, &pts)?;
            emit(common.out.as_deref(), &render(common.format, &r, |r| r.to_text()))?;
            Ok(EXIT_OK)
        }
        Command::Verify(common) => {
            let loaded = load(&common)?;
            let r = verify::run_verify(&loaded, seed_from_env()?);
            emit(common.out.as_deref(), &render(common.format, &r, |r| r.to_text()))?;
            Ok(if r.failed() { EXIT_VERIFY_FAILED } else { EXIT_OK })
        }
        Command::Svg(common) => {
            let loaded = load(&common)?;
            let toric = loaded
                .model
                .as_toric()
                .ok_or_else(|| CliError::Unsupported("figures are drawn for toric models only".into()))?;
            emit(common.out.as_deref(), &svg::render(toric)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    };
    ExitCode::from(code as u8)
}
