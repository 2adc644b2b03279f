use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use tactile::pipeline::{run_convert, ConvertFlags, Stage};
use tactile::{load_config, Error, PipelineConfig};

/// Turns a color image into a printable tactile graphic.
#[derive(Debug, Parser)]
#[command(name = "tactile", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert an image and write every artifact to the output directory.
    Convert(ConvertArgs),
}

#[derive(Debug, Args)]
struct ConvertArgs {
    /// Input image (PNG or PNM).
    input: PathBuf,
    /// `key=value` configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Stop after writing the edge map.
    #[arg(long)]
    edges_only: bool,
    /// Use this edge map instead of detecting edges.
    #[arg(long, value_name = "FILE")]
    edges_in: Option<PathBuf>,
    /// Vary texture angles within each hue.
    #[arg(long, conflicts_with = "no_fringe")]
    fringe: bool,
    /// One texture angle per hue.
    #[arg(long)]
    no_fringe: bool,
    /// Run a single stage: edges, lines, quantize, density, textures or page.
    #[arg(long, value_name = "NAME")]
    stage: Option<String>,
    /// Output resolution in dots per inch.
    #[arg(long, value_name = "N")]
    dpi: Option<f64>,
}

fn convert(args: ConvertArgs) -> Result<(), Error> {
    let cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => PipelineConfig::default(),
    };
    let flags = ConvertFlags {
        edges_only: args.edges_only,
        edges_in: args.edges_in,
        fringe: match (args.fringe, args.no_fringe) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        },
        dpi: args.dpi,
        stage: args.stage.as_deref().map(str::parse::<Stage>).transpose()?,
    };
    let (_, manifest) = run_convert(&args.input, &cfg, &args.out, &flags)?;
    for (name, path) in &manifest.artifacts {
        println!("{name}: {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let Command::Convert(args) = cli.command;
    match convert(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
