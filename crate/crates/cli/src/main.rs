//! `toric`: batch verification and figures for lattice polygon triangulations.

mod commands;
mod report;
mod svg;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use toric_core::LatticePoint;

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "toric", version, about = "Lattice polygons, unimodular triangulations and secant bounds")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Largest normalized area for which triangulations are enumerated.
    #[arg(long, env = "TORIC_MAX_AREA", default_value_t = 12, global = true)]
    max_area: i64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List polygons with `g` interior points and normalized area at most `d-max`.
    Census {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d_max: u32,
    },
    /// Enumerate the unimodular triangulations of polygon files.
    Triangulate {
        /// Polygon files or directories of them.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Keep only regular triangulations.
        #[arg(long)]
        regular_only: bool,
    },
    /// Validate triangulation files and report skew sets, singularities and bounds.
    Check {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Find the delightful triangulations of polygon files, up to equiaffinity.
    ClassifyDelightful {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
    },
    /// Draw a triangulation or subdivision file as SVG.
    Render {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Draw the intermediate subdivision around this point, given as `x,y`.
        #[arg(long, value_parser = parse_point)]
        subdivide_at: Option<LatticePoint>,
    },
}

fn parse_point(s: &str) -> std::result::Result<LatticePoint, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, found {s:?}"))?;
    let n = |v: &str| v.trim().parse::<i64>().map_err(|_| format!("expected an integer, found {v:?}"));
    Ok(LatticePoint::new(n(x)?, n(y)?))
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let reports = match cli.command {
        Command::Census { g, d_max } => vec![commands::census(g, d_max, cli.max_area)],
        Command::Triangulate { inputs, regular_only } => {
            commands::for_each_input(&inputs, |p| commands::triangulate(p, regular_only, cli.max_area))?
        }
        Command::Check { inputs, k } => commands::for_each_input(&inputs, |p| commands::check(p, k))?,
        Command::ClassifyDelightful { inputs, kmax } => {
            commands::for_each_input(&inputs, |p| commands::classify_delightful(p, kmax, cli.max_area))?
        }
        Command::Render { input, out, subdivide_at } => vec![commands::render(&input, &out, subdivide_at)],
    };
    let mut stdout = std::io::stdout().lock();
    for r in &reports {
        stdout.write_all(r.render(cli.format).as_bytes()).context("writing report")?;
    }
    let failed = reports.iter().any(|r| r.failed());
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}
