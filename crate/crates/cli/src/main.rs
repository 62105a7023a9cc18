//! `diffcoh`: runs one computation on a scene file and writes `report.json`
//! plus a CSV convergence table.
//!
//! Exit codes: 0 success, 2 domain or parse error, 3 numeric error,
//! 4 inconclusive certificate.

mod commands;
mod scene;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use diffcoh::groupcoc::Resolution;
use diffcoh::Error;
use serde::Serialize;
use serde_json::Value;

use commands::{Command, Context, Status};
use scene::Scene;

const SCHEMA: u32 = 1;
const DEFAULT_GRID: (usize, usize) = (32, 64);

#[derive(Debug, Parser)]
#[command(
    name = "diffcoh",
    version,
    about = "Cohomological invariants of diffeomorphism groups of tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scene file (JSON).
    #[arg(long, global = true)]
    scene: Option<PathBuf>,
    /// Directory for report.json and convergence.csv.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Coarse and fine grid sides, e.g. 64,128.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<Resolution>,
    /// Seed for random scene entries; overrides the scene's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write only report.json and print it instead of a summary.
    #[arg(long, global = true)]
    json_only: bool,
}

fn parse_grid(s: &str) -> Result<Resolution, String> {
    let (c, f) = s.split_once(',').ok_or("expected COARSE,FINE")?;
    let c = c.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let f = f.trim().parse::<usize>().map_err(|e| e.to_string())?;
    Resolution::new(c, f).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Inputs<'a> {
    scene_path: Option<String>,
    scene: &'a Scene,
    grid: Resolution,
    seed: u64,
}

#[derive(Serialize)]
struct Report<'a> {
    schema: u32,
    subcommand: &'a str,
    inputs: Inputs<'a>,
    value: Value,
    error_estimate: f64,
    convention_tag: String,
    seed: u64,
    wall_time: f64,
    details: Value,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_domain() {
        2
    } else {
        3
    }
}

fn run(cli: &Cli) -> Result<Status, (u8, String)> {
    let fail = |e: Error| (exit_code(&e), e.to_string());
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| (2, e.to_string()))?;
    }
    let start = Instant::now();
    let scene = commands::scene_for(cli.command, cli.scene.as_deref()).map_err(fail)?;
    let res = match (cli.grid, scene.grid) {
        (Some(r), _) => r,
        (None, Some(g)) => Resolution::new(g.coarse, g.fine).map_err(fail)?,
        (None, None) => Resolution::new(DEFAULT_GRID.0, DEFAULT_GRID.1).map_err(fail)?,
    };
    let seed = cli.seed.unwrap_or(scene.seed);
    let ctx = Context {
        scene: &scene,
        res,
        seed,
    };
    let out = commands::run(cli.command, &ctx).map_err(fail)?;
    let report = Report {
        schema: SCHEMA,
        subcommand: cli.command.name(),
        inputs: Inputs {
            scene_path: cli.scene.as_ref().map(|p| p.display().to_string()),
            scene: &scene,
            grid: res,
            seed,
        },
        value: out.value.clone(),
        error_estimate: out.error_estimate,
        convention_tag: out.convention_tag.clone(),
        seed,
        wall_time: start.elapsed().as_secs_f64(),
        details: out.details.clone(),
    };
    let io = |e: std::io::Error| (2, format!("{}: {e}", cli.out.display()));
    std::fs::create_dir_all(&cli.out).map_err(io)?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| (3, e.to_string()))? + "\n";
    std::fs::write(cli.out.join("report.json"), &text).map_err(io)?;
    if cli.json_only {
        print!("{text}");
    } else {
        if let Some(t) = &out.table {
            std::fs::write(cli.out.join("convergence.csv"), t.to_csv()).map_err(io)?;
        }
        println!(
            "{}: value = {} (error estimate {:.3e}) [{}]",
            report.subcommand, report.value, report.error_estimate, report.convention_tag
        );
        match out.status {
            Status::Inconclusive => println!("certificate inconclusive"),
            Status::Failed => println!("self-test failed: {}", report.details),
            Status::Ok => {}
        }
    }
    Ok(out.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Inconclusive) => ExitCode::from(4),
        Ok(Status::Failed) => ExitCode::from(3),
        Err((code, msg)) => {
            eprintln!("diffcoh: {msg}");
            ExitCode::from(code)
        }
    }
}
