use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use ufg_core::map::level::{render_svg, LevelDocument};
use ufg_core::sim::{run_experiment, write_csv, ExperimentConfig};
use ufg_core::store::SessionStore;

#[derive(Parser)]
#[command(name = "ufg", version, about = "Urban FPS level generator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Session directory; UFG_DATA takes precedence when set.
        #[arg(long, default_value = "ufg-data")]
        data: PathBuf,
    },
    /// Render an exported level as a top-down SVG.
    Render {
        #[arg(long)]
        level: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Run the simulated-designer experiment and write per-run CSV.
    Experiment {
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value_t = 10, value_parser = iterations)]
        iterations: usize,
        #[arg(long, value_enum, default_value_t = Assist::Both)]
        assist: Assist,
        #[arg(long, default_value_t = 0.02)]
        noise: f64,
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
    },
}

fn iterations(s: &str) -> Result<usize, String> {
    match s {
        "10" => Ok(10),
        "20" => Ok(20),
        _ => Err("iterations must be 10 or 20".into()),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Assist {
    On,
    Off,
    Both,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Serve { port, data } => {
            let data = std::env::var_os("UFG_DATA").map(PathBuf::from).unwrap_or(data);
            let store = Arc::new(SessionStore::open(&data)?);
            eprintln!("loaded {} sessions from {}", store.len(), data.display());
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
                eprintln!("listening on {}", listener.local_addr()?);
                axum::serve(listener, ufg_service::router(store))
                    .with_graceful_shutdown(async {
                        let _ = tokio::signal::ctrl_c().await;
                    })
                    .await
            })?;
        }
        Command::Render { level, svg } => {
            let doc = LevelDocument::from_json(&std::fs::read_to_string(&level)?)?;
            std::fs::write(&svg, render_svg(&doc.to_layout()?))?;
        }
        Command::Experiment { seeds, iterations, assist, noise, out } => {
            let arms = match assist {
                Assist::On => vec![true],
                Assist::Off => vec![false],
                Assist::Both => vec![false, true],
            };
            let config = ExperimentConfig {
                seeds: (1..=seeds).collect(),
                arms,
                max_iterations: iterations,
                noise_sigma: noise,
                ..Default::default()
            };
            let result = run_experiment(&config)?;
            write_csv(&result.runs, BufWriter::new(File::create(&out)?))?;
            for arm in &result.arms {
                println!(
                    "assist {:>3}: median human rounds {}, median generations {}, median final distance {:.4}, converged {}/{}",
                    if arm.assist { "on" } else { "off" },
                    arm.median_human_rounds,
                    arm.median_generations,
                    arm.median_final_distance,
                    arm.converged,
                    arm.runs
                );
            }
        }
    }
    Ok(())
}
