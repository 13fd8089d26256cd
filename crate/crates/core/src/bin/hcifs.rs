use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use hypercomplex_ifs::cli_io::{lipschitz_report, run_scene, scene_from_value, SceneConfig};
use hypercomplex_ifs::Error;

/// Attractors of hypercomplex iterated function systems.
#[derive(Parser)]
#[command(name = "hcifs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a scene file.
    Validate { scene: PathBuf },
    /// Print Lipschitz constants and the invariant ball of a scene.
    Lipschitz { scene: PathBuf },
    /// Run the scene's engine and write its outputs.
    Render {
        scene: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

enum Failure {
    Validation(String),
    Engine(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Engine(e.to_string())
        }
    }
}

fn load(path: &Path, seed: Option<u64>, threads: Option<usize>) -> Result<SceneConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| {
        Failure::from(Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    })?;
    if seed.is_some() || threads.is_some() {
        let root = value
            .as_object_mut()
            .ok_or_else(|| Failure::Validation("scene must be a JSON object".into()))?;
        let engine = root
            .entry("engine")
            .or_insert_with(|| Value::Object(Default::default()));
        let engine = engine
            .as_object_mut()
            .ok_or_else(|| Failure::Validation("scene error at `engine`: expected an object".into()))?;
        if let Some(s) = seed {
            engine.insert("seed".into(), s.into());
        }
        if let Some(t) = threads {
            engine.insert("threads".into(), t.into());
        }
    }
    let cfg = scene_from_value(value)?;
    cfg.validate()?;
    Ok(cfg)
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { scene } => {
            let cfg = load(&scene, None, None)?;
            println!("ok: dimension {}, {} output(s)", cfg.dim()?, cfg.outputs.len());
        }
        Command::Lipschitz { scene } => {
            let cfg = load(&scene, None, None)?;
            println!("{}", pretty(&lipschitz_report(&cfg)?));
        }
        Command::Render {
            scene,
            seed,
            threads,
            out_dir,
        } => {
            let cfg = load(&scene, seed, threads)?;
            std::fs::create_dir_all(&out_dir).map_err(|e| Failure::Engine(e.to_string()))?;
            let report = pretty(&run_scene(&cfg, &out_dir)?);
            std::fs::write(out_dir.join("report.json"), format!("{report}\n"))
                .map_err(|e| Failure::Engine(e.to_string()))?;
            println!("{report}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
