//! `aar`: validate scenes, render walks offline, summarize run logs and
//! serve live preview sessions.
//!
//! Exit codes: 0 success, 1 invalid input, 2 usage, 3 I/O.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use aar_core::{accumulate_report, write_report, Error, RunConfig, Scene};
use aar_service::ServiceError;
use clap::{Parser, Subcommand};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "aar", version, about = "Audio augmented reality scene engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a scene and check every invariant, including clip files.
    Validate { scene: PathBuf },
    /// Render a scripted walk to a stereo WAV plus an event log.
    Simulate {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        walk: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Seconds to render; defaults to the walk's last keyframe.
        #[arg(long, value_parser = positive_seconds)]
        duration: Option<f64>,
    },
    /// Summarize an event log as CSV. `--out -` writes to stdout.
    Report {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve live sessions over WebSocket on 127.0.0.1.
    Serve {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        port: u16,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!(
            "expected a positive number of seconds, got \"{s}\""
        )),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_validation() {
        EXIT_INVALID
    } else {
        EXIT_IO
    })
}

fn validate(path: PathBuf) -> ExitCode {
    match Scene::load(&path) {
        Ok(scene) => {
            eprintln!(
                "{}: ok ({} anchors, {} sources, {} occluders)",
                path.display(),
                scene.anchors.len(),
                scene.sources.len(),
                scene.occluders.len()
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn simulate(cfg: RunConfig) -> ExitCode {
    match aar_core::run_simulation(&cfg) {
        Ok(s) => {
            eprintln!(
                "rendered {:.3} s ({} blocks) to {}, log {}, clipped samples {}",
                s.duration,
                s.blocks,
                cfg.wav.display(),
                cfg.log.display(),
                s.clip_count
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn report(log: PathBuf, out: PathBuf) -> ExitCode {
    let text = match fs::read_to_string(&log) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", log.display());
            return ExitCode::from(EXIT_IO);
        }
    };
    let r = match accumulate_report(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", log.display());
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let written = if out.as_os_str() == "-" {
        let mut stdout = io::stdout().lock();
        write_report(&r, &mut stdout).and_then(|_| stdout.flush())
    } else {
        fs::File::create(&out).and_then(|mut f| write_report(&r, &mut f).and_then(|_| f.flush()))
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", out.display());
            ExitCode::from(EXIT_IO)
        }
    }
}

fn serve(scene: PathBuf, port: u16, seed: u64) -> ExitCode {
    let scene = match Scene::load(&scene) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO);
        }
    };
    let result = runtime.block_on(async {
        let state = aar_service::AppState::new(scene, seed)?;
        let listener = aar_service::bind(port).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        aar_service::serve(listener, state).await
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(ServiceError::Scene(e)) => fail(&e),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(if code == 0 { 0 } else { EXIT_USAGE });
        }
    };
    match cli.command {
        Command::Validate { scene } => validate(scene),
        Command::Simulate {
            scene,
            walk,
            seed,
            out,
            log,
            report,
            duration,
        } => simulate(RunConfig {
            scene,
            walk,
            seed,
            duration,
            wav: out,
            log,
            report,
        }),
        Command::Report { log, out } => report(log, out),
        Command::Serve { scene, port, seed } => serve(scene, port, seed),
    }
}
