//! Offline runs: walk script in, WAV and JSONL event log out.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analytics::{accumulate_report, write_report, EngagementReport};
use crate::engine::{Engine, Tick};
use crate::error::{Error, Result};
use crate::events::EngagementEvent;
use crate::geometry::{wrap_angle, Vec2};
use crate::positioning::Odometry;
use crate::renderer::WavWriter;
use crate::scene::Scene;
use crate::walk::WalkScript;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scene: PathBuf,
    pub walk: PathBuf,
    pub seed: u64,
    /// Defaults to the last keyframe time.
    pub duration: Option<f64>,
    pub wav: PathBuf,
    pub log: PathBuf,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub blocks: u64,
    pub frames: u64,
    /// Rendered duration, a whole number of blocks.
    pub duration: f64,
    pub clip_count: u64,
    pub report: EngagementReport,
}

/// True motion between two walk times, noise-free.
pub fn derive_odometry(walk: &WalkScript, t_prev: f64, t_now: f64) -> Odometry {
    let a = walk.pose_at(t_prev);
    let b = walk.pose_at(t_now);
    Odometry {
        delta_pos: b.position() - a.position(),
        delta_heading: wrap_angle(b.heading - a.heading),
        dt: t_now - t_prev,
    }
}

/// Number of blocks needed to cover `duration` seconds.
pub fn block_count(duration: f64, sample_rate: u32, block: usize) -> u64 {
    (duration * f64::from(sample_rate) / block as f64).ceil() as u64
}

/// A run advanced one block at a time.
pub struct Simulation {
    engine: Engine,
    walk: WalkScript,
    total_blocks: u64,
    done: u64,
    prev_t: f64,
}

impl Simulation {
    pub fn new(scene: Scene, walk: WalkScript, seed: u64, duration: Option<f64>) -> Result<Self> {
        let duration = duration.unwrap_or_else(|| walk.end_time());
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::validation(
                "duration",
                format!("must be positive, got {duration}"),
            ));
        }
        let p = &scene.params;
        let total_blocks = block_count(duration, p.sample_rate, p.block);
        let engine = Engine::new(scene, seed, walk.pose_at(0.0))?;
        Ok(Simulation {
            engine,
            walk,
            total_blocks,
            done: 0,
            prev_t: 0.0,
        })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn engine_mut(&mut self) -> &mut Engine {
        &mut self.engine
    }

    pub fn walk(&self) -> &WalkScript {
        &self.walk
    }

    pub fn total_blocks(&self) -> u64 {
        self.total_blocks
    }

    pub fn blocks_done(&self) -> u64 {
        self.done
    }

    /// Runs the next block, or returns `None` once the run is complete.
    pub fn step(&mut self) -> Option<Tick> {
        if self.done == self.total_blocks {
            return None;
        }
        let t = self.engine.time();
        let odo = if self.done == 0 {
            Odometry {
                delta_pos: Vec2::ZERO,
                delta_heading: 0.0,
                dt: 0.0,
            }
        } else {
            derive_odometry(&self.walk, self.prev_t, t)
        };
        let tick = self.engine.tick(self.walk.pose_at(t), odo);
        self.prev_t = t;
        self.done += 1;
        Some(tick)
    }

    /// The closing pose record; its timestamp is the rendered end of the run.
    pub fn final_event(&self) -> EngagementEvent {
        self.engine.final_event(self.engine.time())
    }
}

/// Runs a whole simulation in memory, returning the stereo frames and the
/// event log including the closing record.
pub fn simulate_in_memory(
    scene: Scene,
    walk: WalkScript,
    seed: u64,
    duration: Option<f64>,
) -> Result<(Vec<[f32; 2]>, Vec<EngagementEvent>)> {
    let mut sim = Simulation::new(scene, walk, seed, duration)?;
    let mut frames = Vec::new();
    let mut events = Vec::new();
    while let Some(tick) = sim.step() {
        frames.extend_from_slice(&tick.block.frames);
        events.extend(tick.events);
    }
    events.push(sim.final_event());
    Ok((frames, events))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Loads the scene and walk named by `cfg`, renders the run and writes its
/// outputs.
pub fn run_simulation(cfg: &RunConfig) -> Result<RunSummary> {
    let scene = Scene::load(&cfg.scene)?;
    let walk = WalkScript::load(&cfg.walk)?;
    let rate = scene.params.sample_rate;
    let mut sim = Simulation::new(scene, walk, cfg.seed, cfg.duration)?;

    let wav_err = |e| Error::io(&cfg.wav, e);
    let log_err = |e| Error::io(&cfg.log, e);
    let mut wav = WavWriter::new(create(&cfg.wav)?, rate).map_err(wav_err)?;
    let mut log = create(&cfg.log)?;
    let mut log_text = String::new();
    let mut frames = 0u64;
    let mut emit = |log: &mut BufWriter<File>, ev: &EngagementEvent| -> Result<()> {
        let line = ev.to_json_line();
        writeln!(log, "{line}").map_err(log_err)?;
        log_text.push_str(&line);
        log_text.push('\n');
        Ok(())
    };
    while let Some(tick) = sim.step() {
        wav.write_frames(&tick.block.frames).map_err(wav_err)?;
        frames += tick.block.frames.len() as u64;
        for ev in &tick.events {
            emit(&mut log, ev)?;
        }
    }
    emit(&mut log, &sim.final_event())?;
    wav.finish().and_then(|mut w| w.flush()).map_err(wav_err)?;
    log.flush().map_err(log_err)?;

    let report = accumulate_report(&log_text)?;
    if let Some(path) = &cfg.report {
        let mut out = create(path)?;
        write_report(&report, &mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))?;
    }
    Ok(RunSummary {
        blocks: sim.blocks_done(),
        frames,
        duration: sim.engine().time(),
        clip_count: sim.engine().clip_count(),
        report,
    })
}
