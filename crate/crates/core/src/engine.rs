//! The per-block pipeline shared by offline simulation and live sessions:
//! detection → fusion or dead reckoning → smoothing → audio logic → mix.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::audio_logic::{
    arm_sequences, choose_attractor, occlusion_params, select_content, source_azimuth, source_gain,
    update_zone, AttractorContext, ClipSlot, Content, PlaybackMode, SoundSource, Tag, ZonePhase,
    ZoneState,
};
use crate::error::Result;
use crate::events::{EngagementEvent, EventKind};
use crate::geometry::{los_blocked, wrap_angle, Pose2D, Vec2};
use crate::positioning::{
    dead_reckon, fuse_detections, simulate_detections, Odometry, PoseEstimate, PoseSmoother,
    TrackingMode,
};
use crate::renderer::{pan_gains, ClipBank, Mixer, RenderBlock, VoiceParams};
use crate::rng::{seeded, SimRng};
use crate::scene::Scene;

/// Output of one control tick.
#[derive(Debug, Clone)]
pub struct Tick {
    pub block: RenderBlock,
    pub events: Vec<EngagementEvent>,
}

/// Per-source view of the last tick.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceStatus {
    pub id: String,
    pub phase: &'static str,
    pub armed: bool,
    pub distance: f64,
    /// Distance law times occlusion, before panning and content weights.
    pub gain: f64,
    pub azimuth: f64,
    pub blocked: bool,
    pub lowpass: bool,
    /// Content weights while ACTIVE, empty otherwise.
    #[serde(skip)]
    pub weights: Vec<(ClipSlot, f64)>,
}

/// Everything a client needs to mirror the engine after a tick.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineSnapshot {
    pub t: f64,
    pub rendered: Pose2D,
    pub true_pose: Pose2D,
    pub estimate: Pose2D,
    pub mode: &'static str,
    pub confidence: f64,
    pub blending: bool,
    pub sources: Vec<SourceStatus>,
    pub armed: Vec<String>,
    pub attractor: Option<String>,
    pub clip_count: u64,
}

#[derive(Debug, Clone)]
struct ActiveAttractor {
    source_id: String,
    playhead: u64,
}

pub struct Engine {
    scene: Scene,
    bank: ClipBank,
    rng: SimRng,
    estimate: PoseEstimate,
    smoother: PoseSmoother,
    true_pose: Pose2D,
    zones: BTreeMap<String, ZoneState>,
    completed: BTreeSet<String>,
    armed: BTreeSet<String>,
    last_attractor: BTreeMap<String, f64>,
    thematic_active_at: f64,
    attractor: Option<ActiveAttractor>,
    mixer: Mixer,
    ambient_gain: Option<f64>,
    detections_enabled: bool,
    block_index: u64,
    mode_logged: Option<TrackingMode>,
    next_pose_sample: u64,
    status: Vec<SourceStatus>,
}

impl Engine {
    /// Starts a session at `initial` (known start pose, no detections yet).
    pub fn new(scene: Scene, seed: u64, initial: Pose2D) -> Result<Engine> {
        let bank = ClipBank::load(&scene)?;
        Ok(Engine::with_bank(scene, bank, seed, initial))
    }

    pub fn with_bank(scene: Scene, bank: ClipBank, seed: u64, initial: Pose2D) -> Engine {
        let params = &scene.params;
        let mixer = Mixer::new(params.sample_rate, params.block);
        let ambient_gain = scene.ambient.as_ref().map(|a| a.gain);
        let mut engine = Engine {
            bank,
            rng: seeded(seed),
            estimate: PoseEstimate::initial(initial, 0.0),
            smoother: PoseSmoother::new(initial),
            true_pose: initial,
            zones: BTreeMap::new(),
            completed: BTreeSet::new(),
            armed: BTreeSet::new(),
            last_attractor: BTreeMap::new(),
            thematic_active_at: 0.0,
            attractor: None,
            mixer,
            ambient_gain,
            detections_enabled: true,
            block_index: 0,
            mode_logged: None,
            next_pose_sample: 0,
            status: Vec::new(),
            scene,
        };
        engine.sort_sources();
        engine
    }

    fn sort_sources(&mut self) {
        self.scene.sources.sort_by(|a, b| a.id.cmp(&b.id));
        for s in &self.scene.sources {
            self.zones.entry(s.id.clone()).or_default();
        }
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    /// Replaces the scene at the next block boundary. Zone state is kept for
    /// sources whose id survives.
    pub fn replace_scene(&mut self, scene: Scene) -> Result<()> {
        self.bank.refresh(&scene)?;
        self.scene = scene;
        let ids: BTreeSet<String> = self.scene.sources.iter().map(|s| s.id.clone()).collect();
        self.zones.retain(|k, _| ids.contains(k));
        self.completed.retain(|k| ids.contains(k));
        if self
            .attractor
            .as_ref()
            .is_some_and(|a| !ids.contains(&a.source_id))
        {
            self.attractor = None;
        }
        self.ambient_gain = self.scene.ambient.as_ref().map(|a| a.gain);
        self.sort_sources();
        Ok(())
    }

    /// Swaps in an edited source with the same id.
    pub fn update_source(&mut self, source: SoundSource) -> Result<()> {
        let mut scene = self.scene.clone();
        match scene.source_mut(&source.id) {
            Some(s) => *s = source,
            None => scene.sources.push(source),
        }
        scene.validate()?;
        self.replace_scene(scene)
    }

    pub fn set_ambient_gain(&mut self, gain: f64) {
        self.ambient_gain = Some(gain.clamp(0.0, 2.0));
    }

    pub fn ambient_gain(&self) -> Option<f64> {
        self.ambient_gain
    }

    /// Places the listener at a known pose, as at session start: the estimate
    /// and the rendered pose jump there without smoothing.
    pub fn reset_pose(&mut self, pose: Pose2D) {
        self.estimate = PoseEstimate::initial(pose, self.time());
        self.smoother.reset(pose);
        self.true_pose = pose;
    }

    /// Disabling detections simulates a camera blackout.
    pub fn set_detections_enabled(&mut self, enabled: bool) {
        self.detections_enabled = enabled;
    }

    pub fn block_duration(&self) -> f64 {
        self.scene.params.block_duration()
    }

    /// Start time of the next block.
    pub fn time(&self) -> f64 {
        self.block_time(self.block_index)
    }

    fn block_time(&self, index: u64) -> f64 {
        (index * self.scene.params.block as u64) as f64 / f64::from(self.scene.params.sample_rate)
    }

    pub fn estimate(&self) -> &PoseEstimate {
        &self.estimate
    }

    pub fn rendered_pose(&self) -> Pose2D {
        self.smoother.rendered()
    }

    pub fn true_pose(&self) -> Pose2D {
        self.true_pose
    }

    pub fn clip_count(&self) -> u64 {
        self.mixer.clip_count()
    }

    pub fn zone(&self, id: &str) -> Option<&ZoneState> {
        self.zones.get(id)
    }

    pub fn source_status(&self) -> &[SourceStatus] {
        &self.status
    }

    pub fn snapshot(&self) -> EngineSnapshot {
        EngineSnapshot {
            t: self.block_time(self.block_index.saturating_sub(1)),
            rendered: self.smoother.rendered(),
            true_pose: self.true_pose,
            estimate: self.estimate.pose,
            mode: self.estimate.mode.as_str(),
            confidence: self.estimate.confidence,
            blending: self.smoother.is_blending(),
            sources: if self.status.is_empty() {
                self.scene
                    .sources
                    .iter()
                    .map(|s| SourceStatus {
                        id: s.id.clone(),
                        phase: ZonePhase::Idle.as_str(),
                        armed: false,
                        distance: self.true_pose.position().dist(s.position),
                        gain: 0.0,
                        azimuth: 0.0,
                        blocked: false,
                        lowpass: false,
                        weights: Vec::new(),
                    })
                    .collect()
            } else {
                self.status.clone()
            },
            armed: self.armed.iter().cloned().collect(),
            attractor: self.attractor.as_ref().map(|a| a.source_id.clone()),
            clip_count: self.mixer.clip_count(),
        }
    }

    /// Advances live mode: odometry is the change in client pose since the
    /// previous block.
    pub fn tick_pose(&mut self, true_pose: Pose2D) -> Tick {
        let odo = if self.block_index == 0 {
            Odometry {
                delta_pos: Vec2::ZERO,
                delta_heading: 0.0,
                dt: 0.0,
            }
        } else {
            Odometry {
                delta_pos: true_pose.position() - self.true_pose.position(),
                delta_heading: wrap_angle(true_pose.heading - self.true_pose.heading),
                dt: self.block_duration(),
            }
        };
        self.tick(true_pose, odo)
    }

    /// Runs one block at [`Engine::time`].
    pub fn tick(&mut self, true_pose: Pose2D, odo: Odometry) -> Tick {
        let t = self.time();
        let dt = self.block_duration();
        let params = self.scene.params.clone();
        let mut events = Vec::new();
        self.true_pose = true_pose;

        // positioning
        let detections = if self.detections_enabled {
            simulate_detections(&true_pose, &self.scene, &params, &mut self.rng, t)
        } else {
            Vec::new()
        };
        self.estimate = if detections.is_empty() {
            dead_reckon(&self.estimate, &odo, &params, &mut self.rng)
        } else {
            // detections only name anchors of this scene
            fuse_detections(&detections, &self.scene).expect("detected anchors exist")
        };
        self.estimate.t = t;
        if self.mode_logged != Some(self.estimate.mode) {
            let from = self.mode_logged.map(TrackingMode::as_str);
            events.push(
                EngagementEvent::new(t, EventKind::ModeChange)
                    .with("from", from)
                    .with("to", self.estimate.mode.as_str()),
            );
            self.mode_logged = Some(self.estimate.mode);
        }
        let rendered = self.smoother.step(&self.estimate.pose, dt, &params);
        let listener = rendered.position();

        // audio logic
        self.armed = arm_sequences(&self.scene.sequences, &self.completed, &self.scene.sources);
        let mut voices = Vec::new();
        let mut status = Vec::with_capacity(self.scene.sources.len());
        for src in &self.scene.sources {
            let d = listener.dist(src.position);
            let blocked = d > 0.0 && los_blocked(listener, src.position, &self.scene.occluders);
            let (occ_gain, lowpass) = occlusion_params(blocked);
            let gain = source_gain(d, src) * occ_gain;
            let azimuth = source_azimuth(&rendered, src.position);
            let armed = self.armed.contains(&src.id);
            let clip_len = self.bank.content_len(&self.scene, &src.content);

            let zone = self.zones.entry(src.id.clone()).or_default();
            if armed {
                let (next, evs) = update_zone(zone, d, src, clip_len, t);
                *zone = next;
                events.extend(evs);
                if zone.phase == ZonePhase::Completed {
                    self.completed.insert(src.id.clone());
                }
            }
            let active = armed && zone.phase == ZonePhase::Active;
            if active && src.tag == Tag::Thematic {
                self.thematic_active_at = t;
            }

            let mut weights = Vec::new();
            if active {
                weights = match &src.content {
                    Content::Clip(_) => vec![(ClipSlot::Band(0), 1.0)],
                    Content::Selector(sel) => {
                        select_content(sel, d, src.position.bearing_to(listener))
                    }
                };
                let (pl, pr) = pan_gains(azimuth);
                for &(slot, w) in &weights {
                    let (clip, key, looping) = match (&src.content, slot) {
                        (Content::Clip(c), _) => (
                            c,
                            format!("{}/band0", src.id),
                            src.mode == PlaybackMode::Loop,
                        ),
                        (Content::Selector(sel), ClipSlot::Band(i)) => (
                            &sel.clips[i],
                            format!("{}/band{i}", src.id),
                            src.mode == PlaybackMode::Loop,
                        ),
                        (Content::Selector(sel), ClipSlot::Interstitial) => (
                            &sel.interstitial
                                .as_ref()
                                .expect("interstitial weight implies clip")
                                .clip,
                            format!("{}/interstitial", src.id),
                            true,
                        ),
                    };
                    if let Some(section) = self.bank.section(&self.scene, clip) {
                        voices.push(VoiceParams {
                            key,
                            section,
                            playhead: zone.playhead,
                            looping,
                            gain_l: gain * w * pl,
                            gain_r: gain * w * pr,
                            lowpass,
                        });
                    }
                }
            }
            status.push(SourceStatus {
                id: src.id.clone(),
                phase: zone.phase.as_str(),
                armed,
                distance: d,
                gain,
                azimuth,
                blocked,
                lowpass,
                weights,
            });
        }

        // attractor
        if self.attractor.is_none() {
            let ctx = AttractorContext {
                t,
                listener: rendered,
                thematic_active_at: self.thematic_active_at,
                armed: &self.armed,
                completed: &self.completed,
                last_attractor: &self.last_attractor,
            };
            if let Some(id) = choose_attractor(&ctx, &self.scene.sources, &params) {
                let src = self.scene.source(&id).expect("chosen source exists");
                events.push(EngagementEvent::for_source(
                    t,
                    EventKind::AttractorStart,
                    &id,
                    src.tag,
                ));
                self.last_attractor.insert(id.clone(), t);
                self.attractor = Some(ActiveAttractor {
                    source_id: id,
                    playhead: 0,
                });
            }
        }
        let mut attractor_len = 0;
        if let Some(a) = &self.attractor {
            let src = self
                .scene
                .source(&a.source_id)
                .expect("attractor source exists");
            let st = status
                .iter()
                .find(|s| s.id == a.source_id)
                .expect("status per source");
            let clip = src.attractor_clip.as_ref();
            if let Some(section) = clip.and_then(|c| self.bank.section(&self.scene, c)) {
                attractor_len = section.len() as u64;
                let (pl, pr) = pan_gains(st.azimuth);
                voices.push(VoiceParams {
                    key: format!("{}/attractor", src.id),
                    section,
                    playhead: a.playhead,
                    looping: false,
                    gain_l: st.gain * pl,
                    gain_r: st.gain * pr,
                    lowpass: st.lowpass,
                });
            }
        }

        // 1 Hz pose samples, at the first block of each second
        if t >= self.next_pose_sample as f64 {
            events.push(self.pose_event(t, &rendered));
            self.next_pose_sample = t.floor() as u64 + 1;
        }

        let ambient = match (&self.scene.ambient, self.ambient_gain) {
            (Some(a), Some(g)) => self.bank.section(&self.scene, &a.clip).map(|s| (s, g)),
            _ => None,
        };
        let block = self
            .mixer
            .render_block(&voices, ambient.as_ref().map(|(s, g)| (s, *g)), t);

        let frames = params.block as u64;
        for src in &self.scene.sources {
            let len = self.bank.content_len(&self.scene, &src.content);
            if let Some(z) = self.zones.get_mut(&src.id) {
                z.advance(frames, len, src.mode);
            }
        }
        if let Some(a) = &mut self.attractor {
            a.playhead += frames;
            if a.playhead >= attractor_len {
                self.attractor = None;
            }
        }
        self.status = status;
        self.block_index += 1;
        Tick { block, events }
    }

    fn pose_event(&self, t: f64, rendered: &Pose2D) -> EngagementEvent {
        EngagementEvent::new(t, EventKind::Pose)
            .with("x", rendered.x)
            .with("y", rendered.y)
            .with("h_deg", rendered.heading.to_degrees())
            .with("true_x", self.true_pose.x)
            .with("true_y", self.true_pose.y)
            .with("mode", self.estimate.mode.as_str())
            .with("confidence", self.estimate.confidence)
            .with("clipped", self.mixer.clip_count())
    }

    /// Closing pose record at `t`, marking the end of a run.
    pub fn final_event(&self, t: f64) -> EngagementEvent {
        self.pose_event(t, &self.smoother.rendered())
            .with("final", true)
    }
}
