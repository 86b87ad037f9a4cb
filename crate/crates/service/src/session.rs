//! One live engine session, advanced one block at a time by its owner.

use std::sync::Arc;

use aar_core::renderer::RenderBlock;
use aar_core::{EngagementEvent, Engine, Pose2D};
use serde_json::Value;

use crate::protocol::{encode_state, merge_source, Control, SessionClock};
use crate::store::SceneStore;

/// What one block produced.
#[derive(Debug, Clone)]
pub struct BlockOutput {
    pub seq: u32,
    pub frames: Vec<[f32; 2]>,
    pub virtual_rms: f64,
    pub ambient_rms: f64,
    pub events: Vec<EngagementEvent>,
    /// Failures from applying queued controls.
    pub errors: Vec<String>,
}

pub struct Session {
    engine: Engine,
    store: Arc<SceneStore>,
    pending: Vec<Control>,
    listener: Option<Pose2D>,
    seq: u32,
}

impl Session {
    /// Starts from the store's current scene. The engine stays parked, and
    /// the audio silent, until the client places the listener.
    pub fn new(store: Arc<SceneStore>, seed: u64) -> Session {
        let (scene, bank) = store.template();
        let engine = Engine::with_bank(scene, bank, seed, Pose2D::default());
        Session {
            engine,
            store,
            pending: Vec::new(),
            listener: None,
            seq: 0,
        }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    /// Next audio sequence number.
    pub fn seq(&self) -> u32 {
        self.seq
    }

    /// Queues a control for the next block boundary.
    pub fn queue(&mut self, control: Control) {
        self.pending.push(control);
    }

    pub fn clock(&self) -> SessionClock {
        let block = self.engine.scene().params.block as f64;
        let rate = f64::from(self.engine.scene().params.sample_rate);
        SessionClock {
            t: f64::from(self.seq) * block / rate,
            seq: self.seq,
            placed: self.listener.is_some(),
            ambient_gain: self.engine.ambient_gain(),
        }
    }

    pub fn state(&self) -> Value {
        encode_state(&self.engine.snapshot(), self.clock())
    }

    fn apply(&mut self, control: Control) -> Result<(), String> {
        match control {
            Control::PoseSet { .. } => {
                let pose = control.pose().expect("pose control");
                if self.listener.is_none() {
                    self.engine.reset_pose(pose);
                }
                self.listener = Some(pose);
            }
            Control::EditSource { id, fields } => {
                let current = self
                    .engine
                    .scene()
                    .source(&id)
                    .ok_or_else(|| format!("unknown source \"{id}\""))?;
                let edited = merge_source(current, &fields).map_err(|e| e.to_string())?;
                self.engine
                    .update_source(edited.clone())
                    .map_err(|e| e.to_string())?;
                self.store.update_source(edited);
            }
            Control::SetAmbientGain { gain } => {
                self.engine.set_ambient_gain(gain);
                self.store.set_ambient_gain(gain);
            }
            Control::SnapshotRequest => {}
        }
        Ok(())
    }

    /// Applies queued controls, then renders one block.
    pub fn next_block(&mut self) -> BlockOutput {
        let errors = std::mem::take(&mut self.pending)
            .into_iter()
            .filter_map(|c| self.apply(c).err())
            .collect();
        let (block, events) = match self.listener {
            Some(pose) => {
                let tick = self.engine.tick_pose(pose);
                (tick.block, tick.events)
            }
            None => {
                let n = self.engine.scene().params.block;
                let block = RenderBlock {
                    frames: vec![[0.0; 2]; n],
                    t_start: self.clock().t,
                    virtual_rms: 0.0,
                    ambient_rms: 0.0,
                    clipped: 0,
                };
                (block, Vec::new())
            }
        };
        let seq = self.seq;
        self.seq = self.seq.wrapping_add(1);
        BlockOutput {
            seq,
            frames: block.frames,
            virtual_rms: block.virtual_rms,
            ambient_rms: block.ambient_rms,
            events,
            errors,
        }
    }
}
