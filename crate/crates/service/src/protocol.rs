//! Wire format shared by the preview UI and scripted clients.
//!
//! Text frames carry JSON objects with a `type` field. Audio travels in
//! binary frames: tag byte 0x01, little-endian u32 sequence number, then one
//! block of interleaved 16-bit little-endian stereo PCM.

use aar_core::renderer::encode_pcm16;
use aar_core::scene::{source_from_value, source_to_value};
use aar_core::{EngagementEvent, EngineSnapshot, Pose2D, SoundSource};
use serde_json::{json, Map, Value};

pub const AUDIO_TAG: u8 = 0x01;
pub const AUDIO_HEADER_LEN: usize = 5;

/// A client request, applied at the next block boundary except for
/// `SnapshotRequest`, which is answered at once.
#[derive(Debug, Clone, PartialEq)]
pub enum Control {
    PoseSet {
        x: f64,
        y: f64,
        h_deg: f64,
    },
    EditSource {
        id: String,
        fields: Map<String, Value>,
    },
    SetAmbientGain {
        gain: f64,
    },
    SnapshotRequest,
}

impl Control {
    pub fn pose(&self) -> Option<Pose2D> {
        match *self {
            Control::PoseSet { x, y, h_deg } => Some(Pose2D::new(x, y, h_deg.to_radians())),
            _ => None,
        }
    }
}

fn number(obj: &Map<String, Value>, key: &str) -> Result<f64, String> {
    match obj.get(key).and_then(Value::as_f64) {
        Some(v) if v.is_finite() => Ok(v),
        Some(_) => Err(format!("\"{key}\" must be finite")),
        None => Err(format!("missing number \"{key}\"")),
    }
}

pub fn parse_control(text: &str) -> Result<Control, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let Value::Object(obj) = value else {
        return Err("message must be a JSON object".into());
    };
    let kind = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or("missing string \"type\"")?;
    match kind {
        "pose_set" => Ok(Control::PoseSet {
            x: number(&obj, "x")?,
            y: number(&obj, "y")?,
            h_deg: number(&obj, "h_deg")?,
        }),
        "edit_source" => {
            let id = obj
                .get("id")
                .and_then(Value::as_str)
                .ok_or("missing string \"id\"")?
                .to_string();
            let fields = obj
                .into_iter()
                .filter(|(k, _)| k != "type" && k != "id")
                .collect();
            Ok(Control::EditSource { id, fields })
        }
        "set_ambient_gain" => {
            let gain = number(&obj, "gain")?;
            if !(0.0..=2.0).contains(&gain) {
                return Err(format!("gain {gain} outside 0..2"));
            }
            Ok(Control::SetAmbientGain { gain })
        }
        "snapshot_request" => Ok(Control::SnapshotRequest),
        other => Err(format!("unknown message type \"{other}\"")),
    }
}

/// Applies a partial edit in scene-file terms (`pos`, `r_on`, `content`, ...)
/// to `current`. The id cannot change.
pub fn merge_source(
    current: &SoundSource,
    fields: &Map<String, Value>,
) -> aar_core::Result<SoundSource> {
    let mut doc = source_to_value(current);
    if let Value::Object(obj) = &mut doc {
        for (k, v) in fields {
            obj.insert(k.clone(), v.clone());
        }
    }
    source_from_value(doc, &format!("sources[{}]", current.id))
}

pub fn encode_audio(seq: u32, frames: &[[f32; 2]]) -> Vec<u8> {
    let pcm = encode_pcm16(frames);
    let mut out = Vec::with_capacity(AUDIO_HEADER_LEN + pcm.len());
    out.push(AUDIO_TAG);
    out.extend_from_slice(&seq.to_le_bytes());
    out.extend_from_slice(&pcm);
    out
}

/// Splits an audio frame into its sequence number and interleaved samples.
pub fn decode_audio(bytes: &[u8]) -> Option<(u32, Vec<i16>)> {
    if bytes.len() < AUDIO_HEADER_LEN
        || bytes[0] != AUDIO_TAG
        || !(bytes.len() - AUDIO_HEADER_LEN).is_multiple_of(4)
    {
        return None;
    }
    let seq = u32::from_le_bytes(bytes[1..5].try_into().ok()?);
    let samples = bytes[AUDIO_HEADER_LEN..]
        .chunks_exact(2)
        .map(|b| i16::from_le_bytes([b[0], b[1]]))
        .collect();
    Some((seq, samples))
}

fn pose_json(p: Pose2D) -> Value {
    json!({ "x": p.x, "y": p.y, "h_deg": p.heading.to_degrees() })
}

/// Session-level fields that the engine snapshot does not carry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SessionClock {
    /// Audio time streamed so far, in seconds.
    pub t: f64,
    /// Sequence number of the next audio frame.
    pub seq: u32,
    /// False until the first `pose_set`.
    pub placed: bool,
    pub ambient_gain: Option<f64>,
}

pub fn encode_state(snap: &EngineSnapshot, clock: SessionClock) -> Value {
    let sources: Vec<Value> = snap
        .sources
        .iter()
        .map(|s| {
            json!({
                "id": s.id,
                "phase": s.phase,
                "armed": s.armed,
                "distance": s.distance,
                "gain": s.gain,
                "azimuth_deg": s.azimuth.to_degrees(),
                "blocked": s.blocked,
                "lowpass": s.lowpass,
            })
        })
        .collect();
    json!({
        "type": "state",
        "t": clock.t,
        "seq": clock.seq,
        "placed": clock.placed,
        "engine_t": snap.t,
        "pose": pose_json(snap.rendered),
        "true_pose": pose_json(snap.true_pose),
        "estimate": pose_json(snap.estimate),
        "mode": snap.mode,
        "confidence": snap.confidence,
        "blending": snap.blending,
        "sources": sources,
        "armed": snap.armed,
        "attractor": snap.attractor,
        "clip_count": snap.clip_count,
        "ambient_gain": clock.ambient_gain,
    })
}

pub fn meters_message(virtual_rms: f64, ambient_rms: f64) -> Value {
    json!({ "type": "meters", "virtual_rms": virtual_rms, "ambient_rms": ambient_rms })
}

pub fn event_message(event: &EngagementEvent) -> Value {
    let mut v = serde_json::to_value(event).expect("event serializes");
    if let Value::Object(obj) = &mut v {
        obj.insert("type".into(), "event".into());
    }
    v
}

pub fn error_message(message: &str) -> Value {
    json!({ "type": "error", "message": message })
}
