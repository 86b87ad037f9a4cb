use super::{PlaybackMode, SoundSource};
use crate::events::{EngagementEvent, EventKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZonePhase {
    Idle,
    Active,
    Completed,
}

impl ZonePhase {
    pub fn as_str(self) -> &'static str {
        match self {
            ZonePhase::Idle => "IDLE",
            ZonePhase::Active => "ACTIVE",
            ZonePhase::Completed => "COMPLETED",
        }
    }
}

/// Proximity-zone state of one source.
///
/// `inside` follows the listener with r_on/r_off hysteresis independently of
/// playback, so a completed source still reports visits. `playhead` counts
/// frames into the content.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneState {
    pub phase: ZonePhase,
    pub playhead: u64,
    pub entered_at: Option<f64>,
    pub inside: bool,
}

impl Default for ZoneState {
    fn default() -> Self {
        ZoneState {
            phase: ZonePhase::Idle,
            playhead: 0,
            entered_at: None,
            inside: false,
        }
    }
}

impl ZoneState {
    /// Moves the playhead after `frames` of audio were rendered. Loops wrap;
    /// everything else stops at the clip end.
    pub fn advance(&mut self, frames: u64, clip_len: u64, mode: PlaybackMode) {
        if self.phase != ZonePhase::Active {
            return;
        }
        self.playhead = match mode {
            PlaybackMode::Loop if clip_len > 0 => (self.playhead + frames) % clip_len,
            _ => (self.playhead + frames).min(clip_len),
        };
    }
}

/// One control tick of the zone state machine at time `t`, with the
/// listener `d` meters from the source and content `clip_len` frames long.
pub fn update_zone(
    state: &ZoneState,
    d: f64,
    src: &SoundSource,
    clip_len: u64,
    t: f64,
) -> (ZoneState, Vec<EngagementEvent>) {
    let mut s = state.clone();
    let mut events = Vec::new();
    let ev = |kind| EngagementEvent::for_source(t, kind, &src.id, src.tag);

    if !s.inside && d <= src.r_on {
        s.inside = true;
        s.entered_at = Some(t);
        events.push(ev(EventKind::ZoneEnter));
        if s.phase != ZonePhase::Completed {
            if src.mode != PlaybackMode::Resume {
                s.playhead = 0;
            }
            s.phase = ZonePhase::Active;
            events.push(ev(EventKind::ClipStart).with("playhead_frames", s.playhead));
        }
    } else if s.inside && d >= src.r_off {
        s.inside = false;
        s.entered_at = None;
        events.push(ev(EventKind::ZoneExit));
        if s.phase == ZonePhase::Active {
            events.push(
                ev(EventKind::ClipEnd)
                    .with("reason", "exit")
                    .with("playhead_frames", s.playhead),
            );
            s.phase = ZonePhase::Idle;
            if src.mode != PlaybackMode::Resume {
                s.playhead = 0;
            }
        }
    }

    if s.phase == ZonePhase::Active && src.mode != PlaybackMode::Loop && s.playhead >= clip_len {
        s.phase = ZonePhase::Completed;
        events.push(ev(EventKind::ClipEnd).with("reason", "complete"));
    }
    (s, events)
}
