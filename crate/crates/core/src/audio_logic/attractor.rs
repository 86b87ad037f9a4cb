use std::collections::{BTreeMap, BTreeSet};

use super::SoundSource;
use crate::geometry::Pose2D;
use crate::params::SimParams;

/// Which sources are currently allowed to play or attract.
///
/// Within each sequence, every entry up to and including the first one not
/// yet completed is armed. A source listed in several sequences is armed if
/// any of them arms it. Sources outside all sequences are always armed.
pub fn arm_sequences(
    sequences: &[Vec<String>],
    completed: &BTreeSet<String>,
    sources: &[SoundSource],
) -> BTreeSet<String> {
    let sequenced: BTreeSet<&str> = sequences.iter().flatten().map(String::as_str).collect();
    let mut armed: BTreeSet<String> = sources
        .iter()
        .filter(|s| !sequenced.contains(s.id.as_str()))
        .map(|s| s.id.clone())
        .collect();
    for seq in sequences {
        for id in seq {
            armed.insert(id.clone());
            if !completed.contains(id) {
                break;
            }
        }
    }
    armed
}

/// Inputs to the attractor policy for one control tick.
#[derive(Debug, Clone, Copy)]
pub struct AttractorContext<'a> {
    pub t: f64,
    pub listener: Pose2D,
    /// Last time any THEMATIC source was ACTIVE (session start if never).
    pub thematic_active_at: f64,
    pub armed: &'a BTreeSet<String>,
    pub completed: &'a BTreeSet<String>,
    /// Start time of each source's most recent attractor.
    pub last_attractor: &'a BTreeMap<String, f64>,
}

/// Picks the source whose attractor should play now, if any.
///
/// Only fires after `t_idle` seconds without thematic playback. Candidates
/// are armed, not completed, carry an attractor clip, lie within `r_adv`
/// and are out of their cooldown. Highest priority wins, then smallest id.
pub fn choose_attractor(
    ctx: &AttractorContext<'_>,
    sources: &[SoundSource],
    params: &SimParams,
) -> Option<String> {
    if ctx.t - ctx.thematic_active_at < params.t_idle {
        return None;
    }
    let listener = ctx.listener.position();
    sources
        .iter()
        .filter(|s| s.attractor_clip.is_some())
        .filter(|s| ctx.armed.contains(&s.id) && !ctx.completed.contains(&s.id))
        .filter(|s| listener.dist(s.position) <= params.r_adv)
        .filter(|s| {
            ctx.last_attractor
                .get(&s.id)
                .is_none_or(|&at| ctx.t - at >= params.cooldown)
        })
        .min_by(|a, b| b.priority.cmp(&a.priority).then_with(|| a.id.cmp(&b.id)))
        .map(|s| s.id.clone())
}
