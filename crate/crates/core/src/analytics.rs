//! Engagement reports from event logs.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::events::{EngagementEvent, EventKind};
use crate::positioning::TrackingMode;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SourceStats {
    pub dwell_s: f64,
    pub visits: u64,
    pub completed: bool,
    pub attractor_plays: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EngagementReport {
    pub sources: BTreeMap<String, SourceStats>,
    pub duration_s: f64,
    pub tracked_frac: f64,
    pub extended_frac: f64,
    pub lost_frac: f64,
    pub clip_count: u64,
}

/// Parses a JSONL event log. Blank lines are skipped.
pub fn parse_log(log: &str) -> Result<Vec<EngagementEvent>> {
    let mut events: Vec<EngagementEvent> = Vec::new();
    for (i, line) in log.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| Error::Log { line: line_no, msg };
        let ev: EngagementEvent = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        if !ev.t.is_finite() || ev.t < 0.0 {
            return Err(err(format!("invalid timestamp {}", ev.t)));
        }
        if ev.kind.has_source() && ev.source_id.is_none() {
            return Err(err("event kind requires source_id".into()));
        }
        if ev.kind == EventKind::ModeChange {
            let to = ev.payload.get("to").and_then(|v| v.as_str());
            if to.and_then(TrackingMode::parse).is_none() {
                return Err(err("mode_change needs a valid \"to\" mode".into()));
            }
        }
        if events.last().is_some_and(|p| p.t > ev.t) {
            return Err(err("timestamps decrease".into()));
        }
        events.push(ev);
    }
    Ok(events)
}

pub fn accumulate_report(log: &str) -> Result<EngagementReport> {
    Ok(report_from_events(&parse_log(log)?))
}

/// Dwell is summed over enter/exit pairs, with intervals still open at the
/// last record closed there.
pub fn report_from_events(events: &[EngagementEvent]) -> EngagementReport {
    let mut r = EngagementReport::default();
    let Some(end) = events.last().map(|e| e.t) else {
        return r;
    };
    r.duration_s = end;

    let mut open: BTreeMap<&str, f64> = BTreeMap::new();
    let mut mode: Option<(TrackingMode, f64)> = None;
    let mut occupancy = [0.0f64; 3];
    let slot = |m: TrackingMode| match m {
        TrackingMode::Tracked => 0,
        TrackingMode::Extended => 1,
        TrackingMode::Lost => 2,
    };

    for ev in events {
        if let Some(id) = ev.source_id.as_deref() {
            let stats = r.sources.entry(id.to_string()).or_default();
            match ev.kind {
                EventKind::ZoneEnter => {
                    stats.visits += 1;
                    open.insert(id, ev.t);
                }
                EventKind::ZoneExit => {
                    if let Some(t0) = open.remove(id) {
                        stats.dwell_s += ev.t - t0;
                    }
                }
                EventKind::ClipEnd => {
                    if ev.payload.get("reason").and_then(|v| v.as_str()) == Some("complete") {
                        stats.completed = true;
                    }
                }
                EventKind::AttractorStart => stats.attractor_plays += 1,
                _ => {}
            }
        }
        match ev.kind {
            EventKind::ModeChange => {
                let to = ev.payload["to"].as_str().and_then(TrackingMode::parse);
                if let Some(to) = to {
                    if let Some((m, t0)) = mode {
                        occupancy[slot(m)] += ev.t - t0;
                    }
                    mode = Some((to, ev.t));
                }
            }
            EventKind::Pose => {
                if let Some(c) = ev.payload.get("clipped").and_then(|v| v.as_u64()) {
                    r.clip_count = r.clip_count.max(c);
                }
            }
            _ => {}
        }
    }
    for (id, t0) in open {
        r.sources.get_mut(id).expect("opened source").dwell_s += end - t0;
    }
    if let Some((m, t0)) = mode {
        occupancy[slot(m)] += end - t0;
        let total: f64 = occupancy.iter().sum();
        if total > 0.0 {
            r.tracked_frac = occupancy[0] / total;
            r.extended_frac = occupancy[1] / total;
            r.lost_frac = occupancy[2] / total;
        } else {
            occupancy = [0.0; 3];
            occupancy[slot(m)] = 1.0;
            [r.tracked_frac, r.extended_frac, r.lost_frac] = occupancy;
        }
    }
    r
}

pub const REPORT_HEADER: &str = "source_id,dwell_s,visits,completed,attractor_plays";

pub fn write_report(r: &EngagementReport, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for (id, s) in &r.sources {
        writeln!(
            out,
            "{id},{:.3},{},{},{}",
            s.dwell_s, s.visits, s.completed, s.attractor_plays
        )?;
    }
    writeln!(out, "#global")?;
    writeln!(out, "#duration_s,{:.3}", r.duration_s)?;
    writeln!(out, "#tracked_frac,{:.6}", r.tracked_frac)?;
    writeln!(out, "#extended_frac,{:.6}", r.extended_frac)?;
    writeln!(out, "#lost_frac,{:.6}", r.lost_frac)?;
    writeln!(out, "#clip_count,{}", r.clip_count)
}

pub fn report_to_string(r: &EngagementReport) -> String {
    let mut buf = Vec::new();
    write_report(r, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("report is ascii")
}

/// Reads a CSV written by [`write_report`]. Values come back at the written
/// precision.
pub fn parse_report(text: &str) -> Result<EngagementReport> {
    let mut r = EngagementReport::default();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == REPORT_HEADER => {}
        _ => {
            return Err(Error::Log {
                line: 1,
                msg: "missing report header".into(),
            })
        }
    }
    for (i, line) in lines {
        let err = |msg: &str| Error::Log {
            line: i + 1,
            msg: msg.to_string(),
        };
        let num = |s: &str| s.parse::<f64>().map_err(|_| err("bad number"));
        let int = |s: &str| s.parse::<u64>().map_err(|_| err("bad integer"));
        if line == "#global" || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if let Some(key) = fields[0].strip_prefix('#') {
            let [_, v] = fields[..] else {
                return Err(err("expected key,value"));
            };
            match key {
                "duration_s" => r.duration_s = num(v)?,
                "tracked_frac" => r.tracked_frac = num(v)?,
                "extended_frac" => r.extended_frac = num(v)?,
                "lost_frac" => r.lost_frac = num(v)?,
                "clip_count" => r.clip_count = int(v)?,
                _ => return Err(err("unknown global key")),
            }
            continue;
        }
        let [id, dwell, visits, completed, plays] = fields[..] else {
            return Err(err("expected 5 columns"));
        };
        let completed = match completed {
            "true" => true,
            "false" => false,
            _ => return Err(err("bad boolean")),
        };
        r.sources.insert(
            id.to_string(),
            SourceStats {
                dwell_s: num(dwell)?,
                visits: int(visits)?,
                completed,
                attractor_plays: int(plays)?,
            },
        );
    }
    Ok(r)
}
