//! The world model: anchors, walls, sources, ambient bed and sequences, plus
//! the JSON scene format.
//!
//! Angles are degrees in the file and radians in memory. Clip paths are
//! relative to the directory holding the scene file.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::audio_logic::source::{
    ClipRef, Content, ContentSelector, Dimension, Interstitial, PlaybackMode, SoundSource, Tag,
};
use crate::error::{Error, Result};
use crate::geometry::{Occluder, Vec2};
use crate::params::SimParams;

/// A static, recognisable physical feature with a known pose.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorFeature {
    pub id: String,
    pub position: Vec2,
    /// Outward normal of the feature.
    pub facing: f64,
    pub max_range: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ambient {
    pub clip: ClipRef,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub name: String,
    pub anchors: Vec<AnchorFeature>,
    pub occluders: Vec<Occluder>,
    pub sources: Vec<SoundSource>,
    pub ambient: Option<Ambient>,
    pub sequences: Vec<Vec<String>>,
    pub params: SimParams,
    /// Directory clip paths resolve against.
    pub base_dir: PathBuf,
}

impl Scene {
    pub fn empty(base_dir: impl Into<PathBuf>) -> Self {
        Scene {
            name: String::new(),
            anchors: Vec::new(),
            occluders: Vec::new(),
            sources: Vec::new(),
            ambient: None,
            sequences: Vec::new(),
            params: SimParams::default(),
            base_dir: base_dir.into(),
        }
    }

    pub fn anchor(&self, id: &str) -> Option<&AnchorFeature> {
        self.anchors.iter().find(|a| a.id == id)
    }

    pub fn source(&self, id: &str) -> Option<&SoundSource> {
        self.sources.iter().find(|s| s.id == id)
    }

    pub fn source_mut(&mut self, id: &str) -> Option<&mut SoundSource> {
        self.sources.iter_mut().find(|s| s.id == id)
    }

    pub fn resolve_clip(&self, clip: &ClipRef) -> PathBuf {
        self.base_dir.join(&clip.file)
    }

    /// Reads and validates a scene file.
    pub fn load(path: impl AsRef<Path>) -> Result<Scene> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        Scene::from_json(&bytes, base, &path.display().to_string())
    }

    /// Parses and validates a scene document. `label` names the document in
    /// parse errors.
    pub fn from_json(bytes: &[u8], base_dir: impl Into<PathBuf>, label: &str) -> Result<Scene> {
        let doc: SceneDoc = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            file: label.to_string(),
            msg: e.to_string(),
        })?;
        let scene = doc.into_scene(base_dir.into())?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SceneDoc::from_scene(self)).expect("scene serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(SceneDoc::from_scene(self)).expect("scene serializes")
    }

    /// Checks every scene invariant, including that clip files exist.
    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;

        let mut anchor_ids = BTreeSet::new();
        for (i, a) in self.anchors.iter().enumerate() {
            let path = format!("anchors[{i}]");
            check_id(&format!("{path}.id"), &a.id)?;
            if !anchor_ids.insert(a.id.as_str()) {
                return Err(Error::validation(
                    format!("{path}.id"),
                    format!("duplicate anchor id \"{}\"", a.id),
                ));
            }
            if !a.position.is_finite() || !a.facing.is_finite() {
                return Err(Error::validation(path, "non-finite pose"));
            }
            if !(a.max_range > 0.0) {
                return Err(Error::validation(
                    format!("{path}.max_range"),
                    "must be positive",
                ));
            }
        }

        for (i, w) in self.occluders.iter().enumerate() {
            if !w.a.is_finite() || !w.b.is_finite() {
                return Err(Error::validation(
                    format!("occluders[{i}]"),
                    "non-finite endpoint",
                ));
            }
            if w.a == w.b {
                return Err(Error::validation(
                    format!("occluders[{i}]"),
                    "endpoints must be distinct",
                ));
            }
        }

        let mut source_ids = BTreeSet::new();
        for (i, s) in self.sources.iter().enumerate() {
            let path = format!("sources[{i}]");
            check_id(&format!("{path}.id"), &s.id)?;
            if !source_ids.insert(s.id.as_str()) {
                return Err(Error::validation(
                    format!("{path}.id"),
                    format!("duplicate source id \"{}\"", s.id),
                ));
            }
            self.validate_source(&path, s)?;
        }

        if let Some(amb) = &self.ambient {
            if !(0.0..=2.0).contains(&amb.gain) {
                return Err(Error::validation("ambient.gain", "must be in [0, 2]"));
            }
            self.check_clip("ambient.clip", &amb.clip)?;
        }

        for (i, seq) in self.sequences.iter().enumerate() {
            for (j, id) in seq.iter().enumerate() {
                if !source_ids.contains(id.as_str()) {
                    return Err(Error::validation(
                        format!("sequences[{i}][{j}]"),
                        format!("unknown source id \"{id}\""),
                    ));
                }
            }
        }
        Ok(())
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn validate_source(&self, path: &str, s: &SoundSource) -> Result<()> {
        if !s.position.is_finite() {
            return Err(Error::validation(
                format!("{path}.pos"),
                "non-finite position",
            ));
        }
        if !(s.d_ref > 0.0) {
            return Err(Error::validation(
                format!("{path}.d_ref"),
                "must be positive",
            ));
        }
        if !(s.d_cull > s.d_ref) {
            return Err(Error::validation(
                format!("{path}.d_cull"),
                "must exceed d_ref",
            ));
        }
        if !(s.gain >= 0.0 && s.gain.is_finite()) {
            return Err(Error::validation(
                format!("{path}.gain"),
                "must be non-negative",
            ));
        }
        if !(s.r_on >= 0.0) {
            return Err(Error::validation(
                format!("{path}.r_on"),
                "must be non-negative",
            ));
        }
        if !(s.r_off > s.r_on) {
            return Err(Error::validation(
                format!("{path}.r_off"),
                "must exceed r_on",
            ));
        }
        match &s.content {
            Content::Clip(c) => self.check_clip(&format!("{path}.content.clip"), c)?,
            Content::Selector(sel) => {
                let sp = format!("{path}.content.selector");
                validate_selector(&sp, sel)?;
                for (k, c) in sel.clips.iter().enumerate() {
                    self.check_clip(&format!("{sp}.clips[{k}]"), c)?;
                }
                if let Some(i) = &sel.interstitial {
                    self.check_clip(&format!("{sp}.interstitial.clip"), &i.clip)?;
                }
            }
        }
        if let Some(c) = &s.attractor_clip {
            self.check_clip(&format!("{path}.attractor"), c)?;
        }
        Ok(())
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn check_clip(&self, path: &str, clip: &ClipRef) -> Result<()> {
        if !(clip.start >= 0.0 && clip.start.is_finite()) {
            return Err(Error::validation(
                format!("{path}.start"),
                "must be non-negative",
            ));
        }
        if let Some(end) = clip.end {
            if !(end > clip.start) {
                return Err(Error::validation(
                    format!("{path}.end"),
                    "must exceed start",
                ));
            }
        }
        let resolved = self.resolve_clip(clip);
        if !resolved.is_file() {
            return Err(Error::validation(
                format!("{path}.file"),
                format!("clip file not found: {}", resolved.display()),
            ));
        }
        Ok(())
    }
}

fn check_id(path: &str, id: &str) -> Result<()> {
    if id.is_empty() {
        return Err(Error::validation(path, "id must not be empty"));
    }
    if id
        .chars()
        .any(|c| c.is_whitespace() || c.is_control() || c == ',' || c == '"' || c == '#')
    {
        return Err(Error::validation(
            path,
            format!("id \"{id}\" contains whitespace, comma, quote or '#'"),
        ));
    }
    Ok(())
}

fn validate_selector(path: &str, sel: &ContentSelector) -> Result<()> {
    let b = &sel.boundaries;
    if b.len() < 2 {
        return Err(Error::validation(
            format!("{path}.boundaries"),
            "need at least two band edges",
        ));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation(
            format!("{path}.boundaries"),
            "non-finite edge",
        ));
    }
    if b.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation(
            format!("{path}.boundaries"),
            "edges must be strictly increasing",
        ));
    }
    if sel.clips.len() != b.len() - 1 {
        return Err(Error::validation(
            format!("{path}.clips"),
            format!("expected {} clips for {} band edges", b.len() - 1, b.len()),
        ));
    }
    let narrowest = b
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if !(sel.crossfade_width > 0.0 && sel.crossfade_width < narrowest) {
        return Err(Error::validation(
            format!("{path}.crossfade_width"),
            "must be positive and narrower than the smallest band",
        ));
    }
    if sel.dimension == Dimension::OrbitAngle
        && (b[0] < -std::f64::consts::PI - 1e-9
            || b[b.len() - 1] - b[0] > std::f64::consts::TAU + 1e-9)
    {
        return Err(Error::validation(
            format!("{path}.boundaries"),
            "orbit edges must lie within one turn starting at or after -180",
        ));
    }
    if let Some(i) = &sel.interstitial {
        if !(i.gain >= 0.0 && i.gain.is_finite()) {
            return Err(Error::validation(
                format!("{path}.interstitial.gain"),
                "must be non-negative",
            ));
        }
    }
    Ok(())
}

/// Radians to a degree value that converts back to exactly `rad`, so a
/// loaded scene survives a save/load cycle unchanged.
pub(crate) fn deg_for_file(rad: f64) -> f64 {
    let d = rad.to_degrees();
    if d.to_radians() == rad {
        return d;
    }
    let mut up = d;
    let mut down = d;
    for _ in 0..8 {
        up = up.next_up();
        down = down.next_down();
        if up.to_radians() == rad {
            return up;
        }
        if down.to_radians() == rad {
            return down;
        }
    }
    d
}

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDoc {
    #[serde(default)]
    meta: MetaDoc,
    #[serde(default)]
    params: ParamsDoc,
    #[serde(default)]
    anchors: Vec<AnchorDoc>,
    #[serde(default)]
    occluders: Vec<OccluderDoc>,
    #[serde(default)]
    sources: Vec<SourceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ambient: Option<AmbientDoc>,
    #[serde(default)]
    sequences: Vec<Vec<String>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct MetaDoc {
    #[serde(default)]
    name: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    fov_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    facing_limit_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_base: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lighting: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    traffic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_range: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_bearing_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_psi_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    drift_pos: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    drift_heading_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_track: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_blend: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slew_pos: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slew_heading_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_lost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_idle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_adv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cooldown: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample_rate: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    block: Option<usize>,
}

impl ParamsDoc {
    fn into_params(self) -> SimParams {
        let d = SimParams::default();
        let rad = |v: Option<f64>, dflt: f64| v.map(f64::to_radians).unwrap_or(dflt);
        SimParams {
            fov: rad(self.fov_deg, d.fov),
            r_min: self.r_min.unwrap_or(d.r_min),
            r_max: self.r_max.unwrap_or(d.r_max),
            facing_limit: rad(self.facing_limit_deg, d.facing_limit),
            p_base: self.p_base.unwrap_or(d.p_base),
            lighting: self.lighting.unwrap_or(d.lighting),
            traffic: self.traffic.unwrap_or(d.traffic),
            sigma_range: self.sigma_range.unwrap_or(d.sigma_range),
            sigma_bearing: rad(self.sigma_bearing_deg, d.sigma_bearing),
            sigma_psi: rad(self.sigma_psi_deg, d.sigma_psi),
            drift_pos: self.drift_pos.unwrap_or(d.drift_pos),
            drift_heading: rad(self.drift_heading_deg, d.drift_heading),
            tau_track: self.tau_track.unwrap_or(d.tau_track),
            tau_blend: self.tau_blend.unwrap_or(d.tau_blend),
            slew_pos: self.slew_pos.unwrap_or(d.slew_pos),
            slew_heading: rad(self.slew_heading_deg, d.slew_heading),
            t_lost: self.t_lost.unwrap_or(d.t_lost),
            t_idle: self.t_idle.unwrap_or(d.t_idle),
            r_adv: self.r_adv.unwrap_or(d.r_adv),
            cooldown: self.cooldown.unwrap_or(d.cooldown),
            sample_rate: self.sample_rate.unwrap_or(d.sample_rate),
            block: self.block.unwrap_or(d.block),
        }
    }

    fn from_params(p: &SimParams) -> Self {
        ParamsDoc {
            fov_deg: Some(deg_for_file(p.fov)),
            r_min: Some(p.r_min),
            r_max: Some(p.r_max),
            facing_limit_deg: Some(deg_for_file(p.facing_limit)),
            p_base: Some(p.p_base),
            lighting: Some(p.lighting),
            traffic: Some(p.traffic),
            sigma_range: Some(p.sigma_range),
            sigma_bearing_deg: Some(deg_for_file(p.sigma_bearing)),
            sigma_psi_deg: Some(deg_for_file(p.sigma_psi)),
            drift_pos: Some(p.drift_pos),
            drift_heading_deg: Some(deg_for_file(p.drift_heading)),
            tau_track: Some(p.tau_track),
            tau_blend: Some(p.tau_blend),
            slew_pos: Some(p.slew_pos),
            slew_heading_deg: Some(deg_for_file(p.slew_heading)),
            t_lost: Some(p.t_lost),
            t_idle: Some(p.t_idle),
            r_adv: Some(p.r_adv),
            cooldown: Some(p.cooldown),
            sample_rate: Some(p.sample_rate),
            block: Some(p.block),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnchorDoc {
    id: String,
    pos: [f64; 2],
    facing: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_range: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OccluderDoc {
    a: [f64; 2],
    b: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ClipDoc {
    file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end: Option<f64>,
}

impl From<ClipDoc> for ClipRef {
    fn from(c: ClipDoc) -> Self {
        ClipRef {
            file: c.file,
            start: c.start.unwrap_or(0.0),
            end: c.end,
        }
    }
}

impl From<&ClipRef> for ClipDoc {
    fn from(c: &ClipRef) -> Self {
        ClipDoc {
            file: c.file.clone(),
            start: Some(c.start),
            end: c.end,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AmbientDoc {
    clip: ClipDoc,
    gain: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InterstitialDoc {
    clip: ClipDoc,
    #[serde(default = "one")]
    gain: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SelectorDoc {
    dimension: String,
    boundaries: Vec<f64>,
    clips: Vec<ClipDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crossfade_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interstitial: Option<InterstitialDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ContentDoc {
    Clip(ClipDoc),
    Selector(SelectorDoc),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct SourceDoc {
    id: String,
    pos: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d_ref: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d_cull: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gain: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_on: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_off: Option<f64>,
    mode: String,
    content: ContentDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attractor: Option<ClipDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    priority: Option<i64>,
    tag: String,
}

impl SourceDoc {
    fn into_source(self, path: &str) -> Result<SoundSource> {
        let mode = PlaybackMode::parse(&self.mode).ok_or_else(|| {
            Error::validation(
                format!("{path}.mode"),
                format!("unknown mode \"{}\" (LOOP, ONE_SHOT, RESUME)", self.mode),
            )
        })?;
        let tag = Tag::parse(&self.tag).ok_or_else(|| {
            Error::validation(
                format!("{path}.tag"),
                format!("unknown tag \"{}\" (THEMATIC, FUNCTIONAL)", self.tag),
            )
        })?;
        let content = match self.content {
            ContentDoc::Clip(c) => Content::Clip(c.into()),
            ContentDoc::Selector(s) => {
                let dimension = Dimension::parse(&s.dimension).ok_or_else(|| {
                    Error::validation(
                        format!("{path}.content.selector.dimension"),
                        format!("unknown dimension \"{}\"", s.dimension),
                    )
                })?;
                let to_mem = |v: f64| match dimension {
                    Dimension::Distance => v,
                    Dimension::OrbitAngle => v.to_radians(),
                };
                Content::Selector(ContentSelector {
                    dimension,
                    boundaries: s.boundaries.into_iter().map(to_mem).collect(),
                    clips: s.clips.into_iter().map(Into::into).collect(),
                    crossfade_width: s
                        .crossfade_width
                        .map(to_mem)
                        .unwrap_or_else(|| dimension.default_crossfade()),
                    interstitial: s.interstitial.map(|i| Interstitial {
                        clip: i.clip.into(),
                        gain: i.gain,
                    }),
                })
            }
        };
        Ok(SoundSource {
            id: self.id,
            position: self.pos.into(),
            d_ref: self.d_ref.unwrap_or(1.0),
            d_cull: self.d_cull.unwrap_or(20.0),
            gain: self.gain.unwrap_or(1.0),
            r_on: self.r_on.unwrap_or(2.0),
            r_off: self.r_off.unwrap_or(3.0),
            mode,
            content,
            attractor_clip: self.attractor.map(Into::into),
            priority: self.priority.unwrap_or(0),
            tag,
        })
    }

    fn from_source(s: &SoundSource) -> Self {
        let content = match &s.content {
            Content::Clip(c) => ContentDoc::Clip(c.into()),
            Content::Selector(sel) => {
                let to_file = |v: f64| match sel.dimension {
                    Dimension::Distance => v,
                    Dimension::OrbitAngle => deg_for_file(v),
                };
                ContentDoc::Selector(SelectorDoc {
                    dimension: sel.dimension.as_str().to_string(),
                    boundaries: sel.boundaries.iter().copied().map(to_file).collect(),
                    clips: sel.clips.iter().map(Into::into).collect(),
                    crossfade_width: Some(to_file(sel.crossfade_width)),
                    interstitial: sel.interstitial.as_ref().map(|i| InterstitialDoc {
                        clip: (&i.clip).into(),
                        gain: i.gain,
                    }),
                })
            }
        };
        SourceDoc {
            id: s.id.clone(),
            pos: s.position.into(),
            d_ref: Some(s.d_ref),
            d_cull: Some(s.d_cull),
            gain: Some(s.gain),
            r_on: Some(s.r_on),
            r_off: Some(s.r_off),
            mode: s.mode.as_str().to_string(),
            content,
            attractor: s.attractor_clip.as_ref().map(Into::into),
            priority: Some(s.priority),
            tag: s.tag.as_str().to_string(),
        }
    }
}

/// Parses one source object in the scene-file schema.
pub fn source_from_value(value: serde_json::Value, path: &str) -> Result<SoundSource> {
    let doc: SourceDoc = serde_json::from_value(value).map_err(|e| Error::Parse {
        file: path.to_string(),
        msg: e.to_string(),
    })?;
    doc.into_source(path)
}

/// Serializes one source in the scene-file schema.
pub fn source_to_value(source: &SoundSource) -> serde_json::Value {
    serde_json::to_value(SourceDoc::from_source(source)).expect("source serializes")
}

impl SceneDoc {
    fn into_scene(self, base_dir: PathBuf) -> Result<Scene> {
        let params = self.params.into_params();
        let r_max = params.r_max;
        let anchors = self
            .anchors
            .into_iter()
            .map(|a| AnchorFeature {
                id: a.id,
                position: a.pos.into(),
                facing: crate::geometry::wrap_angle(a.facing.to_radians()),
                max_range: a.max_range.unwrap_or(r_max),
            })
            .collect();
        let occluders = self
            .occluders
            .into_iter()
            .map(|o| Occluder {
                a: o.a.into(),
                b: o.b.into(),
            })
            .collect();
        let sources = self
            .sources
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.into_source(&format!("sources[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scene {
            name: self.meta.name,
            anchors,
            occluders,
            sources,
            ambient: self.ambient.map(|a| Ambient {
                clip: a.clip.into(),
                gain: a.gain,
            }),
            sequences: self.sequences,
            params,
            base_dir,
        })
    }

    fn from_scene(s: &Scene) -> Self {
        SceneDoc {
            meta: MetaDoc {
                name: s.name.clone(),
            },
            params: ParamsDoc::from_params(&s.params),
            anchors: s
                .anchors
                .iter()
                .map(|a| AnchorDoc {
                    id: a.id.clone(),
                    pos: a.position.into(),
                    facing: deg_for_file(a.facing),
                    max_range: Some(a.max_range),
                })
                .collect(),
            occluders: s
                .occluders
                .iter()
                .map(|o| OccluderDoc {
                    a: o.a.into(),
                    b: o.b.into(),
                })
                .collect(),
            sources: s.sources.iter().map(SourceDoc::from_source).collect(),
            ambient: s.ambient.as_ref().map(|a| AmbientDoc {
                clip: (&a.clip).into(),
                gain: a.gain,
            }),
            sequences: s.sequences.clone(),
        }
    }
}
