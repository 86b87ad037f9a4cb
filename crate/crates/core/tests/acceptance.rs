//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use aar_core::audio_logic::{choose_attractor, AttractorContext, ClipSlot};
use aar_core::positioning::{
    dead_reckon, forward_model, fuse_detections, invert_detection, simulate_detections, visible,
};
use aar_core::renderer::{pan_gains, rear_factor};
use aar_core::rng::seeded;
use aar_core::sim::derive_odometry;
use aar_core::{
    audio_logic::source_gain, run_simulation, wrap_angle, AnchorFeature, ClipRef, Content,
    Detection, EventKind, Pose2D, PoseEstimate, RunConfig, Scene, SimParams, Simulation,
    SoundSource, TrackingMode, Vec2, WalkScript,
};

use common::{fixtures, gain_law, noiseless, scene, walk};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("pose round-trip", pose_round_trip),
        ("fusion benefit", fusion_benefit),
        ("handoff smoothing", handoff_smoothing),
        ("drift growth", drift_growth),
        ("pan law", pan_law),
        ("attenuation", attenuation),
        ("radio tune-in", radio_tune_in),
        ("lobby beyond line of sight", lobby_occlusion),
        ("determinism", determinism),
        ("attractor policy", attractor_policy),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn pose_round_trip() -> Outcome {
    let start = Instant::now();
    let params = SimParams::default();
    let scene = Scene::empty(".");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut max_pos, mut max_h) = (0.0f64, 0.0f64);
    let mut n = 0;
    while n < 10_000 {
        let anchor = AnchorFeature {
            id: "a".into(),
            position: Vec2::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0)),
            facing: rng.random_range(-PI..PI),
            max_range: params.r_max,
        };
        // place the listener in front of the anchor, looking roughly at it
        let off = rng.random_range(-params.facing_limit..params.facing_limit);
        let rho = rng.random_range(params.r_min..params.r_max);
        let pos = anchor.position + Vec2::from_angle(anchor.facing + off) * rho;
        let look = pos.bearing_to(anchor.position) + rng.random_range(-0.5..0.5) * params.fov;
        let pose = Pose2D::new(pos.x, pos.y, look);
        if !visible(&pose, &anchor, &scene, &params) {
            continue;
        }
        let (range, bearing, rel_orientation) = forward_model(&pose, &anchor);
        let d = Detection {
            anchor_id: "a".into(),
            range,
            bearing,
            rel_orientation,
            t: 0.0,
        };
        let back = invert_detection(&d, &anchor);
        max_pos = max_pos.max(back.position().dist(pose.position()));
        max_h = max_h.max(wrap_angle(back.heading - pose.heading).abs());
        n += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        max_pos < 1e-9 && max_h < 1e-9 && secs < 1.0,
        format!("{n} poses, max error {max_pos:.2e} m / {max_h:.2e} rad in {secs:.3} s"),
    )
}

fn fusion_benefit() -> Outcome {
    let start = Instant::now();
    let mut scene = Scene::empty(".");
    for (i, x) in [-1.5, 0.0, 1.5].into_iter().enumerate() {
        scene.anchors.push(AnchorFeature {
            id: format!("wall{i}"),
            position: Vec2::new(x, 5.0),
            facing: -FRAC_PI_2,
            max_range: 8.0,
        });
    }
    // detection probability 1 so every trial sees all three; noise stays default
    let params = SimParams {
        p_base: 1.0,
        ..SimParams::default()
    };
    let mut layout = ChaCha8Rng::seed_from_u64(99);
    let (mut fused_sum, mut single_sum) = (0.0, 0.0);
    let mut trials = 0u64;
    while trials < 200 {
        let pose = Pose2D::new(
            layout.random_range(-1.0..1.0),
            layout.random_range(-1.0..1.0),
            FRAC_PI_2 + layout.random_range(-0.05..0.05),
        );
        if !scene
            .anchors
            .iter()
            .all(|a| visible(&pose, a, &scene, &params))
        {
            continue;
        }
        let mut rng = seeded(trials);
        let ds = simulate_detections(&pose, &scene, &params, &mut rng, 0.0);
        assert_eq!(ds.len(), 3);
        let fused = fuse_detections(&ds, &scene).expect("fusable");
        let nearest = ds
            .iter()
            .min_by(|a, b| a.range.total_cmp(&b.range))
            .expect("three detections");
        let single = invert_detection(nearest, scene.anchor(&nearest.anchor_id).expect("anchor"));
        fused_sum += fused.pose.position().dist(pose.position());
        single_sum += single.position().dist(pose.position());
        trials += 1;
    }
    let (fused, single) = (fused_sum / 200.0, single_sum / 200.0);
    let secs = start.elapsed().as_secs_f64();
    check(
        fused < single && secs < 5.0,
        format!("mean error fused {fused:.4} m vs nearest anchor {single:.4} m over {trials} trials in {secs:.3} s"),
    )
}

struct HandoffRun {
    innovation: f64,
    residual: f64,
    latched: bool,
    max_step: f64,
    max_turn: f64,
}

fn handoff_run(seed: u64, blackout: (f64, f64)) -> HandoffRun {
    let mut scene = scene("radio_room");
    noiseless(&mut scene.params);
    scene.params.drift_pos = 0.5;
    scene.params.drift_heading = 12f64.to_radians();
    // a lap of the room in the dark, then standing still facing the west anchor
    let walk = WalkScript::from_tuples(&[
        (0.0, -3.0, -1.5, 0.0),
        (2.0, -3.0, -1.5, 0.0),
        (5.0, 0.0, -2.2, 0.2),
        (8.0, 3.0, -1.5, 1.2),
        (10.0, 2.5, 1.5, 2.5),
        (12.0, 0.0, 1.5, PI),
        (20.0, 0.0, 1.5, PI),
    ])
    .expect("walk");
    let params = scene.params.clone();
    let dt = params.block_duration();
    let mut sim = Simulation::new(scene, walk, seed, None).expect("simulation");
    let mut prev = sim.engine().rendered_pose();
    let (mut max_step, mut max_turn) = (0.0f64, 0.0f64);
    let mut reacquired: Option<(u64, f64, Vec2)> = None;
    let mut latched = false;
    let mut residual = f64::NAN;
    let updates = (3.0 * params.tau_blend / dt).ceil() as u64;
    loop {
        let t = sim.engine().time();
        let dark = t >= blackout.0 && t < blackout.1;
        sim.engine_mut().set_detections_enabled(!dark);
        let before = sim.engine().rendered_pose();
        if sim.step().is_none() {
            break;
        }
        let e = sim.engine();
        let now = e.rendered_pose();
        max_step = max_step.max(now.position().dist(prev.position()) / (params.slew_pos * dt));
        max_turn =
            max_turn.max(wrap_angle(now.heading - prev.heading).abs() / (params.slew_heading * dt));
        prev = now;
        let i = sim.blocks_done() - 1;
        if reacquired.is_none()
            && !dark
            && t >= blackout.1
            && e.estimate().mode == TrackingMode::Tracked
        {
            let target = e.estimate().pose.position();
            reacquired = Some((i, target.dist(before.position()), target));
            latched = e.snapshot().blending;
        }
        if let Some((r, _, target)) = reacquired {
            if i + 1 - r == updates {
                residual = now.position().dist(target);
            }
        }
    }
    let (_, innovation, _) = reacquired.expect("detections resume after the blackout");
    HandoffRun {
        innovation,
        residual,
        latched,
        max_step,
        max_turn,
    }
}

fn handoff_smoothing() -> Outcome {
    let blackout = (2.0, 12.0);
    // the first seed whose dead-reckoned drift gives a clear handoff jump
    // without saturating the slew limit
    let (seed, run) = (0..200)
        .map(|s| (s, handoff_run(s, blackout)))
        .find(|(_, r)| r.innovation > 0.6 && r.innovation < 1.6)
        .ok_or("no seed produced a 0.6..1.6 m reacquisition jump")?;
    let ratio = run.residual / run.innovation;
    let p = SimParams::default();
    let n = (3.0 * p.tau_blend / p.block_duration()).ceil();
    let analytic = (-n * p.block_duration() / p.tau_blend).exp();
    check(
        run.latched && ratio < 0.05 && run.max_step <= 1.0 + 1e-9 && run.max_turn <= 1.0 + 1e-9,
        format!(
            "seed {seed}: jump {:.3} m, residual after 3 tau_blend {:.2}% (exponential {:.2}%, blend latched: {}), peak step {:.3} and turn {:.3} of slew limit",
            run.innovation,
            100.0 * ratio,
            100.0 * analytic,
            run.latched,
            run.max_step,
            run.max_turn
        ),
    )
}

fn drift_growth() -> Outcome {
    let walk = WalkScript::from_tuples(&[
        (0.0, 0.0, 0.0, 0.0),
        (10.0, 10.0, 0.0, 0.0),
        (20.0, 10.0, 10.0, FRAC_PI_2),
        (30.0, 0.0, 10.0, PI),
        (40.0, 0.0, 0.0, -FRAC_PI_2),
        (50.0, 10.0, 0.0, 0.0),
        (60.0, 10.0, 10.0, FRAC_PI_2),
    ])
    .expect("walk");
    let params = SimParams::default();
    let dt = params.block_duration();
    let i10 = (10.0 / dt).round() as u64;
    let i60 = (60.0 / dt).floor() as u64;
    let (mut se10, mut se60) = (0.0, 0.0);
    for seed in 0..500 {
        let mut rng = seeded(seed);
        let mut est = PoseEstimate::initial(walk.pose_at(0.0), 0.0);
        for i in 1..=i60 {
            let (t0, t1) = ((i - 1) as f64 * dt, i as f64 * dt);
            est = dead_reckon(&est, &derive_odometry(&walk, t0, t1), &params, &mut rng);
            let err2 = (est.pose.position() - walk.pose_at(t1).position())
                .norm()
                .powi(2);
            if i == i10 {
                se10 += err2;
            }
            if i == i60 {
                se60 += err2;
            }
        }
    }
    let (r10, r60) = ((se10 / 500.0).sqrt(), (se60 / 500.0).sqrt());
    check(
        r60 > r10,
        format!("RMSE at 10 s {r10:.4} m, at 60 s {r60:.4} m (500 seeds)"),
    )
}

fn pan_law() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let az = -FRAC_PI_2 + PI * i as f64 / 999.0;
        let (l, r) = pan_gains(az);
        worst = worst.max((l * l + r * r - 1.0).abs());
    }
    let rear = rear_factor(PI);
    let (l, r) = pan_gains(PI);
    let expect = 0.8 * std::f64::consts::FRAC_1_SQRT_2;
    check(
        worst < 1e-6 && rear == 0.8 && (l - expect).abs() < 1e-12 && (r - expect).abs() < 1e-12,
        format!("max |L²+R²−1| {worst:.2e} over 1000 front azimuths, rear factor at π = {rear}"),
    )
}

fn attenuation() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (d_ref, d_cull) in [
        (1.0, 20.0),
        (1.0, 3.0),
        (1.0, 8.0),
        (2.0, 12.0),
        (3.0, 30.0),
    ] {
        let src = SoundSource {
            d_ref,
            d_cull,
            ..SoundSource::new("s", Vec2::ZERO, ClipRef::new("x.wav"))
        };
        let steps = ((d_cull + 1.0) * 1000.0) as u64;
        let mut prev = source_gain(0.0, &src);
        let (mut max_jump, mut monotone) = (0.0f64, true);
        for k in 1..=steps {
            let g = source_gain(k as f64 * 1e-3, &src);
            monotone &= g <= prev;
            max_jump = max_jump.max((prev - g).abs());
            prev = g;
        }
        let at_ref = source_gain(d_ref, &src);
        let at_cull = source_gain(d_cull, &src);
        ok &= monotone && max_jump < 1e-3 && at_ref == 1.0 && at_cull == 0.0;
        notes.push(format!(
            "d_ref {d_ref}/d_cull {d_cull}: max jump {max_jump:.2e}"
        ));
    }
    check(ok, notes.join(", "))
}

/// Band/crossfade weights computed from the definition, for the three-band
/// cyclic orbit selector in the radio fixture.
fn radio_oracle(orbit: f64, edges: &[f64], width: f64, static_gain: f64) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let bands = edges.len() - 1;
    // (edge angle, band below, band above); the seam at ±π joins last and first
    let mut joints: Vec<(f64, usize, usize)> = (1..bands).map(|k| (edges[k], k - 1, k)).collect();
    joints.push((edges[bands], bands - 1, 0));
    for (edge, below, above) in joints {
        // signed angular offset from the joint, in (-π, π]
        let off = wrap_angle(orbit - edge);
        if off.abs() < width / 2.0 {
            let u = ((off + width / 2.0) / width).clamp(0.0, 1.0);
            out.insert(format!("band{below}"), (u * FRAC_PI_2).cos());
            out.insert(format!("band{above}"), (u * FRAC_PI_2).sin());
            out.insert("static".into(), 2.0 * u.min(1.0 - u) * static_gain);
            return out;
        }
    }
    let band = (0..bands)
        .find(|&k| orbit >= edges[k] && orbit < edges[k + 1])
        .unwrap_or(bands - 1);
    out.insert(format!("band{band}"), 1.0);
    out
}

fn radio_tune_in() -> Outcome {
    let mut scene = scene("radio_room");
    // noiseless positioning isolates the zone and selector logic from
    // estimate jitter, which is far larger than one block at walking speed
    noiseless(&mut scene.params);
    let radio = scene.source("radio").expect("radio source").clone();
    let Content::Selector(sel) = &radio.content else {
        return Err("radio content is not a selector".into());
    };
    let edges = sel.boundaries.clone();
    let width = sel.crossfade_width;
    let static_gain = sel.interstitial.as_ref().map_or(0.0, |i| i.gain);
    let walk = walk("radio_orbit");
    let dt = scene.params.block_duration();

    let mut sim = Simulation::new(scene, walk.clone(), 11, None).expect("simulation");
    let mut events = Vec::new();
    let (mut checked, mut worst) = (0u64, 0.0f64);
    let mut mismatches = 0u64;
    while let Some(tick) = sim.step() {
        events.extend(tick.events);
        let e = sim.engine();
        let st = &e.source_status()[0];
        if st.phase != "ACTIVE" {
            continue;
        }
        let listener = e.rendered_pose().position();
        let want = radio_oracle(
            radio.position.bearing_to(listener),
            &edges,
            width,
            static_gain,
        );
        let got: BTreeMap<String, f64> = st
            .weights
            .iter()
            .map(|&(slot, w)| match slot {
                ClipSlot::Band(i) => (format!("band{i}"), w),
                ClipSlot::Interstitial => ("static".to_string(), w),
            })
            .collect();
        let keys: BTreeSet<&String> = want.keys().chain(got.keys()).collect();
        for k in keys {
            let diff = (want.get(k).unwrap_or(&0.0) - got.get(k).unwrap_or(&0.0)).abs();
            worst = worst.max(diff);
            if diff > 1e-9 {
                mismatches += 1;
            }
        }
        checked += 1;
    }
    events.push(sim.final_event());

    let zone: Vec<EventKind> = events
        .iter()
        .filter(|e| matches!(e.kind, EventKind::ZoneEnter | EventKind::ZoneExit))
        .map(|e| e.kind)
        .collect();
    let alternates = zone.iter().enumerate().all(|(i, k)| {
        *k == if i % 2 == 0 {
            EventKind::ZoneEnter
        } else {
            EventKind::ZoneExit
        }
    });

    // geometric dwell from the true walk, sampled at 0.1 ms
    let end = sim.engine().time();
    let (mut inside, mut entered, mut dwell_geo) = (false, 0.0, 0.0);
    let steps = (end / 1e-4) as u64;
    for k in 0..=steps {
        let t = k as f64 * 1e-4;
        let d = walk.pose_at(t).position().dist(radio.position);
        if !inside && d <= radio.r_on {
            inside = true;
            entered = t;
        } else if inside && d >= radio.r_off {
            inside = false;
            dwell_geo += t - entered;
        }
    }
    if inside {
        dwell_geo += end - entered;
    }
    let report = aar_core::analytics::report_from_events(&events);
    let dwell = report.sources.get("radio").map_or(0.0, |s| s.dwell_s);
    let dwell_err = (dwell - dwell_geo).abs();

    check(
        mismatches == 0 && checked > 0 && alternates && zone.len() >= 4 && dwell_err <= dt,
        format!(
            "{checked} active blocks, max weight deviation {worst:.1e}; {} enter/exit events alternate: {alternates}; dwell {dwell:.3} s vs geometry {dwell_geo:.3} s (|Δ| {dwell_err:.4} s, block {dt:.4} s)",
            zone.len()
        ),
    )
}

/// One-pole magnitude response in dB at `f`.
fn one_pole_db(f: f64, fc: f64, fs: f64) -> f64 {
    let a = 1.0 - (-TAU * fc / fs).exp();
    let w = TAU * f / fs;
    // |a / (1 - (1-a) e^{-jw})|
    let b = 1.0 - a;
    let re = 1.0 - b * w.cos();
    let im = b * w.sin();
    20.0 * (a / (re * re + im * im).sqrt()).log10()
}

fn tone_power(remove_west_wall: bool) -> f64 {
    let mut scene = scene("lobby");
    noiseless(&mut scene.params);
    scene.ambient = None;
    scene.sources.retain(|s| s.id == "jungle");
    scene.sources[0].content = Content::Clip(ClipRef::new("clips/tone_2k.wav"));
    if remove_west_wall {
        scene
            .occluders
            .retain(|o| !(o.a.x == -4.0 && o.b.x == -4.0));
    }
    let walk = WalkScript::from_tuples(&[(0.0, 0.0, -1.0, FRAC_PI_2), (3.0, 0.0, -1.0, FRAC_PI_2)])
        .expect("walk");
    let mut sim = Simulation::new(scene, walk, 5, None).expect("simulation");
    let (mut sum, mut n) = (0.0f64, 0u64);
    while let Some(tick) = sim.step() {
        if tick.block.t_start < 1.0 {
            continue;
        }
        for f in &tick.block.frames {
            sum += f64::from(f[0]).powi(2) + f64::from(f[1]).powi(2);
            n += 2;
        }
    }
    sum / n as f64
}

fn lobby_occlusion() -> Outcome {
    // part 1: both rooms behind closed doors render through the walls
    let mut scene = scene("lobby");
    noiseless(&mut scene.params);
    let mut sim = Simulation::new(scene, walk("lobby_stand"), 3, Some(2.0)).expect("simulation");
    while sim.step().is_some() {}
    let mut flags = Vec::new();
    let mut ok = true;
    for id in ["jungle", "city"] {
        let src = sim
            .engine()
            .scene()
            .source(id)
            .expect("lobby source")
            .clone();
        let st = sim
            .engine()
            .source_status()
            .iter()
            .find(|s| s.id == id)
            .expect("status")
            .clone();
        let law = gain_law(st.distance, src.gain, src.d_ref, src.d_cull);
        let mult = st.gain / law;
        ok &= st.phase == "ACTIVE" && st.blocked && st.lowpass && (mult - 0.5).abs() < 1e-12;
        flags.push(format!("{id} x{mult:.3} lowpass {}", st.lowpass));
    }

    // part 2: 2 kHz tone, occluded vs the same placement without the wall
    let occluded = tone_power(false);
    let clear = tone_power(true);
    let total_db = 10.0 * (occluded / clear).log10();
    let filter_db = total_db - 20.0 * 0.5f64.log10();
    let analytic = one_pole_db(2000.0, 800.0, 48_000.0);
    ok &= total_db <= -6.0 && (filter_db - -8.2).abs() <= 1.5 && (filter_db - analytic).abs() < 0.1;
    check(
        ok,
        format!(
            "{}; 2 kHz tone {total_db:.2} dB vs clear, filter share {filter_db:.2} dB (analytic {analytic:.2} dB, target -8.2 ± 1.5)",
            flags.join(", ")
        ),
    )
}

fn sha(path: &std::path::Path) -> String {
    let bytes = std::fs::read(path).expect("output exists");
    format!("{:x}", Sha256::digest(bytes))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut digests = Vec::new();
    let mut slowest = 0.0f64;
    for run in 0..2 {
        let cfg = RunConfig {
            scene: fixtures().join("symphony_map.json"),
            walk: fixtures().join("walks/symphony_tour.json"),
            seed: 7,
            duration: Some(60.0),
            wav: dir.path().join(format!("run{run}.wav")),
            log: dir.path().join(format!("run{run}.jsonl")),
            report: None,
        };
        let start = Instant::now();
        run_simulation(&cfg).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed().as_secs_f64());
        digests.push((sha(&cfg.wav), sha(&cfg.log)));
    }
    check(
        digests[0] == digests[1] && slowest < 10.0,
        format!(
            "wav {}…, log {}… identical: {}; 60 s run took {slowest:.2} s",
            &digests[0].0[..12],
            &digests[0].1[..12],
            digests[0] == digests[1]
        ),
    )
}

/// The policy written out longhand.
fn attractor_oracle(
    t: f64,
    idle_since: f64,
    sources: &[SoundSource],
    armed: &BTreeSet<String>,
    completed: &BTreeSet<String>,
    last: &BTreeMap<String, f64>,
    params: &SimParams,
) -> Option<String> {
    if t - idle_since < params.t_idle {
        return None;
    }
    let mut best: Option<&SoundSource> = None;
    for s in sources {
        let eligible = s.attractor_clip.is_some()
            && armed.contains(&s.id)
            && !completed.contains(&s.id)
            && s.position.norm() <= params.r_adv
            && match last.get(&s.id) {
                None => true,
                Some(at) => t - at >= params.cooldown,
            };
        if !eligible {
            continue;
        }
        best = match best {
            None => Some(s),
            Some(b) if s.priority > b.priority => Some(s),
            Some(b) if s.priority == b.priority && s.id < b.id => Some(s),
            keep => keep,
        };
    }
    best.map(|s| s.id.clone())
}

fn attractor_policy() -> Outcome {
    let params = SimParams::default();
    let ids = ["brass", "choir", "strings"];
    let t = 100.0;
    let subsets = |mask: u32| -> BTreeSet<String> {
        (0..3)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| ids[i].to_string())
            .collect()
    };
    let idle_cases = [
        t - params.t_idle + 0.5,
        t - params.t_idle,
        t - params.t_idle - 5.0,
    ];
    let priorities = [[0, 0, 0], [1, 2, 3], [3, 2, 1], [2, 2, 1], [-1, 5, 5]];
    let mut cases = 0u64;
    let mut mismatches = 0u64;
    let mut chosen = 0u64;
    for prio in priorities {
        for clip_mask in 0..8u32 {
            for far_mask in 0..8u32 {
                let sources: Vec<SoundSource> = (0..3)
                    .map(|i| {
                        // r_adv exactly counts as within range
                        let d = if far_mask & (1 << i) != 0 {
                            params.r_adv + 0.5
                        } else if i == 0 {
                            params.r_adv
                        } else {
                            4.0 + i as f64
                        };
                        SoundSource {
                            attractor_clip: (clip_mask & (1 << i) != 0)
                                .then(|| ClipRef::new("chime.wav")),
                            priority: prio[i],
                            ..SoundSource::new(ids[i], Vec2::new(0.0, d), ClipRef::new("x.wav"))
                        }
                    })
                    .collect();
                for armed_mask in 0..8u32 {
                    let armed = subsets(armed_mask);
                    for completed_mask in 0..8u32 {
                        let completed = subsets(completed_mask);
                        // per source: never played, played exactly one cooldown ago, played recently
                        for cool in 0..27u32 {
                            let mut last = BTreeMap::new();
                            let mut c = cool;
                            for id in ids {
                                match c % 3 {
                                    1 => {
                                        last.insert(id.to_string(), t - params.cooldown);
                                    }
                                    2 => {
                                        last.insert(id.to_string(), t - 1.0);
                                    }
                                    _ => {}
                                }
                                c /= 3;
                            }
                            for &idle_since in &idle_cases {
                                let ctx = AttractorContext {
                                    t,
                                    listener: Pose2D::new(0.0, 0.0, 0.0),
                                    thematic_active_at: idle_since,
                                    armed: &armed,
                                    completed: &completed,
                                    last_attractor: &last,
                                };
                                let got = choose_attractor(&ctx, &sources, &params);
                                let want = attractor_oracle(
                                    t, idle_since, &sources, &armed, &completed, &last, &params,
                                );
                                cases += 1;
                                chosen += u64::from(want.is_some());
                                if got != want {
                                    mismatches += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    check(
        mismatches == 0,
        format!("{cases} states enumerated ({chosen} with a pick), {mismatches} disagreements with the brute-force oracle"),
    )
}
