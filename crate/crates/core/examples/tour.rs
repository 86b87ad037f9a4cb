//! Runs a fixture scene along a walk and prints the non-pose events.
//!
//! ```text
//! cargo run -p aar-core --example tour -- fixtures/radio_room.json fixtures/walks/radio_orbit.json
//! ```

use aar_core::{EventKind, Scene, WalkScript};

fn main() -> aar_core::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let [_, scene, walk] = &args[..] else {
        eprintln!("usage: tour <scene.json> <walk.json>");
        std::process::exit(2);
    };
    let scene = Scene::load(scene)?;
    let walk = WalkScript::load(walk)?;
    let (frames, events) = aar_core::sim::simulate_in_memory(scene, walk, 7, None)?;
    for e in events.iter().filter(|e| e.kind != EventKind::Pose) {
        println!("{}", e.to_json_line());
    }
    let peak = frames
        .iter()
        .flat_map(|f| f.iter())
        .fold(0.0f32, |m, s| m.max(s.abs()));
    let report = aar_core::analytics::report_from_events(&events);
    println!("frames {} peak {peak:.3}", frames.len());
    print!("{}", aar_core::analytics::report_to_string(&report));
    Ok(())
}
