//! The scene template new sessions start from.

use std::sync::RwLock;

use aar_core::renderer::ClipBank;
use aar_core::{Scene, SoundSource};

struct Template {
    scene: Scene,
    bank: ClipBank,
}

/// Shared, read-mostly scene. Sessions copy it at connect time, so a
/// replacement or edit here never reaches a running session.
pub struct SceneStore {
    inner: RwLock<Template>,
}

impl SceneStore {
    /// Decodes every clip the scene refers to.
    pub fn new(scene: Scene) -> aar_core::Result<SceneStore> {
        let bank = ClipBank::load(&scene)?;
        Ok(SceneStore {
            inner: RwLock::new(Template { scene, bank }),
        })
    }

    pub fn template(&self) -> (Scene, ClipBank) {
        let t = self.inner.read().expect("scene lock");
        (t.scene.clone(), t.bank.clone())
    }

    pub fn scene(&self) -> Scene {
        self.inner.read().expect("scene lock").scene.clone()
    }

    pub fn scene_value(&self) -> serde_json::Value {
        self.inner.read().expect("scene lock").scene.to_value()
    }

    /// Replaces the template once the new scene and all its clips load.
    pub fn replace(&self, scene: Scene) -> aar_core::Result<()> {
        let mut t = self.inner.write().expect("scene lock");
        Self::commit(&mut t, scene)
    }

    fn commit(t: &mut Template, scene: Scene) -> aar_core::Result<()> {
        scene.validate()?;
        let mut bank = t.bank.clone();
        bank.refresh(&scene)?;
        *t = Template { scene, bank };
        Ok(())
    }

    /// Records a session edit so `GET /scene` and later sessions see it.
    /// Ignored when the template no longer has that source or the edit does
    /// not fit the current template.
    pub fn update_source(&self, source: SoundSource) {
        let mut t = self.inner.write().expect("scene lock");
        let mut scene = t.scene.clone();
        let Some(slot) = scene.source_mut(&source.id) else {
            return;
        };
        *slot = source;
        let _ = Self::commit(&mut t, scene);
    }

    pub fn set_ambient_gain(&self, gain: f64) {
        let mut t = self.inner.write().expect("scene lock");
        if let Some(a) = t.scene.ambient.as_mut() {
            a.gain = gain;
        }
    }
}
