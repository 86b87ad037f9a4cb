#![allow(dead_code)]

use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use aar_core::Scene;
use aar_service::{decode_audio, AppState};
use futures_util::{SinkExt, StreamExt};
use serde_json::Value;
use tokio::net::TcpStream;
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{connect_async, MaybeTlsStream, WebSocketStream};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn scene(name: &str) -> Scene {
    Scene::load(fixtures().join(format!("{name}.json"))).expect("fixture scene loads")
}

/// Fixture document edited before loading.
pub fn scene_with(name: &str, edit: impl FnOnce(&mut Value)) -> Scene {
    let text = std::fs::read_to_string(fixtures().join(format!("{name}.json"))).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    edit(&mut doc);
    Scene::from_json(doc.to_string().as_bytes(), fixtures(), name).expect("edited scene loads")
}

/// Distance law evaluated from its definition.
pub fn gain_law(d: f64, gain: f64, d_ref: f64, d_cull: f64) -> f64 {
    let rolloff = if d <= d_ref { 1.0 } else { d_ref / d };
    let fade = (d_cull - d).clamp(0.0, 1.0);
    gain * rolloff * fade
}

pub async fn start(scene: Scene, seed: u64) -> (SocketAddr, AppState) {
    let state = AppState::new(scene, seed).unwrap();
    let listener = aar_service::bind(0).await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(aar_service::serve(listener, state.clone()));
    (addr, state)
}

#[derive(Debug, Clone)]
pub enum Incoming {
    Audio(u32, Vec<i16>),
    Json(Value),
}

impl Incoming {
    pub fn kind(&self) -> &str {
        match self {
            Incoming::Audio(..) => "audio",
            Incoming::Json(v) => v["type"].as_str().unwrap_or(""),
        }
    }
}

pub struct Client {
    ws: WebSocketStream<MaybeTlsStream<TcpStream>>,
}

impl Client {
    pub async fn connect(addr: SocketAddr) -> Client {
        let (ws, _) = connect_async(format!("ws://{addr}/ws")).await.unwrap();
        Client { ws }
    }

    pub async fn send(&mut self, v: Value) {
        self.ws
            .send(Message::Text(v.to_string().into()))
            .await
            .unwrap();
    }

    pub async fn send_text(&mut self, t: &str) {
        self.ws
            .send(Message::Text(t.to_string().into()))
            .await
            .unwrap();
    }

    pub async fn next(&mut self) -> Incoming {
        loop {
            let msg = tokio::time::timeout(Duration::from_secs(5), self.ws.next())
                .await
                .expect("server keeps streaming")
                .expect("stream open")
                .expect("frame");
            match msg {
                Message::Binary(b) => {
                    let (seq, pcm) = decode_audio(&b).expect("well-formed audio frame");
                    return Incoming::Audio(seq, pcm);
                }
                Message::Text(t) => return Incoming::Json(serde_json::from_str(&t).unwrap()),
                _ => {}
            }
        }
    }

    /// Everything received in the next `secs` seconds.
    pub async fn collect(&mut self, secs: f64) -> Vec<Incoming> {
        let end = tokio::time::Instant::now() + Duration::from_secs_f64(secs);
        let mut out = Vec::new();
        while tokio::time::Instant::now() < end {
            out.push(self.next().await);
        }
        out
    }

    /// Reads until a message of `kind` matching `pred` arrives.
    pub async fn until(
        &mut self,
        kind: &str,
        pred: impl Fn(&Value) -> bool,
    ) -> (Value, Vec<Incoming>) {
        let mut seen = Vec::new();
        loop {
            let m = self.next().await;
            if let Incoming::Json(v) = &m {
                if v["type"] == kind && pred(v) {
                    return (v.clone(), seen);
                }
            }
            seen.push(m);
        }
    }

    /// A fresh state message, skipping anything queued before the request.
    pub async fn state(&mut self) -> Value {
        self.send(serde_json::json!({ "type": "snapshot_request" }))
            .await;
        self.until("state", |_| true).await.0
    }
}

/// Newest periodic state after reading for a quarter second.
pub async fn latest_state(c: &mut Client) -> Value {
    c.collect(0.25)
        .await
        .into_iter()
        .rev()
        .find_map(|m| match m {
            Incoming::Json(v) if v["type"] == "state" => Some(v),
            _ => None,
        })
        .expect("states arrive at 10 Hz")
}

pub fn source<'a>(state: &'a Value, id: &str) -> &'a Value {
    state["sources"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["id"] == id)
        .expect("source in state")
}
