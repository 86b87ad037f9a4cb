//! Live preview service. Each WebSocket connection owns an engine session
//! that renders on a wall-clock schedule and streams audio, meters, events
//! and state. `GET /scene`, `PUT /scene` and `GET /health` serve the scene
//! template that new sessions start from.

pub mod protocol;
pub mod session;
pub mod store;

use std::net::{Ipv4Addr, SocketAddr};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use futures_util::{SinkExt, StreamExt};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tokio::sync::mpsc;
use tokio::time::{interval, MissedTickBehavior};

use aar_core::Scene;

pub use protocol::{decode_audio, parse_control, Control, AUDIO_TAG};
pub use session::{BlockOutput, Session};
pub use store::SceneStore;

pub const STATE_PERIOD: Duration = Duration::from_millis(100);

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error(transparent)]
    Scene(#[from] aar_core::Error),
    #[error("cannot listen on port {port}: {source}")]
    Bind {
        port: u16,
        #[source]
        source: std::io::Error,
    },
    #[error("server stopped: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone)]
pub struct AppState {
    store: Arc<SceneStore>,
    seed: u64,
    sessions: Arc<AtomicUsize>,
}

impl AppState {
    pub fn new(scene: Scene, seed: u64) -> Result<AppState, ServiceError> {
        Ok(AppState {
            store: Arc::new(SceneStore::new(scene)?),
            seed,
            sessions: Arc::new(AtomicUsize::new(0)),
        })
    }

    pub fn store(&self) -> &Arc<SceneStore> {
        &self.store
    }

    pub fn active_sessions(&self) -> usize {
        self.sessions.load(Ordering::SeqCst)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/scene", get(get_scene).put(put_scene))
        .route("/ws", get(ws_upgrade))
        .with_state(state)
}

/// Binds the loopback interface. Port 0 picks a free port.
pub async fn bind(port: u16) -> Result<TcpListener, ServiceError> {
    TcpListener::bind(SocketAddr::from((Ipv4Addr::LOCALHOST, port)))
        .await
        .map_err(|source| ServiceError::Bind { port, source })
}

pub async fn serve(listener: TcpListener, state: AppState) -> Result<(), ServiceError> {
    axum::serve(listener, router(state)).await?;
    Ok(())
}

async fn health(State(state): State<AppState>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "scene": state.store.scene().name,
        "sessions": state.active_sessions(),
    }))
}

async fn get_scene(State(state): State<AppState>) -> Json<Value> {
    Json(state.store.scene_value())
}

async fn put_scene(State(state): State<AppState>, body: Bytes) -> Response {
    let base_dir = state.store.scene().base_dir;
    let result = Scene::from_json(&body, base_dir, "PUT /scene")
        .and_then(|scene| state.store.replace(scene));
    match result {
        Ok(()) => Json(state.store.scene_value()).into_response(),
        Err(e) => (
            StatusCode::UNPROCESSABLE_ENTITY,
            Json(json!({ "type": "error", "message": e.to_string() })),
        )
            .into_response(),
    }
}

async fn ws_upgrade(State(state): State<AppState>, ws: WebSocketUpgrade) -> Response {
    ws.on_upgrade(move |socket| run_session(socket, state))
}

fn text(v: &Value) -> Message {
    Message::Text(v.to_string().into())
}

/// Drives one connection. A reader task forwards client text; this task
/// owns the engine and the socket sink, so a slow client stalls block
/// production instead of losing frames.
async fn run_session(socket: WebSocket, state: AppState) {
    state.sessions.fetch_add(1, Ordering::SeqCst);
    let (mut sink, mut stream) = socket.split();
    let (tx, mut rx) = mpsc::channel::<String>(256);
    let reader = tokio::spawn(async move {
        while let Some(Ok(msg)) = stream.next().await {
            match msg {
                Message::Text(t) => {
                    if tx.send(t.to_string()).await.is_err() {
                        break;
                    }
                }
                Message::Close(_) => break,
                _ => {}
            }
        }
    });

    let mut session = Session::new(state.store.clone(), state.seed);
    let block = Duration::from_secs_f64(session.engine().block_duration());
    let mut audio = interval(block);
    audio.set_missed_tick_behavior(MissedTickBehavior::Delay);
    let mut snapshots = interval(STATE_PERIOD);
    snapshots.set_missed_tick_behavior(MissedTickBehavior::Delay);

    let _ = drive(&mut session, &mut sink, &mut rx, &mut audio, &mut snapshots).await;
    reader.abort();
    state.sessions.fetch_sub(1, Ordering::SeqCst);
}

async fn drive<S>(
    session: &mut Session,
    sink: &mut S,
    rx: &mut mpsc::Receiver<String>,
    audio: &mut tokio::time::Interval,
    snapshots: &mut tokio::time::Interval,
) -> Result<(), S::Error>
where
    S: futures_util::Sink<Message> + Unpin,
{
    loop {
        tokio::select! {
            _ = audio.tick() => {
                let out = session.next_block();
                for e in &out.errors {
                    sink.feed(text(&protocol::error_message(e))).await?;
                }
                let frame = protocol::encode_audio(out.seq, &out.frames);
                sink.feed(Message::Binary(frame.into())).await?;
                sink.feed(text(&protocol::meters_message(out.virtual_rms, out.ambient_rms))).await?;
                for e in &out.events {
                    sink.feed(text(&protocol::event_message(e))).await?;
                }
                sink.flush().await?;
            }
            _ = snapshots.tick() => {
                sink.send(text(&session.state())).await?;
            }
            msg = rx.recv() => {
                let Some(msg) = msg else { return Ok(()) };
                match parse_control(&msg) {
                    Ok(Control::SnapshotRequest) => sink.send(text(&session.state())).await?,
                    Ok(control) => session.queue(control),
                    Err(e) => sink.send(text(&protocol::error_message(&e))).await?,
                }
            }
        }
    }
}
