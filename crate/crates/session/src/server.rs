use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};

use crate::protocol::{BoardsRequest, ClientMessage, CreateRequest, ErrorBody, ServerMessage, TeleportRequest};
use crate::session::{Session, SessionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServerConfig {
    pub idle_timeout: Duration,
    /// Enables `POST /sessions/{id}/debug/teleport`.
    pub debug: bool,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self { idle_timeout: Duration::from_secs(30 * 60), debug: false }
    }
}

#[derive(Debug)]
struct Entry {
    session: Session,
    last_used: Instant,
    connected: bool,
}

type Shared = Arc<Mutex<Entry>>;

/// All live sessions. Each session sits behind its own lock, so its
/// mutations are serialized while distinct sessions proceed independently.
#[derive(Debug)]
pub struct AppState {
    sessions: Mutex<HashMap<String, Shared>>,
    config: ServerConfig,
}

impl AppState {
    pub fn new(config: ServerConfig) -> Arc<Self> {
        Arc::new(Self { sessions: Mutex::new(HashMap::new()), config })
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().expect("sessions lock").len()
    }

    /// Drops sessions idle for longer than the timeout; returns how many.
    pub fn expire_idle(&self) -> usize {
        let timeout = self.config.idle_timeout;
        let mut map = self.sessions.lock().expect("sessions lock");
        let before = map.len();
        map.retain(|_, e| {
            let e = e.lock().expect("session lock");
            e.connected || e.last_used.elapsed() <= timeout
        });
        before - map.len()
    }

    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        let entry = self.sessions.lock().expect("sessions lock").get(id).cloned().ok_or(ApiError::NotFound)?;
        let expired = {
            let e = entry.lock().expect("session lock");
            !e.connected && e.last_used.elapsed() > self.config.idle_timeout
        };
        if expired {
            self.sessions.lock().expect("sessions lock").remove(id);
            return Err(ApiError::NotFound);
        }
        Ok(entry)
    }
}

#[derive(Debug)]
enum ApiError {
    NotFound,
    BadJson(String),
    Session(SessionError),
    Busy,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, error, detail) = match self {
            ApiError::NotFound => (StatusCode::NOT_FOUND, "not-found".to_string(), "no such session".to_string()),
            ApiError::BadJson(d) => (StatusCode::BAD_REQUEST, "config-invalid".into(), d),
            ApiError::Busy => (StatusCode::CONFLICT, "busy".into(), "a client is already connected".into()),
            ApiError::Session(e) => {
                let status = match e {
                    SessionError::Invalid(_) | SessionError::MalformedBoard(_) => StatusCode::BAD_REQUEST,
                    SessionError::GraphTooSmall(_) => StatusCode::UNPROCESSABLE_ENTITY,
                    SessionError::WrongPhase(_) => StatusCode::CONFLICT,
                    SessionError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
                };
                (status, e.code().to_string(), e.to_string())
            }
        };
        (status, Json(ErrorBody { error, detail })).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadJson(e.body_text())
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let mut r = Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(snapshot))
        .route("/sessions/{id}/boards", post(boards))
        .route("/sessions/{id}/trace", get(trace))
        .route("/sessions/{id}/play", get(play));
    if state.config.debug {
        r = r.route("/sessions/{id}/debug/teleport", post(teleport));
    }
    r.with_state(state)
}

/// Serves until the process is stopped, expiring idle sessions once a minute.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let state = AppState::new(config);
    let reaper = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60).min(config.idle_timeout));
        loop {
            tick.tick().await;
            let n = reaper.expire_idle();
            if n > 0 {
                log::info!("expired {n} idle sessions");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

async fn create(
    State(state): State<Arc<AppState>>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(req) = body?;
    let session = Session::create(req).map_err(ApiError::Session)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let resp = session.disclosure(&id);
    let entry = Entry { session, last_used: Instant::now(), connected: false };
    state.sessions.lock().expect("sessions lock").insert(id, Arc::new(Mutex::new(entry)));
    Ok((StatusCode::CREATED, Json(resp)).into_response())
}

fn with_session<T>(state: &AppState, id: &str, f: impl FnOnce(&mut Session) -> Result<T, SessionError>) -> Result<T, ApiError> {
    let entry = state.get(id)?;
    let mut e = entry.lock().expect("session lock");
    e.last_used = Instant::now();
    f(&mut e.session).map_err(ApiError::Session)
}

async fn snapshot(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let snap = with_session(&state, &id, |s| Ok(s.snapshot()))?;
    Ok(Json(snap).into_response())
}

async fn trace(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let text = with_session(&state, &id, |s| Ok(s.trace().to_ndjson()))?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], text).into_response())
}

async fn boards(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<BoardsRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    // an unknown session is reported before a malformed body
    state.get(&id)?;
    let Json(req) = body?;
    let resp = with_session(&state, &id, |s| s.submit_boards(req.boards))?;
    Ok(Json(resp).into_response())
}

async fn teleport(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<TeleportRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    state.get(&id)?;
    let Json(req) = body?;
    let win = with_session(&state, &id, |s| s.teleport(req.copier, req.board))?;
    Ok(Json(serde_json::json!({ "win": win })).into_response())
}

async fn play(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    ws: WebSocketUpgrade,
) -> Result<Response, ApiError> {
    let entry = state.get(&id)?;
    {
        let mut e = entry.lock().expect("session lock");
        if e.connected {
            return Err(ApiError::Busy);
        }
        e.connected = true;
        e.last_used = Instant::now();
    }
    Ok(ws.on_upgrade(move |socket| async move {
        run_socket(socket, entry.clone()).await;
        let mut e = entry.lock().expect("session lock");
        e.connected = false;
        e.last_used = Instant::now();
    }))
}

/// One message at a time: each client message is fully handled and all its
/// replies are sent before the next one is read.
async fn run_socket(mut socket: WebSocket, entry: Shared) {
    let hello = {
        let e = entry.lock().expect("session lock");
        ServerMessage::State { snapshot: e.session.snapshot() }
    };
    if send(&mut socket, &hello).await.is_err() {
        return;
    }
    while let Some(Ok(msg)) = socket.recv().await {
        let text = match msg {
            Message::Text(t) => t,
            Message::Close(_) => break,
            _ => continue,
        };
        let replies = match serde_json::from_str::<ClientMessage>(text.as_str()) {
            Ok(m) => {
                let mut e = entry.lock().expect("session lock");
                e.last_used = Instant::now();
                e.session.handle(m)
            }
            Err(err) => vec![ServerMessage::Error { detail: format!("malformed message: {err}") }],
        };
        for r in &replies {
            if send(&mut socket, r).await.is_err() {
                return;
            }
        }
    }
}

async fn send(socket: &mut WebSocket, m: &ServerMessage) -> Result<(), axum::Error> {
    let text = serde_json::to_string(m).expect("serializable message");
    socket.send(Message::Text(text.into())).await
}
