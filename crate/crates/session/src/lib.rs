//! Interactive sessions: a human plays the copiers against the automated
//! lamplighter. Setup goes over HTTP, the turn loop over a WebSocket.
//!
//! [`session::Session`] is the pure state machine; [`server`] wraps it in an
//! axum router with an idle-session reaper.

pub mod protocol;
pub mod server;
pub mod session;

pub use protocol::{ClientMessage, CreateRequest, CreateResponse, ServerMessage};
pub use server::{router, serve, AppState, ServerConfig};
pub use session::{Action, ProtocolPhase, Session, SessionError};
