//! JSON payloads of the session protocol. Boards, moves and snapshots use the
//! same serialization as the trace files.

use serde::{Deserialize, Serialize};

use wreathgame_core::lamp::{Board, CopierBudget, Move, Snapshot, StreetmapSpec};
use wreathgame_core::strategy::LabeledLamp;
use wreathgame_core::vertex::VertexId;

/// `POST /sessions`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub streetmap: StreetmapSpec,
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    #[serde(default)]
    pub budget: CopierBudget,
}

/// The lamplighter's plan, disclosed to the copiers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreateResponse {
    pub session_id: String,
    pub psi: u32,
    pub r: u32,
    pub v: VertexId,
    pub path_labels: Vec<LabeledLamp>,
    pub omega1: VertexId,
}

/// `POST /sessions/{id}/boards`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoardsRequest {
    pub boards: Vec<Board>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardsResponse {
    pub lamplighter_board: Board,
    /// Copier that already wins against the starting boards, if any.
    pub win: Option<usize>,
}

/// `POST /sessions/{id}/debug/teleport` (only when debug endpoints are on).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TeleportRequest {
    pub copier: usize,
    pub board: Board,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClientMessage {
    Move {
        copier: usize,
        #[serde(rename = "move")]
        mv: Move,
    },
    EndTurn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Applied {
        copier: usize,
        #[serde(rename = "move")]
        mv: Move,
    },
    /// `reason` is one of `not-adjacent`, `outside-area`, `wrong-phase`,
    /// `speed-exhausted`.
    Illegal { reason: String, detail: String },
    LamplighterTurn { moves: Vec<Move> },
    Win { copier: usize },
    State { snapshot: Snapshot },
    /// The client sent something that is not a protocol message.
    Error { detail: String },
}

/// Body of every HTTP error response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn client_messages_parse() {
        let m: ClientMessage = serde_json::from_str(r#"{"type":"move","copier":0,"move":{"kind":"walk","to":3}}"#).unwrap();
        assert_eq!(m, ClientMessage::Move { copier: 0, mv: Move::Walk { to: VertexId::Int(3) } });
        let e: ClientMessage = serde_json::from_str(r#"{"type":"end_turn"}"#).unwrap();
        assert_eq!(e, ClientMessage::EndTurn);
    }

    #[test]
    fn server_message_shapes() {
        let v = serde_json::to_value(ServerMessage::Win { copier: 2 }).unwrap();
        assert_eq!(v, serde_json::json!({"type":"win","copier":2}));
        let v = serde_json::to_value(ServerMessage::Illegal { reason: "speed-exhausted".into(), detail: "x".into() }).unwrap();
        assert_eq!(v["type"], "illegal");
        assert_eq!(v["reason"], "speed-exhausted");
        let v = serde_json::to_value(ServerMessage::LamplighterTurn { moves: vec![Move::SetState { new_state: VertexId::Int(1) }] }).unwrap();
        assert_eq!(v, serde_json::json!({"type":"lamplighter_turn","moves":[{"kind":"set_state","new_state":1}]}));
    }
}
