//! NDJSON game traces shared by both game engines.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Setup,
    Move,
    Turn,
    Win,
    Capture,
    Fault,
    End,
}

/// One trace line. Fields that do not apply to an event are omitted;
/// `dist_min` is written as `null` when every distance exceeded the report
/// cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: u64,
    pub ev: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actor: Option<String>,
    #[serde(rename = "move", default, skip_serializing_if = "Option::is_none")]
    pub mv: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "present_or_null")]
    pub dist_min: Option<Option<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boards_digest: Option<String>,
    #[serde(flatten)]
    pub data: Map<String, Value>,
}

mod present_or_null {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Option<u64>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(inner) => inner.serialize(s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Option<u64>>, D::Error> {
        Ok(Some(Option::<u64>::deserialize(d)?))
    }
}

impl Event {
    pub fn new(t: u64, ev: EventKind) -> Self {
        Self { t, ev, actor: None, mv: None, dist_min: None, boards_digest: None, data: Map::new() }
    }

    pub fn actor(mut self, actor: impl Into<String>) -> Self {
        self.actor = Some(actor.into());
        self
    }

    pub fn with_move(mut self, mv: Value) -> Self {
        self.mv = Some(mv);
        self
    }

    pub fn dist(mut self, d: Option<u64>) -> Self {
        self.dist_min = Some(d);
        self
    }

    pub fn digest(mut self, digest: String) -> Self {
        self.boards_digest = Some(digest);
        self
    }

    pub fn field(mut self, key: &str, value: impl Serialize) -> Self {
        self.data.insert(key.to_string(), serde_json::to_value(value).expect("serializable field"));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.data.get(key)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GameTrace {
    pub events: Vec<Event>,
}

impl GameTrace {
    pub fn push(&mut self, e: Event) {
        self.events.push(e);
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn write_ndjson<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.events {
            serde_json::to_writer(&mut w, e)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_ndjson(&self) -> String {
        let mut buf = Vec::new();
        self.write_ndjson(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn from_ndjson(text: &str) -> Result<Self, serde_json::Error> {
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<_, _>>()?;
        Ok(Self { events })
    }
}

/// First 16 hex digits of the SHA-256 of the JSON encoding of `value`.
pub fn digest_of<T: Serialize + ?Sized>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable value");
    let hash = Sha256::digest(&bytes);
    hex::encode(&hash[..8])
}
