//! The event model: the values that flow through pipes.

use std::fmt;

/// A single event flowing through a stream.
///
/// Events are immutable once emitted. Numbers are 64-bit floats with an
/// integer fast-path for display; equality on numbers is exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Bool(bool),
    Number(f64),
    Text(String),
    /// A named tuple: an ordered mapping of field name to value.
    /// Field names are unique within one tuple.
    Tuple(Vec<(String, Event)>),
}

impl Event {
    pub fn number(n: impl Into<f64>) -> Self {
        Event::Number(n.into())
    }

    pub fn text(s: impl Into<String>) -> Self {
        Event::Text(s.into())
    }

    pub fn tuple(fields: Vec<(impl Into<String>, Event)>) -> Self {
        Event::Tuple(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Event::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Event::Number(n) => Some(*n),
            _ => None,
        }
    }

    pub fn field(&self, name: &str) -> Option<&Event> {
        match self {
            Event::Tuple(fields) => fields.iter().find(|(k, _)| k == name).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn kind(&self) -> EventKind {
        match self {
            Event::Bool(_) => EventKind::Bool,
            Event::Number(_) => EventKind::Number,
            Event::Text(_) => EventKind::Text,
            Event::Tuple(_) => EventKind::Tuple,
        }
    }

    /// Renders the event with the paper-style notation: booleans as ⊤/⊥,
    /// numbers without a trailing `.0`, tuples as a parenthesized list of
    /// field values in declaration order.
    pub fn render(&self, ascii: bool) -> String {
        match self {
            Event::Bool(true) => if ascii { "true" } else { "\u{22a4}" }.to_string(),
            Event::Bool(false) => if ascii { "false" } else { "\u{22a5}" }.to_string(),
            Event::Number(n) => render_number(*n),
            Event::Text(s) => s.clone(),
            Event::Tuple(fields) => {
                let parts: Vec<String> = fields.iter().map(|(_, v)| v.render(ascii)).collect();
                format!("({})", parts.join(","))
            }
        }
    }
}

fn render_number(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{}", n)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// Coarse event domain, used for connection compatibility hints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Bool,
    Number,
    Text,
    Tuple,
}

/// An event usable as a hash-map key (slicing keys). Number keys compare
/// by bit pattern, which matches the exact-equality contract on numbers.
#[derive(Debug, Clone)]
pub struct EventKey(pub Event);

impl PartialEq for EventKey {
    fn eq(&self, other: &Self) -> bool {
        key_eq(&self.0, &other.0)
    }
}

impl Eq for EventKey {}

impl std::hash::Hash for EventKey {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        key_hash(&self.0, state);
    }
}

fn key_eq(a: &Event, b: &Event) -> bool {
    match (a, b) {
        (Event::Number(x), Event::Number(y)) => x.to_bits() == y.to_bits(),
        (Event::Tuple(x), Event::Tuple(y)) => {
            x.len() == y.len()
                && x.iter()
                    .zip(y.iter())
                    .all(|((ka, va), (kb, vb))| ka == kb && key_eq(va, vb))
        }
        _ => a == b,
    }
}

fn key_hash<H: std::hash::Hasher>(e: &Event, state: &mut H) {
    use std::hash::Hash;
    match e {
        Event::Bool(b) => (0u8, b).hash(state),
        Event::Number(n) => (1u8, n.to_bits()).hash(state),
        Event::Text(s) => (2u8, s).hash(state),
        Event::Tuple(fields) => {
            3u8.hash(state);
            for (k, v) in fields {
                k.hash(state);
                key_hash(v, state);
            }
        }
    }
}
