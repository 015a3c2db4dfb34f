//! Deterministic size model for memory reporting.
//!
//! Retained memory is reported as a count-based model rather than runtime
//! heap introspection: every container is charged a base cost and every
//! retained record a fixed per-record cost. The constants are arbitrary but
//! fixed, so reports are reproducible across runs and platforms.

/// Per stored (output occurrence, input occurrence) association pair.
pub const ASSOC_RECORD_BYTES: usize = 40;

/// Per event value recorded by a tracker for DAG annotation.
pub const VALUE_RECORD_BYTES: usize = 24;

/// Per mirrored connection record.
pub const CONNECTION_RECORD_BYTES: usize = 32;

/// Fixed container overhead of one tracker.
pub const TRACKER_BASE_BYTES: usize = 64;

/// Per event buffered inside a processor or an inter-processor queue.
pub const BUFFERED_EVENT_BYTES: usize = 16;

/// Fixed overhead of one slice instance (inner pipeline + bookkeeping).
pub const SLICE_INSTANCE_BYTES: usize = 128;

/// Per entry of a slice's local-to-global position map.
pub const POSITION_ENTRY_BYTES: usize = 8;

/// One line summarizing the model, printed in benchmark report headers.
pub const MODEL_SUMMARY: &str = "size model: tracker = 64 + 40*assoc + 24*value + 32*conn; \
buffers = 16*event; slice = 128/instance + 8/position entry";
