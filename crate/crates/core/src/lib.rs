//! A composable event-stream query engine with fine-grained
//! why-provenance.
//!
//! Queries are pipelines of small processors connected pipe to pipe. When
//! lineage is enabled, every processor reports which of its past inputs
//! explain each output; an [`tracker::EventTracker`] records these
//! associations together with the pipeline's topology and answers
//! explanation queries with a provenance DAG that bottoms out at positions
//! of the original log.
//!
//! The same pipelines run with lineage off and produce identical outputs;
//! the tracker only ever observes.

pub mod bench;
pub mod cost;
pub mod error;
pub mod event;
pub mod export;
pub mod fsm;
pub mod function;
pub mod logio;
pub mod ltl;
pub mod pipeline;
pub mod processor;
pub mod processors;
pub mod queries;
pub mod tracker;

pub use error::{ConnectError, ExplainError, FunctionError, StepError};
pub use event::{Event, EventKind};
pub use pipeline::Pipeline;
pub use processor::{Processor, StepOutput};
pub use queries::BuiltinQuery;
pub use tracker::{
    Association, DagNode, EventTracker, ProcessorId, ProvenanceDag, Side, StreamPointer,
};
