//! Error types shared across the engine.

use thiserror::Error;

use crate::event::EventKind;
use crate::tracker::ProcessorId;

/// Errors raised while wiring a pipeline together.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConnectError {
    #[error("processor {0} is not registered in this pipeline")]
    UnknownProcessor(ProcessorId),
    #[error("input pipe {pipe} of processor {processor} already has an upstream connection")]
    DuplicateInputConnection { processor: ProcessorId, pipe: usize },
    #[error("connecting {up} to {down} would create a cycle")]
    CycleDetected { up: ProcessorId, down: ProcessorId },
    #[error("output of {up} produces {produced:?} but input of {down} expects {expected:?}")]
    TypeMismatch {
        up: ProcessorId,
        down: ProcessorId,
        produced: EventKind,
        expected: EventKind,
    },
    #[error("pipe index {pipe} out of range for processor {processor}")]
    PipeOutOfRange { processor: ProcessorId, pipe: usize },
}

/// Errors raised by a processor while consuming an event front.
#[derive(Debug, Error, PartialEq)]
pub enum StepError {
    #[error("function error: {0}")]
    Function(#[from] FunctionError),
    #[error("processor {processor} expects a boolean on input pipe {pipe}, got {got}")]
    NonBooleanInput {
        processor: ProcessorId,
        pipe: usize,
        got: String,
    },
    #[error("no transition fires from state {state} on event {event}")]
    NoFireableTransition { state: usize, event: String },
    #[error("window inner processor produced {produced} outputs for {fed} inputs")]
    WindowContract { produced: usize, fed: usize },
}

/// Errors raised when evaluating a lineage function.
#[derive(Debug, Error, PartialEq)]
pub enum FunctionError {
    #[error("{function} expects {expected} arguments, got {got}")]
    WrongArity {
        function: String,
        expected: String,
        got: usize,
    },
    #[error("{function}: argument {index} has the wrong type ({got})")]
    TypeMismatch {
        function: String,
        index: usize,
        got: String,
    },
    #[error("tuple has no field named '{field}'")]
    MissingField { field: String },
}

/// Errors raised by explanation queries.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExplainError {
    #[error("lineage is turned off for this pipeline")]
    TrackerDisabled,
    #[error("unknown processor {0}")]
    UnknownProcessor(ProcessorId),
    #[error("position {position} on pipe {pipe} of processor {processor} has not been produced yet")]
    PositionNotYetProduced {
        processor: ProcessorId,
        pipe: usize,
        position: usize,
    },
}
