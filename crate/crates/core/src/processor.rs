//! The processor abstraction: a stateful unit consuming one event front at
//! a time and emitting zero or more events per output pipe, together with
//! the associations that explain them.

use crate::error::StepError;
use crate::event::{Event, EventKind};
use crate::tracker::{Association, ProcessorId};

/// Everything a processor produced while consuming one front: emitted
/// events (in emission order, per output pipe) and the associations that
/// explain them. Output positions inside the associations are absolute.
#[derive(Debug, Default)]
pub struct StepOutput {
    pub emitted: Vec<(usize, Event)>,
    pub associations: Vec<Association>,
}

impl StepOutput {
    pub fn emit(&mut self, pipe: usize, event: Event) {
        self.emitted.push((pipe, event));
    }

    pub fn associate(
        &mut self,
        processor: ProcessorId,
        out_pipe: usize,
        out_pos: usize,
        in_pipe: usize,
        in_pos: usize,
    ) {
        self.associations.push(Association { processor, out_pipe, out_pos, in_pipe, in_pos });
    }
}

pub trait Processor: Send {
    /// Role name, used in rendered explanations.
    fn name(&self) -> &'static str;

    fn id(&self) -> ProcessorId;

    /// Called once by the pipeline when the processor is registered.
    fn set_id(&mut self, id: ProcessorId);

    fn input_arity(&self) -> usize;

    fn output_arity(&self) -> usize;

    /// Consumes one complete front (one event per input pipe, all at the
    /// same position).
    fn step(&mut self, front: &[Event]) -> Result<StepOutput, StepError>;

    /// Informs the processor whether lineage is being tracked. Processors
    /// with private internal trackers use this to turn them on or off;
    /// outputs must not depend on it.
    fn set_lineage(&mut self, _enabled: bool) {}

    /// Static event-domain hint for connection compatibility checks.
    fn input_hint(&self, _pipe: usize) -> Option<EventKind> {
        None
    }

    fn output_hint(&self, _pipe: usize) -> Option<EventKind> {
        None
    }

    /// Modelled size in bytes of the processor's internal buffers, using
    /// the constants from [`crate::cost`].
    fn retained_cost(&self) -> usize {
        0
    }
}
