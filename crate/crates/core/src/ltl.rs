//! Streaming LTL temporal operators with burst semantics.
//!
//! Each operator emits, at output position i, the verdict for the suffix of
//! its input starting at position i. Verdicts for several suffixes often
//! become definite on the same input, so one input can release a burst of
//! outputs. Every output of a burst is associated with the decisive input
//! event that settled it, partitioning the output stream into zones.
//!
//! Boolean connectives over paired streams are plain `ApplyFunction`
//! instances; they need no burst logic.

use crate::error::StepError;
use crate::event::{Event, EventKind};
use crate::processor::{Processor, StepOutput};
use crate::tracker::ProcessorId;

fn require_bool(id: ProcessorId, pipe: usize, e: &Event) -> Result<bool, StepError> {
    e.as_bool().ok_or_else(|| StepError::NonBooleanInput { processor: id, pipe, got: e.to_string() })
}

macro_rules! unary_temporal {
    ($ty:ident, $name:literal, $decides_on:expr, $verdict:expr) => {
        /// See the module docs for the shared burst semantics.
        pub struct $ty {
            id: ProcessorId,
            in_pos: usize,
            next_out: usize,
        }

        impl $ty {
            pub fn new() -> Self {
                $ty { id: ProcessorId::default(), in_pos: 0, next_out: 0 }
            }

            /// Input positions consumed with no output yet.
            pub fn pending_count(&self) -> usize {
                self.in_pos - self.next_out
            }
        }

        impl Default for $ty {
            fn default() -> Self {
                Self::new()
            }
        }

        impl Processor for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn id(&self) -> ProcessorId {
                self.id
            }
            fn set_id(&mut self, id: ProcessorId) {
                self.id = id;
            }
            fn input_arity(&self) -> usize {
                1
            }
            fn output_arity(&self) -> usize {
                1
            }
            fn input_hint(&self, _pipe: usize) -> Option<EventKind> {
                Some(EventKind::Bool)
            }
            fn output_hint(&self, _pipe: usize) -> Option<EventKind> {
                Some(EventKind::Bool)
            }

            fn step(&mut self, front: &[Event]) -> Result<StepOutput, StepError> {
                let i = self.in_pos;
                self.in_pos += 1;
                let v = require_bool(self.id, 0, &front[0])?;
                let mut out = StepOutput::default();
                if v == $decides_on {
                    for j in self.next_out..=i {
                        out.emit(0, Event::Bool($verdict));
                        out.associate(self.id, 0, j, 0, i);
                    }
                    self.next_out = i + 1;
                }
                Ok(out)
            }
        }
    };
}

// G: a false input settles every open suffix to false.
unary_temporal!(Globally, "Globally", false, false);
// F: a true input settles every open suffix to true.
unary_temporal!(Eventually, "Eventually", true, true);

/// X: output i is the input at position i+1, associated with it.
pub struct Next {
    id: ProcessorId,
    in_pos: usize,
}

impl Next {
    pub fn new() -> Self {
        Next { id: ProcessorId::default(), in_pos: 0 }
    }
}

impl Default for Next {
    fn default() -> Self {
        Self::new()
    }
}

impl Processor for Next {
    fn name(&self) -> &'static str {
        "Next"
    }
    fn id(&self) -> ProcessorId {
        self.id
    }
    fn set_id(&mut self, id: ProcessorId) {
        self.id = id;
    }
    fn input_arity(&self) -> usize {
        1
    }
    fn output_arity(&self) -> usize {
        1
    }

    fn step(&mut self, front: &[Event]) -> Result<StepOutput, StepError> {
        let i = self.in_pos;
        self.in_pos += 1;
        let mut out = StepOutput::default();
        if i >= 1 {
            out.emit(0, front[0].clone());
            out.associate(self.id, 0, i - 1, 0, i);
        }
        Ok(out)
    }
}

/// U: left U right over paired boolean streams. A true right settles every
/// open suffix to true; a false left (with right still false) settles them
/// to false; otherwise the front stays pending.
pub struct Until {
    id: ProcessorId,
    in_pos: usize,
    next_out: usize,
}

impl Until {
    pub fn new() -> Self {
        Until { id: ProcessorId::default(), in_pos: 0, next_out: 0 }
    }

    pub fn pending_count(&self) -> usize {
        self.in_pos - self.next_out
    }
}

impl Default for Until {
    fn default() -> Self {
        Self::new()
    }
}

impl Processor for Until {
    fn name(&self) -> &'static str {
        "Until"
    }
    fn id(&self) -> ProcessorId {
        self.id
    }
    fn set_id(&mut self, id: ProcessorId) {
        self.id = id;
    }
    fn input_arity(&self) -> usize {
        2
    }
    fn output_arity(&self) -> usize {
        1
    }
    fn input_hint(&self, _pipe: usize) -> Option<EventKind> {
        Some(EventKind::Bool)
    }
    fn output_hint(&self, _pipe: usize) -> Option<EventKind> {
        Some(EventKind::Bool)
    }

    fn step(&mut self, front: &[Event]) -> Result<StepOutput, StepError> {
        let i = self.in_pos;
        self.in_pos += 1;
        let left = require_bool(self.id, 0, &front[0])?;
        let right = require_bool(self.id, 1, &front[1])?;
        let mut out = StepOutput::default();
        let (verdict, pipe) = if right {
            (true, 1)
        } else if !left {
            (false, 0)
        } else {
            return Ok(out);
        };
        for j in self.next_out..=i {
            out.emit(0, Event::Bool(verdict));
            out.associate(self.id, 0, j, pipe, i);
        }
        self.next_out = i + 1;
        Ok(out)
    }
}
