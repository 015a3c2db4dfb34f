//! Moore machines with function-guarded transitions and state-labelled
//! outputs.
//!
//! Each machine keeps a history vector of (state, event, input position)
//! triplets. Every output is associated with the input positions in the
//! vector; a cleanup pass then removes any loop that moved away from a
//! previously visited state, so the vector never holds two triplets with
//! the same state and the explanation is the shortest sub-trace reaching
//! the current state.

use crate::cost;
use crate::error::StepError;
use crate::event::Event;
use crate::function::{eval_with_lineage, AnyEvent, EqualsConstant, FunctionRef};
use crate::processor::{Processor, StepOutput};
use crate::tracker::ProcessorId;
use std::sync::Arc;

/// State index within one machine.
pub type StateId = usize;

pub struct MooreMachine {
    id: ProcessorId,
    initial: StateId,
    /// Per state, the ordered guard list; the first guard returning true
    /// fires (first-match order resolves overlap).
    transitions: Vec<Vec<(FunctionRef, StateId)>>,
    outputs: Vec<Event>,
    history: Vec<(StateId, Event, usize)>,
    current: StateId,
    in_pos: usize,
}

impl MooreMachine {
    pub fn new(outputs: Vec<Event>, initial: StateId) -> Self {
        let n = outputs.len();
        assert!(initial < n);
        MooreMachine {
            id: ProcessorId::default(),
            initial,
            transitions: vec![Vec::new(); n],
            outputs,
            history: Vec::new(),
            current: initial,
            in_pos: 0,
        }
    }

    pub fn add_transition(&mut self, from: StateId, guard: FunctionRef, to: StateId) -> &mut Self {
        self.transitions[from].push((guard, to));
        self
    }

    pub fn current_state(&self) -> StateId {
        self.current
    }

    /// Input positions currently retained in the history vector.
    pub fn history_positions(&self) -> Vec<usize> {
        self.history.iter().map(|&(_, _, i)| i).collect()
    }

    pub fn history_states(&self) -> Vec<StateId> {
        self.history.iter().map(|&(s, _, _)| s).collect()
    }

    pub fn reset(&mut self) {
        self.history.clear();
        self.current = self.initial;
        self.in_pos = 0;
    }
}

impl Processor for MooreMachine {
    fn name(&self) -> &'static str {
        "MooreMachine"
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
        let event = &front[0];
        let i = self.in_pos;
        self.in_pos += 1;

        let mut target = None;
        for (guard, to) in &self.transitions[self.current] {
            let (fired, _) = eval_with_lineage(guard.as_ref(), front)?;
            if fired == Event::Bool(true) {
                target = Some(*to);
                break;
            }
        }
        let next = target.ok_or_else(|| StepError::NoFireableTransition {
            state: self.current,
            event: event.to_string(),
        })?;

        self.history.push((next, event.clone(), i));
        self.current = next;

        let mut out = StepOutput::default();
        out.emit(0, self.outputs[next].clone());
        for &(_, _, pos) in &self.history {
            out.associate(self.id, 0, i, 0, pos);
        }

        // cleanup: drop everything after the earliest visit of the new state
        if let Some(k) = self.history.iter().position(|&(s, _, _)| s == next) {
            self.history.truncate(k + 1);
        }
        Ok(out)
    }

    fn retained_cost(&self) -> usize {
        self.history.len() * cost::BUFFERED_EVENT_BYTES
    }
}

/// The compliance machine used by the process-lifecycle query: an instance
/// must perform `a`, then repeat `b` (optionally followed by `c` to loop),
/// and may close with `d` after a `b`; anything else falls into a sink
/// state that outputs false forever.
pub fn lifecycle_machine() -> MooreMachine {
    const INIT: StateId = 0;
    const AFTER_A: StateId = 1;
    const AFTER_B: StateId = 2;
    const DONE: StateId = 3;
    const SINK: StateId = 4;
    let t = Event::Bool(true);
    let f = Event::Bool(false);
    let mut m = MooreMachine::new(vec![t.clone(), t.clone(), t.clone(), t, f], INIT);
    let on = |s: &str| -> FunctionRef { Arc::new(EqualsConstant(Event::text(s))) };
    let any: FunctionRef = Arc::new(AnyEvent);
    m.add_transition(INIT, on("a"), AFTER_A);
    m.add_transition(INIT, any.clone(), SINK);
    m.add_transition(AFTER_A, on("b"), AFTER_B);
    m.add_transition(AFTER_A, any.clone(), SINK);
    m.add_transition(AFTER_B, on("c"), AFTER_A);
    m.add_transition(AFTER_B, on("d"), DONE);
    m.add_transition(AFTER_B, any.clone(), SINK);
    m.add_transition(DONE, any.clone(), SINK);
    m.add_transition(SINK, any, SINK);
    m
}
