//! Single-purpose processors with closed-form association rules.

use crate::cost;
use crate::error::StepError;
use crate::event::{Event, EventKind};
use crate::function::{eval_with_lineage, FunctionRef};
use crate::processor::{Processor, StepOutput};
use crate::tracker::ProcessorId;

/// Lifts a pure function into a processor: one front in, one value out.
/// Associations follow the function's value-dependent lineage.
pub struct ApplyFunction {
    id: ProcessorId,
    function: FunctionRef,
    arity: usize,
    pos: usize,
}

impl ApplyFunction {
    pub fn new(function: FunctionRef, arity: usize) -> Self {
        ApplyFunction { id: ProcessorId::default(), function, arity, pos: 0 }
    }

    pub fn unary(function: FunctionRef) -> Self {
        Self::new(function, 1)
    }

    pub fn binary(function: FunctionRef) -> Self {
        Self::new(function, 2)
    }
}

impl Processor for ApplyFunction {
    fn name(&self) -> &'static str {
        "ApplyFunction"
    }
    fn id(&self) -> ProcessorId {
        self.id
    }
    fn set_id(&mut self, id: ProcessorId) {
        self.id = id;
    }
    fn input_arity(&self) -> usize {
        self.arity
    }
    fn output_arity(&self) -> usize {
        1
    }

    fn step(&mut self, front: &[Event]) -> Result<StepOutput, StepError> {
        let (value, contributing) = eval_with_lineage(self.function.as_ref(), front)?;
        let mut out = StepOutput::default();
        let i = self.pos;
        self.pos += 1;
        out.emit(0, value);
        for arg in contributing {
            out.associate(self.id, 0, i, arg, i);
        }
        Ok(out)
    }
}

/// Folds the stream with a binary function, emitting the running value.
///
/// The contributing set is chained through the function's lineage: when the
/// new input alone explains the fold value, the set collapses to it; when
/// only the accumulator contributes, the set is carried over unchanged.
pub struct Cumulate {
    id: ProcessorId,
    function: FunctionRef,
    acc: Event,
    contributing: Vec<usize>,
    pos: usize,
}

impl Cumulate {
    /// Seeds with the function's identity element.
    pub fn new(function: FunctionRef) -> Self {
        let seed = crate::function::identity_element(function.as_ref())
            .expect("cumulative function without a known identity element; use with_seed");
        Self::with_seed(function, seed)
    }

    pub fn with_seed(function: FunctionRef, seed: Event) -> Self {
        Cumulate { id: ProcessorId::default(), function, acc: seed, contributing: Vec::new(), pos: 0 }
    }
}

impl Processor for Cumulate {
    fn name(&self) -> &'static str {
        "Cumulate"
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
        let i = self.pos;
        self.pos += 1;
        let (value, lineage) =
            eval_with_lineage(self.function.as_ref(), &[self.acc.clone(), front[0].clone()])?;
        let uses_acc = lineage.contains(&0);
        let uses_input = lineage.contains(&1);
        match (uses_acc, uses_input) {
            (false, true) => self.contributing = vec![i],
            (true, true) => self.contributing.push(i),
            (true, false) => {}
            (false, false) => unreachable!("lineage sets are non-empty"),
        }
        self.acc = value.clone();
        let mut out = StepOutput::default();
        out.emit(0, value);
        for &j in &self.contributing {
            out.associate(self.id, 0, i, 0, j);
        }
        Ok(out)
    }

    fn retained_cost(&self) -> usize {
        cost::BUFFERED_EVENT_BYTES
    }
}

/// Keeps every n-th event and discards the others. Output j is the input
/// at position n*j.
pub struct CountDecimate {
    id: ProcessorId,
    interval: usize,
    pos: usize,
}

impl CountDecimate {
    pub fn new(interval: usize) -> Self {
        assert!(interval >= 1, "decimation interval must be >= 1");
        CountDecimate { id: ProcessorId::default(), interval, pos: 0 }
    }
}

impl Processor for CountDecimate {
    fn name(&self) -> &'static str {
        "CountDecimate"
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
        let i = self.pos;
        self.pos += 1;
        let mut out = StepOutput::default();
        if i.is_multiple_of(self.interval) {
            let j = i / self.interval;
            out.emit(0, front[0].clone());
            out.associate(self.id, 0, j, 0, i);
        }
        Ok(out)
    }
}

/// Discards the first n events; output i-n is the input at position i.
pub struct Trim {
    id: ProcessorId,
    skip: usize,
    pos: usize,
}

impl Trim {
    pub fn new(skip: usize) -> Self {
        Trim { id: ProcessorId::default(), skip, pos: 0 }
    }
}

impl Processor for Trim {
    fn name(&self) -> &'static str {
        "Trim"
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
        let i = self.pos;
        self.pos += 1;
        let mut out = StepOutput::default();
        if i >= self.skip {
            out.emit(0, front[0].clone());
            out.associate(self.id, 0, i - self.skip, 0, i);
        }
        Ok(out)
    }
}

/// Replicates the input stream onto every output pipe.
pub struct Fork {
    id: ProcessorId,
    fan_out: usize,
    pos: usize,
}

impl Fork {
    pub fn new(fan_out: usize) -> Self {
        assert!(fan_out >= 1);
        Fork { id: ProcessorId::default(), fan_out, pos: 0 }
    }
}

impl Processor for Fork {
    fn name(&self) -> &'static str {
        "Fork"
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
        self.fan_out
    }

    fn step(&mut self, front: &[Event]) -> Result<StepOutput, StepError> {
        let i = self.pos;
        self.pos += 1;
        let mut out = StepOutput::default();
        for pipe in 0..self.fan_out {
            out.emit(pipe, front[0].clone());
            out.associate(self.id, pipe, i, 0, i);
        }
        Ok(out)
    }
}

/// Lets a data event through when the control event at the same position is
/// true. Each passed event is associated both to the data event and to the
/// control event that let it through.
pub struct Filter {
    id: ProcessorId,
    pos: usize,
    passed: usize,
}

impl Filter {
    pub fn new() -> Self {
        Filter { id: ProcessorId::default(), pos: 0, passed: 0 }
    }
}

impl Default for Filter {
    fn default() -> Self {
        Self::new()
    }
}

impl Processor for Filter {
    fn name(&self) -> &'static str {
        "Filter"
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
    fn input_hint(&self, pipe: usize) -> Option<EventKind> {
        (pipe == 1).then_some(EventKind::Bool)
    }

    fn step(&mut self, front: &[Event]) -> Result<StepOutput, StepError> {
        let i = self.pos;
        self.pos += 1;
        let keep = front[1].as_bool().ok_or_else(|| StepError::NonBooleanInput {
            processor: self.id,
            pipe: 1,
            got: front[1].to_string(),
        })?;
        let mut out = StepOutput::default();
        if keep {
            let k = self.passed;
            self.passed += 1;
            out.emit(0, front[0].clone());
            out.associate(self.id, 0, k, 0, i);
            out.associate(self.id, 0, k, 1, i);
        }
        Ok(out)
    }
}

/// Turns any input event into a predefined constant. The output value is
/// input-independent, so no association is registered: its occurrences are
/// leaves of every provenance DAG.
pub struct TurnInto {
    id: ProcessorId,
    constant: Event,
}

impl TurnInto {
    pub fn new(constant: Event) -> Self {
        TurnInto { id: ProcessorId::default(), constant }
    }
}

impl Processor for TurnInto {
    fn name(&self) -> &'static str {
        "TurnInto"
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
    fn output_hint(&self, _pipe: usize) -> Option<EventKind> {
        Some(self.constant.kind())
    }

    fn step(&mut self, _front: &[Event]) -> Result<StepOutput, StepError> {
        let mut out = StepOutput::default();
        out.emit(0, self.constant.clone());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{Conjunction, Multiplication, NotEquals};
    use std::sync::Arc;

    fn n(v: i64) -> Event {
        Event::Number(v as f64)
    }

    fn feed_all(p: &mut dyn Processor, inputs: &[Event]) -> (Vec<Event>, Vec<crate::tracker::Association>) {
        let mut events = Vec::new();
        let mut assocs = Vec::new();
        for e in inputs {
            let out = p.step(std::slice::from_ref(e)).unwrap();
            events.extend(out.emitted.into_iter().map(|(_, e)| e));
            assocs.extend(out.associations);
        }
        (events, assocs)
    }

    #[test]
    fn decimate_every_third() {
        let mut p = CountDecimate::new(3);
        let input: Vec<Event> = "abcdefg".chars().map(|c| Event::text(c.to_string())).collect();
        let (out, assocs) = feed_all(&mut p, &input);
        assert_eq!(out, vec![Event::text("a"), Event::text("d"), Event::text("g")]);
        assert_eq!(assocs.last().unwrap().out_pos, 2);
        assert_eq!(assocs.last().unwrap().in_pos, 6);
    }

    #[test]
    fn decimate_one_is_identity() {
        let mut p = CountDecimate::new(1);
        let (out, assocs) = feed_all(&mut p, &[n(5), n(6)]);
        assert_eq!(out, vec![n(5), n(6)]);
        assert!(assocs.iter().all(|a| a.out_pos == a.in_pos));
    }

    #[test]
    fn decimate_partial_interval_emits_only_first() {
        let mut p = CountDecimate::new(3);
        let (out, _) = feed_all(&mut p, &[n(1), n(2)]);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn trim_one_drops_first_and_shifts() {
        let mut p = Trim::new(1);
        let (out, assocs) = feed_all(&mut p, &[n(1), n(2), n(3)]);
        assert_eq!(out, vec![n(2), n(3)]);
        assert_eq!((assocs[0].out_pos, assocs[0].in_pos), (0, 1));
    }

    #[test]
    fn trim_zero_is_identity() {
        let mut p = Trim::new(0);
        let (out, _) = feed_all(&mut p, &[n(1), n(2)]);
        assert_eq!(out, vec![n(1), n(2)]);
    }

    #[test]
    fn trim_emits_nothing_before_threshold() {
        let mut p = Trim::new(5);
        let (out, _) = feed_all(&mut p, &[n(1), n(2), n(3)]);
        assert!(out.is_empty());
    }

    #[test]
    fn fork_associates_every_pipe() {
        let mut p = Fork::new(2);
        p.set_id(ProcessorId(3));
        for _ in 0..5 {
            p.step(&[n(0)]).unwrap();
        }
        let out = p.step(&[n(5)]).unwrap();
        assert_eq!(out.emitted.len(), 2);
        assert_eq!(out.associations.len(), 2);
        for a in &out.associations {
            assert_eq!((a.out_pos, a.in_pos), (5, 5));
        }
        assert_eq!(out.associations[0].out_pipe, 0);
        assert_eq!(out.associations[1].out_pipe, 1);
    }

    #[test]
    fn filter_false_control_drops_silently() {
        let mut p = Filter::new();
        let out = p.step(&[n(9), Event::Bool(false)]).unwrap();
        assert!(out.emitted.is_empty());
        assert!(out.associations.is_empty());
        // next true control passes at output position 0, associated to both pipes
        let out = p.step(&[n(7), Event::Bool(true)]).unwrap();
        assert_eq!(out.emitted, vec![(0, n(7))]);
        let pairs: Vec<(usize, usize, usize)> =
            out.associations.iter().map(|a| (a.out_pos, a.in_pipe, a.in_pos)).collect();
        assert_eq!(pairs, vec![(0, 0, 1), (0, 1, 1)]);
    }

    #[test]
    fn filter_rejects_non_boolean_control() {
        let mut p = Filter::new();
        assert!(matches!(
            p.step(&[n(1), n(1)]),
            Err(StepError::NonBooleanInput { pipe: 1, .. })
        ));
    }

    #[test]
    fn apply_function_not_equals_on_equal_zeroes() {
        let mut p = ApplyFunction::binary(Arc::new(NotEquals));
        p.step(&[n(3), n(0)]).unwrap();
        let out = p.step(&[n(0), n(0)]).unwrap();
        assert_eq!(out.emitted, vec![(0, Event::Bool(false))]);
        let pairs: Vec<(usize, usize, usize)> =
            out.associations.iter().map(|a| (a.out_pos, a.in_pipe, a.in_pos)).collect();
        assert_eq!(pairs, vec![(1, 0, 1), (1, 1, 1)]);
    }

    #[test]
    fn cumulate_conjunction_points_at_first_false() {
        let mut p = Cumulate::new(Arc::new(Conjunction));
        let input = [true, true, false, true].map(Event::Bool);
        let (out, assocs) = feed_all(&mut p, &input);
        assert_eq!(out, [true, true, false, false].map(Event::Bool));
        let last: Vec<usize> =
            assocs.iter().filter(|a| a.out_pos == 3).map(|a| a.in_pos).collect();
        assert_eq!(last, vec![2]);
    }

    #[test]
    fn cumulate_addition_keeps_all_inputs() {
        let mut p = Cumulate::new(Arc::new(crate::function::Addition));
        let (out, assocs) = feed_all(&mut p, &[n(1), n(2), n(3)]);
        assert_eq!(out, vec![n(1), n(3), n(6)]);
        let last: Vec<usize> =
            assocs.iter().filter(|a| a.out_pos == 2).map(|a| a.in_pos).collect();
        assert_eq!(last, vec![0, 1, 2]);
    }

    #[test]
    fn cumulate_product_collapses_on_zero() {
        let mut p = Cumulate::new(Arc::new(Multiplication));
        let (out, assocs) = feed_all(&mut p, &[n(1), n(4), n(0)]);
        assert_eq!(out, vec![n(1), n(4), n(0)]);
        let last: Vec<usize> =
            assocs.iter().filter(|a| a.out_pos == 2).map(|a| a.in_pos).collect();
        assert_eq!(last, vec![2]);
    }

    #[test]
    fn turninto_emits_constant_without_associations() {
        let mut p = TurnInto::new(n(0));
        let (out, assocs) = feed_all(&mut p, &[n(3), n(7), Event::text("x"), n(1), n(9)]);
        assert_eq!(out, vec![n(0); 5]);
        assert!(assocs.is_empty());
    }
}
