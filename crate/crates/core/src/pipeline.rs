//! Pipelines: directed acyclic graphs of processor instances joined pipe to
//! pipe, evaluated push-based over an input log, with an optional shared
//! event tracker.

use std::collections::{BTreeMap, VecDeque};

use crate::cost;
use crate::error::{ConnectError, ExplainError, StepError};
use crate::event::Event;
use crate::processor::{Processor, StepOutput};
use crate::tracker::{ConnectionRecord, EventTracker, ProcessorId, ProvenanceDag, Side, StreamPointer};

pub struct Pipeline {
    procs: BTreeMap<ProcessorId, Box<dyn Processor>>,
    connections: Vec<ConnectionRecord>,
    sources: Vec<(ProcessorId, usize)>,
    sinks: Vec<(ProcessorId, usize)>,
    tracker: Option<EventTracker>,
    next_id: u64,
    queues: BTreeMap<(ProcessorId, usize), VecDeque<Event>>,
    out_counts: BTreeMap<(ProcessorId, usize), usize>,
}

impl Pipeline {
    /// A pipeline with lineage turned off.
    pub fn new() -> Self {
        Self::build(None)
    }

    /// A pipeline with an event tracker recording associations.
    pub fn with_tracker() -> Self {
        Self::build(Some(EventTracker::new()))
    }

    pub fn with_tracking(enabled: bool) -> Self {
        if enabled {
            Self::with_tracker()
        } else {
            Self::new()
        }
    }

    fn build(tracker: Option<EventTracker>) -> Self {
        Pipeline {
            procs: BTreeMap::new(),
            connections: Vec::new(),
            sources: Vec::new(),
            sinks: Vec::new(),
            tracker,
            next_id: 0,
            queues: BTreeMap::new(),
            out_counts: BTreeMap::new(),
        }
    }

    /// Returns an id never previously issued by this pipeline.
    pub fn fresh_id(&mut self) -> ProcessorId {
        let id = ProcessorId(self.next_id);
        self.next_id += 1;
        id
    }

    /// Registers a processor instance and assigns it a unique id.
    pub fn add(&mut self, mut p: impl Processor + 'static) -> ProcessorId {
        let id = self.fresh_id();
        p.set_id(id);
        p.set_lineage(self.tracker.is_some());
        if let Some(t) = self.tracker.as_mut() {
            t.register_processor(id, p.name());
        }
        self.procs.insert(id, Box::new(p));
        id
    }

    pub fn has_tracker(&self) -> bool {
        self.tracker.is_some()
    }

    pub fn tracker(&self) -> Option<&EventTracker> {
        self.tracker.as_ref()
    }

    pub fn sources(&self) -> &[(ProcessorId, usize)] {
        &self.sources
    }

    pub fn sinks(&self) -> &[(ProcessorId, usize)] {
        &self.sinks
    }

    pub fn connections(&self) -> &[ConnectionRecord] {
        &self.connections
    }

    /// Joins an output pipe to a downstream input pipe.
    pub fn connect(
        &mut self,
        up: ProcessorId,
        out_pipe: usize,
        down: ProcessorId,
        in_pipe: usize,
    ) -> Result<(), ConnectError> {
        let up_proc = self.procs.get(&up).ok_or(ConnectError::UnknownProcessor(up))?;
        let down_proc = self.procs.get(&down).ok_or(ConnectError::UnknownProcessor(down))?;
        if out_pipe >= up_proc.output_arity() {
            return Err(ConnectError::PipeOutOfRange { processor: up, pipe: out_pipe });
        }
        if in_pipe >= down_proc.input_arity() {
            return Err(ConnectError::PipeOutOfRange { processor: down, pipe: in_pipe });
        }
        if self.connections.iter().any(|c| c.downstream == (down, in_pipe)) {
            return Err(ConnectError::DuplicateInputConnection { processor: down, pipe: in_pipe });
        }
        if up == down || self.reaches(down, up) {
            return Err(ConnectError::CycleDetected { up, down });
        }
        if let (Some(produced), Some(expected)) =
            (up_proc.output_hint(out_pipe), down_proc.input_hint(in_pipe))
        {
            if produced != expected {
                return Err(ConnectError::TypeMismatch { up, down, produced, expected });
            }
        }
        let record = ConnectionRecord { upstream: (up, out_pipe), downstream: (down, in_pipe) };
        self.connections.push(record);
        if let Some(t) = self.tracker.as_mut() {
            t.register_connection(record);
        }
        Ok(())
    }

    /// True when `to` is reachable from `from` along connections.
    fn reaches(&self, from: ProcessorId, to: ProcessorId) -> bool {
        let mut stack = vec![from];
        let mut seen = std::collections::BTreeSet::new();
        while let Some(p) = stack.pop() {
            if p == to {
                return true;
            }
            if !seen.insert(p) {
                continue;
            }
            for c in &self.connections {
                if c.upstream.0 == p {
                    stack.push(c.downstream.0);
                }
            }
        }
        false
    }

    /// Designates an input port fed directly from the log.
    pub fn set_source(&mut self, proc: ProcessorId, pipe: usize) -> Result<(), ConnectError> {
        let p = self.procs.get(&proc).ok_or(ConnectError::UnknownProcessor(proc))?;
        if pipe >= p.input_arity() {
            return Err(ConnectError::PipeOutOfRange { processor: proc, pipe });
        }
        self.sources.push((proc, pipe));
        if let Some(t) = self.tracker.as_mut() {
            t.register_source(proc, pipe);
        }
        Ok(())
    }

    /// Designates an output port whose events `feed` returns.
    pub fn set_sink(&mut self, proc: ProcessorId, pipe: usize) -> Result<(), ConnectError> {
        let p = self.procs.get(&proc).ok_or(ConnectError::UnknownProcessor(proc))?;
        if pipe >= p.output_arity() {
            return Err(ConnectError::PipeOutOfRange { processor: proc, pipe });
        }
        self.sinks.push((proc, pipe));
        Ok(())
    }

    /// Pushes one event sequence per source port through the graph and
    /// returns the events each sink emitted during this call. Each source
    /// event is pushed to completion through the DAG before the next one is
    /// read. `feed` may be called repeatedly; state persists across calls.
    pub fn feed(&mut self, inputs: &[Vec<Event>]) -> Result<Vec<Vec<Event>>, StepError> {
        assert_eq!(inputs.len(), self.sources.len(), "one sequence per source port");
        let sources = self.sources.clone();
        let mut collected = vec![Vec::new(); self.sinks.len()];
        let max = inputs.iter().map(Vec::len).max().unwrap_or(0);
        for k in 0..max {
            for (port, seq) in sources.iter().zip(inputs) {
                if let Some(e) = seq.get(k) {
                    self.queues.entry(*port).or_default().push_back(e.clone());
                }
            }
            self.run_to_quiescence(&mut collected)?;
        }
        Ok(collected)
    }

    fn run_to_quiescence(&mut self, collected: &mut [Vec<Event>]) -> Result<(), StepError> {
        loop {
            let mut progressed = false;
            let ids: Vec<ProcessorId> = self.procs.keys().copied().collect();
            for id in ids {
                while let Some(front) = self.take_front(id) {
                    if let Some(t) = self.tracker.as_mut() {
                        for (pipe, e) in front.iter().enumerate() {
                            t.record_value(id, Side::Input, pipe, e.clone());
                        }
                    }
                    let out = self.procs.get_mut(&id).unwrap().step(&front)?;
                    self.route(id, out, collected);
                    progressed = true;
                }
            }
            if !progressed {
                return Ok(());
            }
        }
    }

    /// Pops one complete front for `id`, or returns None if some input pipe
    /// is still waiting for its event at the current position.
    fn take_front(&mut self, id: ProcessorId) -> Option<Vec<Event>> {
        let arity = self.procs.get(&id)?.input_arity();
        if arity == 0 {
            return None;
        }
        let ready = (0..arity).all(|p| self.queues.get(&(id, p)).is_some_and(|q| !q.is_empty()));
        if !ready {
            return None;
        }
        let mut front = Vec::with_capacity(arity);
        for p in 0..arity {
            front.push(self.queues.get_mut(&(id, p)).unwrap().pop_front().unwrap());
        }
        Some(front)
    }

    fn route(&mut self, id: ProcessorId, out: StepOutput, collected: &mut [Vec<Event>]) {
        for (pipe, event) in out.emitted {
            *self.out_counts.entry((id, pipe)).or_default() += 1;
            if let Some(t) = self.tracker.as_mut() {
                t.record_value(id, Side::Output, pipe, event.clone());
            }
            for c in &self.connections {
                if c.upstream == (id, pipe) {
                    self.queues.entry(c.downstream).or_default().push_back(event.clone());
                }
            }
            for (i, sink) in self.sinks.iter().enumerate() {
                if *sink == (id, pipe) {
                    collected[i].push(event.clone());
                }
            }
        }
        if let Some(t) = self.tracker.as_mut() {
            for a in out.associations {
                t.associate(a);
            }
        }
    }

    /// Total events emitted so far on a sink port.
    pub fn sink_output_count(&self, sink: usize) -> usize {
        let port = self.sinks[sink];
        self.out_counts.get(&port).copied().unwrap_or(0)
    }

    /// Builds the provenance DAG explaining one event of a sink stream.
    pub fn explain_output(&self, sink: usize, position: usize) -> Result<ProvenanceDag, ExplainError> {
        let tracker = self.tracker.as_ref().ok_or(ExplainError::TrackerDisabled)?;
        let (proc, pipe) = self.sinks[sink];
        tracker.get_provenance_tree(StreamPointer::output(proc, pipe, position))
    }

    /// Modelled size of inter-processor queues and processor buffers.
    pub fn buffer_bytes(&self) -> usize {
        let queued: usize = self.queues.values().map(VecDeque::len).sum();
        queued * cost::BUFFERED_EVENT_BYTES
            + self.procs.values().map(|p| p.retained_cost()).sum::<usize>()
    }

    /// Modelled size of the tracker's retained records (0 when disabled).
    pub fn tracker_bytes(&self) -> usize {
        self.tracker.as_ref().map_or(0, EventTracker::estimated_bytes)
    }
}

impl Default for Pipeline {
    fn default() -> Self {
        Self::new()
    }
}
