//! Slicing: routing each event to a per-key copy of a processor chain and
//! aggregating the last output of every copy.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cost;
use crate::error::StepError;
use crate::event::{Event, EventKey};
use crate::function::{eval_with_lineage, FunctionRef};
use crate::pipeline::Pipeline;
use crate::processor::{Processor, StepOutput};
use crate::tracker::ProcessorId;

/// Builds one fresh inner pipeline per slice; the flag selects whether the
/// inner pipeline carries its own private tracker.
pub type PipelineFactory = Arc<dyn Fn(bool) -> Pipeline + Send + Sync>;

struct SliceInstance {
    pipeline: Pipeline,
    /// slice-local input position -> position in the stream this processor
    /// ingests; strictly increasing.
    pos_map: Vec<usize>,
    last_output: Option<Event>,
    out_count: usize,
}

/// Splits the input stream into per-key sub-streams, each processed by a
/// private copy of the prototype chain, and emits the aggregate of the last
/// output of every slice on each input.
///
/// Lineage: the aggregator's value-dependent lineage selects the
/// contributing slices; each contributing slice's private tracker is then
/// queried for the explanation of its last output, and the slice-local leaf
/// positions are translated back to global positions.
pub struct SliceProcessor {
    id: ProcessorId,
    slicer: FunctionRef,
    factory: PipelineFactory,
    aggregator: FunctionRef,
    lineage: bool,
    // slices in first-appearance order, for deterministic aggregation
    instances: Vec<SliceInstance>,
    keys: HashMap<EventKey, usize>,
    in_pos: usize,
    out_pos: usize,
}

impl SliceProcessor {
    pub fn new(
        slicer: FunctionRef,
        factory: impl Fn(bool) -> Pipeline + Send + Sync + 'static,
        aggregator: FunctionRef,
    ) -> Self {
        SliceProcessor {
            id: ProcessorId::default(),
            slicer,
            factory: Arc::new(factory),
            aggregator,
            lineage: false,
            instances: Vec::new(),
            keys: HashMap::new(),
            in_pos: 0,
            out_pos: 0,
        }
    }

    pub fn slice_count(&self) -> usize {
        self.instances.len()
    }
}

impl Processor for SliceProcessor {
    fn name(&self) -> &'static str {
        "Slice"
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
    fn set_lineage(&mut self, enabled: bool) {
        self.lineage = enabled;
    }

    fn step(&mut self, front: &[Event]) -> Result<StepOutput, StepError> {
        let i = self.in_pos;
        self.in_pos += 1;
        let (key, _) = eval_with_lineage(self.slicer.as_ref(), front)?;

        let slot = match self.keys.get(&EventKey(key.clone())) {
            Some(&s) => s,
            None => {
                let s = self.instances.len();
                self.instances.push(SliceInstance {
                    pipeline: (self.factory)(self.lineage),
                    pos_map: Vec::new(),
                    last_output: None,
                    out_count: 0,
                });
                self.keys.insert(EventKey(key), s);
                s
            }
        };

        let inst = &mut self.instances[slot];
        inst.pos_map.push(i);
        let produced = inst.pipeline.feed(&[vec![front[0].clone()]])?;
        if let Some(last) = produced[0].last() {
            inst.last_output = Some(last.clone());
            inst.out_count = inst.pipeline.sink_output_count(0);
        }

        // aggregate over the last value of each slice, in first-appearance order
        let lasts: Vec<(usize, Event)> = self
            .instances
            .iter()
            .enumerate()
            .filter_map(|(s, inst)| inst.last_output.clone().map(|e| (s, e)))
            .collect();
        let mut out = StepOutput::default();
        if lasts.is_empty() {
            return Ok(out);
        }
        let args: Vec<Event> = lasts.iter().map(|(_, e)| e.clone()).collect();
        let (value, contributing) = eval_with_lineage(self.aggregator.as_ref(), &args)?;
        let j = self.out_pos;
        self.out_pos += 1;
        out.emit(0, value);

        if self.lineage {
            for c in contributing {
                let inst = &self.instances[lasts[c].0];
                let dag = inst
                    .pipeline
                    .explain_output(0, inst.out_count - 1)
                    .expect("slice instance tracker must explain its own last output");
                for leaf in dag.flatten() {
                    let global = inst.pos_map[leaf.pointer.position];
                    out.associate(self.id, 0, j, 0, global);
                }
            }
        }
        Ok(out)
    }

    fn retained_cost(&self) -> usize {
        self.instances
            .iter()
            .map(|inst| {
                cost::SLICE_INSTANCE_BYTES
                    + inst.pos_map.len() * cost::POSITION_ENTRY_BYTES
                    + inst.pipeline.buffer_bytes()
                    + inst.pipeline.tracker_bytes()
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{Conjunction, Identity, TupleFetch};
    use crate::processors::{ApplyFunction, Cumulate};

    fn tup(id: i64, flag: bool) -> Event {
        Event::tuple(vec![("id", Event::Number(id as f64)), ("ok", Event::Bool(flag))])
    }

    fn make(aggregator: FunctionRef) -> SliceProcessor {
        let mut p = SliceProcessor::new(
            Arc::new(TupleFetch::new("id")),
            |tracking| {
                let mut inner = Pipeline::with_tracking(tracking);
                let fetch = inner.add(ApplyFunction::unary(Arc::new(TupleFetch::new("ok"))));
                let cum = inner.add(Cumulate::new(Arc::new(Conjunction)));
                inner.connect(fetch, 0, cum, 0).unwrap();
                inner.set_source(fetch, 0).unwrap();
                inner.set_sink(cum, 0).unwrap();
                inner
            },
            aggregator,
        );
        p.set_lineage(true);
        p
    }

    #[test]
    fn single_slice_positions_translate_identically() {
        let mut p = make(Arc::new(Identity));
        for (i, e) in [tup(1, true), tup(1, true), tup(1, false)].iter().enumerate() {
            let out = p.step(std::slice::from_ref(e)).unwrap();
            assert_eq!(out.emitted.len(), 1);
            if i == 2 {
                // conjunction inside the slice pins the false input
                let positions: Vec<usize> = out.associations.iter().map(|a| a.in_pos).collect();
                assert_eq!(positions, vec![2]);
            }
        }
    }

    #[test]
    fn two_true_slices_union_their_explanations() {
        let mut p = make(Arc::new(Conjunction));
        p.step(&[tup(1, true)]).unwrap();
        let out = p.step(&[tup(2, true)]).unwrap();
        assert_eq!(out.emitted, vec![(0, Event::Bool(true))]);
        let mut positions: Vec<usize> = out.associations.iter().map(|a| a.in_pos).collect();
        positions.sort_unstable();
        assert_eq!(positions, vec![0, 1]);
    }

    #[test]
    fn false_slice_short_circuits_the_aggregate() {
        let mut p = make(Arc::new(Conjunction));
        p.step(&[tup(1, true)]).unwrap();
        p.step(&[tup(2, false)]).unwrap();
        let out = p.step(&[tup(1, true)]).unwrap();
        assert_eq!(out.emitted, vec![(0, Event::Bool(false))]);
        // only the false slice (key 2, global position 1) explains the output
        let positions: Vec<usize> = out.associations.iter().map(|a| a.in_pos).collect();
        assert_eq!(positions, vec![1]);
    }

    #[test]
    fn outputs_do_not_depend_on_lineage_flag() {
        let inputs = [tup(1, true), tup(2, true), tup(2, false), tup(1, true)];
        let mut with = make(Arc::new(Conjunction));
        let mut without = make(Arc::new(Conjunction));
        without.set_lineage(false);
        for e in &inputs {
            let a = with.step(std::slice::from_ref(e)).unwrap();
            let b = without.step(std::slice::from_ref(e)).unwrap();
            assert_eq!(a.emitted, b.emitted);
            assert!(b.associations.is_empty());
        }
    }
}
