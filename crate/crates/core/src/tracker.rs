//! The event tracker: records input/output associations reported by
//! processors, mirrors inter-processor connections, and answers explanation
//! queries with a provenance DAG.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::ExplainError;
use crate::event::Event;

/// Unique identifier of a processor instance within one pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ProcessorId(pub u64);

impl fmt::Display for ProcessorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which side of a processor a pointer names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Input,
    Output,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Input => "in",
            Side::Output => "out",
        }
    }
}

/// Names one event occurrence in one stream: a (processor, side, pipe,
/// position) quadruple. Positions are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StreamPointer {
    pub processor: ProcessorId,
    pub side: Side,
    pub pipe: usize,
    pub position: usize,
}

impl StreamPointer {
    pub fn output(processor: ProcessorId, pipe: usize, position: usize) -> Self {
        StreamPointer { processor, side: Side::Output, pipe, position }
    }

    pub fn input(processor: ProcessorId, pipe: usize, position: usize) -> Self {
        StreamPointer { processor, side: Side::Input, pipe, position }
    }
}

impl fmt::Display for StreamPointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}.{}{}@{}", self.processor, self.side.label(), self.pipe, self.position)
    }
}

/// One recorded (output occurrence, input occurrence) pair inside one
/// processor: the five elements of an `associate` call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Association {
    pub processor: ProcessorId,
    pub out_pipe: usize,
    pub out_pos: usize,
    pub in_pipe: usize,
    pub in_pos: usize,
}

/// A connection between an output pipe and a downstream input pipe, as
/// mirrored into the tracker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConnectionRecord {
    pub upstream: (ProcessorId, usize),
    pub downstream: (ProcessorId, usize),
}

/// The registry behind all lineage queries.
///
/// The association store is keyed by (processor, out pipe, out position):
/// every explanation query traverses output to input, so no reverse index
/// is kept.
#[derive(Debug, Default)]
pub struct EventTracker {
    associations: BTreeMap<(ProcessorId, usize, usize), BTreeSet<(usize, usize)>>,
    association_pairs: usize,
    connections: BTreeSet<ConnectionRecord>,
    // Concrete values that flowed through each stream, so DAG nodes can be
    // annotated. Keyed by (processor, side, pipe).
    values: BTreeMap<(ProcessorId, Side, usize), Vec<Event>>,
    sources: BTreeSet<(ProcessorId, usize)>,
    names: BTreeMap<ProcessorId, String>,
}

impl EventTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores one association. Idempotent: storing the same record twice
    /// has no additional effect.
    pub fn associate(&mut self, a: Association) {
        let set = self.associations.entry((a.processor, a.out_pipe, a.out_pos)).or_default();
        if set.insert((a.in_pipe, a.in_pos)) {
            self.association_pairs += 1;
        }
    }

    /// Mirrors a pipeline connection. Idempotent.
    pub fn register_connection(&mut self, c: ConnectionRecord) {
        self.connections.insert(c);
    }

    /// Marks an input port as a pipeline source.
    pub fn register_source(&mut self, processor: ProcessorId, pipe: usize) {
        self.sources.insert((processor, pipe));
    }

    /// Registers a processor's role name, used in rendered explanations.
    pub fn register_processor(&mut self, id: ProcessorId, name: impl Into<String>) {
        self.names.insert(id, name.into());
    }

    /// Records the concrete event that flowed at a stream position.
    pub fn record_value(&mut self, processor: ProcessorId, side: Side, pipe: usize, value: Event) {
        self.values.entry((processor, side, pipe)).or_default().push(value);
    }

    pub fn association_pair_count(&self) -> usize {
        self.association_pairs
    }

    pub fn connection_count(&self) -> usize {
        self.connections.len()
    }

    pub fn recorded_value_count(&self) -> usize {
        self.values.values().map(Vec::len).sum()
    }

    /// Modelled retained size, per the constants in [`crate::cost`].
    pub fn estimated_bytes(&self) -> usize {
        crate::cost::TRACKER_BASE_BYTES
            + self.association_pairs * crate::cost::ASSOC_RECORD_BYTES
            + self.recorded_value_count() * crate::cost::VALUE_RECORD_BYTES
            + self.connections.len() * crate::cost::CONNECTION_RECORD_BYTES
    }

    pub fn associations_for(
        &self,
        processor: ProcessorId,
        out_pipe: usize,
        out_pos: usize,
    ) -> Option<&BTreeSet<(usize, usize)>> {
        self.associations.get(&(processor, out_pipe, out_pos))
    }

    pub fn connections_from(&self, upstream: ProcessorId) -> Vec<&ConnectionRecord> {
        self.connections.iter().filter(|c| c.upstream.0 == upstream).collect()
    }

    fn upstream_of(&self, downstream: (ProcessorId, usize)) -> Option<(ProcessorId, usize)> {
        self.connections.iter().find(|c| c.downstream == downstream).map(|c| c.upstream)
    }

    fn value_at(&self, ptr: &StreamPointer) -> Option<Event> {
        self.values
            .get(&(ptr.processor, ptr.side, ptr.pipe))
            .and_then(|v| v.get(ptr.position))
            .cloned()
    }

    /// Answers an explanation query: builds the provenance DAG for the
    /// queried output occurrence by alternating association lookups within
    /// a processor and connection hops to the upstream processor.
    ///
    /// Shared sub-explanations are merged into single nodes: node identity
    /// is the stream pointer itself, so re-encountering a pointer adds an
    /// edge, never a duplicate node.
    pub fn get_provenance_tree(&self, query: StreamPointer) -> Result<ProvenanceDag, ExplainError> {
        if !self.names.contains_key(&query.processor) {
            return Err(ExplainError::UnknownProcessor(query.processor));
        }
        let produced = self
            .values
            .get(&(query.processor, Side::Output, query.pipe))
            .map(Vec::len)
            .unwrap_or(0);
        if query.position >= produced {
            return Err(ExplainError::PositionNotYetProduced {
                processor: query.processor,
                pipe: query.pipe,
                position: query.position,
            });
        }

        let mut dag = ProvenanceDag::default();
        let mut index: HashMap<StreamPointer, usize> = HashMap::new();
        let mut stack = vec![query];
        self.intern(&mut dag, &mut index, query);

        while let Some(ptr) = stack.pop() {
            let from = index[&ptr];
            if dag.expanded[from] {
                continue;
            }
            dag.expanded[from] = true;
            for child in self.explaining(&ptr) {
                let to = match index.get(&child) {
                    Some(&i) => i,
                    None => {
                        let i = self.intern(&mut dag, &mut index, child);
                        stack.push(child);
                        i
                    }
                };
                dag.edges.push((from, to));
            }
        }
        Ok(dag)
    }

    /// The pointers directly explaining `ptr`: association targets for an
    /// output occurrence, the upstream output occurrence for an input one.
    /// An empty result makes `ptr` a leaf.
    fn explaining(&self, ptr: &StreamPointer) -> Vec<StreamPointer> {
        match ptr.side {
            Side::Output => self
                .associations
                .get(&(ptr.processor, ptr.pipe, ptr.position))
                .map(|set| {
                    set.iter()
                        .map(|&(in_pipe, in_pos)| StreamPointer::input(ptr.processor, in_pipe, in_pos))
                        .collect()
                })
                .unwrap_or_default(),
            Side::Input => self
                .upstream_of((ptr.processor, ptr.pipe))
                .map(|(up, out_pipe)| vec![StreamPointer::output(up, out_pipe, ptr.position)])
                .unwrap_or_default(),
        }
    }

    fn intern(
        &self,
        dag: &mut ProvenanceDag,
        index: &mut HashMap<StreamPointer, usize>,
        ptr: StreamPointer,
    ) -> usize {
        let i = dag.nodes.len();
        dag.nodes.push(DagNode {
            pointer: ptr,
            value: self.value_at(&ptr),
            processor_name: self.names.get(&ptr.processor).cloned().unwrap_or_default(),
            is_source: ptr.side == Side::Input && self.sources.contains(&(ptr.processor, ptr.pipe)),
        });
        dag.expanded.push(false);
        index.insert(ptr, i);
        i
    }
}

/// One node of a provenance DAG: a stream pointer annotated with the
/// concrete event value that flowed there.
#[derive(Debug, Clone, PartialEq)]
pub struct DagNode {
    pub pointer: StreamPointer,
    pub value: Option<Event>,
    pub processor_name: String,
    pub is_source: bool,
}

/// Directed acyclic graph of stream pointers from a queried output down to
/// raw inputs. Edges point from the explained occurrence to the explaining
/// one. The root is always node 0.
#[derive(Debug, Default, Clone)]
pub struct ProvenanceDag {
    pub nodes: Vec<DagNode>,
    pub edges: Vec<(usize, usize)>,
    expanded: Vec<bool>,
}

impl ProvenanceDag {
    /// Rebuilds a DAG from already-expanded parts (deserialization).
    pub fn from_parts(nodes: Vec<DagNode>, edges: Vec<(usize, usize)>) -> Self {
        let expanded = vec![true; nodes.len()];
        ProvenanceDag { nodes, edges, expanded }
    }

    pub fn root(&self) -> &DagNode {
        &self.nodes[0]
    }

    /// Indices of nodes with no outgoing edges.
    pub fn leaf_indices(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.nodes.len()];
        for &(from, _) in &self.edges {
            has_out[from] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_out[i]).collect()
    }

    /// Flattens the DAG to its pipeline-source leaves, deduplicated and
    /// sorted by position.
    pub fn flatten(&self) -> Vec<&DagNode> {
        let mut out: Vec<&DagNode> = self
            .leaf_indices()
            .into_iter()
            .map(|i| &self.nodes[i])
            .filter(|n| n.is_source)
            .collect();
        out.sort_by_key(|n| (n.pointer.position, n.pointer.processor, n.pointer.pipe));
        out.dedup_by_key(|n| n.pointer);
        out
    }

    /// Source leaf positions, for tests and flattened CLI output.
    pub fn flat_positions(&self) -> Vec<usize> {
        self.flatten().iter().map(|n| n.pointer.position).collect()
    }

    pub fn children_of(&self, node: usize) -> Vec<usize> {
        self.edges.iter().filter(|(f, _)| *f == node).map(|&(_, t)| t).collect()
    }
}
