//! The built-in example queries, wired exactly as the engine's
//! demonstration pipelines.

use std::sync::Arc;

use crate::event::Event;
use crate::fsm::lifecycle_machine;
use crate::function::{
    Conjunction, EqualsConstant, Implication, LessThanConstant, Multiplication, NotEquals,
    TupleFetch,
};
use crate::logio::{FieldType, LogFormat};
use crate::ltl::{Globally, Next};
use crate::pipeline::Pipeline;
use crate::processors::{ApplyFunction, Cumulate, Fork, SliceProcessor, TurnInto, WindowProcessor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinQuery {
    /// "The product of any three successive values must not be zero."
    WindowProduct,
    /// "Every interleaved process instance follows the intended lifecycle."
    ProcessLifecycle,
    /// G (p < 0 -> X (action = a and X (action = a)))
    LtlProperty,
}

impl BuiltinQuery {
    pub const ALL: [BuiltinQuery; 3] =
        [BuiltinQuery::WindowProduct, BuiltinQuery::ProcessLifecycle, BuiltinQuery::LtlProperty];

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "window-product" => Some(BuiltinQuery::WindowProduct),
            "process-lifecycle" => Some(BuiltinQuery::ProcessLifecycle),
            "ltl-property" => Some(BuiltinQuery::LtlProperty),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinQuery::WindowProduct => "window-product",
            BuiltinQuery::ProcessLifecycle => "process-lifecycle",
            BuiltinQuery::LtlProperty => "ltl-property",
        }
    }

    /// The log format each query expects.
    pub fn input_format(&self) -> LogFormat {
        match self {
            BuiltinQuery::WindowProduct => LogFormat::Numbers,
            BuiltinQuery::ProcessLifecycle => LogFormat::CsvTuples(vec![
                ("id".to_string(), FieldType::Number),
                ("action".to_string(), FieldType::Text),
            ]),
            BuiltinQuery::LtlProperty => LogFormat::CsvTuples(vec![
                ("action".to_string(), FieldType::Text),
                ("p".to_string(), FieldType::Number),
            ]),
        }
    }

    pub fn build(&self, tracking: bool) -> Pipeline {
        match self {
            BuiltinQuery::WindowProduct => window_product(tracking),
            BuiltinQuery::ProcessLifecycle => process_lifecycle(tracking),
            BuiltinQuery::LtlProperty => ltl_property(tracking),
        }
    }
}

/// Fork; one branch computes the product over a width-3 window, the other
/// turns everything into the constant 0; a not-equals check joins them.
fn window_product(tracking: bool) -> Pipeline {
    let mut pl = Pipeline::with_tracking(tracking);
    let fork = pl.add(Fork::new(2));
    let window =
        pl.add(WindowProcessor::new(3, || Box::new(Cumulate::new(Arc::new(Multiplication)))));
    let zero = pl.add(TurnInto::new(Event::number(0)));
    let neq = pl.add(ApplyFunction::binary(Arc::new(NotEquals)));
    pl.connect(fork, 0, window, 0).unwrap();
    pl.connect(fork, 1, zero, 0).unwrap();
    pl.connect(window, 0, neq, 0).unwrap();
    pl.connect(zero, 0, neq, 1).unwrap();
    pl.set_source(fork, 0).unwrap();
    pl.set_sink(neq, 0).unwrap();
    pl
}

/// Slice on the `id` field; each slice fetches the `action` field and runs
/// the lifecycle Moore machine; slice verdicts are folded by conjunction.
fn process_lifecycle(tracking: bool) -> Pipeline {
    let mut pl = Pipeline::with_tracking(tracking);
    let slice = pl.add(SliceProcessor::new(
        Arc::new(TupleFetch::new("id")),
        |inner_tracking| {
            let mut inner = Pipeline::with_tracking(inner_tracking);
            let fetch = inner.add(ApplyFunction::unary(Arc::new(TupleFetch::new("action"))));
            let machine = inner.add(lifecycle_machine());
            inner.connect(fetch, 0, machine, 0).unwrap();
            inner.set_source(fetch, 0).unwrap();
            inner.set_sink(machine, 0).unwrap();
            inner
        },
        Arc::new(Conjunction),
    ));
    pl.set_source(slice, 0).unwrap();
    pl.set_sink(slice, 0).unwrap();
    pl
}

/// G (p < 0 -> X (action = a and X (action = a))) over (action, p) tuples.
fn ltl_property(tracking: bool) -> Pipeline {
    let mut pl = Pipeline::with_tracking(tracking);
    let fork = pl.add(Fork::new(2));
    let get_p = pl.add(ApplyFunction::unary(Arc::new(TupleFetch::new("p"))));
    let negative = pl.add(ApplyFunction::unary(Arc::new(LessThanConstant(0.0))));
    let get_action = pl.add(ApplyFunction::unary(Arc::new(TupleFetch::new("action"))));
    let is_a = pl.add(ApplyFunction::unary(Arc::new(EqualsConstant(Event::text("a")))));
    let fork_a = pl.add(Fork::new(2));
    let next_a = pl.add(Next::new());
    let two_a = pl.add(ApplyFunction::binary(Arc::new(Conjunction)));
    let next_two_a = pl.add(Next::new());
    let implies = pl.add(ApplyFunction::binary(Arc::new(Implication)));
    let globally = pl.add(Globally::new());

    pl.connect(fork, 0, get_p, 0).unwrap();
    pl.connect(get_p, 0, negative, 0).unwrap();
    pl.connect(fork, 1, get_action, 0).unwrap();
    pl.connect(get_action, 0, is_a, 0).unwrap();
    pl.connect(is_a, 0, fork_a, 0).unwrap();
    pl.connect(fork_a, 0, two_a, 0).unwrap();
    pl.connect(fork_a, 1, next_a, 0).unwrap();
    pl.connect(next_a, 0, two_a, 1).unwrap();
    pl.connect(two_a, 0, next_two_a, 0).unwrap();
    pl.connect(negative, 0, implies, 0).unwrap();
    pl.connect(next_two_a, 0, implies, 1).unwrap();
    pl.connect(implies, 0, globally, 0).unwrap();
    pl.set_source(fork, 0).unwrap();
    pl.set_sink(globally, 0).unwrap();
    pl
}
