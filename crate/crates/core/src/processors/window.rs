//! Sliding-window evaluation of an inner processor.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::cost;
use crate::error::StepError;
use crate::event::Event;
use crate::processor::{Processor, StepOutput};
use crate::tracker::ProcessorId;

pub type ProcessorFactory = Arc<dyn Fn() -> Box<dyn Processor> + Send + Sync>;

/// Applies a fresh copy of an inner processor to every window of `width`
/// successive events and emits the copy's last output.
///
/// Lineage follows the re-evaluation protocol: the associations the inner
/// copy registers for its last output are captured and re-emitted with the
/// input positions shifted by the window start, so window output j only
/// ever references outer positions in [j, j+width-1].
pub struct WindowProcessor {
    id: ProcessorId,
    width: usize,
    factory: ProcessorFactory,
    buffer: VecDeque<Event>,
    in_pos: usize,
    out_pos: usize,
}

impl WindowProcessor {
    pub fn new(width: usize, factory: impl Fn() -> Box<dyn Processor> + Send + Sync + 'static) -> Self {
        assert!(width >= 1, "window width must be >= 1");
        WindowProcessor {
            id: ProcessorId::default(),
            width,
            factory: Arc::new(factory),
            buffer: VecDeque::new(),
            in_pos: 0,
            out_pos: 0,
        }
    }
}

impl Processor for WindowProcessor {
    fn name(&self) -> &'static str {
        "Window"
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
        self.in_pos += 1;
        self.buffer.push_back(front[0].clone());
        let mut out = StepOutput::default();
        if self.buffer.len() < self.width {
            return Ok(out);
        }

        let j = self.out_pos;
        self.out_pos += 1;

        // Fresh copy per window; its associations act as the temporary
        // tracker of the re-evaluation protocol.
        let mut inner = (self.factory)();
        inner.set_id(ProcessorId(0));
        let mut emitted = Vec::new();
        let mut associations = Vec::new();
        for e in self.buffer.iter() {
            let step = inner.step(std::slice::from_ref(e))?;
            emitted.extend(step.emitted.into_iter().filter(|(pipe, _)| *pipe == 0).map(|(_, e)| e));
            associations.extend(step.associations);
        }
        if emitted.len() < self.width {
            return Err(StepError::WindowContract { produced: emitted.len(), fed: self.width });
        }
        let last_pos = emitted.len() - 1;
        out.emit(0, emitted.pop().unwrap());
        for a in associations {
            if a.out_pipe == 0 && a.out_pos == last_pos {
                out.associate(self.id, 0, j, 0, a.in_pos + j);
            }
        }
        self.buffer.pop_front();
        Ok(out)
    }

    fn retained_cost(&self) -> usize {
        self.buffer.len() * cost::BUFFERED_EVENT_BYTES
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{Addition, Identity, Multiplication};
    use crate::processors::{ApplyFunction, Cumulate};

    fn n(v: i64) -> Event {
        Event::Number(v as f64)
    }

    fn run(w: &mut WindowProcessor, inputs: &[i64]) -> (Vec<Event>, Vec<crate::tracker::Association>) {
        let mut events = Vec::new();
        let mut assocs = Vec::new();
        for &v in inputs {
            let out = w.step(&[n(v)]).unwrap();
            events.extend(out.emitted.into_iter().map(|(_, e)| e));
            assocs.extend(out.associations);
        }
        (events, assocs)
    }

    #[test]
    fn window_product_stream_and_zero_lineage() {
        let mut w =
            WindowProcessor::new(3, || Box::new(Cumulate::new(Arc::new(Multiplication))));
        let (out, assocs) = run(&mut w, &[3, 1, 4, 0, 5, 9, 2]);
        assert_eq!(out, vec![n(12), n(0), n(0), n(0), n(90)]);
        // output 1 (window 1,4,0) is explained by the zero at outer position 3
        let for_out1: Vec<usize> =
            assocs.iter().filter(|a| a.out_pos == 1).map(|a| a.in_pos).collect();
        assert_eq!(for_out1, vec![3]);
    }

    #[test]
    fn width_one_identity_is_passthrough() {
        let mut w = WindowProcessor::new(1, || Box::new(ApplyFunction::unary(Arc::new(Identity))));
        let (out, assocs) = run(&mut w, &[5, 6, 7]);
        assert_eq!(out, vec![n(5), n(6), n(7)]);
        assert!(assocs.iter().all(|a| a.out_pos == a.in_pos));
    }

    #[test]
    fn window_sum_keeps_whole_window() {
        let mut w = WindowProcessor::new(3, || Box::new(Cumulate::new(Arc::new(Addition))));
        let (out, assocs) = run(&mut w, &[1, 2, 3]);
        assert_eq!(out, vec![n(6)]);
        let positions: Vec<usize> =
            assocs.iter().filter(|a| a.out_pos == 0).map(|a| a.in_pos).collect();
        assert_eq!(positions, vec![0, 1, 2]);
    }

    #[test]
    fn associations_stay_inside_the_window() {
        let mut w =
            WindowProcessor::new(3, || Box::new(Cumulate::new(Arc::new(Multiplication))));
        let (_, assocs) = run(&mut w, &[3, 1, 4, 0, 5, 9, 2]);
        for a in assocs {
            assert!(a.in_pos >= a.out_pos && a.in_pos <= a.out_pos + 2, "{:?}", a);
        }
    }

    #[test]
    fn inner_contract_violation_is_reported() {
        // Trim(1) produces n-1 outputs for n inputs, breaking the contract.
        let mut w = WindowProcessor::new(2, || Box::new(crate::processors::Trim::new(1)));
        w.step(&[n(1)]).unwrap();
        assert!(matches!(
            w.step(&[n(2)]),
            Err(StepError::WindowContract { produced: 1, fed: 2 })
        ));
    }
}
