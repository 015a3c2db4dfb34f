//! Helpers shared by the integration suites.

#![allow(dead_code)]

use streamprov::fsm::lifecycle_machine;
use streamprov::function::{eval_with_lineage, LineageFunction};
use streamprov::processor::Processor;
use streamprov::Event;

/// All argument tuples of the given arity over a value domain.
pub fn tuples(domain: &[Event], arity: usize) -> Vec<Vec<Event>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                domain.iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Exhaustively verifies counterfactual soundness of `f` over a domain:
/// whenever the contributing set is a strict subset of the arguments, no
/// substitution of the remaining arguments may change the value. Returns
/// the number of strict sets exercised.
pub fn exhaustive_counterfactual(f: &dyn LineageFunction, domain: &[Event], arity: usize) -> usize {
    let mut strict_sets = 0;
    for args in tuples(domain, arity) {
        let (value, set) = eval_with_lineage(f, &args).unwrap();
        let free: Vec<usize> = (0..arity).filter(|i| !set.contains(i)).collect();
        if free.is_empty() {
            continue;
        }
        strict_sets += 1;
        for substitution in tuples(domain, free.len()) {
            let mut alt = args.clone();
            for (k, &i) in free.iter().enumerate() {
                alt[i] = substitution[k].clone();
            }
            let (alt_value, _) = eval_with_lineage(f, &alt).unwrap();
            assert_eq!(
                alt_value, value,
                "{}: args {:?} claimed set {:?} but {:?} changes the value",
                f.name(),
                args,
                set,
                alt
            );
        }
    }
    strict_sets
}

/// Replay sufficiency of the lifecycle machine on one trace: for every
/// step, feeding only the events named by the output's association set (in
/// order) must reach the same state and end on the same output value.
pub fn check_replay_sufficiency(trace: &[&str]) {
    let mut machine = lifecycle_machine();
    for (i, action) in trace.iter().enumerate() {
        let step = machine.step(&[Event::text(*action)]).unwrap();
        let positions: Vec<usize> = step.associations.iter().map(|a| a.in_pos).collect();
        assert!(positions.contains(&i), "step {} must name its own input", i);
        let value = step.emitted[0].1.clone();

        let mut replay = lifecycle_machine();
        let mut last = None;
        for &p in &positions {
            last = Some(replay.step(&[Event::text(trace[p])]).unwrap().emitted[0].1.clone());
        }
        assert_eq!(
            replay.current_state(),
            machine.current_state(),
            "replay of {:?} from {:?} diverged at step {}",
            positions,
            trace,
            i
        );
        assert_eq!(last.unwrap(), value);
    }
}
