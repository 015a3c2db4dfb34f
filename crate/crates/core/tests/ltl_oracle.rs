//! Equivalence of the streaming temporal operators against a brute-force
//! suffix evaluator, exhaustive over all boolean traces up to length 10.
//!
//! The oracle decides the verdict for suffix i by scanning forward for the
//! first decisive event; the streaming operators must emit exactly the
//! decided verdicts, in order, with each output associated to its decisive
//! input.

use streamprov::ltl::{Eventually, Globally, Next, Until};
use streamprov::processor::Processor;
use streamprov::tracker::Association;
use streamprov::Event;

const MAX_LEN: usize = 10;

fn run_unary(p: &mut dyn Processor, trace: &[bool]) -> (Vec<bool>, Vec<Association>) {
    let mut outs = Vec::new();
    let mut assocs = Vec::new();
    for &v in trace {
        let step = p.step(&[Event::Bool(v)]).unwrap();
        outs.extend(step.emitted.into_iter().map(|(_, e)| e.as_bool().unwrap()));
        assocs.extend(step.associations);
    }
    (outs, assocs)
}

/// All boolean traces of the given length, by binary counting.
fn traces(len: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << len).map(move |bits| (0..len).map(|i| bits >> i & 1 == 1).collect())
}

/// Oracle for G and F: suffix i is decided at the first index j >= i where
/// the trace hits `decisive`; the verdict is `decisive` itself.
fn unary_oracle(trace: &[bool], decisive: bool) -> Vec<(bool, usize)> {
    (0..trace.len())
        .filter_map(|i| {
            (i..trace.len()).find(|&j| trace[j] == decisive).map(|j| (decisive, j))
        })
        .collect()
}

fn check_unary(mk: fn() -> Box<dyn Processor>, decisive: bool) {
    for len in 0..=MAX_LEN {
        for trace in traces(len) {
            let expected = unary_oracle(&trace, decisive);
            let (outs, assocs) = run_unary(mk().as_mut(), &trace);
            let got: Vec<(bool, usize)> = outs
                .iter()
                .zip(&assocs)
                .enumerate()
                .map(|(k, (&v, a))| {
                    assert_eq!(a.out_pos, k);
                    (v, a.in_pos)
                })
                .collect();
            assert_eq!(got, expected, "trace {:?}", trace);
        }
    }
}

#[test]
fn globally_matches_the_suffix_oracle() {
    check_unary(|| Box::new(Globally::new()), false);
}

#[test]
fn eventually_matches_the_suffix_oracle() {
    check_unary(|| Box::new(Eventually::new()), true);
}

#[test]
fn next_matches_the_shift_oracle() {
    for len in 0..=MAX_LEN {
        for trace in traces(len) {
            let (outs, assocs) = run_unary(&mut Next::new(), &trace);
            let expected: Vec<bool> = trace.iter().skip(1).copied().collect();
            assert_eq!(outs, expected, "trace {:?}", trace);
            for (k, a) in assocs.iter().enumerate() {
                assert_eq!((a.out_pos, a.in_pos), (k, k + 1));
            }
        }
    }
}

/// Oracle for U: suffix i is decided at the first j >= i where the right
/// stream is true (verdict true) or the left stream is false (verdict
/// false); a true right wins when both hold at the same j.
fn until_oracle(left: &[bool], right: &[bool]) -> Vec<(bool, usize)> {
    (0..left.len())
        .filter_map(|i| {
            (i..left.len())
                .find(|&j| right[j] || !left[j])
                .map(|j| (right[j], j))
        })
        .collect()
}

#[test]
fn until_matches_the_suffix_oracle() {
    for len in 0..=MAX_LEN {
        for left in traces(len) {
            for right in traces(len) {
                let expected = until_oracle(&left, &right);
                let mut p = Until::new();
                let mut outs = Vec::new();
                let mut assocs = Vec::new();
                for (&l, &r) in left.iter().zip(&right) {
                    let step = p.step(&[Event::Bool(l), Event::Bool(r)]).unwrap();
                    outs.extend(step.emitted.into_iter().map(|(_, e)| e.as_bool().unwrap()));
                    assocs.extend(step.associations);
                }
                let got: Vec<(bool, usize)> =
                    outs.iter().zip(&assocs).map(|(&v, a)| (v, a.in_pos)).collect();
                assert_eq!(got, expected, "left {:?} right {:?}", left, right);
                // the decisive association points at the pipe that settled it
                for (v, a) in outs.iter().zip(&assocs) {
                    assert_eq!(a.in_pipe, if *v { 1 } else { 0 });
                }
            }
        }
    }
}
