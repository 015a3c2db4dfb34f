//! Synthetic log generation and overhead measurement for the built-in
//! queries.
//!
//! Memory is reported through the deterministic size model of
//! [`crate::cost`], not allocator introspection, so runs are reproducible.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::StepError;
use crate::event::Event;
use crate::queries::BuiltinQuery;

/// One checkpoint of the modelled retained size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemorySample {
    /// Events ingested when the sample was taken.
    pub events: usize,
    /// Modelled queue and processor buffer bytes.
    pub buffer_bytes: usize,
    /// Modelled tracker bytes (0 with lineage off).
    pub tracker_bytes: usize,
}

impl MemorySample {
    pub fn total(&self) -> usize {
        self.buffer_bytes + self.tracker_bytes
    }
}

#[derive(Debug)]
pub struct BenchReport {
    pub query: &'static str,
    pub tracker: bool,
    pub events: usize,
    pub outputs: usize,
    pub elapsed: Duration,
    pub samples: Vec<MemorySample>,
}

impl BenchReport {
    /// Events per second over the whole run.
    pub fn throughput(&self) -> f64 {
        self.events as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

/// Generates a deterministic synthetic log in the query's input format.
pub fn generate_log(query: BuiltinQuery, length: usize, seed: u64) -> Vec<Event> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match query {
        // uniform small numbers; zeros appear with probability 1/10
        BuiltinQuery::WindowProduct => {
            (0..length).map(|_| Event::number(rng.gen_range(0..10))).collect()
        }
        // a handful of interleaved instances that mostly follow the
        // lifecycle, with occasional deviations
        BuiltinQuery::ProcessLifecycle => {
            const PATTERN: &[u8] = b"abcbcbd";
            const ACTIONS: [&str; 4] = ["a", "b", "c", "d"];
            let mut cursors = [0usize; 5];
            (0..length)
                .map(|_| {
                    let id = rng.gen_range(0..cursors.len());
                    let action = if rng.gen_range(0..100) < 3 {
                        ACTIONS[rng.gen_range(0..ACTIONS.len())]
                    } else {
                        let c = cursors[id];
                        cursors[id] = (c + 1) % PATTERN.len();
                        ACTIONS[ACTIONS
                            .iter()
                            .position(|a| a.as_bytes()[0] == PATTERN[c])
                            .unwrap()]
                    };
                    Event::tuple(vec![
                        ("id", Event::number((id + 1) as i32)),
                        ("action", Event::text(action)),
                    ])
                })
                .collect()
        }
        // (action, p) pairs; p is negative roughly a third of the time
        BuiltinQuery::LtlProperty => {
            const ACTIONS: [&str; 4] = ["a", "b", "c", "d"];
            (0..length)
                .map(|_| {
                    Event::tuple(vec![
                        ("action", Event::text(ACTIONS[rng.gen_range(0..ACTIONS.len())])),
                        ("p", Event::number(rng.gen_range(-3..7))),
                    ])
                })
                .collect()
        }
    }
}

/// Runs `query` over a generated log of `length` events, sampling the
/// modelled retained size `samples` times at evenly spaced points. Only the
/// feeding itself is timed.
pub fn run_bench(
    query: BuiltinQuery,
    length: usize,
    tracker: bool,
    samples: usize,
    seed: u64,
) -> Result<BenchReport, StepError> {
    let log = generate_log(query, length, seed);
    let mut pipeline = query.build(tracker);
    let samples = samples.max(1);
    let chunk = length.div_ceil(samples).max(1);
    let mut taken = Vec::with_capacity(samples);
    let mut outputs = 0;
    let mut elapsed = Duration::ZERO;
    let mut fed = 0;
    while fed < log.len() {
        let end = (fed + chunk).min(log.len());
        let slice = log[fed..end].to_vec();
        let start = Instant::now();
        let produced = pipeline.feed(&[slice])?;
        elapsed += start.elapsed();
        outputs += produced[0].len();
        fed = end;
        taken.push(MemorySample {
            events: fed,
            buffer_bytes: pipeline.buffer_bytes(),
            tracker_bytes: pipeline.tracker_bytes(),
        });
    }
    Ok(BenchReport { query: query.name(), tracker, events: length, outputs, elapsed, samples: taken })
}

/// Coefficient of determination of the least-squares line through
/// (xs, ys). Returns 1.0 for a perfectly flat series.
pub fn linear_fit_r2(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    if sxx == 0.0 {
        return 0.0;
    }
    (sxy * sxy) / (sxx * syy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_per_seed() {
        for q in BuiltinQuery::ALL {
            assert_eq!(generate_log(q, 50, 7), generate_log(q, 50, 7));
            assert_ne!(generate_log(q, 50, 7), generate_log(q, 50, 8));
        }
    }

    #[test]
    fn generated_logs_feed_without_errors() {
        for q in BuiltinQuery::ALL {
            let report = run_bench(q, 200, true, 10, 1).unwrap();
            assert_eq!(report.events, 200);
            assert!(report.outputs > 0, "{} produced nothing", q.name());
            assert_eq!(report.samples.len(), 10);
            assert_eq!(report.samples.last().unwrap().events, 200);
        }
    }

    #[test]
    fn tracker_off_reports_zero_tracker_bytes() {
        let report = run_bench(BuiltinQuery::WindowProduct, 100, false, 5, 1).unwrap();
        assert!(report.samples.iter().all(|s| s.tracker_bytes == 0));
    }

    #[test]
    fn r2_of_exact_line_is_one() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 2.0).collect();
        assert!((linear_fit_r2(&xs, &ys) - 1.0).abs() < 1e-12);
        let flat = vec![5.0; 10];
        assert_eq!(linear_fit_r2(&xs, &flat), 1.0);
    }

    #[test]
    fn r2_of_noise_is_low() {
        let xs: Vec<f64> = (0..20).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| if (*x as u64).is_multiple_of(2) { 0.0 } else { 100.0 }).collect();
        assert!(linear_fit_r2(&xs, &ys) < 0.5);
    }
}
