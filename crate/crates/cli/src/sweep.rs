use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use hermite_scaling::experiment::{run_point, ConvergenceRecord, SweepConfig};

use crate::error::CliResult;

pub fn default_threads() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs every `N` of `config` on up to `threads` workers. Points are
/// independent, so the records equal a sequential run and come back in
/// `N` order.
pub fn run_parallel(config: &SweepConfig, threads: usize) -> CliResult<Vec<ConvergenceRecord>> {
    config.validate()?;
    let u = config.function.build()?;
    let ns = &config.n_values;
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<ConvergenceRecord>>> = Mutex::new(vec![None; ns.len()]);
    // large N first keeps the tail of the schedule short
    let order: Vec<usize> = (0..ns.len()).rev().collect();
    thread::scope(|s| {
        for _ in 0..threads.clamp(1, ns.len()) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&i) = order.get(k) else { break };
                let rec = run_point(config, &u, ns[i]);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(rec);
            });
        }
    });
    Ok(slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hermite_scaling::experiment::{run_sweep, FunctionSpec, Measure, Schedule};

    #[test]
    fn matches_sequential() {
        let cfg = SweepConfig {
            function: FunctionSpec::Algebraic { h: 1.5 },
            gamma: 1.0,
            n_values: vec![4, 8, 12, 16, 24, 32],
            schedule: Schedule::Power { c: 1.0, p: 0.25 },
            measure: Measure::L2Nodal,
        };
        let seq = run_sweep(&cfg).unwrap();
        for threads in [1, 3, 16] {
            assert_eq!(run_parallel(&cfg, threads).unwrap(), seq);
        }
    }
}
