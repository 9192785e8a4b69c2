use lifshitz_core::acceptance::{determinism_outcome, run_core_criteria, CriterionOutcome};
use lifshitz_core::LifshitzEngine;

use crate::commands::{run, Command, Options};
use crate::scenario::Scenario;
use crate::with_threads;

/// Ideal plates across vacuum at 300 K, d from 1 to 10 μm on 16 log points.
pub const DETERMINISM_SCENARIO: &str = "\
[materials]
halfspace = ideal
gap = vacuum

[thermal]
T_K = 300

[sweep]
variable = d
start_um = 1
stop_um = 10
points_count = 16
spacing = log
";

pub const DETERMINISM_THREADS: (usize, usize) = (1, 8);

fn sweep_csv(threads: usize) -> anyhow::Result<String> {
    let scenario = Scenario::parse(DETERMINISM_SCENARIO)?;
    with_threads(Some(threads), || {
        run(Command::Sweep, &scenario, &Options::default()).map(|r| r.csv())
    })?
}

/// The sweep rendered in-process on two pool sizes.
pub fn determinism_check() -> CriterionOutcome {
    let (a, b) = DETERMINISM_THREADS;
    match (sweep_csv(a), sweep_csv(b)) {
        (Ok(x), Ok(y)) => determinism_outcome(x.as_bytes(), y.as_bytes(), DETERMINISM_THREADS),
        (Err(e), _) | (_, Err(e)) => {
            let mut o = determinism_outcome(b"", b"", DETERMINISM_THREADS);
            o.detail = format!("error: {e}");
            o
        }
    }
}

pub fn run_selftest() -> Vec<CriterionOutcome> {
    let mut all = run_core_criteria(&LifshitzEngine::default());
    all.push(determinism_check());
    all
}
