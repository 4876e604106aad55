//! Repeated seeded trials for acceptance-rate measurements.

use crate::error::Result;
use crate::sre::SreExpr;

use super::{l1_identity_test, linf_identity_test, SampleSource, TestMode, TestOutcome, TesterConfig, Verdict};

pub fn run_test(q: &SreExpr, source: &mut impl SampleSource, mode: TestMode, cfg: &TesterConfig) -> Result<TestOutcome> {
    match mode {
        TestMode::L1 => l1_identity_test(q, source, cfg),
        TestMode::Linf => linf_identity_test(q, source, cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrialSummary {
    pub trials: usize,
    pub accepts: usize,
    pub total_samples: u64,
}

impl TrialSummary {
    pub fn record(&mut self, outcome: &TestOutcome) {
        self.trials += 1;
        if outcome.verdict == Verdict::Accept {
            self.accepts += 1;
        }
        self.total_samples += outcome.samples_drawn;
    }

    pub fn merge(&mut self, other: &TrialSummary) {
        self.trials += other.trials;
        self.accepts += other.accepts;
        self.total_samples += other.total_samples;
    }

    pub fn accept_rate(&self) -> f64 {
        self.accepts as f64 / self.trials.max(1) as f64
    }

    pub fn reject_rate(&self) -> f64 {
        1.0 - self.accept_rate()
    }

    pub fn mean_samples(&self) -> f64 {
        self.total_samples as f64 / self.trials.max(1) as f64
    }
}

/// Runs `trials` tests; trial `i` uses seed `cfg.seed + i` for both the
/// configuration and the source built by `make_source`.
pub fn run_trials<S: SampleSource>(
    q: &SreExpr,
    mode: TestMode,
    cfg: &TesterConfig,
    trials: usize,
    make_source: impl Fn(u64) -> Result<S>,
) -> Result<TrialSummary> {
    let mut summary = TrialSummary::default();
    for i in 0..trials as u64 {
        let seed = cfg.seed.wrapping_add(i);
        let trial_cfg = TesterConfig { seed, ..cfg.clone() };
        let mut source = make_source(seed)?;
        summary.record(&run_test(q, &mut source, mode, &trial_cfg)?);
    }
    Ok(summary)
}
