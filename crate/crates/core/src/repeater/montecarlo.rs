use super::trial::{ChainRunner, FailureStage, TrialResult};
use crate::math::sqrt;
use crate::rng::trial_stream;
use crate::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageCounts {
    pub gate: u64,
    pub lobm: u64,
    pub none: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McStats {
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Empirical standard error of the success rate.
    pub stderr: f64,
    pub stage_breakdown: StageCounts,
    pub mean_fidelity_given_success: Option<f64>,
}

/// Order-sensitive running totals. Feed trials in index order (or merge
/// accumulators of consecutive index ranges in order) for reproducible sums.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct McAccumulator {
    trials: u64,
    counts: StageCounts,
    fidelity_sum: f64,
}

impl McAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, result: &TrialResult) {
        self.trials += 1;
        match result.failure_stage {
            FailureStage::Gate => self.counts.gate += 1,
            FailureStage::Lobm => self.counts.lobm += 1,
            FailureStage::None => self.counts.none += 1,
        }
        if let Some(f) = result.end_state_fidelity {
            self.fidelity_sum += f;
        }
    }

    /// Appends `later`, which must cover the trials right after `self`.
    pub fn merge(mut self, later: &McAccumulator) -> Self {
        self.trials += later.trials;
        self.counts.gate += later.counts.gate;
        self.counts.lobm += later.counts.lobm;
        self.counts.none += later.counts.none;
        self.fidelity_sum += later.fidelity_sum;
        self
    }

    pub fn finish(&self) -> McStats {
        let successes = self.counts.none;
        let (rate, stderr) = if self.trials == 0 {
            (0.0, 0.0)
        } else {
            let n = self.trials as f64;
            let r = successes as f64 / n;
            (r, sqrt(r * (1.0 - r) / n))
        };
        McStats {
            trials: self.trials,
            successes,
            success_rate: rate,
            stderr,
            stage_breakdown: self.counts,
            mean_fidelity_given_success: (successes > 0).then(|| self.fidelity_sum / successes as f64),
        }
    }
}

/// Trials per reduction chunk. Sums are formed per chunk, then chunks are
/// merged in index order, so any executor that respects chunk boundaries
/// reproduces [`monte_carlo`] bit for bit.
pub const MC_CHUNK: u64 = 4096;

/// Accumulates trials `start..end`; trial `i` draws from
/// `trial_stream(master_seed, i)`.
pub fn monte_carlo_range(runner: &ChainRunner, master_seed: u64, start: u64, end: u64) -> Result<McAccumulator> {
    let mut acc = McAccumulator::new();
    for i in start..end {
        acc.push(&runner.trial(&mut trial_stream(master_seed, i))?);
    }
    Ok(acc)
}

/// Index ranges of the reduction chunks for `trials` trials.
pub fn chunks(trials: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..trials.div_ceil(MC_CHUNK)).map(move |c| (c * MC_CHUNK, ((c + 1) * MC_CHUNK).min(trials)))
}

/// Runs `trials` trials sequentially.
pub fn monte_carlo(runner: &ChainRunner, trials: u64, master_seed: u64) -> Result<McStats> {
    let mut acc = McAccumulator::new();
    for (start, end) in chunks(trials) {
        acc = acc.merge(&monte_carlo_range(runner, master_seed, start, end)?);
    }
    Ok(acc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repeater::{build_chain, p_eff, uniform_models, LobmModel};

    fn runner(n: usize, p: f64) -> ChainRunner {
        ChainRunner::new(
            build_chain(n).unwrap(),
            uniform_models(n, p).unwrap(),
            LobmModel::default(),
        )
        .unwrap()
    }

    #[test]
    fn reproducible() {
        let r = runner(1, 0.9);
        assert_eq!(monte_carlo(&r, 500, 9).unwrap(), monte_carlo(&r, 500, 9).unwrap());
    }

    #[test]
    fn split_merge_equals_sequential() {
        let r = runner(1, 0.9);
        let mut a = McAccumulator::new();
        let mut b = McAccumulator::new();
        for i in 0..300 {
            let res = r.trial(&mut trial_stream(4, i)).unwrap();
            if i < 137 {
                a.push(&res)
            } else {
                b.push(&res)
            }
        }
        let merged = a.merge(&b).finish();
        let seq = monte_carlo(&r, 300, 4).unwrap();
        assert_eq!(merged.successes, seq.successes);
        assert_eq!(merged.stage_breakdown, seq.stage_breakdown);
        assert!((merged.mean_fidelity_given_success.unwrap() - seq.mean_fidelity_given_success.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn chunk_ranges_tile() {
        let v: alloc::vec::Vec<_> = chunks(2 * MC_CHUNK + 5).collect();
        assert_eq!(
            v,
            [
                (0, MC_CHUNK),
                (MC_CHUNK, 2 * MC_CHUNK),
                (2 * MC_CHUNK, 2 * MC_CHUNK + 5)
            ]
        );
        assert_eq!(chunks(0).count(), 0);
    }

    #[test]
    fn within_three_sigma() {
        for (n, p) in [(0, 0.9), (1, 0.9), (2, 0.95)] {
            let r = runner(n, p);
            let trials = 20_000;
            let stats = monte_carlo(&r, trials, 2024).unwrap();
            let expected = p_eff(n, &alloc::vec![p; 2 * n + 2]).unwrap();
            let se = sqrt(expected * (1.0 - expected) / trials as f64);
            assert!((stats.success_rate - expected).abs() <= 3.0 * se, "n = {n}: {stats:?}");
            assert_eq!(
                stats.stage_breakdown.gate + stats.stage_breakdown.lobm + stats.successes,
                trials
            );
            assert!((stats.mean_fidelity_given_success.unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_run() {
        let stats = monte_carlo(&runner(0, 1.0), 0, 1).unwrap();
        assert_eq!(stats.success_rate, 0.0);
        assert_eq!(stats.mean_fidelity_given_success, None);
    }
}
