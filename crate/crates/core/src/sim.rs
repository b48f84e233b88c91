//! Monte Carlo estimation of coverage depth.
//!
//! Trial `t` draws from a ChaCha8 generator seeded with the master seed and
//! switched to stream `t`, so every trial has its own reproducible stream
//! regardless of how trials are spread over threads. Counts are reduced in
//! trial order with exact integer sums.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coverage::CoverageParams;
use crate::error::{Error, Result};
use crate::model::OmegaSequence;

pub const DEFAULT_MAX_TRANSMISSIONS: u64 = 1_000_000;

/// Trials below this count get no normal-approximation interval.
pub const MIN_TRIALS_FOR_CI: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// All ℓ indices recovered.
    Full,
    /// At least `params.r` indices recovered.
    Partial,
    /// One target among `params.k` strands recovered.
    RandomAccess,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: CoverageParams,
    pub mode: SimMode,
    pub trials: u64,
    pub seed: u64,
    pub max_transmissions: u64,
}

impl SimConfig {
    pub fn new(params: CoverageParams, mode: SimMode, trials: u64, seed: u64) -> Self {
        SimConfig { params, mode, trials, seed, max_transmissions: DEFAULT_MAX_TRANSMISSIONS }
    }

    fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.params.omega > 64 {
            return Err(Error::InvalidParameter("simulation supports ω ≤ 64".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("need at least one trial".into()));
        }
        if self.max_transmissions == 0 {
            return Err(Error::InvalidParameter("transmission cap must be positive".into()));
        }
        match self.mode {
            SimMode::Partial if self.params.r.is_none() => {
                Err(Error::InvalidParameter("partial mode needs r".into()))
            }
            SimMode::RandomAccess if self.params.k.is_none() => {
                Err(Error::InvalidParameter("random-access mode needs k".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub mean: f64,
    /// `None` with a single trial.
    pub std_error: Option<f64>,
    /// Normal 95% interval; `None` below [`MIN_TRIALS_FOR_CI`] trials.
    pub ci95: Option<(f64, f64)>,
    pub trials: u64,
    /// Trials stopped at the cap. They enter the mean at the cap value.
    pub truncated_trials: u64,
    pub seed: u64,
}

/// Outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trial {
    Done(u64),
    Truncated,
}

/// Per-index bitmask of observed support positions.
struct Progress {
    full: u64,
    seen: Vec<u64>,
    recovered: usize,
}

impl Progress {
    fn new(seq: &OmegaSequence) -> Self {
        let w = seq.omega();
        let full = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        Progress { full, seen: vec![0; seq.len()], recovered: 0 }
    }

    fn read<R: Rng + ?Sized>(&mut self, omega: usize, rng: &mut R) {
        for mask in &mut self.seen {
            if *mask == self.full {
                continue;
            }
            *mask |= 1 << rng.random_range(0..omega);
            if *mask == self.full {
                self.recovered += 1;
            }
        }
    }
}

/// Reads until at least `target` indices of `seq` are recovered.
fn reads_until<R: Rng + ?Sized>(seq: &OmegaSequence, target: usize, rng: &mut R, cap: u64) -> Trial {
    let mut progress = Progress::new(seq);
    for t in 1..=cap {
        progress.read(seq.omega(), rng);
        if progress.recovered >= target {
            return Trial::Done(t);
        }
    }
    Trial::Truncated
}

/// Reads until every index of `seq` is recovered.
pub fn simulate_recovery<R: Rng + ?Sized>(seq: &OmegaSequence, rng: &mut R, cap: u64) -> Trial {
    reads_until(seq, seq.len(), rng, cap)
}

/// Reads until at least `r` indices of `seq` are recovered.
pub fn simulate_partial<R: Rng + ?Sized>(
    seq: &OmegaSequence,
    r: usize,
    rng: &mut R,
    cap: u64,
) -> Result<Trial> {
    if r == 0 || r > seq.len() {
        return Err(Error::InvalidParameter(format!("r={r} must lie in 1..={}", seq.len())));
    }
    Ok(reads_until(seq, r, rng, cap))
}

/// Reads from `k` strands sampled uniformly until the strand `target`
/// (0-based) is recovered. Reads of other strands carry other labels and
/// never change the target's observed sets, so only their count matters.
pub fn simulate_random_access<R: Rng + ?Sized>(
    seq: &OmegaSequence,
    k: u64,
    target: u64,
    rng: &mut R,
    cap: u64,
) -> Result<Trial> {
    if target >= k {
        return Err(Error::InvalidParameter(format!("target {target} not among {k} strands")));
    }
    let mut progress = Progress::new(seq);
    for t in 1..=cap {
        if rng.random_range(0..k) == target {
            progress.read(seq.omega(), rng);
            if progress.recovered == seq.len() {
                return Ok(Trial::Done(t));
            }
        }
    }
    Ok(Trial::Truncated)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(config: &SimConfig, seq: &OmegaSequence, trial: u64) -> Trial {
    let mut rng = trial_rng(config.seed, trial);
    let cap = config.max_transmissions;
    match config.mode {
        SimMode::Full => simulate_recovery(seq, &mut rng, cap),
        SimMode::Partial => {
            let r = config.params.r.expect("validated") as usize;
            reads_until(seq, r, &mut rng, cap)
        }
        SimMode::RandomAccess => {
            let k = config.params.k.expect("validated");
            simulate_random_access(seq, k, 0, &mut rng, cap).expect("target 0 exists")
        }
    }
}

/// Runs `config.trials` independent trials in parallel and summarizes them.
/// The report depends only on the configuration, not on the thread count.
pub fn run_simulation(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let omega = config.params.omega as usize;
    let seq = OmegaSequence::canonical(omega, omega, config.params.ell as usize)?;
    let outcomes: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, &seq, t))
        .collect();

    let mut sum: u128 = 0;
    let mut sum_sq: u128 = 0;
    let mut truncated = 0;
    for outcome in &outcomes {
        let v = match *outcome {
            Trial::Done(t) => t,
            Trial::Truncated => {
                truncated += 1;
                config.max_transmissions
            }
        };
        sum += u128::from(v);
        sum_sq += u128::from(v) * u128::from(v);
    }
    let n = u128::from(config.trials);
    let mean = sum as f64 / n as f64;
    let std_error = (n >= 2).then(|| {
        // n Σx² - (Σx)² is exact in integers
        let spread = n * sum_sq - sum * sum;
        let var = spread as f64 / (n as f64 * (n - 1) as f64);
        (var / n as f64).sqrt()
    });
    let ci95 = match std_error {
        Some(se) if config.trials >= MIN_TRIALS_FOR_CI => Some((mean - 1.96 * se, mean + 1.96 * se)),
        _ => None,
    };
    Ok(SimReport {
        mean,
        std_error,
        ci95,
        trials: config.trials,
        truncated_trials: truncated,
        seed: config.seed,
    })
}
