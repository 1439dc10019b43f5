//! Executable security games with built-in adversaries, exact analytic
//! bounds and JSON-lines reports.
//!
//! Every trial gets its own oracle, authority and random stream: trial `i`
//! draws from ChaCha20 seeded with the master seed on stream `i`, so a
//! report is a pure function of its configuration no matter how rayon
//! schedules the trials.

mod credentials;
mod runners;

use std::iter::Sum;
use std::ops::Add;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::{GroupElement, GroupParams, Profile, Scalar};

pub use credentials::{run_cred_clone_game, run_revocation_game, run_sok_game, CredentialAdversary};
pub use runners::{
    adversary_bound, run_cloning_game_def41, run_extraction_game, run_money_unforgeability, run_simext_game,
    run_unclonable_game, GameError, Target,
};

/// Dlog instances `x = g^w` with `w` uniform in `[1, q)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HardDistribution;

impl HardDistribution {
    pub fn sample<R: Rng + ?Sized>(&self, params: &GroupParams, rng: &mut R) -> (GroupElement, Scalar) {
        let w = params.random_nonzero_scalar(rng);
        (params.g_exp(&w), w)
    }
}

/// Shared knobs for the proof-system games.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub profile: Profile,
    pub n_qubits: usize,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig { profile: Profile::Fixture, n_qubits: 16, k: 2, trials: 1000, seed: 0 }
    }
}

impl GameConfig {
    pub fn params(&self) -> &'static GroupParams {
        self.profile.params()
    }
}

/// Per-trial outcome counters. Addition is componentwise, so aggregation
/// is associative and order-independent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub successes: u64,
    pub adversary_successes: u64,
    pub collisions: u64,
    pub errors: u64,
}

impl Tally {
    pub fn success(hit: bool) -> Self {
        Tally { successes: hit as u64, ..Tally::default() }
    }

    pub fn error() -> Self {
        Tally { errors: 1, ..Tally::default() }
    }
}

impl Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            successes: self.successes + o.successes,
            adversary_successes: self.adversary_successes + o.adversary_successes,
            collisions: self.collisions + o.collisions,
            errors: self.errors + o.errors,
        }
    }
}

impl Sum for Tally {
    fn sum<I: Iterator<Item = Tally>>(iter: I) -> Tally {
        iter.fold(Tally::default(), Add::add)
    }
}

/// The random stream for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `trials` independent trials in parallel and sums their tallies.
pub fn run_trials<F>(trials: u64, seed: u64, trial: F) -> Tally
where
    F: Fn(&mut ChaCha20Rng) -> Tally + Sync,
{
    (0..trials).into_par_iter().map(|i| trial(&mut trial_rng(seed, i))).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub game: String,
    pub params: serde_json::Value,
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub bound: Option<f64>,
    pub z: Option<f64>,
    pub collisions: u64,
    pub errors: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversary_successes: Option<u64>,
}

impl GameReport {
    pub fn new(game: &str, params: serde_json::Value, trials: u64, tally: Tally, bound: Option<f64>) -> Self {
        let rate = if trials == 0 { 0.0 } else { tally.successes as f64 / trials as f64 };
        let z = bound.and_then(|b| {
            let sd = binomial_sd(b, trials);
            (sd > 0.0).then(|| (rate - b) / sd)
        });
        GameReport {
            game: game.to_owned(),
            params,
            trials,
            successes: tally.successes,
            rate,
            bound,
            z,
            collisions: tally.collisions,
            errors: tally.errors,
            adversary_successes: None,
        }
    }

    pub fn with_adversary(mut self, successes: u64) -> Self {
        self.adversary_successes = Some(successes);
        self
    }

    pub fn adversary_rate(&self) -> Option<f64> {
        self.adversary_successes.map(|s| s as f64 / self.trials as f64)
    }

    /// Standard deviation of the empirical rate if the bound were exact.
    pub fn sigma(&self) -> Option<f64> {
        self.bound.map(|b| binomial_sd(b, self.trials))
    }

    /// `|z| < s`; false when there is no bound to compare against.
    pub fn within_sigmas(&self, s: f64) -> bool {
        match (self.bound, self.z) {
            (Some(_), Some(z)) => z.abs() < s,
            (Some(b), None) => self.rate == b,
            _ => false,
        }
    }

    /// `rate <= bound + s·σ`; false when there is no bound.
    pub fn at_most_bound(&self, s: f64) -> bool {
        match (self.bound, self.sigma()) {
            (Some(b), Some(sd)) => self.rate <= b + s * sd,
            _ => false,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn binomial_sd(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// `|{j : x̃_j = x and output j verifies}| > |{i : x_i = x}|`.
pub fn j_predicate(x: &GroupElement, inputs: &[GroupElement], outputs: &[(GroupElement, bool)]) -> bool {
    let claimed = outputs.iter().filter(|(xj, ok)| *ok && xj == x).count();
    claimed > inputs.iter().filter(|xi| *xi == x).count()
}

/// The same event by literal search for a subset `J` of verifying outputs
/// on `x` larger than the input count. Exponential in `k`.
pub fn j_predicate_bruteforce(x: &GroupElement, inputs: &[GroupElement], outputs: &[(GroupElement, bool)]) -> bool {
    let need = inputs.iter().filter(|xi| *xi == x).count();
    let k = outputs.len();
    (0u64..1 << k).any(|mask| {
        let members: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 1).collect();
        members.len() > need && members.iter().all(|&j| outputs[j].1 && &outputs[j].0 == x)
    })
}

/// Evaluates the J-predicate, cross-checking by enumeration when `k <= 4`.
/// `None` means the two disagree.
pub(crate) fn checked_j_predicate(
    x: &GroupElement,
    inputs: &[GroupElement],
    outputs: &[(GroupElement, bool)],
) -> Option<bool> {
    let fast = j_predicate(x, inputs, outputs);
    if outputs.len() <= 4 && j_predicate_bruteforce(x, inputs, outputs) != fast {
        return None;
    }
    Some(fast)
}

/// Largest group order for which [`brute_force_dlog`] searches.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 20;

/// Exhaustive discrete log, for small groups only.
pub fn brute_force_dlog(params: &GroupParams, x: &GroupElement) -> Option<Scalar> {
    let q = params.order().to_u64().filter(|&q| q <= BRUTE_FORCE_LIMIT)?;
    let mut acc = params.identity();
    for e in 0..q {
        if &acc == x {
            return Some(params.scalar_from_u64(e));
        }
        acc = params.op(&acc, params.g());
    }
    None
}

/// Whether `w` is a witness for `x`, confirmed by exhaustive search when
/// the group is small enough.
pub fn confirm_witness(params: &GroupParams, x: &GroupElement, w: &Scalar) -> bool {
    match brute_force_dlog(params, x) {
        Some(d) => &d == w,
        None => &params.g_exp(w) == x,
    }
}
