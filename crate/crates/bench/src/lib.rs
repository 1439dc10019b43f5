//! Shared inputs for the criterion benches.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use unclonable_zk::{Env, GroupElement, HardDistribution, MoneyAuthority, Oracle, Profile, Scalar};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// A dlog instance in `profile`.
pub fn instance(profile: Profile, seed: u64) -> (GroupElement, Scalar) {
    HardDistribution.sample(profile.params(), &mut rng(seed))
}

/// A demo world with a hash-backed oracle, as the CLI uses.
pub fn env(seed: u64, n_qubits: usize) -> Env {
    Env::new(Oracle::hash_backed(), MoneyAuthority::from_seed(seed), n_qubits)
}
