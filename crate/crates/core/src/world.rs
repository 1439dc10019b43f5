//! The shared resources a protocol run touches: a random oracle and the
//! money authority.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::money::{MoneyAuthority, DEFAULT_QUBITS};
use crate::oracle::{Oracle, QueryOnly, RandomOracle};

/// Access needed by honest provers and verifiers.
pub trait World {
    fn oracle(&mut self) -> &mut dyn RandomOracle;
    fn authority(&mut self) -> &mut MoneyAuthority;
    fn n_qubits(&self) -> usize;
    /// Both resources at once, for operations that need them together.
    fn parts(&mut self) -> (&mut dyn RandomOracle, &mut MoneyAuthority);
}

/// Owns an oracle and an authority. Simulators and extractors work on an
/// `Env` directly because they program and fork the oracle.
#[derive(Debug)]
pub struct Env {
    pub oracle: Oracle,
    pub authority: MoneyAuthority,
    pub n_qubits: usize,
}

impl Env {
    pub fn new(oracle: Oracle, authority: MoneyAuthority, n_qubits: usize) -> Self {
        Env { oracle, authority, n_qubits }
    }

    /// Lazily sampled oracle and a demo-mode authority, both derived from
    /// `seed`.
    pub fn seeded(seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let oracle = Oracle::new(ChaCha20Rng::from_rng(&mut rng).expect("chacha"));
        let authority = MoneyAuthority::new(ChaCha20Rng::from_rng(&mut rng).expect("chacha"));
        Env::new(oracle, authority, DEFAULT_QUBITS)
    }

    /// Like [`seeded`](Self::seeded) with amplitude access disabled.
    pub fn for_game(seed: u64, n_qubits: usize) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let oracle = Oracle::new(ChaCha20Rng::from_rng(&mut rng).expect("chacha"));
        let authority = MoneyAuthority::for_game(rand::Rng::gen(&mut rng));
        Env::new(oracle, authority, n_qubits)
    }

    pub fn with_qubits(mut self, n: usize) -> Self {
        self.n_qubits = n;
        self
    }

    /// Restricted view handed to adversaries: query-only oracle, money
    /// operations through handles.
    pub fn view(&mut self) -> AdversaryView<'_> {
        AdversaryView { oracle: QueryOnly(&mut self.oracle), authority: &mut self.authority, n_qubits: self.n_qubits }
    }

    /// Copy of the authority for a rewinding extractor; the oracle is
    /// forked separately via its own snapshot machinery.
    pub(crate) fn fork_authority(&self) -> MoneyAuthority {
        self.authority.fork_state()
    }
}

impl World for Env {
    fn oracle(&mut self) -> &mut dyn RandomOracle {
        &mut self.oracle
    }

    fn authority(&mut self) -> &mut MoneyAuthority {
        &mut self.authority
    }

    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn parts(&mut self) -> (&mut dyn RandomOracle, &mut MoneyAuthority) {
        (&mut self.oracle, &mut self.authority)
    }
}

pub struct AdversaryView<'a> {
    oracle: QueryOnly<'a>,
    authority: &'a mut MoneyAuthority,
    n_qubits: usize,
}

impl World for AdversaryView<'_> {
    fn oracle(&mut self) -> &mut dyn RandomOracle {
        &mut self.oracle
    }

    fn authority(&mut self) -> &mut MoneyAuthority {
        self.authority
    }

    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn parts(&mut self) -> (&mut dyn RandomOracle, &mut MoneyAuthority) {
        (&mut self.oracle, &mut *self.authority)
    }
}
