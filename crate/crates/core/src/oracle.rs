//! Programmable, extractable random oracle with snapshot and replay for
//! forking extractors.
//!
//! Every answered point records the log position at which it became
//! defined. That is enough to reconstruct the oracle as it stood just before
//! any logged query and resume it with fresh randomness from there.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest as _, Sha256};
use thiserror::Error;

pub const DIGEST_LEN: usize = 32;

pub type Digest = [u8; DIGEST_LEN];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle point is already defined")]
    AlreadyDefined,
}

/// Query-only access. Adversaries and honest parties see an oracle through
/// this trait; programming needs the concrete [`Oracle`].
pub trait RandomOracle {
    fn query(&mut self, input: &[u8]) -> Digest;
}

#[derive(Clone, Debug)]
struct Entry {
    digest: Digest,
    defined_at: usize,
    programmed: bool,
}

#[derive(Clone, Debug)]
enum Backing {
    /// Lazily sampled uniform digests.
    Lazy(Box<ChaCha20Rng>),
    /// SHA-256 of the input. Lets independent processes agree on answers.
    Hash,
}

#[derive(Clone, Debug)]
pub struct Oracle {
    table: HashMap<Vec<u8>, Entry>,
    log: Vec<Vec<u8>>,
    backing: Backing,
}

/// Frozen oracle state. See [`Oracle::snapshot_at`].
#[derive(Clone, Debug)]
pub struct OracleSnapshot {
    table: HashMap<Vec<u8>, Entry>,
    log: Vec<Vec<u8>>,
}

impl OracleSnapshot {
    pub fn log_len(&self) -> usize {
        self.log.len()
    }
}

impl Oracle {
    pub fn new(rng: ChaCha20Rng) -> Self {
        Oracle { table: HashMap::new(), log: Vec::new(), backing: Backing::Lazy(Box::new(rng)) }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(ChaCha20Rng::seed_from_u64(seed))
    }

    /// Oracle answering with SHA-256 of the input, unless programmed.
    pub fn hash_backed() -> Self {
        Oracle { table: HashMap::new(), log: Vec::new(), backing: Backing::Hash }
    }

    pub fn is_defined(&self, input: &[u8]) -> bool {
        self.table.contains_key(input)
    }

    pub fn is_programmed(&self, input: &[u8]) -> bool {
        self.table.get(input).is_some_and(|e| e.programmed)
    }

    /// Fixes the answer at a point that has not been answered yet.
    pub fn program(&mut self, input: &[u8], digest: Digest) -> Result<(), OracleError> {
        if self.table.contains_key(input) {
            return Err(OracleError::AlreadyDefined);
        }
        let entry = Entry { digest, defined_at: self.log.len(), programmed: true };
        self.table.insert(input.to_vec(), entry);
        Ok(())
    }

    /// Full query transcript, in order.
    pub fn extract_queries(&self) -> &[Vec<u8>] {
        &self.log
    }

    pub fn log_len(&self) -> usize {
        self.log.len()
    }

    /// Index of the last logged query equal to `input` within `range`.
    pub fn last_query_index(&self, input: &[u8], range: std::ops::Range<usize>) -> Option<usize> {
        let end = range.end.min(self.log.len());
        (range.start..end).rev().find(|&i| self.log[i] == input)
    }

    pub fn snapshot(&self) -> OracleSnapshot {
        OracleSnapshot { table: self.table.clone(), log: self.log.clone() }
    }

    /// The oracle as it stood immediately before query `index` was answered:
    /// points sampled by earlier queries and points programmed before that
    /// query are kept, everything later is forgotten. The queried point
    /// itself is always forgotten, even if it had been programmed, so that
    /// a resumed oracle answers it afresh.
    pub fn snapshot_at(&self, index: usize) -> OracleSnapshot {
        self.fork(index, index)
    }

    /// Like [`snapshot_at`](Self::snapshot_at) but truncates the log to
    /// `replay_from`, for callers that will replay queries
    /// `replay_from..index` themselves.
    pub fn fork(&self, replay_from: usize, index: usize) -> OracleSnapshot {
        let index = index.min(self.log.len());
        let replay_from = replay_from.min(index);
        let point = self.log.get(index);
        let table = self
            .table
            .iter()
            .filter(|(k, _)| Some(*k) != point)
            .filter(|(_, e)| if e.programmed { e.defined_at <= index } else { e.defined_at < index })
            .map(|(k, e)| (k.clone(), e.clone()))
            .collect();
        OracleSnapshot { table, log: self.log[..replay_from].to_vec() }
    }

    /// Lazily sampled oracle agreeing with the snapshot on every point it
    /// defines and sampling fresh answers everywhere else.
    pub fn resume(snapshot: OracleSnapshot, rng: ChaCha20Rng) -> Self {
        Oracle { table: snapshot.table, log: snapshot.log, backing: Backing::Lazy(Box::new(rng)) }
    }
}

impl RandomOracle for Oracle {
    fn query(&mut self, input: &[u8]) -> Digest {
        let at = self.log.len();
        self.log.push(input.to_vec());
        if let Some(e) = self.table.get(input) {
            return e.digest;
        }
        let digest = match &mut self.backing {
            Backing::Lazy(rng) => {
                let mut d = [0u8; DIGEST_LEN];
                rng.fill_bytes(&mut d);
                d
            }
            Backing::Hash => Sha256::digest(input).into(),
        };
        self.table.insert(input.to_vec(), Entry { digest, defined_at: at, programmed: false });
        digest
    }
}

/// Query-only view over an [`Oracle`].
pub struct QueryOnly<'a>(pub(crate) &'a mut Oracle);

impl QueryOnly<'_> {
    pub fn log_len(&self) -> usize {
        self.0.log_len()
    }
}

impl RandomOracle for QueryOnly<'_> {
    fn query(&mut self, input: &[u8]) -> Digest {
        self.0.query(input)
    }
}

/// Domain-separated oracle input: ASCII tag followed by the caller's
/// canonical encodings.
pub fn oracle_input(tag: &str, parts: &[&[u8]]) -> Vec<u8> {
    let mut out = tag.as_bytes().to_vec();
    for p in parts {
        out.extend_from_slice(p);
    }
    out
}
