//! Non-interactive proofs: Fiat–Shamir over the sigma module and the
//! encrypt-the-witness simulation-extractable compiler.

pub mod fs;
pub mod simext;

use thiserror::Error;

use crate::group::GroupError;

pub const DEFAULT_FORK_BUDGET: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("the proof's challenge query does not appear in the oracle log")]
    Untraceable,
    #[error("adversary output is malformed: {0}")]
    AdversaryMalformed(String),
    #[error("extraction failed after {attempts} attempts")]
    ExtractionFailed { attempts: usize },
    #[error(transparent)]
    Decode(#[from] GroupError),
}
