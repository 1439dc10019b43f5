//! Unclonable non-interactive zero-knowledge proofs for discrete log.
//!
//! Proofs carry a simulated Wiesner banknote whose serial is bound into the
//! statement, so a classical copy of the proof is worthless without a second
//! valid note. Two constructions are provided: one in the common reference
//! string model ([`unclonable::crs`]), compiled through an encrypt-the-witness
//! simulation-extractable NIZK, and one in the random-oracle model
//! ([`unclonable::rom`]) with a forking extractor. On top sit signatures of
//! knowledge and revocable anonymous credentials, and [`games`] runs the
//! security experiments as Monte-Carlo trials against exact bounds.
//!
//! Two group profiles exist: a 2048-bit production group and the toy
//! `p = 47, q = 23` fixture group that makes exhaustive checks possible.

pub mod encoding;
pub mod group;
pub mod money;
pub mod oracle;
pub mod qubit;
pub mod sigma;
pub mod nizk;
pub mod world;
pub mod games;
pub mod applications;
pub mod artifact;
pub mod vectors;
pub mod unclonable;

pub use applications::{
    Credential, CredentialError, Issuer, IssuerSecret, Nym, RevocationNotice, RevocationProof, SignatureOfKnowledge,
};
pub use artifact::{decode_artifact, encode_artifact, ArtifactError, ArtifactFile, ArtifactKind};
pub use encoding::{Canonical, EncodingError};
pub use games::{GameConfig, GameReport, HardDistribution};
pub use group::{Commitment, GroupElement, GroupError, GroupParams, KeyPair, Profile, Scalar, WitnessCiphertext};
pub use money::{Attack, MoneyAuthority, MoneyError, NoteHandle, SerialNumber};
pub use nizk::fs::FsProof;
pub use nizk::simext::{SimExtCrs, SimExtProof, SimExtTrapdoor};
pub use nizk::ExtractError;
pub use oracle::{Oracle, OracleError, RandomOracle};
pub use sigma::{SigmaStatement, SigmaTranscript, SigmaWitness};
pub use unclonable::{
    BuiltinAdversary, Protocol, UCrs, UTrapdoor, UnclonableError, UnclonableProofCrs, UnclonableProofRom,
    UnclonableScheme,
};
pub use world::{Env, World};
