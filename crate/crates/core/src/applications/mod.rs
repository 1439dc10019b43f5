//! Applications of unclonable proofs: signatures of knowledge and
//! revocable, unclonable anonymous credentials.

pub mod credentials;
pub mod sok;

pub use credentials::{
    issuer_keygen, prove_revocation, revoke, ver_revoke, verify_cred, CredentialError, Credential, Issuer,
    IssuerSecret, Nym, RevocationNotice, RevocationProof,
};
pub use sok::{sok_ext, sok_setup, sok_sign, sok_sim, sok_verify, SignatureOfKnowledge};
