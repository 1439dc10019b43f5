//! JSON wrapper around canonical bytes for files handed between processes.
//!
//! The JSON is only an envelope: hashing always uses the canonical bytes in
//! `payload_b64`. A proof's banknote lives inside one process's authority,
//! so demo-mode files may carry a simulation-only dump of the note and its
//! registration; game-mode authorities refuse to export or import these.

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::applications::credentials::{Credential, IssuerSecret, Nym, RevocationNotice, RevocationProof};
use crate::applications::sok::SignatureOfKnowledge;
use crate::encoding::Canonical;
use crate::group::Profile;
use crate::money::{MoneyAuthority, MoneyError, NoteHandle, Registration, SerialNumber};
use crate::nizk::simext::{SimExtCrs, SimExtProof};
use crate::nizk::fs::FsProof;
use crate::unclonable::{UCrs, UTrapdoor, UnclonableProofCrs, UnclonableProofRom};

pub const ARTIFACT_VERSION: u32 = 1;

pub const SIM_ONLY_BANNER: &str =
    "SIMULATION ONLY: full classical description of a simulated banknote; a physical note cannot be copied like this";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArtifactError {
    #[error("artifact version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("malformed artifact: {0}")]
    MalformedArtifact(String),
    #[error(transparent)]
    Money(#[from] MoneyError),
}

fn malformed(e: impl std::fmt::Display) -> ArtifactError {
    ArtifactError::MalformedArtifact(e.to_string())
}

/// A serializable type with a registered artifact kind.
pub trait ArtifactKind: Canonical {
    const KIND: &'static str;
}

macro_rules! kinds {
    ($($ty:ty => $name:literal),* $(,)?) => {
        $(impl ArtifactKind for $ty { const KIND: &'static str = $name; })*
        /// Every registered kind.
        pub const KINDS: &[&str] = &[$($name),*];
    };
}

kinds! {
    FsProof => "fs-proof",
    SimExtCrs => "simext-crs",
    SimExtProof => "simext-proof",
    UCrs => "crs",
    UTrapdoor => "trapdoor",
    UnclonableProofCrs => "proof-crs",
    UnclonableProofRom => "proof-rom",
    SignatureOfKnowledge => "sok",
    Nym => "nym",
    IssuerSecret => "issuer-secret",
    Credential => "credential",
    RevocationNotice => "revocation-notice",
    RevocationProof => "revocation-proof",
}

/// Amplitudes and registration of one note, for moving a demo proof
/// between processes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimOnlyNoteDump {
    pub banner: String,
    pub serial: String,
    pub registration: Registration,
    pub amplitudes: Vec<[f64; 4]>,
}

impl SimOnlyNoteDump {
    pub fn export(authority: &MoneyAuthority, handle: NoteHandle, serial: &SerialNumber) -> Result<Self, ArtifactError> {
        let registration = authority
            .export_registry()?
            .into_iter()
            .find(|(s, _)| s == serial)
            .map(|(_, r)| r)
            .ok_or(MoneyError::UnknownSerial)?;
        Ok(SimOnlyNoteDump {
            banner: SIM_ONLY_BANNER.to_owned(),
            serial: hex::encode(serial.0),
            registration,
            amplitudes: authority.debug_amplitudes(handle)?,
        })
    }

    /// Registers the serial and recreates the note, returning its new
    /// handle in `authority`.
    pub fn import(&self, authority: &mut MoneyAuthority) -> Result<(SerialNumber, NoteHandle), ArtifactError> {
        if self.banner != SIM_ONLY_BANNER {
            return Err(malformed("note dump without the simulation-only banner"));
        }
        let bytes = hex::decode(&self.serial).map_err(|_| malformed("serial is not hex"))?;
        let serial = SerialNumber(bytes.try_into().map_err(|_| malformed("serial length"))?);
        if self.registration.bits.len() != self.registration.len() || self.registration.len() != self.amplitudes.len() {
            return Err(malformed("note dump lengths disagree"));
        }
        authority.import_registration(serial, self.registration.clone())?;
        Ok((serial, authority.import_note_sim_only(&self.amplitudes)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtifactFile {
    pub version: u32,
    pub kind: String,
    pub profile: Profile,
    pub payload_b64: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim_only_note_dump: Option<SimOnlyNoteDump>,
}

impl ArtifactFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ArtifactError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(malformed)?;
        let version = v.get("version").and_then(|x| x.as_u64()).ok_or_else(|| malformed("missing version"))?;
        if version != ARTIFACT_VERSION as u64 {
            return Err(ArtifactError::VersionMismatch { found: version as u32, expected: ARTIFACT_VERSION });
        }
        let file: ArtifactFile = serde_json::from_value(v).map_err(malformed)?;
        if !KINDS.contains(&file.kind.as_str()) {
            return Err(malformed(format!("unknown kind `{}`", file.kind)));
        }
        Ok(file)
    }

    pub fn payload(&self) -> Result<Vec<u8>, ArtifactError> {
        B64.decode(&self.payload_b64).map_err(malformed)
    }
}

pub fn encode_artifact<T: ArtifactKind>(value: &T, profile: Profile, dump: Option<SimOnlyNoteDump>) -> ArtifactFile {
    ArtifactFile {
        version: ARTIFACT_VERSION,
        kind: T::KIND.to_owned(),
        profile,
        payload_b64: B64.encode(value.to_canonical_bytes()),
        sim_only_note_dump: dump,
    }
}

pub fn decode_artifact<T: ArtifactKind>(file: &ArtifactFile) -> Result<T, ArtifactError> {
    if file.version != ARTIFACT_VERSION {
        return Err(ArtifactError::VersionMismatch { found: file.version, expected: ARTIFACT_VERSION });
    }
    if file.kind != T::KIND {
        return Err(malformed(format!("expected kind `{}`, found `{}`", T::KIND, file.kind)));
    }
    T::from_canonical_bytes(&file.payload()?, file.profile.params()).map_err(malformed)
}
