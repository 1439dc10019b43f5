//! Reading and writing artifact files, and the JSON bundles built on them.

use std::io::Read;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use unclonable_zk::artifact::SimOnlyNoteDump;
use unclonable_zk::{
    decode_artifact, encode_artifact, ArtifactFile, ArtifactKind, GroupElement, GroupParams, MoneyAuthority,
    NoteHandle, Profile, Scalar, SerialNumber,
};

use crate::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(CliError::usage)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializes");
    s.push('\n');
    s
}

/// Loads a typed artifact. Failures are usage errors: the input is a key or
/// parameter, not the thing being judged.
pub fn load<T: ArtifactKind>(path: &Path) -> Result<(T, ArtifactFile), CliError> {
    let file = ArtifactFile::from_json(&read_text(path)?).map_err(CliError::usage)?;
    let value = decode_artifact(&file).map_err(CliError::usage)?;
    Ok((value, file))
}

/// Loads the object under verification; a malformed one is a rejection.
pub fn load_candidate<T: ArtifactKind>(path: &Path) -> Result<(T, ArtifactFile), CliError> {
    let file = ArtifactFile::from_json(&read_text(path)?).map_err(CliError::reject)?;
    let value = decode_artifact(&file).map_err(CliError::reject)?;
    Ok((value, file))
}

/// Wraps a note-carrying value together with a dump of its note.
pub fn with_note<T: ArtifactKind>(
    value: &T,
    profile: Profile,
    authority: &MoneyAuthority,
    note: NoteHandle,
    serial: &SerialNumber,
) -> Result<ArtifactFile, CliError> {
    let dump = SimOnlyNoteDump::export(authority, note, serial).map_err(CliError::usage)?;
    Ok(encode_artifact(value, profile, Some(dump)))
}

/// Recreates the dumped note in `authority` and returns its local handle.
pub fn adopt_note(file: &ArtifactFile, authority: &mut MoneyAuthority) -> Result<NoteHandle, CliError> {
    let dump = file.sim_only_note_dump.as_ref().ok_or_else(|| CliError::reject("artifact carries no note"))?;
    let (_, handle) = dump.import(authority).map_err(CliError::reject)?;
    Ok(handle)
}

pub fn parse_witness(params: &GroupParams, s: &str) -> Result<Scalar, CliError> {
    let v = BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| CliError::usage(format!("witness `{s}` is not a decimal integer")))?;
    params.checked_scalar(v).map_err(CliError::usage)
}

pub fn parse_element(params: &GroupParams, s: &str) -> Result<GroupElement, CliError> {
    let v = BigUint::parse_bytes(s.trim_start_matches("0x").as_bytes(), 16)
        .ok_or_else(|| CliError::usage(format!("instance `{s}` is not hex")))?;
    params.element(v).map_err(CliError::reject)
}

pub fn element_hex(x: &GroupElement) -> String {
    x.value().to_str_radix(16)
}

/// A credential as handed to its holder.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CredentialBundle {
    pub nym: ArtifactFile,
    pub access: String,
    pub sigma: ArtifactFile,
    /// Serial of the credential's banknote, in hex.
    pub note_ref: String,
}

/// Everything the issuer keeps.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IssuerBundle {
    pub nym: ArtifactFile,
    pub secret: ArtifactFile,
    pub accesses: Vec<String>,
}

pub fn parse_bundle<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("malformed {what}: {e}"))
}
