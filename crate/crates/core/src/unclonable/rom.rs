//! Unclonable NIZK in the random-oracle model: a banknote plus a
//! Fiat–Shamir Schnorr proof whose challenge is bound to the note's serial.

use rand::{CryptoRng, RngCore};

use crate::encoding::{tags, Canonical, EncodingError, Reader};
use crate::group::{GroupElement, GroupParams, Scalar};
use crate::money::{NoteHandle, NoteVerifier, SerialNumber};
use crate::nizk::fs::challenge_from_digest;
use crate::oracle::RandomOracle;
use crate::sigma::{commit_phase, simulate, verify_parts, Alpha, AugmentedStatement, Gamma, SigmaStatement, SigmaWitness};
use crate::unclonable::UnclonableError;
use crate::world::{Env, World};

pub const UROM_TAG: &str = "UROM/v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnclonableProofRom {
    pub note: NoteHandle,
    pub serial: SerialNumber,
    pub alpha: Alpha,
    pub beta: Scalar,
    pub gamma: Gamma,
}

/// The oracle point `tag ‖ x ‖ alpha ‖ s` fixing the challenge.
pub fn rom_point(params: &GroupParams, x: &GroupElement, alpha: &Alpha, serial: &SerialNumber) -> Vec<u8> {
    AugmentedStatement { inner: SigmaStatement::dlog(params, x), serial: *serial }.challenge_input(UROM_TAG, alpha)
}

pub fn rom_prove<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    world: &mut dyn World,
    x: &GroupElement,
    w: &Scalar,
    rng: &mut R,
) -> Result<UnclonableProofRom, UnclonableError> {
    let stmt = SigmaStatement::dlog(params, x);
    let wit = SigmaWitness::Atom(vec![w.clone()]);
    if !stmt.is_satisfied_by(params, &wit) {
        return Err(UnclonableError::WitnessMismatch);
    }
    let n = world.n_qubits();
    let (note, serial) = world.authority().note_gen(n)?;
    let (alpha, state) = commit_phase(params, &stmt, &wit, rng)?;
    let beta = challenge_from_digest(params, &world.oracle().query(&rom_point(params, x, &alpha, &serial)));
    let gamma = state.respond(&beta);
    Ok(UnclonableProofRom { note, serial, alpha, beta, gamma })
}

pub fn rom_verify(params: &GroupParams, world: &mut dyn World, x: &GroupElement, proof: &UnclonableProofRom) -> bool {
    let (oracle, authority) = world.parts();
    rom_verify_parts(params, oracle, authority, x, proof)
}

pub fn rom_verify_parts(
    params: &GroupParams,
    oracle: &mut dyn RandomOracle,
    notes: &mut dyn NoteVerifier,
    x: &GroupElement,
    proof: &UnclonableProofRom,
) -> bool {
    if !notes.ver(proof.note, &proof.serial).unwrap_or(false) {
        return false;
    }
    let beta = challenge_from_digest(params, &oracle.query(&rom_point(params, x, &proof.alpha, &proof.serial)));
    beta == proof.beta && verify_parts(params, &SigmaStatement::dlog(params, x), &proof.alpha, &beta, &proof.gamma)
}

/// Mints a note, simulates a transcript for a freshly drawn challenge and
/// programs the oracle at the new point. Fails only if that point was
/// already defined.
pub fn rom_sim<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    env: &mut Env,
    x: &GroupElement,
    rng: &mut R,
) -> Result<UnclonableProofRom, UnclonableError> {
    let (note, serial) = env.authority.note_gen(env.n_qubits)?;
    let mut digest = [0u8; 32];
    rng.fill_bytes(&mut digest);
    let beta = challenge_from_digest(params, &digest);
    let (alpha, gamma) = simulate(params, &SigmaStatement::dlog(params, x), &beta, rng);
    env.oracle.program(&rom_point(params, x, &alpha, &serial), digest)?;
    Ok(UnclonableProofRom { note, serial, alpha, beta, gamma })
}

impl Canonical for UnclonableProofRom {
    const TAG: u8 = tags::U_PROOF_ROM;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.note.encode(out);
        self.serial.encode(out);
        self.alpha.encode(out);
        self.beta.encode(out);
        self.gamma.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(UnclonableProofRom {
            note: NoteHandle::decode(r, params)?,
            serial: SerialNumber::decode(r, params)?,
            alpha: Alpha::decode(r, params)?,
            beta: Scalar::decode(r, params)?,
            gamma: Gamma::decode(r, params)?,
        })
    }
}
