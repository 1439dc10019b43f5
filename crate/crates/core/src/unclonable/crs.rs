//! Unclonable NIZK in the common reference string model.
//!
//! A proof is a fresh banknote, its serial `s` and a simulation-extractable
//! proof that either the prover knows `w` with `x = g^w` or the crs
//! commitment opens to `s`. Setup commits to a random dummy serial and
//! forgets the opening, so the second branch is dead for honest parties.

use rand::{CryptoRng, Rng, RngCore};

use crate::encoding::{tags, Canonical, EncodingError, Reader};
use crate::group::{commit, Commitment, GroupElement, GroupError, GroupParams, Scalar};
use crate::money::{NoteHandle, NoteVerifier, SerialNumber, SERIAL_LEN};
use crate::nizk::simext::{
    serial_scalar, simext_ext, simext_prove, simext_setup, simext_sim, simext_verify, SimExtCrs, SimExtInstance,
    SimExtProof, SimExtRelation, SimExtTrapdoor, SimExtWitness, SIMEXT_TAG,
};
use crate::oracle::RandomOracle;
use crate::unclonable::UnclonableError;
use crate::world::{Env, World};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UCrs {
    pub simext: SimExtCrs,
    pub c: Commitment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UTrapdoor {
    pub simext: SimExtTrapdoor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnclonableProofCrs {
    pub note: NoteHandle,
    pub serial: SerialNumber,
    pub pi: SimExtProof,
}

pub fn u_setup<R: RngCore + CryptoRng + ?Sized>(params: &GroupParams, rng: &mut R) -> (UCrs, UTrapdoor) {
    u_setup_tagged(params, SIMEXT_TAG, rng)
}

/// Setup with an explicit domain tag for the inner Fiat–Shamir proofs.
pub fn u_setup_tagged<R: RngCore + CryptoRng + ?Sized>(params: &GroupParams, tag: &str, rng: &mut R) -> (UCrs, UTrapdoor) {
    let (simext, td) = simext_setup(params, tag, rng);
    let mut s_star = [0u8; SERIAL_LEN];
    rng.fill_bytes(&mut s_star);
    let r_star = params.random_scalar(rng);
    let c = commit(params, &serial_scalar(params, &SerialNumber(s_star)), &r_star);
    (UCrs { simext, c }, UTrapdoor { simext: td })
}

/// The simext instance `(c, x, s)` a proof is about.
pub fn instance(crs: &UCrs, x: &GroupElement, serial: &SerialNumber, label: &[u8]) -> SimExtInstance {
    SimExtInstance {
        relation: SimExtRelation::DlogOrCommit { x: x.clone(), c: crs.c.clone(), serial: *serial },
        label: label.to_vec(),
    }
}

pub fn u_prove<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    world: &mut dyn World,
    crs: &UCrs,
    x: &GroupElement,
    w: &Scalar,
    rng: &mut R,
) -> Result<UnclonableProofCrs, UnclonableError> {
    u_prove_labeled(params, world, crs, x, w, &[], rng)
}

pub(crate) fn u_prove_labeled<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    world: &mut dyn World,
    crs: &UCrs,
    x: &GroupElement,
    w: &Scalar,
    label: &[u8],
    rng: &mut R,
) -> Result<UnclonableProofCrs, UnclonableError> {
    if &params.g_exp(w) != x {
        return Err(UnclonableError::WitnessMismatch);
    }
    let n = world.n_qubits();
    let (note, serial) = world.authority().note_gen(n)?;
    let inst = instance(crs, x, &serial, label);
    let pi = simext_prove(params, world.oracle(), &crs.simext, &inst, &SimExtWitness::Dlog(w.clone()), rng)?;
    Ok(UnclonableProofCrs { note, serial, pi })
}

pub fn u_verify(params: &GroupParams, world: &mut dyn World, crs: &UCrs, x: &GroupElement, proof: &UnclonableProofCrs) -> bool {
    let (oracle, authority) = world.parts();
    u_verify_parts(params, oracle, authority, crs, x, &[], proof)
}

pub(crate) fn u_verify_labeled(
    params: &GroupParams,
    world: &mut dyn World,
    crs: &UCrs,
    x: &GroupElement,
    label: &[u8],
    proof: &UnclonableProofCrs,
) -> bool {
    let (oracle, authority) = world.parts();
    u_verify_parts(params, oracle, authority, crs, x, label, proof)
}

/// Money verification of the note under `s`, then the simext check. The
/// note verifier is a parameter so tests can observe both halves.
pub fn u_verify_parts(
    params: &GroupParams,
    oracle: &mut dyn RandomOracle,
    notes: &mut dyn NoteVerifier,
    crs: &UCrs,
    x: &GroupElement,
    label: &[u8],
    proof: &UnclonableProofCrs,
) -> bool {
    let money_ok = notes.ver(proof.note, &proof.serial).unwrap_or(false);
    money_ok && simext_verify(params, oracle, &crs.simext, &instance(crs, x, &proof.serial, label), &proof.pi)
}

/// Fresh note plus a simulated sub-proof; no witness involved.
pub fn u_sim<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    env: &mut Env,
    crs: &UCrs,
    td: &UTrapdoor,
    x: &GroupElement,
    rng: &mut R,
) -> Result<UnclonableProofCrs, UnclonableError> {
    u_sim_labeled(params, env, crs, td, x, &[], rng)
}

pub(crate) fn u_sim_labeled<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    env: &mut Env,
    crs: &UCrs,
    td: &UTrapdoor,
    x: &GroupElement,
    label: &[u8],
    rng: &mut R,
) -> Result<UnclonableProofCrs, UnclonableError> {
    let (note, serial) = env.authority.note_gen(env.n_qubits)?;
    let inst = instance(crs, x, &serial, label);
    let pi = simext_sim(params, &mut env.oracle, &crs.simext, &td.simext, &inst, rng)?;
    Ok(UnclonableProofCrs { note, serial, pi })
}

/// Decrypts the witness ciphertext inside the proof. The result is only a
/// candidate; the caller checks it against `x`.
pub fn u_ext(params: &GroupParams, td: &UTrapdoor, proof: &UnclonableProofCrs) -> Result<Scalar, GroupError> {
    simext_ext(params, &td.simext, &proof.pi)
}

/// A uniformly random serial, used where a serial must look like a mint
/// output without being registered.
pub fn random_serial<R: Rng + ?Sized>(rng: &mut R) -> SerialNumber {
    SerialNumber(rng.gen())
}

impl Canonical for UCrs {
    const TAG: u8 = tags::U_CRS;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.simext.encode(out);
        self.c.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(UCrs { simext: SimExtCrs::decode(r, params)?, c: Commitment::decode(r, params)? })
    }
}

impl Canonical for UTrapdoor {
    const TAG: u8 = tags::U_TRAPDOOR;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.simext.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(UTrapdoor { simext: SimExtTrapdoor::decode(r, params)? })
    }
}

impl Canonical for UnclonableProofCrs {
    const TAG: u8 = tags::U_PROOF_CRS;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.note.encode(out);
        self.serial.encode(out);
        self.pi.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(UnclonableProofCrs {
            note: NoteHandle::decode(r, params)?,
            serial: SerialNumber::decode(r, params)?,
            pi: SimExtProof::decode(r, params)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::money::{Attack, MoneyAuthority, MoneyError};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::cell::RefCell;

    fn fx() -> &'static GroupParams {
        GroupParams::fixture()
    }

    fn setup(seed: u64) -> (Env, UCrs, UTrapdoor, ChaCha20Rng) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (crs, td) = u_setup(fx(), &mut rng);
        (Env::seeded(seed), crs, td, rng)
    }

    fn x32() -> GroupElement {
        fx().element(32u32.into()).unwrap()
    }

    #[test]
    fn setup_commitment_is_in_subgroup_and_seeded() {
        let (_, crs, _, _) = setup(1);
        assert!(fx().contains(&crs.c.c1) && fx().contains(&crs.c.c2));
        let (_, again, _, _) = setup(1);
        assert_eq!(crs.to_canonical_bytes(), again.to_canonical_bytes());
    }

    #[test]
    fn honest_proofs_verify() {
        let (mut env, crs, _, mut rng) = setup(2);
        for _ in 0..200 {
            let w = fx().random_scalar(&mut rng);
            let x = fx().g_exp(&w);
            let p = u_prove(fx(), &mut env, &crs, &x, &w, &mut rng).unwrap();
            assert!(u_verify(fx(), &mut env, &crs, &x, &p));
            // Verification leaves a valid note valid.
            assert!(u_verify(fx(), &mut env, &crs, &x, &p));
        }
    }

    #[test]
    fn wrong_witness_is_refused_before_minting() {
        let (mut env, crs, _, mut rng) = setup(3);
        let r = u_prove(fx(), &mut env, &crs, &x32(), &fx().scalar_from_u64(6), &mut rng);
        assert_eq!(r.unwrap_err(), UnclonableError::WitnessMismatch);
    }

    #[test]
    fn altered_serial_or_instance_is_rejected() {
        let (mut env, crs, _, mut rng) = setup(4);
        let w = fx().scalar_from_u64(5);
        let p = u_prove(fx(), &mut env, &crs, &x32(), &w, &mut rng).unwrap();
        // A different registered serial with its own valid note.
        let (other_note, other_serial) = env.authority.note_gen(env.n_qubits).unwrap();
        let moved = UnclonableProofCrs { note: other_note, serial: other_serial, pi: p.pi.clone() };
        assert!(!u_verify(fx(), &mut env, &crs, &x32(), &moved));
        let x2 = fx().g_exp(&fx().scalar_from_u64(7));
        let p2 = u_prove(fx(), &mut env, &crs, &x2, &fx().scalar_from_u64(7), &mut rng).unwrap();
        let swapped = UnclonableProofCrs { pi: p2.pi, ..p };
        assert!(!u_verify(fx(), &mut env, &crs, &x32(), &swapped));
    }

    #[test]
    fn classical_parts_with_fresh_note_fail_at_forgery_rate() {
        // Copy (s, pi) and pair them with fresh random Wiesner qubits.
        let (mut env, crs, _, mut rng) = setup(5);
        env.n_qubits = 4;
        let w = fx().scalar_from_u64(5);
        let trials = 4000;
        let mut both = 0;
        for _ in 0..trials {
            let p = u_prove(fx(), &mut env, &crs, &x32(), &w, &mut rng).unwrap();
            let (a, b) = env.authority.attack_fresh_forgery(p.note).unwrap();
            let copy = UnclonableProofCrs { note: b, ..p.clone() };
            let orig = UnclonableProofCrs { note: a, ..p };
            both += (u_verify(fx(), &mut env, &crs, &x32(), &orig) && u_verify(fx(), &mut env, &crs, &x32(), &copy))
                as u32;
        }
        let bound = Attack::FreshForgery.success_probability(4);
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        let rate = both as f64 / trials as f64;
        assert!((rate - bound).abs() < 4.0 * sigma, "rate {rate} bound {bound}");
    }

    #[test]
    fn simulated_proof_verifies_and_extracts_zero() {
        let (mut env, crs, td, mut rng) = setup(6);
        let p = u_sim(fx(), &mut env, &crs, &td, &x32(), &mut rng).unwrap();
        assert!(u_verify(fx(), &mut env, &crs, &x32(), &p));
        assert!(u_ext(fx(), &td, &p).unwrap().is_zero());
    }

    #[test]
    fn extraction_of_honest_proof_returns_witness() {
        let (mut env, crs, td, mut rng) = setup(7);
        let p = u_prove(fx(), &mut env, &crs, &x32(), &fx().scalar_from_u64(5), &mut rng).unwrap();
        assert_eq!(u_ext(fx(), &td, &p).unwrap(), fx().scalar_from_u64(5));
    }

    #[test]
    fn commitment_branch_yields_opening_not_witness() {
        // White-box: a crs whose commitment opens to a serial we control.
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let mut env = Env::seeded(8);
        let (simext, td) = simext_setup(fx(), SIMEXT_TAG, &mut rng);
        let (note, serial) = env.authority.note_gen(env.n_qubits).unwrap();
        let r_star = fx().scalar_from_u64(11);
        let crs = UCrs { simext, c: commit(fx(), &serial_scalar(fx(), &serial), &r_star) };
        let inst = instance(&crs, &x32(), &serial, &[]);
        let pi = simext_prove(
            fx(),
            &mut env.oracle,
            &crs.simext,
            &inst,
            &SimExtWitness::CommitOpening(r_star.clone()),
            &mut rng,
        )
        .unwrap();
        let proof = UnclonableProofCrs { note, serial, pi };
        assert!(u_verify(fx(), &mut env, &crs, &x32(), &proof));
        let ext = u_ext(fx(), &UTrapdoor { simext: td }, &proof).unwrap();
        assert_eq!(ext, r_star);
        assert_ne!(fx().g_exp(&ext), x32());
    }

    /// Note verifier double that records calls and returns a scripted bit.
    struct Scripted<'a> {
        answer: bool,
        calls: &'a RefCell<u32>,
    }

    impl NoteVerifier for Scripted<'_> {
        fn ver(&mut self, _: NoteHandle, _: &SerialNumber) -> Result<bool, MoneyError> {
            *self.calls.borrow_mut() += 1;
            Ok(self.answer)
        }
    }

    #[test]
    fn verify_is_money_and_simext() {
        let (mut env, crs, _, mut rng) = setup(9);
        let good = u_prove(fx(), &mut env, &crs, &x32(), &fx().scalar_from_u64(5), &mut rng).unwrap();
        let other = u_prove(fx(), &mut env, &crs, &x32(), &fx().scalar_from_u64(5), &mut rng).unwrap();
        let bad = UnclonableProofCrs { pi: other.pi, ..good.clone() };
        for (money, proof, pi_ok) in [(true, &good, true), (true, &bad, false), (false, &good, true), (false, &bad, false)] {
            let calls = RefCell::new(0);
            let mut double = Scripted { answer: money, calls: &calls };
            let mut o = env.oracle.clone();
            let pi_valid = simext_verify(fx(), &mut o, &crs.simext, &instance(&crs, &x32(), &proof.serial, &[]), &proof.pi);
            assert_eq!(pi_valid, pi_ok);
            let got = u_verify_parts(fx(), &mut env.oracle, &mut double, &crs, &x32(), &[], proof);
            assert_eq!(got, money && pi_ok);
            assert_eq!(*calls.borrow(), 1);
        }
    }

    #[test]
    fn unknown_serial_rejects() {
        let (mut env, crs, _, mut rng) = setup(10);
        let p = u_prove(fx(), &mut env, &crs, &x32(), &fx().scalar_from_u64(5), &mut rng).unwrap();
        let forged = UnclonableProofCrs { serial: random_serial(&mut rng), ..p };
        assert!(!u_verify(fx(), &mut env, &crs, &x32(), &forged));
        let mut fresh = MoneyAuthority::from_seed(0);
        assert_eq!(fresh.ver(forged.note, &forged.serial), Err(MoneyError::UnknownSerial));
    }

    #[test]
    fn encoding_roundtrip() {
        let (mut env, crs, td, mut rng) = setup(11);
        let p = u_prove(fx(), &mut env, &crs, &x32(), &fx().scalar_from_u64(5), &mut rng).unwrap();
        assert_eq!(UnclonableProofCrs::from_canonical_bytes(&p.to_canonical_bytes(), fx()).unwrap(), p);
        assert_eq!(UCrs::from_canonical_bytes(&crs.to_canonical_bytes(), fx()).unwrap(), crs);
        assert_eq!(UTrapdoor::from_canonical_bytes(&td.to_canonical_bytes(), fx()).unwrap(), td);
    }
}
