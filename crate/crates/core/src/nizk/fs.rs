//! Fiat–Shamir NIZK: the challenge is `hash_to_scalar(O(tag ‖ ctx ‖ stmt ‖ alpha))`.
//!
//! Extraction is the classical forking argument: find the adversary's
//! challenge query, rewind the oracle to just before it, answer it afresh and
//! rerun the adversary on the same random tape.

use rand::{CryptoRng, Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::encoding::{tags, Bytes, Canonical, EncodingError, Reader};
use crate::group::{hash_to_scalar, GroupParams, Profile, Scalar};
use crate::nizk::ExtractError;
use crate::oracle::{oracle_input, Digest, Oracle, OracleError, RandomOracle};
use crate::sigma::{
    self, commit_phase_from, extract_special_soundness, simulate, Alpha, FixedSource, Gamma, RngSource,
    ScalarSource, SigmaError, SigmaStatement, SigmaTranscript, SigmaWitness,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FsProof {
    pub alpha: Alpha,
    pub gamma: Gamma,
}

impl Canonical for FsProof {
    const TAG: u8 = tags::FS_PROOF;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.alpha.encode(out);
        self.gamma.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(FsProof { alpha: Alpha::decode(r, params)?, gamma: Gamma::decode(r, params)? })
    }
}

/// The oracle point whose answer fixes the challenge.
pub fn fs_input(tag: &str, context: &[u8], stmt: &SigmaStatement, alpha: &Alpha) -> Vec<u8> {
    oracle_input(
        tag,
        &[&Bytes(context.to_vec()).to_canonical_bytes(), &stmt.to_canonical_bytes(), &alpha.to_canonical_bytes()],
    )
}

pub fn challenge_from_digest(params: &GroupParams, digest: &Digest) -> Scalar {
    hash_to_scalar(params, digest)
}

pub fn fs_prove<O, R>(
    params: &GroupParams,
    oracle: &mut O,
    tag: &str,
    context: &[u8],
    stmt: &SigmaStatement,
    wit: &SigmaWitness,
    rng: &mut R,
) -> Result<FsProof, SigmaError>
where
    O: RandomOracle + ?Sized,
    R: RngCore + CryptoRng + ?Sized,
{
    fs_prove_from(params, oracle, tag, context, stmt, wit, &mut RngSource(rng))
}

pub fn fs_prove_from<O: RandomOracle + ?Sized>(
    params: &GroupParams,
    oracle: &mut O,
    tag: &str,
    context: &[u8],
    stmt: &SigmaStatement,
    wit: &SigmaWitness,
    src: &mut dyn ScalarSource,
) -> Result<FsProof, SigmaError> {
    let (alpha, state) = commit_phase_from(params, stmt, wit, src)?;
    let digest = oracle.query(&fs_input(tag, context, stmt, &alpha));
    let gamma = state.respond(&challenge_from_digest(params, &digest));
    Ok(FsProof { alpha, gamma })
}

pub fn fs_verify<O: RandomOracle + ?Sized>(
    params: &GroupParams,
    oracle: &mut O,
    tag: &str,
    context: &[u8],
    stmt: &SigmaStatement,
    proof: &FsProof,
) -> bool {
    let digest = oracle.query(&fs_input(tag, context, stmt, &proof.alpha));
    let beta = challenge_from_digest(params, &digest);
    sigma::verify_parts(params, stmt, &proof.alpha, &beta, &proof.gamma)
}

/// Zero-knowledge simulator: samples the oracle answer first, simulates the
/// sigma transcript for the derived challenge, then programs the point.
pub fn fs_simulate<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    oracle: &mut Oracle,
    tag: &str,
    context: &[u8],
    stmt: &SigmaStatement,
    rng: &mut R,
) -> Result<FsProof, OracleError> {
    let mut digest = [0u8; 32];
    rng.fill_bytes(&mut digest);
    let beta = challenge_from_digest(params, &digest);
    let (alpha, gamma) = simulate(params, stmt, &beta, rng);
    oracle.program(&fs_input(tag, context, stmt, &alpha), digest)?;
    Ok(FsProof { alpha, gamma })
}

/// Rewinds `oracle` to just before query `fork_index` (keeping the log up to
/// `replay_from`) and calls `attempt` on a freshly resumed copy, up to
/// `budget` times.
pub fn fork_and_retry<W, R: RngCore + ?Sized>(
    oracle: &Oracle,
    replay_from: usize,
    fork_index: usize,
    budget: usize,
    rng: &mut R,
    mut attempt: impl FnMut(Oracle) -> Option<W>,
) -> Result<W, ExtractError> {
    for _ in 0..budget {
        let fresh = ChaCha20Rng::seed_from_u64(rng.next_u64());
        if let Some(w) = attempt(Oracle::resume(oracle.fork(replay_from, fork_index), fresh)) {
            return Ok(w);
        }
    }
    Err(ExtractError::ExtractionFailed { attempts: budget })
}

/// A party that outputs Fiat–Shamir proofs given oracle access. Runs must be
/// deterministic in `rng` so that the extractor can replay them.
pub trait FsAdversary {
    fn run(&self, oracle: &mut dyn RandomOracle, rng: &mut ChaCha20Rng) -> Vec<(SigmaStatement, FsProof)>;
}

#[allow(clippy::too_many_arguments)]
pub fn fs_extract<R: RngCore + ?Sized>(
    params: &GroupParams,
    tag: &str,
    context: &[u8],
    adversary: &dyn FsAdversary,
    oracle: &mut Oracle,
    adversary_seed: u64,
    selector: usize,
    budget: usize,
    rng: &mut R,
) -> Result<SigmaWitness, ExtractError> {
    fs_extract_with(params, tag, context, adversary, oracle, adversary_seed, selector, budget, rng, |_, _| {})
}

/// [`fs_extract`] with a hook that may program each resumed oracle at the
/// fork point before the adversary is replayed.
#[allow(clippy::too_many_arguments)]
pub fn fs_extract_with<R: RngCore + ?Sized>(
    params: &GroupParams,
    tag: &str,
    context: &[u8],
    adversary: &dyn FsAdversary,
    oracle: &mut Oracle,
    adversary_seed: u64,
    selector: usize,
    budget: usize,
    rng: &mut R,
    mut prepare: impl FnMut(&mut Oracle, &[u8]),
) -> Result<SigmaWitness, ExtractError> {
    let start = oracle.log_len();
    let outputs = adversary.run(oracle, &mut ChaCha20Rng::seed_from_u64(adversary_seed));
    let end = oracle.log_len();
    let (stmt, proof) = outputs
        .get(selector)
        .ok_or_else(|| ExtractError::AdversaryMalformed(format!("no output at index {selector}")))?;
    let point = fs_input(tag, context, stmt, &proof.alpha);
    let fork_index = oracle.last_query_index(&point, start..end).ok_or(ExtractError::Untraceable)?;
    if !fs_verify(params, oracle, tag, context, stmt, proof) {
        return Err(ExtractError::ExtractionFailed { attempts: 0 });
    }
    let beta1 = challenge_from_digest(params, &oracle.query(&point));
    let t1 = SigmaTranscript { alpha: proof.alpha.clone(), beta: beta1, gamma: proof.gamma.clone() };

    fork_and_retry(oracle, start, fork_index, budget, rng, |mut forked| {
        prepare(&mut forked, &point);
        let rerun = adversary.run(&mut forked, &mut ChaCha20Rng::seed_from_u64(adversary_seed));
        let (stmt2, proof2) = rerun.get(selector)?;
        if stmt2 != stmt || proof2.alpha != proof.alpha {
            return None;
        }
        let beta2 = challenge_from_digest(params, &forked.query(&point));
        let t2 = SigmaTranscript { alpha: proof2.alpha.clone(), beta: beta2, gamma: proof2.gamma.clone() };
        extract_special_soundness(params, stmt, &t1, &t2).ok()
    })
}

/// Honest prover as an adversary: one proof on a fixed statement. With
/// `nonces` set, commitment randomness comes from that script and the salt
/// is zero.
#[derive(Clone, Debug)]
pub struct HonestFsProver {
    pub profile: Profile,
    pub tag: String,
    pub context: Vec<u8>,
    pub stmt: SigmaStatement,
    pub wit: SigmaWitness,
    pub nonces: Option<Vec<Scalar>>,
}

impl FsAdversary for HonestFsProver {
    fn run(&self, oracle: &mut dyn RandomOracle, rng: &mut ChaCha20Rng) -> Vec<(SigmaStatement, FsProof)> {
        let params = self.profile.params();
        let proof = match &self.nonces {
            Some(ns) => fs_prove_from(
                params,
                oracle,
                &self.tag,
                &self.context,
                &self.stmt,
                &self.wit,
                &mut FixedSource::new(ns.iter().cloned(), [0; 16]),
            ),
            None => fs_prove(params, oracle, &self.tag, &self.context, &self.stmt, &self.wit, rng),
        };
        proof.map(|p| vec![(self.stmt.clone(), p)]).unwrap_or_default()
    }
}

/// Outputs a simulated transcript under a guessed challenge without ever
/// querying the oracle.
#[derive(Clone, Debug)]
pub struct NonQueryingProver {
    pub profile: Profile,
    pub stmt: SigmaStatement,
}

impl FsAdversary for NonQueryingProver {
    fn run(&self, _: &mut dyn RandomOracle, rng: &mut ChaCha20Rng) -> Vec<(SigmaStatement, FsProof)> {
        let params = self.profile.params();
        let guess = params.random_scalar(rng);
        let (alpha, gamma) = simulate(params, &self.stmt, &guess, rng);
        vec![(self.stmt.clone(), FsProof { alpha, gamma })]
    }
}

/// A digest whose derived challenge is `beta`, found by counter search.
/// Only practical when `q` is tiny.
pub fn digest_for_challenge(params: &GroupParams, beta: &Scalar, max_tries: u64) -> Option<Digest> {
    use sha2::{Digest as _, Sha256};
    (0..max_tries)
        .map(|i| -> Digest { Sha256::digest(i.to_be_bytes()).into() })
        .find(|d| &challenge_from_digest(params, d) == beta)
}

/// Draws a uniformly random challenge together with a digest mapping to it.
pub fn random_challenge<R: Rng + ?Sized>(params: &GroupParams, rng: &mut R) -> (Digest, Scalar) {
    let mut d = [0u8; 32];
    rng.fill_bytes(&mut d);
    (d, challenge_from_digest(params, &d))
}
