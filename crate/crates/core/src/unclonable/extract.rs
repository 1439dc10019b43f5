//! The (k−1)-to-k cloning extractor and its repetition amplifier.
//!
//! The extractor plays the game itself: it generates the crs, hands the
//! adversary `k - 1` simulated proofs, collects `k` outputs and extracts from
//! one chosen uniformly. In the CRS model extraction is decryption; in the
//! random-oracle model it forks the adversary at its challenge query.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::group::{GroupElement, GroupParams, Scalar};
use crate::nizk::simext::SIMEXT_TAG;
use crate::nizk::{fs::fork_and_retry, ExtractError};
use crate::sigma::{extract_special_soundness, verify_parts, SigmaStatement, SigmaTranscript, SigmaWitness};
use crate::unclonable::crs::{u_ext, u_setup_tagged, u_sim_labeled};
use crate::unclonable::rom::{rom_point, rom_sim};
use crate::unclonable::{Adversary, CrsScheme, RomScheme};
use crate::world::Env;

fn check_arity<P>(outputs: &[P], k: usize) -> Result<(), ExtractError> {
    if outputs.len() == k {
        Ok(())
    } else {
        Err(ExtractError::AdversaryMalformed(format!("expected {k} outputs, got {}", outputs.len())))
    }
}

/// CRS-model extractor for an adversary that gets `x_list.len()` proofs and
/// must return `x_list.len() + 1`. Returns the decrypted candidate; the
/// caller checks it against `x`.
pub fn clone_extractor_crs(
    params: &'static GroupParams,
    adversary: &dyn Adversary<CrsScheme>,
    x_list: &[GroupElement],
    x: &GroupElement,
    n_qubits: usize,
    rng: &mut ChaCha20Rng,
) -> Result<Scalar, ExtractError> {
    clone_extractor_crs_with(params, SIMEXT_TAG, &[], adversary, x_list, x, n_qubits, rng)
}

/// [`clone_extractor_crs`] for a scheme set up under `tag` with statements
/// labelled by `label`.
#[allow(clippy::too_many_arguments)]
pub fn clone_extractor_crs_with(
    params: &'static GroupParams,
    tag: &str,
    label: &[u8],
    adversary: &dyn Adversary<CrsScheme>,
    x_list: &[GroupElement],
    _x: &GroupElement,
    n_qubits: usize,
    rng: &mut ChaCha20Rng,
) -> Result<Scalar, ExtractError> {
    let k = x_list.len() + 1;
    let mut env = Env::for_game(rng.gen(), n_qubits);
    let (crs, td) = u_setup_tagged(params, tag, rng);
    let mut inputs = Vec::with_capacity(x_list.len());
    for xi in x_list {
        let p = u_sim_labeled(params, &mut env, &crs, &td, xi, label, rng)
            .map_err(|_| ExtractError::ExtractionFailed { attempts: 0 })?;
        inputs.push((xi.clone(), p));
    }
    let scheme = CrsScheme { crs, label: label.to_vec() };
    let mut adv_rng = ChaCha20Rng::seed_from_u64(rng.gen());
    let outputs = adversary.run(&mut env.view(), &scheme, &inputs, k, &mut adv_rng);
    check_arity(&outputs, k)?;
    let j = rng.gen_range(0..k);
    Ok(u_ext(params, &td, &outputs[j].1)?)
}

/// Random-oracle extractor: simulates the inputs by programming, runs the
/// adversary, picks an output uniformly and forks the adversary at that
/// output's challenge query, replaying it with the same random tape and a
/// copy of the money state from before its run.
pub fn clone_extractor_rom(
    params: &'static GroupParams,
    adversary: &dyn Adversary<RomScheme>,
    x_list: &[GroupElement],
    x: &GroupElement,
    n_qubits: usize,
    budget: usize,
    rng: &mut ChaCha20Rng,
) -> Result<Scalar, ExtractError> {
    let k = x_list.len() + 1;
    let scheme = RomScheme { params };
    let mut env = Env::for_game(rng.gen(), n_qubits);
    let mut inputs = Vec::with_capacity(x_list.len());
    for xi in x_list {
        let p = rom_sim(params, &mut env, xi, rng).map_err(|_| ExtractError::ExtractionFailed { attempts: 0 })?;
        inputs.push((xi.clone(), p));
    }
    let authority_before = env.fork_authority();
    let adv_seed: u64 = rng.gen();
    let start = env.oracle.log_len();
    let outputs = adversary.run(&mut env.view(), &scheme, &inputs, k, &mut ChaCha20Rng::seed_from_u64(adv_seed));
    let end = env.oracle.log_len();
    check_arity(&outputs, k)?;
    let j = rng.gen_range(0..k);
    let proof = &outputs[j].1;

    let stmt = SigmaStatement::dlog(params, x);
    if !verify_parts(params, &stmt, &proof.alpha, &proof.beta, &proof.gamma) {
        return Err(ExtractError::ExtractionFailed { attempts: 0 });
    }
    let point = rom_point(params, x, &proof.alpha, &proof.serial);
    let fork_index = env.oracle.last_query_index(&point, start..end).ok_or(ExtractError::Untraceable)?;
    let t1 = SigmaTranscript { alpha: proof.alpha.clone(), beta: proof.beta.clone(), gamma: proof.gamma.clone() };

    let witness = fork_and_retry(&env.oracle, start, fork_index, budget, rng, |oracle| {
        let mut replay = Env::new(oracle, authority_before.fork_state(), n_qubits);
        let rerun =
            adversary.run(&mut replay.view(), &scheme, &inputs, k, &mut ChaCha20Rng::seed_from_u64(adv_seed));
        let (_, p2) = rerun.get(j)?;
        if p2.alpha != proof.alpha || p2.serial != proof.serial {
            return None;
        }
        let t2 = SigmaTranscript { alpha: p2.alpha.clone(), beta: p2.beta.clone(), gamma: p2.gamma.clone() };
        extract_special_soundness(params, &stmt, &t1, &t2).ok()
    })?;
    match witness {
        SigmaWitness::Atom(mut z) if z.len() == 1 => Ok(z.remove(0)),
        _ => Err(ExtractError::ExtractionFailed { attempts: budget }),
    }
}

/// Runs a base extractor against fresh adversary instances up to `budget`
/// times and returns the first candidate that is a witness for `x`.
pub fn amplify_extractor<A>(
    params: &GroupParams,
    x: &GroupElement,
    budget: usize,
    mut factory: impl FnMut() -> A,
    mut extractor: impl FnMut(&A) -> Result<Scalar, ExtractError>,
) -> Result<Scalar, ExtractError> {
    for _ in 0..budget {
        let adversary = factory();
        if let Ok(w) = extractor(&adversary) {
            if &params.g_exp(&w) == x {
                return Ok(w);
            }
        }
    }
    Err(ExtractError::ExtractionFailed { attempts: budget })
}
