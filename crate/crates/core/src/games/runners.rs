use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use super::{checked_j_predicate, confirm_witness, run_trials, GameConfig, GameReport, HardDistribution, Tally};
use crate::group::{GroupElement, Scalar};
use crate::money::{Attack, MoneyAuthority};
use crate::nizk::simext::{
    simext_ext, simext_prove, simext_setup, simext_sim, simext_verify, SimExtError, SimExtInstance, SimExtWitness,
    SIMEXT_TAG,
};
use crate::nizk::{ExtractError, DEFAULT_FORK_BUDGET};
use crate::unclonable::{
    clone_extractor_crs, clone_extractor_rom, u_setup, Adversary, BuiltinAdversary, CrsScheme, Protocol, RomScheme,
    UnclonableScheme,
};
use crate::world::Env;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),
}

/// How the `k - 1` input proofs relate to the target instance `x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Every input proves `x`; the adversary must produce one more.
    #[default]
    Repeated,
    /// Inputs prove independent instances; `x` is new to the adversary.
    Fresh,
}

pub(super) fn check_config(cfg: &GameConfig, min_k: usize) -> Result<(), GameError> {
    if cfg.k < min_k {
        return Err(GameError::InvalidConfig(format!("k must be at least {min_k}, got {}", cfg.k)));
    }
    if cfg.trials == 0 {
        return Err(GameError::InvalidConfig("trials must be positive".into()));
    }
    if cfg.n_qubits == 0 {
        return Err(GameError::InvalidConfig("notes need at least one qubit".into()));
    }
    Ok(())
}

pub(super) fn describe(cfg: &GameConfig, extra: serde_json::Value) -> serde_json::Value {
    let mut v = json!({
        "profile": cfg.profile,
        "n_qubits": cfg.n_qubits,
        "k": cfg.k,
        "seed": cfg.seed,
    });
    if let (Some(obj), Some(more)) = (v.as_object_mut(), extra.as_object()) {
        obj.extend(more.clone());
    }
    v
}

/// Exact success probability of a built-in adversary in the repeated-target
/// game, where one exists.
pub fn adversary_bound(adversary: BuiltinAdversary, n_qubits: usize) -> Option<f64> {
    match adversary {
        BuiltinAdversary::Null => Some(0.0),
        BuiltinAdversary::HonestReprover => None,
        BuiltinAdversary::ClassicalCopier => Some(Attack::MeasureResend.success_probability(n_qubits)),
        BuiltinAdversary::FreshForger => Some(Attack::FreshForgery.success_probability(n_qubits)),
    }
}

/// Mints a note, attacks it and presents both outputs under the original
/// serial.
pub fn run_money_unforgeability(attack: Attack, n: usize, trials: u64, seed: u64) -> GameReport {
    let tally = run_trials(trials, seed, |rng| {
        let mut authority = MoneyAuthority::for_game(rng.gen());
        let Ok((handle, serial)) = authority.note_gen(n) else { return Tally::error() };
        match attack.apply(&mut authority, handle) {
            Ok((a, b)) => Tally::success(authority.ver_batch(&[(a, serial), (b, serial)]).iter().all(|&ok| ok)),
            Err(_) => Tally::error(),
        }
    });
    let params = json!({ "attack": attack.name(), "n_qubits": n, "seed": seed });
    GameReport::new("money", params, trials, tally, Some(attack.success_probability(n)))
}

/// One run of the unclonability experiment: honest input proofs, the
/// adversary, joint verification and the J-predicate for target `x`.
/// `None` flags a malformed adversary or a predicate cross-check mismatch.
pub(super) fn play<S: UnclonableScheme>(
    scheme: &S,
    env: &mut Env,
    adversary: &dyn Adversary<S>,
    (x, w): (&GroupElement, &Scalar),
    k: usize,
    target: Target,
    rng: &mut ChaCha20Rng,
) -> Option<bool> {
    let params = scheme.params();
    let mut inputs = Vec::with_capacity(k - 1);
    for _ in 1..k {
        let (xi, wi) = match target {
            Target::Repeated => (x.clone(), w.clone()),
            Target::Fresh => HardDistribution.sample(params, rng),
        };
        inputs.push((xi.clone(), scheme.prove(env, &xi, &wi, rng).ok()?));
    }
    let mut adv_rng = ChaCha20Rng::seed_from_u64(rng.gen());
    let outputs = adversary.run(&mut env.view(), scheme, &inputs, k, &mut adv_rng);
    if outputs.len() != k {
        return None;
    }
    let verdicts = scheme.verify_all(env, &outputs);
    let judged: Vec<_> = outputs.iter().zip(verdicts).map(|((xj, _), ok)| (xj.clone(), ok)).collect();
    let claimed: Vec<_> = inputs.into_iter().map(|(xi, _)| xi).collect();
    checked_j_predicate(x, &claimed, &judged)
}

fn play_protocol(
    protocol: Protocol,
    adversary: BuiltinAdversary,
    cfg: &GameConfig,
    (x, w): (&GroupElement, &Scalar),
    target: Target,
    rng: &mut ChaCha20Rng,
) -> Option<bool> {
    let params = cfg.params();
    let mut env = Env::for_game(rng.gen(), cfg.n_qubits);
    match protocol {
        Protocol::Crs => {
            let (crs, _) = u_setup(params, rng);
            let adv = adversary.build::<CrsScheme>(x, w);
            play(&CrsScheme::new(crs), &mut env, adv.as_ref(), (x, w), cfg.k, target, rng)
        }
        Protocol::Rom => {
            let adv = adversary.build::<RomScheme>(x, w);
            play(&RomScheme { params }, &mut env, adv.as_ref(), (x, w), cfg.k, target, rng)
        }
    }
}

fn outcome(result: Option<bool>) -> Tally {
    result.map_or_else(Tally::error, Tally::success)
}

pub fn run_unclonable_game(
    protocol: Protocol,
    adversary: BuiltinAdversary,
    cfg: &GameConfig,
    target: Target,
) -> Result<GameReport, GameError> {
    check_config(cfg, 2)?;
    let params = cfg.params();
    let tally = run_trials(cfg.trials, cfg.seed, |rng| {
        let (x, w) = HardDistribution.sample(params, rng);
        outcome(play_protocol(protocol, adversary, cfg, (&x, &w), target, rng))
    });
    let bound = match target {
        Target::Repeated => adversary_bound(adversary, cfg.n_qubits),
        Target::Fresh => (adversary != BuiltinAdversary::HonestReprover).then_some(0.0),
    };
    let desc = describe(cfg, json!({ "protocol": protocol, "adversary": adversary.name(), "target": target }));
    Ok(GameReport::new("unclonable", desc, cfg.trials, tally, bound))
}

/// The pairwise experiment: given one honest proof for `x`, output two
/// proofs for `x` that both verify.
pub fn run_cloning_game_def41(
    protocol: Protocol,
    adversary: BuiltinAdversary,
    cfg: &GameConfig,
) -> Result<GameReport, GameError> {
    let cfg = GameConfig { k: 2, ..*cfg };
    check_config(&cfg, 2)?;
    let params = cfg.params();
    fn pair<S: UnclonableScheme>(
        scheme: &S,
        env: &mut Env,
        adversary: BuiltinAdversary,
        x: &GroupElement,
        w: &Scalar,
        rng: &mut ChaCha20Rng,
    ) -> Option<bool> {
        let pi = scheme.prove(env, x, w, rng).ok()?;
        let adv = adversary.build::<S>(x, w);
        let mut adv_rng = ChaCha20Rng::seed_from_u64(rng.gen());
        let out = adv.run(&mut env.view(), scheme, &[(x.clone(), pi)], 2, &mut adv_rng);
        if out.len() != 2 {
            return None;
        }
        let ok = scheme.verify_all(env, &out);
        Some(out.iter().all(|(xj, _)| xj == x) && ok.iter().all(|&b| b))
    }
    let tally = run_trials(cfg.trials, cfg.seed, |rng| {
        let (x, w) = HardDistribution.sample(params, rng);
        let mut env = Env::for_game(rng.gen(), cfg.n_qubits);
        outcome(match protocol {
            Protocol::Crs => {
                let (crs, _) = u_setup(params, rng);
                pair(&CrsScheme::new(crs), &mut env, adversary, &x, &w, rng)
            }
            Protocol::Rom => pair(&RomScheme { params }, &mut env, adversary, &x, &w, rng),
        })
    });
    let desc = describe(&cfg, json!({ "protocol": protocol, "adversary": adversary.name() }));
    Ok(GameReport::new("clone-pairwise", desc, cfg.trials, tally, adversary_bound(adversary, cfg.n_qubits)))
}

/// Pairs each extractor run with a real-game run of the same adversary on
/// the same instance. `successes` counts extracted witnesses (confirmed
/// independently of the sigma algebra); `adversary_successes` counts
/// real-game wins.
pub fn run_extraction_game(
    protocol: Protocol,
    adversary: BuiltinAdversary,
    cfg: &GameConfig,
) -> Result<GameReport, GameError> {
    check_config(cfg, 2)?;
    let params = cfg.params();
    let tally = run_trials(cfg.trials, cfg.seed, |rng| {
        let (x, w) = HardDistribution.sample(params, rng);
        let Some(adv_hit) = play_protocol(protocol, adversary, cfg, (&x, &w), Target::Repeated, rng) else {
            return Tally::error();
        };
        let x_list = vec![x.clone(); cfg.k - 1];
        let candidate = match protocol {
            Protocol::Crs => {
                let adv = adversary.build::<CrsScheme>(&x, &w);
                clone_extractor_crs(params, adv.as_ref(), &x_list, &x, cfg.n_qubits, rng)
            }
            Protocol::Rom => {
                let adv = adversary.build::<RomScheme>(&x, &w);
                clone_extractor_rom(params, adv.as_ref(), &x_list, &x, cfg.n_qubits, DEFAULT_FORK_BUDGET, rng)
            }
        };
        extraction_tally(params, &x, candidate, adv_hit)
    });
    let desc = describe(cfg, json!({ "protocol": protocol, "adversary": adversary.name() }));
    Ok(GameReport::new("extract", desc, cfg.trials, tally, None).with_adversary(tally.adversary_successes))
}

pub(super) fn extraction_tally(
    params: &crate::group::GroupParams,
    x: &GroupElement,
    candidate: Result<Scalar, ExtractError>,
    adv_hit: bool,
) -> Tally {
    let (successes, errors) = match candidate {
        Ok(c) => (confirm_witness(params, x, &c) as u64, 0),
        Err(ExtractError::AdversaryMalformed(_)) => (0, 1),
        Err(_) => (0, 0),
    };
    Tally { successes, adversary_successes: adv_hit as u64, collisions: 0, errors }
}

/// Simulation-extractability: the adversary sees `queries` simulated
/// proofs on instances `Q`, then proves a target `x ∉ Q`. The extractor
/// wins if it decrypts a witness for `x`.
pub fn run_simext_game(cfg: &GameConfig, queries: usize) -> Result<GameReport, GameError> {
    check_config(cfg, 1)?;
    let params = cfg.params();
    let tally = run_trials(cfg.trials, cfg.seed, |rng| {
        let mut env = Env::for_game(rng.gen(), cfg.n_qubits);
        let (crs, td) = simext_setup(params, SIMEXT_TAG, rng);
        let mut queried = Vec::with_capacity(queries);
        let mut collisions = 0;
        for _ in 0..queries {
            let (xq, _) = HardDistribution.sample(params, rng);
            match simext_sim(params, &mut env.oracle, &crs, &td, &SimExtInstance::dlog(xq.clone()), rng) {
                Ok(_) => {}
                Err(SimExtError::Oracle(_)) => collisions += 1,
                Err(_) => return Tally::error(),
            }
            queried.push(xq);
        }
        let (x, w) = loop {
            let (x, w) = HardDistribution.sample(params, rng);
            if !queried.contains(&x) {
                break (x, w);
            }
        };
        let inst = SimExtInstance::dlog(x.clone());
        let Ok(proof) = simext_prove(params, &mut env.oracle, &crs, &inst, &SimExtWitness::Dlog(w), rng) else {
            return Tally::error();
        };
        let adv_hit = simext_verify(params, &mut env.oracle, &crs, &inst, &proof);
        let mut t = extraction_tally(params, &x, simext_ext(params, &td, &proof).map_err(ExtractError::from), adv_hit);
        t.collisions = collisions;
        t
    });
    let desc = describe(cfg, json!({ "queries": queries, "adversary": "honest-prover" }));
    Ok(GameReport::new("simext", desc, cfg.trials, tally, None).with_adversary(tally.adversary_successes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Profile;

    fn cfg(n_qubits: usize, k: usize, trials: u64, seed: u64) -> GameConfig {
        GameConfig { profile: Profile::Fixture, n_qubits, k, trials, seed }
    }

    #[test]
    fn money_game_matches_the_exact_oracle() {
        for attack in [Attack::MeasureResend, Attack::FreshForgery] {
            let r = run_money_unforgeability(attack, 4, 20_000, 1);
            assert!(r.within_sigmas(3.0), "{}", r.to_json_line());
        }
        let id = run_money_unforgeability(Attack::Identity, 8, 2000, 1);
        assert_eq!(id.successes, 0);
    }

    #[test]
    fn reports_are_reproducible() {
        let c = cfg(4, 2, 300, 7);
        let a = run_unclonable_game(Protocol::Rom, BuiltinAdversary::ClassicalCopier, &c, Target::Repeated).unwrap();
        let b = run_unclonable_game(Protocol::Rom, BuiltinAdversary::ClassicalCopier, &c, Target::Repeated).unwrap();
        assert_eq!(a.to_json_line(), b.to_json_line());
    }

    #[test]
    fn honest_reprover_wins_and_null_loses() {
        for protocol in [Protocol::Crs, Protocol::Rom] {
            for target in [Target::Repeated, Target::Fresh] {
                let c = cfg(8, 3, 200, 2);
                let honest = run_unclonable_game(protocol, BuiltinAdversary::HonestReprover, &c, target).unwrap();
                assert_eq!((honest.successes, honest.errors), (200, 0));
                let null = run_unclonable_game(protocol, BuiltinAdversary::Null, &c, target).unwrap();
                assert_eq!((null.successes, null.errors), (0, 0));
            }
        }
    }

    #[test]
    fn copier_tracks_the_money_bound_at_small_n() {
        // With two qubits the attack succeeds often enough to compare
        // two-sided against the exact rate.
        for protocol in [Protocol::Crs, Protocol::Rom] {
            for (adv, attack) in
                [(BuiltinAdversary::ClassicalCopier, Attack::MeasureResend), (BuiltinAdversary::FreshForger, Attack::FreshForgery)]
            {
                let r = run_unclonable_game(protocol, adv, &cfg(2, 2, 4000, 3), Target::Repeated).unwrap();
                assert_eq!(r.bound, Some(attack.success_probability(2)));
                assert!(r.within_sigmas(3.0), "{}", r.to_json_line());
                let pair = run_cloning_game_def41(protocol, adv, &cfg(2, 2, 4000, 4)).unwrap();
                assert!(pair.within_sigmas(3.0), "{}", pair.to_json_line());
            }
        }
    }

    #[test]
    fn fresh_target_defeats_copiers() {
        let r = run_unclonable_game(Protocol::Rom, BuiltinAdversary::ClassicalCopier, &cfg(1, 2, 500, 5), Target::Fresh)
            .unwrap();
        assert!(r.rate < 0.1, "{}", r.to_json_line());
    }

    #[test]
    fn extraction_game_pairs_adversary_and_extractor() {
        for protocol in [Protocol::Crs, Protocol::Rom] {
            let r = run_extraction_game(protocol, BuiltinAdversary::HonestReprover, &cfg(8, 2, 300, 6)).unwrap();
            assert_eq!(r.adversary_successes, Some(300));
            assert!((0.4..=0.6).contains(&r.rate), "{}", r.to_json_line());
            let null = run_extraction_game(protocol, BuiltinAdversary::Null, &cfg(8, 2, 100, 6)).unwrap();
            assert_eq!((null.successes, null.adversary_successes), (0, Some(0)));
        }
    }

    #[test]
    fn simext_game_extracts_from_honest_proofs() {
        let r = run_simext_game(&cfg(8, 2, 200, 7), 5).unwrap();
        assert_eq!((r.successes, r.adversary_successes, r.collisions, r.errors), (200, Some(200), 0, 0));
    }

    #[test]
    fn pairwise_success_implies_extraction() {
        for protocol in [Protocol::Crs, Protocol::Rom] {
            for adv in BuiltinAdversary::ALL {
                let c = cfg(16, 2, 400, 8);
                let pair = run_cloning_game_def41(protocol, adv, &c).unwrap();
                let ext = run_extraction_game(protocol, adv, &c).unwrap();
                if pair.rate > 0.01 {
                    assert!(ext.rate > 0.001, "{} / {}", pair.to_json_line(), ext.to_json_line());
                }
            }
        }
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(run_unclonable_game(Protocol::Crs, BuiltinAdversary::Null, &cfg(8, 1, 10, 0), Target::Repeated).is_err());
        assert!(run_extraction_game(Protocol::Crs, BuiltinAdversary::Null, &cfg(8, 2, 0, 0)).is_err());
    }
}
