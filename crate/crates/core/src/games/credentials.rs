use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde_json::json;

use super::runners::{check_config, describe, extraction_tally, play, GameError, Target};
use super::{run_trials, GameConfig, GameReport, HardDistribution, Tally};
use crate::applications::credentials::{issuer_keygen, prove_revocation, verify_cred, Credential};
use crate::applications::sok::{message_label, sok_scheme, sok_setup, SOK_TAG};
use crate::money::Attack;
use crate::unclonable::extract::clone_extractor_crs_with;
use crate::unclonable::{BuiltinAdversary, CrsScheme, UnclonableProofCrs};
use crate::world::{Env, World};

const GAME_ACCESS: &str = "game-access";
const GAME_MESSAGE: &[u8] = b"game-message";

/// Credential holders that try to keep a credential they hand back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CredentialAdversary {
    /// Returns the credential twice on its one note.
    Honest,
    /// Splits the credential's note with a money attack and returns one
    /// copy on each half.
    SurrenderAndCopy(Attack),
}

impl CredentialAdversary {
    pub const ALL: [CredentialAdversary; 3] = [
        CredentialAdversary::Honest,
        CredentialAdversary::SurrenderAndCopy(Attack::MeasureResend),
        CredentialAdversary::SurrenderAndCopy(Attack::FreshForgery),
    ];

    pub fn name(self) -> &'static str {
        match self {
            CredentialAdversary::Honest => "honest",
            CredentialAdversary::SurrenderAndCopy(Attack::MeasureResend) => "surrender-and-copy",
            CredentialAdversary::SurrenderAndCopy(Attack::FreshForgery) => "surrender-and-forge",
            CredentialAdversary::SurrenderAndCopy(Attack::Identity) => "surrender-and-keep",
        }
    }

    pub fn bound(self, n_qubits: usize) -> f64 {
        match self {
            CredentialAdversary::Honest => 0.0,
            CredentialAdversary::SurrenderAndCopy(a) => a.success_probability(n_qubits),
        }
    }

    pub fn run(self, world: &mut dyn World, cred: Credential) -> (Credential, Credential) {
        let with_note = |note| Credential {
            sigma: crate::applications::sok::SignatureOfKnowledge {
                sigma: UnclonableProofCrs { note, ..cred.sigma.sigma.clone() },
            },
        };
        match self {
            CredentialAdversary::Honest => (cred.clone(), cred),
            CredentialAdversary::SurrenderAndCopy(attack) => match attack.apply(world.authority(), cred.sigma.sigma.note) {
                Ok((a, b)) => (with_note(a), with_note(b)),
                Err(_) => (cred.clone(), cred),
            },
        }
    }
}

impl fmt::Display for CredentialAdversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CredentialAdversary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CredentialAdversary::ALL
            .into_iter()
            .chain([CredentialAdversary::SurrenderAndCopy(Attack::Identity)])
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown credential adversary `{s}`"))
    }
}

fn note_of(c: &Credential) -> crate::money::NoteHandle {
    c.sigma.sigma.note
}

/// Revocation: the adversary returns a revocation proof and a credential
/// it kept. It wins if the issuer accepts both. They are checked together,
/// so handing back and keeping the same note is rejected.
pub fn run_revocation_game(cfg: &GameConfig, adversary: CredentialAdversary) -> Result<GameReport, GameError> {
    credential_game("revocation", cfg, adversary, |env, issuer, (surrendered, kept)| {
        let params = cfg.params();
        let notice = issuer.revoke(GAME_ACCESS);
        let proof = prove_revocation(&issuer.nym, &notice, surrendered);
        note_of(&proof.cred) != note_of(&kept)
            && issuer.ver_revoke(params, env, GAME_ACCESS, &notice, &proof)
            && verify_cred(params, env, &issuer.nym, GAME_ACCESS, &kept)
    })
}

/// Unclonability: from one credential the adversary outputs two, and wins
/// if both verify on distinct notes.
pub fn run_cred_clone_game(cfg: &GameConfig, adversary: CredentialAdversary) -> Result<GameReport, GameError> {
    credential_game("cred-clone", cfg, adversary, |env, issuer, (c0, c1)| {
        let params = cfg.params();
        note_of(&c0) != note_of(&c1)
            && verify_cred(params, env, &issuer.nym, GAME_ACCESS, &c0)
            && verify_cred(params, env, &issuer.nym, GAME_ACCESS, &c1)
    })
}

fn credential_game<F>(game: &str, cfg: &GameConfig, adversary: CredentialAdversary, judge: F) -> Result<GameReport, GameError>
where
    F: Fn(&mut Env, &crate::applications::credentials::Issuer, (Credential, Credential)) -> bool + Sync,
{
    check_config(cfg, 1)?;
    let params = cfg.params();
    let tally = run_trials(cfg.trials, cfg.seed, |rng| {
        let mut env = Env::for_game(rng.gen(), cfg.n_qubits);
        let issuer = issuer_keygen(params, [GAME_ACCESS], rng);
        let Ok(cred) = issuer.issue(params, &mut env, GAME_ACCESS, rng) else { return Tally::error() };
        let pair = adversary.run(&mut env.view(), cred);
        Tally::success(judge(&mut env, &issuer, pair))
    });
    let desc = describe(cfg, json!({ "adversary": adversary.name() }));
    Ok(GameReport::new(game, desc, cfg.trials, tally, Some(adversary.bound(cfg.n_qubits))))
}

/// Unclonable extraction for signatures of knowledge on a fixed message:
/// the CRS extraction game run on the message-labelled scheme.
pub fn run_sok_game(adversary: BuiltinAdversary, cfg: &GameConfig) -> Result<GameReport, GameError> {
    check_config(cfg, 2)?;
    let params = cfg.params();
    let label = message_label(GAME_MESSAGE);
    let tally = run_trials(cfg.trials, cfg.seed, |rng| {
        let (x, w) = HardDistribution.sample(params, rng);
        let mut env = Env::for_game(rng.gen(), cfg.n_qubits);
        let (crs, _) = sok_setup(params, rng);
        let adv = adversary.build::<CrsScheme>(&x, &w);
        let scheme = sok_scheme(&crs, GAME_MESSAGE);
        let Some(adv_hit) = play(&scheme, &mut env, adv.as_ref(), (&x, &w), cfg.k, Target::Repeated, rng) else {
            return Tally::error();
        };
        let x_list = vec![x.clone(); cfg.k - 1];
        let candidate = clone_extractor_crs_with(params, SOK_TAG, &label, adv.as_ref(), &x_list, &x, cfg.n_qubits, rng);
        extraction_tally(params, &x, candidate, adv_hit)
    });
    let desc = describe(cfg, json!({ "adversary": adversary.name(), "message": String::from_utf8_lossy(GAME_MESSAGE) }));
    Ok(GameReport::new("sok", desc, cfg.trials, tally, None).with_adversary(tally.adversary_successes))
}
