use std::path::Path;

use rand::rngs::OsRng;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use unclonable_zk::applications::{issuer_keygen, prove_revocation, sok_sign, sok_verify, ver_revoke, verify_cred};
use unclonable_zk::artifact::ArtifactFile;
use unclonable_zk::games::{
    run_cred_clone_game, run_extraction_game, run_money_unforgeability, run_revocation_game, run_sok_game,
    run_unclonable_game, GameReport, Target,
};
use unclonable_zk::unclonable::{rom_prove, rom_verify, u_prove, u_setup, u_verify};
use unclonable_zk::vectors::{generate, FIXTURE_SEED};
use unclonable_zk::{
    encode_artifact, Credential, Env, GameConfig, GroupParams, Issuer, IssuerSecret, MoneyAuthority, Nym, Oracle,
    RevocationNotice, RevocationProof, SignatureOfKnowledge, UCrs, UnclonableProofCrs, UnclonableProofRom,
};

use crate::files::{
    adopt_note, element_hex, emit, json, load, load_candidate, parse_bundle, parse_element, parse_witness, read_text,
    with_note, write_file, CredentialBundle, IssuerBundle,
};
use crate::{CliError, Cli, Command, CredCommand, GameCommand, Global, Protocol, SokCommand};

struct Ctx {
    g: Global,
    seed: u64,
    rng: ChaCha20Rng,
}

impl Ctx {
    /// A demo world. The oracle is hash-backed so that separate processes
    /// agree on it.
    fn env(&mut self) -> Env {
        Env::new(Oracle::hash_backed(), MoneyAuthority::from_seed(self.rng.gen()), self.g.n_qubits)
    }

    fn params(&self) -> &'static GroupParams {
        self.g.profile.params()
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        emit(self.g.out.as_ref(), text)
    }

    fn game_config(&self) -> GameConfig {
        GameConfig { profile: self.g.profile, n_qubits: self.g.n_qubits, k: self.g.k, trials: self.g.trials, seed: self.seed }
    }
}

pub fn run(cli: Cli) -> Result<bool, CliError> {
    let seed = cli.global.seed.unwrap_or_else(|| OsRng.next_u64());
    let mut ctx = Ctx { g: cli.global, seed, rng: ChaCha20Rng::seed_from_u64(seed) };
    match cli.command {
        Command::Setup { trapdoor_out } => setup(&mut ctx, trapdoor_out.as_deref()),
        Command::Prove { protocol, crs, witness } => prove(&mut ctx, protocol, crs.as_deref(), &witness),
        Command::Verify { protocol, crs, x, proof } => verify(&mut ctx, protocol, crs.as_deref(), &x, &proof),
        Command::Sok(cmd) => sok(&mut ctx, cmd),
        Command::Cred(cmd) => cred(&mut ctx, cmd),
        Command::Game { game, import } => self::game(&ctx, game, import.as_deref()),
        Command::Vectors => {
            ctx.emit(&generate(ctx.g.seed.unwrap_or(FIXTURE_SEED)).to_json())?;
            Ok(true)
        }
    }
}

fn setup(ctx: &mut Ctx, trapdoor_out: Option<&Path>) -> Result<bool, CliError> {
    let (crs, td) = u_setup(ctx.params(), &mut ctx.rng);
    if let Some(path) = trapdoor_out {
        write_file(path, &encode_artifact(&td, ctx.g.profile, None).to_json())?;
    }
    ctx.emit(&encode_artifact(&crs, ctx.g.profile, None).to_json())?;
    Ok(true)
}

fn require<'a>(path: Option<&'a Path>, flag: &str) -> Result<&'a Path, CliError> {
    path.ok_or_else(|| CliError::usage(format!("{flag} is required")))
}

fn prove(ctx: &mut Ctx, protocol: Protocol, crs: Option<&Path>, witness: &str) -> Result<bool, CliError> {
    let mut env = ctx.env();
    let file = match protocol {
        Protocol::Crs => {
            let (crs, crs_file) = load::<UCrs>(require(crs, "--crs")?)?;
            let params = crs_file.profile.params();
            let w = parse_witness(params, witness)?;
            let x = params.g_exp(&w);
            let proof = u_prove(params, &mut env, &crs, &x, &w, &mut ctx.rng).map_err(CliError::usage)?;
            eprintln!("x={}", element_hex(&x));
            with_note(&proof, crs_file.profile, &env.authority, proof.note, &proof.serial)?
        }
        Protocol::Rom => {
            let params = ctx.params();
            let w = parse_witness(params, witness)?;
            let x = params.g_exp(&w);
            let proof = rom_prove(params, &mut env, &x, &w, &mut ctx.rng).map_err(CliError::usage)?;
            eprintln!("x={}", element_hex(&x));
            with_note(&proof, ctx.g.profile, &env.authority, proof.note, &proof.serial)?
        }
    };
    ctx.emit(&file.to_json())?;
    Ok(true)
}

fn same_profile(a: &ArtifactFile, b: &ArtifactFile) -> Result<(), CliError> {
    if a.profile == b.profile {
        Ok(())
    } else {
        Err(CliError::reject(format!("profile mismatch: {} vs {}", a.profile, b.profile)))
    }
}

fn verify(ctx: &mut Ctx, protocol: Protocol, crs: Option<&Path>, x: &str, proof: &Path) -> Result<bool, CliError> {
    let mut env = ctx.env();
    match protocol {
        Protocol::Crs => {
            let (crs, crs_file) = load::<UCrs>(require(crs, "--crs")?)?;
            let (mut pi, file) = load_candidate::<UnclonableProofCrs>(proof)?;
            same_profile(&crs_file, &file)?;
            let params = file.profile.params();
            let x = parse_element(params, x)?;
            pi.note = adopt_note(&file, &mut env.authority)?;
            Ok(u_verify(params, &mut env, &crs, &x, &pi))
        }
        Protocol::Rom => {
            let (mut pi, file) = load_candidate::<UnclonableProofRom>(proof)?;
            let params = file.profile.params();
            let x = parse_element(params, x)?;
            pi.note = adopt_note(&file, &mut env.authority)?;
            Ok(rom_verify(params, &mut env, &x, &pi))
        }
    }
}

fn sok(ctx: &mut Ctx, cmd: SokCommand) -> Result<bool, CliError> {
    let mut env = ctx.env();
    match cmd {
        SokCommand::Sign { crs, witness, message } => {
            let (crs, crs_file) = load::<UCrs>(&crs)?;
            let params = crs_file.profile.params();
            let w = parse_witness(params, &witness)?;
            let x = params.g_exp(&w);
            let sig = sok_sign(params, &mut env, &crs, &x, &w, message.as_bytes(), &mut ctx.rng).map_err(CliError::usage)?;
            eprintln!("x={}", element_hex(&x));
            let file = with_note(&sig, crs_file.profile, &env.authority, sig.sigma.note, &sig.sigma.serial)?;
            ctx.emit(&file.to_json())?;
            Ok(true)
        }
        SokCommand::Verify { crs, x, message, sig } => {
            let (crs, crs_file) = load::<UCrs>(&crs)?;
            let (mut s, file) = load_candidate::<SignatureOfKnowledge>(&sig)?;
            same_profile(&crs_file, &file)?;
            let params = file.profile.params();
            let x = parse_element(params, &x)?;
            s.sigma.note = adopt_note(&file, &mut env.authority)?;
            Ok(sok_verify(params, &mut env, &crs, &x, message.as_bytes(), &s))
        }
    }
}

fn load_issuer(path: &Path) -> Result<(Issuer, IssuerBundle), CliError> {
    let bundle: IssuerBundle = parse_bundle(&read_text(path)?, "issuer file").map_err(CliError::usage)?;
    let nym: Nym = unclonable_zk::decode_artifact(&bundle.nym).map_err(CliError::usage)?;
    let sk: IssuerSecret = unclonable_zk::decode_artifact(&bundle.secret).map_err(CliError::usage)?;
    let issuer = Issuer { nym, sk, accesses: bundle.accesses.iter().cloned().collect() };
    Ok((issuer, bundle))
}

fn cred(ctx: &mut Ctx, cmd: CredCommand) -> Result<bool, CliError> {
    let mut env = ctx.env();
    match cmd {
        CredCommand::Issue { access, issuer, issuer_out } => {
            let (issuer, profile) = match issuer {
                Some(path) => {
                    let (issuer, bundle) = load_issuer(&path)?;
                    (issuer, bundle.nym.profile)
                }
                None => (issuer_keygen(ctx.params(), [access.clone()], &mut ctx.rng), ctx.g.profile),
            };
            let params = profile.params();
            let cred = issuer.issue(params, &mut env, &access, &mut ctx.rng).map_err(CliError::usage)?;
            if let Some(path) = issuer_out {
                let bundle = IssuerBundle {
                    nym: encode_artifact(&issuer.nym, profile, None),
                    secret: encode_artifact(&issuer.sk, profile, None),
                    accesses: issuer.accesses.iter().cloned().collect(),
                };
                write_file(&path, &json(&bundle))?;
            }
            let note = &cred.sigma.sigma;
            let bundle = CredentialBundle {
                nym: encode_artifact(&issuer.nym, profile, None),
                access,
                note_ref: hex::encode(note.serial.0),
                sigma: with_note(&cred, profile, &env.authority, note.note, &note.serial)?,
            };
            ctx.emit(&json(&bundle))?;
            Ok(true)
        }
        CredCommand::Verify { cred, issuer } => {
            let bundle: CredentialBundle = parse_bundle(&read_text(&cred)?, "credential").map_err(CliError::reject)?;
            let nym: Nym = match issuer {
                Some(path) => load_issuer(&path)?.0.nym,
                None => unclonable_zk::decode_artifact(&bundle.nym).map_err(CliError::reject)?,
            };
            let mut c: Credential = unclonable_zk::decode_artifact(&bundle.sigma).map_err(CliError::reject)?;
            c.sigma.sigma.note = adopt_note(&bundle.sigma, &mut env.authority)?;
            Ok(verify_cred(bundle.sigma.profile.params(), &mut env, &nym, &bundle.access, &c))
        }
        CredCommand::Revoke { issuer, access } => {
            let (issuer, bundle) = load_issuer(&issuer)?;
            if !issuer.accesses.contains(&access) {
                return Err(CliError::usage(format!("issuer does not grant `{access}`")));
            }
            ctx.emit(&encode_artifact(&issuer.revoke(&access), bundle.nym.profile, None).to_json())?;
            Ok(true)
        }
        CredCommand::ProveRevocation { cred, notice } => {
            let bundle: CredentialBundle = parse_bundle(&read_text(&cred)?, "credential").map_err(CliError::usage)?;
            let (notice, _) = load::<RevocationNotice>(&notice)?;
            if notice.access != bundle.access {
                return Err(CliError::usage(format!("notice revokes `{}`, credential grants `{}`", notice.access, bundle.access)));
            }
            let nym: Nym = unclonable_zk::decode_artifact(&bundle.nym).map_err(CliError::usage)?;
            let c: Credential = unclonable_zk::decode_artifact(&bundle.sigma).map_err(CliError::usage)?;
            let proof = prove_revocation(&nym, &notice, c);
            let file = encode_artifact(&proof, bundle.sigma.profile, bundle.sigma.sim_only_note_dump.clone());
            ctx.emit(&file.to_json())?;
            Ok(true)
        }
        CredCommand::VerifyRevocation { issuer, notice, proof } => {
            let (issuer, _) = load_issuer(&issuer)?;
            let (notice, _) = load::<RevocationNotice>(&notice)?;
            let (mut p, file) = load_candidate::<RevocationProof>(&proof)?;
            p.cred.sigma.sigma.note = adopt_note(&file, &mut env.authority)?;
            let params = file.profile.params();
            Ok(ver_revoke(params, &mut env, &issuer.nym, &issuer.sk, &notice.access, &notice, &p))
        }
    }
}

fn game(ctx: &Ctx, cmd: GameCommand, import: Option<&Path>) -> Result<bool, CliError> {
    if let Some(path) = import {
        let file = ArtifactFile::from_json(&read_text(path)?).map_err(CliError::usage)?;
        let dump = file.sim_only_note_dump.ok_or_else(|| CliError::usage("artifact carries no note"))?;
        let mut env = Env::for_game(ctx.seed, ctx.g.n_qubits);
        return match dump.import(&mut env.authority) {
            Err(e) => Err(CliError::usage(format!("game authorities refuse serialized notes: {e}"))),
            Ok(_) => Err(CliError::usage("game authority accepted a serialized note")),
        };
    }
    let cfg = ctx.game_config();
    let reports: Vec<GameReport> = match cmd {
        GameCommand::Money { attack } => vec![run_money_unforgeability(attack, cfg.n_qubits, cfg.trials, cfg.seed)],
        GameCommand::Clone { protocol, adversary } => {
            vec![run_unclonable_game(protocol, adversary, &cfg, Target::Repeated).map_err(CliError::usage)?]
        }
        GameCommand::Extract { protocol, adversary } => {
            vec![run_extraction_game(protocol, adversary, &cfg).map_err(CliError::usage)?]
        }
        GameCommand::Sok { adversary } => vec![run_sok_game(adversary, &cfg).map_err(CliError::usage)?],
        GameCommand::Revocation { adversary } => vec![
            run_revocation_game(&cfg, adversary).map_err(CliError::usage)?,
            run_cred_clone_game(&cfg, adversary).map_err(CliError::usage)?,
        ],
    };
    let text: String = reports.iter().map(|r| r.to_json_line() + "\n").collect();
    ctx.emit(&text)?;
    Ok(true)
}
