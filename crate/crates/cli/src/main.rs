//! `unzk`: demos of the unclonable proof lifecycle, security-game runners
//! and test-vector generation.
//!
//! Exit codes: 0 success or accept, 1 reject, 2 usage error.

mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use unclonable_zk::games::CredentialAdversary;
use unclonable_zk::{Attack, BuiltinAdversary, Profile, Protocol};

#[derive(Parser, Debug)]
#[command(name = "unzk", version, about = "Unclonable non-interactive zero-knowledge proofs over simulated quantum money")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Master seed; without it (and without UNZK_SEED) OS entropy is used.
    #[arg(long, global = true, env = "UNZK_SEED")]
    pub seed: Option<u64>,
    /// Group parameters for newly generated keys, proofs and games.
    #[arg(long, global = true, default_value = "fixture")]
    pub profile: Profile,
    /// Qubits per banknote.
    #[arg(long, visible_alias = "n", global = true, default_value_t = 16)]
    pub n_qubits: usize,
    /// Outputs demanded from a cloning adversary.
    #[arg(long, global = true, default_value_t = 2)]
    pub k: usize,
    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a common reference string.
    Setup {
        /// Also write the extraction trapdoor.
        #[arg(long)]
        trapdoor_out: Option<PathBuf>,
    },
    /// Prove knowledge of `w` for `x = g^w`; prints `x` in hex to stderr.
    Prove {
        #[arg(long, default_value = "crs")]
        protocol: Protocol,
        /// CRS file, required for the crs protocol.
        #[arg(long)]
        crs: Option<PathBuf>,
        /// Witness as a decimal integer below the group order.
        #[arg(long)]
        witness: String,
    },
    /// Verify a proof; `-` reads it from stdin.
    Verify {
        #[arg(long, default_value = "crs")]
        protocol: Protocol,
        #[arg(long)]
        crs: Option<PathBuf>,
        /// Instance `x` in hex.
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "-")]
        proof: PathBuf,
    },
    /// Signatures of knowledge.
    #[command(subcommand)]
    Sok(SokCommand),
    /// Revocable anonymous credentials.
    #[command(subcommand)]
    Cred(CredCommand),
    /// Run a security game and print a JSON-lines report.
    Game {
        #[command(subcommand)]
        game: GameCommand,
        /// A serialized artifact whose note the game should adopt. Game
        /// authorities never accept one; this exists to demonstrate that.
        #[arg(long, global = true)]
        import: Option<PathBuf>,
    },
    /// Emit the fixture test vectors.
    Vectors,
}

#[derive(Subcommand, Debug)]
pub enum SokCommand {
    Sign {
        #[arg(long)]
        crs: PathBuf,
        #[arg(long)]
        witness: String,
        #[arg(long)]
        message: String,
    },
    Verify {
        #[arg(long)]
        crs: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        message: String,
        #[arg(long, default_value = "-")]
        sig: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CredCommand {
    /// Issue a credential, creating a new issuer unless `--issuer` is given.
    Issue {
        #[arg(long)]
        access: String,
        #[arg(long)]
        issuer: Option<PathBuf>,
        /// Where to write a newly created issuer (public and secret keys).
        #[arg(long)]
        issuer_out: Option<PathBuf>,
    },
    Verify {
        #[arg(long, default_value = "-")]
        cred: PathBuf,
        /// Check against this issuer instead of the pseudonym in the credential.
        #[arg(long)]
        issuer: Option<PathBuf>,
    },
    /// Publish a revocation notice for an access.
    Revoke {
        #[arg(long)]
        issuer: PathBuf,
        #[arg(long)]
        access: String,
    },
    /// Surrender a credential in answer to a notice.
    ProveRevocation {
        #[arg(long)]
        cred: PathBuf,
        #[arg(long)]
        notice: PathBuf,
    },
    VerifyRevocation {
        #[arg(long)]
        issuer: PathBuf,
        #[arg(long)]
        notice: PathBuf,
        #[arg(long, default_value = "-")]
        proof: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum GameCommand {
    /// Wiesner-money counterfeiting.
    Money {
        #[arg(long, default_value = "measure-resend")]
        attack: Attack,
    },
    /// (k-1)-to-k cloning of unclonable proofs.
    Clone {
        #[arg(long, default_value = "crs")]
        protocol: Protocol,
        #[arg(long, default_value = "classical-copier")]
        adversary: BuiltinAdversary,
    },
    /// Cloning extractor paired with the real game.
    Extract {
        #[arg(long, default_value = "crs")]
        protocol: Protocol,
        #[arg(long, default_value = "honest-reprover")]
        adversary: BuiltinAdversary,
    },
    /// Extraction for signatures of knowledge.
    Sok {
        #[arg(long, default_value = "honest-reprover")]
        adversary: BuiltinAdversary,
    },
    /// Revocation and credential-cloning games; one report line each.
    Revocation {
        #[arg(long, default_value = "surrender-and-copy")]
        adversary: CredentialAdversary,
    },
}

/// Failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Reject(String),
}

impl CliError {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn reject(e: impl std::fmt::Display) -> Self {
        CliError::Reject(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("reject");
            ExitCode::from(1)
        }
        Err(CliError::Reject(msg)) => {
            eprintln!("reject: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
