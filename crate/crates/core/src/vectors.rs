//! Deterministic fixture-group test vectors.
//!
//! Everything is derived from one seed with a hash-backed oracle, so the
//! proofs can be rechecked by an independent implementation that only
//! knows SHA-256 and the canonical encoding.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::applications::credentials::{issuer_keygen, prove_revocation};
use crate::applications::sok::{sok_setup, sok_sign};
use crate::artifact::{encode_artifact, ArtifactFile, ArtifactKind};
use crate::encoding::Canonical;
use crate::group::{commit, enc_bit, enc_witness, hash_to_scalar, pke_keygen, GroupParams, Profile};
use crate::money::MoneyAuthority;
use crate::nizk::fs::fs_prove;
use crate::nizk::simext::{simext_prove, simext_setup, SimExtInstance, SimExtWitness, SIMEXT_TAG};
use crate::oracle::{Oracle, RandomOracle};
use crate::sigma::{SigmaStatement, SigmaWitness};
use crate::unclonable::{rom_prove, u_prove, u_setup};
use crate::world::Env;

pub const FIXTURE_SEED: u64 = 0x5eed;
pub const VECTOR_QUBITS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HexVector {
    pub name: String,
    pub hex: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedArtifact {
    pub name: String,
    pub artifact: ArtifactFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestVectors {
    pub seed: u64,
    pub profile: Profile,
    pub primitives: Vec<HexVector>,
    pub artifacts: Vec<NamedArtifact>,
}

impl TestVectors {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("vectors serialize");
        s.push('\n');
        s
    }
}

struct Builder {
    primitives: Vec<HexVector>,
    artifacts: Vec<NamedArtifact>,
}

impl Builder {
    fn hex(&mut self, name: &str, bytes: impl AsRef<[u8]>) {
        self.primitives.push(HexVector { name: name.into(), hex: hex::encode(bytes) });
    }

    fn artifact<T: ArtifactKind>(&mut self, name: &str, value: &T) {
        self.artifacts.push(NamedArtifact { name: name.into(), artifact: encode_artifact(value, Profile::Fixture, None) });
    }
}

/// Regenerates the full vector set for `seed`.
pub fn generate(seed: u64) -> TestVectors {
    let p = GroupParams::fixture();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut env = Env::new(Oracle::hash_backed(), MoneyAuthority::from_seed(seed), VECTOR_QUBITS);
    let mut b = Builder { primitives: Vec::new(), artifacts: Vec::new() };

    b.hex("commit(m=3,r=7)", commit(p, &p.scalar_from_u64(3), &p.scalar_from_u64(7)).to_canonical_bytes());
    b.hex("hash_to_scalar(\"abc\")", hash_to_scalar(p, b"abc").to_canonical_bytes());
    b.hex("oracle(\"abc\")", env.oracle.query(b"abc"));
    let kp = pke_keygen(p, &mut rng);
    b.hex("pke.pk", kp.pk.to_canonical_bytes());
    let ct = enc_bit(p, &kp.pk, 1, &p.scalar_from_u64(4)).expect("bit");
    b.hex("enc_bit(1,u=4)", ct.to_canonical_bytes());
    let (wct, _) = enc_witness(p, &kp.pk, &p.scalar_from_u64(13), p.scalar_bits(), &mut rng).expect("width");
    b.hex("enc_witness(13)", wct.to_canonical_bytes());

    let w = p.scalar_from_u64(5);
    let x = p.g_exp(&w);
    let stmt = SigmaStatement::dlog(p, &x);
    let fs = fs_prove(p, &mut env.oracle, "FS/VECTOR/v1", b"", &stmt, &SigmaWitness::Atom(vec![w.clone()]), &mut rng)
        .expect("witness");
    b.artifact("fs_prove(dlog x=g^5)", &fs);

    let (scrs, _) = simext_setup(p, SIMEXT_TAG, &mut rng);
    let sproof = simext_prove(p, &mut env.oracle, &scrs, &SimExtInstance::dlog(x.clone()), &SimExtWitness::Dlog(w.clone()), &mut rng)
        .expect("witness");
    b.artifact("simext.crs", &scrs);
    b.artifact("simext_prove(x=g^5)", &sproof);

    let (ucrs, utd) = u_setup(p, &mut rng);
    b.artifact("unclonable.crs", &ucrs);
    b.artifact("unclonable.trapdoor", &utd);
    b.artifact("u_prove(x=g^5)", &u_prove(p, &mut env, &ucrs, &x, &w, &mut rng).expect("witness"));
    b.artifact("rom_prove(x=g^5)", &rom_prove(p, &mut env, &x, &w, &mut rng).expect("witness"));

    let (sok_crs, _) = sok_setup(p, &mut rng);
    b.artifact("sok.crs", &sok_crs);
    b.artifact("sok_sign(x=g^5,m=\"hello\")", &sok_sign(p, &mut env, &sok_crs, &x, &w, b"hello", &mut rng).expect("witness"));

    let issuer = issuer_keygen(p, ["read"], &mut rng);
    b.artifact("issuer.nym", &issuer.nym);
    b.artifact("issuer.sk", &issuer.sk);
    let cred = issuer.issue(p, &mut env, "read", &mut rng).expect("access");
    b.artifact("credential(read)", &cred);
    let notice = issuer.revoke("read");
    b.artifact("revocation_notice(read)", &notice);
    b.artifact("revocation_proof(read)", &prove_revocation(&issuer.nym, &notice, cred));

    TestVectors { seed, profile: Profile::Fixture, primitives: b.primitives, artifacts: b.artifacts }
}
