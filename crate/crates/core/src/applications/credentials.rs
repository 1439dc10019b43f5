//! Revocable anonymous credentials built from unclonable signatures of
//! knowledge. A credential is a signature on the access string; revoking
//! it means surrendering that signature, whose note cannot be kept.

use std::collections::BTreeSet;

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::applications::sok::{sok_setup, sok_sign, sok_verify, SignatureOfKnowledge};
use crate::encoding::{tags, Bytes, Canonical, EncodingError, Reader};
use crate::games::HardDistribution;
use crate::group::{GroupElement, GroupParams, Scalar};
use crate::unclonable::{UCrs, UTrapdoor, UnclonableError};
use crate::world::World;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CredentialError {
    #[error("access `{0}` is not in the issuer's access set")]
    UnknownAccess(String),
    #[error(transparent)]
    Unclonable(#[from] UnclonableError),
}

/// The issuer's public pseudonym `(crs, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nym {
    pub crs: UCrs,
    pub x: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IssuerSecret {
    pub td: UTrapdoor,
    pub w: Scalar,
}

#[derive(Clone, Debug)]
pub struct Issuer {
    pub nym: Nym,
    pub sk: IssuerSecret,
    pub accesses: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Credential {
    pub sigma: SignatureOfKnowledge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevocationNotice {
    pub access: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevocationProof {
    pub cred: Credential,
}

pub fn issuer_keygen<R, I>(params: &GroupParams, accesses: I, rng: &mut R) -> Issuer
where
    R: RngCore + CryptoRng + ?Sized,
    I: IntoIterator,
    I::Item: Into<String>,
{
    let (crs, td) = sok_setup(params, rng);
    let (x, w) = HardDistribution.sample(params, rng);
    Issuer {
        nym: Nym { crs, x },
        sk: IssuerSecret { td, w },
        accesses: accesses.into_iter().map(Into::into).collect(),
    }
}

impl Issuer {
    pub fn issue<R: RngCore + CryptoRng + ?Sized>(
        &self,
        params: &GroupParams,
        world: &mut dyn World,
        access: &str,
        rng: &mut R,
    ) -> Result<Credential, CredentialError> {
        if !self.accesses.contains(access) {
            return Err(CredentialError::UnknownAccess(access.to_owned()));
        }
        let sigma = sok_sign(params, world, &self.nym.crs, &self.nym.x, &self.sk.w, access.as_bytes(), rng)?;
        Ok(Credential { sigma })
    }

    pub fn revoke(&self, access: &str) -> RevocationNotice {
        revoke(&self.nym, &self.sk, access)
    }

    pub fn ver_revoke(
        &self,
        params: &GroupParams,
        world: &mut dyn World,
        access: &str,
        notice: &RevocationNotice,
        proof: &RevocationProof,
    ) -> bool {
        ver_revoke(params, world, &self.nym, &self.sk, access, notice, proof)
    }
}

pub fn verify_cred(params: &GroupParams, world: &mut dyn World, nym: &Nym, access: &str, cred: &Credential) -> bool {
    sok_verify(params, world, &nym.crs, &nym.x, access.as_bytes(), &cred.sigma)
}

pub fn revoke(_nym: &Nym, _sk: &IssuerSecret, access: &str) -> RevocationNotice {
    RevocationNotice { access: access.to_owned() }
}

/// Surrenders the credential itself. Taking it by value is the point: the
/// holder no longer has it afterwards.
pub fn prove_revocation(_nym: &Nym, _notice: &RevocationNotice, cred: Credential) -> RevocationProof {
    RevocationProof { cred }
}

pub fn ver_revoke(
    params: &GroupParams,
    world: &mut dyn World,
    nym: &Nym,
    _sk: &IssuerSecret,
    access: &str,
    notice: &RevocationNotice,
    proof: &RevocationProof,
) -> bool {
    notice.access == access && verify_cred(params, world, nym, access, &proof.cred)
}

fn decode_string(r: &mut Reader<'_>, params: &GroupParams) -> Result<String, EncodingError> {
    String::from_utf8(Bytes::decode(r, params)?.0).map_err(|_| EncodingError::InvalidUtf8)
}

impl Canonical for Nym {
    const TAG: u8 = tags::NYM;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.crs.encode(out);
        self.x.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(Nym { crs: UCrs::decode(r, params)?, x: GroupElement::decode(r, params)? })
    }
}

impl Canonical for IssuerSecret {
    const TAG: u8 = tags::ISSUER_SECRET;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.td.encode(out);
        self.w.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(IssuerSecret { td: UTrapdoor::decode(r, params)?, w: Scalar::decode(r, params)? })
    }
}

impl Canonical for Credential {
    const TAG: u8 = tags::CREDENTIAL;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.sigma.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(Credential { sigma: SignatureOfKnowledge::decode(r, params)? })
    }
}

impl Canonical for RevocationNotice {
    const TAG: u8 = tags::REVOCATION_NOTICE;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        Bytes(self.access.as_bytes().to_vec()).encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(RevocationNotice { access: decode_string(r, params)? })
    }
}

impl Canonical for RevocationProof {
    const TAG: u8 = tags::REVOCATION_PROOF;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.cred.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(RevocationProof { cred: Credential::decode(r, params)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::Env;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn fx() -> &'static GroupParams {
        GroupParams::fixture()
    }

    fn issuer(seed: u64) -> (Env, ChaCha20Rng, Issuer) {
        let env = Env::seeded(seed);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let issuer = issuer_keygen(fx(), ["read", "write"], &mut rng);
        (env, rng, issuer)
    }

    #[test]
    fn keys_satisfy_the_relation() {
        let (_, _, i) = issuer(1);
        assert_eq!(fx().g_exp(&i.sk.w), i.nym.x);
        assert!(!i.sk.w.is_zero());
    }

    #[test]
    fn issued_credentials_verify_for_their_access_only() {
        let (mut env, mut rng, i) = issuer(2);
        let cred = i.issue(fx(), &mut env, "read", &mut rng).unwrap();
        assert!(verify_cred(fx(), &mut env, &i.nym, "read", &cred));
        let (_, _, other) = issuer(3);
        assert!(!verify_cred(fx(), &mut env, &other.nym, "read", &cred));
    }

    #[test]
    fn unknown_access_is_refused() {
        let (mut env, mut rng, i) = issuer(4);
        assert_eq!(
            i.issue(fx(), &mut env, "admin", &mut rng).unwrap_err(),
            CredentialError::UnknownAccess("admin".into())
        );
    }

    #[test]
    fn revocation_round_trip() {
        let (mut env, mut rng, i) = issuer(5);
        for _ in 0..100 {
            let cred = i.issue(fx(), &mut env, "write", &mut rng).unwrap();
            let notice = i.revoke("write");
            assert_eq!(notice.access, "write");
            let proof = prove_revocation(&i.nym, &notice, cred);
            assert!(i.ver_revoke(fx(), &mut env, "write", &notice, &proof));
            assert!(!i.ver_revoke(fx(), &mut env, "write", &i.revoke("read"), &proof));
        }
    }

    #[test]
    fn ver_revoke_agrees_with_verify_cred() {
        let (mut env, mut rng, i) = issuer(6);
        let cred = i.issue(fx(), &mut env, "read", &mut rng).unwrap();
        let notice = i.revoke("read");
        for access in ["read", "write"] {
            let proof = prove_revocation(&i.nym, &notice, cred.clone());
            let a = ver_revoke(fx(), &mut env, &i.nym, &i.sk, access, &RevocationNotice { access: access.into() }, &proof);
            assert_eq!(a, verify_cred(fx(), &mut env, &i.nym, access, &cred));
        }
    }

    #[test]
    fn encoding_roundtrip() {
        let (mut env, mut rng, i) = issuer(7);
        let cred = i.issue(fx(), &mut env, "read", &mut rng).unwrap();
        let notice = i.revoke("read");
        let proof = prove_revocation(&i.nym, &notice, cred.clone());
        assert_eq!(Nym::from_canonical_bytes(&i.nym.to_canonical_bytes(), fx()).unwrap(), i.nym);
        assert_eq!(IssuerSecret::from_canonical_bytes(&i.sk.to_canonical_bytes(), fx()).unwrap(), i.sk);
        assert_eq!(Credential::from_canonical_bytes(&cred.to_canonical_bytes(), fx()).unwrap(), cred);
        assert_eq!(RevocationNotice::from_canonical_bytes(&notice.to_canonical_bytes(), fx()).unwrap(), notice);
        assert_eq!(RevocationProof::from_canonical_bytes(&proof.to_canonical_bytes(), fx()).unwrap(), proof);
        let mut bad = RevocationNotice { access: String::new() }.to_canonical_bytes();
        bad.truncate(5);
        bad.extend_from_slice(&[tags::BYTES, 0, 0, 0, 1, 0xff]);
        bad[4] = 6;
        assert_eq!(RevocationNotice::from_canonical_bytes(&bad, fx()), Err(EncodingError::InvalidUtf8));
    }
}
