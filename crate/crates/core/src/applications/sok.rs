//! Unclonable signatures of knowledge: an unclonable CRS-model proof for
//! `x` whose statement encoding carries the message.

use rand::{CryptoRng, RngCore};

use crate::encoding::{tags, Canonical, EncodingError, Reader};
use crate::group::{GroupElement, GroupError, GroupParams, Scalar};
use crate::unclonable::crs::{u_ext, u_prove_labeled, u_setup_tagged, u_sim_labeled, u_verify_labeled};
use crate::unclonable::{CrsScheme, UCrs, UTrapdoor, UnclonableError, UnclonableProofCrs};
use crate::world::{Env, World};

pub const SOK_TAG: &str = "SOK/SIMEXT/v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureOfKnowledge {
    pub sigma: UnclonableProofCrs,
}

/// The statement label for message `m`: `"SOK/" ‖ m`.
pub fn message_label(m: &[u8]) -> Vec<u8> {
    let mut out = b"SOK/".to_vec();
    out.extend_from_slice(m);
    out
}

/// The unclonable scheme a signature on `m` lives in.
pub fn sok_scheme(crs: &UCrs, m: &[u8]) -> CrsScheme {
    CrsScheme { crs: crs.clone(), label: message_label(m) }
}

pub fn sok_setup<R: RngCore + CryptoRng + ?Sized>(params: &GroupParams, rng: &mut R) -> (UCrs, UTrapdoor) {
    u_setup_tagged(params, SOK_TAG, rng)
}

#[allow(clippy::too_many_arguments)]
pub fn sok_sign<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    world: &mut dyn World,
    crs: &UCrs,
    x: &GroupElement,
    w: &Scalar,
    m: &[u8],
    rng: &mut R,
) -> Result<SignatureOfKnowledge, UnclonableError> {
    let sigma = u_prove_labeled(params, world, crs, x, w, &message_label(m), rng)?;
    Ok(SignatureOfKnowledge { sigma })
}

pub fn sok_verify(
    params: &GroupParams,
    world: &mut dyn World,
    crs: &UCrs,
    x: &GroupElement,
    m: &[u8],
    sig: &SignatureOfKnowledge,
) -> bool {
    u_verify_labeled(params, world, crs, x, &message_label(m), &sig.sigma)
}

pub fn sok_sim<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    env: &mut Env,
    crs: &UCrs,
    td: &UTrapdoor,
    x: &GroupElement,
    m: &[u8],
    rng: &mut R,
) -> Result<SignatureOfKnowledge, UnclonableError> {
    let sigma = u_sim_labeled(params, env, crs, td, x, &message_label(m), rng)?;
    Ok(SignatureOfKnowledge { sigma })
}

pub fn sok_ext(params: &GroupParams, td: &UTrapdoor, sig: &SignatureOfKnowledge) -> Result<Scalar, GroupError> {
    u_ext(params, td, &sig.sigma)
}

impl Canonical for SignatureOfKnowledge {
    const TAG: u8 = tags::SOK;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.sigma.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(SignatureOfKnowledge { sigma: UnclonableProofCrs::decode(r, params)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn fx() -> &'static GroupParams {
        GroupParams::fixture()
    }

    #[test]
    fn sign_then_verify() {
        let mut env = Env::seeded(1);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let (crs, _) = sok_setup(fx(), &mut rng);
        for i in 0..200u32 {
            let w = fx().random_nonzero_scalar(&mut rng);
            let x = fx().g_exp(&w);
            let m = format!("message {i}");
            let sig = sok_sign(fx(), &mut env, &crs, &x, &w, m.as_bytes(), &mut rng).unwrap();
            assert!(sok_verify(fx(), &mut env, &crs, &x, m.as_bytes(), &sig));
        }
    }

    #[test]
    fn message_and_instance_binding_at_production_scale() {
        let p = GroupParams::production();
        let mut env = Env::seeded(2);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let (crs, _) = sok_setup(p, &mut rng);
        let w = p.random_nonzero_scalar(&mut rng);
        let x = p.g_exp(&w);
        let sig = sok_sign(p, &mut env, &crs, &x, &w, b"m", &mut rng).unwrap();
        assert!(sok_verify(p, &mut env, &crs, &x, b"m", &sig));
        assert!(!sok_verify(p, &mut env, &crs, &x, b"m'", &sig));
        let x2 = p.g_exp(&p.random_nonzero_scalar(&mut rng));
        assert!(!sok_verify(p, &mut env, &crs, &x2, b"m", &sig));
    }

    #[test]
    fn wrong_messages_pass_only_on_challenge_collision() {
        use crate::nizk::fs::{challenge_from_digest, fs_input};
        use crate::nizk::simext::{context_bytes, statement};
        use crate::oracle::RandomOracle;
        use crate::unclonable::crs::instance;

        let mut env = Env::seeded(3);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (crs, _) = sok_setup(fx(), &mut rng);
        let w = fx().scalar_from_u64(5);
        let x = fx().g_exp(&w);
        let sig = sok_sign(fx(), &mut env, &crs, &x, &w, b"target", &mut rng).unwrap();
        let mut challenge = |m: &[u8]| {
            let inst = instance(&crs, &x, &sig.sigma.serial, &message_label(m));
            let stmt = statement(fx(), &crs.simext, &inst, &sig.sigma.pi.ct);
            let input = fs_input(&crs.simext.tag, &context_bytes(&crs.simext, &inst), &stmt, &sig.sigma.pi.pi.alpha);
            challenge_from_digest(fx(), &env.oracle.query(&input))
        };
        let beta = challenge(b"target");
        let probes: Vec<[u8; 8]> = (0..1000).map(|_| rng.gen()).collect();
        let collide: Vec<bool> = probes.iter().map(|m| challenge(m) == beta).collect();
        let mut accepted = 0;
        for (m, &c) in probes.iter().zip(&collide) {
            let ok = sok_verify(fx(), &mut env, &crs, &x, m, &sig);
            assert_eq!(ok, c);
            accepted += ok as u32;
        }
        // The fixture challenge space has 23 elements.
        let p: f64 = 1.0 / 23.0;
        let sd = (1000.0 * p * (1.0 - p)).sqrt();
        assert!((accepted as f64 - 1000.0 * p).abs() < 4.0 * sd, "{accepted}");
        assert!(sok_verify(fx(), &mut env, &crs, &x, b"target", &sig));
    }

    #[test]
    fn simulation_and_extraction() {
        let mut env = Env::seeded(4);
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (crs, td) = sok_setup(fx(), &mut rng);
        let w = fx().scalar_from_u64(9);
        let x = fx().g_exp(&w);
        let sim = sok_sim(fx(), &mut env, &crs, &td, &x, b"m", &mut rng).unwrap();
        assert!(sok_verify(fx(), &mut env, &crs, &x, b"m", &sim));
        assert!(sok_ext(fx(), &td, &sim).unwrap().is_zero());
        let real = sok_sign(fx(), &mut env, &crs, &x, &w, b"other", &mut rng).unwrap();
        assert_eq!(sok_ext(fx(), &td, &real).unwrap(), w);
    }

    #[test]
    fn encoding_roundtrip() {
        let mut env = Env::seeded(5);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let (crs, _) = sok_setup(fx(), &mut rng);
        let w = fx().scalar_from_u64(5);
        let sig = sok_sign(fx(), &mut env, &crs, &fx().g_exp(&w), &w, b"m", &mut rng).unwrap();
        assert_eq!(SignatureOfKnowledge::from_canonical_bytes(&sig.to_canonical_bytes(), fx()).unwrap(), sig);
    }
}
