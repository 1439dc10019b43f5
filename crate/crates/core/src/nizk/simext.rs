//! Simulation-extractable NIZK from an IND-CPA encryption of the witness
//! plus a Fiat–Shamir proof that the ciphertext encrypts a valid witness.
//!
//! The proved statement is
//! `And(BitValid(ct_0), …, BitValid(ct_{L-1}), inner)` where `inner` ties
//! the aggregated ciphertext `C = prod ct_i^(2^i)` to the instance. The
//! extractor decrypts; the simulator encrypts zero and programs the oracle.

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::encoding::{tags, Bytes, Canonical, EncodingError, Reader};
use crate::group::{
    commit, dec_witness, enc_witness, hash_to_scalar, pke_keygen, BitCiphertext, Commitment, GroupElement,
    GroupError, GroupParams, Profile, Scalar, WitnessCiphertext, WitnessRandomness,
};
use crate::money::SerialNumber;
use crate::nizk::fs::{fs_prove, fs_simulate, fs_verify, FsProof};
use crate::oracle::{Oracle, OracleError, RandomOracle};
use crate::sigma::{SigmaError, SigmaStatement, SigmaWitness};

pub const SIMEXT_TAG: &str = "FS/SIMEXT/v1";
const MAX_BIT_WIDTH: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimExtError {
    #[error("witness does not satisfy the instance")]
    WitnessMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<SigmaError> for SimExtError {
    fn from(_: SigmaError) -> Self {
        SimExtError::WitnessMismatch
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimExtCrs {
    pub profile: Profile,
    pub pk: GroupElement,
    pub tag: String,
    pub bit_width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimExtTrapdoor {
    pub sk: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimExtRelation {
    /// `x = g^w`.
    Dlog { x: GroupElement },
    /// `x = g^z` or `c = Com(h2s(serial); z)`.
    DlogOrCommit { x: GroupElement, c: Commitment, serial: SerialNumber },
}

/// An instance plus a label that is bound into the challenge but carries no
/// algebraic meaning (signature-of-knowledge messages live here).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimExtInstance {
    pub relation: SimExtRelation,
    pub label: Vec<u8>,
}

impl SimExtInstance {
    pub fn dlog(x: GroupElement) -> Self {
        SimExtInstance { relation: SimExtRelation::Dlog { x }, label: Vec::new() }
    }

    pub fn x(&self) -> &GroupElement {
        match &self.relation {
            SimExtRelation::Dlog { x } | SimExtRelation::DlogOrCommit { x, .. } => x,
        }
    }

    pub fn satisfied_by(&self, params: &GroupParams, wit: &SimExtWitness) -> bool {
        match (&self.relation, wit) {
            (_, SimExtWitness::Dlog(w)) => &params.g_exp(w) == self.x(),
            (SimExtRelation::DlogOrCommit { c, serial, .. }, SimExtWitness::CommitOpening(z)) => {
                &commit(params, &serial_scalar(params, serial), z) == c
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimExtWitness {
    Dlog(Scalar),
    CommitOpening(Scalar),
}

impl SimExtWitness {
    pub fn scalar(&self) -> &Scalar {
        match self {
            SimExtWitness::Dlog(w) | SimExtWitness::CommitOpening(w) => w,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimExtProof {
    pub ct: WitnessCiphertext,
    pub pi: FsProof,
}

/// Serial numbers enter algebra as `hash_to_scalar(serial)`.
pub fn serial_scalar(params: &GroupParams, serial: &SerialNumber) -> Scalar {
    hash_to_scalar(params, &serial.0)
}

pub fn simext_setup<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    tag: &str,
    rng: &mut R,
) -> (SimExtCrs, SimExtTrapdoor) {
    let kp = pke_keygen(params, rng);
    let crs = SimExtCrs {
        profile: params.profile(),
        pk: kp.pk,
        tag: tag.to_string(),
        bit_width: params.scalar_bits(),
    };
    (crs, SimExtTrapdoor { sk: kp.sk })
}

/// The compiled sigma statement for `inst` under ciphertext `ct`.
pub fn statement(params: &GroupParams, crs: &SimExtCrs, inst: &SimExtInstance, ct: &WitnessCiphertext) -> SigmaStatement {
    let agg = ct.aggregate(params);
    let mut parts: Vec<SigmaStatement> =
        ct.bits.iter().map(|b| SigmaStatement::bit_valid(params, &crs.pk, b)).collect();
    parts.push(inner_statement(params, crs, inst, &agg));
    SigmaStatement::And(parts)
}

fn inner_statement(params: &GroupParams, crs: &SimExtCrs, inst: &SimExtInstance, agg: &BitCiphertext) -> SigmaStatement {
    match &inst.relation {
        SimExtRelation::Dlog { x } => SigmaStatement::linear_enc(params, &crs.pk, agg, x, params.g()),
        SimExtRelation::DlogOrCommit { x, c, serial } => SigmaStatement::Or(
            Box::new(SigmaStatement::linear_enc(params, &crs.pk, agg, x, params.g())),
            Box::new(SigmaStatement::enc_commit_open(params, &crs.pk, agg, c, &serial_scalar(params, serial))),
        ),
    }
}

fn sigma_witness(
    params: &GroupParams,
    inst: &SimExtInstance,
    wit: &SimExtWitness,
    ct_plain: &Scalar,
    rand: &WitnessRandomness,
) -> SigmaWitness {
    let mut parts: Vec<SigmaWitness> = rand
        .per_bit
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let leaf = Box::new(SigmaWitness::Atom(vec![u.clone()]));
            if ct_plain.bit(i) {
                SigmaWitness::Right(leaf)
            } else {
                SigmaWitness::Left(leaf)
            }
        })
        .collect();
    let atom = SigmaWitness::Atom(vec![rand.aggregate(params), wit.scalar().clone()]);
    parts.push(match (&inst.relation, wit) {
        (SimExtRelation::Dlog { .. }, _) => atom,
        (SimExtRelation::DlogOrCommit { .. }, SimExtWitness::Dlog(_)) => SigmaWitness::Left(Box::new(atom)),
        (SimExtRelation::DlogOrCommit { .. }, SimExtWitness::CommitOpening(_)) => {
            SigmaWitness::Right(Box::new(atom))
        }
    });
    SigmaWitness::And(parts)
}

/// Bytes binding the challenge to the crs and the full instance.
pub fn context_bytes(crs: &SimExtCrs, inst: &SimExtInstance) -> Vec<u8> {
    let mut out = crs.to_canonical_bytes();
    inst.encode(&mut out);
    out
}

pub fn simext_prove<O, R>(
    params: &GroupParams,
    oracle: &mut O,
    crs: &SimExtCrs,
    inst: &SimExtInstance,
    wit: &SimExtWitness,
    rng: &mut R,
) -> Result<SimExtProof, SimExtError>
where
    O: RandomOracle + ?Sized,
    R: RngCore + CryptoRng + ?Sized,
{
    if !inst.satisfied_by(params, wit) {
        return Err(SimExtError::WitnessMismatch);
    }
    let (ct, rand) = enc_witness(params, &crs.pk, wit.scalar(), crs.bit_width, rng)?;
    let stmt = statement(params, crs, inst, &ct);
    let sw = sigma_witness(params, inst, wit, wit.scalar(), &rand);
    let pi = fs_prove(params, oracle, &crs.tag, &context_bytes(crs, inst), &stmt, &sw, rng)?;
    Ok(SimExtProof { ct, pi })
}

pub fn simext_verify<O: RandomOracle + ?Sized>(
    params: &GroupParams,
    oracle: &mut O,
    crs: &SimExtCrs,
    inst: &SimExtInstance,
    proof: &SimExtProof,
) -> bool {
    if proof.ct.bits.len() != crs.bit_width || crs.profile != params.profile() {
        return false;
    }
    let stmt = statement(params, crs, inst, &proof.ct);
    fs_verify(params, oracle, &crs.tag, &context_bytes(crs, inst), &stmt, &proof.pi)
}

/// Encrypts zero and simulates the consistency proof. The trapdoor is not
/// needed in the random-oracle instantiation; oracle programming plays its
/// role.
pub fn simext_sim<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    oracle: &mut Oracle,
    crs: &SimExtCrs,
    _td: &SimExtTrapdoor,
    inst: &SimExtInstance,
    rng: &mut R,
) -> Result<SimExtProof, SimExtError> {
    let (ct, _) = enc_witness(params, &crs.pk, &Scalar::zero(), crs.bit_width, rng)?;
    let stmt = statement(params, crs, inst, &ct);
    let pi = fs_simulate(params, oracle, &crs.tag, &context_bytes(crs, inst), &stmt, rng)?;
    Ok(SimExtProof { ct, pi })
}

/// Decrypts the witness ciphertext. The caller checks the relation.
pub fn simext_ext(params: &GroupParams, td: &SimExtTrapdoor, proof: &SimExtProof) -> Result<Scalar, GroupError> {
    dec_witness(params, &td.sk, &proof.ct)
}

impl Canonical for SimExtCrs {
    const TAG: u8 = tags::SIMEXT_CRS;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.profile.encode(out);
        self.pk.encode(out);
        Bytes(self.tag.as_bytes().to_vec()).encode(out);
        (self.bit_width as u64).encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        let profile = Profile::decode(r, params)?;
        if profile != params.profile() {
            return Err(EncodingError::BadLength("profile mismatch"));
        }
        let pk = GroupElement::decode(r, params)?;
        let tag = String::from_utf8(Bytes::decode(r, params)?.0).map_err(|_| EncodingError::BadLength("tag"))?;
        let bit_width = u64::decode(r, params)?;
        if bit_width < params.scalar_bits() as u64 || bit_width > MAX_BIT_WIDTH {
            return Err(EncodingError::BadLength("bit width"));
        }
        Ok(SimExtCrs { profile, pk, tag, bit_width: bit_width as usize })
    }
}

impl Canonical for SimExtTrapdoor {
    const TAG: u8 = tags::SIMEXT_TRAPDOOR;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.sk.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(SimExtTrapdoor { sk: Scalar::decode(r, params)? })
    }
}

impl Canonical for SimExtInstance {
    const TAG: u8 = tags::SIMEXT_INSTANCE;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        match &self.relation {
            SimExtRelation::Dlog { x } => {
                0u64.encode(out);
                x.encode(out);
            }
            SimExtRelation::DlogOrCommit { x, c, serial } => {
                1u64.encode(out);
                x.encode(out);
                c.encode(out);
                serial.encode(out);
            }
        }
        Bytes(self.label.clone()).encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        let relation = match u64::decode(r, params)? {
            0 => SimExtRelation::Dlog { x: GroupElement::decode(r, params)? },
            1 => SimExtRelation::DlogOrCommit {
                x: GroupElement::decode(r, params)?,
                c: Commitment::decode(r, params)?,
                serial: SerialNumber::decode(r, params)?,
            },
            _ => return Err(EncodingError::NonCanonical),
        };
        Ok(SimExtInstance { relation, label: Bytes::decode(r, params)?.0 })
    }
}

impl Canonical for SimExtProof {
    const TAG: u8 = tags::SIMEXT_PROOF;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.ct.encode(out);
        self.pi.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(SimExtProof { ct: WitnessCiphertext::decode(r, params)?, pi: FsProof::decode(r, params)? })
    }
}
