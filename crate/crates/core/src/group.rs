//! Prime-order subgroup arithmetic, perfectly binding commitments, and
//! bitwise exponent-encoded El-Gamal encryption.
//!
//! Two parameter profiles are provided. The fixture profile (`p = 47`,
//! `q = 23`) is small enough to enumerate exhaustively and is what the
//! exact oracles in the test-suite run against. The production profile is a
//! 2048-bit modulus with a 256-bit prime-order subgroup; its second
//! generator `h` is derived by hashing into the subgroup so that nobody knows
//! `log_g h`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{CryptoRng, RngCore};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("value is not an element of the order-q subgroup")]
    NotInSubgroup,
    #[error("scalar out of range")]
    ScalarOutOfRange,
    #[error("plaintext bit must be 0 or 1, got {0}")]
    InvalidBit(u8),
    #[error("ciphertext does not decrypt to a bit")]
    Decode,
    #[error("bit width {width} cannot hold scalars of {needed} bits")]
    BitWidth { width: usize, needed: usize },
}

/// Selects one of the two built-in group parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Fixture,
    Production,
}

impl Profile {
    pub fn params(self) -> &'static GroupParams {
        match self {
            Profile::Fixture => GroupParams::fixture(),
            Profile::Production => GroupParams::production(),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Profile::Fixture => 0,
            Profile::Production => 1,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(Profile::Fixture),
            1 => Some(Profile::Production),
            _ => None,
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixture" => Ok(Profile::Fixture),
            "production" => Ok(Profile::Production),
            other => Err(format!("unknown profile `{other}`")),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Fixture => f.write_str("fixture"),
            Profile::Production => f.write_str("production"),
        }
    }
}

const PRODUCTION_P: &str = "db496e6dc62c919e0e0caa620c581e8ef7ad857d423f5d060d9795c4a82f72fd\
a2f3ac1dfa7190f14b914c345e494091a03274bd3466b6ecc0e3fff41fecf6e3\
dae6cc960b6a2281fc021ba220f05fe3946e4cc340a4ee34dd15ee459df7e34f\
00c6bc8d66673ccb5a8b56625758d0a2bc126170032bfd9fff0447204b1c7c60\
e551c3968a11bf12572002b78178c3987e57a99adbe2d77eb479ad5c4fd0e022\
ea5b9970dc748ba955694e2d219b310d876dad15e46e003f15c371798b4da8f4\
810b1aa6f3ee6ce89ee00d90a8ee29a348736482336cf78ff65b91897d31b906\
5b41c717ea1518c8cb6da5605e5c1d7305a329e1771333a1d7ce59bdf8ee3979";

const PRODUCTION_Q: &str = "f414cab85dc4314d0ef6dbd8f143280263e2b0cda6f443f38a0bb159873abab5";

const PRODUCTION_G: &str = "59b77697c84c5831b1c27de65692510080d83702edb57f46efc4c2dd21ae27d1\
8e1c1f6eed23bbaf482c75d379aed834a7a8678d3a149bf88492016e1c602afd\
7134db0be92d41a7b47f9874f637e0ad8bd7135432a59105a9c1c1ad1554a108\
313c51f4dab16f3d303a3d3c217b71840bc6ef0726e769158781210fa6c62eef\
dcc5fa81112b8cfa4444a27d7649b22a5d140a6bd9088bd280acf8ce0551938c\
c1e3279f5a245a6226a753fd3054bccc4f8fd243acf596b6f7ccfdedb0f3edcd\
66cffffbd30e4479ea723582b10002698735a6869e757cfd2dbaff457d393a55\
fe984e9eeb4fcaea93395b1465a498f5dbad3a492648d679211c8fe6def47770";

const H_DERIVATION_TAG: &[u8] = b"unclonable-zk/second-generator/v1";

/// Parameters of a prime-order Schnorr group.
#[derive(Clone)]
pub struct GroupParams {
    profile: Profile,
    p: BigUint,
    q: BigUint,
    g: GroupElement,
    h: GroupElement,
    cofactor: BigUint,
    scalar_len: usize,
    element_len: usize,
}

impl fmt::Debug for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupParams")
            .field("profile", &self.profile)
            .field("p_bits", &self.p.bits())
            .field("q_bits", &self.q.bits())
            .finish()
    }
}

impl GroupParams {
    /// `p = 47, q = 23, g = 2, h = 34`. `log_g h = 7` is public; never use the
    /// fixture where hiding matters.
    pub fn fixture() -> &'static GroupParams {
        static FIXTURE: OnceLock<GroupParams> = OnceLock::new();
        FIXTURE.get_or_init(|| {
            Self::assemble(
                Profile::Fixture,
                BigUint::from(47u32),
                BigUint::from(23u32),
                BigUint::from(2u32),
                BigUint::from(34u32),
            )
        })
    }

    pub fn production() -> &'static GroupParams {
        static PRODUCTION: OnceLock<GroupParams> = OnceLock::new();
        PRODUCTION.get_or_init(|| {
            let parse = |hex: &str| BigUint::parse_bytes(hex.as_bytes(), 16).expect("valid hex");
            let p = parse(PRODUCTION_P);
            let q = parse(PRODUCTION_Q);
            let g = parse(PRODUCTION_G);
            let h = derive_subgroup_element(&p, &q, H_DERIVATION_TAG);
            Self::assemble(Profile::Production, p, q, g, h)
        })
    }

    fn assemble(profile: Profile, p: BigUint, q: BigUint, g: BigUint, h: BigUint) -> Self {
        let cofactor = (&p - 1u32) / &q;
        let scalar_len = byte_len(&q);
        let element_len = byte_len(&p);
        GroupParams {
            profile,
            p,
            q,
            g: GroupElement(g),
            h: GroupElement(h),
            cofactor,
            scalar_len,
            element_len,
        }
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    pub fn order(&self) -> &BigUint {
        &self.q
    }

    pub fn g(&self) -> &GroupElement {
        &self.g
    }

    pub fn h(&self) -> &GroupElement {
        &self.h
    }

    /// Bit length of `q`; the default witness-encoding width.
    pub fn scalar_bits(&self) -> usize {
        self.q.bits() as usize
    }

    pub fn scalar_len(&self) -> usize {
        self.scalar_len
    }

    pub fn element_len(&self) -> usize {
        self.element_len
    }

    /// Checks the structural invariants: `q | p - 1`, `g^q = 1`, `g != 1`,
    /// and `h` lies in `<g>`. Primality is checked separately by tests.
    pub fn is_well_formed(&self) -> bool {
        let one = BigUint::one();
        (&self.p - 1u32).is_multiple_of(&self.q)
            && self.g.0 != one
            && self.g.0.modpow(&self.q, &self.p) == one
            && self.h.0 != one
            && self.h.0.modpow(&self.q, &self.p) == one
    }

    // Scalars --------------------------------------------------------------

    /// Reduces an arbitrary integer modulo `q`.
    pub fn scalar(&self, value: impl Into<BigUint>) -> Scalar {
        Scalar(value.into() % &self.q)
    }

    pub fn scalar_from_u64(&self, value: u64) -> Scalar {
        self.scalar(BigUint::from(value))
    }

    /// Accepts `value` only if it is already reduced.
    pub fn checked_scalar(&self, value: BigUint) -> Result<Scalar, GroupError> {
        if value < self.q {
            Ok(Scalar(value))
        } else {
            Err(GroupError::ScalarOutOfRange)
        }
    }

    pub fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar(RandBigInt::gen_biguint_below(&mut AsRng(rng), &self.q))
    }

    /// Uniform in `[1, q)`.
    pub fn random_nonzero_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar(RandBigInt::gen_biguint_range(&mut AsRng(rng), &BigUint::one(), &self.q))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 + &b.0) % &self.q)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 + &self.q - &b.0) % &self.q)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 * &b.0) % &self.q)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        Scalar((&self.q - &a.0) % &self.q)
    }

    /// Inverse modulo the prime `q` via Fermat; `None` for zero.
    pub fn invert(&self, a: &Scalar) -> Option<Scalar> {
        if a.0.is_zero() {
            return None;
        }
        Some(Scalar(a.0.modpow(&(&self.q - 2u32), &self.q)))
    }

    // Group elements -------------------------------------------------------

    pub fn identity(&self) -> GroupElement {
        GroupElement(BigUint::one())
    }

    /// Validates subgroup membership.
    pub fn element(&self, value: BigUint) -> Result<GroupElement, GroupError> {
        if value.is_zero() || value >= self.p || value.modpow(&self.q, &self.p) != BigUint::one() {
            return Err(GroupError::NotInSubgroup);
        }
        Ok(GroupElement(value))
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        !e.0.is_zero() && e.0 < self.p && e.0.modpow(&self.q, &self.p) == BigUint::one()
    }

    pub fn op(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement((&a.0 * &b.0) % &self.p)
    }

    pub fn exp(&self, base: &GroupElement, e: &Scalar) -> GroupElement {
        GroupElement(base.0.modpow(&e.0, &self.p))
    }

    /// Exponentiation by an unreduced non-negative integer.
    pub fn exp_int(&self, base: &GroupElement, e: &BigUint) -> GroupElement {
        GroupElement(base.0.modpow(e, &self.p))
    }

    pub fn g_exp(&self, e: &Scalar) -> GroupElement {
        self.exp(&self.g, e)
    }

    pub fn h_exp(&self, e: &Scalar) -> GroupElement {
        self.exp(&self.h, e)
    }

    /// Inverse inside the order-`q` subgroup: `a^(q-1)`.
    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.modpow(&(&self.q - 1u32), &self.p))
    }

    pub fn div(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.op(a, &self.inv(b))
    }

    /// `prod bases[i]^exps[i]`.
    pub fn multi_exp(&self, terms: &[(&GroupElement, &Scalar)]) -> GroupElement {
        terms
            .iter()
            .fold(self.identity(), |acc, (b, e)| self.op(&acc, &self.exp(b, e)))
    }

    /// Maps arbitrary bytes into the subgroup by expanding, reducing mod `p`,
    /// and clearing the cofactor.
    pub fn hash_to_element(&self, tag: &[u8], bytes: &[u8]) -> GroupElement {
        let mut counter = 0u32;
        loop {
            let wide = expand(tag, bytes, counter, self.element_len + 16);
            let candidate = (BigUint::from_bytes_be(&wide) % &self.p).modpow(&self.cofactor, &self.p);
            if !candidate.is_one() && !candidate.is_zero() {
                return GroupElement(candidate);
            }
            counter += 1;
        }
    }

    pub fn scalar_bytes(&self, s: &Scalar) -> Vec<u8> {
        fixed_width(&s.0, self.scalar_len)
    }

    pub fn element_bytes(&self, e: &GroupElement) -> Vec<u8> {
        fixed_width(&e.0, self.element_len)
    }
}

/// An integer modulo the subgroup order `q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(BigUint);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigUint::zero())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Little-endian bit `i`.
    pub fn bit(&self, i: usize) -> bool {
        self.0.bit(i as u64)
    }

    /// Only meaningful on small groups; saturates otherwise.
    pub fn to_u64(&self) -> u64 {
        self.0.iter_u64_digits().next().unwrap_or(0)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.0)
    }
}

/// An element of the order-`q` subgroup of `Z_p^*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(BigUint);

impl GroupElement {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> u64 {
        self.0.iter_u64_digits().next().unwrap_or(0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.bits() <= 64 {
            write!(f, "GroupElement({})", self.0)
        } else {
            let hex = self.0.to_str_radix(16);
            write!(f, "GroupElement({}..)", &hex[..12])
        }
    }
}

/// `Com(m; r) = (g^r, g^m h^r)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Commitment {
    pub c1: GroupElement,
    pub c2: GroupElement,
}

pub fn commit(params: &GroupParams, m: &Scalar, r: &Scalar) -> Commitment {
    Commitment {
        c1: params.g_exp(r),
        c2: params.op(&params.g_exp(m), &params.h_exp(r)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPair {
    pub sk: Scalar,
    pub pk: GroupElement,
}

pub fn pke_keygen<R: RngCore + CryptoRng + ?Sized>(params: &GroupParams, rng: &mut R) -> KeyPair {
    let sk = params.random_nonzero_scalar(rng);
    let pk = params.g_exp(&sk);
    KeyPair { sk, pk }
}

/// `(g^u, pk^u g^bit)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitCiphertext {
    pub a: GroupElement,
    pub b: GroupElement,
}

pub fn enc_bit(
    params: &GroupParams,
    pk: &GroupElement,
    bit: u8,
    u: &Scalar,
) -> Result<BitCiphertext, GroupError> {
    if bit > 1 {
        return Err(GroupError::InvalidBit(bit));
    }
    let a = params.g_exp(u);
    let mask = params.exp(pk, u);
    let b = if bit == 1 { params.op(&mask, params.g()) } else { mask };
    Ok(BitCiphertext { a, b })
}

pub fn dec_bit(params: &GroupParams, sk: &Scalar, ct: &BitCiphertext) -> Result<u8, GroupError> {
    let shared = params.exp(&ct.a, sk);
    let m = params.div(&ct.b, &shared);
    if m == params.identity() {
        Ok(0)
    } else if &m == params.g() {
        Ok(1)
    } else {
        Err(GroupError::Decode)
    }
}

/// A scalar encrypted bit by bit, least significant bit first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WitnessCiphertext {
    pub bits: Vec<BitCiphertext>,
}

/// Per-bit encryption randomness `u_i` behind a [`WitnessCiphertext`].
#[derive(Clone, Debug)]
pub struct WitnessRandomness {
    pub per_bit: Vec<Scalar>,
}

impl WitnessRandomness {
    /// `sum u_i 2^i mod q`, the randomness of the aggregated ciphertext.
    pub fn aggregate(&self, params: &GroupParams) -> Scalar {
        let total = self
            .per_bit
            .iter()
            .enumerate()
            .fold(BigUint::zero(), |acc, (i, u)| acc + (&u.0 << i));
        params.scalar(total)
    }
}

impl WitnessCiphertext {
    /// `prod ct_i^(2^i)`, an encryption of `sum b_i 2^i` under randomness
    /// `sum u_i 2^i`.
    pub fn aggregate(&self, params: &GroupParams) -> BitCiphertext {
        let mut a = params.identity();
        let mut b = params.identity();
        for (i, ct) in self.bits.iter().enumerate() {
            let weight = BigUint::one() << i;
            a = params.op(&a, &params.exp_int(&ct.a, &weight));
            b = params.op(&b, &params.exp_int(&ct.b, &weight));
        }
        BitCiphertext { a, b }
    }
}

pub fn enc_witness<R: RngCore + ?Sized>(
    params: &GroupParams,
    pk: &GroupElement,
    w: &Scalar,
    bit_width: usize,
    rng: &mut R,
) -> Result<(WitnessCiphertext, WitnessRandomness), GroupError> {
    let needed = params.scalar_bits();
    if bit_width < needed {
        return Err(GroupError::BitWidth { width: bit_width, needed });
    }
    let mut bits = Vec::with_capacity(bit_width);
    let mut per_bit = Vec::with_capacity(bit_width);
    for i in 0..bit_width {
        let u = params.random_scalar(rng);
        bits.push(enc_bit(params, pk, w.bit(i) as u8, &u)?);
        per_bit.push(u);
    }
    Ok((WitnessCiphertext { bits }, WitnessRandomness { per_bit }))
}

pub fn dec_witness(
    params: &GroupParams,
    sk: &Scalar,
    ct: &WitnessCiphertext,
) -> Result<Scalar, GroupError> {
    let mut value = BigUint::zero();
    for (i, bit_ct) in ct.bits.iter().enumerate() {
        if dec_bit(params, sk, bit_ct)? == 1 {
            value.set_bit(i as u64, true);
        }
    }
    Ok(params.scalar(value))
}

/// Uniform map from bytes into `[0, q)` by rejection sampling on a
/// SHA-256 expansion truncated to the bit length of `q`.
pub fn hash_to_scalar(params: &GroupParams, bytes: &[u8]) -> Scalar {
    let bits = params.scalar_bits();
    let len = bits.div_ceil(8);
    let excess = len * 8 - bits;
    let mut counter = 0u32;
    loop {
        let mut wide = expand(b"unclonable-zk/hash-to-scalar/v1", bytes, counter, len);
        wide[0] &= 0xffu8 >> excess;
        let candidate = BigUint::from_bytes_be(&wide);
        if candidate < params.q {
            return Scalar(candidate);
        }
        counter += 1;
    }
}

fn expand(tag: &[u8], bytes: &[u8], counter: u32, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len + 32);
    let mut block = 0u32;
    while out.len() < len {
        let mut hasher = Sha256::new();
        hasher.update((tag.len() as u32).to_be_bytes());
        hasher.update(tag);
        hasher.update(counter.to_be_bytes());
        hasher.update(block.to_be_bytes());
        hasher.update(bytes);
        out.extend_from_slice(&hasher.finalize());
        block += 1;
    }
    out.truncate(len);
    out
}

fn derive_subgroup_element(p: &BigUint, q: &BigUint, tag: &[u8]) -> BigUint {
    let cofactor = (p - 1u32) / q;
    let len = byte_len(p) + 16;
    let mut counter = 0u32;
    loop {
        let wide = expand(tag, b"", counter, len);
        let candidate = (BigUint::from_bytes_be(&wide) % p).modpow(&cofactor, p);
        if !candidate.is_one() && !candidate.is_zero() {
            return candidate;
        }
        counter += 1;
    }
}

fn byte_len(n: &BigUint) -> usize {
    (n.bits() as usize).div_ceil(8)
}

fn fixed_width(v: &BigUint, len: usize) -> Vec<u8> {
    let raw = v.to_bytes_be();
    let mut out = vec![0u8; len.saturating_sub(raw.len())];
    out.extend_from_slice(&raw);
    out
}

/// Adapts a `?Sized` RNG reference for `RandBigInt`, which needs `Sized`.
struct AsRng<'a, R: RngCore + ?Sized>(&'a mut R);

impl<R: RngCore + ?Sized> RngCore for AsRng<'_, R> {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}
