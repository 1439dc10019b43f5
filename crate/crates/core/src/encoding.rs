//! Canonical byte encoding: `tag (1 byte) || length (4 bytes, big-endian) ||
//! payload`, where a composite payload is the concatenation of its fields'
//! encodings in declaration order.
//!
//! These bytes are what the random oracle and the Fiat-Shamir transform
//! hash, so every value has exactly one encoding. Integers are minimal
//! big-endian (no leading zero byte); decoding re-validates scalar range and
//! subgroup membership against the supplied parameters.

use num_bigint::BigUint;
use thiserror::Error;

use crate::group::{
    BitCiphertext, Commitment, GroupElement, GroupError, GroupParams, Scalar, WitnessCiphertext,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("unexpected end of input")]
    Truncated,
    #[error("expected tag {expected:#04x}, found {found:#04x}")]
    UnexpectedTag { expected: u8, found: u8 },
    #[error("unknown tag {0:#04x}")]
    UnknownTag(u8),
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("non-canonical integer encoding")]
    NonCanonical,
    #[error("invalid UTF-8 string")]
    InvalidUtf8,
    #[error("bad length for {0}")]
    BadLength(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub mod tags {
    pub const SCALAR: u8 = 0x01;
    pub const ELEMENT: u8 = 0x02;
    pub const BYTES: u8 = 0x03;
    pub const LIST: u8 = 0x04;
    pub const U64: u8 = 0x05;
    pub const COMMITMENT: u8 = 0x06;
    pub const BIT_CIPHERTEXT: u8 = 0x07;
    pub const WITNESS_CIPHERTEXT: u8 = 0x08;
    pub const SERIAL: u8 = 0x09;
    pub const NOTE_REF: u8 = 0x0a;
    pub const PROFILE: u8 = 0x0b;

    pub const LINEAR_RELATION: u8 = 0x10;
    pub const STMT_AND: u8 = 0x11;
    pub const STMT_OR: u8 = 0x12;
    pub const ALPHA: u8 = 0x13;
    pub const ALPHA_ATOM: u8 = 0x14;
    pub const ALPHA_AND: u8 = 0x15;
    pub const ALPHA_OR: u8 = 0x16;
    pub const GAMMA_ATOM: u8 = 0x17;
    pub const GAMMA_AND: u8 = 0x18;
    pub const GAMMA_OR: u8 = 0x19;
    pub const TRANSCRIPT: u8 = 0x1a;
    pub const EQUATION: u8 = 0x1b;

    pub const FS_PROOF: u8 = 0x20;
    pub const SIMEXT_CRS: u8 = 0x21;
    pub const SIMEXT_TRAPDOOR: u8 = 0x22;
    pub const SIMEXT_PROOF: u8 = 0x23;
    pub const SIMEXT_INSTANCE: u8 = 0x24;

    pub const U_CRS: u8 = 0x30;
    pub const U_TRAPDOOR: u8 = 0x31;
    pub const U_PROOF_CRS: u8 = 0x32;
    pub const U_PROOF_ROM: u8 = 0x33;

    pub const SOK: u8 = 0x40;
    pub const NYM: u8 = 0x41;
    pub const ISSUER_SECRET: u8 = 0x42;
    pub const CREDENTIAL: u8 = 0x43;
    pub const REVOCATION_NOTICE: u8 = 0x44;
    pub const REVOCATION_PROOF: u8 = 0x45;
}

/// Cursor over an encoded byte string.
pub struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf }
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn peek_tag(&self) -> Result<u8, EncodingError> {
        self.buf.first().copied().ok_or(EncodingError::Truncated)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], EncodingError> {
        if self.buf.len() < n {
            return Err(EncodingError::Truncated);
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
    }

    /// Reads one TLV frame and returns its tag and payload reader.
    pub fn frame(&mut self) -> Result<(u8, Reader<'a>), EncodingError> {
        let tag = self.take(1)?[0];
        let len = u32::from_be_bytes(self.take(4)?.try_into().expect("4 bytes")) as usize;
        Ok((tag, Reader::new(self.take(len)?)))
    }

    pub fn expect_frame(&mut self, expected: u8) -> Result<Reader<'a>, EncodingError> {
        let (found, payload) = self.frame()?;
        if found != expected {
            return Err(EncodingError::UnexpectedTag { expected, found });
        }
        Ok(payload)
    }

    pub fn rest(&mut self) -> &'a [u8] {
        std::mem::take(&mut self.buf)
    }

    pub fn finish(self) -> Result<(), EncodingError> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(EncodingError::TrailingBytes(self.buf.len()))
        }
    }
}

/// Writes a TLV frame whose payload is produced by `body`.
pub fn write_frame(out: &mut Vec<u8>, tag: u8, body: impl FnOnce(&mut Vec<u8>)) {
    out.push(tag);
    let len_at = out.len();
    out.extend_from_slice(&[0; 4]);
    body(out);
    let len = (out.len() - len_at - 4) as u32;
    out[len_at..len_at + 4].copy_from_slice(&len.to_be_bytes());
}

pub trait Canonical: Sized {
    const TAG: u8;

    fn encode_payload(&self, out: &mut Vec<u8>);

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError>;

    fn encode(&self, out: &mut Vec<u8>) {
        write_frame(out, Self::TAG, |o| self.encode_payload(o));
    }

    fn to_canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode(&mut out);
        out
    }

    fn decode(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        let mut payload = r.expect_frame(Self::TAG)?;
        let v = Self::decode_payload(&mut payload, params)?;
        payload.finish()?;
        Ok(v)
    }

    fn from_canonical_bytes(bytes: &[u8], params: &GroupParams) -> Result<Self, EncodingError> {
        let mut r = Reader::new(bytes);
        let v = Self::decode(&mut r, params)?;
        r.finish()?;
        Ok(v)
    }
}

fn read_uint(r: &mut Reader<'_>) -> Result<BigUint, EncodingError> {
    let raw = r.rest();
    if raw.first() == Some(&0) {
        return Err(EncodingError::NonCanonical);
    }
    Ok(BigUint::from_bytes_be(raw))
}

fn write_uint(v: &BigUint, out: &mut Vec<u8>) {
    if v.bits() > 0 {
        out.extend_from_slice(&v.to_bytes_be());
    }
}

impl Canonical for Scalar {
    const TAG: u8 = tags::SCALAR;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        write_uint(self.value(), out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(params.checked_scalar(read_uint(r)?)?)
    }
}

impl Canonical for GroupElement {
    const TAG: u8 = tags::ELEMENT;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        write_uint(self.value(), out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(params.element(read_uint(r)?)?)
    }
}

impl Canonical for u64 {
    const TAG: u8 = tags::U64;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_be_bytes());
    }

    fn decode_payload(r: &mut Reader<'_>, _: &GroupParams) -> Result<Self, EncodingError> {
        let raw = r.rest();
        let arr: [u8; 8] = raw.try_into().map_err(|_| EncodingError::BadLength("u64"))?;
        Ok(u64::from_be_bytes(arr))
    }
}

/// Opaque byte string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Bytes(pub Vec<u8>);

impl Canonical for Bytes {
    const TAG: u8 = tags::BYTES;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.0);
    }

    fn decode_payload(r: &mut Reader<'_>, _: &GroupParams) -> Result<Self, EncodingError> {
        Ok(Bytes(r.rest().to_vec()))
    }
}

impl<T: Canonical> Canonical for Vec<T> {
    const TAG: u8 = tags::LIST;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        for item in self {
            item.encode(out);
        }
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        let mut items = Vec::new();
        while !r.is_empty() {
            items.push(T::decode(r, params)?);
        }
        Ok(items)
    }
}

impl Canonical for Commitment {
    const TAG: u8 = tags::COMMITMENT;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.c1.encode(out);
        self.c2.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(Commitment { c1: GroupElement::decode(r, params)?, c2: GroupElement::decode(r, params)? })
    }
}

impl Canonical for BitCiphertext {
    const TAG: u8 = tags::BIT_CIPHERTEXT;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.a.encode(out);
        self.b.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(BitCiphertext { a: GroupElement::decode(r, params)?, b: GroupElement::decode(r, params)? })
    }
}

impl Canonical for WitnessCiphertext {
    const TAG: u8 = tags::WITNESS_CIPHERTEXT;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        self.bits.encode(out);
    }

    fn decode_payload(r: &mut Reader<'_>, params: &GroupParams) -> Result<Self, EncodingError> {
        Ok(WitnessCiphertext { bits: Vec::decode(r, params)? })
    }
}

impl Canonical for crate::group::Profile {
    const TAG: u8 = tags::PROFILE;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.push(self.id());
    }

    fn decode_payload(r: &mut Reader<'_>, _: &GroupParams) -> Result<Self, EncodingError> {
        match r.rest() {
            [id] => crate::group::Profile::from_id(*id).ok_or(EncodingError::BadLength("profile")),
            _ => Err(EncodingError::BadLength("profile")),
        }
    }
}
