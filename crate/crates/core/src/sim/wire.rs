//! Tag-length-value message encoding.
//!
//! A frame is `version: u16 BE ∥ kind: u8` followed by fields, each
//! `tag: u8 ∥ len: u32 BE ∥ value`. Every message kind has a fixed field
//! sequence and decoding rejects anything else, so the schema doubles as
//! the list of what a message can reveal.

use crate::dacm::{AccessResponse, CipherCore, KEY_LEN};
use crate::diwim::{PartialWarrant, WarrantUpdate};
use crate::envelope::{Envelope, Signature};
use crate::error::{Error, Result};
use crate::params::AccessPolicy;
use crate::pbvm::UploadSignature;
use crate::primitives::{Curve, GroupPoint, Scalar};

pub const WIRE_VERSION: u16 = 1;
const TAG_LEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Kind {
    Upload = 1,
    Record = 2,
    AccessRequest = 3,
    AccessRequestBody = 4,
    AccessResponse = 5,
    AccessResponseBody = 6,
    WarrantRequest = 7,
    WarrantRequestBody = 8,
    Blinding = 9,
    PartialWarrant = 10,
    PartialWarrantBody = 11,
    WarrantUpdate = 12,
    WarrantUpdateBody = 13,
}

impl Kind {
    const ALL: [Kind; 13] = [
        Kind::Upload,
        Kind::Record,
        Kind::AccessRequest,
        Kind::AccessRequestBody,
        Kind::AccessResponse,
        Kind::AccessResponseBody,
        Kind::WarrantRequest,
        Kind::WarrantRequestBody,
        Kind::Blinding,
        Kind::PartialWarrant,
        Kind::PartialWarrantBody,
        Kind::WarrantUpdate,
        Kind::WarrantUpdateBody,
    ];

    fn from_u8(b: u8) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| *k as u8 == b)
            .ok_or(Error::Encoding("unknown message kind"))
    }

    /// The exact field sequence of this kind.
    pub fn schema(self) -> &'static [Field] {
        use Field::*;
        match self {
            Kind::Upload => &[AccidentId, Policy, LPoints, N1, N2, C1, Sig, R, C2],
            Kind::Record => &[AccidentId, Policy, LPoints, N1, N2, C1, C2],
            Kind::AccessRequest | Kind::AccessResponse | Kind::WarrantRequest | Kind::Blinding => {
                &[Sealed]
            }
            Kind::AccessRequestBody => &[AccidentId, RecordIndex, Pid, Timestamp, Signature],
            Kind::AccessResponseBody => &[Policy, LPoints, N1, N2, C1, Masked],
            Kind::WarrantRequestBody => &[Pid, Timestamp, UpdateFlag, Signature],
            Kind::PartialWarrant | Kind::WarrantUpdate => &[Sealed, Signature],
            Kind::PartialWarrantBody => &[Index, W1, W2, W3, W4, Bit, Timestamp],
            Kind::WarrantUpdateBody => &[Index, W3, Bit, Timestamp],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Field {
    AccidentId = 1,
    Policy = 2,
    LPoints = 3,
    N1 = 4,
    N2 = 5,
    C1 = 6,
    Sig = 7,
    R = 8,
    C2 = 9,
    Sealed = 10,
    Pid = 11,
    Timestamp = 12,
    Signature = 13,
    RecordIndex = 14,
    Masked = 15,
    UpdateFlag = 16,
    Index = 17,
    W1 = 18,
    W2 = 19,
    W3 = 20,
    W4 = 21,
    Bit = 22,
}

/// Fields that would name or key a sender.
pub const IDENTITY_FIELDS: &[Field] = &[Field::Pid];

pub struct Encoder {
    buf: Vec<u8>,
    kind: Kind,
    next: usize,
}

impl Encoder {
    pub fn new(kind: Kind) -> Self {
        let mut buf = WIRE_VERSION.to_be_bytes().to_vec();
        buf.push(kind as u8);
        Encoder { buf, kind, next: 0 }
    }

    pub fn field(mut self, field: Field, value: &[u8]) -> Self {
        debug_assert_eq!(
            self.kind.schema().get(self.next),
            Some(&field),
            "field out of schema order"
        );
        self.next += 1;
        self.buf.push(field as u8);
        self.buf
            .extend_from_slice(&(value.len() as u32).to_be_bytes());
        self.buf.extend_from_slice(value);
        self
    }

    pub fn finish(self) -> Vec<u8> {
        debug_assert_eq!(self.next, self.kind.schema().len(), "missing fields");
        self.buf
    }
}

/// A parsed frame whose fields match its kind's schema.
#[derive(Debug, Clone)]
pub struct Message<'a> {
    pub kind: Kind,
    pub fields: Vec<(Field, &'a [u8])>,
}

impl<'a> Message<'a> {
    pub fn parse(bytes: &'a [u8]) -> Result<Self> {
        if bytes.len() < 3 {
            return Err(Error::Encoding("frame too short"));
        }
        if u16::from_be_bytes([bytes[0], bytes[1]]) != WIRE_VERSION {
            return Err(Error::Encoding("unsupported wire version"));
        }
        let kind = Kind::from_u8(bytes[2])?;
        let schema = kind.schema();
        let mut fields = Vec::with_capacity(schema.len());
        let mut rest = &bytes[3..];
        for &expected in schema {
            if rest.len() < 5 {
                return Err(Error::Encoding("truncated field header"));
            }
            if rest[0] != expected as u8 {
                return Err(Error::Encoding("field out of schema order"));
            }
            let len = u32::from_be_bytes(rest[1..5].try_into().expect("4 bytes")) as usize;
            if rest.len() < 5 + len {
                return Err(Error::Encoding("truncated field value"));
            }
            fields.push((expected, &rest[5..5 + len]));
            rest = &rest[5 + len..];
        }
        if !rest.is_empty() {
            return Err(Error::Encoding("trailing bytes"));
        }
        Ok(Message { kind, fields })
    }

    pub fn parse_as(bytes: &'a [u8], kind: Kind) -> Result<Self> {
        let m = Self::parse(bytes)?;
        if m.kind != kind {
            return Err(Error::Encoding("unexpected message kind"));
        }
        Ok(m)
    }

    pub fn get(&self, field: Field) -> Result<&'a [u8]> {
        self.fields
            .iter()
            .find(|(f, _)| *f == field)
            .map(|(_, v)| *v)
            .ok_or(Error::Encoding("missing field"))
    }
}

pub fn encode_points(points: &[GroupPoint]) -> Vec<u8> {
    points.iter().flat_map(|p| p.to_bytes()).collect()
}

pub fn decode_points(curve: &'static Curve, bytes: &[u8]) -> Result<Vec<GroupPoint>> {
    let w = curve.point_len();
    if bytes.len() % w != 0 {
        return Err(Error::Encoding("point list length"));
    }
    bytes
        .chunks(w)
        .map(|c| GroupPoint::from_bytes(curve, c))
        .collect()
}

pub fn encode_envelope(env: &Envelope) -> Vec<u8> {
    let mut out = env.ephemeral.to_bytes();
    out.extend_from_slice(&env.body);
    out.extend_from_slice(&env.tag);
    out
}

pub fn decode_envelope(curve: &'static Curve, bytes: &[u8]) -> Result<Envelope> {
    let w = curve.point_len();
    if bytes.len() < w + TAG_LEN {
        return Err(Error::Encoding("envelope too short"));
    }
    let (eph, rest) = bytes.split_at(w);
    let (body, tag) = rest.split_at(rest.len() - TAG_LEN);
    Ok(Envelope {
        ephemeral: GroupPoint::from_bytes(curve, eph)?,
        body: body.to_vec(),
        tag: tag.try_into().expect("tag width"),
    })
}

fn u32_field(bytes: &[u8]) -> Result<u32> {
    Ok(u32::from_be_bytes(
        bytes.try_into().map_err(|_| Error::Encoding("u32 width"))?,
    ))
}

fn u64_field(bytes: &[u8]) -> Result<u64> {
    Ok(u64::from_be_bytes(
        bytes.try_into().map_err(|_| Error::Encoding("u64 width"))?,
    ))
}

fn bit_field(bytes: &[u8]) -> Result<bool> {
    match bytes {
        [0] => Ok(false),
        [1] => Ok(true),
        _ => Err(Error::Encoding("bit value")),
    }
}

fn key_field(bytes: &[u8]) -> Result<[u8; KEY_LEN]> {
    bytes.try_into().map_err(|_| Error::Encoding("key width"))
}

fn core_fields(enc: Encoder, core: &CipherCore) -> Encoder {
    enc.field(Field::AccidentId, &core.accident_id)
        .field(Field::Policy, &core.policy.to_bytes())
        .field(Field::LPoints, &encode_points(&core.l))
        .field(Field::N1, &core.n1.to_bytes())
        .field(Field::N2, &core.n2.to_bytes())
        .field(Field::C1, &core.c1)
}

fn decode_core(curve: &'static Curve, m: &Message<'_>) -> Result<CipherCore> {
    Ok(CipherCore {
        accident_id: m.get(Field::AccidentId)?.to_vec(),
        policy: AccessPolicy::from_bytes(m.get(Field::Policy)?)?,
        l: decode_points(curve, m.get(Field::LPoints)?)?,
        n1: GroupPoint::from_bytes(curve, m.get(Field::N1)?)?,
        n2: GroupPoint::from_bytes(curve, m.get(Field::N2)?)?,
        c1: key_field(m.get(Field::C1)?)?,
        c2: m.get(Field::C2)?.to_vec(),
    })
}

/// Upload from a data provider; `c2` is the final field.
pub fn encode_upload(core: &CipherCore, sig: &UploadSignature) -> Vec<u8> {
    core_fields(Encoder::new(Kind::Upload), core)
        .field(Field::Sig, &sig.sig.to_bytes())
        .field(Field::R, &sig.r.to_bytes())
        .field(Field::C2, &core.c2)
        .finish()
}

pub fn decode_upload(curve: &'static Curve, bytes: &[u8]) -> Result<(CipherCore, UploadSignature)> {
    let m = Message::parse_as(bytes, Kind::Upload)?;
    let core = decode_core(curve, &m)?;
    let sig = UploadSignature {
        sig: GroupPoint::from_bytes(curve, m.get(Field::Sig)?)?,
        r: GroupPoint::from_bytes(curve, m.get(Field::R)?)?,
        accident_id: core.accident_id.clone(),
    };
    Ok((core, sig))
}

pub fn encode_record(core: &CipherCore) -> Vec<u8> {
    core_fields(Encoder::new(Kind::Record), core)
        .field(Field::C2, &core.c2)
        .finish()
}

pub fn decode_record(curve: &'static Curve, bytes: &[u8]) -> Result<CipherCore> {
    decode_core(curve, &Message::parse_as(bytes, Kind::Record)?)
}

/// A message made of one envelope.
pub fn encode_sealed(kind: Kind, env: &Envelope) -> Vec<u8> {
    Encoder::new(kind)
        .field(Field::Sealed, &encode_envelope(env))
        .finish()
}

pub fn decode_sealed(kind: Kind, curve: &'static Curve, bytes: &[u8]) -> Result<Envelope> {
    decode_envelope(curve, Message::parse_as(bytes, kind)?.get(Field::Sealed)?)
}

/// An envelope plus the sender's signature over the encoded envelope.
pub fn encode_signed_sealed(kind: Kind, env: &Envelope, sig: &Signature) -> Vec<u8> {
    Encoder::new(kind)
        .field(Field::Sealed, &encode_envelope(env))
        .field(Field::Signature, &sig.to_bytes())
        .finish()
}

/// Returns the envelope, its encoding (the signed message), and the signature.
pub fn decode_signed_sealed(
    kind: Kind,
    curve: &'static Curve,
    bytes: &[u8],
) -> Result<(Envelope, Vec<u8>, Signature)> {
    let m = Message::parse_as(bytes, kind)?;
    let sealed = m.get(Field::Sealed)?;
    Ok((
        decode_envelope(curve, sealed)?,
        sealed.to_vec(),
        Signature::from_bytes(curve, m.get(Field::Signature)?)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessRequestBody {
    pub accident_id: Vec<u8>,
    pub record_index: u32,
    pub pid: Scalar,
    pub timestamp: u64,
    pub signature: Signature,
}

impl AccessRequestBody {
    /// Bytes covered by the requester's signature.
    pub fn signed_message(
        accident_id: &[u8],
        record_index: u32,
        pid: &Scalar,
        timestamp: u64,
    ) -> Vec<u8> {
        let mut m = b"access/request".to_vec();
        m.extend_from_slice(&(accident_id.len() as u32).to_be_bytes());
        m.extend_from_slice(accident_id);
        m.extend_from_slice(&record_index.to_be_bytes());
        m.extend_from_slice(&pid.to_bytes());
        m.extend_from_slice(&timestamp.to_be_bytes());
        m
    }

    pub fn encode(&self) -> Vec<u8> {
        Encoder::new(Kind::AccessRequestBody)
            .field(Field::AccidentId, &self.accident_id)
            .field(Field::RecordIndex, &self.record_index.to_be_bytes())
            .field(Field::Pid, &self.pid.to_bytes())
            .field(Field::Timestamp, &self.timestamp.to_be_bytes())
            .field(Field::Signature, &self.signature.to_bytes())
            .finish()
    }

    pub fn decode(curve: &'static Curve, bytes: &[u8]) -> Result<Self> {
        let m = Message::parse_as(bytes, Kind::AccessRequestBody)?;
        Ok(AccessRequestBody {
            accident_id: m.get(Field::AccidentId)?.to_vec(),
            record_index: u32_field(m.get(Field::RecordIndex)?)?,
            pid: Scalar::from_bytes(curve, m.get(Field::Pid)?)?,
            timestamp: u64_field(m.get(Field::Timestamp)?)?,
            signature: Signature::from_bytes(curve, m.get(Field::Signature)?)?,
        })
    }
}

pub fn encode_access_response(resp: &AccessResponse) -> Vec<u8> {
    Encoder::new(Kind::AccessResponseBody)
        .field(Field::Policy, &resp.policy.to_bytes())
        .field(Field::LPoints, &encode_points(&resp.l))
        .field(Field::N1, &resp.n1.to_bytes())
        .field(Field::N2, &resp.n2.to_bytes())
        .field(Field::C1, &resp.c1)
        .field(Field::Masked, &resp.c)
        .finish()
}

pub fn decode_access_response(curve: &'static Curve, bytes: &[u8]) -> Result<AccessResponse> {
    let m = Message::parse_as(bytes, Kind::AccessResponseBody)?;
    Ok(AccessResponse {
        policy: AccessPolicy::from_bytes(m.get(Field::Policy)?)?,
        l: decode_points(curve, m.get(Field::LPoints)?)?,
        n1: GroupPoint::from_bytes(curve, m.get(Field::N1)?)?,
        n2: GroupPoint::from_bytes(curve, m.get(Field::N2)?)?,
        c1: key_field(m.get(Field::C1)?)?,
        c: m.get(Field::Masked)?.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WarrantRequestBody {
    pub pid: Scalar,
    pub timestamp: u64,
    pub update: bool,
    pub signature: Signature,
}

impl WarrantRequestBody {
    pub fn encode(&self) -> Vec<u8> {
        Encoder::new(Kind::WarrantRequestBody)
            .field(Field::Pid, &self.pid.to_bytes())
            .field(Field::Timestamp, &self.timestamp.to_be_bytes())
            .field(Field::UpdateFlag, &[self.update as u8])
            .field(Field::Signature, &self.signature.to_bytes())
            .finish()
    }

    pub fn decode(curve: &'static Curve, bytes: &[u8]) -> Result<Self> {
        let m = Message::parse_as(bytes, Kind::WarrantRequestBody)?;
        Ok(WarrantRequestBody {
            pid: Scalar::from_bytes(curve, m.get(Field::Pid)?)?,
            timestamp: u64_field(m.get(Field::Timestamp)?)?,
            update: bit_field(m.get(Field::UpdateFlag)?)?,
            signature: Signature::from_bytes(curve, m.get(Field::Signature)?)?,
        })
    }
}

pub fn encode_partial(p: &PartialWarrant, timestamp: u64) -> Vec<u8> {
    Encoder::new(Kind::PartialWarrantBody)
        .field(Field::Index, &(p.index as u32).to_be_bytes())
        .field(Field::W1, &p.w1.to_bytes())
        .field(Field::W2, &p.w2.to_bytes())
        .field(Field::W3, &p.w3.to_bytes())
        .field(Field::W4, &p.w4.to_bytes())
        .field(Field::Bit, &[p.bit as u8])
        .field(Field::Timestamp, &timestamp.to_be_bytes())
        .finish()
}

pub fn decode_partial(curve: &'static Curve, bytes: &[u8]) -> Result<(PartialWarrant, u64)> {
    let m = Message::parse_as(bytes, Kind::PartialWarrantBody)?;
    let scalar = |f| Scalar::from_bytes(curve, m.get(f)?);
    Ok((
        PartialWarrant {
            index: u32_field(m.get(Field::Index)?)? as usize,
            w1: scalar(Field::W1)?,
            w2: scalar(Field::W2)?,
            w3: scalar(Field::W3)?,
            w4: scalar(Field::W4)?,
            bit: bit_field(m.get(Field::Bit)?)?,
        },
        u64_field(m.get(Field::Timestamp)?)?,
    ))
}

pub fn encode_update(u: &WarrantUpdate, timestamp: u64) -> Vec<u8> {
    Encoder::new(Kind::WarrantUpdateBody)
        .field(Field::Index, &(u.index as u32).to_be_bytes())
        .field(Field::W3, &u.w3.to_bytes())
        .field(Field::Bit, &[u.bit as u8])
        .field(Field::Timestamp, &timestamp.to_be_bytes())
        .finish()
}

pub fn decode_update(curve: &'static Curve, bytes: &[u8]) -> Result<(WarrantUpdate, u64)> {
    let m = Message::parse_as(bytes, Kind::WarrantUpdateBody)?;
    Ok((
        WarrantUpdate {
            index: u32_field(m.get(Field::Index)?)? as usize,
            w3: Scalar::from_bytes(curve, m.get(Field::W3)?)?,
            bit: bit_field(m.get(Field::Bit)?)?,
        },
        u64_field(m.get(Field::Timestamp)?)?,
    ))
}
