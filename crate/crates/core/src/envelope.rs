//! Baseline public-key encryption and signatures over the protocol curve.
//!
//! Encryption is ephemeral-static Diffie-Hellman: the shared point goes
//! through the point KDF, the key drives an XOF keystream, and a second XOF
//! call over the ephemeral point and body produces the tag. Signatures are
//! Schnorr with `H1` as the challenge hash.

use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::primitives::{hash_to_scalar, kdf_point, xof, Curve, GroupPoint, HashFn, Scalar};

pub const TAG_LEN: usize = 32;

const STREAM_LABEL: &[u8] = b"envelope/stream";
const MAC_LABEL: &[u8] = b"envelope/mac";
const SIG_LABEL: &[u8] = b"schnorr/challenge";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    sk: Scalar,
    pk: GroupPoint,
}

impl KeyPair {
    pub fn generate<R: RngCore + CryptoRng>(curve: &'static Curve, rng: &mut R) -> Self {
        let sk = Scalar::random_nonzero(curve, rng);
        KeyPair {
            sk,
            pk: curve.generator().scalar_mul(&sk),
        }
    }

    pub fn from_secret(sk: Scalar) -> Result<Self> {
        if sk.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(KeyPair {
            sk,
            pk: sk.curve().generator().scalar_mul(&sk),
        })
    }

    pub fn secret(&self) -> Scalar {
        self.sk
    }

    pub fn public(&self) -> GroupPoint {
        self.pk
    }

    pub fn sign<R: RngCore + CryptoRng>(&self, msg: &[u8], rng: &mut R) -> Signature {
        sign_with(&self.sk, &self.pk, msg, rng)
    }

    pub fn decrypt(&self, env: &Envelope) -> Result<Vec<u8>> {
        decrypt(&self.sk, env)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub ephemeral: GroupPoint,
    pub body: Vec<u8>,
    pub tag: [u8; TAG_LEN],
}

impl Envelope {
    /// Bytes added on top of the plaintext: ephemeral point plus tag.
    pub fn overhead(curve: &Curve) -> usize {
        curve.point_len() + TAG_LEN
    }
}

fn keystream(key: &[u8], len: usize) -> Vec<u8> {
    let mut input = STREAM_LABEL.to_vec();
    input.extend_from_slice(key);
    xof(&input, len)
}

fn mac(key: &[u8], ephemeral: &GroupPoint, body: &[u8]) -> [u8; TAG_LEN] {
    let mut input = MAC_LABEL.to_vec();
    input.extend_from_slice(key);
    input.extend_from_slice(&ephemeral.to_bytes());
    input.extend_from_slice(&(body.len() as u32).to_be_bytes());
    input.extend_from_slice(body);
    let mut tag = [0u8; TAG_LEN];
    tag.copy_from_slice(&xof(&input, TAG_LEN));
    tag
}

pub fn encrypt<R: RngCore + CryptoRng>(
    pk: &GroupPoint,
    msg: &[u8],
    rng: &mut R,
) -> Result<Envelope> {
    if pk.is_identity() {
        return Err(Error::IdentityPoint);
    }
    let curve = pk.curve();
    let e = Scalar::random_nonzero(curve, rng);
    let ephemeral = curve.generator().scalar_mul(&e);
    let key = kdf_point(&pk.scalar_mul(&e))?;
    let body: Vec<u8> = msg
        .iter()
        .zip(keystream(&key, msg.len()))
        .map(|(m, k)| m ^ k)
        .collect();
    let tag = mac(&key, &ephemeral, &body);
    Ok(Envelope {
        ephemeral,
        body,
        tag,
    })
}

pub fn decrypt(sk: &Scalar, env: &Envelope) -> Result<Vec<u8>> {
    let shared = env.ephemeral.scalar_mul(sk);
    let key = kdf_point(&shared).map_err(|_| Error::Integrity)?;
    if mac(&key, &env.ephemeral, &env.body) != env.tag {
        return Err(Error::Integrity);
    }
    Ok(env
        .body
        .iter()
        .zip(keystream(&key, env.body.len()))
        .map(|(c, k)| c ^ k)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub commitment: GroupPoint,
    pub response: Scalar,
}

impl Signature {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.commitment.to_bytes();
        out.extend_from_slice(&self.response.to_bytes());
        out
    }

    pub fn from_bytes(curve: &'static Curve, bytes: &[u8]) -> Result<Self> {
        let plen = curve.point_len();
        if bytes.len() != plen + curve.scalar_len() {
            return Err(Error::LengthMismatch {
                expected: plen + curve.scalar_len(),
                got: bytes.len(),
            });
        }
        Ok(Signature {
            commitment: GroupPoint::from_bytes(curve, &bytes[..plen])?,
            response: Scalar::from_bytes(curve, &bytes[plen..])?,
        })
    }
}

fn challenge(commitment: &GroupPoint, pk: &GroupPoint, msg: &[u8]) -> Scalar {
    let mut input = SIG_LABEL.to_vec();
    input.extend_from_slice(&commitment.to_bytes());
    input.extend_from_slice(&pk.to_bytes());
    input.extend_from_slice(msg);
    hash_to_scalar(pk.curve(), HashFn::H1, &input)
}

fn sign_with<R: RngCore + CryptoRng>(
    sk: &Scalar,
    pk: &GroupPoint,
    msg: &[u8],
    rng: &mut R,
) -> Signature {
    let curve = sk.curve();
    let k = Scalar::random_nonzero(curve, rng);
    let commitment = curve.generator().scalar_mul(&k);
    let c = challenge(&commitment, pk, msg);
    Signature {
        commitment,
        response: k + c * *sk,
    }
}

pub fn sign<R: RngCore + CryptoRng>(sk: &Scalar, msg: &[u8], rng: &mut R) -> Signature {
    let pk = sk.curve().generator().scalar_mul(sk);
    sign_with(sk, &pk, msg, rng)
}

pub fn verify(pk: &GroupPoint, msg: &[u8], sig: &Signature) -> bool {
    if pk.is_identity() || sig.commitment.is_identity() {
        return false;
    }
    let curve = pk.curve();
    let c = challenge(&sig.commitment, pk, msg);
    curve.generator().scalar_mul(&sig.response) == sig.commitment + pk.scalar_mul(&c)
}

/// Verifies an encoded signature; undecodable input is simply invalid.
pub fn verify_bytes(pk: &GroupPoint, msg: &[u8], sig: &[u8]) -> bool {
    Signature::from_bytes(pk.curve(), sig).is_ok_and(|s| verify(pk, msg, &s))
}

/// Accepted clock skew for timestamped requests, in clock ticks (seconds).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreshnessWindow {
    pub max_skew: u64,
}

impl Default for FreshnessWindow {
    fn default() -> Self {
        FreshnessWindow { max_skew: 120 }
    }
}

impl FreshnessWindow {
    pub fn check(&self, now: u64, timestamp: u64) -> Result<()> {
        if now.abs_diff(timestamp) > self.max_skew {
            return Err(Error::StaleTimestamp { timestamp, now });
        }
        Ok(())
    }
}
