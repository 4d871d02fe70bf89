//! Domain-separated hashing: two hash-to-scalar functions, an extendable
//! output function, and the point KDF built on it.

use sha2::{Digest, Sha256};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use super::curve::{Curve, GroupPoint, Scalar};
use crate::error::{Error, Result};

const TAG_H1: &[u8] = b"lpdp:h1:";
const TAG_H2: &[u8] = b"lpdp:h2:";
const TAG_H3: &[u8] = b"lpdp:h3:";
const TAG_KDF: &[u8] = b"lpdp:kdf:";

/// Length of keys produced by [`kdf_point`].
pub const KDF_LEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashFn {
    H1,
    H3,
}

/// SHA-256 over `tag ∥ data`, reduced modulo the group order.
pub fn hash_to_scalar(curve: &'static Curve, which: HashFn, data: &[u8]) -> Scalar {
    let tag = match which {
        HashFn::H1 => TAG_H1,
        HashFn::H3 => TAG_H3,
    };
    let digest = Sha256::new()
        .chain_update(tag)
        .chain_update(data)
        .finalize();
    Scalar::from_bytes_reduced(curve, &digest)
}

/// SHAKE256 with the requested output length bound into the input, so
/// different lengths give unrelated streams.
pub fn xof(data: &[u8], out_len: usize) -> Vec<u8> {
    let mut h = Shake256::default();
    h.update(TAG_H2);
    h.update(&(out_len as u32).to_be_bytes());
    h.update(data);
    let mut out = vec![0u8; out_len];
    h.finalize_xof().read(&mut out);
    out
}

pub fn kdf_point(p: &GroupPoint) -> Result<[u8; KDF_LEN]> {
    if p.is_identity() {
        return Err(Error::IdentityPoint);
    }
    let mut input = TAG_KDF.to_vec();
    input.extend_from_slice(&p.to_bytes());
    let mut out = [0u8; KDF_LEN];
    out.copy_from_slice(&xof(&input, KDF_LEN));
    Ok(out)
}

/// XOR `b` into `a` over the shorter length.
pub fn xor_in_place(a: &mut [u8], b: &[u8]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

/// The hash functions bound to one curve's scalar field.
#[derive(Debug, Clone, Copy)]
pub struct HashSuite {
    curve: &'static Curve,
}

impl HashSuite {
    pub fn new(curve: &'static Curve) -> Self {
        HashSuite { curve }
    }

    pub fn h1(&self, data: &[u8]) -> Scalar {
        hash_to_scalar(self.curve, HashFn::H1, data)
    }

    pub fn h2(&self, data: &[u8], out_len: usize) -> Vec<u8> {
        xof(data, out_len)
    }

    pub fn h3(&self, data: &[u8]) -> Scalar {
        hash_to_scalar(self.curve, HashFn::H3, data)
    }

    /// `H3(i)` for a one-based attribute index.
    pub fn h3_index(&self, index: usize) -> Scalar {
        self.h3(&(index as u32).to_be_bytes())
    }

    pub fn kdf(&self, p: &GroupPoint) -> Result<[u8; KDF_LEN]> {
        kdf_point(p)
    }
}
