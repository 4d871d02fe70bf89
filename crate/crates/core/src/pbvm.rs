//! Privacy-friendly batch verification of data-provider uploads.
//!
//! Every registered provider holds the same system token `t`. A roadside
//! unit's secret key is bound to it, `sk_RSU = sk_TA·H1(t) + r_RSU` with
//! `pk_RSU = r_RSU·G`, so `pk_RSU + H1(t)·pk_TA = sk_RSU·G`. A provider signs
//! a ciphertext digest `h = H1(c2, A)` as
//!
//! ```text
//! sig = r·h·(pk_RSU + H1(t)·pk_TA),   R = r·G
//! ```
//!
//! and the unit checks a whole batch with one equation,
//! `(Σ sig_i)·sk_RSU⁻¹ = Σ h_i·R_i`. Signatures carry no provider key or
//! identity.

use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::primitives::{hash_to_scalar, Curve, GroupPoint, HashFn, Scalar};

/// The shared upload token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemToken(Scalar);

impl SystemToken {
    pub fn new(t: Scalar) -> Self {
        SystemToken(t)
    }

    pub fn scalar(&self) -> Scalar {
        self.0
    }

    /// `H1(t)`.
    pub fn digest(&self) -> Scalar {
        hash_to_scalar(self.0.curve(), HashFn::H1, &self.0.to_bytes())
    }
}

/// Key pair of a roadside unit, bound to the system token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsuCredential {
    sk: Scalar,
    pk: GroupPoint,
}

impl RsuCredential {
    /// `sk = sk_TA·H1(t) + r`, `pk = r·G` for a fresh nonzero `r`.
    pub fn derive<R: RngCore + CryptoRng>(
        sk_ta: &Scalar,
        token: &SystemToken,
        rng: &mut R,
    ) -> Self {
        let curve = sk_ta.curve();
        loop {
            let r = Scalar::random_nonzero(curve, rng);
            let sk = *sk_ta * token.digest() + r;
            if !sk.is_zero() {
                return RsuCredential {
                    sk,
                    pk: curve.generator().scalar_mul(&r),
                };
            }
        }
    }

    pub fn from_parts(sk: Scalar, pk: GroupPoint) -> Self {
        RsuCredential { sk, pk }
    }

    pub fn secret(&self) -> Scalar {
        self.sk
    }

    pub fn public(&self) -> GroupPoint {
        self.pk
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UploadSignature {
    pub sig: GroupPoint,
    pub r: GroupPoint,
    pub accident_id: Vec<u8>,
}

/// `H1(len(c2) ∥ c2 ∥ A)`.
pub fn message_digest(c2: &[u8], accident_id: &[u8], curve: &'static Curve) -> Scalar {
    let mut input = Vec::with_capacity(4 + c2.len() + accident_id.len());
    input.extend_from_slice(&(c2.len() as u32).to_be_bytes());
    input.extend_from_slice(c2);
    input.extend_from_slice(accident_id);
    hash_to_scalar(curve, HashFn::H1, &input)
}

/// Signing state for one provider and one target unit; caches the binding
/// point `pk_RSU + H1(t)·pk_TA`.
#[derive(Debug, Clone)]
pub struct UploadSigner {
    binding: GroupPoint,
}

impl UploadSigner {
    pub fn new(token: &SystemToken, pk_rsu: &GroupPoint, pk_ta: &GroupPoint) -> Self {
        UploadSigner {
            binding: *pk_rsu + pk_ta.scalar_mul(&token.digest()),
        }
    }

    pub fn sign<R: RngCore + CryptoRng>(
        &self,
        c2: &[u8],
        accident_id: &[u8],
        rng: &mut R,
    ) -> UploadSignature {
        let curve = self.binding.curve();
        let r = Scalar::random_nonzero(curve, rng);
        let h = message_digest(c2, accident_id, curve);
        UploadSignature {
            sig: self.binding.scalar_mul(&(r * h)),
            r: curve.generator().scalar_mul(&r),
            accident_id: accident_id.to_vec(),
        }
    }
}

pub fn sign_upload<R: RngCore + CryptoRng>(
    token: &SystemToken,
    pk_rsu: &GroupPoint,
    pk_ta: &GroupPoint,
    c2: &[u8],
    accident_id: &[u8],
    rng: &mut R,
) -> UploadSignature {
    UploadSigner::new(token, pk_rsu, pk_ta).sign(c2, accident_id, rng)
}

/// A ciphertext body and the signature over it, borrowed for verification.
#[derive(Debug, Clone, Copy)]
pub struct VerifyItem<'a> {
    pub c2: &'a [u8],
    pub signature: &'a UploadSignature,
}

/// Aggregate check over a batch sharing one accident id.
///
/// Costs `B + 1` scalar multiplications and one scalar inversion. A batch of
/// one is the single-signature check.
pub fn batch_verify(sk_rsu: &Scalar, items: &[VerifyItem<'_>]) -> Result<bool> {
    let first = items.first().ok_or(Error::EmptyBatch)?;
    let accident = &first.signature.accident_id;
    if items.iter().any(|it| &it.signature.accident_id != accident) {
        return Err(Error::MixedAccident);
    }
    let curve = sk_rsu.curve();
    if items.iter().any(|it| it.signature.r.is_identity()) {
        return Ok(false);
    }
    let mut sig_sum = curve.identity();
    for it in items {
        sig_sum += it.signature.sig;
    }
    let lhs = sig_sum.scalar_mul(&sk_rsu.invert()?);
    let mut rhs = curve.identity();
    for it in items {
        let h = message_digest(it.c2, accident, curve);
        rhs += it.signature.r.scalar_mul(&h);
    }
    Ok(lhs == rhs)
}

/// Indices of the items that fail on their own, found by recursive halving.
/// Returned ascending; empty when the whole batch verifies.
pub fn isolate_invalid(sk_rsu: &Scalar, items: &[VerifyItem<'_>]) -> Vec<usize> {
    let mut bad = Vec::new();
    bisect(sk_rsu, items, 0, &mut bad);
    bad
}

fn bisect(sk_rsu: &Scalar, items: &[VerifyItem<'_>], offset: usize, bad: &mut Vec<usize>) {
    if items.is_empty() || batch_verify(sk_rsu, items).unwrap_or(false) {
        return;
    }
    if items.len() == 1 {
        bad.push(offset);
        return;
    }
    let mid = items.len() / 2;
    bisect(sk_rsu, &items[..mid], offset, bad);
    bisect(sk_rsu, &items[mid..], offset + mid, bad);
}
