//! Data access control: policy-polynomial encryption by data providers,
//! traceability masking by the authority, warrant-based decryption by
//! investigators, and tracing of leaked responses.
//!
//! For a policy `ℙ` the provider expands `g1(x) = ∏_{p_i = 0} (x + H3(i))`
//! and publishes `L_j = n1·X_j` (`j ≥ 1`) together with
//! `N1 = n1·g1(s1)·s2·G` and `N2 = n1·g1(s1)·s3·G`, both assembled from the
//! published series. An investigator whose permissions cover the policy
//! divides out `g2 = g1 / g_𝔸` in the exponent and recovers `n1·G`.

use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::params::{AccessPolicy, PermissionSet, PublicParams};
use crate::polyshare::{expand_roots, quotient_mask};
use crate::primitives::{kdf_point, xof, xor_in_place, Curve, GroupPoint, HashFn, Scalar};

/// Length of the symmetric key `k` and of `c1`.
pub const KEY_LEN: usize = 32;

/// `4-byte BE length ∥ payload ∥ zeros`, at least `2·scalar_len` bytes and a
/// multiple of 16, so the trace mask always fits inside `c2`.
pub fn pad(payload: &[u8], curve: &Curve) -> Vec<u8> {
    let min = 2 * curve.scalar_len();
    let len = (4 + payload.len()).max(min).next_multiple_of(16);
    let mut out = Vec::with_capacity(len);
    out.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    out.extend_from_slice(payload);
    out.resize(len, 0);
    out
}

pub fn unpad(padded: &[u8]) -> Result<Vec<u8>> {
    if padded.len() < 4 || padded.len() % 16 != 0 {
        return Err(Error::Padding);
    }
    let n = u32::from_be_bytes(padded[..4].try_into().expect("4 bytes")) as usize;
    let body = &padded[4..];
    if n > body.len() || body[n..].iter().any(|&b| b != 0) {
        return Err(Error::Padding);
    }
    Ok(body[..n].to_vec())
}

/// Record stored by a roadside unit for one upload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherCore {
    pub accident_id: Vec<u8>,
    pub policy: AccessPolicy,
    pub l: Vec<GroupPoint>,
    pub n1: GroupPoint,
    pub n2: GroupPoint,
    pub c1: [u8; KEY_LEN],
    pub c2: Vec<u8>,
}

/// What the authority returns to an investigator: the record with `c2`
/// replaced by its masked form `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessResponse {
    pub policy: AccessPolicy,
    pub l: Vec<GroupPoint>,
    pub n1: GroupPoint,
    pub n2: GroupPoint,
    pub c1: [u8; KEY_LEN],
    pub c: Vec<u8>,
}

/// The two scalars an investigator needs to decrypt, `(w_IN,1, w_IN,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WarrantKey {
    pub w1: Scalar,
    pub w2: Scalar,
}

impl WarrantKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.w1.to_bytes();
        out.extend_from_slice(&self.w2.to_bytes());
        out
    }
}

fn binding_scalar(curve: &'static Curve, policy: &AccessPolicy, padded: &[u8], k: &[u8]) -> Scalar {
    let mut input = policy.to_bytes();
    input.extend_from_slice(&(padded.len() as u32).to_be_bytes());
    input.extend_from_slice(padded);
    input.extend_from_slice(k);
    crate::primitives::hash_to_scalar(curve, HashFn::H1, &input)
}

fn check_policy(pp: &PublicParams, policy: &AccessPolicy) -> Result<()> {
    if policy.len() != pp.n_wi {
        return Err(Error::LengthMismatch {
            expected: pp.n_wi,
            got: policy.len(),
        });
    }
    Ok(())
}

pub fn encrypt<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    policy: &AccessPolicy,
    message: &[u8],
    accident_id: &[u8],
    rng: &mut R,
) -> Result<CipherCore> {
    check_policy(pp, policy)?;
    let curve = pp.curve();
    let mut k = [0u8; KEY_LEN];
    rng.fill_bytes(&mut k);
    let padded = pad(message, curve);
    let n1 = binding_scalar(curve, policy, &padded, &k);

    let g1 = expand_roots(curve, &pp.attribute_roots(), policy.bits())?;
    let l = (1..=g1.degree()).map(|j| pp.x[j].scalar_mul(&n1)).collect();
    let mut n1_point = curve.identity();
    let mut n2_point = curve.identity();
    for (j, c) in g1.coeffs().iter().enumerate() {
        let s = n1 * *c;
        n1_point += pp.y[j].scalar_mul(&s);
        n2_point += pp.z[j].scalar_mul(&s);
    }

    let mut c1 = k;
    xor_in_place(
        &mut c1,
        &xof(&kdf_point(&curve.generator().scalar_mul(&n1))?, KEY_LEN),
    );
    let mut c2 = padded;
    let stream = xof(&k, c2.len());
    xor_in_place(&mut c2, &stream);

    Ok(CipherCore {
        accident_id: accident_id.to_vec(),
        policy: policy.clone(),
        l,
        n1: n1_point,
        n2: n2_point,
        c1,
        c2,
    })
}

fn trace_mask(pid: &Scalar, sk_in: &Scalar, len: usize) -> Result<Vec<u8>> {
    let mut mask = pid.to_bytes();
    mask.extend_from_slice(&sk_in.to_bytes());
    if mask.len() > len {
        return Err(Error::LengthMismatch {
            expected: mask.len(),
            got: len,
        });
    }
    mask.resize(len, 0);
    Ok(mask)
}

/// `c = c2 ⊕ (PID ∥ sk_IN ∥ 0…)`.
pub fn ta_mask(c2: &[u8], pid: &Scalar, sk_in: &Scalar) -> Result<Vec<u8>> {
    let mut c = c2.to_vec();
    xor_in_place(&mut c, &trace_mask(pid, sk_in, c2.len())?);
    Ok(c)
}

/// Builds the authority's response to an access request.
pub fn respond(core: &CipherCore, pid: &Scalar, sk_in: &Scalar) -> Result<AccessResponse> {
    Ok(AccessResponse {
        policy: core.policy.clone(),
        l: core.l.clone(),
        n1: core.n1,
        n2: core.n2,
        c1: core.c1,
        c: ta_mask(&core.c2, pid, sk_in)?,
    })
}

/// Recovers the message, or fails with `AccessDenied` when the permissions
/// do not cover the policy (checked before any group operation) and
/// `VerificationFailed` when the recovered key does not reproduce `n1·G`.
pub fn decrypt(
    pp: &PublicParams,
    warrant: &WarrantKey,
    permissions: &PermissionSet,
    resp: &AccessResponse,
    pid: &Scalar,
    sk_in: &Scalar,
) -> Result<Vec<u8>> {
    check_policy(pp, &resp.policy)?;
    let h = quotient_mask(resp.policy.bits(), permissions.bits())?;
    let expected_l = pp.n_wi - resp.policy.count_ones();
    if resp.l.len() != expected_l {
        return Err(Error::LengthMismatch {
            expected: expected_l,
            got: resp.l.len(),
        });
    }
    let curve = pp.curve();
    let roots = pp.attribute_roots();
    let excluded: Vec<bool> = h.iter().map(|&b| !b).collect();
    let g2 = expand_roots(curve, &roots, &excluded)?;

    let mut k_point = curve.identity();
    for (c, l) in g2.coeffs().iter().skip(1).zip(&resp.l) {
        k_point += l.scalar_mul(c);
    }
    let root_product: Scalar = roots
        .iter()
        .zip(&h)
        .filter(|(_, &hi)| hi)
        .map(|(r, _)| *r)
        .fold(Scalar::one(curve), |acc, r| acc * r);
    let y_prime = resp.n1.scalar_mul(&warrant.w2);
    let z_prime = resp.n2.scalar_mul(&warrant.w1);
    let candidate = (y_prime + z_prime - k_point).scalar_mul(&root_product.invert()?);

    let mut k = resp.c1;
    xor_in_place(
        &mut k,
        &xof(
            &kdf_point(&candidate).map_err(|_| Error::VerificationFailed)?,
            KEY_LEN,
        ),
    );
    let mut padded = resp.c.clone();
    let mask = trace_mask(pid, sk_in, padded.len())?;
    let stream = xof(&k, padded.len());
    xor_in_place(&mut padded, &mask);
    xor_in_place(&mut padded, &stream);

    let n1 = binding_scalar(curve, &resp.policy, &padded, &k);
    if curve.generator().scalar_mul(&n1) != candidate {
        return Err(Error::VerificationFailed);
    }
    unpad(&padded)
}

/// Decodes `(PID, sk_IN)` from a leaked masked body and the stored `c2`.
pub fn trace(c: &[u8], c2: &[u8], curve: &'static Curve) -> Result<(Scalar, Scalar)> {
    if c.len() != c2.len() {
        return Err(Error::LengthMismatch {
            expected: c2.len(),
            got: c.len(),
        });
    }
    let w = curve.scalar_len();
    if c.len() < 2 * w {
        return Err(Error::MalformedLeak);
    }
    let mut leak = c[..2 * w].to_vec();
    xor_in_place(&mut leak, &c2[..2 * w]);
    let pid = Scalar::from_bytes(curve, &leak[..w]).map_err(|_| Error::MalformedLeak)?;
    let sk = Scalar::from_bytes(curve, &leak[w..]).map_err(|_| Error::MalformedLeak)?;
    if sk.is_zero() {
        return Err(Error::MalformedLeak);
    }
    Ok((pid, sk))
}
