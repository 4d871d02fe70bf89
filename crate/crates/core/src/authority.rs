//! Trusted-authority key material: system setup and the credentials handed
//! to each entity at registration.

use std::fmt;

use rand::{CryptoRng, RngCore};

use crate::envelope::KeyPair;
use crate::error::{Error, Result};
use crate::params::{AccessPolicy, PublicParams, HASH_SUITE_ID};
use crate::pbvm::{RsuCredential, SystemToken};
use crate::polyshare::SharingPolynomial;
use crate::primitives::{hash_to_scalar, Curve, CurveId, HashFn, Scalar};

/// An investigator pseudonym, `H1(ID_IN)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pseudonym(pub Scalar);

impl Pseudonym {
    pub fn derive(curve: &'static Curve, id: &str) -> Self {
        Pseudonym(hash_to_scalar(curve, HashFn::H1, id.as_bytes()))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.to_bytes()
    }
}

impl fmt::Debug for Pseudonym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pseudonym({})", &hex::encode(self.0.to_bytes())[..12])
    }
}

/// Shamir node of a warrant issuer, `H1(ID_WI)`.
pub fn issuer_node(curve: &'static Curve, id: &str) -> Scalar {
    hash_to_scalar(curve, HashFn::H1, id.as_bytes())
}

/// Everything the trusted authority keeps private.
#[derive(Clone)]
pub struct MasterSecrets {
    pub s1: Scalar,
    pub s2_parts: Vec<Scalar>,
    pub s2: Scalar,
    pub s3: Scalar,
    pub token: SystemToken,
    ta_keys: KeyPair,
    sharing: SharingPolynomial,
    wi_ids: Vec<String>,
}

impl fmt::Debug for MasterSecrets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MasterSecrets").finish_non_exhaustive()
    }
}

/// Secrets delivered to warrant issuer `index` (one-based).
#[derive(Debug, Clone)]
pub struct WiCredentials {
    pub index: usize,
    pub id: String,
    pub keys: KeyPair,
    pub s1: Scalar,
    pub s2: Scalar,
    pub s2_i: Scalar,
    pub s3_i: Scalar,
    pub f_s3_i: Scalar,
}

#[derive(Debug, Clone)]
pub struct DpCredentials {
    pub keys: KeyPair,
    pub token: SystemToken,
    pub policy: AccessPolicy,
}

#[derive(Debug, Clone)]
pub struct InCredentials {
    pub id: String,
    pub keys: KeyPair,
    pub pid: Pseudonym,
}

/// Draws the master secrets and publishes the parameters for `wi_ids.len()`
/// warrant issuers.
pub fn setup<R: RngCore + CryptoRng>(
    curve_id: CurveId,
    wi_ids: &[String],
    rng: &mut R,
) -> Result<(PublicParams, MasterSecrets)> {
    let n_wi = wi_ids.len();
    if n_wi == 0 {
        return Err(Error::Config(
            "at least one warrant issuer is required".into(),
        ));
    }
    let curve = curve_id.curve();
    let g = curve.generator();

    let wi_nodes: Vec<Scalar> = wi_ids.iter().map(|id| issuer_node(curve, id)).collect();
    for (i, x) in wi_nodes.iter().enumerate() {
        if x.is_zero() || wi_nodes[..i].contains(x) {
            return Err(Error::BadInterpolationPoints);
        }
    }

    let s1 = Scalar::random_nonzero(curve, rng);
    let s2_parts: Vec<Scalar> = (0..n_wi)
        .map(|_| Scalar::random_nonzero(curve, rng))
        .collect();
    let s2: Scalar = s2_parts.iter().copied().product();
    let s3 = Scalar::random_nonzero(curve, rng);
    let ta_keys = KeyPair::generate(curve, rng);
    let token = SystemToken::new(Scalar::random_nonzero(curve, rng));
    let sharing = SharingPolynomial::random(s3, n_wi, rng)?;

    let mut power = Scalar::one(curve);
    let (mut x, mut y, mut z) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..=n_wi {
        x.push(g.scalar_mul(&power));
        y.push(g.scalar_mul(&(power * s2)));
        z.push(g.scalar_mul(&(power * s3)));
        power = power * s1;
    }

    let pp = PublicParams {
        curve: curve_id,
        n_wi,
        x,
        y,
        z,
        pk_ta: ta_keys.public(),
        wi_nodes,
        hash_suite: HASH_SUITE_ID,
    };
    let secrets = MasterSecrets {
        s1,
        s2_parts,
        s2,
        s3,
        token,
        ta_keys,
        sharing,
        wi_ids: wi_ids.to_vec(),
    };
    Ok((pp, secrets))
}

impl MasterSecrets {
    pub fn ta_keys(&self) -> &KeyPair {
        &self.ta_keys
    }

    /// The Shamir polynomial `f` with `f(0) = s3`.
    pub fn share_at(&self, x: Scalar) -> Scalar {
        self.sharing.eval(x)
    }

    pub fn register_wi<R: RngCore + CryptoRng>(
        &self,
        index: usize,
        rng: &mut R,
    ) -> Result<WiCredentials> {
        let n = self.s2_parts.len();
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, max: n });
        }
        let curve = self.s1.curve();
        let id = self.wi_ids[index - 1].clone();
        let s3_i = issuer_node(curve, &id);
        Ok(WiCredentials {
            index,
            keys: KeyPair::generate(curve, rng),
            s1: self.s1,
            s2: self.s2,
            s2_i: self.s2_parts[index - 1],
            s3_i,
            f_s3_i: self.sharing.eval(s3_i),
            id,
        })
    }

    pub fn register_dp<R: RngCore + CryptoRng>(
        &self,
        policy: AccessPolicy,
        rng: &mut R,
    ) -> DpCredentials {
        DpCredentials {
            keys: KeyPair::generate(self.s1.curve(), rng),
            token: self.token,
            policy,
        }
    }

    pub fn register_rsu<R: RngCore + CryptoRng>(&self, rng: &mut R) -> RsuCredential {
        RsuCredential::derive(&self.ta_keys.secret(), &self.token, rng)
    }

    pub fn register_in<R: RngCore + CryptoRng>(&self, id: &str, rng: &mut R) -> InCredentials {
        let curve = self.s1.curve();
        InCredentials {
            id: id.to_string(),
            keys: KeyPair::generate(curve, rng),
            pid: Pseudonym::derive(curve, id),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn ids(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("wi-{i}")).collect()
    }

    #[test]
    fn published_series_matches_secrets() {
        let mut rng = ChaCha20Rng::seed_from_u64(40);
        let (pp, ms) = setup(CurveId::BrainpoolP160r1, &ids(5), &mut rng).unwrap();
        let g = pp.curve().generator();
        assert_eq!(pp.x.len(), 6);
        assert_eq!(pp.x[0], g);
        assert_eq!(pp.y[0], g.scalar_mul(&ms.s2));
        assert_eq!(pp.z[0], g.scalar_mul(&ms.s3));
        let mut pow = Scalar::one(pp.curve());
        for i in 0..=5 {
            assert_eq!(pp.x[i], g.scalar_mul(&pow));
            assert_eq!(pp.y[i], g.scalar_mul(&(pow * ms.s2)));
            assert_eq!(pp.z[i], g.scalar_mul(&(pow * ms.s3)));
            pow = pow * ms.s1;
        }
        assert_eq!(ms.s2, ms.s2_parts.iter().copied().product::<Scalar>());
        assert_eq!(ms.share_at(Scalar::zero(pp.curve())), ms.s3);
    }

    #[test]
    fn setup_is_deterministic_under_seed() {
        let a = setup(
            CurveId::BrainpoolP160r1,
            &ids(3),
            &mut ChaCha20Rng::seed_from_u64(7),
        )
        .unwrap()
        .0;
        let b = setup(
            CurveId::BrainpoolP160r1,
            &ids(3),
            &mut ChaCha20Rng::seed_from_u64(7),
        )
        .unwrap()
        .0;
        assert_eq!(a.to_bytes(), b.to_bytes());
    }

    #[test]
    fn setup_rejects_bad_issuer_lists() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        assert!(setup(CurveId::BrainpoolP160r1, &[], &mut rng).is_err());
        let dup = vec!["wi".to_string(), "wi".to_string()];
        assert_eq!(
            setup(CurveId::BrainpoolP160r1, &dup, &mut rng).unwrap_err(),
            Error::BadInterpolationPoints
        );
    }

    #[test]
    fn registration_material() {
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let (pp, ms) = setup(CurveId::BrainpoolP160r1, &ids(4), &mut rng).unwrap();
        let wi = ms.register_wi(2, &mut rng).unwrap();
        assert_eq!(wi.s3_i, pp.wi_nodes[1]);
        assert_eq!(wi.f_s3_i, ms.share_at(wi.s3_i));
        assert!(ms.register_wi(5, &mut rng).is_err());
        let rsu = ms.register_rsu(&mut rng);
        let g = pp.curve().generator();
        assert_eq!(
            g.scalar_mul(&rsu.secret()),
            rsu.public() + pp.pk_ta.scalar_mul(&ms.token.digest())
        );
        let inv = ms.register_in("investigator-1", &mut rng);
        assert_eq!(inv.pid, Pseudonym::derive(pp.curve(), "investigator-1"));
    }
}
