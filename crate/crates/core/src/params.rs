//! Published system parameters and the attribute bit-vectors shared by
//! encryption, warrant issuance, and decryption.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primitives::{Curve, CurveId, GroupPoint, HashSuite, Scalar};

/// Identifier of the hash construction in use (SHA-256 to scalar, SHAKE256 XOF).
pub const HASH_SUITE_ID: u8 = 1;

macro_rules! attribute_bits {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(Vec<bool>);

        impl $name {
            pub fn new(bits: Vec<bool>) -> Self {
                $name(bits)
            }

            pub fn all_ones(n: usize) -> Self {
                $name(vec![true; n])
            }

            pub fn all_zeros(n: usize) -> Self {
                $name(vec![false; n])
            }

            pub fn bits(&self) -> &[bool] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            /// Number of set bits.
            pub fn count_ones(&self) -> usize {
                self.0.iter().filter(|&&b| b).count()
            }

            /// Bit for the one-based issuer index.
            pub fn get(&self, index: usize) -> bool {
                self.0[index - 1]
            }

            pub fn set(&mut self, index: usize, bit: bool) {
                self.0[index - 1] = bit;
            }

            /// One byte per bit, prefixed with the bit count.
            pub fn to_bytes(&self) -> Vec<u8> {
                let mut out = (self.0.len() as u16).to_be_bytes().to_vec();
                out.extend(self.0.iter().map(|&b| b as u8));
                out
            }

            pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
                if bytes.len() < 2 {
                    return Err(Error::Encoding("bit vector too short"));
                }
                let n = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
                if bytes.len() != 2 + n {
                    return Err(Error::Encoding("bit vector length prefix"));
                }
                bytes[2..]
                    .iter()
                    .map(|&b| match b {
                        0 => Ok(false),
                        1 => Ok(true),
                        _ => Err(Error::Encoding("bit value")),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map($name)
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                s.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::Config(format!("bit string {s:?} must contain only 0 and 1"))),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map($name)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for &b in &self.0 {
                    f.write_str(if b { "1" } else { "0" })?;
                }
                Ok(())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), self)
            }
        }

        impl TryFrom<String> for $name {
            type Error = Error;
            fn try_from(s: String) -> Result<Self> {
                s.parse()
            }
        }

        impl From<$name> for String {
            fn from(v: $name) -> String {
                v.to_string()
            }
        }
    };
}

attribute_bits!(
    /// Access policy attached to a ciphertext: bit `i` set means issuer `i`'s
    /// permission is required.
    AccessPolicy
);

attribute_bits!(
    /// Permission identifiers held by an investigator, one per warrant issuer.
    PermissionSet
);

impl PermissionSet {
    pub fn satisfies(&self, policy: &AccessPolicy) -> bool {
        self.len() == policy.len()
            && policy
                .bits()
                .iter()
                .zip(self.bits())
                .all(|(&p, &a)| a || !p)
    }
}

/// System constants published by the trusted authority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicParams {
    pub curve: CurveId,
    pub n_wi: usize,
    /// `X_i = s1^i G` for `i = 0..=n_wi`.
    pub x: Vec<GroupPoint>,
    /// `Y_i = s1^i s2 G`.
    pub y: Vec<GroupPoint>,
    /// `Z_i = s1^i s3 G`.
    pub z: Vec<GroupPoint>,
    pub pk_ta: GroupPoint,
    /// Published Shamir nodes of the warrant issuers, `H1(ID_WI_i)`.
    pub wi_nodes: Vec<Scalar>,
    pub hash_suite: u8,
}

impl PublicParams {
    pub fn curve(&self) -> &'static Curve {
        self.curve.curve()
    }

    pub fn hashes(&self) -> HashSuite {
        HashSuite::new(self.curve())
    }

    /// `H3(1), …, H3(n_wi)`: the roots of the policy polynomials.
    pub fn attribute_roots(&self) -> Vec<Scalar> {
        let h = self.hashes();
        (1..=self.n_wi).map(|i| h.h3_index(i)).collect()
    }

    /// Deterministic byte image of the parameters.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.curve.wire_id(), self.hash_suite];
        out.extend_from_slice(&(self.n_wi as u16).to_be_bytes());
        for p in self.x.iter().chain(&self.y).chain(&self.z) {
            out.extend_from_slice(&p.to_bytes());
        }
        out.extend_from_slice(&self.pk_ta.to_bytes());
        for s in &self.wi_nodes {
            out.extend_from_slice(&s.to_bytes());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_vectors_parse_and_print() {
        let p: AccessPolicy = "01001".parse().unwrap();
        assert_eq!(p.bits(), &[false, true, false, false, true]);
        assert_eq!(p.count_ones(), 2);
        assert_eq!(p.to_string(), "01001");
        assert!(p.get(2));
        assert!("01a".parse::<AccessPolicy>().is_err());
        assert_eq!(AccessPolicy::from_bytes(&p.to_bytes()).unwrap(), p);
        assert!(AccessPolicy::from_bytes(&[0, 2, 1, 2]).is_err());
    }

    #[test]
    fn subset_check() {
        let a: PermissionSet = "11101".parse().unwrap();
        assert!(a.satisfies(&"01001".parse().unwrap()));
        assert!(!a.satisfies(&"00010".parse().unwrap()));
        assert!(!a.satisfies(&"0100".parse().unwrap()));
    }

    #[test]
    fn serde_as_bit_string() {
        let p: PermissionSet = serde_json::from_str("\"110\"").unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"110\"");
    }
}
