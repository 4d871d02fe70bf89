//! Polynomial algebra over the scalar field: masked root-product expansion,
//! Lagrange coefficients at zero, and Shamir secret sharing.
//!
//! Coefficient vectors are ascending: index `j` holds the coefficient of `x^j`.

use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::primitives::{Curve, Scalar};

/// `∏ (x + roots[j])` over the positions where the mask bit is clear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedRootPoly {
    coeffs: Vec<Scalar>,
}

impl MaskedRootPoly {
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Scalar) -> Scalar {
        let mut acc = Scalar::zero(x.curve());
        for c in self.coeffs.iter().rev() {
            acc = acc * x + *c;
        }
        acc
    }
}

/// Expands `∏_{j : mask[j] = false} (x + roots[j])`.
///
/// An all-set mask yields the constant polynomial `1`.
pub fn expand_roots(
    curve: &'static Curve,
    roots: &[Scalar],
    mask: &[bool],
) -> Result<MaskedRootPoly> {
    if roots.len() != mask.len() {
        return Err(Error::LengthMismatch {
            expected: roots.len(),
            got: mask.len(),
        });
    }
    let mut coeffs = vec![Scalar::one(curve)];
    for (root, _) in roots.iter().zip(mask).filter(|(_, &excluded)| !excluded) {
        // multiply by (x + root)
        let mut next = vec![Scalar::zero(curve); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += *c * *root;
            next[i + 1] += *c;
        }
        coeffs = next;
    }
    Ok(MaskedRootPoly { coeffs })
}

/// `h_i = a_i - p_i`, defined only when every policy bit is covered by a
/// permission bit. The error carries the first uncovered (zero-based) position.
pub fn quotient_mask(policy: &[bool], permissions: &[bool]) -> Result<Vec<bool>> {
    if policy.len() != permissions.len() {
        return Err(Error::LengthMismatch {
            expected: policy.len(),
            got: permissions.len(),
        });
    }
    policy
        .iter()
        .zip(permissions)
        .enumerate()
        .map(|(i, (&p, &a))| match (a, p) {
            (false, true) => Err(Error::AccessDenied(i)),
            (a, p) => Ok(a && !p),
        })
        .collect()
}

/// The `i`-th Lagrange basis polynomial for nodes `xs`, evaluated at zero:
/// `∏_{j≠i} -x_j / (x_i - x_j)`.
pub fn lagrange_zero_coefficient(i: usize, xs: &[Scalar]) -> Result<Scalar> {
    let xi = *xs.get(i).ok_or(Error::IndexOutOfRange {
        index: i,
        max: xs.len(),
    })?;
    let curve = xi.curve();
    let mut num = Scalar::one(curve);
    let mut den = Scalar::one(curve);
    for (j, &xj) in xs.iter().enumerate() {
        if j == i {
            continue;
        }
        if xj == xi {
            return Err(Error::BadInterpolationPoints);
        }
        num = num * -xj;
        den = den * (xi - xj);
    }
    Ok(num * den.invert()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Share {
    pub x: Scalar,
    pub y: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareSet {
    pub shares: Vec<Share>,
    pub threshold: usize,
}

impl ShareSet {
    pub fn n(&self) -> usize {
        self.shares.len()
    }
}

/// Random polynomial of degree `threshold - 1` with the given constant term.
#[derive(Clone)]
pub struct SharingPolynomial {
    coeffs: Vec<Scalar>,
}

impl SharingPolynomial {
    pub fn random<R: RngCore + CryptoRng>(
        secret: Scalar,
        threshold: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if threshold == 0 {
            return Err(Error::InvalidThreshold {
                threshold,
                shares: 0,
            });
        }
        let curve = secret.curve();
        let mut coeffs = Vec::with_capacity(threshold);
        coeffs.push(secret);
        coeffs.extend((1..threshold).map(|_| Scalar::random(curve, rng)));
        Ok(SharingPolynomial { coeffs })
    }

    pub fn eval(&self, x: Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(x.curve()), |acc, c| acc * x + *c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn check_nodes(xs: &[Scalar]) -> Result<()> {
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero() || xs[..i].contains(x) {
            return Err(Error::BadInterpolationPoints);
        }
    }
    Ok(())
}

/// Splits `secret` into shares at caller-chosen nodes.
pub fn shamir_split_at<R: RngCore + CryptoRng>(
    xs: &[Scalar],
    threshold: usize,
    secret: Scalar,
    rng: &mut R,
) -> Result<ShareSet> {
    if threshold == 0 || threshold > xs.len() {
        return Err(Error::InvalidThreshold {
            threshold,
            shares: xs.len(),
        });
    }
    check_nodes(xs)?;
    let poly = SharingPolynomial::random(secret, threshold, rng)?;
    Ok(ShareSet {
        shares: xs.iter().map(|&x| Share { x, y: poly.eval(x) }).collect(),
        threshold,
    })
}

/// Splits `secret` into `n` shares at nodes `1..=n`.
pub fn shamir_split<R: RngCore + CryptoRng>(
    n: usize,
    threshold: usize,
    secret: Scalar,
    rng: &mut R,
) -> Result<ShareSet> {
    let curve = secret.curve();
    let xs: Vec<Scalar> = (1..=n as u64).map(|i| Scalar::from_u64(curve, i)).collect();
    shamir_split_at(&xs, threshold, secret, rng)
}

/// Interpolates `f(0)` from at least `threshold` shares.
pub fn shamir_recover(shares: &[Share], threshold: usize) -> Result<Scalar> {
    if threshold == 0 {
        return Err(Error::InvalidThreshold {
            threshold,
            shares: shares.len(),
        });
    }
    if shares.len() < threshold {
        return Err(Error::NotEnoughShares {
            needed: threshold,
            got: shares.len(),
        });
    }
    let xs: Vec<Scalar> = shares.iter().map(|s| s.x).collect();
    check_nodes(&xs)?;
    let mut acc = Scalar::zero(xs[0].curve());
    for (i, share) in shares.iter().enumerate() {
        acc += share.y * lagrange_zero_coefficient(i, &xs)?;
    }
    Ok(acc)
}
