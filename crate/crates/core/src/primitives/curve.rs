//! Short Weierstrass curves `y^2 = x^3 + ax + b` of prime order, their scalar
//! field, and compressed point encodings.
//!
//! Points are kept in Jacobian coordinates; affine conversion happens only on
//! encoding. Both supported curves have cofactor 1, so every on-curve point
//! is a group element.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::LazyLock;

use rand::{CryptoRng, RngCore};
use serde::{Deserialize, Serialize};

use super::field::{self, Limbs, Modulus, ZERO};
use super::ops;
use crate::error::{Error, Result};

/// Named curves the group layer can be instantiated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveId {
    /// 160-bit prime order, 80-bit security.
    #[default]
    BrainpoolP160r1,
    /// 256-bit prime order, 128-bit security.
    Secp256k1,
}

impl CurveId {
    pub fn curve(self) -> &'static Curve {
        match self {
            CurveId::BrainpoolP160r1 => &BRAINPOOL_P160R1,
            CurveId::Secp256k1 => &SECP256K1,
        }
    }

    pub fn wire_id(self) -> u8 {
        match self {
            CurveId::BrainpoolP160r1 => 1,
            CurveId::Secp256k1 => 2,
        }
    }

    pub fn from_wire_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(CurveId::BrainpoolP160r1),
            2 => Ok(CurveId::Secp256k1),
            _ => Err(Error::Encoding("unknown curve id")),
        }
    }
}

pub struct Curve {
    id: CurveId,
    name: &'static str,
    base: Modulus,
    order: Modulus,
    a: Limbs,
    b: Limbs,
    a_is_zero: bool,
    gx: Limbs,
    gy: Limbs,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

static BRAINPOOL_P160R1: LazyLock<Curve> = LazyLock::new(|| {
    Curve::new(
        CurveId::BrainpoolP160r1,
        "brainpoolP160r1",
        "E95E4A5F737059DC60DFC7AD95B3D8139515620F",
        "E95E4A5F737059DC60DF5991D45029409E60FC09",
        "340E7BE2A280EB74E2BE61BADA745D97E8F7C300",
        "1E589A8595423412134FAA2DBDEC95C8D8675E58",
        "BED5AF16EA3F6A4F62938C4631EB5AF7BDBCDBC3",
        "1667CB477A1A8EC338F94741669C976316DA6321",
    )
});

static SECP256K1: LazyLock<Curve> = LazyLock::new(|| {
    Curve::new(
        CurveId::Secp256k1,
        "secp256k1",
        "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F",
        "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141",
        "00",
        "07",
        "79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798",
        "483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8",
    )
});

impl Curve {
    #[allow(clippy::too_many_arguments)]
    fn new(
        id: CurveId,
        name: &'static str,
        p: &str,
        n: &str,
        a: &str,
        b: &str,
        gx: &str,
        gy: &str,
    ) -> Self {
        let base = Modulus::from_hex(p);
        assert!(base.is_three_mod_four(), "decompression needs p = 3 mod 4");
        let a_plain = field::limbs_from_hex(a);
        Curve {
            id,
            name,
            a: base.to_mont(&a_plain),
            b: base.to_mont(&field::limbs_from_hex(b)),
            a_is_zero: field::limbs_is_zero(&a_plain),
            gx: base.to_mont(&field::limbs_from_hex(gx)),
            gy: base.to_mont(&field::limbs_from_hex(gy)),
            order: Modulus::from_hex(n),
            base,
        }
    }

    pub fn id(&self) -> CurveId {
        self.id
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Bit length of the group order.
    pub fn order_bits(&self) -> u32 {
        self.order.bits()
    }

    /// Width of a canonical scalar encoding in bytes.
    pub fn scalar_len(&self) -> usize {
        self.order.byte_len()
    }

    /// Width of a compressed point encoding in bytes.
    pub fn point_len(&self) -> usize {
        1 + self.base.byte_len()
    }

    pub fn generator(&'static self) -> GroupPoint {
        GroupPoint {
            x: self.gx,
            y: self.gy,
            z: self.base.one(),
            curve: self,
        }
    }

    pub fn identity(&'static self) -> GroupPoint {
        GroupPoint {
            x: self.base.one(),
            y: self.base.one(),
            z: ZERO,
            curve: self,
        }
    }

    fn rhs(&self, x: &Limbs) -> Limbs {
        let f = &self.base;
        let x3 = f.mul(&f.square(x), x);
        let ax = f.mul(&self.a, x);
        f.add(&f.add(&x3, &ax), &self.b)
    }
}

/// Element of the scalar field `Z_n`, `n` the group order.
#[derive(Clone, Copy)]
pub struct Scalar {
    repr: Limbs,
    curve: &'static Curve,
}

impl Scalar {
    pub fn zero(curve: &'static Curve) -> Self {
        Scalar { repr: ZERO, curve }
    }

    pub fn one(curve: &'static Curve) -> Self {
        Scalar {
            repr: curve.order.one(),
            curve,
        }
    }

    pub fn from_u64(curve: &'static Curve, v: u64) -> Self {
        Scalar {
            repr: curve.order.to_mont(&[v, 0, 0, 0]),
            curve,
        }
    }

    /// Uniform scalar by rejection sampling.
    pub fn random<R: RngCore + CryptoRng>(curve: &'static Curve, rng: &mut R) -> Self {
        let order = &curve.order;
        let len = order.byte_len();
        let excess = (len * 8) as u32 - order.bits();
        let mut buf = vec![0u8; len];
        loop {
            rng.fill_bytes(&mut buf);
            buf[0] &= 0xff >> excess;
            let v = field::limbs_from_be(&buf);
            if order.is_canonical(&v) {
                return Scalar {
                    repr: order.to_mont(&v),
                    curve,
                };
            }
        }
    }

    pub fn random_nonzero<R: RngCore + CryptoRng>(curve: &'static Curve, rng: &mut R) -> Self {
        loop {
            let s = Self::random(curve, rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Strict decoding: exactly `scalar_len` big-endian bytes, value below `n`.
    pub fn from_bytes(curve: &'static Curve, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != curve.scalar_len() {
            return Err(Error::LengthMismatch {
                expected: curve.scalar_len(),
                got: bytes.len(),
            });
        }
        let v = field::limbs_from_be(bytes);
        if !curve.order.is_canonical(&v) {
            return Err(Error::Encoding("scalar not reduced"));
        }
        Ok(Scalar {
            repr: curve.order.to_mont(&v),
            curve,
        })
    }

    /// Interprets up to 64 big-endian bytes as an integer and reduces it mod `n`.
    pub fn from_bytes_reduced(curve: &'static Curve, bytes: &[u8]) -> Self {
        Scalar {
            repr: curve.order.reduce_be(bytes),
            curve,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let plain = self.curve.order.leave_mont(&self.repr);
        field::limbs_to_be(&plain, self.curve.scalar_len())
    }

    pub fn curve(&self) -> &'static Curve {
        self.curve
    }

    pub fn is_zero(&self) -> bool {
        field::limbs_is_zero(&self.repr)
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        ops::record_inversion();
        Ok(Scalar {
            repr: self.curve.order.invert(&self.repr),
            curve: self.curve,
        })
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    fn canonical(&self) -> Limbs {
        self.curve.order.leave_mont(&self.repr)
    }

    fn same_curve(&self, other: &Scalar) {
        debug_assert!(
            std::ptr::eq(self.curve, other.curve),
            "scalars from different curves"
        );
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.curve, other.curve) && self.repr == other.repr
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.curve.id.hash(state);
        self.repr.hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar(0x{})", hex::encode(self.to_bytes()))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.same_curve(&rhs);
        Scalar {
            repr: self.curve.order.add(&self.repr, &rhs.repr),
            curve: self.curve,
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = *self + rhs;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.same_curve(&rhs);
        Scalar {
            repr: self.curve.order.sub(&self.repr, &rhs.repr),
            curve: self.curve,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.same_curve(&rhs);
        Scalar {
            repr: self.curve.order.mul(&self.repr, &rhs.repr),
            curve: self.curve,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            repr: self.curve.order.neg(&self.repr),
            curve: self.curve,
        }
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(mut iter: I) -> Scalar {
        let first = iter
            .next()
            .expect("sum of an empty scalar sequence has no curve");
        iter.fold(first, |acc, s| acc + s)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(mut iter: I) -> Scalar {
        let first = iter
            .next()
            .expect("product of an empty scalar sequence has no curve");
        iter.fold(first, |acc, s| acc * s)
    }
}

/// A curve point in Jacobian coordinates; `z = 0` is the identity.
#[derive(Clone, Copy)]
pub struct GroupPoint {
    x: Limbs,
    y: Limbs,
    z: Limbs,
    curve: &'static Curve,
}

impl GroupPoint {
    pub fn curve(&self) -> &'static Curve {
        self.curve
    }

    pub fn is_identity(&self) -> bool {
        field::limbs_is_zero(&self.z)
    }

    pub fn double(&self) -> GroupPoint {
        if self.is_identity() {
            return *self;
        }
        let f = &self.curve.base;
        let xx = f.square(&self.x);
        let yy = f.square(&self.y);
        let yyyy = f.square(&yy);
        let zz = f.square(&self.z);
        let s = f.double(&f.sub(&f.sub(&f.square(&f.add(&self.x, &yy)), &xx), &yyyy));
        let mut m = f.add(&f.double(&xx), &xx);
        if !self.curve.a_is_zero {
            m = f.add(&m, &f.mul(&self.curve.a, &f.square(&zz)));
        }
        let t = f.sub(&f.square(&m), &f.double(&s));
        let yyyy8 = f.double(&f.double(&f.double(&yyyy)));
        let y3 = f.sub(&f.mul(&m, &f.sub(&s, &t)), &yyyy8);
        let z3 = f.sub(&f.sub(&f.square(&f.add(&self.y, &self.z)), &yy), &zz);
        GroupPoint {
            x: t,
            y: y3,
            z: z3,
            curve: self.curve,
        }
    }

    fn add_point(&self, other: &GroupPoint) -> GroupPoint {
        debug_assert!(
            std::ptr::eq(self.curve, other.curve),
            "points from different curves"
        );
        if self.is_identity() {
            return *other;
        }
        if other.is_identity() {
            return *self;
        }
        let f = &self.curve.base;
        let z1z1 = f.square(&self.z);
        let z2z2 = f.square(&other.z);
        let u1 = f.mul(&self.x, &z2z2);
        let u2 = f.mul(&other.x, &z1z1);
        let s1 = f.mul(&f.mul(&self.y, &other.z), &z2z2);
        let s2 = f.mul(&f.mul(&other.y, &self.z), &z1z1);
        let h = f.sub(&u2, &u1);
        let r = f.double(&f.sub(&s2, &s1));
        if field::limbs_is_zero(&h) {
            return if field::limbs_is_zero(&r) {
                self.double()
            } else {
                self.curve.identity()
            };
        }
        let i = f.square(&f.double(&h));
        let j = f.mul(&h, &i);
        let v = f.mul(&u1, &i);
        let x3 = f.sub(&f.sub(&f.square(&r), &j), &f.double(&v));
        let y3 = f.sub(&f.mul(&r, &f.sub(&v, &x3)), &f.double(&f.mul(&s1, &j)));
        let z3 = f.mul(
            &f.sub(&f.sub(&f.square(&f.add(&self.z, &other.z)), &z1z1), &z2z2),
            &h,
        );
        GroupPoint {
            x: x3,
            y: y3,
            z: z3,
            curve: self.curve,
        }
    }

    /// Scalar multiplication with a 4-bit fixed window. Counted by [`ops`].
    pub fn scalar_mul(&self, k: &Scalar) -> GroupPoint {
        debug_assert!(
            std::ptr::eq(self.curve, k.curve),
            "scalar from a different curve"
        );
        ops::record_mul();
        let bits = k.canonical();
        let mut table = [self.curve.identity(); 16];
        for i in 1..16 {
            table[i] = table[i - 1].add_point(self);
        }
        let mut acc = self.curve.identity();
        let windows = (self.curve.order_bits() as usize).div_ceil(4);
        for w in (0..windows).rev() {
            for _ in 0..4 {
                acc = acc.double();
            }
            let nibble = (bits[w / 16] >> ((w % 16) * 4)) & 0xf;
            if nibble != 0 {
                acc = acc.add_point(&table[nibble as usize]);
            }
        }
        acc
    }

    fn to_affine(self) -> Option<(Limbs, Limbs)> {
        if self.is_identity() {
            return None;
        }
        let f = &self.curve.base;
        let zinv = f.invert(&self.z);
        let zinv2 = f.square(&zinv);
        Some((
            f.mul(&self.x, &zinv2),
            f.mul(&self.y, &f.mul(&zinv2, &zinv)),
        ))
    }

    /// Affine coordinates as canonical big-endian bytes, `None` for the identity.
    pub fn affine_bytes(&self) -> Option<(Vec<u8>, Vec<u8>)> {
        let f = &self.curve.base;
        self.to_affine().map(|(x, y)| {
            (
                field::limbs_to_be(&f.leave_mont(&x), f.byte_len()),
                field::limbs_to_be(&f.leave_mont(&y), f.byte_len()),
            )
        })
    }

    pub fn is_on_curve(&self) -> bool {
        match self.to_affine() {
            None => true,
            Some((x, y)) => self.curve.base.square(&y) == self.curve.rhs(&x),
        }
    }

    /// Compressed encoding: `0x02|0x03 ∥ x`. The identity is all zero bytes
    /// of the same width.
    pub fn to_bytes(&self) -> Vec<u8> {
        let f = &self.curve.base;
        let mut out = vec![0u8; self.curve.point_len()];
        if let Some((x, y)) = self.to_affine() {
            let y = f.leave_mont(&y);
            out[0] = 0x02 | (y[0] & 1) as u8;
            out[1..].copy_from_slice(&field::limbs_to_be(&f.leave_mont(&x), f.byte_len()));
        }
        out
    }

    pub fn from_bytes(curve: &'static Curve, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != curve.point_len() {
            return Err(Error::LengthMismatch {
                expected: curve.point_len(),
                got: bytes.len(),
            });
        }
        let f = &curve.base;
        match bytes[0] {
            0x00 if bytes[1..].iter().all(|&b| b == 0) => Ok(curve.identity()),
            tag @ (0x02 | 0x03) => {
                let x = field::limbs_from_be(&bytes[1..]);
                if !f.is_canonical(&x) {
                    return Err(Error::Encoding("x coordinate not reduced"));
                }
                let x = f.to_mont(&x);
                let mut y = f.sqrt(&curve.rhs(&x)).ok_or(Error::NotOnCurve)?;
                if (f.leave_mont(&y)[0] & 1) as u8 != tag & 1 {
                    y = f.neg(&y);
                }
                Ok(GroupPoint {
                    x,
                    y,
                    z: f.one(),
                    curve,
                })
            }
            _ => Err(Error::Encoding("bad point prefix")),
        }
    }
}

impl PartialEq for GroupPoint {
    fn eq(&self, other: &Self) -> bool {
        if !std::ptr::eq(self.curve, other.curve) {
            return false;
        }
        match (self.is_identity(), other.is_identity()) {
            (true, true) => return true,
            (false, false) => {}
            _ => return false,
        }
        let f = &self.curve.base;
        let z1z1 = f.square(&self.z);
        let z2z2 = f.square(&other.z);
        f.mul(&self.x, &z2z2) == f.mul(&other.x, &z1z1)
            && f.mul(&self.y, &f.mul(&z2z2, &other.z)) == f.mul(&other.y, &f.mul(&z1z1, &self.z))
    }
}

impl Eq for GroupPoint {}

impl fmt::Debug for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupPoint(0x{})", hex::encode(self.to_bytes()))
    }
}

impl Add for GroupPoint {
    type Output = GroupPoint;
    fn add(self, rhs: GroupPoint) -> GroupPoint {
        self.add_point(&rhs)
    }
}

impl AddAssign for GroupPoint {
    fn add_assign(&mut self, rhs: GroupPoint) {
        *self = self.add_point(&rhs);
    }
}

impl Neg for GroupPoint {
    type Output = GroupPoint;
    fn neg(self) -> GroupPoint {
        GroupPoint {
            y: self.curve.base.neg(&self.y),
            ..self
        }
    }
}

impl Sub for GroupPoint {
    type Output = GroupPoint;
    fn sub(self, rhs: GroupPoint) -> GroupPoint {
        self.add_point(&-rhs)
    }
}

impl Mul<Scalar> for GroupPoint {
    type Output = GroupPoint;
    fn mul(self, k: Scalar) -> GroupPoint {
        GroupPoint::scalar_mul(&self, &k)
    }
}

impl Mul<GroupPoint> for Scalar {
    type Output = GroupPoint;
    fn mul(self, p: GroupPoint) -> GroupPoint {
        GroupPoint::scalar_mul(&p, &self)
    }
}
