//! Montgomery arithmetic over a runtime prime modulus of at most 256 bits.
//!
//! Values are stored as four little-endian 64-bit limbs in Montgomery form
//! (`a * R mod m`, `R = 2^256`). The modulus description is built once per
//! curve and shared by reference, so field elements stay `Copy`.

pub(crate) type Limbs = [u64; 4];

pub(crate) const ZERO: Limbs = [0; 4];

#[inline(always)]
fn adc(a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = a as u128 + b as u128 + carry as u128;
    (t as u64, (t >> 64) as u64)
}

#[inline(always)]
fn sbb(a: u64, b: u64, borrow: u64) -> (u64, u64) {
    let t = (a as u128).wrapping_sub(b as u128 + (borrow >> 63) as u128);
    (t as u64, (t >> 64) as u64)
}

#[inline(always)]
fn mac(acc: u64, a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = acc as u128 + (a as u128) * (b as u128) + carry as u128;
    (t as u64, (t >> 64) as u64)
}

/// `a - b` with the final borrow word (all ones when `a < b`).
#[inline(always)]
fn sub_limbs(a: &Limbs, b: &Limbs) -> (Limbs, u64) {
    let mut out = ZERO;
    let mut borrow = 0;
    for i in 0..4 {
        (out[i], borrow) = sbb(a[i], b[i], borrow);
    }
    (out, borrow)
}

#[inline(always)]
fn add_limbs(a: &Limbs, b: &Limbs) -> (Limbs, u64) {
    let mut out = ZERO;
    let mut carry = 0;
    for i in 0..4 {
        (out[i], carry) = adc(a[i], b[i], carry);
    }
    (out, carry)
}

pub(crate) fn limbs_lt(a: &Limbs, b: &Limbs) -> bool {
    sub_limbs(a, b).1 != 0
}

pub(crate) fn limbs_is_zero(a: &Limbs) -> bool {
    a.iter().all(|&w| w == 0)
}

/// Big-endian bytes (at most 32) to limbs. Longer inputs are rejected by callers.
pub(crate) fn limbs_from_be(bytes: &[u8]) -> Limbs {
    debug_assert!(bytes.len() <= 32);
    let mut out = ZERO;
    for (i, &b) in bytes.iter().rev().enumerate() {
        out[i / 8] |= (b as u64) << (8 * (i % 8));
    }
    out
}

pub(crate) fn limbs_to_be(a: &Limbs, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for (i, byte) in out.iter_mut().rev().enumerate() {
        if i < 32 {
            *byte = (a[i / 8] >> (8 * (i % 8))) as u8;
        }
    }
    out
}

pub(crate) fn limbs_bit(a: &Limbs, i: usize) -> bool {
    (a[i / 64] >> (i % 64)) & 1 == 1
}

pub(crate) fn limbs_from_hex(hex_str: &str) -> Limbs {
    let bytes = hex::decode(hex_str).expect("static hex constant");
    limbs_from_be(&bytes)
}

/// A prime modulus with precomputed Montgomery constants.
#[derive(Debug)]
pub struct Modulus {
    m: Limbs,
    n0: u64,
    r2: Limbs,
    one: Limbs,
    bits: u32,
    byte_len: usize,
    minus_two: Limbs,
    sqrt_exp: Limbs,
}

impl Modulus {
    pub(crate) fn new(m: Limbs) -> Self {
        assert!(m[0] & 1 == 1, "modulus must be odd");
        let bits = 256 - leading_zeros(&m);
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m[0].wrapping_mul(inv)));
        }
        let n0 = inv.wrapping_neg();

        // R mod m and R^2 mod m by repeated doubling from 1.
        let mut x: Limbs = [1, 0, 0, 0];
        let mut one = ZERO;
        for i in 0..512 {
            x = double_mod(&x, &m);
            if i == 255 {
                one = x;
            }
        }
        let r2 = x;

        let (minus_two, _) = sub_limbs(&m, &[2, 0, 0, 0]);
        // (m + 1) / 4, meaningful only when m = 3 mod 4.
        let (plus_one, carry) = add_limbs(&m, &[1, 0, 0, 0]);
        let mut sqrt_exp = ZERO;
        for i in 0..4 {
            let hi = if i == 3 { carry } else { plus_one[i + 1] };
            sqrt_exp[i] = (plus_one[i] >> 2) | (hi << 62);
        }

        Modulus {
            m,
            n0,
            r2,
            one,
            bits,
            byte_len: bits.div_ceil(8) as usize,
            minus_two,
            sqrt_exp,
        }
    }

    pub(crate) fn from_hex(hex_str: &str) -> Self {
        Self::new(limbs_from_hex(hex_str))
    }

    /// Bit length of the modulus.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Width of the canonical big-endian encoding.
    pub fn byte_len(&self) -> usize {
        self.byte_len
    }

    pub(crate) fn one(&self) -> Limbs {
        self.one
    }

    pub(crate) fn is_three_mod_four(&self) -> bool {
        self.m[0] & 3 == 3
    }

    #[inline]
    pub(crate) fn mul(&self, a: &Limbs, b: &Limbs) -> Limbs {
        let m = &self.m;
        let mut t = [0u64; 6];
        for bi in b.iter() {
            let mut c = 0;
            for j in 0..4 {
                (t[j], c) = mac(t[j], a[j], *bi, c);
            }
            let (s, c2) = adc(t[4], c, 0);
            t[4] = s;
            t[5] = c2;

            let k = t[0].wrapping_mul(self.n0);
            let (_, mut c) = mac(t[0], k, m[0], 0);
            for j in 1..4 {
                (t[j - 1], c) = mac(t[j], k, m[j], c);
            }
            let (s, c3) = adc(t[4], c, 0);
            t[3] = s;
            t[4] = t[5] + c3;
        }
        let r = [t[0], t[1], t[2], t[3]];
        let (reduced, borrow) = sub_limbs(&r, m);
        if t[4] != 0 || borrow == 0 {
            reduced
        } else {
            r
        }
    }

    #[inline]
    pub(crate) fn square(&self, a: &Limbs) -> Limbs {
        self.mul(a, a)
    }

    #[inline]
    pub(crate) fn add(&self, a: &Limbs, b: &Limbs) -> Limbs {
        let (s, carry) = add_limbs(a, b);
        let (reduced, borrow) = sub_limbs(&s, &self.m);
        if carry != 0 || borrow == 0 {
            reduced
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: &Limbs, b: &Limbs) -> Limbs {
        let (d, borrow) = sub_limbs(a, b);
        if borrow != 0 {
            add_limbs(&d, &self.m).0
        } else {
            d
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: &Limbs) -> Limbs {
        if limbs_is_zero(a) {
            ZERO
        } else {
            sub_limbs(&self.m, a).0
        }
    }

    #[inline]
    pub(crate) fn double(&self, a: &Limbs) -> Limbs {
        self.add(a, a)
    }

    /// Plain integer (any value below 2^256) into Montgomery form, reduced.
    pub(crate) fn to_mont(&self, a: &Limbs) -> Limbs {
        self.mul(a, &self.r2)
    }

    pub(crate) fn leave_mont(&self, a: &Limbs) -> Limbs {
        self.mul(a, &[1, 0, 0, 0])
    }

    /// Reduces a big-endian integer of up to 64 bytes.
    pub(crate) fn reduce_be(&self, bytes: &[u8]) -> Limbs {
        assert!(bytes.len() <= 64, "wide reduction limited to 512 bits");
        let split = bytes.len().saturating_sub(32);
        let (hi, lo) = bytes.split_at(split);
        let lo = self.to_mont(&limbs_from_be(lo));
        if hi.is_empty() {
            return lo;
        }
        // hi * 2^256 in Montgomery form is hi * R * R.
        let hi = self.mul(&self.to_mont(&limbs_from_be(hi)), &self.r2);
        self.add(&lo, &hi)
    }

    pub(crate) fn pow(&self, base: &Limbs, exp: &Limbs) -> Limbs {
        let mut acc = self.one;
        let top = 256 - leading_zeros(exp) as usize;
        for i in (0..top).rev() {
            acc = self.square(&acc);
            if limbs_bit(exp, i) {
                acc = self.mul(&acc, base);
            }
        }
        acc
    }

    /// Fermat inversion; zero maps to zero.
    pub(crate) fn invert(&self, a: &Limbs) -> Limbs {
        self.pow(a, &self.minus_two)
    }

    /// Square root for `m = 3 mod 4`, `None` for non-residues.
    pub(crate) fn sqrt(&self, a: &Limbs) -> Option<Limbs> {
        debug_assert!(self.is_three_mod_four());
        let r = self.pow(a, &self.sqrt_exp);
        (self.square(&r) == *a).then_some(r)
    }

    pub(crate) fn is_canonical(&self, a: &Limbs) -> bool {
        limbs_lt(a, &self.m)
    }
}

fn leading_zeros(a: &Limbs) -> u32 {
    let mut n = 0;
    for &w in a.iter().rev() {
        if w == 0 {
            n += 64;
        } else {
            return n + w.leading_zeros();
        }
    }
    n
}

fn double_mod(a: &Limbs, m: &Limbs) -> Limbs {
    let (s, carry) = add_limbs(a, a);
    let (reduced, borrow) = sub_limbs(&s, m);
    if carry != 0 || borrow == 0 {
        reduced
    } else {
        s
    }
}
