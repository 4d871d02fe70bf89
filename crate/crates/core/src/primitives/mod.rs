//! Group, field, and hash primitives shared by every protocol component.
//!
//! Canonical encodings used on the wire: scalars are fixed-width big-endian
//! (`ceil(log2 n / 8)` bytes), points are compressed.

mod curve;
mod field;
mod hash;
pub mod ops;

pub use curve::{Curve, CurveId, GroupPoint, Scalar};
pub use hash::{hash_to_scalar, kdf_point, xof, xor_in_place, HashFn, HashSuite, KDF_LEN};
pub use ops::{measure, OpCount};
