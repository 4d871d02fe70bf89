//! Privacy-preserving forensic data sharing for traffic accidents.
//!
//! Data providers encrypt accident records under an attribute policy and
//! sign them with a shared token so roadside units can verify uploads in
//! batches without learning who sent them. Investigators decrypt with a
//! two-scalar warrant assembled from partials issued by several independent
//! warrant issuers, and any leaked response can be traced back to the
//! investigator who requested it.

pub mod authority;
pub mod bench;
pub mod dacm;
pub mod diwim;
pub mod envelope;
mod error;
pub mod params;
pub mod pbvm;
pub mod polyshare;
pub mod primitives;
pub mod selftest;
pub mod sim;

pub use authority::{setup, InCredentials, MasterSecrets, Pseudonym, WiCredentials};
pub use dacm::{AccessResponse, CipherCore, WarrantKey};
pub use diwim::{PartialWarrant, Warrant, WarrantUpdate, WiState};
pub use envelope::{Envelope, KeyPair, Signature};
pub use error::{Error, Result};
pub use params::{AccessPolicy, PermissionSet, PublicParams};
pub use pbvm::{RsuCredential, SystemToken, UploadSignature};
pub use primitives::{Curve, CurveId, GroupPoint, Scalar};
