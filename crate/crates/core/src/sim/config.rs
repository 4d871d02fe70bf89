//! Scenario configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{AccessPolicy, PermissionSet};
use crate::primitives::CurveId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_wi: usize,
    pub n_dp: usize,
    pub n_rsu: usize,
    pub n_in: usize,
    pub batch_size: usize,
    /// Policy attached to every upload.
    pub policy: AccessPolicy,
    /// Permissions granted to every investigator.
    pub permissions: PermissionSet,
    pub seed: u64,
    #[serde(default)]
    pub curve: CurveId,
    /// Permissions after the update phase; no update when absent.
    #[serde(default)]
    pub updated_permissions: Option<PermissionSet>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n_wi", self.n_wi),
            ("n_dp", self.n_dp),
            ("n_rsu", self.n_rsu),
            ("n_in", self.n_in),
            ("batch_size", self.batch_size),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be at least 1")));
        }
        if self.n_wi > u16::MAX as usize {
            return Err(Error::Config("n_wi too large".into()));
        }
        let lens = [
            ("policy", Some(self.policy.len())),
            ("permissions", Some(self.permissions.len())),
            (
                "updated_permissions",
                self.updated_permissions.as_ref().map(|p| p.len()),
            ),
        ];
        for (name, len) in lens {
            if let Some(len) = len.filter(|&l| l != self.n_wi) {
                return Err(Error::Config(format!(
                    "{name} has {len} bits, expected n_wi = {}",
                    self.n_wi
                )));
            }
        }
        Ok(())
    }

    /// Issuer identities `WI-1 … WI-n`.
    pub fn wi_ids(&self) -> Vec<String> {
        (1..=self.n_wi).map(|i| format!("WI-{i}")).collect()
    }

    pub fn in_ids(&self) -> Vec<String> {
        (1..=self.n_in).map(|i| format!("IN-{i}")).collect()
    }
}
