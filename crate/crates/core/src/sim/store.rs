//! Append-only record store keyed by accident id.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::dacm::CipherCore;
use crate::error::{Error, Result};
use crate::primitives::Curve;

use super::wire::{decode_record, encode_record};

const FILE_EXT: &str = "rec";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredRecord {
    pub core: CipherCore,
    /// Unit that verified and stored the upload.
    pub rsu: usize,
    /// Clock tick at storage time.
    pub tick: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecordStore {
    records: BTreeMap<Vec<u8>, Vec<StoredRecord>>,
}

impl RecordStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends and returns the record's index within its accident.
    pub fn append(&mut self, record: StoredRecord) -> usize {
        let list = self
            .records
            .entry(record.core.accident_id.clone())
            .or_default();
        list.push(record);
        list.len() - 1
    }

    pub fn get(&self, accident_id: &[u8], index: usize) -> Result<&StoredRecord> {
        self.records
            .get(accident_id)
            .and_then(|l| l.get(index))
            .ok_or(Error::RecordNotFound)
    }

    pub fn records(&self, accident_id: &[u8]) -> &[StoredRecord] {
        self.records
            .get(accident_id)
            .map(Vec::as_slice)
            .unwrap_or_default()
    }

    pub fn accidents(&self) -> impl Iterator<Item = &[u8]> {
        self.records.keys().map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.records.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One file per accident, `hex(accident_id).rec`, holding
    /// `u32 BE length ∥ rsu: u32 ∥ tick: u64 ∥ record frame` entries.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (accident, list) in &self.records {
            let mut out = Vec::new();
            for r in list {
                let frame = encode_record(&r.core);
                out.extend_from_slice(&((12 + frame.len()) as u32).to_be_bytes());
                out.extend_from_slice(&(r.rsu as u32).to_be_bytes());
                out.extend_from_slice(&r.tick.to_be_bytes());
                out.extend_from_slice(&frame);
            }
            fs::write(
                dir.join(format!("{}.{FILE_EXT}", hex::encode(accident))),
                out,
            )?;
        }
        Ok(())
    }

    pub fn load(dir: &Path, curve: &'static Curve) -> Result<Self> {
        let mut store = RecordStore::new();
        let mut paths: Vec<_> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == FILE_EXT))
            .collect();
        paths.sort();
        for path in paths {
            let bytes = fs::read(&path)?;
            let mut rest = bytes.as_slice();
            while !rest.is_empty() {
                if rest.len() < 4 {
                    return Err(Error::Encoding("truncated record length"));
                }
                let len = u32::from_be_bytes(rest[..4].try_into().expect("4 bytes")) as usize;
                let entry = rest
                    .get(4..4 + len)
                    .filter(|e| e.len() >= 12)
                    .ok_or(Error::Encoding("truncated record"))?;
                store.append(StoredRecord {
                    rsu: u32::from_be_bytes(entry[..4].try_into().expect("4 bytes")) as usize,
                    tick: u64::from_be_bytes(entry[4..12].try_into().expect("8 bytes")),
                    core: decode_record(curve, &entry[12..])?,
                });
                rest = &rest[4 + len..];
            }
        }
        Ok(store)
    }
}
