//! Measurement harness behind the `bench-*` commands: batch versus
//! individual verification, and warrant update versus full issuance.

use std::io::{Read, Write};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::envelope::KeyPair;
use crate::error::{Error, Result};
use crate::pbvm::{
    batch_verify, RsuCredential, SystemToken, UploadSignature, UploadSigner, VerifyItem,
};
use crate::primitives::{measure, CurveId, Scalar};
use crate::sim::{ScenarioConfig, System};

pub const MIN_REPS: usize = 10;
pub const CSV_HEADER: [&str; 7] = [
    "phase",
    "param_name",
    "param_value",
    "wall_time_ns",
    "group_mults",
    "bytes",
    "reps",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub phase: String,
    pub param_name: String,
    pub param_value: u64,
    /// Median over `reps` runs.
    pub wall_time_ns: u64,
    pub group_mults: u64,
    pub bytes: u64,
    pub reps: usize,
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    if header != CSV_HEADER {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn check_reps(reps: usize) -> Result<()> {
    if reps < MIN_REPS {
        return Err(Error::Config(format!("reps must be at least {MIN_REPS}")));
    }
    Ok(())
}

/// Median wall time of `reps` runs of `f`.
pub fn median_ns<T>(reps: usize, mut f: impl FnMut() -> T) -> u64 {
    let mut times: Vec<u64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed().as_nanos() as u64
        })
        .collect();
    times.sort_unstable();
    times[times.len() / 2]
}

/// `1, 2, 4, …` up to and including `max`.
pub fn batch_sizes(max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(1usize), |b| b.checked_mul(2))
        .take_while(|&b| b <= max)
        .collect();
    if out.last() != Some(&max) && max > 0 {
        out.push(max);
    }
    out
}

/// Signed uploads for one roadside unit, used by the batch benchmarks.
pub struct BatchFixture {
    pub sk_rsu: Scalar,
    pub items: Vec<(Vec<u8>, UploadSignature)>,
}

impl BatchFixture {
    pub fn new(curve: CurveId, size: usize, seed: u64) -> Self {
        let curve = curve.curve();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let token = SystemToken::new(Scalar::random_nonzero(curve, &mut rng));
        let ta = KeyPair::generate(curve, &mut rng);
        let rsu = RsuCredential::derive(&ta.secret(), &token, &mut rng);
        let signer = UploadSigner::new(&token, &rsu.public(), &ta.public());
        let items = (0..size)
            .map(|i| {
                let c2 = format!("upload body {i:06}").into_bytes();
                let sig = signer.sign(&c2, b"bench-accident", &mut rng);
                (c2, sig)
            })
            .collect();
        BatchFixture {
            sk_rsu: rsu.secret(),
            items,
        }
    }

    pub fn views(&self) -> Vec<VerifyItem<'_>> {
        self.items
            .iter()
            .map(|(c2, s)| VerifyItem { c2, signature: s })
            .collect()
    }

    pub fn verify_batch(&self) -> bool {
        batch_verify(&self.sk_rsu, &self.views()).unwrap_or(false)
    }

    pub fn verify_each(&self) -> bool {
        self.views()
            .iter()
            .all(|v| batch_verify(&self.sk_rsu, std::slice::from_ref(v)).unwrap_or(false))
    }

    /// Signature bytes checked: `(sig, R)` per item.
    pub fn signature_bytes(&self) -> u64 {
        self.items
            .iter()
            .map(|(_, s)| (s.sig.to_bytes().len() + s.r.to_bytes().len()) as u64)
            .sum()
    }
}

pub fn bench_batch(max_batch: usize, reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    check_reps(reps)?;
    if max_batch == 0 {
        return Err(Error::Config("max batch must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for b in batch_sizes(max_batch) {
        let fx = BatchFixture::new(CurveId::default(), b, seed ^ b as u64);
        let (ok, batch_ops) = measure(|| fx.verify_batch());
        let (ok_each, each_ops) = measure(|| fx.verify_each());
        if !ok || !ok_each {
            return Err(Error::VerificationFailed);
        }
        let row = |phase: &str, ns, mults| BenchRow {
            phase: phase.to_string(),
            param_name: "batch_size".to_string(),
            param_value: b as u64,
            wall_time_ns: ns,
            group_mults: mults,
            bytes: fx.signature_bytes(),
            reps,
        };
        rows.push(row(
            "batch_verify",
            median_ns(reps, || fx.verify_batch()),
            batch_ops.scalar_muls,
        ));
        rows.push(row(
            "individual_verify",
            median_ns(reps, || fx.verify_each()),
            each_ops.scalar_muls,
        ));
    }
    Ok(rows)
}

fn warrant_config(n_wi: usize, seed: u64) -> ScenarioConfig {
    let bits = "1".repeat(n_wi);
    ScenarioConfig {
        n_wi,
        n_dp: 1,
        n_rsu: 1,
        n_in: 1,
        batch_size: 1,
        policy: bits.parse().expect("bit string"),
        permissions: bits.parse().expect("bit string"),
        seed,
        curve: CurveId::default(),
        updated_permissions: None,
    }
}

/// One `issue` row at `n_wi`, then one `update` row per entry of `n_u_list`.
/// Update deltas flip the first `n_u` issuers' bits.
pub fn bench_warrant(
    n_wi: usize,
    n_u_list: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    check_reps(reps)?;
    if let Some(&bad) = n_u_list.iter().find(|&&n_u| n_u > n_wi) {
        return Err(Error::Config(format!("n_u = {bad} exceeds n_wi = {n_wi}")));
    }
    let mut sys = System::setup(warrant_config(n_wi, seed))?;
    let (first, ops) = measure(|| sys.issue_warrant(0));
    let first = first?;
    let issue_ns = median_ns(reps, || sys.issue_warrant(0).expect("issuance"));
    let mut rows = vec![BenchRow {
        phase: "issue".to_string(),
        param_name: "n_wi".to_string(),
        param_value: n_wi as u64,
        wall_time_ns: issue_ns,
        group_mults: ops.scalar_muls,
        bytes: first.traffic.frame_bytes as u64,
        reps,
    }];
    for &n_u in n_u_list {
        let mut bit = false;
        let mut step = |sys: &mut System| {
            let delta: Vec<(usize, bool)> = (1..=n_u).map(|i| (i, bit)).collect();
            bit = !bit;
            sys.phase_update(0, &delta)
        };
        let (report, ops) = measure(|| step(&mut sys));
        let report = report?;
        let ns = median_ns(reps, || step(&mut sys).expect("update"));
        rows.push(BenchRow {
            phase: "update".to_string(),
            param_name: "n_u".to_string(),
            param_value: n_u as u64,
            wall_time_ns: ns,
            group_mults: ops.scalar_muls,
            bytes: report.traffic.frame_bytes as u64,
            reps,
        });
    }
    Ok(rows)
}
