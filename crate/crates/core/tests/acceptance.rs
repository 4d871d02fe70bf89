//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use lpdp_core::bench::{median_ns, BatchFixture};
use lpdp_core::dacm;
use lpdp_core::params::{AccessPolicy, PermissionSet};
use lpdp_core::pbvm::{batch_verify, UploadSignature, VerifyItem};
use lpdp_core::polyshare::{expand_roots, quotient_mask, shamir_recover, shamir_split, Share};
use lpdp_core::primitives::{measure, Curve, CurveId, Scalar};
use lpdp_core::sim::wire::{self, AccessRequestBody, Field, Kind, Message, IDENTITY_FIELDS};
use lpdp_core::sim::{AccessOutcome, Addr, Phase, ScenarioConfig, System, TraceOutcome};
use lpdp_core::{Error, Warrant};

const SEED: u64 = 0x5eed_2026;

// Pinned tolerances.
const BATCH_TIME_BUDGET: Duration = Duration::from_secs(30);
const ROUND_TRIP_TIME_BUDGET: Duration = Duration::from_secs(60);
const MAX_BATCH: usize = 64;
const RANDOM_BATCHES: usize = 1000;
const ROUND_TRIPS: usize = 1000;
const FAIL_CLOSED_TRIALS: usize = 1000;
const MAX_WALL_RATIO: f64 = 0.75;
const TIMING_REPS: usize = 15;
const UPDATE_BYTES_SLACK: f64 = 0.0;
const UPDATE_TO_ISSUE_DIVISOR: f64 = 3.0;
const BLINDING_BITS_PER_WI: usize = 1280;
const TRACE_TRIALS: usize = 100;
const UNLINKABILITY_SAMPLES: usize = 1000;
const POLY_INSTANCES: usize = 1000;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn(&mut ChaCha20Rng) -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    format!("unexpected error: {e}")
}

fn config(n_wi: usize, policy: &str, permissions: &str, seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        n_wi,
        n_dp: 10,
        n_rsu: 1,
        n_in: 1,
        batch_size: 10,
        policy: policy.parse().expect("bits"),
        permissions: permissions.parse().expect("bits"),
        seed,
        curve: CurveId::default(),
        updated_permissions: None,
    }
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    !needle.is_empty() && hay.windows(needle.len()).any(|w| w == needle)
}

// Per-item check written out directly: sig·sk⁻¹ = H1(len ∥ c2 ∥ A)·R.
fn single_item_oracle(curve: &'static Curve, sk: &Scalar, c2: &[u8], s: &UploadSignature) -> bool {
    let digest = Sha256::new()
        .chain_update(b"lpdp:h1:")
        .chain_update((c2.len() as u32).to_be_bytes())
        .chain_update(c2)
        .chain_update(&s.accident_id)
        .finalize();
    let h = Scalar::from_bytes_reduced(curve, &digest);
    let inv = sk.invert().expect("nonzero key");
    s.sig.scalar_mul(&inv) == s.r.scalar_mul(&h)
}

fn tamper(curve: &'static Curve, item: &mut (Vec<u8>, UploadSignature), rng: &mut ChaCha20Rng) {
    let g = curve.generator();
    match rng.gen_range(0..4) {
        0 => {
            let i = rng.gen_range(0..item.0.len());
            item.0[i] ^= 1 << rng.gen_range(0..8);
        }
        1 => item.1.sig += g,
        2 => item.1.r += g,
        _ => item.0.push(rng.gen()),
    }
}

fn criterion_1(rng: &mut ChaCha20Rng) -> Outcome {
    let curve = CurveId::default().curve();
    let start = Instant::now();
    for b in 1..=MAX_BATCH {
        let fx = BatchFixture::new(CurveId::default(), b, rng.gen());
        ensure(batch_verify(&fx.sk_rsu, &fx.views()) == Ok(true), || {
            format!("honest batch of {b} rejected")
        })?;
    }
    let pool = BatchFixture::new(CurveId::default(), MAX_BATCH, rng.gen());
    let (mut accepted, mut rejected) = (0, 0);
    for trial in 0..RANDOM_BATCHES {
        let b = rng.gen_range(1..=MAX_BATCH);
        let mut items: Vec<_> = pool.items.choose_multiple(rng, b).cloned().collect();
        let rate = [0.0, 0.02, 0.1, 0.5][trial % 4];
        for item in &mut items {
            if rng.gen_bool(rate) {
                tamper(curve, item, rng);
            }
        }
        let views: Vec<VerifyItem<'_>> = items
            .iter()
            .map(|(c2, s)| VerifyItem { c2, signature: s })
            .collect();
        let verdict = batch_verify(&pool.sk_rsu, &views).map_err(err)?;
        let oracle = items
            .iter()
            .all(|(c2, s)| single_item_oracle(curve, &pool.sk_rsu, c2, s));
        ensure(verdict == oracle, || {
            format!("trial {trial}: batch {verdict}, per-item {oracle}")
        })?;
        if verdict {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= BATCH_TIME_BUDGET, || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!(
        "honest B=1..{MAX_BATCH} accepted; {RANDOM_BATCHES} random batches agree ({accepted} valid, {rejected} tampered) in {elapsed:.1?}"
    ))
}

struct Issuer {
    sys: System,
    warrants: HashMap<Vec<bool>, Warrant>,
}

impl Issuer {
    fn new(n: usize, seed: u64) -> Self {
        let ones = "1".repeat(n);
        let sys = System::setup(config(n, &ones, &ones, seed)).expect("setup");
        Issuer {
            sys,
            warrants: HashMap::new(),
        }
    }

    fn warrant(&mut self, perms: &[bool]) -> Warrant {
        if let Some(w) = self.warrants.get(perms) {
            return w.clone();
        }
        let (pid, pk) = (
            self.sys.ins[0].creds.pid,
            self.sys.ins[0].creds.keys.public(),
        );
        for wi in &mut self.sys.wis {
            let bit = perms[wi.index() - 1];
            wi.set_permission(pid, pk, bit);
        }
        self.sys.issue_warrant(0).expect("issuance");
        let w = self.sys.ins[0].warrant.clone().expect("issued");
        self.warrants.insert(perms.to_vec(), w.clone());
        w
    }

    fn open(
        &self,
        w: &Warrant,
        claimed: &PermissionSet,
        core: &dacm::CipherCore,
    ) -> lpdp_core::Result<Vec<u8>> {
        let inv = &self.sys.ins[0];
        let (pid, sk) = (inv.creds.pid.0, inv.creds.keys.secret());
        let resp = dacm::respond(core, &pid, &sk)?;
        dacm::decrypt(&self.sys.pp, &w.credential(), claimed, &resp, &pid, &sk)
    }
}

fn perm_pool(n: usize, rng: &mut ChaCha20Rng) -> Vec<Vec<bool>> {
    let mut pool = vec![vec![true; n], vec![false; n]];
    pool.extend((0..6).map(|_| (0..n).map(|_| rng.gen()).collect::<Vec<bool>>()));
    pool
}

fn criterion_2(rng: &mut ChaCha20Rng) -> Outcome {
    let start = Instant::now();
    let mut issuers: Vec<Issuer> = (1..=8).map(|n| Issuer::new(n, rng.gen())).collect();
    let pools: Vec<Vec<Vec<bool>>> = (1..=8).map(|n| perm_pool(n, rng)).collect();

    for trial in 0..ROUND_TRIPS {
        let n = trial % 8 + 1;
        let perms = pools[n - 1].choose(rng).expect("pool").clone();
        let policy = AccessPolicy::new(perms.iter().map(|&a| a && rng.gen()).collect());
        let w = issuers[n - 1].warrant(&perms);
        let m: Vec<u8> = (0..rng.gen_range(0..=256)).map(|_| rng.gen()).collect();
        let core =
            dacm::encrypt(&issuers[n - 1].sys.pp, &policy, &m, b"acceptance", rng).map_err(err)?;
        let got = issuers[n - 1]
            .open(&w, &w.permissions, &core)
            .map_err(err)?;
        ensure(got == m, || {
            format!("round trip {trial} at N_WI={n} returned different bytes")
        })?;
    }

    let mut denied = 0;
    for trial in 0..FAIL_CLOSED_TRIALS {
        let n = trial % 8 + 1;
        let perms = pools[n - 1]
            .iter()
            .filter(|p| p.contains(&false))
            .collect::<Vec<_>>()
            .choose(rng)
            .map(|p| (*p).clone())
            .expect("a set with a zero bit");
        let zeros: Vec<usize> = (0..n).filter(|&i| !perms[i]).collect();
        let uncovered = *zeros.choose(rng).expect("zero bit");
        let mut bits: Vec<bool> = perms.iter().map(|&a| a && rng.gen()).collect();
        bits[uncovered] = true;
        let first_uncovered = (0..n).find(|&i| bits[i] && !perms[i]).expect("uncovered");
        let policy = AccessPolicy::new(bits);
        let w = issuers[n - 1].warrant(&perms);
        let core = dacm::encrypt(
            &issuers[n - 1].sys.pp,
            &policy,
            b"sealed",
            b"acceptance",
            rng,
        )
        .map_err(err)?;
        let honest = issuers[n - 1].open(&w, &w.permissions, &core);
        ensure(honest == Err(Error::AccessDenied(first_uncovered)), || {
            format!("trial {trial}: honest claim gave {honest:?}")
        })?;
        let overclaimed = issuers[n - 1].open(&w, &PermissionSet::all_ones(n), &core);
        ensure(overclaimed.is_err(), || {
            format!("trial {trial}: overclaimed permissions decrypted")
        })?;
        denied += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= ROUND_TRIP_TIME_BUDGET, || {
        format!("took {elapsed:.1?}")
    })?;
    let issued: usize = issuers.iter().map(|i| i.warrants.len()).sum();
    Ok(format!(
        "{ROUND_TRIPS} round trips over N_WI=1..8 with {issued} issued warrants; {denied}/{FAIL_CLOSED_TRIALS} uncovered trials fail closed under honest and overclaimed permissions in {elapsed:.1?}"
    ))
}

fn criterion_3(rng: &mut ChaCha20Rng) -> Outcome {
    for b in 1..=MAX_BATCH {
        let fx = BatchFixture::new(CurveId::default(), b, rng.gen());
        let (ok, batch) = measure(|| fx.verify_batch());
        let (ok_each, each) = measure(|| fx.verify_each());
        ensure(ok && ok_each, || format!("B={b}: honest batch rejected"))?;
        let b = b as u64;
        ensure((batch.scalar_muls, batch.inversions) == (b + 1, 1), || {
            format!("B={b}: batch cost {batch:?}")
        })?;
        ensure((each.scalar_muls, each.inversions) == (2 * b, b), || {
            format!("B={b}: individual cost {each:?}")
        })?;
    }
    let fx = BatchFixture::new(CurveId::default(), MAX_BATCH, rng.gen());
    let batch_ns = median_ns(TIMING_REPS, || fx.verify_batch());
    let each_ns = median_ns(TIMING_REPS, || fx.verify_each());
    let ratio = batch_ns as f64 / each_ns as f64;
    ensure(ratio <= MAX_WALL_RATIO, || {
        format!("wall ratio {ratio:.3} at B={MAX_BATCH}")
    })?;
    Ok(format!(
        "B=1..{MAX_BATCH}: batch (B+1 mults, 1 inv), individual (2B mults, B inv); B={MAX_BATCH} median {batch_ns} ns vs {each_ns} ns, ratio {ratio:.3} <= {MAX_WALL_RATIO}"
    ))
}

fn criterion_4(rng: &mut ChaCha20Rng) -> Outcome {
    let n = 5;
    let mut sys = System::setup(config(n, "00100", "11000", rng.gen())).map_err(err)?;
    let issue = sys.issue_warrant(0).map_err(err)?.traffic.frame_bytes;
    let mut bytes = Vec::new();
    for n_u in 0..=n {
        let delta: Vec<(usize, bool)> = (1..=n_u).map(|i| (i, i <= 2)).collect();
        bytes.push(
            sys.phase_update(0, &delta)
                .map_err(err)?
                .traffic
                .frame_bytes as f64,
        );
    }
    // least-squares line through (n_u, bytes)
    let xs: Vec<f64> = (0..=n).map(|x| x as f64).collect();
    let (mx, my) = (
        xs.iter().sum::<f64>() / xs.len() as f64,
        bytes.iter().sum::<f64>() / xs.len() as f64,
    );
    let slope = xs
        .iter()
        .zip(&bytes)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let intercept = my - slope * mx;
    let worst = xs
        .iter()
        .zip(&bytes)
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    ensure(
        worst <= UPDATE_BYTES_SLACK && intercept.abs() <= UPDATE_BYTES_SLACK,
        || format!("update bytes {bytes:?} are not proportional to N_U"),
    )?;
    ensure(bytes[1] * UPDATE_TO_ISSUE_DIVISOR < issue as f64, || {
        format!("N_U=1 costs {} bytes, issuance {issue}", bytes[1])
    })?;

    // fresh warrant 11000, then move to 01100
    let mut sys = System::setup(config(n, "00100", "11000", rng.gen())).map_err(err)?;
    sys.issue_warrant(0).map_err(err)?;
    let pp = sys.pp.clone();
    let retired: AccessPolicy = "10000".parse().expect("bits");
    let fresh: AccessPolicy = "00100".parse().expect("bits");
    let old_core = dacm::encrypt(&pp, &retired, b"old", b"A", rng).map_err(err)?;
    let new_core = dacm::encrypt(&pp, &fresh, b"new", b"A", rng).map_err(err)?;
    let open = |sys: &System, core: &dacm::CipherCore| {
        let inv = &sys.ins[0];
        let w = inv.warrant.as_ref().expect("issued");
        let (pid, sk) = (inv.creds.pid.0, inv.creds.keys.secret());
        let resp = dacm::respond(core, &pid, &sk)?;
        dacm::decrypt(&sys.pp, &w.credential(), &w.permissions, &resp, &pid, &sk)
    };
    ensure(open(&sys, &old_core).as_deref() == Ok(&b"old"[..]), || {
        "initial warrant rejects 10000".into()
    })?;
    ensure(open(&sys, &new_core).is_err(), || {
        "initial warrant opens 00100".into()
    })?;
    let report = sys.phase_update(0, &[(1, false), (3, true)]).map_err(err)?;
    ensure(report.permissions == "01100".parse().expect("bits"), || {
        format!("permissions {}", report.permissions)
    })?;
    ensure(open(&sys, &new_core).as_deref() == Ok(&b"new"[..]), || {
        "updated warrant rejects 00100".into()
    })?;
    ensure(open(&sys, &old_core) == Err(Error::AccessDenied(0)), || {
        "updated warrant still opens 10000".into()
    })?;
    Ok(format!(
        "N_WI={n}: update bytes {:?} for N_U=0..{n} (slope {slope:.1} B/update, intercept {intercept:.1}); N_U=1 is {:.0} of {issue} issuance bytes; updated warrant opens the new policy and not the retired one",
        bytes.iter().map(|b| *b as usize).collect::<Vec<_>>(),
        bytes[1]
    ))
}

fn criterion_5(rng: &mut ChaCha20Rng) -> Outcome {
    let n = 5;
    let mut sys = System::setup(config(n, "01001", "11111", rng.gen())).map_err(err)?;
    let report = sys.issue_warrant(0).map_err(err)?;
    let order_bits = sys.pp.curve().order_bits() as usize;
    let expected = 2 * (n - 1) * order_bits;
    ensure(expected == BLINDING_BITS_PER_WI, || {
        format!("2(N-1)|q| = {expected}")
    })?;
    let bits: Vec<usize> = report.inter_wi_payload.iter().map(|b| b * 8).collect();
    ensure(bits.iter().all(|&b| b == BLINDING_BITS_PER_WI), || {
        format!("per-issuer blinding bits {bits:?}")
    })?;
    Ok(format!(
        "N_WI={n}: blinding payload {bits:?} bits per issuer (frames {:?} bytes)",
        report.inter_wi_frame
    ))
}

fn criterion_6(rng: &mut ChaCha20Rng) -> Outcome {
    let mut cfg = config(3, "010", "111", rng.gen());
    cfg.n_in = 10;
    let mut sys = System::setup(cfg).map_err(err)?;
    for i in 0..10 {
        sys.issue_warrant(i).map_err(err)?;
    }
    let subs: Vec<(usize, Vec<u8>)> = (0..5)
        .map(|k| (k, format!("record {k}").into_bytes()))
        .collect();
    let up = sys.phase_upload(b"A", &subs).map_err(err)?;
    let mut identified = 0;
    for trial in 0..TRACE_TRIALS {
        let who = rng.gen_range(0..10);
        let (_, idx) = *up.accepted.choose(rng).expect("records");
        let access = sys.phase_access(who, b"A", idx).map_err(err)?;
        let leaked = access
            .response
            .ok_or_else(|| format!("trial {trial}: no response"))?
            .c;
        let outcome = sys.phase_trace(&leaked, b"A", idx).map_err(err)?;
        let expected = TraceOutcome::Identified {
            index: who,
            id: format!("IN-{}", who + 1),
        };
        ensure(outcome == expected, || {
            format!("trial {trial}: {outcome:?} instead of {expected:?}")
        })?;
        identified += 1;
    }
    Ok(format!(
        "{identified}/{TRACE_TRIALS} leaks traced to the right investigator among 10"
    ))
}

fn field_names(m: &Message<'_>) -> Vec<Field> {
    m.fields.iter().map(|(f, _)| *f).collect()
}

fn criterion_7(rng: &mut ChaCha20Rng) -> Outcome {
    let mut cfg = config(3, "010", "111", rng.gen());
    cfg.n_in = 2;
    let mut sys = System::setup(cfg).map_err(err)?;
    sys.issue_warrant(0).map_err(err)?;
    let curve = sys.pp.curve();
    let dp_keys: Vec<Vec<u8>> = sys
        .dps
        .iter()
        .map(|d| d.creds.keys.public().to_bytes())
        .collect();
    let token = sys.dps[0].creds.token.scalar().to_bytes();
    sys.bus.set_capture(true);

    let message = b"identical report".to_vec();
    for _ in 0..UNLINKABILITY_SAMPLES / 100 {
        let subs: Vec<(usize, Vec<u8>)> = (0..100).map(|_| (0, message.clone())).collect();
        let up = sys.phase_upload(b"A", &subs).map_err(err)?;
        ensure(up.accepted.len() == 100, || {
            format!("{} of 100 uploads accepted", up.accepted.len())
        })?;
    }
    let uploads: Vec<Vec<u8>> = sys
        .bus
        .take_captured()
        .into_iter()
        .filter(|(e, _)| e.phase == Phase::Upload)
        .map(|(_, f)| f)
        .collect();
    ensure(uploads.len() == UNLINKABILITY_SAMPLES, || {
        format!("captured {} uploads", uploads.len())
    })?;
    let mut seen = HashSet::new();
    for frame in &uploads {
        let m = Message::parse(frame).map_err(err)?;
        let fields = field_names(&m);
        ensure(
            m.kind == Kind::Upload && fields == Kind::Upload.schema(),
            || format!("upload fields {fields:?}"),
        )?;
        ensure(!fields.iter().any(|f| IDENTITY_FIELDS.contains(f)), || {
            "upload carries an identity field".into()
        })?;
        ensure(!dp_keys.iter().any(|k| contains(frame, k)), || {
            "upload contains a provider key".into()
        })?;
        ensure(!contains(frame, &token), || {
            "upload contains the system token".into()
        })?;
        for (f, v) in &m.fields {
            if !matches!(f, Field::AccidentId | Field::Policy) {
                ensure(seen.insert((*f, v.to_vec())), || {
                    format!("repeated {f:?} across uploads")
                })?;
            }
        }
    }

    let inv = sys.ins[0].creds.clone();
    let pid = inv.pid.to_bytes();
    let pk_in = inv.keys.public().to_bytes();
    for _ in 0..UNLINKABILITY_SAMPLES {
        let report = sys.phase_access(0, b"A", 0).map_err(err)?;
        ensure(
            report.outcome == AccessOutcome::Granted(message.clone()),
            || format!("{:?}", report.outcome),
        )?;
    }
    let mut requests = 0;
    let mut sealed = HashSet::new();
    for (entry, frame) in sys.bus.take_captured() {
        let m = Message::parse(&frame).map_err(err)?;
        ensure(field_names(&m) == [Field::Sealed], || {
            format!("{:?} frame exposes {:?}", m.kind, field_names(&m))
        })?;
        for secret in [&pid, &pk_in, &b"IN-1".to_vec()] {
            ensure(!contains(&frame, secret), || {
                format!("{:?} frame exposes the investigator", m.kind)
            })?;
        }
        ensure(
            sealed.insert(m.get(Field::Sealed).map_err(err)?.to_vec()),
            || "repeated sealed body".into(),
        )?;
        if entry.to == Addr::Ta {
            ensure(m.kind == Kind::AccessRequest, || {
                format!("{:?} sent to the authority", m.kind)
            })?;
            let env = wire::decode_sealed(Kind::AccessRequest, curve, &frame).map_err(err)?;
            let body = sys.ta.secrets().ta_keys().decrypt(&env).map_err(err)?;
            let inner = Message::parse(&body).map_err(err)?;
            let exposed: Vec<Field> = field_names(&inner)
                .into_iter()
                .filter(|f| IDENTITY_FIELDS.contains(f))
                .collect();
            ensure(exposed == [Field::Pid], || {
                format!("request body identity fields {exposed:?}")
            })?;
            ensure(
                !contains(&body, &pk_in) && !contains(&body, b"IN-1"),
                || "request body names the investigator".into(),
            )?;
            ensure(
                AccessRequestBody::decode(curve, &body).map_err(err)?.pid == inv.pid.0,
                || "wrong pid".into(),
            )?;
            requests += 1;
        }
    }
    ensure(requests == UNLINKABILITY_SAMPLES, || {
        format!("{requests} requests captured")
    })?;
    Ok(format!(
        "{UNLINKABILITY_SAMPLES} identical uploads: schema only, no provider key or token, no repeated ciphertext field; {requests} access requests and responses sealed with PID only inside, all sealed bodies distinct"
    ))
}

fn lagrange_at_zero(curve: &'static Curve, shares: &[Share]) -> Scalar {
    let mut acc = Scalar::zero(curve);
    for (i, si) in shares.iter().enumerate() {
        let mut term = si.y;
        for (j, sj) in shares.iter().enumerate() {
            if i != j {
                term = term * sj.x * (sj.x - si.x).invert().expect("distinct nodes");
            }
        }
        acc += term;
    }
    acc
}

fn criterion_8(rng: &mut ChaCha20Rng) -> Outcome {
    let curve = CurveId::default().curve();
    let mut pairs = 0;
    for n in 1..=8 {
        for t in 1..=n {
            let secret = Scalar::random(curve, rng);
            let set = shamir_split(n, t, secret, rng).map_err(err)?;
            for _ in 0..4 {
                let subset: Vec<Share> = set.shares.choose_multiple(rng, t).copied().collect();
                let got = shamir_recover(&subset, t).map_err(err)?;
                let oracle = lagrange_at_zero(curve, &subset);
                ensure(got == secret && oracle == secret, || {
                    format!("t={t} n={n}: recovery mismatch")
                })?;
            }
            pairs += 1;
        }
    }
    for k in 0..POLY_INSTANCES {
        let n = rng.gen_range(1..=8);
        let roots: Vec<Scalar> = (0..n).map(|_| Scalar::random(curve, rng)).collect();
        let p: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let a: Vec<bool> = p.iter().map(|&b| b || rng.gen()).collect();
        let x = Scalar::random(curve, rng);
        let direct = |mask: &[bool]| {
            roots
                .iter()
                .zip(mask)
                .filter(|(_, &m)| !m)
                .fold(Scalar::one(curve), |acc, (r, _)| acc * (x + *r))
        };
        let g1 = expand_roots(curve, &roots, &p).map_err(err)?;
        ensure(g1.eval(x) == direct(&p), || {
            format!("instance {k}: expansion differs from the root product")
        })?;
        ensure(g1.degree() == p.iter().filter(|b| !**b).count(), || {
            format!("instance {k}: degree")
        })?;
        let h = quotient_mask(&p, &a).map_err(err)?;
        let not_h: Vec<bool> = h.iter().map(|b| !b).collect();
        let g2 = expand_roots(curve, &roots, &not_h).map_err(err)?;
        let ga = expand_roots(curve, &roots, &a).map_err(err)?;
        ensure(g1.eval(x) == g2.eval(x) * ga.eval(x), || {
            format!("instance {k}: g1 != g2·g_A")
        })?;
    }
    Ok(format!(
        "Shamir recovery matches an independent Lagrange sum for all {pairs} pairs 1<=t<=n<=8; {POLY_INSTANCES} policy polynomials match root products and factor as g2·g_A"
    ))
}

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let criteria: [Criterion; 8] = [
        ("batch verification is exact", criterion_1),
        (
            "authorized decryption round trips and fails closed",
            criterion_2,
        ),
        ("batch verification cost", criterion_3),
        (
            "warrant update cost is linear in the changed issuers",
            criterion_4,
        ),
        ("blinding traffic per issuer", criterion_5),
        ("leaked bodies trace to their investigator", criterion_6),
        ("uploads and access requests are unlinkable", criterion_7),
        ("sharing and policy polynomial identities", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run(&mut rng);
        let tag = if result.is_ok() { "PASS" } else { "FAIL" };
        let detail = result.unwrap_or_else(|e| e);
        println!(
            "{tag} criterion {} ({name}): {detail} [{:.1?}]",
            i + 1,
            start.elapsed()
        );
        failed += usize::from(tag == "FAIL");
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
