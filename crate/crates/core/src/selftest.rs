//! Quick property checks run by the `selftest` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bench::BatchFixture;
use crate::dacm;
use crate::error::Result;
use crate::params::{AccessPolicy, PermissionSet};
use crate::pbvm::{batch_verify, isolate_invalid};
use crate::polyshare::{expand_roots, quotient_mask, shamir_recover, shamir_split};
use crate::primitives::{measure, CurveId, Scalar};
use crate::sim::{AccessOutcome, ScenarioConfig, System, TraceOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match run() {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn config(n_wi: usize, seed: u64) -> ScenarioConfig {
    let ones = "1".repeat(n_wi);
    ScenarioConfig {
        n_wi,
        n_dp: 4,
        n_rsu: 1,
        n_in: 4,
        batch_size: 4,
        policy: ones.parse().expect("bits"),
        permissions: ones.parse().expect("bits"),
        seed,
        curve: CurveId::default(),
        updated_permissions: None,
    }
}

fn batch_agreement(rng: &mut ChaCha20Rng) -> Result<(bool, String)> {
    let mut trials = 0;
    for b in [1usize, 2, 3, 8, 16] {
        for _ in 0..4 {
            let mut fx = BatchFixture::new(CurveId::default(), b, rng.gen());
            let tampered: Vec<usize> = (0..b).filter(|_| rng.gen_bool(0.2)).collect();
            for &i in &tampered {
                fx.items[i].0.push(0);
            }
            let verdict = batch_verify(&fx.sk_rsu, &fx.views())?;
            if verdict != tampered.is_empty()
                || isolate_invalid(&fx.sk_rsu, &fx.views()) != tampered
            {
                return Ok((false, format!("disagreement at B={b}")));
            }
            trials += 1;
        }
    }
    Ok((true, format!("{trials} batches agree with per-item checks")))
}

fn batch_costs() -> Result<(bool, String)> {
    let fx = BatchFixture::new(CurveId::default(), 16, 1);
    let (_, batch) = measure(|| fx.verify_batch());
    let (_, each) = measure(|| fx.verify_each());
    let ok = (
        batch.scalar_muls,
        batch.inversions,
        each.scalar_muls,
        each.inversions,
    ) == (17, 1, 32, 16);
    Ok((ok, format!("B=16: batch {batch:?}, individual {each:?}")))
}

fn round_trips(rng: &mut ChaCha20Rng) -> Result<(bool, String)> {
    let mut count = 0;
    for n in 1..=5 {
        let mut sys = System::setup(config(n, rng.gen()))?;
        for _ in 0..4 {
            let policy = AccessPolicy::new((0..n).map(|_| rng.gen()).collect());
            let perms = PermissionSet::new(policy.bits().iter().map(|&p| p || rng.gen()).collect());
            for wi in &mut sys.wis {
                let pid = sys.ins[0].creds.pid;
                wi.set_permission(pid, sys.ins[0].creds.keys.public(), perms.get(wi.index()));
            }
            sys.issue_warrant(0)?;
            let m: Vec<u8> = (0..rng.gen_range(0..64)).map(|_| rng.gen()).collect();
            let pp = sys.pp.clone();
            let core = dacm::encrypt(&pp, &policy, &m, b"selftest", sys.rng())?;
            let inv = &sys.ins[0];
            let resp = dacm::respond(&core, &inv.creds.pid.0, &inv.creds.keys.secret())?;
            let w = inv.warrant.as_ref().expect("issued");
            if dacm::decrypt(
                &sys.pp,
                &w.credential(),
                &w.permissions,
                &resp,
                &inv.creds.pid.0,
                &inv.creds.keys.secret(),
            )? != m
            {
                return Ok((false, format!("mismatch at N_WI={n}")));
            }
            count += 1;
        }
    }
    Ok((true, format!("{count} round trips")))
}

fn fail_closed(rng: &mut ChaCha20Rng) -> Result<(bool, String)> {
    let mut sys = System::setup(config(4, rng.gen()))?;
    let inv_pid = sys.ins[0].creds.pid;
    let inv_pk = sys.ins[0].creds.keys.public();
    for wi in &mut sys.wis {
        wi.set_permission(inv_pid, inv_pk, wi.index() != 2);
    }
    sys.issue_warrant(0)?;
    let policy: AccessPolicy = "0100".parse().expect("bits");
    let pp = sys.pp.clone();
    let core = dacm::encrypt(&pp, &policy, b"x", b"A", sys.rng())?;
    let inv = &sys.ins[0];
    let resp = dacm::respond(&core, &inv.creds.pid.0, &inv.creds.keys.secret())?;
    let w = inv.warrant.as_ref().expect("issued");
    let honest = dacm::decrypt(
        &sys.pp,
        &w.credential(),
        &w.permissions,
        &resp,
        &inv.creds.pid.0,
        &inv.creds.keys.secret(),
    );
    let claimed = dacm::decrypt(
        &sys.pp,
        &w.credential(),
        &PermissionSet::all_ones(4),
        &resp,
        &inv.creds.pid.0,
        &inv.creds.keys.secret(),
    );
    Ok((
        honest.is_err() && claimed.is_err(),
        format!("honest: {honest:?}, overclaimed: {claimed:?}"),
    ))
}

fn pipeline(rng: &mut ChaCha20Rng) -> Result<(bool, String)> {
    let mut cfg = config(5, rng.gen());
    cfg.policy = "01001".parse().expect("bits");
    cfg.permissions = "01001".parse().expect("bits");
    let mut sys = System::setup(cfg)?;
    let issue = sys.issue_warrant(0)?;
    let blinding_ok = issue.inter_wi_payload.iter().all(|&b| b * 8 == 1280);
    let up = sys.phase_upload(b"A", &[(0, b"m0".to_vec()), (1, b"m1".to_vec())])?;
    let access = sys.phase_access(0, b"A", up.accepted[0].1)?;
    let granted = access.outcome == AccessOutcome::Granted(b"m0".to_vec());
    let traced = match &access.response {
        Some(r) => {
            sys.phase_trace(&r.c, b"A", up.accepted[0].1)?
                == TraceOutcome::Identified {
                    index: 0,
                    id: "IN-1".into(),
                }
        }
        None => false,
    };
    let update = sys.phase_update(0, &[(3, true)])?;
    let local =
        update.contacted == vec![3] && update.traffic.frame_bytes < issue.traffic.frame_bytes;
    Ok((
        blinding_ok && granted && traced && local,
        format!(
            "blinding {blinding_ok}, access {granted}, trace {traced}, update {} of {} bytes",
            update.traffic.frame_bytes, issue.traffic.frame_bytes
        ),
    ))
}

fn polynomials(rng: &mut ChaCha20Rng) -> Result<(bool, String)> {
    let curve = CurveId::default().curve();
    for n in 1..=6 {
        for t in 1..=n {
            let secret = Scalar::random(curve, rng);
            let set = shamir_split(n, t, secret, rng)?;
            if shamir_recover(&set.shares[n - t..], t)? != secret {
                return Ok((false, format!("shamir t={t} n={n}")));
            }
        }
    }
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let roots: Vec<Scalar> = (0..n).map(|_| Scalar::random(curve, rng)).collect();
        let p: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let a: Vec<bool> = p.iter().map(|&b| b || rng.gen()).collect();
        let h = quotient_mask(&p, &a)?;
        let excluded: Vec<bool> = h.iter().map(|&b| !b).collect();
        let x = Scalar::random(curve, rng);
        let lhs = expand_roots(curve, &roots, &p)?.eval(x);
        let rhs = expand_roots(curve, &roots, &excluded)?.eval(x)
            * expand_roots(curve, &roots, &a)?.eval(x);
        if lhs != rhs {
            return Ok((false, "quotient identity".into()));
        }
    }
    Ok((true, "shamir n<=6 and 50 quotient instances".into()))
}

/// Runs every check with a deterministic seed.
pub fn run(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    vec![
        check("batch verification agrees with per-item checks", || {
            batch_agreement(&mut rng)
        }),
        check(
            "batch cost is B+1 multiplications and one inversion",
            batch_costs,
        ),
        check("encrypt, mask, decrypt round trips", || {
            round_trips(&mut rng)
        }),
        check("uncovered policies fail closed", || fail_closed(&mut rng)),
        check(
            "pipeline: blinding traffic, access, trace, local update",
            || pipeline(&mut rng),
        ),
        check("shamir and policy polynomial identities", || {
            polynomials(&mut rng)
        }),
    ]
}
