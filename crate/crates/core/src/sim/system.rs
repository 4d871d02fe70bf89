//! Entity state and the protocol phases, run over the simulated bus.

use std::collections::{HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::authority::{setup, DpCredentials, InCredentials, MasterSecrets, Pseudonym};
use crate::dacm::{self, AccessResponse};
use crate::diwim::{
    combine_blinding, draw_blinding, BlindingShare, PartialWarrant, Warrant, WarrantRequest,
    WarrantUpdate, WiState,
};
use crate::envelope::{self, Envelope, FreshnessWindow};
use crate::error::{Error, Result};
use crate::params::{PermissionSet, PublicParams};
use crate::pbvm::{batch_verify, isolate_invalid, RsuCredential, UploadSigner, VerifyItem};
use crate::primitives::{GroupPoint, Scalar};

use super::bus::{Addr, Phase, SimBus, Traffic, TranscriptEntry};
use super::config::ScenarioConfig;
use super::store::{RecordStore, StoredRecord};
use super::wire::{self, AccessRequestBody, Kind, WarrantRequestBody};

const START_TICK: u64 = 1_000;

#[derive(Debug, Clone)]
struct InRecord {
    index: usize,
    id: String,
    sk: Scalar,
    pk: GroupPoint,
}

/// Authority state beyond the master secrets.
#[derive(Debug)]
pub struct TaState {
    secrets: MasterSecrets,
    investigators: HashMap<Pseudonym, InRecord>,
    seen_requests: HashSet<(Pseudonym, u64, Vec<u8>)>,
}

impl TaState {
    pub fn secrets(&self) -> &MasterSecrets {
        &self.secrets
    }
}

#[derive(Debug, Clone)]
pub struct DpState {
    pub creds: DpCredentials,
    /// `pk_RSU` of every unit, delivered at registration.
    pub rsu_directory: Vec<GroupPoint>,
}

#[derive(Debug, Clone)]
pub struct RsuState {
    pub creds: RsuCredential,
    seen: HashSet<Vec<u8>>,
}

#[derive(Debug, Clone)]
pub struct InState {
    pub creds: InCredentials,
    pub warrant: Option<Warrant>,
}

/// A whole deployment: one authority, its issuers, providers, units, and
/// investigators, sharing one bus and one record store.
#[derive(Debug)]
pub struct System {
    pub cfg: ScenarioConfig,
    pub pp: PublicParams,
    pub ta: TaState,
    /// Issuer `i` (one-based) is `wis[i - 1]` at `Addr::Wi(i)`.
    pub wis: Vec<WiState>,
    pub dps: Vec<DpState>,
    pub rsus: Vec<RsuState>,
    pub ins: Vec<InState>,
    pub bus: SimBus,
    pub store: RecordStore,
    pub window: FreshnessWindow,
    clock: u64,
    rng: ChaCha20Rng,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IssueReport {
    pub traffic: Traffic,
    /// Blinding payload bytes received by each issuer from its peers.
    pub inter_wi_payload: Vec<usize>,
    /// The same messages as framed on the wire.
    pub inter_wi_frame: Vec<usize>,
    pub permissions: PermissionSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UploadReport {
    /// `(submission index, record index)` for each stored upload.
    pub accepted: Vec<(usize, usize)>,
    /// Submissions that failed decoding or verification, ascending.
    pub rejected: Vec<usize>,
    /// Extra copies of an already accepted frame that were discarded.
    pub duplicates: usize,
    pub batches: usize,
    pub traffic: Traffic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AccessOutcome {
    Granted(Vec<u8>),
    /// The warrant's permissions do not cover the policy.
    Denied,
    /// The authority refused the request.
    Refused(Error),
    /// Decryption ran but did not verify.
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessReport {
    pub outcome: AccessOutcome,
    pub request_frame: Vec<u8>,
    pub response: Option<AccessResponse>,
    pub traffic: Traffic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    Identified { index: usize, id: String },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateReport {
    /// One-based indices of the issuers that exchanged messages.
    pub contacted: Vec<usize>,
    pub traffic: Traffic,
    pub permissions: PermissionSet,
}

fn total(entries: &[TranscriptEntry]) -> Traffic {
    let mut t = Traffic::default();
    for e in entries {
        t += Traffic {
            messages: 1,
            frame_bytes: e.len,
            payload_bytes: e.payload,
        };
    }
    t
}

impl System {
    /// Runs setup and registers every entity. Deterministic in `cfg.seed`.
    pub fn setup(cfg: ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
        let (pp, secrets) = setup(cfg.curve, &cfg.wi_ids(), &mut rng)?;

        let mut wis = (1..=cfg.n_wi)
            .map(|i| WiState::new(secrets.register_wi(i, &mut rng)?, pp.wi_nodes.clone()))
            .collect::<Result<Vec<_>>>()?;
        let rsus: Vec<RsuState> = (0..cfg.n_rsu)
            .map(|_| RsuState {
                creds: secrets.register_rsu(&mut rng),
                seen: HashSet::new(),
            })
            .collect();
        let rsu_directory: Vec<GroupPoint> = rsus.iter().map(|r| r.creds.public()).collect();
        let dps = (0..cfg.n_dp)
            .map(|_| DpState {
                creds: secrets.register_dp(cfg.policy.clone(), &mut rng),
                rsu_directory: rsu_directory.clone(),
            })
            .collect();

        let mut investigators = HashMap::new();
        let mut ins = Vec::with_capacity(cfg.n_in);
        for (index, id) in cfg.in_ids().into_iter().enumerate() {
            let creds = secrets.register_in(&id, &mut rng);
            if investigators.contains_key(&creds.pid) {
                return Err(Error::Config(format!("pseudonym collision for {id}")));
            }
            for wi in &mut wis {
                wi.set_permission(
                    creds.pid,
                    creds.keys.public(),
                    cfg.permissions.get(wi.index()),
                );
            }
            investigators.insert(
                creds.pid,
                InRecord {
                    index,
                    id,
                    sk: creds.keys.secret(),
                    pk: creds.keys.public(),
                },
            );
            ins.push(InState {
                creds,
                warrant: None,
            });
        }

        Ok(System {
            cfg,
            pp,
            ta: TaState {
                secrets,
                investigators,
                seen_requests: HashSet::new(),
            },
            wis,
            dps,
            rsus,
            ins,
            bus: SimBus::new(),
            store: RecordStore::new(),
            window: FreshnessWindow::default(),
            clock: START_TICK,
            rng,
        })
    }

    pub fn now(&self) -> u64 {
        self.clock
    }

    pub fn advance(&mut self, ticks: u64) {
        self.clock += ticks;
    }

    fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    pub fn rng(&mut self) -> &mut ChaCha20Rng {
        &mut self.rng
    }

    fn n_wi(&self) -> usize {
        self.wis.len()
    }

    fn curve(&self) -> &'static crate::primitives::Curve {
        self.pp.curve()
    }

    fn send_sealed(
        &mut self,
        phase: Phase,
        from: Addr,
        to: Addr,
        kind: Kind,
        pk: &GroupPoint,
        body: &[u8],
    ) -> Result<u64> {
        let env = envelope::encrypt(pk, body, &mut self.rng)?;
        let frame = wire::encode_sealed(kind, &env);
        Ok(self.bus.send(phase, from, to, frame, body.len()))
    }

    fn send_signed_sealed(
        &mut self,
        phase: Phase,
        from: Addr,
        to: Addr,
        kind: Kind,
        (pk, sk): (&GroupPoint, &Scalar),
        body: &[u8],
    ) -> Result<u64> {
        let env = envelope::encrypt(pk, body, &mut self.rng)?;
        let sig = envelope::sign(sk, &wire::encode_envelope(&env), &mut self.rng);
        let frame = wire::encode_signed_sealed(kind, &env, &sig);
        Ok(self.bus.send(phase, from, to, frame, body.len()))
    }

    /// Opens a signed envelope from issuer `from` addressed to `sk`.
    fn open_signed(&self, kind: Kind, from: usize, sk: &Scalar, bytes: &[u8]) -> Result<Vec<u8>> {
        let wi = self
            .wis
            .get(from.wrapping_sub(1))
            .ok_or(Error::IndexOutOfRange {
                index: from,
                max: self.n_wi(),
            })?;
        let (env, signed, sig) = wire::decode_signed_sealed(kind, self.curve(), bytes)?;
        if !envelope::verify(&wi.public_key(), &signed, &sig) {
            return Err(Error::BadSignature);
        }
        envelope::decrypt(sk, &env)
    }

    /// Issuer side of a warrant or update request.
    fn wi_receive_request(&self, wi: usize, bytes: &[u8], now: u64) -> Result<(Pseudonym, bool)> {
        let state = &self.wis[wi - 1];
        let env = wire::decode_sealed(Kind::WarrantRequest, self.curve(), bytes)?;
        let body = WarrantRequestBody::decode(
            self.curve(),
            &envelope::decrypt(&state.secret_key(), &env)?,
        )?;
        let req = WarrantRequest {
            pid: Pseudonym(body.pid),
            timestamp: body.timestamp,
            signature: body.signature,
            update: body.update,
        };
        state.authorize(&req, now, &self.window)?;
        Ok((req.pid, req.update))
    }

    fn request_body(&mut self, in_idx: usize, update: bool, now: u64) -> Vec<u8> {
        let creds = &self.ins[in_idx].creds;
        let (pid, sk) = (creds.pid, creds.keys.secret());
        let req = if update {
            WarrantRequest::update(pid, &sk, now, &mut self.rng)
        } else {
            WarrantRequest::issue(pid, &sk, now, &mut self.rng)
        };
        WarrantRequestBody {
            pid: pid.0,
            timestamp: now,
            update,
            signature: req.signature,
        }
        .encode()
    }

    /// Full warrant issuance for investigator `in_idx`: signed requests to
    /// every issuer, the pairwise blinding round, partials back to the
    /// investigator, aggregation.
    pub fn issue_warrant(&mut self, in_idx: usize) -> Result<IssueReport> {
        let in_addr = Addr::In(in_idx);
        self.ins
            .get(in_idx)
            .ok_or_else(|| Error::UnknownEntity(in_addr.to_string()))?;
        self.bus.clear_queues();
        let mark = self.bus.transcript().len();
        let now = self.tick();
        let n = self.n_wi();
        let curve = self.curve();

        for i in 1..=n {
            let body = self.request_body(in_idx, false, now);
            let pk = self.wis[i - 1].public_key();
            self.send_sealed(
                Phase::Issue,
                in_addr,
                Addr::Wi(i),
                Kind::WarrantRequest,
                &pk,
                &body,
            )?;
        }
        let mut requester = Vec::with_capacity(n);
        for i in 1..=n {
            let got = self.bus.drain(Addr::Wi(i));
            let d = got.first().ok_or(Error::MissingContribution(i))?;
            let (pid, update) = self.wi_receive_request(i, &d.bytes, now)?;
            if update {
                return Err(Error::Encoding("update request in issuance"));
            }
            requester.push(pid);
        }

        let shares: Vec<BlindingShare> = (0..n)
            .map(|_| draw_blinding(curve, &mut self.rng))
            .collect();
        for i in 1..=n {
            let body = shares[i - 1].to_bytes();
            for j in (1..=n).filter(|&j| j != i) {
                let pk = self.wis[j - 1].public_key();
                self.send_sealed(
                    Phase::Issue,
                    Addr::Wi(i),
                    Addr::Wi(j),
                    Kind::Blinding,
                    &pk,
                    &body,
                )?;
            }
        }
        let mut partials = Vec::with_capacity(n);
        for i in 1..=n {
            let sk = self.wis[i - 1].secret_key();
            let mut received = Vec::new();
            for d in self.bus.drain(Addr::Wi(i)) {
                let Addr::Wi(from) = d.from else { continue };
                let env = wire::decode_sealed(Kind::Blinding, curve, &d.bytes)?;
                received.push((from, BlindingShare::open(&sk, &env)?));
            }
            let (d1, d2) = combine_blinding(i, shares[i - 1], &received, n)?;
            partials.push(self.wis[i - 1].issue_partial(&requester[i - 1], d1, d2)?);
        }

        let pk_in = self.ins[in_idx].creds.keys.public();
        for p in &partials {
            let body = wire::encode_partial(p, now);
            let sk_wi = self.wis[p.index - 1].secret_key();
            self.send_signed_sealed(
                Phase::Issue,
                Addr::Wi(p.index),
                in_addr,
                Kind::PartialWarrant,
                (&pk_in, &sk_wi),
                &body,
            )?;
        }
        let sk_in = self.ins[in_idx].creds.keys.secret();
        let mut received: Vec<PartialWarrant> = Vec::with_capacity(n);
        for d in self.bus.drain(in_addr) {
            let Addr::Wi(from) = d.from else { continue };
            let (p, ts) = wire::decode_partial(
                curve,
                &self.open_signed(Kind::PartialWarrant, from, &sk_in, &d.bytes)?,
            )?;
            self.window.check(self.clock, ts)?;
            if p.index != from {
                return Err(Error::InconsistentIssuance);
            }
            received.push(p);
        }
        let warrant = Warrant::aggregate(&received, n)?;
        let permissions = warrant.permissions.clone();
        self.ins[in_idx].warrant = Some(warrant);

        let entries = self.bus.since(mark, |_| true);
        let inter = |wi: usize, frame: bool| {
            entries
                .iter()
                .filter(|e| e.to == Addr::Wi(wi) && matches!(e.from, Addr::Wi(_)))
                .map(|e| if frame { e.len } else { e.payload })
                .sum()
        };
        Ok(IssueReport {
            traffic: total(&entries),
            inter_wi_payload: (1..=n).map(|i| inter(i, false)).collect(),
            inter_wi_frame: (1..=n).map(|i| inter(i, true)).collect(),
            permissions,
        })
    }

    /// Uploads `(provider index, message)` pairs for one accident. Provider
    /// `i` sends to unit `i mod n_rsu`; each unit verifies its arrivals in
    /// batches of `batch_size` and stores what verifies.
    pub fn phase_upload(
        &mut self,
        accident_id: &[u8],
        submissions: &[(usize, Vec<u8>)],
    ) -> Result<UploadReport> {
        self.bus.clear_queues();
        let mark = self.bus.transcript().len();
        let n_rsu = self.rsus.len();
        let mut by_seq = HashMap::new();
        for (k, (dp, message)) in submissions.iter().enumerate() {
            let state = self
                .dps
                .get(*dp)
                .ok_or_else(|| Error::UnknownEntity(Addr::Dp(*dp).to_string()))?;
            let rsu = dp % n_rsu;
            let signer = UploadSigner::new(
                &state.creds.token,
                &state.rsu_directory[rsu],
                &self.pp.pk_ta,
            );
            let policy = state.creds.policy.clone();
            let core = dacm::encrypt(&self.pp, &policy, message, accident_id, &mut self.rng)?;
            let sig = signer.sign(&core.c2, accident_id, &mut self.rng);
            let frame = wire::encode_upload(&core, &sig);
            let len = frame.len();
            by_seq.insert(
                self.bus
                    .send(Phase::Upload, Addr::Dp(*dp), Addr::Rsu(rsu), frame, len),
                k,
            );
        }

        let mut report = UploadReport {
            accepted: Vec::new(),
            rejected: Vec::new(),
            duplicates: 0,
            batches: 0,
            traffic: Traffic::default(),
        };
        let curve = self.curve();
        let tick = self.tick();
        for rsu in 0..n_rsu {
            let mut items = Vec::new();
            let mut seen_now = HashSet::new();
            for d in self.bus.drain(Addr::Rsu(rsu)) {
                let k = by_seq[&d.seq];
                if !seen_now.insert(d.seq) {
                    report.duplicates += 1;
                    continue;
                }
                match wire::decode_upload(curve, &d.bytes) {
                    Ok((core, sig)) if core.accident_id == accident_id => {
                        items.push((k, core, sig))
                    }
                    _ => report.rejected.push(k),
                }
            }
            let sk = self.rsus[rsu].creds.secret();
            for chunk in items.chunks(self.cfg.batch_size) {
                report.batches += 1;
                let views: Vec<VerifyItem<'_>> = chunk
                    .iter()
                    .map(|(_, core, sig)| VerifyItem {
                        c2: &core.c2,
                        signature: sig,
                    })
                    .collect();
                let bad = if batch_verify(&sk, &views)? {
                    Vec::new()
                } else {
                    isolate_invalid(&sk, &views)
                };
                for (pos, (k, core, sig)) in chunk.iter().enumerate() {
                    if bad.contains(&pos) {
                        report.rejected.push(*k);
                    } else if !self.rsus[rsu].seen.insert(sig.r.to_bytes()) {
                        report.duplicates += 1;
                    } else {
                        let index = self.store.append(StoredRecord {
                            core: core.clone(),
                            rsu,
                            tick,
                        });
                        report.accepted.push((*k, index));
                    }
                }
            }
        }
        report.accepted.sort_unstable();
        report.rejected.sort_unstable();
        report.traffic = total(&self.bus.since(mark, |_| true));
        Ok(report)
    }

    /// The investigator's enveloped access request, stamped with the current tick.
    pub fn build_access_request(
        &mut self,
        in_idx: usize,
        accident_id: &[u8],
        record_index: usize,
    ) -> Result<Vec<u8>> {
        let now = self.tick();
        let creds = self
            .ins
            .get(in_idx)
            .ok_or_else(|| Error::UnknownEntity(Addr::In(in_idx).to_string()))?
            .creds
            .clone();
        let record_index = u32::try_from(record_index).map_err(|_| Error::RecordNotFound)?;
        let signed =
            AccessRequestBody::signed_message(accident_id, record_index, &creds.pid.0, now);
        let body = AccessRequestBody {
            accident_id: accident_id.to_vec(),
            record_index,
            pid: creds.pid.0,
            timestamp: now,
            signature: envelope::sign(&creds.keys.secret(), &signed, &mut self.rng),
        }
        .encode();
        let env = envelope::encrypt(&self.pp.pk_ta, &body, &mut self.rng)?;
        Ok(wire::encode_sealed(Kind::AccessRequest, &env))
    }

    fn ta_handle_access(&mut self, bytes: &[u8]) -> Result<(usize, Vec<u8>)> {
        let curve = self.curve();
        let env: Envelope = wire::decode_sealed(Kind::AccessRequest, curve, bytes)?;
        let body = AccessRequestBody::decode(curve, &self.ta.secrets.ta_keys().decrypt(&env)?)?;
        let pid = Pseudonym(body.pid);
        let who = self
            .ta
            .investigators
            .get(&pid)
            .ok_or(Error::UnknownPseudonym)?
            .clone();
        self.window.check(self.clock, body.timestamp)?;
        let signed = AccessRequestBody::signed_message(
            &body.accident_id,
            body.record_index,
            &body.pid,
            body.timestamp,
        );
        if !envelope::verify(&who.pk, &signed, &body.signature) {
            return Err(Error::BadSignature);
        }
        if !self
            .ta
            .seen_requests
            .insert((pid, body.timestamp, body.signature.to_bytes()))
        {
            return Err(Error::Replay);
        }
        let record = self
            .store
            .get(&body.accident_id, body.record_index as usize)?;
        let resp = dacm::respond(&record.core, &body.pid, &who.sk)?;
        Ok((who.index, wire::encode_access_response(&resp)))
    }

    /// Delivers an access request frame to the authority and runs the
    /// investigator's decryption on whatever comes back.
    pub fn submit_access(&mut self, in_idx: usize, frame: Vec<u8>) -> Result<AccessReport> {
        let in_addr = Addr::In(in_idx);
        let inv = self
            .ins
            .get(in_idx)
            .ok_or_else(|| Error::UnknownEntity(in_addr.to_string()))?;
        let warrant = inv.warrant.clone().ok_or(Error::NoWarrant)?;
        let (pid, sk_in) = (inv.creds.pid, inv.creds.keys.secret());
        self.bus.clear_queues();
        let mark = self.bus.transcript().len();
        let overhead = envelope::Envelope::overhead(self.curve()) + 8;
        let payload = frame.len().saturating_sub(overhead);
        self.bus
            .send(Phase::Access, in_addr, Addr::Ta, frame.clone(), payload);

        let mut outcome = AccessOutcome::Refused(Error::Dropped);
        for d in self.bus.drain(Addr::Ta) {
            match self.ta_handle_access(&d.bytes) {
                Ok((to, body)) => {
                    let pk = self.ins[to].creds.keys.public();
                    self.send_sealed(
                        Phase::Access,
                        Addr::Ta,
                        Addr::In(to),
                        Kind::AccessResponse,
                        &pk,
                        &body,
                    )?;
                }
                Err(e) => outcome = AccessOutcome::Refused(e),
            }
        }
        let mut response = None;
        for d in self.bus.drain(in_addr) {
            let curve = self.curve();
            let opened = wire::decode_sealed(Kind::AccessResponse, curve, &d.bytes)
                .and_then(|env| envelope::decrypt(&sk_in, &env))
                .and_then(|body| wire::decode_access_response(curve, &body));
            let resp = match opened {
                Ok(r) => r,
                Err(e) => {
                    outcome = AccessOutcome::Failed(e);
                    continue;
                }
            };
            outcome = match dacm::decrypt(
                &self.pp,
                &warrant.credential(),
                &warrant.permissions,
                &resp,
                &pid.0,
                &sk_in,
            ) {
                Ok(m) => AccessOutcome::Granted(m),
                Err(Error::AccessDenied(_)) => AccessOutcome::Denied,
                Err(e) => AccessOutcome::Failed(e),
            };
            response = Some(resp);
        }
        Ok(AccessReport {
            outcome,
            request_frame: frame,
            response,
            traffic: total(&self.bus.since(mark, |_| true)),
        })
    }

    pub fn phase_access(
        &mut self,
        in_idx: usize,
        accident_id: &[u8],
        record_index: usize,
    ) -> Result<AccessReport> {
        let frame = self.build_access_request(in_idx, accident_id, record_index)?;
        self.submit_access(in_idx, frame)
    }

    /// Identifies the investigator behind a leaked masked body.
    pub fn phase_trace(
        &self,
        leaked: &[u8],
        accident_id: &[u8],
        record_index: usize,
    ) -> Result<TraceOutcome> {
        let record = self.store.get(accident_id, record_index)?;
        let (pid, sk) = match dacm::trace(leaked, &record.core.c2, self.curve()) {
            Ok(pair) => pair,
            Err(Error::MalformedLeak | Error::LengthMismatch { .. }) => {
                return Ok(TraceOutcome::Unknown)
            }
            Err(e) => return Err(e),
        };
        Ok(match self.ta.investigators.get(&Pseudonym(pid)) {
            Some(r) if r.sk == sk => TraceOutcome::Identified {
                index: r.index,
                id: r.id.clone(),
            },
            _ => TraceOutcome::Unknown,
        })
    }

    /// Changes the listed issuers' bits for `in_idx` and refreshes the
    /// warrant by contacting only those issuers.
    pub fn phase_update(&mut self, in_idx: usize, delta: &[(usize, bool)]) -> Result<UpdateReport> {
        let in_addr = Addr::In(in_idx);
        let inv = self
            .ins
            .get(in_idx)
            .ok_or_else(|| Error::UnknownEntity(in_addr.to_string()))?;
        let warrant = inv.warrant.clone().ok_or(Error::NoWarrant)?;
        let n = self.n_wi();
        if let Some(&(index, _)) = delta.iter().find(|(i, _)| *i == 0 || *i > n) {
            return Err(Error::IndexOutOfRange { index, max: n });
        }
        self.bus.clear_queues();
        let mark = self.bus.transcript().len();
        let now = self.tick();
        let curve = self.curve();

        for &(i, _) in delta {
            let body = self.request_body(in_idx, true, now);
            let pk = self.wis[i - 1].public_key();
            self.send_sealed(
                Phase::Update,
                in_addr,
                Addr::Wi(i),
                Kind::WarrantRequest,
                &pk,
                &body,
            )?;
        }
        let pk_in = self.ins[in_idx].creds.keys.public();
        for &(i, bit) in delta {
            for d in self.bus.drain(Addr::Wi(i)) {
                let (pid, update) = self.wi_receive_request(i, &d.bytes, now)?;
                if !update {
                    return Err(Error::Encoding("issuance request in update"));
                }
                let up = self.wis[i - 1].update_partial(&pid, bit)?;
                let body = wire::encode_update(&up, now);
                let sk_wi = self.wis[i - 1].secret_key();
                self.send_signed_sealed(
                    Phase::Update,
                    Addr::Wi(i),
                    in_addr,
                    Kind::WarrantUpdate,
                    (&pk_in, &sk_wi),
                    &body,
                )?;
            }
        }
        let sk_in = self.ins[in_idx].creds.keys.secret();
        let mut updates: Vec<WarrantUpdate> = Vec::new();
        for d in self.bus.drain(in_addr) {
            let Addr::Wi(from) = d.from else { continue };
            let (u, ts) = wire::decode_update(
                curve,
                &self.open_signed(Kind::WarrantUpdate, from, &sk_in, &d.bytes)?,
            )?;
            self.window.check(self.clock, ts)?;
            if u.index != from {
                return Err(Error::InconsistentIssuance);
            }
            updates.push(u);
        }
        let warrant = warrant.apply_update(&updates)?;
        let permissions = warrant.permissions.clone();
        self.ins[in_idx].warrant = Some(warrant);

        let entries = self.bus.since(mark, |_| true);
        let mut contacted: Vec<usize> = entries
            .iter()
            .filter_map(|e| match (e.from, e.to) {
                (Addr::Wi(i), _) | (_, Addr::Wi(i)) => Some(i),
                _ => None,
            })
            .collect();
        contacted.sort_unstable();
        contacted.dedup();
        Ok(UpdateReport {
            contacted,
            traffic: total(&entries),
            permissions,
        })
    }
}

/// Outcome of a complete scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub issue: Vec<IssueReport>,
    pub upload: UploadReport,
    pub access: AccessReport,
    pub trace: Option<TraceOutcome>,
    pub update: Option<(UpdateReport, AccessReport)>,
}

impl ScenarioReport {
    /// One human-readable line per phase.
    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        let issue_bytes: usize = self.issue.iter().map(|r| r.traffic.frame_bytes).sum();
        out.push(format!(
            "issue: OK, {} warrant(s), {} bytes, inter-WI payload per WI {:?}",
            self.issue.len(),
            issue_bytes,
            self.issue
                .first()
                .map(|r| r.inter_wi_payload.clone())
                .unwrap_or_default()
        ));
        out.push(format!(
            "upload: accepted {} rejected {:?} in {} batch(es), {} bytes",
            self.upload.accepted.len(),
            self.upload.rejected,
            self.upload.batches,
            self.upload.traffic.frame_bytes
        ));
        out.push(format!(
            "access: {}, {} bytes",
            describe(&self.access.outcome),
            self.access.traffic.frame_bytes
        ));
        out.push(match &self.trace {
            Some(TraceOutcome::Identified { id, .. }) => {
                format!("trace: OK, leak attributed to {id}")
            }
            Some(TraceOutcome::Unknown) => "trace: leak not attributable".to_string(),
            None => "trace: skipped, no response to trace".to_string(),
        });
        out.push(match &self.update {
            Some((u, a)) => format!(
                "update: OK, contacted WIs {:?}, {} bytes, permissions now {}; access after update: {}",
                u.contacted,
                u.traffic.frame_bytes,
                u.permissions,
                describe(&a.outcome)
            ),
            None => "update: skipped, no updated permissions configured".to_string(),
        });
        out
    }

    /// Phase outcomes that no honest run should produce. Denial under an
    /// uncovered policy is expected and not listed.
    pub fn anomalies(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.upload.rejected.is_empty() {
            out.push(format!(
                "honest uploads rejected: {:?}",
                self.upload.rejected
            ));
        }
        let expected = self
            .upload
            .accepted
            .first()
            .map(|&(k, _)| sample_message(k));
        match &self.access.outcome {
            AccessOutcome::Granted(m) if Some(m) != expected.as_ref() => {
                out.push("access returned the wrong plaintext".into())
            }
            AccessOutcome::Granted(_) | AccessOutcome::Denied => {}
            other => out.push(format!("access: {}", describe(other))),
        }
        if self.trace == Some(TraceOutcome::Unknown) {
            out.push("leak could not be traced".into());
        }
        if let Some((_, after)) = &self.update {
            if matches!(
                after.outcome,
                AccessOutcome::Refused(_) | AccessOutcome::Failed(_)
            ) {
                out.push(format!("access after update: {}", describe(&after.outcome)));
            }
        }
        out
    }
}

fn describe(outcome: &AccessOutcome) -> String {
    match outcome {
        AccessOutcome::Granted(m) => format!("OK, recovered {} bytes", m.len()),
        AccessOutcome::Denied => "access denied (permissions do not cover the policy)".to_string(),
        AccessOutcome::Refused(e) => format!("refused by TA: {e}"),
        AccessOutcome::Failed(e) => format!("failed: {e}"),
    }
}

/// Sample payload uploaded by provider `i` in a scenario.
pub fn sample_message(i: usize) -> Vec<u8> {
    format!("sensor log {i:04}: speed, heading, brake pressure").into_bytes()
}

pub const SCENARIO_ACCIDENT: &[u8] = b"accident-0001";

/// Setup, warrant issuance for every investigator, one upload per provider,
/// access and trace by the first investigator, then the optional update.
pub fn run_scenario(cfg: ScenarioConfig) -> Result<ScenarioReport> {
    let mut sys = System::setup(cfg)?;
    let issue = (0..sys.ins.len())
        .map(|i| sys.issue_warrant(i))
        .collect::<Result<Vec<_>>>()?;
    let submissions: Vec<_> = (0..sys.dps.len()).map(|i| (i, sample_message(i))).collect();
    let upload = sys.phase_upload(SCENARIO_ACCIDENT, &submissions)?;
    let first = upload
        .accepted
        .first()
        .map(|&(_, idx)| idx)
        .ok_or(Error::RecordNotFound)?;
    let access = sys.phase_access(0, SCENARIO_ACCIDENT, first)?;
    let trace = match &access.response {
        Some(resp) => Some(sys.phase_trace(&resp.c, SCENARIO_ACCIDENT, first)?),
        None => None,
    };
    let update = match sys.cfg.updated_permissions.clone() {
        Some(target) => {
            let current = sys.ins[0]
                .warrant
                .as_ref()
                .map(|w| w.permissions.clone())
                .ok_or(Error::NoWarrant)?;
            let delta: Vec<(usize, bool)> = (1..=target.len())
                .filter(|&i| target.get(i) != current.get(i))
                .map(|i| (i, target.get(i)))
                .collect();
            let report = sys.phase_update(0, &delta)?;
            let after = sys.phase_access(0, SCENARIO_ACCIDENT, first)?;
            Some((report, after))
        }
        None => None,
    };
    Ok(ScenarioReport {
        issue,
        upload,
        access,
        trace,
        update,
    })
}
