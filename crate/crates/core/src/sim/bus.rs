//! In-process message bus with byte accounting and fault injection.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Addr {
    Ta,
    Wi(usize),
    Dp(usize),
    Rsu(usize),
    In(usize),
}

impl fmt::Display for Addr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Addr::Ta => write!(f, "TA"),
            Addr::Wi(i) => write!(f, "WI{i}"),
            Addr::Dp(i) => write!(f, "DP{i}"),
            Addr::Rsu(i) => write!(f, "RSU{i}"),
            Addr::In(i) => write!(f, "IN{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Issue,
    Upload,
    Access,
    Update,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Issue => "issue",
            Phase::Upload => "upload",
            Phase::Access => "access",
            Phase::Update => "update",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultKind {
    Drop,
    Duplicate,
    /// Flips the final byte of the frame.
    Tamper,
}

/// Applies `kind` to the next `count` messages matching the filter.
#[derive(Debug, Clone)]
pub struct Fault {
    pub phase: Phase,
    pub from: Option<Addr>,
    pub to: Option<Addr>,
    pub kind: FaultKind,
    pub count: usize,
}

impl Fault {
    fn matches(&self, phase: Phase, from: Addr, to: Addr) -> bool {
        self.count > 0
            && self.phase == phase
            && self.from.is_none_or(|a| a == from)
            && self.to.is_none_or(|a| a == to)
    }
}

/// Traffic totals for one `(phase, from, to)` triple.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Traffic {
    pub messages: usize,
    /// Serialized frame bytes.
    pub frame_bytes: usize,
    /// Protocol content before envelope framing.
    pub payload_bytes: usize,
}

impl std::ops::AddAssign for Traffic {
    fn add_assign(&mut self, o: Traffic) {
        self.messages += o.messages;
        self.frame_bytes += o.frame_bytes;
        self.payload_bytes += o.payload_bytes;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery {
    pub seq: u64,
    pub from: Addr,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub seq: u64,
    pub phase: Phase,
    pub from: Addr,
    pub to: Addr,
    pub len: usize,
    pub payload: usize,
    pub fault: Option<FaultKind>,
}

#[derive(Debug, Default)]
pub struct SimBus {
    queues: HashMap<Addr, VecDeque<Delivery>>,
    traffic: BTreeMap<(Phase, Addr, Addr), Traffic>,
    transcript: Vec<TranscriptEntry>,
    faults: Vec<Fault>,
    next_seq: u64,
    capture: bool,
    captured: Vec<(TranscriptEntry, Vec<u8>)>,
}

impl SimBus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn inject(&mut self, fault: Fault) {
        self.faults.push(fault);
    }

    pub fn clear_faults(&mut self) {
        self.faults.clear();
    }

    /// Keeps a copy of every frame as sent, for inspection.
    pub fn set_capture(&mut self, on: bool) {
        self.capture = on;
    }

    pub fn take_captured(&mut self) -> Vec<(TranscriptEntry, Vec<u8>)> {
        std::mem::take(&mut self.captured)
    }

    /// Queues `frame` for `to` and returns its sequence number. Counters
    /// record every send, including dropped ones.
    pub fn send(
        &mut self,
        phase: Phase,
        from: Addr,
        to: Addr,
        mut frame: Vec<u8>,
        payload_bytes: usize,
    ) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        *self.traffic.entry((phase, from, to)).or_default() += Traffic {
            messages: 1,
            frame_bytes: frame.len(),
            payload_bytes,
        };
        let fault = self
            .faults
            .iter_mut()
            .find(|f| f.matches(phase, from, to))
            .map(|f| {
                f.count -= 1;
                f.kind
            });
        let entry = TranscriptEntry {
            seq,
            phase,
            from,
            to,
            len: frame.len(),
            payload: payload_bytes,
            fault,
        };
        if self.capture {
            self.captured.push((entry.clone(), frame.clone()));
        }
        self.transcript.push(entry);
        let queue = self.queues.entry(to).or_default();
        match fault {
            Some(FaultKind::Drop) => {}
            Some(FaultKind::Duplicate) => {
                queue.push_back(Delivery {
                    seq,
                    from,
                    bytes: frame.clone(),
                });
                queue.push_back(Delivery {
                    seq,
                    from,
                    bytes: frame,
                });
            }
            Some(FaultKind::Tamper) => {
                if let Some(b) = frame.last_mut() {
                    *b ^= 0x01;
                }
                queue.push_back(Delivery {
                    seq,
                    from,
                    bytes: frame,
                });
            }
            None => queue.push_back(Delivery {
                seq,
                from,
                bytes: frame,
            }),
        }
        seq
    }

    /// Everything queued for `to`, in arrival order.
    pub fn drain(&mut self, to: Addr) -> Vec<Delivery> {
        self.queues
            .get_mut(&to)
            .map(|q| q.drain(..).collect())
            .unwrap_or_default()
    }

    /// Discards undelivered messages.
    pub fn clear_queues(&mut self) {
        self.queues.clear();
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    pub fn traffic(&self) -> &BTreeMap<(Phase, Addr, Addr), Traffic> {
        &self.traffic
    }

    pub fn phase_total(&self, phase: Phase) -> Traffic {
        self.sum(|p, _, _| p == phase)
    }

    pub fn inbound(&self, phase: Phase, to: Addr) -> Traffic {
        self.sum(|p, _, t| p == phase && t == to)
    }

    /// Sum over the triples accepted by `filter`.
    pub fn sum(&self, filter: impl Fn(Phase, Addr, Addr) -> bool) -> Traffic {
        let mut total = Traffic::default();
        for (&(p, f, t), v) in &self.traffic {
            if filter(p, f, t) {
                total += *v;
            }
        }
        total
    }

    /// Counters accumulated since `mark`, a transcript length taken earlier.
    pub fn since(
        &self,
        mark: usize,
        filter: impl Fn(&TranscriptEntry) -> bool,
    ) -> Vec<TranscriptEntry> {
        self.transcript[mark..]
            .iter()
            .filter(|e| filter(e))
            .cloned()
            .collect()
    }

    pub fn reset_counters(&mut self) {
        self.traffic.clear();
        self.transcript.clear();
    }
}
