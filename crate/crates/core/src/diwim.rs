//! Decentralized warrant issuance.
//!
//! Every issuer contributes a blinding pair `(d1_i, d2_i)`; the products
//! `d1, d2` hide the secret-share terms so that each issuer's partial reveals
//! nothing on its own. The investigator sums the partials into the two-scalar
//! warrant and keeps the per-issuer `w3` factors so a later permission change
//! only needs the affected issuers.

use std::collections::HashMap;

use rand::{CryptoRng, RngCore};

use crate::authority::{Pseudonym, WiCredentials};
use crate::dacm::WarrantKey;
use crate::envelope::{self, Envelope, FreshnessWindow, Signature};
use crate::error::{Error, Result};
use crate::params::PermissionSet;
use crate::polyshare::lagrange_zero_coefficient;
use crate::primitives::{GroupPoint, HashSuite, Scalar};

const REQUEST_LABEL: &[u8] = b"warrant/request";
const UPDATE_LABEL: &[u8] = b"warrant/update";

fn request_message(label: &[u8], pid: &Pseudonym, timestamp: u64) -> Vec<u8> {
    let mut m = label.to_vec();
    m.extend_from_slice(&pid.to_bytes());
    m.extend_from_slice(&timestamp.to_be_bytes());
    m
}

/// Signed request for a warrant (or an update) sent to each issuer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WarrantRequest {
    pub pid: Pseudonym,
    pub timestamp: u64,
    pub signature: Signature,
    pub update: bool,
}

impl WarrantRequest {
    pub fn issue<R: RngCore + CryptoRng>(
        pid: Pseudonym,
        sk_in: &Scalar,
        timestamp: u64,
        rng: &mut R,
    ) -> Self {
        Self::build(REQUEST_LABEL, false, pid, sk_in, timestamp, rng)
    }

    pub fn update<R: RngCore + CryptoRng>(
        pid: Pseudonym,
        sk_in: &Scalar,
        timestamp: u64,
        rng: &mut R,
    ) -> Self {
        Self::build(UPDATE_LABEL, true, pid, sk_in, timestamp, rng)
    }

    fn build<R: RngCore + CryptoRng>(
        label: &[u8],
        update: bool,
        pid: Pseudonym,
        sk_in: &Scalar,
        timestamp: u64,
        rng: &mut R,
    ) -> Self {
        let signature = envelope::sign(sk_in, &request_message(label, &pid, timestamp), rng);
        WarrantRequest {
            pid,
            timestamp,
            signature,
            update,
        }
    }

    fn message(&self) -> Vec<u8> {
        let label = if self.update {
            UPDATE_LABEL
        } else {
            REQUEST_LABEL
        };
        request_message(label, &self.pid, self.timestamp)
    }
}

/// One issuer's blinding contribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlindingShare {
    pub d1: Scalar,
    pub d2: Scalar,
}

impl BlindingShare {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.d1.to_bytes();
        out.extend_from_slice(&self.d2.to_bytes());
        out
    }

    pub fn from_bytes(curve: &'static crate::primitives::Curve, bytes: &[u8]) -> Result<Self> {
        let w = curve.scalar_len();
        if bytes.len() != 2 * w {
            return Err(Error::LengthMismatch {
                expected: 2 * w,
                got: bytes.len(),
            });
        }
        Ok(BlindingShare {
            d1: Scalar::from_bytes(curve, &bytes[..w])?,
            d2: Scalar::from_bytes(curve, &bytes[w..])?,
        })
    }

    /// Envelope for peer `pk`.
    pub fn seal<R: RngCore + CryptoRng>(&self, pk: &GroupPoint, rng: &mut R) -> Result<Envelope> {
        envelope::encrypt(pk, &self.to_bytes(), rng)
    }

    pub fn open(sk: &Scalar, env: &Envelope) -> Result<Self> {
        Self::from_bytes(sk.curve(), &envelope::decrypt(sk, env)?)
    }
}

/// Products `(d1, d2)` of the own share and one share from every other issuer.
/// `received` pairs each share with its sender's one-based index.
pub fn combine_blinding(
    own_index: usize,
    own: BlindingShare,
    received: &[(usize, BlindingShare)],
    n_wi: usize,
) -> Result<(Scalar, Scalar)> {
    for j in 1..=n_wi {
        if j == own_index {
            continue;
        }
        let count = received.iter().filter(|(from, _)| *from == j).count();
        if count == 0 {
            return Err(Error::MissingContribution(j));
        }
        if count > 1 {
            return Err(Error::InconsistentIssuance);
        }
    }
    if let Some((from, _)) = received
        .iter()
        .find(|(from, _)| *from == 0 || *from > n_wi || *from == own_index)
    {
        return Err(Error::IndexOutOfRange {
            index: *from,
            max: n_wi,
        });
    }
    let mut d1 = own.d1;
    let mut d2 = own.d2;
    for (_, s) in received {
        d1 = d1 * s.d1;
        d2 = d2 * s.d2;
    }
    Ok((d1, d2))
}

/// Result of a full in-process blinding round.
#[derive(Debug, Clone)]
pub struct BlindingOutcome {
    /// `(d1, d2)` as computed by each issuer, in index order.
    pub products: Vec<(Scalar, Scalar)>,
    /// Field elements each issuer received.
    pub inbound_scalars: Vec<usize>,
    /// Envelope bytes each issuer received.
    pub inbound_bytes: Vec<usize>,
}

/// Runs the blinding round among `wis`: every issuer draws a pair, seals it
/// to each peer, and multiplies what it receives.
pub fn blind_exchange<R: RngCore + CryptoRng>(
    wis: &[WiState],
    rng: &mut R,
) -> Result<BlindingOutcome> {
    let n = wis.len();
    let curve = wis.first().ok_or(Error::MissingContribution(1))?.curve();
    let shares: Vec<BlindingShare> = (0..n).map(|_| draw_blinding(curve, rng)).collect();
    let mut inbox: Vec<Vec<(usize, Envelope)>> = vec![Vec::new(); n];
    for (i, share) in shares.iter().enumerate() {
        for (j, peer) in wis.iter().enumerate() {
            if i != j {
                inbox[j].push((i + 1, share.seal(&peer.public_key(), rng)?));
            }
        }
    }
    let mut out = BlindingOutcome {
        products: Vec::with_capacity(n),
        inbound_scalars: Vec::with_capacity(n),
        inbound_bytes: Vec::with_capacity(n),
    };
    for (j, wi) in wis.iter().enumerate() {
        let received = inbox[j]
            .iter()
            .map(|(from, env)| Ok((*from, BlindingShare::open(&wi.creds.keys.secret(), env)?)))
            .collect::<Result<Vec<_>>>()?;
        out.products
            .push(combine_blinding(wi.index(), shares[j], &received, n)?);
        out.inbound_scalars.push(2 * received.len());
        out.inbound_bytes.push(
            inbox[j]
                .iter()
                .map(|(_, e)| e.body.len() + envelope::Envelope::overhead(curve))
                .sum(),
        );
    }
    Ok(out)
}

pub fn draw_blinding<R: RngCore + CryptoRng>(
    curve: &'static crate::primitives::Curve,
    rng: &mut R,
) -> BlindingShare {
    BlindingShare {
        d1: Scalar::random_nonzero(curve, rng),
        d2: Scalar::random_nonzero(curve, rng),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialWarrant {
    pub index: usize,
    pub w1: Scalar,
    pub w2: Scalar,
    pub w3: Scalar,
    pub w4: Scalar,
    pub bit: bool,
}

/// A replacement `w3` factor from one issuer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WarrantUpdate {
    pub index: usize,
    pub w3: Scalar,
    pub bit: bool,
}

#[derive(Debug, Clone)]
struct TableEntry {
    pk_in: GroupPoint,
    bit: bool,
}

/// State held by one warrant issuer.
#[derive(Debug, Clone)]
pub struct WiState {
    creds: WiCredentials,
    nodes: Vec<Scalar>,
    table: HashMap<Pseudonym, TableEntry>,
}

impl WiState {
    /// `nodes` is the published list of all issuers' `s3_j`.
    pub fn new(creds: WiCredentials, nodes: Vec<Scalar>) -> Result<Self> {
        if nodes.get(creds.index.wrapping_sub(1)) != Some(&creds.s3_i) {
            return Err(Error::IndexOutOfRange {
                index: creds.index,
                max: nodes.len(),
            });
        }
        Ok(WiState {
            creds,
            nodes,
            table: HashMap::new(),
        })
    }

    pub fn index(&self) -> usize {
        self.creds.index
    }

    pub fn id(&self) -> &str {
        &self.creds.id
    }

    pub fn public_key(&self) -> GroupPoint {
        self.creds.keys.public()
    }

    pub fn secret_key(&self) -> Scalar {
        self.creds.keys.secret()
    }

    pub fn curve(&self) -> &'static crate::primitives::Curve {
        self.creds.s1.curve()
    }

    /// Records the permission bit this issuer grants to `pid`.
    pub fn set_permission(&mut self, pid: Pseudonym, pk_in: GroupPoint, bit: bool) {
        self.table.insert(pid, TableEntry { pk_in, bit });
    }

    pub fn permission(&self, pid: &Pseudonym) -> Option<bool> {
        self.table.get(pid).map(|e| e.bit)
    }

    /// Checks a request and returns the requester's current bit.
    pub fn authorize(
        &self,
        req: &WarrantRequest,
        now: u64,
        window: &FreshnessWindow,
    ) -> Result<bool> {
        let entry = self.table.get(&req.pid).ok_or(Error::UnknownPseudonym)?;
        window.check(now, req.timestamp)?;
        if !envelope::verify(&entry.pk_in, &req.message(), &req.signature) {
            return Err(Error::BadSignature);
        }
        Ok(entry.bit)
    }

    /// `(s2_i·y_i)⁻¹` with `y_i = (s1 + H3(i))^{1 - bit}`.
    fn w3(&self, bit: bool) -> Result<Scalar> {
        let c = &self.creds;
        let y = if bit {
            Scalar::one(self.curve())
        } else {
            c.s1 + HashSuite::new(self.curve()).h3_index(c.index)
        };
        (c.s2_i * y).invert()
    }

    pub fn issue_partial(&self, pid: &Pseudonym, d1: Scalar, d2: Scalar) -> Result<PartialWarrant> {
        let bit = self.permission(pid).ok_or(Error::UnknownPseudonym)?;
        let c = &self.creds;
        let lambda = lagrange_zero_coefficient(c.index - 1, &self.nodes)?;
        let share = c.f_s3_i * lambda;
        Ok(PartialWarrant {
            index: c.index,
            w1: d1 + c.s2 * d2,
            w2: -(d2 * share),
            w3: self.w3(bit)?,
            w4: -(d1 * share * c.s2.invert()?),
            bit,
        })
    }

    /// Sets the new bit for `pid` and returns the matching `w3`.
    pub fn update_partial(&mut self, pid: &Pseudonym, bit: bool) -> Result<WarrantUpdate> {
        let entry = self.table.get_mut(pid).ok_or(Error::UnknownPseudonym)?;
        entry.bit = bit;
        Ok(WarrantUpdate {
            index: self.creds.index,
            w3: self.w3(bit)?,
            bit,
        })
    }
}

/// The investigator's aggregated warrant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warrant {
    pub w_in_1: Scalar,
    pub w_in_2: Scalar,
    pub w2_sum: Scalar,
    pub w4_sum: Scalar,
    pub w3_components: Vec<Scalar>,
    pub permissions: PermissionSet,
}

impl Warrant {
    /// Combines one partial per issuer, checking that all `w1` agree.
    pub fn aggregate(partials: &[PartialWarrant], n_wi: usize) -> Result<Self> {
        let mut slots: Vec<Option<&PartialWarrant>> = vec![None; n_wi];
        for p in partials {
            let slot = slots
                .get_mut(p.index.wrapping_sub(1))
                .ok_or(Error::IndexOutOfRange {
                    index: p.index,
                    max: n_wi,
                })?;
            if slot.is_some() {
                return Err(Error::InconsistentIssuance);
            }
            *slot = Some(p);
        }
        let ordered = slots
            .iter()
            .enumerate()
            .map(|(i, s)| s.ok_or(Error::MissingContribution(i + 1)))
            .collect::<Result<Vec<_>>>()?;
        let w1 = ordered[0].w1;
        if ordered.iter().any(|p| p.w1 != w1) {
            return Err(Error::InconsistentIssuance);
        }
        Ok(Self::from_components(
            w1,
            ordered.iter().map(|p| p.w2).sum(),
            ordered.iter().map(|p| p.w4).sum(),
            ordered.iter().map(|p| p.w3).collect(),
            PermissionSet::new(ordered.iter().map(|p| p.bit).collect()),
        ))
    }

    pub fn from_components(
        w_in_1: Scalar,
        w2_sum: Scalar,
        w4_sum: Scalar,
        w3_components: Vec<Scalar>,
        permissions: PermissionSet,
    ) -> Self {
        let product: Scalar = w3_components.iter().copied().product();
        Warrant {
            w_in_1,
            w_in_2: w2_sum + product + w4_sum,
            w2_sum,
            w4_sum,
            w3_components,
            permissions,
        }
    }

    /// The two scalars used for decryption.
    pub fn credential(&self) -> WarrantKey {
        WarrantKey {
            w1: self.w_in_1,
            w2: self.w_in_2,
        }
    }

    /// Replaces the listed `w3` factors and bits, leaving `w_IN,1` and the
    /// sums untouched.
    pub fn apply_update(&self, updates: &[WarrantUpdate]) -> Result<Self> {
        let n = self.w3_components.len();
        let mut w3 = self.w3_components.clone();
        let mut perms = self.permissions.clone();
        for u in updates {
            if u.index == 0 || u.index > n {
                return Err(Error::IndexOutOfRange {
                    index: u.index,
                    max: n,
                });
            }
            w3[u.index - 1] = u.w3;
            perms.set(u.index, u.bit);
        }
        Ok(Self::from_components(
            self.w_in_1,
            self.w2_sum,
            self.w4_sum,
            w3,
            perms,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::authority::MasterSecrets;
    use crate::dacm::tests::{oracle_warrant, system};
    use crate::dacm::{decrypt, encrypt, respond};
    use crate::params::{AccessPolicy, PublicParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    struct Net {
        pp: PublicParams,
        ms: MasterSecrets,
        wis: Vec<WiState>,
        pid: Pseudonym,
        sk_in: Scalar,
        rng: ChaCha20Rng,
    }

    fn net(n: usize, perms: &str, seed: u64) -> Net {
        let (pp, ms, mut rng) = system(n, seed);
        let inv = ms.register_in("in-1", &mut rng);
        let perms: PermissionSet = perms.parse().unwrap();
        let wis = (1..=n)
            .map(|i| {
                let mut wi =
                    WiState::new(ms.register_wi(i, &mut rng).unwrap(), pp.wi_nodes.clone())
                        .unwrap();
                wi.set_permission(inv.pid, inv.keys.public(), perms.get(i));
                wi
            })
            .collect();
        Net {
            pp,
            ms,
            wis,
            pid: inv.pid,
            sk_in: inv.keys.secret(),
            rng,
        }
    }

    fn issue(net: &mut Net) -> (Warrant, Scalar, Scalar) {
        let round = blind_exchange(&net.wis, &mut net.rng).unwrap();
        let (d1, d2) = round.products[0];
        let partials: Vec<_> = net
            .wis
            .iter()
            .zip(&round.products)
            .map(|(wi, (a, b))| wi.issue_partial(&net.pid, *a, *b).unwrap())
            .collect();
        (
            Warrant::aggregate(&partials, net.wis.len()).unwrap(),
            d1,
            d2,
        )
    }

    fn opens(net: &mut Net, w: &Warrant, policy: &str) -> bool {
        let policy: AccessPolicy = policy.parse().unwrap();
        let core = encrypt(&net.pp, &policy, b"forensic record", b"A", &mut net.rng).unwrap();
        let resp = respond(&core, &net.pid.0, &net.sk_in).unwrap();
        decrypt(
            &net.pp,
            &w.credential(),
            &w.permissions,
            &resp,
            &net.pid.0,
            &net.sk_in,
        )
        .is_ok()
    }

    #[test]
    fn blinding_products_agree() {
        let mut n = net(5, "11111", 50);
        let round = blind_exchange(&n.wis, &mut n.rng).unwrap();
        assert!(round.products.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(round.inbound_scalars, vec![8; 5]);
        let one = net(1, "1", 51);
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let round = blind_exchange(&one.wis, &mut rng).unwrap();
        assert_eq!(round.inbound_scalars, vec![0]);
    }

    #[test]
    fn combine_blinding_checks_contributors() {
        let curve = crate::primitives::CurveId::BrainpoolP160r1.curve();
        let mut rng = ChaCha20Rng::seed_from_u64(52);
        let s: Vec<_> = (0..3).map(|_| draw_blinding(curve, &mut rng)).collect();
        let (d1, d2) = combine_blinding(1, s[0], &[(2, s[1]), (3, s[2])], 3).unwrap();
        assert_eq!(d1, s[0].d1 * s[1].d1 * s[2].d1);
        assert_eq!(d2, s[0].d2 * s[1].d2 * s[2].d2);
        assert_eq!(
            combine_blinding(1, s[0], &[(2, s[1])], 3),
            Err(Error::MissingContribution(3))
        );
        assert!(combine_blinding(1, s[0], &[(2, s[1]), (2, s[1]), (3, s[2])], 3).is_err());
    }

    #[test]
    fn aggregated_warrant_matches_closed_form() {
        for (n, perms) in [
            (1, "1"),
            (1, "0"),
            (3, "101"),
            (5, "01001"),
            (5, "11111"),
            (8, "00000000"),
        ] {
            let mut net = net(n, perms, 53);
            let (w, d1, d2) = issue(&mut net);
            let expected = oracle_warrant(&net.pp, &net.ms, &perms.parse().unwrap(), d1, d2);
            assert_eq!(w.credential(), expected, "n={n} perms={perms}");
            let s2_inv = net.ms.s2.invert().unwrap();
            assert_eq!(w.w2_sum, -(d2 * net.ms.s3));
            assert_eq!(w.w4_sum, -(d1 * net.ms.s3 * s2_inv));
        }
    }

    #[test]
    fn partial_details() {
        let net = net(3, "101", 54);
        let (d1, d2) = (
            Scalar::from_u64(net.pp.curve(), 3),
            Scalar::from_u64(net.pp.curve(), 4),
        );
        let ps: Vec<_> = net
            .wis
            .iter()
            .map(|wi| wi.issue_partial(&net.pid, d1, d2).unwrap())
            .collect();
        assert!(ps.iter().all(|p| p.w1 == ps[0].w1));
        let s2_1 = net.ms.s2_parts[0];
        assert_eq!(ps[0].w3, s2_1.invert().unwrap());
        let s2_2 = net.ms.s2_parts[1];
        let h = net.pp.hashes().h3_index(2);
        assert_eq!(ps[1].w3, (s2_2 * (net.ms.s1 + h)).invert().unwrap());
        let stranger = Pseudonym::derive(net.pp.curve(), "nobody");
        assert_eq!(
            net.wis[0].issue_partial(&stranger, d1, d2),
            Err(Error::UnknownPseudonym)
        );
    }

    #[test]
    fn issued_warrant_decrypts_matching_policies_only() {
        let mut net = net(5, "11101", 55);
        let (w, _, _) = issue(&mut net);
        assert!(opens(&mut net, &w, "01001"));
        assert!(opens(&mut net, &w, "11101"));
        assert!(opens(&mut net, &w, "00000"));
        assert!(!opens(&mut net, &w, "00010"));
    }

    #[test]
    fn inconsistent_blinding_is_detected() {
        let mut net = net(3, "111", 56);
        let round = blind_exchange(&net.wis, &mut net.rng).unwrap();
        let mut partials: Vec<_> = net
            .wis
            .iter()
            .zip(&round.products)
            .map(|(wi, (a, b))| wi.issue_partial(&net.pid, *a, *b).unwrap())
            .collect();
        let (d1, d2) = round.products[2];
        partials[2] = net.wis[2]
            .issue_partial(&net.pid, d1 + Scalar::one(net.pp.curve()), d2)
            .unwrap();
        assert_eq!(
            Warrant::aggregate(&partials, 3),
            Err(Error::InconsistentIssuance)
        );
    }

    #[test]
    fn missing_partial_cannot_open_records() {
        let mut net = net(4, "1111", 57);
        let round = blind_exchange(&net.wis, &mut net.rng).unwrap();
        let partials: Vec<_> = net
            .wis
            .iter()
            .zip(&round.products)
            .map(|(wi, (a, b))| wi.issue_partial(&net.pid, *a, *b).unwrap())
            .collect();
        for skip in 0..4 {
            let rest: Vec<_> = partials
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, p)| *p)
                .collect();
            assert_eq!(
                Warrant::aggregate(&rest, 4),
                Err(Error::MissingContribution(skip + 1))
            );
            // Summing what is available without the aggregator's checks.
            let forged = Warrant::from_components(
                rest[0].w1,
                rest.iter().map(|p| p.w2).sum(),
                rest.iter().map(|p| p.w4).sum(),
                rest.iter().map(|p| p.w3).collect(),
                PermissionSet::all_ones(4),
            );
            assert!(!opens(&mut net, &forged, "1111"));
        }
    }

    #[test]
    fn update_touches_only_listed_issuers() {
        let mut net = net(5, "01001", 58);
        let (w, d1, d2) = issue(&mut net);
        assert!(!opens(&mut net, &w, "00100"));
        let up = net.wis[2].update_partial(&net.pid, true).unwrap();
        let w2 = w.apply_update(&[up]).unwrap();
        assert_eq!(w2.w_in_1, w.w_in_1);
        assert_eq!(
            w2.w3_components
                .iter()
                .zip(&w.w3_components)
                .filter(|(a, b)| a != b)
                .count(),
            1
        );
        assert_eq!(
            w2.credential(),
            oracle_warrant(&net.pp, &net.ms, &"01101".parse().unwrap(), d1, d2)
        );
        assert!(opens(&mut net, &w2, "00100"));
        // Revoke issuer 2 and the old policy stops opening.
        let down = net.wis[1].update_partial(&net.pid, false).unwrap();
        let w3 = w2.apply_update(&[down]).unwrap();
        assert!(!opens(&mut net, &w3, "01000"));
        assert!(opens(&mut net, &w3, "00101"));
        assert_eq!(w.apply_update(&[]).unwrap(), w);
        let same = net.wis[0].update_partial(&net.pid, false).unwrap();
        assert_eq!(same.w3, w.w3_components[0]);
        assert!(w
            .apply_update(&[WarrantUpdate { index: 6, ..same }])
            .is_err());
    }

    #[test]
    fn full_update_equals_fresh_w3_product() {
        let mut net = net(4, "0000", 59);
        let (w, d1, d2) = issue(&mut net);
        let pid = net.pid;
        let ups: Vec<_> = net
            .wis
            .iter_mut()
            .map(|wi| wi.update_partial(&pid, true).unwrap())
            .collect();
        let updated = w.apply_update(&ups).unwrap();
        let fresh: Vec<_> = net
            .wis
            .iter()
            .map(|wi| wi.issue_partial(&pid, d1, d2).unwrap())
            .collect();
        assert_eq!(updated, Warrant::aggregate(&fresh, 4).unwrap());
    }

    #[test]
    fn request_authorization() {
        let mut net = net(2, "11", 60);
        let window = FreshnessWindow::default();
        let req = WarrantRequest::issue(net.pid, &net.sk_in, 1000, &mut net.rng);
        assert_eq!(net.wis[0].authorize(&req, 1050, &window), Ok(true));
        assert!(matches!(
            net.wis[0].authorize(&req, 2000, &window),
            Err(Error::StaleTimestamp { .. })
        ));
        let forged =
            WarrantRequest::issue(net.pid, &Scalar::one(net.pp.curve()), 1000, &mut net.rng);
        assert_eq!(
            net.wis[0].authorize(&forged, 1000, &window),
            Err(Error::BadSignature)
        );
        let mut as_update = req.clone();
        as_update.update = true;
        assert_eq!(
            net.wis[0].authorize(&as_update, 1000, &window),
            Err(Error::BadSignature)
        );
        let stranger = WarrantRequest::issue(
            Pseudonym::derive(net.pp.curve(), "x"),
            &net.sk_in,
            1000,
            &mut net.rng,
        );
        assert_eq!(
            net.wis[1].authorize(&stranger, 1000, &window),
            Err(Error::UnknownPseudonym)
        );
    }
}
