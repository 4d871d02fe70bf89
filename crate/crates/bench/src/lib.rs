//! Fixtures shared by the criterion benches.

use lpdp_core::params::PermissionSet;
use lpdp_core::primitives::CurveId;
use lpdp_core::sim::{ScenarioConfig, System};

pub use lpdp_core::bench::BatchFixture;

/// Batch sizes covered by the verification benches.
pub const BATCH_SIZES: [usize; 4] = [1, 8, 32, 64];

/// A system with `n_wi` issuers and one investigator holding a full warrant.
pub fn warrant_system(n_wi: usize, seed: u64) -> System {
    let ones = PermissionSet::all_ones(n_wi);
    let mut sys = System::setup(ScenarioConfig {
        n_wi,
        n_dp: 1,
        n_rsu: 1,
        n_in: 1,
        batch_size: 1,
        policy: ones.to_string().parse().expect("bit string"),
        permissions: ones,
        seed,
        curve: CurveId::default(),
        updated_permissions: None,
    })
    .expect("setup");
    sys.issue_warrant(0).expect("issuance");
    sys
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for b in BATCH_SIZES {
            let fx = BatchFixture::new(CurveId::default(), b, 1);
            assert!(fx.verify_batch() && fx.verify_each());
        }
        let mut sys = warrant_system(3, 1);
        assert_eq!(
            sys.phase_update(0, &[(2, false)]).unwrap().contacted,
            vec![2]
        );
    }
}
