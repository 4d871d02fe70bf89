//! Per-thread group operation counters.
//!
//! Every group scalar multiplication and every scalar-field inversion bumps a
//! thread-local tally. [`measure`] reports the delta across one closure, so
//! counts are scoped to a single invocation and never shared between threads.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub scalar_muls: u64,
    pub inversions: u64,
}

thread_local! {
    static COUNTS: Cell<OpCount> = const { Cell::new(OpCount { scalar_muls: 0, inversions: 0 }) };
}

pub(crate) fn record_mul() {
    COUNTS.with(|c| {
        let mut v = c.get();
        v.scalar_muls += 1;
        c.set(v);
    });
}

pub(crate) fn record_inversion() {
    COUNTS.with(|c| {
        let mut v = c.get();
        v.inversions += 1;
        c.set(v);
    });
}

/// Runs `f` and returns its result with the operations it performed.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, OpCount) {
    let before = COUNTS.with(Cell::get);
    let out = f();
    let after = COUNTS.with(Cell::get);
    (
        out,
        OpCount {
            scalar_muls: after.scalar_muls - before.scalar_muls,
            inversions: after.inversions - before.inversions,
        },
    )
}
