//! Process-wide work counters.
//!
//! Counters are monotone and only ever read as before/after deltas, so
//! concurrent solves in one process see each other's work mixed in. The CLI
//! runs one solve per process.

use std::sync::atomic::{AtomicU64, Ordering};

static POPS: AtomicU64 = AtomicU64::new(0);
static RELAXATIONS: AtomicU64 = AtomicU64::new(0);
static POTENTIALS_CHECKED: AtomicU64 = AtomicU64::new(0);
static VALIDITY_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Counters {
    pub pops: u64,
    pub relaxations: u64,
}

impl Counters {
    pub fn snapshot() -> Self {
        Counters {
            pops: POPS.load(Ordering::Relaxed),
            relaxations: RELAXATIONS.load(Ordering::Relaxed),
        }
    }

    pub fn since(self, earlier: Counters) -> Counters {
        Counters {
            pops: self.pops - earlier.pops,
            relaxations: self.relaxations - earlier.relaxations,
        }
    }
}

pub(crate) fn record_work(pops: u64, relaxations: u64) {
    POPS.fetch_add(pops, Ordering::Relaxed);
    RELAXATIONS.fetch_add(relaxations, Ordering::Relaxed);
}

pub(crate) fn record_potential_check(valid: bool) {
    POTENTIALS_CHECKED.fetch_add(1, Ordering::Relaxed);
    if !valid {
        VALIDITY_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
}

/// Number of emitted potential vectors that went through the validity check.
pub fn potentials_checked() -> u64 {
    POTENTIALS_CHECKED.load(Ordering::Relaxed)
}

/// Number of emitted potential vectors that failed the validity check.
pub fn validity_violations() -> u64 {
    VALIDITY_VIOLATIONS.load(Ordering::Relaxed)
}
