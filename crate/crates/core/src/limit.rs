//! Process-wide bound on the label count accepted by enumerations.
//!
//! Curve and stratum counts grow factorially in `n`, so every enumeration
//! refuses label sets larger than [`max_n`]. The default is 16; the CLI
//! overrides it from `--max-n` or the `M0N_MAX_N` environment variable.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::mask::MAX_LABELS;

pub const DEFAULT_MAX_N: usize = 16;

/// Environment variable read by [`from_env`].
pub const ENV_VAR: &str = "M0N_MAX_N";

static MAX_N: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_N);

pub fn max_n() -> usize {
    MAX_N.load(Ordering::Relaxed)
}

/// Set the enumeration bound, clamped to the bitmask width.
pub fn set_max_n(n: usize) {
    MAX_N.store(n.min(MAX_LABELS), Ordering::Relaxed);
}

/// Apply `M0N_MAX_N` if it is set to a valid count. Returns the bound in force.
pub fn from_env() -> usize {
    if let Some(n) = std::env::var(ENV_VAR).ok().and_then(|v| v.trim().parse().ok()) {
        set_max_n(n);
    }
    max_n()
}
