//! Per-task seed derivation.
//!
//! Every random draw in a run is keyed by the master seed and the task's
//! coordinates, never by scheduling order:
//!
//! ```text
//! h(s, i)       = splitmix64(splitmix64(s) ^ i)
//! state seed    = h(h(s, STATE_STREAM), member)
//! noise seed    = h(h(h(s, NOISE_STREAM), member), realization)
//! ```
//!
//! `splitmix64` is the finalizer of Steele, Lea and Flood's SplitMix
//! generator. The chaos parameter is not an input, so every `lambda` sees the
//! same states and the same noise draws.

pub const STATE_STREAM: u64 = 1;
pub const NOISE_STREAM: u64 = 2;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `h(s, i)`: seed of item `i` under master seed `s`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

/// Seed of the initial state of ensemble member `member`.
pub fn state_seed(master: u64, member: usize) -> u64 {
    derive_seed(derive_seed(master, STATE_STREAM), member as u64)
}

/// Seed of the noise of realization `realization` for member `member`.
pub fn noise_seed(master: u64, member: usize, realization: usize) -> u64 {
    let stream = derive_seed(derive_seed(master, NOISE_STREAM), member as u64);
    derive_seed(stream, realization as u64)
}
