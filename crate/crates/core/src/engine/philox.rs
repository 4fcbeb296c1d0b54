//! Philox4x32-10 counter-based generator.
//!
//! Every uniform variate is a pure function of `(key, counter)`, so a draw
//! can be addressed directly by `(master seed, run, feeder, time)` without
//! any generator state. This makes results independent of execution order
//! and of how runs are split across worker threads.

const M0: u32 = 0xD251_1F53;
const M1: u32 = 0xCD9E_8D57;
const W0: u32 = 0x9E37_79B9;
const W1: u32 = 0xBB67_AE85;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = u64::from(a) * u64::from(b);
    ((p >> 32) as u32, p as u32)
}

/// Ten-round Philox bijection of a 128-bit counter under a 64-bit key.
#[inline]
pub fn philox4x32_10(mut ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let (mut k0, mut k1) = (key[0], key[1]);
    for round in 0..10 {
        if round > 0 {
            k0 = k0.wrapping_add(W0);
            k1 = k1.wrapping_add(W1);
        }
        let (hi0, lo0) = mulhilo(M0, ctr[0]);
        let (hi1, lo1) = mulhilo(M1, ctr[2]);
        ctr = [hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0];
    }
    ctr
}

/// Maps 64 random bits to the open interval (0, 1) on a 2^-52 lattice
/// offset by half a step, so neither endpoint is reachable.
#[inline]
pub fn open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Independent draw families keyed off the same master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Resistance = 0,
    StatusTrial = 1,
}

/// Addresses uniform variates by `(run, feeder, tick)` under one master seed.
#[derive(Debug, Clone, Copy)]
pub struct StreamKey {
    key: [u32; 2],
}

impl StreamKey {
    pub fn new(master_seed: u64, domain: Domain) -> Self {
        let lo = master_seed as u32;
        let hi = (master_seed >> 32) as u32;
        // keep the domains apart without touching the counter space
        let tag = (domain as u32).wrapping_mul(0x85EB_CA6B);
        Self { key: [lo ^ tag, hi] }
    }

    /// Uniform in (0, 1) for substream `(feeder, tick)` of run `run`.
    #[inline]
    pub fn uniform(&self, run: u32, feeder: u32, tick: i64) -> f64 {
        let ctr = [run, feeder, tick as u32, (tick >> 32) as u32];
        let out = philox4x32_10(ctr, self.key);
        open_unit((u64::from(out[0]) << 32) | u64::from(out[1]))
    }
}
