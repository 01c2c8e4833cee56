//! Deterministic seed derivation for experiment cells.
//!
//! Every trial's RNG seed is derived by folding the cell coordinates into a
//! splitmix64 chain: strings are FNV-1a hashed first, numbers are xor-mixed
//! directly. The fold order is fixed (base seed, family, n, epsilon
//! numerator, epsilon denominator, algorithm, trial index), so a grid cell
//! is reproducible in isolation and collisions across cells are no more
//! likely than random.

#[derive(Debug, Clone, Copy)]
pub struct SeedMix(u64);

impl SeedMix {
    pub fn new(base_seed: u64) -> Self {
        Self(splitmix64(base_seed))
    }

    pub fn with_u64(self, x: u64) -> Self {
        Self(splitmix64(self.0 ^ x))
    }

    pub fn with_str(self, s: &str) -> Self {
        self.with_u64(fnv1a(s.as_bytes()))
    }

    pub fn finish(self) -> u64 {
        self.0
    }
}

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}
