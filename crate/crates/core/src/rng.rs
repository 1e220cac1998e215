//! Counter-based random streams.
//!
//! Every random value in the crate is a pure function of a 64-bit key and a
//! 128-bit counter, computed with Philox4x32-10 (Salmon et al., "Parallel
//! random numbers: as easy as 1, 2, 3", SC'11). Matrix entry `(i, j)` of a
//! sample with seed `s` is drawn from counter `(i, j, channel, 0)` under key
//! `s`, so the fill order and the number of worker threads never change the
//! output.

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

#[inline(always)]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = u64::from(a) * u64::from(b);
    ((p >> 32) as u32, p as u32)
}

/// One Philox4x32-10 block.
#[inline]
pub fn philox4x32_10(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut ctr = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(PHILOX_W0);
            k[1] = k[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, ctr[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, ctr[2]);
        ctr = [hi1 ^ ctr[1] ^ k[0], lo1, hi0 ^ ctr[3] ^ k[1], lo0];
    }
    ctr
}

#[inline]
fn split_key(seed: u64) -> [u32; 2] {
    [seed as u32, (seed >> 32) as u32]
}

/// SplitMix64 finalizer. A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replica `replica` at dimension `n` under `master`.
///
/// `mix64(mix64(mix64(master) ^ n) ^ replica)`; injective in `replica` for
/// fixed `(master, n)` because `mix64` is a bijection.
pub fn derive_seed(master: u64, n: u64, replica: u64) -> u64 {
    mix64(mix64(mix64(master) ^ n) ^ replica)
}

/// Converts the top 53 bits of `x` to a uniform double in `[0, 1)`.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Keyed view of the Philox function addressed by a 2-D index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterStream {
    key: [u32; 2],
    channel: u32,
}

impl CounterStream {
    pub fn new(seed: u64, channel: u32) -> Self {
        Self {
            key: split_key(seed),
            channel,
        }
    }

    /// Two independent 64-bit words for index `(a, b)`.
    #[inline]
    pub fn words(&self, a: u32, b: u32) -> [u64; 2] {
        let out = philox4x32_10([a, b, self.channel, 0], self.key);
        [
            u64::from(out[0]) | (u64::from(out[1]) << 32),
            u64::from(out[2]) | (u64::from(out[3]) << 32),
        ]
    }

    /// Two uniforms in `[0, 1)` for index `(a, b)`.
    #[inline]
    pub fn uniforms(&self, a: u32, b: u32) -> [f64; 2] {
        let [x, y] = self.words(a, b);
        [unit_f64(x), unit_f64(y)]
    }
}

/// Sequential generator over a Philox counter, used for resampling and
/// permutations. Deterministic given `(seed, channel)`.
#[derive(Debug, Clone)]
pub struct SeqRng {
    stream: CounterStream,
    block: u64,
    buf: [u64; 2],
    used: usize,
}

impl SeqRng {
    pub fn new(seed: u64, channel: u32) -> Self {
        Self {
            stream: CounterStream::new(seed, channel),
            block: 0,
            buf: [0; 2],
            used: 2,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        if self.used == 2 {
            self.buf = self
                .stream
                .words(self.block as u32, (self.block >> 32) as u32);
            self.block += 1;
            self.used = 0;
        }
        let v = self.buf[self.used];
        self.used += 1;
        v
    }

    pub fn next_f64(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    /// Uniform integer in `0..bound` (Lemire's multiply-and-reject).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = u128::from(self.next_u64()) * u128::from(bound);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Known-answer vectors from the Random123 distribution (kat_vectors).
    #[test]
    fn philox_known_answers() {
        assert_eq!(
            philox4x32_10([0, 0, 0, 0], [0, 0]),
            [0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8]
        );
        assert_eq!(
            philox4x32_10([u32::MAX; 4], [u32::MAX; 2]),
            [0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd]
        );
        assert_eq!(
            philox4x32_10(
                [0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344],
                [0xa4093822, 0x299f31d0]
            ),
            [0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1]
        );
    }

    #[test]
    fn replica_seeds_distinct() {
        let seeds: std::collections::HashSet<u64> =
            (0..10_000).map(|r| derive_seed(7, 40, r)).collect();
        assert_eq!(seeds.len(), 10_000);
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SeqRng::new(3, 0);
        for bound in [1u64, 2, 3, 7, 1000] {
            for _ in 0..200 {
                assert!(rng.below(bound) < bound);
            }
        }
    }

    #[test]
    fn shuffle_is_permutation() {
        let mut rng = SeqRng::new(11, 1);
        let mut v: Vec<usize> = (0..100).collect();
        rng.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
        assert_ne!(v, sorted);
    }
}
