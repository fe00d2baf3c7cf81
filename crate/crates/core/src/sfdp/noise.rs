//! Stateless, seed-derived pseudo-random values.
//!
//! Jitter must not depend on evaluation order or thread count, so each value
//! is a hash of the seed and the indices it belongs to.

#[inline]
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

#[inline]
pub(crate) fn hash3(seed: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b)
}

/// Uniform value in [-1, 1).
#[inline]
fn unit_interval(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

/// Unit vector determined by `(seed, a, b)`, written into `out`.
pub(crate) fn unit_direction(seed: u64, a: u64, b: u64, out: &mut [f64]) {
    let mut h = hash3(seed, a, b);
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            h = splitmix64(h);
            *x = unit_interval(h);
            norm2 += *x * *x;
        }
        if norm2 > 1e-6 && (out.len() == 1 || norm2 <= 1.0) {
            let norm = norm2.sqrt();
            out.iter_mut().for_each(|x| *x /= norm);
            return;
        }
    }
}
