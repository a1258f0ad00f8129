//! Counter-based SplitMix64 stream: draw `i` of seed `s` is
//! `mix(s + (i + 1) * 0x9E3779B97F4A7C15)`, so every value depends only on
//! `(s, i)` and is identical on every platform.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn draw(seed: u64, index: u64) -> u64 {
    mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Uniform in `[0, 1)` from the top 53 bits.
pub fn unit(seed: u64, index: u64) -> f64 {
    (draw(seed, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` values uniform in `[-v, v)`.
pub fn box_potential(seed: u64, n: usize, v: f64) -> Vec<f64> {
    (0..n as u64).map(|i| v * (2.0 * unit(seed, i) - 1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_reference_splitmix() {
        // SplitMix64 seeded with 0: first output of the sequential generator
        assert_eq!(draw(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(draw(0, 1), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn box_is_bounded_and_reproducible() {
        let a = box_potential(42, 1000, 2.5);
        assert!(a.iter().all(|x| (-2.5..2.5).contains(x)));
        assert_eq!(a, box_potential(42, 1000, 2.5));
        assert_ne!(a, box_potential(43, 1000, 2.5));
    }
}
