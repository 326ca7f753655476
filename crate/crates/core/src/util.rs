//! Small shared helpers: stable hashing and text measurement.
//!
//! All hashes here are fixed-algorithm and seed-stable so that every
//! artifact (shingles, signature shards, shard assignment) is
//! reproducible across runs and platforms.

/// FNV-1a 64-bit over raw bytes, with an optional seed folded into the
/// initial state. Stable across platforms.
pub fn fnv1a64(bytes: &[u8], seed: u64) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET ^ seed.wrapping_mul(PRIME);
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// SplitMix64 step; used to derive fixed parameter streams from a seed.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Number of Unicode scalar values in `s`.
pub fn scalar_len(s: &str) -> usize {
    s.chars().count()
}

/// Maximal whitespace-delimited tokens.
pub fn whitespace_tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split_whitespace()
}

/// Count of whitespace-delimited words.
pub fn word_count(s: &str) -> usize {
    s.split_whitespace().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_is_stable() {
        assert_eq!(fnv1a64(b"", 0), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"abc", 0), fnv1a64(b"abc", 0));
        assert_ne!(fnv1a64(b"abc", 0), fnv1a64(b"abc", 1));
        assert_ne!(fnv1a64(b"abc", 0), fnv1a64(b"abd", 0));
    }

    #[test]
    fn word_counts() {
        assert_eq!(word_count("  a  b\tc\n"), 3);
        assert_eq!(word_count(""), 0);
        assert_eq!(scalar_len("héllo"), 5);
    }
}
