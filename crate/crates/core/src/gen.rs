//! Seeded synthetic pattern sets for verification and benchmarks.
//!
//! All generators draw from a `ChaCha8Rng`, so a seed reproduces the same
//! bytes on every platform. Outputs are raw lists and still need
//! [`validate`](crate::validate) (usually with `Policy::DropContained`).

use rand::Rng;

pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as GenRng;

/// The `sigma` symbols used by the generators: lowercase letters from `a`
/// for `sigma <= 26`, otherwise the byte values `0..sigma`.
pub fn alphabet(sigma: usize) -> Vec<u8> {
    assert!(
        (1..=256).contains(&sigma),
        "alphabet size must be in 1..=256"
    );
    if sigma <= 26 {
        (b'a'..b'a' + sigma as u8).collect()
    } else {
        (0..sigma).map(|b| b as u8).collect()
    }
}

fn random_string<R: Rng>(rng: &mut R, len: usize, symbols: &[u8]) -> Vec<u8> {
    (0..len)
        .map(|_| symbols[rng.gen_range(0..symbols.len())])
        .collect()
}

/// `n` uniform reads of exactly `len` bytes over `sigma` symbols.
pub fn random_reads<R: Rng>(rng: &mut R, n: usize, len: usize, sigma: usize) -> Vec<Vec<u8>> {
    let symbols = alphabet(sigma);
    (0..n).map(|_| random_string(rng, len, &symbols)).collect()
}

/// A small instance: between 1 and `max_n` strings, each of length between
/// 1 and `max_len`.
pub fn random_small_instance<R: Rng>(
    rng: &mut R,
    max_n: usize,
    max_len: usize,
    sigma: usize,
) -> Vec<Vec<u8>> {
    let symbols = alphabet(sigma);
    let n = rng.gen_range(1..=max_n);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            random_string(rng, len, &symbols)
        })
        .collect()
}

/// Overlap-dense family: every string is `B + core + B` where the border `B`
/// is `abab...` of length `max(2, len / 5)` and the core is random over
/// `sigma` symbols disjoint from `a` and `b`. Every ordered pair overlaps on
/// all even-length prefixes of `B`.
pub fn dense_family<R: Rng>(rng: &mut R, n: usize, len: usize, sigma: usize) -> Vec<Vec<u8>> {
    assert!(
        sigma <= 24,
        "core alphabet must leave room for the border symbols"
    );
    let border_len = (len / 5).max(2);
    assert!(
        len > 2 * border_len,
        "strings too short for two borders and a core"
    );
    let border: Vec<u8> = b"ab".iter().copied().cycle().take(border_len).collect();
    let core_symbols: Vec<u8> = (b'c'..b'c' + sigma as u8).collect();
    let core_len = len - 2 * border_len;
    (0..n)
        .map(|_| {
            let mut s = border.clone();
            s.extend(random_string(rng, core_len, &core_symbols));
            s.extend_from_slice(&border);
            s
        })
        .collect()
}

/// `a b^i a` for `i = 1..=n`: factor-free, and every ordered pair overlaps
/// on exactly `a`.
pub fn staircase_family(n: usize) -> Vec<Vec<u8>> {
    (1..=n)
        .map(|i| {
            let mut s = vec![b'a'];
            s.resize(i + 1, b'b');
            s.push(b'a');
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern_set::{validate, Policy};

    #[test]
    fn seeded_output_is_reproducible() {
        let a = random_reads(&mut GenRng::seed_from_u64(7), 5, 20, 4);
        let b = random_reads(&mut GenRng::seed_from_u64(7), 5, 20, 4);
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|b| b"abcd".contains(b)));
    }

    #[test]
    fn small_instances_respect_bounds() {
        let mut rng = GenRng::seed_from_u64(1);
        for _ in 0..200 {
            let inst = random_small_instance(&mut rng, 8, 12, 2);
            assert!((1..=8).contains(&inst.len()));
            assert!(inst.iter().all(|s| (1..=12).contains(&s.len())));
        }
    }

    #[test]
    fn dense_family_is_factor_free() {
        let raw = dense_family(&mut GenRng::seed_from_u64(3), 300, 50, 4);
        assert!(raw
            .iter()
            .all(|s| s.len() == 50 && s.starts_with(b"ababababab")));
        let v = validate(raw, Policy::Strict).unwrap();
        assert_eq!(v.set.len(), 300);
    }

    #[test]
    fn staircase_shape() {
        let s = staircase_family(3);
        assert_eq!(
            s,
            vec![b"aba".to_vec(), b"abba".to_vec(), b"abbba".to_vec()]
        );
        assert!(validate(s, Policy::Strict).is_ok());
    }

    #[test]
    fn wide_alphabets() {
        assert_eq!(alphabet(2), b"ab");
        assert_eq!(alphabet(256).len(), 256);
    }
}
