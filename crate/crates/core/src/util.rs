//! Small combinatorial helpers shared across modules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Internal samplers, one ChaCha stream each.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Stream {
    Vertices = 1,
    Cones = 2,
    WeddleRank = 3,
    WeddleLines = 4,
    Fixture = 5,
    SkeletonForm = 6,
}

/// A generator for `seed` on its own stream, independent of `ChaCha8Rng::seed_from_u64(seed)` as used by callers.
pub(crate) fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Binomial coefficient with a signed top, `x (x-1) ... (x-k+1) / k!`.
pub fn binom_signed(x: i64, k: usize) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k {
        num *= (x - i as i64) as i128;
        den *= (i + 1) as i128;
    }
    (num / den) as i64
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(2, 5), 0);
        assert_eq!(binom(14, 4), 1001);
        assert_eq!(binom_signed(-1, 3), -1);
        assert_eq!(binom_signed(2, 3), 0);
        for n in 0..12 {
            for k in 0..=n {
                assert_eq!(binom_signed(n as i64, k), binom(n, k) as i64);
            }
        }
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert!(subsets(2, 3).is_empty());
    }
}
