//! Exhaustive enumeration of feature subsets up to a size bound.

use crate::error::FirError;
use crate::numeric::binomial;
use crate::Result;

/// Number of subsets of sizes 1..=kmax out of d features.
pub fn subset_count(d: usize, kmax: usize) -> u64 {
    (1..=kmax).map(|k| binomial(d, k)).sum()
}

/// Streams every subset of 1..=kmax of the 1-based indices {1..d},
/// ordered by size then lexicographically.
pub fn enumerate_subsets(d: usize, kmax: usize) -> Result<impl Iterator<Item = Vec<usize>>> {
    if kmax == 0 || kmax > d {
        return Err(FirError::InvalidBound { kmax, d });
    }
    Ok((1..=kmax).flat_map(move |k| SizeK::new(d, k)))
}

/// Lexicographic size-k combinations of {1..d}.
struct SizeK {
    d: usize,
    current: Option<Vec<usize>>,
}

impl SizeK {
    fn new(d: usize, k: usize) -> SizeK {
        SizeK {
            d,
            current: Some((1..=k).collect()),
        }
    }
}

impl Iterator for SizeK {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.take()?;
        let k = current.len();
        let mut next = current.clone();
        // advance the rightmost index that still has room
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.d - (k - 1 - i) {
                next[i] += 1;
                for j in (i + 1)..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_of_three() {
        let all: Vec<Vec<usize>> = enumerate_subsets(3, 3).unwrap().collect();
        assert_eq!(
            all,
            vec![
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3],
            ]
        );
    }

    #[test]
    fn count_matches_binomial_sum() {
        let n = enumerate_subsets(15, 8).unwrap().count();
        assert_eq!(n as u64, subset_count(15, 8));
        assert_eq!(n, 22_818);
    }

    #[test]
    fn singletons_only() {
        let all: Vec<Vec<usize>> = enumerate_subsets(15, 1).unwrap().collect();
        assert_eq!(all.len(), 15);
        assert_eq!(all[0], vec![1]);
        assert_eq!(all[14], vec![15]);
    }

    #[test]
    fn kmax_above_d_is_rejected() {
        assert!(matches!(
            enumerate_subsets(3, 4),
            Err(FirError::InvalidBound { kmax: 4, d: 3 })
        ));
    }

    #[test]
    fn subsets_are_unique() {
        let mut seen = std::collections::HashSet::new();
        for s in enumerate_subsets(10, 4).unwrap() {
            assert!(seen.insert(s.clone()), "duplicate {s:?}");
        }
        assert_eq!(seen.len() as u64, subset_count(10, 4));
    }
}
