//! Weak compositions of an integer into a fixed number of parts.
//!
//! The multinomial layer of the closed form sums over every vector of
//! non-negative integers `(l_1, ..., l_K)` with `sum l_k = t`. Enumeration
//! is colexicographic ascending: the first composition is `(t, 0, ..., 0)`,
//! the last `(0, ..., 0, t)`, and there are `C(t + K - 1, K - 1)` in total.

use crate::error::{Error, Result};

/// In-place cursor over the weak compositions of `total` into `parts` parts.
///
/// `advance` steps to the next composition and exposes it as a slice, so the
/// hot loop of the closed form allocates nothing. Use
/// [`enumerate_compositions`] for an owning iterator.
#[derive(Debug, Clone)]
pub struct CompositionCursor {
    total: u64,
    current: Vec<u64>,
    state: CursorState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CursorState {
    Fresh,
    Running,
    Done,
}

impl CompositionCursor {
    ///`parts == 0` admits only `total == 0` (the single empty composition).
    pub fn new(total: u64, parts: usize) -> Result<Self> {
        if parts == 0 && total > 0 {
            return Err(Error::Domain(format!(
                "cannot compose {total} into zero parts"
            )));
        }
        let mut current = vec![0u64; parts];
        if parts > 0 {
            current[0] = total;
        }
        Ok(Self {
            total,
            current,
            state: CursorState::Fresh,
        })
    }

    /// Sum of every composition (constant over the run).
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn parts(&self) -> usize {
        self.current.len()
    }

    /// Step to the next composition in colex order, or `None` when done.
    pub fn advance(&mut self) -> Option<&[u64]> {
        match self.state {
            CursorState::Fresh => {
                self.state = CursorState::Running;
                Some(&self.current)
            }
            CursorState::Done => None,
            CursorState::Running => {
                // Colex successor: find the smallest j >= 1 with mass below
                // it, push one unit up to j, flush the rest back to slot 0.
                let k = self.current.len();
                let mut prefix = 0u64;
                for j in 1..k {
                    prefix += self.current[j - 1];
                    if prefix > 0 {
                        self.current[j] += 1;
                        let refill = prefix - 1;
                        for slot in self.current[..j].iter_mut() {
                            *slot = 0;
                        }
                        self.current[0] = refill;
                        return Some(&self.current);
                    }
                }
                self.state = CursorState::Done;
                None
            }
        }
    }
}

/// Owning iterator over the weak compositions of `total` into `parts`.
pub fn enumerate_compositions(
    total: u64,
    parts: usize,
) -> Result<impl Iterator<Item = Vec<u64>>> {
    let cursor = CompositionCursor::new(total, parts)?;
    Ok(CompositionIter { cursor })
}

struct CompositionIter {
    cursor: CompositionCursor,
}

impl Iterator for CompositionIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Self::Item> {
        self.cursor.advance().map(|c| c.to_vec())
    }
}

/// `C(t + k - 1, k - 1)` as f64; the count of weak compositions.
pub fn composition_count(total: u64, parts: usize) -> f64 {
    if parts == 0 {
        return if total == 0 { 1.0 } else { 0.0 };
    }
    if total == 0 {
        return 1.0;
    }
    let n = total + parts as u64 - 1;
    let k = parts as u64 - 1;
    let lg = crate::special::ln_factorial(n)
        - crate::special::ln_factorial(k)
        - crate::special::ln_factorial(n - k);
    lg.exp().round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t2_k2_in_colex_order() {
        let all: Vec<_> = enumerate_compositions(2, 2).unwrap().collect();
        assert_eq!(all, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn t2_k3_in_colex_order() {
        let all: Vec<_> = enumerate_compositions(2, 3).unwrap().collect();
        assert_eq!(
            all,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![0, 1, 1],
                vec![0, 0, 2],
            ]
        );
    }

    #[test]
    fn zero_total_single_composition() {
        let all: Vec<_> = enumerate_compositions(0, 5).unwrap().collect();
        assert_eq!(all, vec![vec![0, 0, 0, 0, 0]]);
    }

    #[test]
    fn zero_parts() {
        let all: Vec<_> = enumerate_compositions(0, 0).unwrap().collect();
        assert_eq!(all, vec![Vec::<u64>::new()]);
        assert!(enumerate_compositions(3, 0).is_err());
    }

    #[test]
    fn count_t3_k24() {
        assert_eq!(enumerate_compositions(3, 24).unwrap().count(), 2600);
        assert_eq!(composition_count(3, 24), 2600.0);
    }

    #[test]
    fn exhaustive_counts_sums_and_uniqueness() {
        fn binomial(n: u64, k: u64) -> u64 {
            let mut acc = 1u64;
            for i in 0..k {
                acc = acc * (n - i) / (i + 1);
            }
            acc
        }
        for k in 1..=10usize {
            for t in 0..=6u64 {
                let all: Vec<_> = enumerate_compositions(t, k).unwrap().collect();
                let expect = binomial(t + k as u64 - 1, k as u64 - 1);
                assert_eq!(all.len() as u64, expect, "count at t={t}, k={k}");
                let mut seen = std::collections::HashSet::new();
                for comp in &all {
                    assert_eq!(comp.iter().sum::<u64>(), t, "sum at t={t}, k={k}");
                    assert!(seen.insert(comp.clone()), "duplicate at t={t}, k={k}");
                }
                assert_eq!(composition_count(t, k), expect as f64);
            }
        }
    }

    #[test]
    fn colex_order_is_strictly_increasing() {
        // Compare neighbours at the highest differing index.
        let all: Vec<_> = enumerate_compositions(4, 4).unwrap().collect();
        for pair in all.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let hi = (0..4).rev().find(|&i| a[i] != b[i]).unwrap();
            assert!(a[hi] < b[hi], "colex violated: {a:?} !< {b:?}");
        }
    }
}
