//! Small exact-combinatorics helpers shared by the oracles and statistics.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;

/// Binomial coefficient C(n, k), saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // Multiplying before dividing keeps every intermediate integral.
        acc *= (n - i) as u128;
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// k! as a float. Exact for k ≤ 18, correctly rounded beyond.
pub fn factorial(k: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 2..=k {
        acc *= f64::from(i);
    }
    acc
}

/// Visit every permutation of `0..n` (Heap's algorithm). The starting
/// identity permutation is visited first; the rest follow in Heap order.
pub(crate) fn for_each_permutation<F>(n: usize, mut f: F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    let mut items: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    f(&items)?;
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(counters[i], i);
            }
            f(&items)?;
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(())
}

/// Visit every k-element subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination<F>(n: usize, k: usize, mut f: F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return Ok(());
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(14, 5), 2002);
        assert_eq!(binomial(15, 2), 105);
        assert_eq!(binomial(15, 4), 1365);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
    }

    #[test]
    fn permutations_are_exhaustive_and_distinct() {
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for_each_permutation(4, |p| {
            seen.push(p.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 24);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);

        let mut count = 0;
        for_each_combination(5, 0, |c| {
            assert!(c.is_empty());
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
    }
}
