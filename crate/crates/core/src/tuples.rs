//! Equality patterns of tuples and mixed-radix tuple indexing.

use std::collections::HashMap;
use std::hash::Hash;

/// Canonical equality pattern of a tuple: position `k` gets the index of the
/// first distinct value it equals, counted in order of first appearance.
///
/// `(a, b, a, c)` and `(x, y, x, z)` both give `[0, 1, 0, 2]`.
pub fn equality_pattern<T: Eq + Hash>(tuple: &[T]) -> Vec<usize> {
    let mut seen: HashMap<&T, usize> = HashMap::new();
    tuple
        .iter()
        .map(|x| {
            let next = seen.len();
            *seen.entry(x).or_insert(next)
        })
        .collect()
}

/// Two tuples are equivalent when `a[i] == a[j]` exactly when `b[i] == b[j]`,
/// i.e. a bijection `{a_1..a_n} -> {b_1..b_n}` sends `a_i` to `b_i`.
pub fn natural_equivalent<T: Eq + Hash, U: Eq + Hash>(a: &[T], b: &[U]) -> bool {
    a.len() == b.len() && equality_pattern(a) == equality_pattern(b)
}

/// Stirling numbers of the second kind `S(n, k)` for `k = 0..=n`.
pub fn stirling2_row(n: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for m in 1..=n {
        let mut next = vec![0u64; m + 1];
        for k in 1..=m {
            let stay = if k < row.len() { k as u64 * row[k] } else { 0 };
            next[k] = row[k - 1] + stay;
        }
        row = next;
    }
    row
}

/// Number of equality-pattern classes of `n`-tuples over a set of size `m`:
/// the patterns using at most `m` distinct values.
pub fn natural_class_count(m: usize, n: usize) -> u64 {
    stirling2_row(n).iter().take(m.min(n) + 1).sum()
}

/// Bell number `B(n)`.
pub fn bell(n: usize) -> u64 {
    stirling2_row(n).iter().sum()
}

/// Mixed-radix encoding of tuples over `0..base`, first coordinate most significant.
pub fn tuple_index(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * base + x)
}

pub fn tuple_from_index(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut tuple = vec![0; len];
    for slot in tuple.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    tuple
}
