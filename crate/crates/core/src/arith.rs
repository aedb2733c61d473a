//! Small integer helpers shared by the counting, Pólya and species code.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_core::RngCore;

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Euler's totient.
pub fn totient(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Divisors of `n` in increasing order. `divisors(0)` is empty.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Pascal's triangle up to row `n`, as signed integers for the counting engine.
pub fn binomial_rows(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// All partitions of `n` as weakly decreasing part lists, in reverse
/// lexicographic order (`[n]` first, `[1, 1, ..., 1]` last).
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Multiplicity vector `c` of a partition: `c[i]` is the number of parts equal
/// to `i + 1`, trimmed of trailing zeros.
pub fn multiplicities(parts: &[usize]) -> Vec<u32> {
    let max = parts.iter().copied().max().unwrap_or(0);
    let mut c = vec![0u32; max];
    for &p in parts {
        c[p - 1] += 1;
    }
    c
}

/// Uniform integer in `[0, bound)` by rejection on the bit length of `bound`.
///
/// Panics if `bound` is zero.
pub fn random_below<R: RngCore + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "random_below: empty range");
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (words as u64 - 1);
    let mask: u32 = if top_bits == 32 { u32::MAX } else { (1u32 << top_bits) - 1 };
    let mut digits = vec![0u32; words];
    loop {
        for d in digits.iter_mut() {
            *d = rng.next_u32();
        }
        if let Some(last) = digits.last_mut() {
            *last &= mask;
        }
        let candidate = BigUint::new(digits.clone());
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Uniform index in `[0, bound)`.
pub fn random_index<R: RngCore + ?Sized>(rng: &mut R, bound: usize) -> usize {
    let r = random_below(rng, &BigUint::from(bound));
    let digits = r.to_u64_digits();
    digits.first().copied().unwrap_or(0) as usize
}

/// Uniform `k`-subset of `items`, returned in the input order.
pub fn random_subset<R: RngCore + ?Sized, T: Copy>(rng: &mut R, items: &[T], k: usize) -> Vec<T> {
    // Selection sampling (Knuth's algorithm S) keeps the output sorted.
    let mut chosen = Vec::with_capacity(k);
    let mut needed = k;
    let total = items.len();
    for (i, &item) in items.iter().enumerate() {
        if needed == 0 {
            break;
        }
        let remaining = total - i;
        if random_index(rng, remaining) < needed {
            chosen.push(item);
            needed -= 1;
        }
    }
    chosen
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn ksubsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=n.saturating_sub(need) {
            if n - i < need {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn totient_small_values() {
        let phi: Vec<usize> = (1..=12).map(totient).collect();
        assert_eq!(phi, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn divisors_are_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn partitions_of_five() {
        let p = integer_partitions(5);
        assert_eq!(p.len(), 7);
        assert_eq!(p[0], vec![5]);
        assert_eq!(p[6], vec![1, 1, 1, 1, 1]);
        assert_eq!(integer_partitions(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn pascal_rows_match_binomial() {
        let rows = binomial_rows(10);
        for n in 0..=10 {
            for k in 0..=n {
                assert_eq!(rows[n][k], BigInt::from(binomial(n, k)));
            }
        }
    }

    #[test]
    fn ksubsets_count_and_order() {
        let s = ksubsets(4, 2);
        assert_eq!(s.len(), 6);
        assert_eq!(s[0], vec![0, 1]);
        assert_eq!(s[5], vec![2, 3]);
        assert_eq!(ksubsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(ksubsets(2, 3).is_empty());
    }

    #[test]
    fn random_below_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bound = BigUint::from(1_000_003u64);
        for _ in 0..500 {
            assert!(random_below(&mut rng, &bound) < bound);
        }
        let mut seen = [0usize; 3];
        for _ in 0..3000 {
            seen[random_index(&mut rng, 3)] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800));
    }

    #[test]
    fn random_subset_has_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let items = [1, 2, 3, 4, 5, 6];
        for k in 0..=6 {
            let s = random_subset(&mut rng, &items, k);
            assert_eq!(s.len(), k);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
