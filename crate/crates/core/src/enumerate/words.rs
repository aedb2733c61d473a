//! Permutations in lexicographic order, binary reflected Gray codes and
//! cool-lex order for fixed-weight words.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use super::EnumError;

fn check_permutation(p: &[usize]) -> Result<(), EnumError> {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x == 0 || x > p.len() || seen[x - 1] {
            return Err(EnumError::MalformedPermutation);
        }
        seen[x - 1] = true;
    }
    Ok(())
}

/// Lexicographic successor of a permutation of `1..=n`, or `None` on the
/// decreasing word.
pub fn next_permutation_lex(p: &[usize]) -> Result<Option<Vec<usize>>, EnumError> {
    check_permutation(p)?;
    let mut q = p.to_vec();
    let Some(i) = (1..q.len()).rev().find(|&i| q[i - 1] < q[i]) else {
        return Ok(None);
    };
    let pivot = i - 1;
    let j = (i..q.len()).rev().find(|&j| q[j] > q[pivot]).unwrap();
    q.swap(pivot, j);
    q[i..].reverse();
    Ok(Some(q))
}

/// Cycle type: entry `j - 1` counts the `j`-cycles. The result has length `n`.
pub fn signature(p: &[usize]) -> Result<Vec<usize>, EnumError> {
    check_permutation(p)?;
    let n = p.len();
    let mut c = vec![0; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] - 1;
            len += 1;
        }
        c[len - 1] += 1;
    }
    Ok(c)
}

/// Fixed-length bit string, printed most significant (first) bit first.
/// Bit `i` (1-based, from the left) stands for element `i` of a subset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BinaryWord(pub Vec<bool>);

impl BinaryWord {
    pub fn zeros(n: usize) -> Self {
        BinaryWord(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn hamming(&self, other: &BinaryWord) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Elements of the subset, 1-based.
    pub fn to_subset(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i]).map(|i| i + 1).collect()
    }

    pub fn from_subset(n: usize, elems: &[usize]) -> Self {
        let mut w = Self::zeros(n);
        for &e in elems {
            w.0[e - 1] = true;
        }
        w
    }

    pub fn subset_string(&self) -> String {
        let items: Vec<String> = self.to_subset().iter().map(ToString::to_string).collect();
        let mut s = String::from("{");
        s.push_str(&items.join(","));
        s.push('}');
        s
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryWord {
    type Err = EnumError;
    fn from_str(s: &str) -> Result<Self, EnumError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(EnumError::MalformedWord(s.into())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BinaryWord)
    }
}

/// Binary reflected Gray code of length `n`, starting at the zero word.
pub struct GrayCode {
    n: usize,
    next: Option<BigUint>,
    end: BigUint,
}

impl GrayCode {
    pub fn new(n: usize) -> Self {
        GrayCode { n, next: Some(BigUint::zero()), end: BigUint::from(1u8) << n }
    }
}

impl Iterator for GrayCode {
    type Item = BinaryWord;
    fn next(&mut self) -> Option<BinaryWord> {
        let r = self.next.take()?;
        let w = gray_word(self.n, &r);
        let r1 = r + 1u8;
        if r1 < self.end {
            self.next = Some(r1);
        }
        Some(w)
    }
}

fn gray_word(n: usize, r: &BigUint) -> BinaryWord {
    let g = r ^ (r >> 1usize);
    BinaryWord((0..n).map(|i| g.bit((n - 1 - i) as u64)).collect())
}

/// All `2^n` words in reflected Gray order.
pub fn gray_subsets(n: usize) -> Vec<BinaryWord> {
    GrayCode::new(n).collect()
}

/// Position of `w` in the Gray order of its length.
pub fn rank_gray(w: &BinaryWord) -> BigUint {
    let n = w.len();
    let mut r = BigUint::zero();
    let mut acc = false;
    for (i, &b) in w.0.iter().enumerate() {
        acc ^= b;
        if acc {
            r.set_bit((n - 1 - i) as u64, true);
        }
    }
    r
}

pub fn unrank_gray(n: usize, r: &BigUint) -> Result<BinaryWord, EnumError> {
    if r.bits() > n as u64 {
        return Err(EnumError::RankOutOfRange { n, rank: r.to_string() });
    }
    Ok(gray_word(n, r))
}

/// Cool-lex order on words of length `n` with `k` ones, starting at
/// `1^k 0^(n-k)`. Each step rotates the shortest prefix ending in `010` or
/// `011` (or the whole word) one place to the right.
pub struct CoolLex {
    current: Option<BinaryWord>,
    left: BigUint,
}

impl CoolLex {
    pub fn new(n: usize, k: usize) -> Result<Self, EnumError> {
        if k > n {
            return Err(EnumError::KTooLarge { n, k });
        }
        let mut w = BinaryWord::zeros(n);
        w.0[..k].iter_mut().for_each(|b| *b = true);
        Ok(CoolLex { current: Some(w), left: crate::arith::binomial(n, k) })
    }

    pub(crate) fn step(w: &BinaryWord) -> BinaryWord {
        let b = &w.0;
        let end = (2..b.len()).find(|&i| !b[i - 2] && b[i - 1]).map_or(b.len(), |i| i + 1);
        let mut out = b.clone();
        if end > 0 {
            out[..end].rotate_right(1);
        }
        BinaryWord(out)
    }
}

impl Iterator for CoolLex {
    type Item = BinaryWord;
    fn next(&mut self) -> Option<BinaryWord> {
        if self.left.is_zero() {
            return None;
        }
        self.left -= 1u8;
        let w = self.current.take()?;
        self.current = Some(Self::step(&w));
        Some(w)
    }
}

pub fn coollex_ksubsets(n: usize, k: usize) -> Result<Vec<BinaryWord>, EnumError> {
    Ok(CoolLex::new(n, k)?.collect())
}
