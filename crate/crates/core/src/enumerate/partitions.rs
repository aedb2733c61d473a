//! Integer partitions with optional largest-part, distinct-part and
//! odd-part restrictions, and Glaisher's odd/distinct bijection.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_core::RngCore;

use super::EnumError;
use crate::arith::random_below;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PartitionConstraints {
    pub max_part: Option<usize>,
    pub distinct: bool,
    pub odd: bool,
}

impl PartitionConstraints {
    pub fn admits(&self, parts: &[usize]) -> bool {
        parts.windows(2).all(|w| w[0] >= w[1] && (!self.distinct || w[0] > w[1]))
            && parts.iter().all(|&p| p >= 1 && self.part_ok(p))
    }

    fn part_ok(&self, p: usize) -> bool {
        (!self.odd || p % 2 == 1) && self.max_part.is_none_or(|m| p <= m)
    }
}

/// The partitions of `n` under some constraints, listed in reverse
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Partitions {
    n: usize,
    c: PartitionConstraints,
    /// `table[m][k]`: partitions of `k` with every part at most `m`.
    table: Vec<Vec<BigUint>>,
}

impl Partitions {
    pub fn new(n: usize, c: PartitionConstraints) -> Self {
        let top = c.max_part.unwrap_or(n).min(n);
        let mut table = vec![vec![BigUint::zero(); n + 1]; top + 1];
        table[0][0] = BigUint::one();
        for m in 1..=top {
            for k in 0..=n {
                let mut v = table[m - 1][k].clone();
                if c.part_ok(m) && m <= k {
                    let below = if c.distinct { m - 1 } else { m };
                    v += &table[below][k - m];
                }
                table[m][k] = v;
            }
        }
        Partitions { n, c, table }
    }

    fn top(&self) -> usize {
        self.table.len() - 1
    }

    fn bounded(&self, k: usize, m: usize) -> &BigUint {
        &self.table[m.min(self.top())][k]
    }

    pub fn count(&self) -> BigUint {
        self.bounded(self.n, self.top()).clone()
    }

    pub fn list(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.go(self.n, self.top(), &mut Vec::new(), &mut out);
        out
    }

    fn go(&self, left: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=m.min(left)).rev() {
            if !self.c.part_ok(p) {
                continue;
            }
            let below = if self.c.distinct { p - 1 } else { p };
            if self.bounded(left - p, below).is_zero() {
                continue;
            }
            cur.push(p);
            self.go(left - p, below, cur, out);
            cur.pop();
        }
    }

    /// A uniformly random member.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<Vec<usize>, EnumError> {
        if self.count().is_zero() {
            return Err(EnumError::Empty { class: format!("partitions of {}", self.n), n: self.n });
        }
        let mut out = Vec::new();
        let (mut left, mut m) = (self.n, self.top());
        while left > 0 {
            let mut r = random_below(rng, self.bounded(left, m));
            for p in (1..=m.min(left)).rev() {
                if !self.c.part_ok(p) {
                    continue;
                }
                let below = if self.c.distinct { p - 1 } else { p };
                let w = self.bounded(left - p, below);
                if &r < w {
                    out.push(p);
                    left -= p;
                    m = below;
                    break;
                }
                r -= w;
            }
        }
        Ok(out)
    }
}

fn sorted_desc(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Distinct parts to odd parts: `2^r s` becomes `2^r` copies of `s`.
pub fn glaisher(distinct: &[usize]) -> Result<Vec<usize>, EnumError> {
    let c = PartitionConstraints { distinct: true, ..Default::default() };
    if !c.admits(&sorted_desc(distinct.to_vec())) {
        return Err(EnumError::Constraint(format!("{distinct:?} does not have distinct positive parts")));
    }
    let mut out = Vec::new();
    for &p in distinct {
        let r = p.trailing_zeros();
        out.extend(core::iter::repeat_n(p >> r, 1 << r));
    }
    Ok(sorted_desc(out))
}

/// Odd parts to distinct parts: `m` copies of `s` become `2^r s` for each
/// binary digit `2^r` of `m`.
pub fn glaisher_inv(odd: &[usize]) -> Result<Vec<usize>, EnumError> {
    let c = PartitionConstraints { odd: true, ..Default::default() };
    if !c.admits(&sorted_desc(odd.to_vec())) {
        return Err(EnumError::Constraint(format!("{odd:?} does not have odd parts")));
    }
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in odd {
        *mult.entry(p).or_default() += 1;
    }
    let mut out = Vec::new();
    for (s, m) in mult {
        for r in 0..usize::BITS {
            if m >> r & 1 == 1 {
                out.push(s << r);
            }
        }
    }
    Ok(sorted_desc(out))
}
