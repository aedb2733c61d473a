//! Explicit species structures on finite label sets, and transport along
//! bijections.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{min_size, SpeciesEnv, SpeciesError, SpeciesExpr};
use crate::arith::ksubsets;
use alloc::string::String;

pub const DEFAULT_STRUCTURE_CAP: usize = 8;

/// A structure on a finite set of labels. Unordered parts are kept sorted
/// and cycles start at their least label, so equal structures compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Structure {
    Empty,
    Point(usize),
    Set(Vec<usize>),
    Order(Vec<usize>),
    Cycle(Vec<usize>),
    /// A permutation of the labels as sorted pairs `(x, σ(x))`.
    Perm(Vec<(usize, usize)>),
    Partition(Vec<Vec<usize>>),
    Left(Box<Structure>),
    Right(Box<Structure>),
    Pair(Box<Structure>, Box<Structure>),
    /// An outer structure on the least labels of the blocks, and one inner
    /// structure per block, blocks ordered by least label.
    Comp {
        outer: Box<Structure>,
        blocks: Vec<Structure>,
    },
}

fn rotate_to_min(mut c: Vec<usize>) -> Vec<usize> {
    if let Some(i) = (0..c.len()).min_by_key(|&i| c[i]) {
        c.rotate_left(i);
    }
    c
}

impl Structure {
    pub fn labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort_unstable();
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            Structure::Empty => {}
            Structure::Point(x) => out.push(*x),
            Structure::Set(v) | Structure::Order(v) | Structure::Cycle(v) => out.extend(v),
            Structure::Perm(p) => out.extend(p.iter().map(|(x, _)| *x)),
            Structure::Partition(bs) => bs.iter().for_each(|b| out.extend(b)),
            Structure::Left(s) | Structure::Right(s) => s.collect(out),
            Structure::Pair(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            Structure::Comp { blocks, .. } => blocks.iter().for_each(|b| b.collect(out)),
        }
    }

    fn min_label(&self) -> Option<usize> {
        self.labels().first().copied()
    }

    /// Relabel along `map`, keeping the canonical form.
    pub fn relabel(&self, map: &BTreeMap<usize, usize>) -> Structure {
        let f = |x: &usize| map[x];
        match self {
            Structure::Empty => Structure::Empty,
            Structure::Point(x) => Structure::Point(f(x)),
            Structure::Set(v) => {
                let mut w: Vec<usize> = v.iter().map(f).collect();
                w.sort_unstable();
                Structure::Set(w)
            }
            Structure::Order(v) => Structure::Order(v.iter().map(f).collect()),
            Structure::Cycle(v) => Structure::Cycle(rotate_to_min(v.iter().map(f).collect())),
            Structure::Perm(p) => {
                let mut q: Vec<(usize, usize)> = p.iter().map(|(x, y)| (f(x), f(y))).collect();
                q.sort_unstable();
                Structure::Perm(q)
            }
            Structure::Partition(bs) => {
                let mut out: Vec<Vec<usize>> = bs
                    .iter()
                    .map(|b| {
                        let mut c: Vec<usize> = b.iter().map(f).collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                out.sort();
                Structure::Partition(out)
            }
            Structure::Left(s) => Structure::Left(s.relabel(map).into()),
            Structure::Right(s) => Structure::Right(s.relabel(map).into()),
            Structure::Pair(a, b) => Structure::Pair(a.relabel(map).into(), b.relabel(map).into()),
            Structure::Comp { outer, blocks } => {
                let mut mins = BTreeMap::new();
                let mut new_blocks: Vec<Structure> = blocks
                    .iter()
                    .map(|b| {
                        let nb = b.relabel(map);
                        mins.insert(b.min_label().unwrap(), nb.min_label().unwrap());
                        nb
                    })
                    .collect();
                new_blocks.sort_by_key(Structure::min_label);
                Structure::Comp { outer: outer.relabel(&mins).into(), blocks: new_blocks }
            }
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn seq(f: &mut fmt::Formatter<'_>, open: &str, close: &str, v: &[usize]) -> fmt::Result {
            f.write_str(open)?;
            for (i, x) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(close)
        }
        match self {
            Structure::Empty => f.write_str("{}"),
            Structure::Point(x) => write!(f, "{x}"),
            Structure::Set(v) => seq(f, "{", "}", v),
            Structure::Order(v) => seq(f, "[", "]", v),
            Structure::Cycle(v) => seq(f, "(", ")", v),
            Structure::Perm(p) => {
                let mut seen = BTreeMap::new();
                let map: BTreeMap<usize, usize> = p.iter().copied().collect();
                for &(start, _) in p {
                    if seen.contains_key(&start) {
                        continue;
                    }
                    let mut cyc = vec![start];
                    seen.insert(start, ());
                    let mut x = map[&start];
                    while x != start {
                        seen.insert(x, ());
                        cyc.push(x);
                        x = map[&x];
                    }
                    seq(f, "(", ")", &cyc)?;
                }
                if p.is_empty() {
                    f.write_str("()")?;
                }
                Ok(())
            }
            Structure::Partition(bs) => {
                f.write_str("{")?;
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    seq(f, "{", "}", b)?;
                }
                f.write_str("}")
            }
            Structure::Left(s) => write!(f, "inl({s})"),
            Structure::Right(s) => write!(f, "inr({s})"),
            Structure::Pair(a, b) => write!(f, "({a}, {b})"),
            Structure::Comp { outer, blocks } => {
                write!(f, "{outer}[")?;
                for (i, b) in blocks.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{b}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// `(inside, outside)` for every subset of `labels` of size `k`.
fn splits(labels: &[usize], k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    ksubsets(labels.len(), k)
        .into_iter()
        .map(|pos| {
            let inside: Vec<usize> = pos.iter().map(|&i| labels[i]).collect();
            let outside = labels.iter().copied().filter(|l| !inside.contains(l)).collect();
            (inside, outside)
        })
        .collect()
}

fn set_partitions(labels: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = labels.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for k in 0..=rest.len() {
        for (inside, outside) in splits(rest, k) {
            let mut block = vec![first];
            block.extend(inside);
            for mut p in set_partitions(&outside) {
                p.insert(0, block.clone());
                out.push(p);
            }
        }
    }
    out
}

struct Lister<'e> {
    env: &'e SpeciesEnv,
    sizes: BTreeMap<String, Option<usize>>,
}

impl Lister<'_> {
    fn list(&self, e: &SpeciesExpr, labels: &[usize]) -> Vec<Structure> {
        let n = labels.len();
        if min_size(e, &self.sizes).is_none_or(|m| m > n) {
            return Vec::new();
        }
        match e {
            SpeciesExpr::EmptySet => {
                if n == 0 {
                    vec![Structure::Empty]
                } else {
                    Vec::new()
                }
            }
            SpeciesExpr::Singleton => {
                if n == 1 {
                    vec![Structure::Point(labels[0])]
                } else {
                    Vec::new()
                }
            }
            SpeciesExpr::Set => vec![Structure::Set(labels.to_vec())],
            SpeciesExpr::Characteristic(k) => {
                if n == *k {
                    vec![Structure::Set(labels.to_vec())]
                } else {
                    Vec::new()
                }
            }
            SpeciesExpr::LinearOrder => permutations(labels).into_iter().map(Structure::Order).collect(),
            SpeciesExpr::Cycle => match labels.split_first() {
                None => Vec::new(),
                Some((&first, rest)) => permutations(rest)
                    .into_iter()
                    .map(|p| {
                        let mut c = vec![first];
                        c.extend(p);
                        Structure::Cycle(c)
                    })
                    .collect(),
            },
            SpeciesExpr::Permutation => permutations(labels)
                .into_iter()
                .map(|p| Structure::Perm(labels.iter().copied().zip(p).collect()))
                .collect(),
            SpeciesExpr::SetPartition => set_partitions(labels).into_iter().map(Structure::Partition).collect(),
            SpeciesExpr::Sum(a, b) => {
                let mut out: Vec<Structure> =
                    self.list(a, labels).into_iter().map(|s| Structure::Left(s.into())).collect();
                out.extend(self.list(b, labels).into_iter().map(|s| Structure::Right(s.into())));
                out
            }
            SpeciesExpr::Product(a, b) => {
                let mut out = Vec::new();
                let (ma, mb) = (min_size(a, &self.sizes), min_size(b, &self.sizes));
                for k in 0..=n {
                    if ma.is_none_or(|m| m > k) || mb.is_none_or(|m| m > n - k) {
                        continue;
                    }
                    for (inside, outside) in splits(labels, k) {
                        let xs = self.list(a, &inside);
                        if xs.is_empty() {
                            continue;
                        }
                        let ys = self.list(b, &outside);
                        for x in &xs {
                            for y in &ys {
                                out.push(Structure::Pair(x.clone().into(), y.clone().into()));
                            }
                        }
                    }
                }
                out
            }
            SpeciesExpr::Compose(f, g) => {
                let mut out = Vec::new();
                for blocks in self.blocks(g, labels) {
                    let mins: Vec<usize> = blocks.iter().map(|b| b.min_label().unwrap()).collect();
                    for o in self.list(f, &mins) {
                        out.push(Structure::Comp { outer: o.into(), blocks: blocks.clone() });
                    }
                }
                out
            }
            SpeciesExpr::Restrict(a, s) => {
                if s.contains(n) {
                    self.list(a, labels)
                } else {
                    Vec::new()
                }
            }
            SpeciesExpr::Weighted(a, _) => self.list(a, labels),
            SpeciesExpr::Implicit(name) => self.list(self.env.get(name).expect("checked definition"), labels),
        }
    }

    /// Partitions of `labels` into nonempty blocks each carrying a
    /// `g`-structure.
    fn blocks(&self, g: &SpeciesExpr, labels: &[usize]) -> Vec<Vec<Structure>> {
        let Some((&first, rest)) = labels.split_first() else {
            return vec![Vec::new()];
        };
        let mut out = Vec::new();
        for k in 0..=rest.len() {
            for (inside, outside) in splits(rest, k) {
                let mut block = vec![first];
                block.extend(inside);
                let here = self.list(g, &block);
                if here.is_empty() {
                    continue;
                }
                let tails = self.blocks(g, &outside);
                for h in &here {
                    for t in &tails {
                        let mut row = vec![h.clone()];
                        row.extend(t.iter().cloned());
                        out.push(row);
                    }
                }
            }
        }
        out
    }

    fn weight(&self, e: &SpeciesExpr, s: &Structure) -> u32 {
        match (e, s) {
            (SpeciesExpr::Weighted(a, k), _) => k + self.weight(a, s),
            (SpeciesExpr::Restrict(a, _), _) => self.weight(a, s),
            (SpeciesExpr::Implicit(name), _) => self.weight(self.env.get(name).expect("checked definition"), s),
            (SpeciesExpr::Sum(a, _), Structure::Left(x)) => self.weight(a, x),
            (SpeciesExpr::Sum(_, b), Structure::Right(x)) => self.weight(b, x),
            (SpeciesExpr::Product(a, b), Structure::Pair(x, y)) => self.weight(a, x) + self.weight(b, y),
            (SpeciesExpr::Compose(f, g), Structure::Comp { outer, blocks }) => {
                self.weight(f, outer) + blocks.iter().map(|b| self.weight(g, b)).sum::<u32>()
            }
            _ => 0,
        }
    }
}

/// All `f`-structures on `labels`, for at most `cap` labels.
pub fn structures_with_cap(
    f: &SpeciesExpr,
    env: &SpeciesEnv,
    labels: &[usize],
    cap: usize,
) -> Result<Vec<(Structure, u32)>, SpeciesError> {
    if labels.len() > cap {
        return Err(SpeciesError::CapExceeded { n: labels.len(), cap });
    }
    env.check()?;
    env.check_free(f)?;
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let l = Lister { env, sizes: env.min_sizes() };
    Ok(l.list(f, &sorted)
        .into_iter()
        .map(|s| {
            let w = l.weight(f, &s);
            (s, w)
        })
        .collect())
}

/// All `f`-structures on `labels` with their weights as powers of `q`.
pub fn structures(f: &SpeciesExpr, env: &SpeciesEnv, labels: &[usize]) -> Result<Vec<(Structure, u32)>, SpeciesError> {
    structures_with_cap(f, env, labels, DEFAULT_STRUCTURE_CAP)
}

/// Transport `s` along the bijection `pi`, given as `(x, π(x))` pairs.
pub fn transport(s: &Structure, pi: &[(usize, usize)]) -> Result<Structure, SpeciesError> {
    let map: BTreeMap<usize, usize> = pi.iter().copied().collect();
    let dom: Vec<usize> = map.keys().copied().collect();
    let mut img: Vec<usize> = map.values().copied().collect();
    img.sort_unstable();
    img.dedup();
    if map.len() != pi.len() || img.len() != dom.len() || s.labels() != dom {
        return Err(SpeciesError::DomainMismatch);
    }
    Ok(s.relabel(&map))
}
