//! Exhaustive listing in recursive decomposition order: union branches in
//! declaration order, products by size split then componentwise, sequences
//! by length first.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{canonical_cycle, canonical_set, CombObject, EnumError};
use crate::arith::ksubsets;
use crate::counting::CountError;
use crate::spec::{
    check_well_defined, expr_valuation, valuation, Construct, Mode, Restriction, SpecExpr, Specification, Val,
};

/// All objects of `class` with exactly `n` atoms.
pub fn list_objects(spec: &Specification, class: &str, n: usize) -> Result<Vec<CombObject>, EnumError> {
    let report = check_well_defined(spec);
    if !report.is_ok() {
        return Err(CountError::NotWellDefined(report).into());
    }
    let idx = spec.index_of(class).ok_or_else(|| EnumError::UnknownClass(class.into()))?;
    let mut l = Lister::new(spec);
    Ok(l.class(idx, n))
}

pub(crate) struct Lister<'s> {
    spec: &'s Specification,
    labeled: bool,
    vals: BTreeMap<String, Val>,
    memo: BTreeMap<(usize, usize), Vec<CombObject>>,
}

/// `k`-subsets of `labels`, in lexicographic order of positions.
fn label_splits(labels: &[usize], k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    ksubsets(labels.len(), k)
        .into_iter()
        .map(|pos| {
            let mut inside = Vec::with_capacity(k);
            let mut outside = Vec::with_capacity(labels.len() - k);
            let mut p = pos.iter().peekable();
            for (i, &l) in labels.iter().enumerate() {
                if p.peek() == Some(&&i) {
                    p.next();
                    inside.push(l);
                } else {
                    outside.push(l);
                }
            }
            (inside, outside)
        })
        .collect()
}

impl<'s> Lister<'s> {
    pub(crate) fn new(spec: &'s Specification) -> Self {
        Lister { spec, labeled: spec.mode() == Mode::Labeled, vals: valuation(spec), memo: BTreeMap::new() }
    }

    fn val(&self, e: &SpecExpr) -> Option<usize> {
        expr_valuation(e, &self.vals)
    }

    pub(crate) fn class(&mut self, idx: usize, n: usize) -> Vec<CombObject> {
        if let Some(v) = self.memo.get(&(idx, n)) {
            return v.clone();
        }
        let (name, rhs) = &self.spec.equations()[idx];
        let out = match rhs {
            SpecExpr::Atom if n == 1 => vec![CombObject::named_atom(name, self.labeled.then_some(1))],
            _ => self.expr(rhs, n),
        };
        self.memo.insert((idx, n), out.clone());
        out
    }

    fn expr(&mut self, e: &'s SpecExpr, n: usize) -> Vec<CombObject> {
        match self.val(e) {
            Some(v) if v <= n => {}
            _ => return Vec::new(),
        }
        match e {
            SpecExpr::Epsilon if n == 0 => vec![CombObject::Epsilon],
            SpecExpr::Atom if n == 1 => {
                vec![if self.labeled { CombObject::labeled_atom(1) } else { CombObject::atom() }]
            }
            SpecExpr::Marker { name } if n == 0 => vec![CombObject::Marker { name: name.clone() }],
            SpecExpr::Epsilon | SpecExpr::Atom | SpecExpr::Marker { .. } => Vec::new(),
            SpecExpr::ClassRef { name } => {
                let idx = self.spec.index_of(name).expect("validated class reference");
                self.class(idx, n)
            }
            SpecExpr::Union { args } => args.iter().flat_map(|a| self.expr(a, n)).collect(),
            SpecExpr::Prod { args } => {
                let parts: Vec<&SpecExpr> = args.iter().collect();
                self.product(&parts, n).into_iter().map(|children| CombObject::Tuple { children }).collect()
            }
            SpecExpr::Construct { op, arg, restriction } => {
                self.construct(op.resolve(self.spec.mode()), arg, *restriction, n)
            }
            SpecExpr::Subst { outer, inner } => self.subst(outer, inner, n),
        }
    }

    /// Tuples of objects, one per factor, with total size `n`.
    fn product(&mut self, parts: &[&'s SpecExpr], n: usize) -> Vec<Vec<CombObject>> {
        let Some((first, rest)) = parts.split_first() else {
            return if n == 0 { vec![Vec::new()] } else { Vec::new() };
        };
        let rest_min: usize = rest.iter().map(|e| self.val(e).unwrap_or(usize::MAX)).fold(0, usize::saturating_add);
        let lo = self.val(first).unwrap_or(usize::MAX);
        let mut out = Vec::new();
        if lo > n || rest_min > n {
            return out;
        }
        for k in lo..=n - rest_min {
            let heads = self.expr(first, k);
            if heads.is_empty() {
                continue;
            }
            let tails = self.product(rest, n - k);
            if tails.is_empty() {
                continue;
            }
            if self.labeled {
                let all: Vec<usize> = (1..=n).collect();
                for (inside, outside) in label_splits(&all, k) {
                    for h in &heads {
                        let h = h.relabel(&inside);
                        for t in &tails {
                            let mut row = Vec::with_capacity(parts.len());
                            row.push(h.clone());
                            row.extend(t.iter().map(|x| x.relabel(&outside)));
                            out.push(row);
                        }
                    }
                }
            } else {
                for h in &heads {
                    for t in &tails {
                        let mut row = Vec::with_capacity(parts.len());
                        row.push(h.clone());
                        row.extend(t.iter().cloned());
                        out.push(row);
                    }
                }
            }
        }
        out
    }

    fn counts_allowed(&self, arg: &SpecExpr, r: Restriction, n: usize) -> Vec<usize> {
        let v = self.val(arg).unwrap_or(usize::MAX).max(1);
        let top = if n == 0 { 0 } else { n / v };
        (0..=top).filter(|&j| r.allows(j)).collect()
    }

    fn construct(&mut self, op: Construct, arg: &'s SpecExpr, r: Restriction, n: usize) -> Vec<CombObject> {
        let mut out = Vec::new();
        for j in self.counts_allowed(arg, r, n) {
            match op {
                Construct::Seq => {
                    let parts = vec![arg; j];
                    out.extend(self.product(&parts, n).into_iter().map(|children| CombObject::Seq { children }));
                }
                Construct::Set | Construct::MultiSet | Construct::PowerSet if self.labeled => {
                    let labels: Vec<usize> = (1..=n).collect();
                    out.extend(self.labeled_blocks(arg, &labels, j).into_iter().map(|b| canonical_set(b, true)));
                }
                Construct::Set | Construct::MultiSet => out.extend(self.unlabeled_sets(arg, n, j, true)),
                Construct::PowerSet => out.extend(self.unlabeled_sets(arg, n, j, false)),
                Construct::Cycle if self.labeled => {
                    if j == 0 {
                        continue;
                    }
                    let labels: Vec<usize> = (1..=n).collect();
                    out.extend(self.labeled_cycles(arg, &labels, j));
                }
                Construct::Cycle => {
                    if j == 0 {
                        continue;
                    }
                    let parts = vec![arg; j];
                    let mut seen = BTreeSet::new();
                    for s in self.product(&parts, n) {
                        let c = canonical_cycle(s, false);
                        if seen.insert(c.clone()) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        out
    }

    /// Sets of `j` objects of `arg` partitioning `labels`, blocks ordered by
    /// least label.
    fn labeled_blocks(&mut self, arg: &'s SpecExpr, labels: &[usize], j: usize) -> Vec<Vec<CombObject>> {
        if labels.is_empty() {
            return if j == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        if j == 0 {
            return Vec::new();
        }
        let v = self.val(arg).unwrap_or(usize::MAX).max(1);
        let (first, rest) = labels.split_first().unwrap();
        let mut out = Vec::new();
        for s in v..=labels.len() {
            if (labels.len() - s) < (j - 1) * v {
                break;
            }
            let objs = self.expr(arg, s);
            if objs.is_empty() {
                continue;
            }
            for (inside, outside) in label_splits(rest, s - 1) {
                let mut block_labels = vec![*first];
                block_labels.extend(inside);
                let tails = self.labeled_blocks(arg, &outside, j - 1);
                for o in &objs {
                    let o = o.relabel(&block_labels);
                    for t in &tails {
                        let mut row = vec![o.clone()];
                        row.extend(t.iter().cloned());
                        out.push(row);
                    }
                }
            }
        }
        out
    }

    /// Cycles of `j` objects on `labels`, starting at the block holding the
    /// least label.
    fn labeled_cycles(&mut self, arg: &'s SpecExpr, labels: &[usize], j: usize) -> Vec<CombObject> {
        let v = self.val(arg).unwrap_or(usize::MAX).max(1);
        let (first, rest) = labels.split_first().unwrap();
        let mut out = Vec::new();
        for s in v..=labels.len() {
            if labels.len() - s < (j - 1) * v {
                break;
            }
            let objs = self.expr(arg, s);
            if objs.is_empty() {
                continue;
            }
            for (inside, outside) in label_splits(rest, s - 1) {
                let mut block_labels = vec![*first];
                block_labels.extend(inside);
                let parts = vec![arg; j - 1];
                let tails = self.product(&parts, outside.len());
                for o in &objs {
                    let o = o.relabel(&block_labels);
                    for t in &tails {
                        let mut row = vec![o.clone()];
                        row.extend(t.iter().map(|x| x.relabel(&outside)));
                        out.push(CombObject::Cycle { children: row });
                    }
                }
            }
        }
        out
    }

    /// Multisets (`repeat`) or sets of `j` unlabeled objects of total size `n`.
    fn unlabeled_sets(&mut self, arg: &'s SpecExpr, n: usize, j: usize, repeat: bool) -> Vec<CombObject> {
        if j == 0 {
            return if n == 0 { vec![CombObject::Set { children: Vec::new() }] } else { Vec::new() };
        }
        let v = self.val(arg).unwrap_or(usize::MAX).max(1);
        if (j - 1).saturating_mul(v) > n {
            return Vec::new();
        }
        let mut pool = Vec::new();
        for s in 1..=n - (j - 1) * v {
            for o in self.expr(arg, s) {
                pool.push((s, o));
            }
        }
        fn go(
            pool: &[(usize, CombObject)],
            start: usize,
            left: usize,
            need: usize,
            repeat: bool,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if need == 0 {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for i in start..pool.len() {
                let s = pool[i].0;
                if s > left {
                    break;
                }
                cur.push(i);
                go(pool, if repeat { i } else { i + 1 }, left - s, need - 1, repeat, cur, out);
                cur.pop();
            }
        }
        let mut picks = Vec::new();
        go(&pool, 0, n, j, repeat, &mut Vec::new(), &mut picks);
        picks.into_iter().map(|p| canonical_set(p.into_iter().map(|i| pool[i].1.clone()).collect(), false)).collect()
    }

    fn subst(&mut self, outer: &'s SpecExpr, inner: &'s SpecExpr, n: usize) -> Vec<CombObject> {
        let mut out = Vec::new();
        let labels: Vec<usize> = (1..=n).collect();
        for k in 0..=n {
            let shapes = self.expr(outer, k);
            if shapes.is_empty() {
                continue;
            }
            let blocks = self.labeled_blocks(inner, &labels, k);
            for b in &blocks {
                for s in &shapes {
                    out.push(s.substitute(b));
                }
            }
        }
        out
    }
}
