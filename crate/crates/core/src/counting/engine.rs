//! Incremental coefficient evaluation.
//!
//! A specification is compiled into a graph of nodes, each owning a
//! coefficient array filled one size at a time. Every node computes its
//! size-`n` entry from entries of smaller size plus a few same-size entries
//! of other nodes; the latter are ordered once, up front, by a topological
//! sort. Each node does `O(n)` work per size, which gives the `O(r N^2)`
//! bound for `r` nodes.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::weights::Weights;
use super::CountError;
use crate::arith::{binomial_rows, divisors, totient};
use crate::spec::{expr_valuation, valuation, Construct, Mode, Restriction, SpecExpr, Specification, Val};

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Zero,
    Eps,
    Atom,
    /// The tracked marker: size 0, weight `u`.
    Marker,
    Ref(usize),
    Union(Vec<usize>),
    /// Cartesian product; labeled mode weights splits by binomials.
    Prod(usize, usize),
    /// `x - y` where `y` is a subclass of `x`; the difference has no
    /// objects below the given size.
    Diff(usize, usize, usize),
    /// `x / k!`
    DivFact(usize, usize),
    /// Labeled: the component holding the smallest label, then `rest`.
    SetCons(usize, usize),
    /// Unlabeled multisets (or sets, when `distinct`) of at least two
    /// components.
    PolyaTail {
        a: usize,
        distinct: bool,
    },
    /// Unlabeled multisets (sets) of exactly `k >= 2` components;
    /// `parts[j]` holds exactly `j` components.
    PolyaPart {
        a: usize,
        k: usize,
        parts: Vec<usize>,
        distinct: bool,
    },
    /// Unlabeled cycles of at least two components.
    CycTail {
        a: usize,
    },
    /// Unlabeled cycles of exactly `k >= 2` components; `pows` pairs each
    /// divisor `d` of `k` with the node of `A^{k/d}`.
    CycCard {
        k: usize,
        pows: Vec<(usize, usize)>,
    },
    /// Labeled substitution of `inner` structures for the atoms of `outer`.
    Subst {
        outer: usize,
        inner: usize,
    },
}

enum Aux<E> {
    None,
    Polya { b: Vec<E>, partial: Vec<E>, full: Vec<E> },
    Cyc { s: Vec<E>, lam: Vec<E> },
    Subst { t: Vec<Vec<E>> },
}

pub(crate) struct Compiled {
    pub nodes: Vec<Node>,
    /// Per class, the node holding its counts.
    pub class_nodes: Vec<usize>,
    pub labeled: bool,
    pub vals: Vec<Val>,
    order: Vec<usize>,
}

struct Compiler<'a> {
    spec: &'a Specification,
    spec_vals: BTreeMap<String, Val>,
    nodes: Vec<Node>,
    class_nodes: Vec<usize>,
    n_max: usize,
    tracked: Option<&'a str>,
    pows: BTreeMap<(usize, usize), usize>,
    eps: usize,
    zero: usize,
}

impl<'a> Compiler<'a> {
    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn labeled(&self) -> bool {
        self.spec.mode() == Mode::Labeled
    }

    fn union(&mut self, mut parts: Vec<usize>) -> usize {
        parts.retain(|&p| p != self.zero);
        match parts.len() {
            0 => self.zero,
            1 => parts[0],
            _ => self.push(Node::Union(parts)),
        }
    }

    fn prod(&mut self, a: usize, b: usize) -> usize {
        if a == self.zero || b == self.zero {
            return self.zero;
        }
        if a == self.eps {
            return b;
        }
        if b == self.eps {
            return a;
        }
        self.push(Node::Prod(a, b))
    }

    fn diff(&mut self, x: usize, y: usize, min: usize) -> usize {
        if y == self.zero {
            x
        } else {
            self.push(Node::Diff(x, y, min))
        }
    }

    /// `A^k`, shared between uses.
    fn pow(&mut self, a: usize, k: usize) -> usize {
        if k == 0 {
            return self.eps;
        }
        if k == 1 {
            return a;
        }
        if let Some(&p) = self.pows.get(&(a, k)) {
            return p;
        }
        let p = if k.is_multiple_of(2) {
            let h = self.pow(a, k / 2);
            self.prod(h, h)
        } else {
            let h = self.pow(a, k - 1);
            self.prod(a, h)
        };
        self.pows.insert((a, k), p);
        p
    }

    fn seq_full(&mut self, a: usize) -> usize {
        let s = self.push(Node::Ref(usize::MAX));
        let p = self.prod(a, s);
        let u = self.union(vec![self.eps, p]);
        self.nodes[s] = Node::Ref(u);
        u
    }

    /// Sequences with at least `k` components.
    fn seq_ge(&mut self, a: usize, k: usize) -> usize {
        let full = self.seq_full(a);
        let p = self.pow(a, k);
        self.prod(p, full)
    }

    /// Sequences with at most `k` components.
    fn seq_le(&mut self, a: usize, k: usize, va: usize) -> usize {
        if (k + 1) * va > self.n_max {
            return self.seq_full(a);
        }
        let full = self.seq_full(a);
        let long = self.seq_ge(a, k + 1);
        self.diff(full, long, 0)
    }

    fn compile(&mut self, e: &SpecExpr) -> Result<usize, CountError> {
        Ok(match e {
            SpecExpr::Epsilon => self.eps,
            SpecExpr::Atom => self.push(Node::Atom),
            SpecExpr::Marker { name } => {
                if Some(name.as_str()) == self.tracked {
                    self.push(Node::Marker)
                } else {
                    self.eps
                }
            }
            SpecExpr::ClassRef { name } => {
                let i = self.spec.index_of(name).ok_or_else(|| CountError::Unsupported(name.clone()))?;
                self.class_nodes[i]
            }
            SpecExpr::Union { args } => {
                let parts = args.iter().map(|a| self.compile(a)).collect::<Result<Vec<_>, _>>()?;
                self.union(parts)
            }
            SpecExpr::Prod { args } => {
                let parts = args.iter().map(|a| self.compile(a)).collect::<Result<Vec<_>, _>>()?;
                let mut acc = *parts.last().unwrap();
                for &p in parts.iter().rev().skip(1) {
                    acc = self.prod(p, acc);
                }
                acc
            }
            SpecExpr::Construct { op, arg, restriction } => {
                let va = match expr_valuation(arg, &self.spec_vals) {
                    Some(v) if v >= 1 => v,
                    _ => return Ok(self.construct_degenerate(*op, *restriction)),
                };
                let a = self.compile(arg)?;
                self.construct(op.resolve(self.spec.mode()), a, va, *restriction)?
            }
            SpecExpr::Subst { outer, inner } => {
                if !self.labeled() {
                    return Err(CountError::Unsupported("Subst in unlabeled mode".into()));
                }
                let o = self.compile(outer)?;
                let i = self.compile(inner)?;
                self.push(Node::Subst { outer: o, inner: i })
            }
        })
    }

    /// Constructions over an empty argument class: only the empty
    /// collection (if admissible) survives.
    fn construct_degenerate(&mut self, op: Construct, r: Restriction) -> usize {
        if op != Construct::Cycle && r.allows(0) {
            self.eps
        } else {
            self.zero
        }
    }

    fn construct(&mut self, op: Construct, a: usize, va: usize, r: Restriction) -> Result<usize, CountError> {
        let n = self.n_max;
        // Component counts beyond n / va cannot contribute up to size n.
        let kmax = n / va;
        let r = match r {
            Restriction::Eq(k) | Restriction::Ge(k) if k > kmax => return Ok(self.zero),
            Restriction::Le(k) if k >= kmax => Restriction::None,
            r => r,
        };
        let labeled = self.labeled();
        Ok(match op {
            Construct::Seq => match r {
                Restriction::None => self.seq_full(a),
                Restriction::Eq(k) => self.pow(a, k),
                Restriction::Ge(k) => self.seq_ge(a, k),
                Restriction::Le(k) => self.seq_le(a, k, va),
            },
            Construct::Set if labeled => match r {
                Restriction::None => self.labeled_set(a),
                Restriction::Eq(k) => self.labeled_set_eq(a, k),
                Restriction::Le(k) => {
                    let parts = (0..=k).map(|j| self.labeled_set_eq(a, j)).collect();
                    self.union(parts)
                }
                Restriction::Ge(0) => self.labeled_set(a),
                Restriction::Ge(k) => {
                    let s = self.labeled_set(a);
                    let parts = (0..k).map(|j| self.labeled_set_eq(a, j)).collect();
                    let small = self.union(parts);
                    self.diff(s, small, k * va)
                }
            },
            Construct::Cycle if labeled => match r {
                Restriction::Eq(0) | Restriction::Le(0) => self.zero,
                Restriction::None | Restriction::Ge(0) => {
                    let rest = self.seq_full(a);
                    self.push(Node::SetCons(a, rest))
                }
                Restriction::Eq(k) => {
                    let rest = self.pow(a, k - 1);
                    self.push(Node::SetCons(a, rest))
                }
                Restriction::Ge(k) => {
                    let rest = self.seq_ge(a, k - 1);
                    self.push(Node::SetCons(a, rest))
                }
                Restriction::Le(k) => {
                    let rest = self.seq_le(a, k - 1, va);
                    self.push(Node::SetCons(a, rest))
                }
            },
            Construct::MultiSet | Construct::PowerSet if labeled => {
                return Err(CountError::Unsupported(alloc::format!("{} in labeled mode", op.keyword())))
            }
            Construct::MultiSet | Construct::PowerSet | Construct::Set => {
                let distinct = op == Construct::PowerSet;
                let part = |c: &mut Self, k: usize, parts: &mut Vec<usize>| -> usize {
                    while parts.len() <= k {
                        let j = parts.len();
                        let node = match j {
                            0 => c.eps,
                            1 => a,
                            _ => c.push(Node::PolyaPart { a, k: j, parts: parts.clone(), distinct }),
                        };
                        parts.push(node);
                    }
                    parts[k]
                };
                let mut parts = Vec::new();
                match r {
                    Restriction::None | Restriction::Ge(0) => {
                        let tail = self.push(Node::PolyaTail { a, distinct });
                        self.union(vec![self.eps, a, tail])
                    }
                    Restriction::Ge(1) => {
                        let tail = self.push(Node::PolyaTail { a, distinct });
                        self.union(vec![a, tail])
                    }
                    Restriction::Ge(k) => {
                        let tail = self.push(Node::PolyaTail { a, distinct });
                        let small = (2..k).map(|j| part(self, j, &mut parts)).collect();
                        let small = self.union(small);
                        self.diff(tail, small, k * va)
                    }
                    Restriction::Eq(k) => part(self, k, &mut parts),
                    Restriction::Le(k) => {
                        let all = (0..=k).map(|j| part(self, j, &mut parts)).collect();
                        self.union(all)
                    }
                }
            }
            Construct::Cycle => {
                let card = |c: &mut Self, k: usize| -> usize {
                    if k == 1 {
                        return a;
                    }
                    let pows = divisors(k).into_iter().map(|d| (d, c.pow(a, k / d))).collect();
                    c.push(Node::CycCard { k, pows })
                };
                match r {
                    Restriction::Eq(0) | Restriction::Le(0) => self.zero,
                    Restriction::None | Restriction::Ge(0) | Restriction::Ge(1) => {
                        let tail = self.push(Node::CycTail { a });
                        self.union(vec![a, tail])
                    }
                    Restriction::Ge(k) => {
                        let tail = self.push(Node::CycTail { a });
                        let small = (2..k).map(|j| card(self, j)).collect();
                        let small = self.union(small);
                        self.diff(tail, small, k * va)
                    }
                    Restriction::Eq(k) => card(self, k),
                    Restriction::Le(k) => {
                        let all = (1..=k).map(|j| card(self, j)).collect();
                        self.union(all)
                    }
                }
            }
        })
    }

    fn labeled_set(&mut self, a: usize) -> usize {
        let s = self.push(Node::Ref(usize::MAX));
        let cons = self.push(Node::SetCons(a, s));
        let u = self.union(vec![self.eps, cons]);
        self.nodes[s] = Node::Ref(u);
        u
    }

    fn labeled_set_eq(&mut self, a: usize, k: usize) -> usize {
        match k {
            0 => self.eps,
            1 => a,
            _ => {
                let p = self.pow(a, k);
                self.push(Node::DivFact(p, k))
            }
        }
    }
}

impl Compiled {
    pub fn new(spec: &Specification, n_max: usize, tracked: Option<&str>) -> Result<Self, CountError> {
        let mut c = Compiler {
            spec,
            spec_vals: valuation(spec),
            nodes: vec![Node::Zero, Node::Eps],
            class_nodes: Vec::new(),
            n_max,
            tracked,
            pows: BTreeMap::new(),
            eps: 1,
            zero: 0,
        };
        for _ in spec.equations() {
            let r = c.push(Node::Ref(usize::MAX));
            c.class_nodes.push(r);
        }
        for (i, (_, rhs)) in spec.equations().iter().enumerate() {
            let root = c.compile(rhs)?;
            c.nodes[c.class_nodes[i]] = Node::Ref(root);
        }
        let labeled = spec.mode() == Mode::Labeled;
        let mut compiled =
            Compiled { nodes: c.nodes, class_nodes: c.class_nodes, labeled, vals: Vec::new(), order: Vec::new() };
        compiled.vals = compiled.node_valuations();
        compiled.order = compiled.evaluation_order(spec)?;
        Ok(compiled)
    }

    fn node_valuations(&self) -> Vec<Val> {
        let mut vals: Vec<Val> = vec![None; self.nodes.len()];
        let add = |a: Val, b: Val| Some(a? + b?);
        let mul = |k: usize, a: Val| a.map(|x| x * k);
        loop {
            let mut changed = false;
            for i in 0..self.nodes.len() {
                let v = match &self.nodes[i] {
                    Node::Zero => None,
                    Node::Eps | Node::Marker => Some(0),
                    Node::Atom => Some(1),
                    Node::Ref(t) => vals[*t],
                    Node::Union(parts) => parts.iter().filter_map(|&p| vals[p]).min(),
                    Node::Prod(a, b) | Node::SetCons(a, b) => add(vals[*a], vals[*b]),
                    Node::Diff(x, _, min) => vals[*x].map(|v| v.max(*min)),
                    Node::DivFact(x, _) => vals[*x],
                    Node::PolyaTail { a, .. } | Node::CycTail { a } => mul(2, vals[*a]),
                    Node::PolyaPart { a, k, .. } => mul(*k, vals[*a]),
                    Node::CycCard { k, pows } => {
                        let a1 = pows.iter().find(|(d, _)| *d == *k).and_then(|(_, p)| vals[*p]);
                        mul(*k, a1)
                    }
                    Node::Subst { outer, inner } => match vals[*outer] {
                        Some(0) => Some(0),
                        Some(k) => mul(k, vals[*inner]),
                        None => None,
                    },
                };
                if v != vals[i] {
                    vals[i] = v;
                    changed = true;
                }
            }
            if !changed {
                return vals;
            }
        }
    }

    fn is_val0(&self, i: usize) -> bool {
        self.vals[i] == Some(0)
    }

    /// Nodes whose size-`n` entry is read while computing node `i` at size `n`.
    fn same_size_deps(&self, i: usize) -> Vec<usize> {
        match &self.nodes[i] {
            Node::Ref(t) => vec![*t],
            Node::Union(parts) => parts.clone(),
            Node::Diff(x, y, _) => vec![*x, *y],
            Node::DivFact(x, _) => vec![*x],
            Node::Prod(a, b) => {
                let mut d = Vec::new();
                if self.is_val0(*b) {
                    d.push(*a);
                }
                if self.is_val0(*a) {
                    d.push(*b);
                }
                d
            }
            Node::SetCons(a, rest) => {
                if self.is_val0(*rest) {
                    vec![*a]
                } else {
                    Vec::new()
                }
            }
            Node::CycCard { pows, .. } => pows.iter().filter(|(d, _)| *d == 1).map(|&(_, p)| p).collect(),
            Node::Subst { outer, inner } => {
                let mut d = Vec::new();
                if self.vals[*inner].is_none_or(|v| v <= 1) {
                    d.push(*outer);
                }
                if self.vals[*outer].is_none_or(|v| v <= 1) {
                    d.push(*inner);
                }
                d
            }
            _ => Vec::new(),
        }
    }

    fn evaluation_order(&self, spec: &Specification) -> Result<Vec<usize>, CountError> {
        let n = self.nodes.len();
        let deps: Vec<Vec<usize>> = (0..n).map(|i| self.same_size_deps(i)).collect();
        let mut indegree = vec![0usize; n];
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, ds) in deps.iter().enumerate() {
            for &d in ds {
                indegree[i] += 1;
                users[d].push(i);
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop() {
            order.push(i);
            for &u in &users[i] {
                indegree[u] -= 1;
                if indegree[u] == 0 {
                    ready.push(u);
                }
            }
        }
        if order.len() < n {
            let classes = spec
                .class_names()
                .zip(&self.class_nodes)
                .filter(|(_, &node)| indegree[node] > 0)
                .map(|(name, _)| String::from(name))
                .collect();
            return Err(CountError::SameSizeCycle(classes));
        }
        Ok(order)
    }
}

pub(crate) struct Engine<'c, W: Weights> {
    c: &'c Compiled,
    w: W,
    pub values: Vec<Vec<W::E>>,
    aux: Vec<Aux<W::E>>,
    binom: Vec<Vec<BigInt>>,
    pub ops: u64,
}

impl<'c, W: Weights> Engine<'c, W> {
    pub fn new(c: &'c Compiled, w: W, n_max: usize) -> Self {
        let aux = c
            .nodes
            .iter()
            .map(|n| match n {
                Node::PolyaTail { .. } => Aux::Polya { b: Vec::new(), partial: Vec::new(), full: Vec::new() },
                Node::CycTail { .. } => Aux::Cyc { s: Vec::new(), lam: Vec::new() },
                Node::Subst { .. } => Aux::Subst { t: Vec::new() },
                _ => Aux::None,
            })
            .collect();
        let binom = if c.labeled { binomial_rows(n_max) } else { Vec::new() };
        Engine { c, w, values: vec![Vec::new(); c.nodes.len()], aux, binom, ops: 0 }
    }

    pub fn run(&mut self, n_max: usize) {
        for n in 0..=n_max {
            for idx in 0..self.c.order.len() {
                let i = self.c.order[idx];
                let v = self.eval(i, n);
                self.values[i].push(v);
            }
        }
    }

    fn lo(&self, i: usize) -> Option<usize> {
        self.c.vals[i]
    }

    fn eval(&mut self, i: usize, n: usize) -> W::E {
        let w = &self.w;
        let vals = &self.values;
        match &self.c.nodes[i] {
            Node::Zero => w.zero(),
            Node::Eps => {
                if n == 0 {
                    w.one()
                } else {
                    w.zero()
                }
            }
            Node::Atom => {
                if n == 1 {
                    w.one()
                } else {
                    w.zero()
                }
            }
            Node::Marker => {
                if n == 0 {
                    w.marker()
                } else {
                    w.zero()
                }
            }
            Node::Ref(t) => vals[*t][n].clone(),
            Node::Union(parts) => {
                let mut acc = w.zero();
                for &p in parts {
                    w.add_assign(&mut acc, &vals[p][n]);
                }
                acc
            }
            Node::Diff(x, y, _) => {
                let mut acc = vals[*x][n].clone();
                w.sub_assign(&mut acc, &vals[*y][n]);
                acc
            }
            Node::DivFact(x, k) => {
                let f = BigInt::from(crate::arith::factorial(*k));
                w.div_exact(&vals[*x][n], &f)
            }
            Node::Prod(a, b) => {
                let (a, b) = (*a, *b);
                let mut acc = w.zero();
                let (Some(va), Some(vb)) = (self.lo(a), self.lo(b)) else { return acc };
                if va + vb > n {
                    return acc;
                }
                for k in va..=n - vb {
                    self.ops += 1;
                    if self.c.labeled {
                        let t = w.scale(&vals[a][k], &self.binom[n][k]);
                        w.mul_add(&mut acc, &t, &vals[b][n - k]);
                    } else {
                        w.mul_add(&mut acc, &vals[a][k], &vals[b][n - k]);
                    }
                }
                acc
            }
            Node::SetCons(a, rest) => {
                let (a, rest) = (*a, *rest);
                let mut acc = w.zero();
                let (Some(va), Some(vr)) = (self.lo(a), self.lo(rest)) else { return acc };
                let start = va.max(1);
                if n == 0 || start + vr > n {
                    return acc;
                }
                for j in start..=n - vr {
                    self.ops += 1;
                    let t = w.scale(&vals[a][j], &self.binom[n - 1][j - 1]);
                    w.mul_add(&mut acc, &t, &vals[rest][n - j]);
                }
                acc
            }
            Node::PolyaTail { a, distinct } => {
                let (a, distinct) = (*a, *distinct);
                let va = self.lo(a).unwrap_or(usize::MAX);
                let Aux::Polya { b, partial, full } = &mut self.aux[i] else { unreachable!() };
                // Finish bookkeeping for sizes below n now that A is known there.
                while full.len() < n {
                    let m = full.len();
                    let am = &vals[a][m];
                    let mut fm = if m == 0 { w.one() } else { w.zero() };
                    w.add_assign(&mut fm, am);
                    w.add_assign(&mut fm, &vals[i][m]);
                    full.push(fm);
                    let mut bm = partial[m].clone();
                    w.add_assign(&mut bm, &w.scale(am, &BigInt::from(m)));
                    b.push(bm);
                }
                let sign = |j: usize| distinct && j.is_multiple_of(2);
                let mut div_part = w.zero();
                if n > 0 {
                    for d in divisors(n) {
                        if d == n || d < va {
                            continue;
                        }
                        self.ops += 1;
                        let t = w.scale(&w.adams(&vals[a][d], n / d), &BigInt::from(d));
                        if sign(n / d) {
                            w.sub_assign(&mut div_part, &t);
                        } else {
                            w.add_assign(&mut div_part, &t);
                        }
                    }
                }
                partial.push(div_part.clone());
                if n == 0 {
                    return w.zero();
                }
                let mut acc = div_part;
                for k in 1..n {
                    self.ops += 1;
                    w.mul_add(&mut acc, &b[k], &full[n - k]);
                }
                w.div_exact(&acc, &BigInt::from(n))
            }
            Node::PolyaPart { a, k, parts, distinct } => {
                let (a, k) = (*a, *k);
                let mut acc = w.zero();
                let Some(va) = self.lo(a) else { return acc };
                for j in 1..=k {
                    let p = parts[k - j];
                    let Some(vp) = self.lo(p) else { continue };
                    if vp > n {
                        continue;
                    }
                    let mut term = w.zero();
                    let mut t = va.max(1);
                    while j * t + vp <= n {
                        self.ops += 1;
                        w.mul_add(&mut term, &w.adams(&vals[a][t], j), &vals[p][n - j * t]);
                        t += 1;
                    }
                    if *distinct && j % 2 == 0 {
                        w.sub_assign(&mut acc, &term);
                    } else {
                        w.add_assign(&mut acc, &term);
                    }
                }
                w.div_exact(&acc, &BigInt::from(k))
            }
            Node::CycTail { a } => {
                let a = *a;
                let va = self.lo(a).unwrap_or(usize::MAX).max(1);
                let Aux::Cyc { s, lam } = &mut self.aux[i] else { unreachable!() };
                while s.len() < n {
                    let m = s.len();
                    let mut sm = if m == 0 { w.one() } else { w.zero() };
                    let mut lm = w.zero();
                    let mut j = va;
                    while j <= m {
                        self.ops += 1;
                        w.mul_add(&mut sm, &vals[a][j], &s[m - j]);
                        w.mul_add(&mut lm, &w.scale(&vals[a][j], &BigInt::from(j)), &s[m - j]);
                        j += 1;
                    }
                    s.push(sm);
                    lam.push(lm);
                }
                if n == 0 {
                    return w.zero();
                }
                let mut acc = w.zero();
                for k in divisors(n) {
                    if k == 1 {
                        continue;
                    }
                    self.ops += 1;
                    let t = w.scale(&w.adams(&lam[n / k], k), &BigInt::from(totient(k)));
                    w.add_assign(&mut acc, &t);
                }
                let mut j = va;
                while j < n {
                    self.ops += 1;
                    w.mul_add(&mut acc, &w.scale(&vals[a][j], &BigInt::from(j)), &s[n - j]);
                    j += 1;
                }
                w.div_exact(&acc, &BigInt::from(n))
            }
            Node::CycCard { k, pows } => {
                let mut acc = w.zero();
                for &(d, p) in pows {
                    if !n.is_multiple_of(d) || (n == 0 && d > 1) {
                        continue;
                    }
                    self.ops += 1;
                    let t = w.scale(&w.adams(&vals[p][n / d], d), &BigInt::from(totient(d)));
                    w.add_assign(&mut acc, &t);
                }
                w.div_exact(&acc, &BigInt::from(*k))
            }
            Node::Subst { outer, inner } => {
                let (outer, inner) = (*outer, *inner);
                let vi = self.lo(inner).unwrap_or(usize::MAX).max(1);
                let Aux::Subst { t } = &mut self.aux[i] else { unreachable!() };
                // t[k][m]: labeled sets of k inner structures on m labels.
                for k in 0..=n {
                    if t.len() <= k {
                        t.push(vec![w.zero(); n]);
                    }
                    let v = if k == 0 {
                        if n == 0 {
                            w.one()
                        } else {
                            w.zero()
                        }
                    } else if n == 0 || k * vi > n {
                        w.zero()
                    } else {
                        let mut acc = w.zero();
                        let mut j = vi;
                        while j + (k - 1) * vi <= n {
                            self.ops += 1;
                            let c = w.scale(&vals[inner][j], &self.binom[n - 1][j - 1]);
                            w.mul_add(&mut acc, &c, &t[k - 1][n - j]);
                            j += 1;
                        }
                        acc
                    };
                    t[k].push(v);
                }
                let mut acc = w.zero();
                for k in 0..=n {
                    self.ops += 1;
                    w.mul_add(&mut acc, &vals[outer][k], &t[k][n]);
                }
                acc
            }
        }
    }
}
