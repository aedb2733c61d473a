//! Finite permutation groups stored as explicit element lists, their cycle
//! indices, orbits of group actions and Pólya inventories.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::arith::{divisors, integer_partitions, ksubsets, multiplicities, totient};
use crate::cycle_poly::{CyclePoly, Monomial};
use crate::enumerate::signature;
use crate::poly::QPoly;

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyaError {
    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),
    #[error("generators have different degrees")]
    DegreeMismatch,
    #[error("group exceeds {0} elements")]
    CapExceeded(usize),
    #[error("invalid size {n} for the {kind} group")]
    InvalidSize { kind: GroupKind, n: usize },
    #[error("unknown group kind `{0}`")]
    UnknownKind(String),
    #[error("k = {k} out of range 1..={n}")]
    KOutOfRange { n: usize, k: usize },
    #[error("action is inconsistent: {0}")]
    BadAction(String),
    #[error("cycle index is not homogeneous of degree {0}")]
    Arity(usize),
}

/// Permutation of `1..=n` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PolyaError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(PolyaError::NotAPermutation(n));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// The cycle `(c_1 c_2 ... c_k)` on `n` points.
    pub fn cycle(n: usize, cycle: &[usize]) -> Result<Self, PolyaError> {
        let mut images: Vec<usize> = (1..=n).collect();
        for (i, &c) in cycle.iter().enumerate() {
            if c == 0 || c > n {
                return Err(PolyaError::NotAPermutation(n));
            }
            images[c - 1] = cycle[(i + 1) % cycle.len()];
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i - 1]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        signature(&self.0).expect("validated permutation")
    }

    pub fn is_even(&self) -> bool {
        let c = self.cycle_type();
        c.iter().enumerate().map(|(i, &k)| i * k).sum::<usize>() % 2 == 0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// The monomial `s^{c(g)}`.
pub fn cycle_index_perm(g: &Permutation) -> Monomial {
    Monomial::from_cycle_type(&g.cycle_type())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKind {
    Symmetric,
    Alternating,
    Cyclic,
    Dihedral,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Symmetric => "symmetric",
            GroupKind::Alternating => "alternating",
            GroupKind::Cyclic => "cyclic",
            GroupKind::Dihedral => "dihedral",
        })
    }
}

impl FromStr for GroupKind {
    type Err = PolyaError;
    fn from_str(s: &str) -> Result<Self, PolyaError> {
        match s.to_ascii_lowercase().as_str() {
            "symmetric" | "s" => Ok(GroupKind::Symmetric),
            "alternating" | "a" => Ok(GroupKind::Alternating),
            "cyclic" | "c" => Ok(GroupKind::Cyclic),
            "dihedral" | "d" => Ok(GroupKind::Dihedral),
            _ => Err(PolyaError::UnknownKind(s.into())),
        }
    }
}

/// A permutation group with all of its elements listed. The identity is
/// element 0; the rest are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        if g.is_identity() {
            return Some(0);
        }
        self.elements[1..].binary_search(g).ok().map(|i| i + 1)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.index_of(g).is_some()
    }

    /// `table[i][j]` is the index of `elements[i] ∘ elements[j]`.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        self.elements
            .iter()
            .map(|a| self.elements.iter().map(|b| self.index_of(&a.compose(b)).unwrap()).collect())
            .collect()
    }
}

/// The group generated by `generators` on `degree` points.
pub fn group_closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<PermGroup, PolyaError> {
    if generators.iter().any(|g| g.degree() != degree) {
        return Err(PolyaError::DegreeMismatch);
    }
    let id = Permutation::identity(degree);
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(PolyaError::CapExceeded(cap));
                }
                queue.push_back(y);
            }
        }
    }
    seen.remove(&id);
    let mut elements = vec![id];
    elements.extend(seen);
    Ok(PermGroup { degree, generators: generators.to_vec(), elements })
}

/// Symmetric, alternating, cyclic or dihedral group acting on `1..=n`.
///
/// The dihedral group on one point is trivial and on two points is the
/// symmetric group `S_2`, the faithful image of the symmetries of a 2-gon.
pub fn standard_group(kind: GroupKind, n: usize) -> Result<PermGroup, PolyaError> {
    if n == 0 {
        return Err(PolyaError::InvalidSize { kind, n });
    }
    let mut gens = Vec::new();
    let rotation = Permutation::cycle(n, &(1..=n).collect::<Vec<_>>())?;
    match kind {
        GroupKind::Symmetric => {
            if n >= 2 {
                gens.push(Permutation::cycle(n, &[1, 2])?);
                gens.push(rotation);
            }
        }
        GroupKind::Alternating => {
            for i in 3..=n {
                gens.push(Permutation::cycle(n, &[1, 2, i])?);
            }
        }
        GroupKind::Cyclic => {
            if n >= 2 {
                gens.push(rotation);
            }
        }
        GroupKind::Dihedral => {
            if n >= 2 {
                gens.push(rotation);
                let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n + 1).collect();
                gens.push(Permutation::new(reflection)?);
            }
        }
    }
    group_closure(n, &gens, DEFAULT_ELEMENT_CAP)
}

/// `Z(G) = (1/|G|) Σ_g s^{c(g)}`.
pub fn cycle_index_group(g: &PermGroup) -> CyclePoly {
    let mut counts: BTreeMap<Monomial, usize> = BTreeMap::new();
    for x in g.elements() {
        *counts.entry(cycle_index_perm(x)).or_default() += 1;
    }
    let order = BigInt::from(g.order());
    let mut z = CyclePoly::zero();
    for (m, c) in counts {
        z.add_term(m, BigRational::new(BigInt::from(c), order.clone()));
    }
    z
}

fn cyclic_index(n: usize) -> CyclePoly {
    let mut z = CyclePoly::zero();
    for d in divisors(n) {
        z.add_term(Monomial::var_pow(d, (n / d) as u32), BigRational::new(BigInt::from(totient(d)), BigInt::from(n)));
    }
    z
}

/// Cycle index from the classical closed forms, without listing elements.
pub fn cycle_index_closed(kind: GroupKind, n: usize) -> Result<CyclePoly, PolyaError> {
    if n == 0 {
        return Err(PolyaError::InvalidSize { kind, n });
    }
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    Ok(match kind {
        GroupKind::Symmetric | GroupKind::Alternating => {
            let mut z = CyclePoly::zero();
            for p in integer_partitions(n) {
                let m = Monomial::from_cycle_type(&multiplicities(&p).iter().map(|&e| e as usize).collect::<Vec<_>>());
                let even = (n - p.len()).is_multiple_of(2);
                let weight = match kind {
                    GroupKind::Alternating if n >= 2 => {
                        if !even {
                            continue;
                        }
                        2
                    }
                    _ => 1,
                };
                z.add_term(m.clone(), BigRational::new(BigInt::from(weight), m.z_factor()));
            }
            z
        }
        GroupKind::Cyclic => cyclic_index(n),
        GroupKind::Dihedral if n == 1 => cyclic_index(1),
        GroupKind::Dihedral if n == 2 => cycle_index_closed(GroupKind::Symmetric, 2)?,
        GroupKind::Dihedral => {
            let mut z = cyclic_index(n).scale(&half);
            let h = (n / 2) as u32;
            if n % 2 == 1 {
                z.add_term(Monomial::new(vec![1, h]), half);
            } else {
                z.add_term(Monomial::var_pow(2, h), quarter.clone());
                z.add_term(Monomial::new(vec![2, h - 1]), quarter);
            }
            z
        }
    })
}

/// A group acting on a finite domain `0..len`: `images[g][x]` is the image
/// of `x` under group element `g` (indexed as in [`PermGroup::elements`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionTable {
    images: Vec<Vec<usize>>,
    len: usize,
}

impl ActionTable {
    /// Build from an image function and check it against the group law on
    /// the generators.
    pub fn new(g: &PermGroup, len: usize, f: impl Fn(&Permutation, usize) -> usize) -> Result<Self, PolyaError> {
        let images: Vec<Vec<usize>> = g.elements().iter().map(|p| (0..len).map(|x| f(p, x)).collect()).collect();
        let table = ActionTable { images, len };
        table.validate(g)?;
        Ok(table)
    }

    fn validate(&self, g: &PermGroup) -> Result<(), PolyaError> {
        for row in &self.images {
            let mut seen = vec![false; self.len];
            for &y in row {
                if y >= self.len || seen[y] {
                    return Err(PolyaError::BadAction("an element does not act bijectively".into()));
                }
                seen[y] = true;
            }
        }
        if self.images.first().is_some_and(|id| id.iter().enumerate().any(|(x, &y)| x != y)) {
            return Err(PolyaError::BadAction("the identity moves a point".into()));
        }
        for a in g.generators() {
            for b in g.generators() {
                let (ia, ib) = (g.index_of(a).unwrap(), g.index_of(b).unwrap());
                let iab = g.index_of(&a.compose(b)).unwrap();
                for x in 0..self.len {
                    if self.images[iab][x] != self.images[ia][self.images[ib][x]] {
                        return Err(PolyaError::BadAction(format!("composition law fails for {a} and {b}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The group acting on its own points, `0` standing for point `1`.
    pub fn natural(g: &PermGroup) -> Self {
        ActionTable::new(g, g.degree(), |p, x| p.apply(x + 1) - 1).expect("natural action")
    }

    /// Words of length `degree` over `q` letters, in lexicographic order of
    /// letter indices; `g` moves the letter at position `i` to `g(i)`.
    pub fn on_words(g: &PermGroup, q: usize) -> Result<Self, PolyaError> {
        let n = g.degree();
        let len = q.checked_pow(n as u32).ok_or(PolyaError::CapExceeded(usize::MAX))?;
        ActionTable::new(g, len, |p, x| {
            let w = word_of(x, n, q);
            let mut out = vec![0; n];
            for (i, &c) in w.iter().enumerate() {
                out[p.apply(i + 1) - 1] = c;
            }
            index_of_word(&out, q)
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn image(&self, g: usize, x: usize) -> usize {
        self.images[g][x]
    }

    pub fn fixed_points(&self, g: usize) -> usize {
        self.images[g].iter().enumerate().filter(|(x, &y)| *x == y).count()
    }
}

/// Letters of the `x`-th word of length `n` over `q` letters.
pub fn word_of(mut x: usize, n: usize, q: usize) -> Vec<usize> {
    let mut w = vec![0; n];
    for i in (0..n).rev() {
        w[i] = x % q;
        x /= q;
    }
    w
}

pub fn index_of_word(w: &[usize], q: usize) -> usize {
    w.iter().fold(0, |acc, &c| acc * q + c)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Orbits as sorted index lists, ordered by their least element.
pub fn orbits(g: &PermGroup, action: &ActionTable) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..action.len()).collect();
    for gen in g.generators() {
        let gi = g.index_of(gen).unwrap();
        for x in 0..action.len() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, action.image(gi, x)));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..action.len() {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    groups.into_values().collect()
}

/// The least element of each orbit.
pub fn orbit_representatives(g: &PermGroup, action: &ActionTable) -> Vec<usize> {
    orbits(g, action).into_iter().map(|o| o[0]).collect()
}

/// Indices of the group elements fixing `x`.
pub fn stabilizer(g: &PermGroup, action: &ActionTable, x: usize) -> Vec<usize> {
    (0..g.order()).filter(|&i| action.image(i, x) == x).collect()
}

/// Number of orbits by Burnside's lemma.
pub fn burnside_count(g: &PermGroup, action: &ActionTable) -> BigUint {
    let total: usize = (0..g.order()).map(|i| action.fixed_points(i)).sum();
    BigUint::from(total) / BigUint::from(g.order())
}

/// A group induced on the `k`-subsets of the points of another.
#[derive(Clone, Debug)]
pub struct InducedGroup {
    pub group: PermGroup,
    /// The subsets (1-based, sorted) in the order used as points `1..`.
    pub domain: Vec<Vec<usize>>,
    /// Image of each element of the original group.
    pub image: Vec<Permutation>,
}

pub fn induced_ksubset_group(g: &PermGroup, k: usize) -> Result<InducedGroup, PolyaError> {
    let n = g.degree();
    if k == 0 || k > n {
        return Err(PolyaError::KOutOfRange { n, k });
    }
    let domain: Vec<Vec<usize>> = ksubsets(n, k).into_iter().map(|s| s.into_iter().map(|i| i + 1).collect()).collect();
    let index: BTreeMap<&[usize], usize> = domain.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let induce = |p: &Permutation| -> Permutation {
        let images = domain
            .iter()
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|&x| p.apply(x)).collect();
                t.sort_unstable();
                index[t.as_slice()] + 1
            })
            .collect();
        Permutation(images)
    };
    let gens: Vec<Permutation> = g.generators().iter().map(&induce).collect();
    let image: Vec<Permutation> = g.elements().iter().map(&induce).collect();
    let group = group_closure(domain.len(), &gens, DEFAULT_ELEMENT_CAP)?;
    Ok(InducedGroup { group, domain, image })
}

/// `Z(G; a(t), a(t^2), ...)`, the weight enumerator of colourings of `m`
/// points up to symmetry.
pub fn orbit_inventory(z: &CyclePoly, a: &QPoly, m: usize) -> Result<QPoly, PolyaError> {
    if !z.is_homogeneous(m) {
        return Err(PolyaError::Arity(m));
    }
    Ok(z.inventory(a))
}

pub fn necklace_polynomial(n: usize, a: &QPoly, symmetry: GroupKind) -> Result<QPoly, PolyaError> {
    match symmetry {
        GroupKind::Cyclic | GroupKind::Dihedral => orbit_inventory(&cycle_index_closed(symmetry, n)?, a, n),
        kind => Err(PolyaError::InvalidSize { kind, n }),
    }
}

#[cfg(test)]
mod tests;
