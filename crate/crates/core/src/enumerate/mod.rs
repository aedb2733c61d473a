//! Exhaustive listing and uniform random generation of specification
//! objects, plus the classical basic families: permutations in lex order,
//! reflected Gray codes, cool-lex combinations and restricted partitions.

mod listing;
mod partitions;
mod random;
mod words;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::counting::CountError;

pub use listing::list_objects;
pub use partitions::{glaisher, glaisher_inv, PartitionConstraints, Partitions};
pub use random::random_object;
pub use words::{
    coollex_ksubsets, gray_subsets, next_permutation_lex, rank_gray, signature, unrank_gray, BinaryWord, CoolLex,
    GrayCode,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EnumError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty: class `{class}` has no objects of size {n}")]
    Empty { class: String, n: usize },
    #[error("malformed permutation")]
    MalformedPermutation,
    #[error("k = {k} exceeds n = {n}")]
    KTooLarge { n: usize, k: usize },
    #[error("rank {rank} out of range for length {n}")]
    RankOutOfRange { n: usize, rank: String },
    #[error("malformed binary word `{0}`")]
    MalformedWord(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
}

/// A structure built by a specification. Labeled atoms carry their label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "node", rename_all = "snake_case"))]
pub enum CombObject {
    Epsilon,
    /// `name` is the atom class, `Z` unless the atom is a named class.
    Atom {
        name: String,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        label: Option<usize>,
    },
    Marker {
        name: String,
    },
    Tuple {
        children: Vec<CombObject>,
    },
    Seq {
        children: Vec<CombObject>,
    },
    Set {
        children: Vec<CombObject>,
    },
    Cycle {
        children: Vec<CombObject>,
    },
}

impl CombObject {
    pub fn atom() -> Self {
        Self::named_atom("Z", None)
    }

    pub fn labeled_atom(label: usize) -> Self {
        Self::named_atom("Z", Some(label))
    }

    pub fn named_atom(name: &str, label: Option<usize>) -> Self {
        CombObject::Atom { name: name.into(), label }
    }

    pub fn children(&self) -> &[CombObject] {
        match self {
            CombObject::Tuple { children }
            | CombObject::Seq { children }
            | CombObject::Set { children }
            | CombObject::Cycle { children } => children,
            _ => &[],
        }
    }

    fn children_mut(&mut self) -> Option<&mut Vec<CombObject>> {
        match self {
            CombObject::Tuple { children }
            | CombObject::Seq { children }
            | CombObject::Set { children }
            | CombObject::Cycle { children } => Some(children),
            _ => None,
        }
    }

    /// Number of atoms.
    pub fn size(&self) -> usize {
        match self {
            CombObject::Atom { .. } => 1,
            _ => self.children().iter().map(CombObject::size).sum(),
        }
    }

    /// Number of marker nodes named `name`.
    pub fn marker_count(&self, name: &str) -> usize {
        match self {
            CombObject::Marker { name: m } => usize::from(m == name),
            _ => self.children().iter().map(|c| c.marker_count(name)).sum(),
        }
    }

    /// Atom labels in depth-first order.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<usize>) {
        match self {
            CombObject::Atom { label: Some(l), .. } => out.push(*l),
            _ => self.children().iter().for_each(|c| c.collect_labels(out)),
        }
    }

    pub fn min_label(&self) -> Option<usize> {
        match self {
            CombObject::Atom { label, .. } => *label,
            _ => self.children().iter().filter_map(CombObject::min_label).min(),
        }
    }

    /// Replace label `i` by `map[i - 1]`.
    pub fn relabel(&self, map: &[usize]) -> CombObject {
        let mut o = self.clone();
        o.relabel_in_place(map);
        o
    }

    fn relabel_in_place(&mut self, map: &[usize]) {
        if let CombObject::Atom { label: Some(l), .. } = self {
            *l = map[*l - 1];
        } else if let Some(ch) = self.children_mut() {
            ch.iter_mut().for_each(|c| c.relabel_in_place(map));
        }
    }

    /// Replace every atom labeled `i` by `blocks[i - 1]`.
    pub(crate) fn substitute(&self, blocks: &[CombObject]) -> CombObject {
        match self {
            CombObject::Atom { label: Some(l), .. } => blocks[*l - 1].clone(),
            CombObject::Tuple { children } => {
                CombObject::Tuple { children: children.iter().map(|c| c.substitute(blocks)).collect() }
            }
            CombObject::Seq { children } => {
                CombObject::Seq { children: children.iter().map(|c| c.substitute(blocks)).collect() }
            }
            CombObject::Set { children } => {
                CombObject::Set { children: children.iter().map(|c| c.substitute(blocks)).collect() }
            }
            CombObject::Cycle { children } => {
                CombObject::Cycle { children: children.iter().map(|c| c.substitute(blocks)).collect() }
            }
            o => o.clone(),
        }
    }
}

/// Compact bracket notation: the class name or the label for atoms, `e` for the empty
/// object, `(..)` tuples, `[..]` sequences, `{..}` sets, `<..>` cycles.
impl fmt::Display for CombObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, open: char, close: char, xs: &[CombObject]) -> fmt::Result {
            write!(f, "{open}")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "{close}")
        }
        match self {
            CombObject::Epsilon => f.write_str("e"),
            CombObject::Atom { name, label: None } => f.write_str(name),
            CombObject::Atom { label: Some(l), .. } => write!(f, "{l}"),
            CombObject::Marker { name } => f.write_str(name),
            CombObject::Tuple { children } => list(f, '(', ')', children),
            CombObject::Seq { children } => list(f, '[', ']', children),
            CombObject::Set { children } => list(f, '{', '}', children),
            CombObject::Cycle { children } => list(f, '<', '>', children),
        }
    }
}

/// Canonical set: sorted by least label when labeled, by term order otherwise.
pub(crate) fn canonical_set(mut children: Vec<CombObject>, labeled: bool) -> CombObject {
    if labeled {
        children.sort_by_key(CombObject::min_label);
    } else {
        children.sort();
    }
    CombObject::Set { children }
}

/// Canonical cycle: rotated to start at the least label when labeled, to the
/// lexicographically least rotation otherwise.
pub(crate) fn canonical_cycle(children: Vec<CombObject>, labeled: bool) -> CombObject {
    let k = children.len();
    if k == 0 {
        return CombObject::Cycle { children };
    }
    let start = if labeled {
        (0..k).min_by_key(|&i| children[i].min_label()).unwrap()
    } else {
        (0..k)
            .min_by(|&i, &j| {
                let a = children[i..].iter().chain(&children[..i]);
                let b = children[j..].iter().chain(&children[..j]);
                a.cmp(b)
            })
            .unwrap()
    };
    let mut rotated = children;
    rotated.rotate_left(start);
    CombObject::Cycle { children: rotated }
}
