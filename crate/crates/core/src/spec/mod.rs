//! Combinatorial specifications: AST, parser, printer, valuations and the
//! well-definedness check.

mod check;
mod parse;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use check::{check_well_defined, Violation, ViolationKind, WellDefinedReport};
pub use parse::parse_spec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Labeled,
    #[default]
    Unlabeled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Labeled => "labeled",
            Mode::Unlabeled => "unlabeled",
        })
    }
}

/// Cardinality restriction on the number of components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Restriction {
    #[default]
    None,
    Eq(usize),
    Le(usize),
    Ge(usize),
}

impl Restriction {
    pub fn allows(&self, k: usize) -> bool {
        match *self {
            Restriction::None => true,
            Restriction::Eq(m) => k == m,
            Restriction::Le(m) => k <= m,
            Restriction::Ge(m) => k >= m,
        }
    }

    /// Smallest admissible component count, if any.
    pub fn min_count(&self) -> usize {
        match *self {
            Restriction::Eq(m) | Restriction::Ge(m) => m,
            _ => 0,
        }
    }

    /// Largest admissible component count; `None` when unbounded.
    pub fn max_count(&self) -> Option<usize> {
        match *self {
            Restriction::Eq(m) | Restriction::Le(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Restriction::None => Ok(()),
            Restriction::Eq(k) => write!(f, "card = {k}"),
            Restriction::Le(k) => write!(f, "card <= {k}"),
            Restriction::Ge(k) => write!(f, "card >= {k}"),
        }
    }
}

/// The component-collecting constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Construct {
    Seq,
    Set,
    MultiSet,
    PowerSet,
    Cycle,
}

impl Construct {
    pub fn keyword(&self) -> &'static str {
        match self {
            Construct::Seq => "Seq",
            Construct::Set => "Set",
            Construct::MultiSet => "MultiSet",
            Construct::PowerSet => "PowerSet",
            Construct::Cycle => "Cycle",
        }
    }

    /// The construction actually used under `mode`: an unlabeled `Set` is a
    /// multiset.
    pub fn resolve(self, mode: Mode) -> Construct {
        match (self, mode) {
            (Construct::Set, Mode::Unlabeled) => Construct::MultiSet,
            (c, _) => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum SpecExpr {
    Epsilon,
    Atom,
    Marker { name: String },
    ClassRef { name: String },
    Union { args: Vec<SpecExpr> },
    Prod { args: Vec<SpecExpr> },
    Construct { op: Construct, arg: alloc::boxed::Box<SpecExpr>, restriction: Restriction },
    Subst { outer: alloc::boxed::Box<SpecExpr>, inner: alloc::boxed::Box<SpecExpr> },
}

impl SpecExpr {
    pub fn class(name: &str) -> Self {
        SpecExpr::ClassRef { name: name.into() }
    }

    pub fn marker(name: &str) -> Self {
        SpecExpr::Marker { name: name.into() }
    }

    pub fn union(args: Vec<SpecExpr>) -> Self {
        SpecExpr::Union { args }
    }

    pub fn prod(args: Vec<SpecExpr>) -> Self {
        SpecExpr::Prod { args }
    }

    pub fn construct(op: Construct, arg: SpecExpr, restriction: Restriction) -> Self {
        SpecExpr::Construct { op, arg: arg.into(), restriction }
    }

    pub fn seq(arg: SpecExpr) -> Self {
        Self::construct(Construct::Seq, arg, Restriction::None)
    }

    pub fn subst(outer: SpecExpr, inner: SpecExpr) -> Self {
        SpecExpr::Subst { outer: outer.into(), inner: inner.into() }
    }

    /// Visit this node and all descendants in pre-order.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a SpecExpr)) {
        f(self);
        match self {
            SpecExpr::Union { args } | SpecExpr::Prod { args } => {
                for a in args {
                    a.walk(f);
                }
            }
            SpecExpr::Construct { arg, .. } => arg.walk(f),
            SpecExpr::Subst { outer, inner } => {
                outer.walk(f);
                inner.walk(f);
            }
            _ => {}
        }
    }
}

impl fmt::Display for SpecExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, head: &str, args: &[SpecExpr]) -> fmt::Result {
            write!(f, "{head}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")
        }
        match self {
            SpecExpr::Epsilon => f.write_str("Epsilon"),
            SpecExpr::Atom => f.write_str("Atom"),
            SpecExpr::Marker { name } if name == DEFAULT_MARKER => f.write_str("Marker"),
            SpecExpr::Marker { name } => write!(f, "Marker({name})"),
            SpecExpr::ClassRef { name } => f.write_str(name),
            SpecExpr::Union { args } => list(f, "Union", args),
            SpecExpr::Prod { args } => list(f, "Prod", args),
            SpecExpr::Construct { op, arg, restriction } => match restriction {
                Restriction::None => write!(f, "{}({arg})", op.keyword()),
                r => write!(f, "{}({arg}, {r})", op.keyword()),
            },
            SpecExpr::Subst { outer, inner } => write!(f, "Subst({outer}, {inner})"),
        }
    }
}

pub const DEFAULT_MARKER: &str = "u";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("undeclared class `{name}` referenced in the equation of `{in_class}`")]
    Undeclared { name: String, in_class: String },
    #[error("`{construct}` needs at least {min} arguments, got {got}")]
    Arity { construct: String, min: usize, got: usize },
    #[error("class `{name}` is defined more than once")]
    Duplicate { name: String },
    #[error("class name `{name}` is a reserved word")]
    Reserved { name: String },
    #[error("specification has no equations")]
    Empty,
}

/// A system of named class equations.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Specification {
    mode: Mode,
    equations: Vec<(String, SpecExpr)>,
    markers: Vec<String>,
}

pub(crate) const KEYWORDS: &[&str] = &[
    "Union",
    "Prod",
    "Seq",
    "Set",
    "MultiSet",
    "PowerSet",
    "Cycle",
    "Subst",
    "Atom",
    "Epsilon",
    "Marker",
    "card",
    "labeled",
    "unlabeled",
];

impl Specification {
    /// Build and validate a specification from equations in declaration
    /// order.
    pub fn new(mode: Mode, equations: Vec<(String, SpecExpr)>) -> Result<Self, SpecError> {
        if equations.is_empty() {
            return Err(SpecError::Empty);
        }
        let mut seen = BTreeMap::new();
        for (name, _) in &equations {
            if KEYWORDS.contains(&name.as_str()) {
                return Err(SpecError::Reserved { name: name.clone() });
            }
            if seen.insert(name.clone(), ()).is_some() {
                return Err(SpecError::Duplicate { name: name.clone() });
            }
        }
        let mut markers: Vec<String> = Vec::new();
        for (class, rhs) in &equations {
            let mut err = None;
            rhs.walk(&mut |e| match e {
                SpecExpr::ClassRef { name } if !seen.contains_key(name) && err.is_none() => {
                    err = Some(SpecError::Undeclared { name: name.clone(), in_class: class.clone() });
                }
                SpecExpr::Union { args } | SpecExpr::Prod { args } if args.len() < 2 && err.is_none() => {
                    let construct = if matches!(e, SpecExpr::Union { .. }) { "Union" } else { "Prod" };
                    err = Some(SpecError::Arity { construct: construct.into(), min: 2, got: args.len() });
                }
                SpecExpr::Marker { name } if !markers.contains(name) => markers.push(name.clone()),
                _ => {}
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(Specification { mode, equations, markers })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn equations(&self) -> &[(String, SpecExpr)] {
        &self.equations
    }

    pub fn markers(&self) -> &[String] {
        &self.markers
    }

    pub fn class_names(&self) -> impl Iterator<Item = &str> {
        self.equations.iter().map(|(n, _)| n.as_str())
    }

    pub fn index_of(&self, class: &str) -> Option<usize> {
        self.equations.iter().position(|(n, _)| n == class)
    }

    pub fn rhs(&self, class: &str) -> Option<&SpecExpr> {
        self.equations.iter().find(|(n, _)| n == class).map(|(_, e)| e)
    }

    /// First declared class, the default target of most commands.
    pub fn start_class(&self) -> &str {
        &self.equations[0].0
    }

    /// Canonical text; parsing it yields the same specification.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.mode);
        for (name, rhs) in &self.equations {
            out.push_str(&format!("{name} = {rhs}\n"));
        }
        out
    }
}

impl fmt::Display for Specification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Minimum object size; `None` stands for an empty class (infinite valuation).
pub type Val = Option<usize>;

fn val_add(a: Val, b: Val) -> Val {
    Some(a? + b?)
}

fn val_min(a: Val, b: Val) -> Val {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn val_scale(k: usize, v: Val) -> Val {
    if k == 0 {
        Some(0)
    } else {
        v.map(|x| x * k)
    }
}

/// Valuation of a subexpression given the valuations of all classes.
pub fn expr_valuation(e: &SpecExpr, classes: &BTreeMap<String, Val>) -> Val {
    match e {
        SpecExpr::Epsilon | SpecExpr::Marker { .. } => Some(0),
        SpecExpr::Atom => Some(1),
        SpecExpr::ClassRef { name } => classes.get(name).copied().flatten(),
        SpecExpr::Union { args } => args.iter().map(|a| expr_valuation(a, classes)).fold(None, val_min),
        SpecExpr::Prod { args } => args.iter().map(|a| expr_valuation(a, classes)).fold(Some(0), val_add),
        SpecExpr::Construct { op, arg, restriction } => {
            let v = expr_valuation(arg, classes);
            match op {
                Construct::Cycle => match *restriction {
                    Restriction::None | Restriction::Ge(0) => v,
                    Restriction::Eq(0) | Restriction::Le(0) => None,
                    Restriction::Le(_) => v,
                    Restriction::Eq(k) | Restriction::Ge(k) => val_scale(k, v),
                },
                _ => val_scale(restriction.min_count(), v),
            }
        }
        SpecExpr::Subst { outer, inner } => {
            let vo = expr_valuation(outer, classes);
            let vi = expr_valuation(inner, classes);
            match vo {
                Some(0) => Some(0),
                Some(k) => vi.map(|x| x * k),
                None => None,
            }
        }
    }
}

/// Valuations of all classes: the fixed point reached by iterating the
/// transfer rules downward from "everything empty".
pub fn valuation(spec: &Specification) -> BTreeMap<String, Val> {
    let mut vals: BTreeMap<String, Val> = spec.class_names().map(|n| (String::from(n), None)).collect();
    loop {
        let mut changed = false;
        for (name, rhs) in spec.equations() {
            let v = expr_valuation(rhs, &vals);
            if vals[name] != v {
                vals.insert(name.clone(), v);
                changed = true;
            }
        }
        if !changed {
            return vals;
        }
    }
}

#[cfg(test)]
mod tests;
