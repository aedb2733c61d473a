//! Generating-function equations over `{1, z, +, ×, Q, L, E, E>=k, pow}`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::CountError;
use crate::arith::factorial;
use crate::numeric::fmt_ratio;
use crate::spec::{check_well_defined, Construct, Mode, Restriction, SpecExpr, Specification};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PolyaOp {
    MultiSet,
    PowerSet,
    Cycle,
}

impl PolyaOp {
    fn name(&self) -> &'static str {
        match self {
            PolyaOp::MultiSet => "MSet",
            PolyaOp::PowerSet => "PSet",
            PolyaOp::Cycle => "Cyc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GfExpr {
    One,
    Z,
    Marker(String),
    Const(BigRational),
    /// Generating function of a named class, `T(z)`.
    Class(String),
    Add(Vec<GfExpr>),
    Mul(Vec<GfExpr>),
    Pow(Box<GfExpr>, usize),
    /// `1/(1-x)`
    Q(Box<GfExpr>),
    /// `Σ_{j>=min} x^j/j`; `min = 1` is `log 1/(1-x)`.
    L {
        arg: Box<GfExpr>,
        min: usize,
    },
    /// `Σ_{j>=min} x^j/j!`; `min = 0` is `exp(x)`.
    E {
        arg: Box<GfExpr>,
        min: usize,
    },
    /// Unlabeled multiset, powerset or cycle: not expressible with the
    /// elementary operators, kept as a tagged node.
    Polya {
        op: PolyaOp,
        arg: Box<GfExpr>,
        restriction: Restriction,
    },
    /// `outer` with `z` replaced by `inner`.
    Subst {
        outer: Box<GfExpr>,
        inner: Box<GfExpr>,
    },
}

impl GfExpr {
    pub fn add(parts: Vec<GfExpr>) -> GfExpr {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                GfExpr::Add(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => GfExpr::Const(BigRational::from_integer(BigInt::from(0))),
            1 => flat.pop().unwrap(),
            _ => GfExpr::Add(flat),
        }
    }

    pub fn mul(parts: Vec<GfExpr>) -> GfExpr {
        let mut flat: Vec<GfExpr> = Vec::new();
        for p in parts {
            let items = match p {
                GfExpr::Mul(inner) => inner,
                GfExpr::One => continue,
                other => vec![other],
            };
            for item in items {
                // Merge repeated factors into powers.
                let (base, e) = match item {
                    GfExpr::Pow(b, e) => (*b, e),
                    other => (other, 1),
                };
                match flat.last_mut() {
                    Some(GfExpr::Pow(b, k)) if **b == base => *k += e,
                    Some(last) if *last == base => *last = GfExpr::Pow(Box::new(base), e + 1),
                    _ => flat.push(if e == 1 { base } else { GfExpr::Pow(Box::new(base), e) }),
                }
            }
        }
        match flat.len() {
            0 => GfExpr::One,
            1 => flat.pop().unwrap(),
            _ => GfExpr::Mul(flat),
        }
    }

    pub fn pow(base: GfExpr, k: usize) -> GfExpr {
        match k {
            0 => GfExpr::One,
            1 => base,
            _ => GfExpr::Pow(Box::new(base), k),
        }
    }

    pub fn q(arg: GfExpr) -> GfExpr {
        GfExpr::Q(Box::new(arg))
    }

    pub fn log(arg: GfExpr) -> GfExpr {
        GfExpr::L { arg: Box::new(arg), min: 1 }
    }

    pub fn exp(arg: GfExpr) -> GfExpr {
        GfExpr::E { arg: Box::new(arg), min: 0 }
    }

    fn constant(c: BigRational) -> GfExpr {
        if c.is_one() {
            GfExpr::One
        } else {
            GfExpr::Const(c)
        }
    }

    /// Replace class references using `f`.
    pub fn map_classes(&self, f: &dyn Fn(&str) -> GfExpr) -> GfExpr {
        let b = |e: &GfExpr| Box::new(e.map_classes(f));
        match self {
            GfExpr::Class(name) => f(name),
            GfExpr::Add(ps) => GfExpr::add(ps.iter().map(|p| p.map_classes(f)).collect()),
            GfExpr::Mul(ps) => GfExpr::mul(ps.iter().map(|p| p.map_classes(f)).collect()),
            GfExpr::Pow(x, k) => GfExpr::pow(x.map_classes(f), *k),
            GfExpr::Q(x) => GfExpr::Q(b(x)),
            GfExpr::L { arg, min } => GfExpr::L { arg: b(arg), min: *min },
            GfExpr::E { arg, min } => GfExpr::E { arg: b(arg), min: *min },
            GfExpr::Polya { op, arg, restriction } => GfExpr::Polya { op: *op, arg: b(arg), restriction: *restriction },
            GfExpr::Subst { outer, inner } => GfExpr::Subst { outer: b(outer), inner: b(inner) },
            leaf => leaf.clone(),
        }
    }

    pub fn classes(&self, out: &mut BTreeSet<String>) {
        match self {
            GfExpr::Class(name) => {
                out.insert(name.clone());
            }
            GfExpr::Add(ps) | GfExpr::Mul(ps) => ps.iter().for_each(|p| p.classes(out)),
            GfExpr::Pow(x, _) | GfExpr::Q(x) => x.classes(out),
            GfExpr::L { arg, .. } | GfExpr::E { arg, .. } | GfExpr::Polya { arg, .. } => arg.classes(out),
            GfExpr::Subst { outer, inner } => {
                outer.classes(out);
                inner.classes(out);
            }
            _ => {}
        }
    }

    fn prec(&self) -> u8 {
        match self {
            GfExpr::Add(_) => 0,
            GfExpr::Mul(_) => 1,
            GfExpr::Const(c) if !c.denom().is_one() || c < &BigRational::from_integer(BigInt::from(0)) => 1,
            GfExpr::Pow(..) => 2,
            _ => 3,
        }
    }

    /// Operator form, e.g. `z*Q(T(z))`.
    pub fn to_operator_string(&self) -> String {
        self.render(false)
    }

    /// Conventional notation, e.g. `z/(1-T(z))`.
    pub fn to_ascii_string(&self) -> String {
        self.render(true)
    }

    fn wrap(&self, min_prec: u8, ascii: bool) -> String {
        let s = self.render(ascii);
        if self.prec() < min_prec || (ascii && self.ascii_compound()) && min_prec > 1 {
            format!("({s})")
        } else {
            s
        }
    }

    /// In conventional notation some unary forms print as sums or quotients.
    fn ascii_compound(&self) -> bool {
        matches!(self, GfExpr::Q(_) | GfExpr::E { min: 1.., .. } | GfExpr::L { min: 2.., .. })
            || matches!(self, GfExpr::Mul(ps) if ps.iter().any(|p| matches!(p, GfExpr::Q(_))))
    }

    fn render(&self, ascii: bool) -> String {
        match self {
            GfExpr::One => "1".into(),
            GfExpr::Z => "z".into(),
            GfExpr::Marker(name) => name.clone(),
            GfExpr::Const(c) => fmt_ratio(c),
            GfExpr::Class(name) => format!("{name}(z)"),
            GfExpr::Add(ps) => {
                let mut out = String::new();
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" + ");
                    }
                    out.push_str(&p.wrap(1, ascii));
                }
                out
            }
            GfExpr::Mul(ps) => {
                if ascii {
                    let (dens, nums): (Vec<&GfExpr>, Vec<&GfExpr>) = ps.iter().partition(|p| matches!(p, GfExpr::Q(_)));
                    if !dens.is_empty() {
                        let num = if nums.is_empty() {
                            String::from("1")
                        } else {
                            nums.iter().map(|p| p.wrap(2, ascii)).collect::<Vec<_>>().join("*")
                        };
                        let den = dens
                            .iter()
                            .map(|d| match d {
                                GfExpr::Q(x) => format!("(1-{})", x.wrap(2, ascii)),
                                _ => unreachable!(),
                            })
                            .collect::<Vec<_>>()
                            .join("*");
                        return format!("{num}/{den}");
                    }
                }
                ps.iter().map(|p| p.wrap(2, ascii)).collect::<Vec<_>>().join("*")
            }
            GfExpr::Pow(b, k) => format!("{}^{k}", b.wrap(3, ascii)),
            GfExpr::Q(x) if ascii => format!("1/(1-{})", x.wrap(2, ascii)),
            GfExpr::Q(x) => format!("Q({})", x.render(ascii)),
            GfExpr::L { arg, min } if ascii => {
                let a = arg.render(ascii);
                let mut s = format!("log(1/(1-{}))", arg.wrap(2, ascii));
                for j in 1..*min {
                    s.push_str(&format!(" - {}", power_term(&a, arg, j, &BigInt::from(j))));
                }
                s
            }
            GfExpr::L { arg, min: 1 } => format!("L({})", arg.render(ascii)),
            GfExpr::L { arg, min } => format!("L>={min}({})", arg.render(ascii)),
            GfExpr::E { arg, min } if ascii => {
                let a = arg.render(ascii);
                let mut s = format!("exp({a})");
                for j in 0..*min {
                    if j == 0 {
                        s.push_str(" - 1");
                    } else {
                        s.push_str(&format!(" - {}", power_term(&a, arg, j, &BigInt::from(factorial(j)))));
                    }
                }
                s
            }
            GfExpr::E { arg, min: 0 } => format!("E({})", arg.render(ascii)),
            GfExpr::E { arg, min: 1 } => format!("E1({})", arg.render(ascii)),
            GfExpr::E { arg, min } => format!("E>={min}({})", arg.render(ascii)),
            GfExpr::Polya { op, arg, restriction } => match restriction {
                Restriction::None => format!("{}({})", op.name(), arg.render(ascii)),
                r => format!("{}[{r}]({})", op.name(), arg.render(ascii)),
            },
            GfExpr::Subst { outer, inner } => format!("Subst({}, {})", outer.render(ascii), inner.render(ascii)),
        }
    }
}

fn power_term(rendered: &str, arg: &GfExpr, j: usize, den: &BigInt) -> String {
    let base = if j == 1 {
        if arg.prec() < 2 {
            format!("({rendered})")
        } else {
            String::from(rendered)
        }
    } else {
        format!("{}^{j}", if arg.prec() < 3 { format!("({rendered})") } else { String::from(rendered) })
    };
    if den.is_one() {
        base
    } else {
        format!("{base}/{den}")
    }
}

impl fmt::Display for GfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_operator_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfEquation {
    pub class: String,
    pub rhs: GfExpr,
}

impl GfEquation {
    pub fn to_operator_string(&self) -> String {
        format!("{}(z) = {}", self.class, self.rhs.to_operator_string())
    }

    pub fn to_ascii_string(&self) -> String {
        format!("{}(z) = {}", self.class, self.rhs.to_ascii_string())
    }
}

impl fmt::Display for GfEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_operator_string())
    }
}

fn rat(n: i64, d: &BigInt) -> BigRational {
    BigRational::new(BigInt::from(n), d.clone())
}

struct Emitter<'a> {
    spec: &'a Specification,
}

impl Emitter<'_> {
    fn expr(&self, e: &SpecExpr) -> GfExpr {
        match e {
            SpecExpr::Epsilon => GfExpr::One,
            SpecExpr::Atom => GfExpr::Z,
            SpecExpr::Marker { name } => GfExpr::Marker(name.clone()),
            SpecExpr::ClassRef { name } => match self.spec.rhs(name) {
                // Trivial classes read better inlined.
                Some(SpecExpr::Atom) => GfExpr::Z,
                Some(SpecExpr::Epsilon) => GfExpr::One,
                Some(SpecExpr::Marker { name }) => GfExpr::Marker(name.clone()),
                _ => GfExpr::Class(name.clone()),
            },
            SpecExpr::Union { args } => GfExpr::add(args.iter().map(|a| self.expr(a)).collect()),
            SpecExpr::Prod { args } => GfExpr::mul(args.iter().map(|a| self.expr(a)).collect()),
            SpecExpr::Subst { outer, inner } => {
                GfExpr::Subst { outer: Box::new(self.expr(outer)), inner: Box::new(self.expr(inner)) }
            }
            SpecExpr::Construct { op, arg, restriction } => {
                let a = self.expr(arg);
                self.construct(op.resolve(self.spec.mode()), a, *restriction)
            }
        }
    }

    fn construct(&self, op: Construct, a: GfExpr, r: Restriction) -> GfExpr {
        let labeled = self.spec.mode() == Mode::Labeled;
        // Σ_{j in range} c(j) a^j
        let finite = |range: core::ops::RangeInclusive<usize>, c: &dyn Fn(usize) -> BigRational| {
            GfExpr::add(range.map(|j| GfExpr::mul(vec![GfExpr::constant(c(j)), GfExpr::pow(a.clone(), j)])).collect())
        };
        let one = |_: usize| BigRational::one();
        let inv_fact = |j: usize| rat(1, &BigInt::from(factorial(j)));
        let inv = |j: usize| rat(1, &BigInt::from(j));
        match op {
            Construct::Seq => match r {
                Restriction::None => GfExpr::q(a),
                Restriction::Eq(k) => GfExpr::pow(a, k),
                Restriction::Ge(k) => GfExpr::mul(vec![GfExpr::pow(a.clone(), k), GfExpr::q(a)]),
                Restriction::Le(k) => finite(0..=k, &one),
            },
            Construct::Set if labeled => match r {
                Restriction::None => GfExpr::exp(a),
                Restriction::Ge(k) => GfExpr::E { arg: Box::new(a), min: k },
                Restriction::Eq(k) => finite(k..=k, &inv_fact),
                Restriction::Le(k) => finite(0..=k, &inv_fact),
            },
            Construct::Cycle if labeled => match r {
                Restriction::None | Restriction::Ge(0) => GfExpr::log(a),
                Restriction::Ge(k) => GfExpr::L { arg: Box::new(a), min: k },
                Restriction::Eq(0) | Restriction::Le(0) => GfExpr::Const(BigRational::from_integer(BigInt::from(0))),
                Restriction::Eq(k) => finite(k..=k, &inv),
                Restriction::Le(k) => finite(1..=k, &inv),
            },
            Construct::Set | Construct::MultiSet => {
                GfExpr::Polya { op: PolyaOp::MultiSet, arg: Box::new(a), restriction: r }
            }
            Construct::PowerSet => GfExpr::Polya { op: PolyaOp::PowerSet, arg: Box::new(a), restriction: r },
            Construct::Cycle => GfExpr::Polya { op: PolyaOp::Cycle, arg: Box::new(a), restriction: r },
        }
    }
}

/// One equation per class, in declaration order.
pub fn gf_equations(spec: &Specification) -> Result<Vec<GfEquation>, CountError> {
    let report = check_well_defined(spec);
    if !report.is_ok() {
        return Err(CountError::NotWellDefined(report));
    }
    let em = Emitter { spec };
    Ok(spec.equations().iter().map(|(name, rhs)| GfEquation { class: name.clone(), rhs: em.expr(rhs) }).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solved {
    Explicit(GfExpr),
    /// The class takes part in, or depends on, a recursive definition.
    NotExplicit,
}

/// Closed forms by substitution for every class outside the reach of a
/// dependency cycle.
pub fn gf_solve_acyclic(spec: &Specification) -> Result<Vec<(String, Solved)>, CountError> {
    let eqs = gf_equations(spec)?;
    let deps: BTreeMap<String, BTreeSet<String>> = eqs
        .iter()
        .map(|eq| {
            let mut s = BTreeSet::new();
            eq.rhs.classes(&mut s);
            (eq.class.clone(), s)
        })
        .collect();
    let rhs: BTreeMap<&str, &GfExpr> = eqs.iter().map(|eq| (eq.class.as_str(), &eq.rhs)).collect();

    // A class is explicit iff a depth-first walk from it never revisits a
    // class on the current path.
    fn explicit(
        c: &str,
        deps: &BTreeMap<String, BTreeSet<String>>,
        path: &mut Vec<String>,
        memo: &mut BTreeMap<String, bool>,
    ) -> bool {
        if let Some(&r) = memo.get(c) {
            return r;
        }
        if path.iter().any(|p| p == c) {
            return false;
        }
        path.push(c.into());
        let ok = deps[c].iter().all(|d| explicit(d, deps, path, memo));
        path.pop();
        memo.insert(c.into(), ok);
        ok
    }

    fn substitute(e: &GfExpr, rhs: &BTreeMap<&str, &GfExpr>) -> GfExpr {
        e.map_classes(&|name| substitute(rhs[name], rhs))
    }

    let mut memo = BTreeMap::new();
    Ok(eqs
        .iter()
        .map(|eq| {
            let solved = if explicit(&eq.class, &deps, &mut Vec::new(), &mut memo) {
                Solved::Explicit(substitute(&eq.rhs, &rhs))
            } else {
                Solved::NotExplicit
            };
            (eq.class.clone(), solved)
        })
        .collect())
}
