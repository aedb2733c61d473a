//! Well-definedness: finite valuations, no size-0 components, no
//! recursion that can stay at the same size.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{expr_valuation, valuation, Construct, Mode, Restriction, SpecExpr, Specification, Val};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ViolationKind {
    InfiniteValuation,
    ZeroSizeComponent,
    UnguardedRecursion,
    UnsupportedInMode,
    SubstInnerZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub class: String,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.class, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WellDefinedReport {
    pub violations: Vec<Violation>,
}

impl WellDefinedReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for WellDefinedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn check_well_defined(spec: &Specification) -> WellDefinedReport {
    let vals = valuation(spec);
    let mut report = WellDefinedReport::default();
    let mut push = |class: &str, kind, message: String| {
        report.violations.push(Violation { class: class.into(), kind, message });
    };

    for (name, rhs) in spec.equations() {
        if vals[name].is_none() {
            push(
                name,
                ViolationKind::InfiniteValuation,
                format!("class `{name}` has infinite valuation (no finite object)"),
            );
        }
        let mut local = Vec::new();
        rhs.walk(&mut |e| match e {
            SpecExpr::Construct { op, arg, .. } => {
                if expr_valuation(arg, &vals) == Some(0) {
                    local.push((
                        ViolationKind::ZeroSizeComponent,
                        format!("{}({arg}) is over a class with an object of size 0", op.keyword()),
                    ));
                }
                match (op, spec.mode()) {
                    (Construct::PowerSet, Mode::Labeled) => local.push((
                        ViolationKind::UnsupportedInMode,
                        String::from("PowerSet is not available in labeled mode (use Set: labeled components are always distinct)"),
                    )),
                    (Construct::MultiSet, Mode::Labeled) => local.push((
                        ViolationKind::UnsupportedInMode,
                        String::from("MultiSet is not available in labeled mode (use Set)"),
                    )),
                    _ => {}
                }
            }
            SpecExpr::Subst { inner, .. } => {
                if spec.mode() == Mode::Unlabeled {
                    local.push((ViolationKind::UnsupportedInMode, String::from("Subst is only available in labeled mode")));
                }
                if expr_valuation(inner, &vals).is_none_or(|v| v == 0) {
                    local.push((
                        ViolationKind::SubstInnerZero,
                        format!("Subst inner expression `{inner}` must have valuation at least 1"),
                    ));
                }
            }
            _ => {}
        });
        for (kind, message) in local {
            push(name, kind, message);
        }
    }

    for cycle in unguarded_cycles(spec, &vals) {
        let path = cycle.join(" -> ");
        push(
            &cycle[0],
            ViolationKind::UnguardedRecursion,
            format!("recursion {path} -> {} does not increase size, so counts are not finite", cycle[0]),
        );
    }
    report
}

/// Classes that an object of `e` can contain as a component of the very
/// same size.
fn same_size_refs(e: &SpecExpr, vals: &BTreeMap<String, Val>, out: &mut BTreeSet<String>) {
    match e {
        SpecExpr::ClassRef { name } => {
            out.insert(name.clone());
        }
        SpecExpr::Union { args } => {
            for a in args {
                same_size_refs(a, vals, out);
            }
        }
        SpecExpr::Prod { args } => {
            for (i, a) in args.iter().enumerate() {
                let others_zero = args.iter().enumerate().all(|(j, b)| j == i || expr_valuation(b, vals) == Some(0));
                if others_zero {
                    same_size_refs(a, vals, out);
                }
            }
        }
        SpecExpr::Construct { arg, restriction, .. } => {
            let single = match *restriction {
                Restriction::None => true,
                r => r.allows(1),
            };
            let arg_zero = expr_valuation(arg, vals) == Some(0);
            if single || arg_zero {
                same_size_refs(arg, vals, out);
            }
        }
        SpecExpr::Subst { outer, inner } => {
            same_size_refs(outer, vals, out);
            same_size_refs(inner, vals, out);
        }
        _ => {}
    }
}

/// One representative cycle per strongly connected component of the
/// same-size reference graph (self-loops included).
fn unguarded_cycles(spec: &Specification, vals: &BTreeMap<String, Val>) -> Vec<Vec<String>> {
    let names: Vec<String> = spec.class_names().map(String::from).collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let edges: Vec<Vec<usize>> = spec
        .equations()
        .iter()
        .map(|(_, rhs)| {
            let mut refs = BTreeSet::new();
            same_size_refs(rhs, vals, &mut refs);
            refs.iter().filter_map(|r| index.get(r.as_str()).copied()).collect()
        })
        .collect();
    // Only classes with finite valuation can cause infinite counts here;
    // empty classes are already reported.
    let live = |i: usize| vals[&names[i]].is_some();

    let mut reported = BTreeSet::new();
    let mut cycles = Vec::new();
    for start in 0..names.len() {
        if !live(start) || reported.contains(&start) {
            continue;
        }
        // Depth-first search for a path back to `start`.
        let mut stack = alloc::vec![(start, 0usize)];
        let mut path = alloc::vec![start];
        let mut visited = BTreeSet::new();
        visited.insert(start);
        let mut found = None;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < edges[node].len() {
                let succ = edges[node][*next];
                *next += 1;
                if !live(succ) {
                    continue;
                }
                if succ == start {
                    found = Some(path.clone());
                    break;
                }
                if visited.insert(succ) {
                    stack.push((succ, 0));
                    path.push(succ);
                }
            } else {
                stack.pop();
                path.pop();
            }
        }
        if let Some(cycle) = found {
            for &c in &cycle {
                reported.insert(c);
            }
            cycles.push(cycle.into_iter().map(|i| names[i].clone()).collect());
        }
    }
    cycles
}
