//! Argument parsing and command dispatch for the `combi` binary.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use combi_core::asymptotics::{
    classify, equivalent, h_admissible_check, hayman_estimate, parse_eexpr, radius, AsymptError,
};
use combi_core::counting::{count_bivariate_for, count_table, gf_equations, gf_solve_acyclic, CountError, Solved};
use combi_core::enumerate::{
    coollex_ksubsets, glaisher, glaisher_inv, gray_subsets, list_objects, random_object, rank_gray, unrank_gray,
    BinaryWord, EnumError, PartitionConstraints, Partitions,
};
use combi_core::polya::{
    burnside_count, cycle_index_closed, cycle_index_group, induced_ksubset_group, orbit_inventory,
    orbit_representatives, standard_group, word_of, ActionTable, GroupKind, PolyaError,
};
use combi_core::spec::{parse_spec, SpecError, Specification};
use combi_core::species::{cycle_index_series, parse_species, structures, SpeciesError};
use combi_core::QPoly;
use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::store::{make_record, search_initial_values, search_keyword, verify, RecordError, RecordStore};

#[derive(Parser, Debug)]
#[command(name = "combi", version, about = "Counting, listing and analysing combinatorial classes")]
pub struct Cli {
    /// Print JSON; big integers are decimal strings.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest size counted or expanded.
    #[arg(long, global = true, default_value_t = 10)]
    max_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Specification source text.
    #[arg(long)]
    spec: Option<String>,
    /// File holding the specification.
    #[arg(long, conflicts_with = "spec")]
    spec_file: Option<PathBuf>,
    /// Target class, the first declared one by default.
    #[arg(long)]
    class: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counting sequences for the classes of a specification.
    Count {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also track the number of occurrences of this marker.
        #[arg(long)]
        marker: Option<String>,
        /// Largest marker count tracked.
        #[arg(long, default_value_t = 8)]
        max_marker: usize,
    },
    /// Generating function equations.
    Gf {
        #[command(flatten)]
        spec: SpecArgs,
        /// Substitute to closed forms where the system is not recursive.
        #[arg(long)]
        solve: bool,
    },
    /// Every object of one size.
    List {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        size: usize,
    },
    /// Uniform random objects of one size.
    Rand {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Position of a binary word in the reflected Gray code.
    Rank { word: String },
    /// Binary word at a position of the reflected Gray code.
    Unrank {
        #[arg(long)]
        bits: usize,
        rank: String,
    },
    /// Reflected Gray code of length n.
    Graycode {
        n: usize,
        /// Print subsets of 1..n instead of bit strings.
        #[arg(long)]
        subsets: bool,
    },
    /// Cool-lex order of the k-subsets of n.
    Coollex { n: usize, k: usize },
    /// Integer partitions of n.
    Partitions {
        n: usize,
        #[arg(long)]
        max_part: Option<usize>,
        #[arg(long)]
        distinct: bool,
        #[arg(long)]
        odd: bool,
        /// Only print the number of partitions.
        #[arg(long, conflicts_with = "random")]
        count: bool,
        /// Print one uniformly random partition.
        #[arg(long)]
        random: bool,
    },
    /// Map distinct parts to odd parts, or back with --inverse.
    Glaisher {
        #[arg(required = true)]
        parts: Vec<usize>,
        #[arg(long)]
        inverse: bool,
    },
    /// Permutation groups, cycle indices and orbit counting.
    Polya {
        #[command(subcommand)]
        cmd: PolyaCmd,
    },
    /// Species series and structures.
    Species {
        #[command(subcommand)]
        cmd: SpeciesCmd,
    },
    /// Singularity and saddle point estimates for an explicit function.
    Asympt {
        #[arg(long)]
        expr: String,
        /// Saddle point estimate of the n-th coefficient.
        #[arg(long)]
        hayman: Option<usize>,
        /// Compare the leading term with the exact n-th coefficient.
        #[arg(long)]
        compare: Option<usize>,
    },
    /// The record store.
    Record {
        #[command(subcommand)]
        cmd: RecordCmd,
    },
}

#[derive(Subcommand, Debug)]
enum PolyaCmd {
    /// Cycle index of a standard group: symmetric, alternating, cyclic, dihedral.
    CycleIndex { kind: String, n: usize },
    /// Orbits of the group on words of length n.
    Orbits {
        kind: String,
        n: usize,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        /// One character per colour.
        #[arg(long)]
        letters: Option<String>,
    },
    /// Orbit inventory with colour weights, `0,1` giving `1 + t`.
    Inventory {
        kind: String,
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        weights: Vec<usize>,
    },
    /// Inventory of the group induced on k-subsets, e.g. graphs for k = 2.
    Induced {
        kind: String,
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        weights: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum SpeciesCmd {
    /// Exponential generating series coefficients.
    Egf {
        #[arg(long)]
        expr: String,
    },
    /// Isomorphism type counts.
    Isotypes {
        #[arg(long)]
        expr: String,
    },
    /// Cycle index series by grade.
    Zindex {
        #[arg(long)]
        expr: String,
    },
    /// Structures on the labels 1..size.
    Structures {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        size: usize,
    },
}

#[derive(Subcommand, Debug)]
enum RecordCmd {
    /// Compute a record and append it to the store.
    Make {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long, default_value = "")]
        description: String,
        #[arg(long)]
        reference: Vec<String>,
    },
    /// Find records by initial values or keyword.
    Search {
        #[arg(long)]
        store: PathBuf,
        /// Values, separated by commas or spaces.
        #[arg(value_delimiter = ',')]
        values: Vec<String>,
        #[arg(long)]
        keyword: Option<String>,
    },
    /// Recompute every record in the store.
    Verify {
        #[arg(long)]
        store: PathBuf,
    },
}

/// Failure classes with their exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Exit code 1: the input is understood but has no valid answer.
    Domain(String),
    /// Exit code 2: the input is malformed.
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) => m,
        }
    }
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        usage(e)
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        match e {
            CountError::UnknownClass(_) | CountError::UnknownMarker(_) => usage(e),
            _ => domain(e),
        }
    }
}

impl From<EnumError> for Failure {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::Count(c) => c.into(),
            EnumError::UnknownClass(_) | EnumError::MalformedWord(_) | EnumError::MalformedPermutation => usage(e),
            _ => domain(e),
        }
    }
}

impl From<PolyaError> for Failure {
    fn from(e: PolyaError) -> Self {
        match e {
            PolyaError::UnknownKind(_) => usage(e),
            _ => domain(e),
        }
    }
}

impl From<SpeciesError> for Failure {
    fn from(e: SpeciesError) -> Self {
        match e {
            SpeciesError::Syntax { .. } | SpeciesError::Undefined(_) | SpeciesError::Duplicate(_) => usage(e),
            _ => domain(e),
        }
    }
}

impl From<AsymptError> for Failure {
    fn from(e: AsymptError) -> Self {
        match e {
            AsymptError::Syntax { .. } => usage(e),
            _ => domain(e),
        }
    }
}

impl From<RecordError> for Failure {
    fn from(e: RecordError) -> Self {
        match e {
            RecordError::Spec(s) => s.into(),
            RecordError::Count(c) => c.into(),
            RecordError::UnknownClass(_) => usage(e),
            _ => domain(e),
        }
    }
}

/// What a command prints, in both output formats.
struct Report {
    text: String,
    json: Value,
}

fn report(text: impl Into<String>, json: Value) -> Result<Report, Failure> {
    Ok(Report { text: text.into(), json })
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn joined<T: ToString>(xs: &[T]) -> String {
    strings(xs).join(" ")
}

/// Parse arguments, run the command and write its output. Returns the exit
/// code: 0 on success, 1 on a domain error, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    let result = dispatch(&cli);
    match result {
        Ok(r) => {
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("json"))
            } else if r.text.is_empty() {
                Ok(())
            } else {
                writeln!(out, "{}", r.text.trim_end_matches('\n'))
            };
            0
        }
        Err(f) => {
            let _ = if cli.json {
                let kind = if f.code() == 1 { "domain" } else { "usage" };
                writeln!(err, "{}", json!({ "error": f.message(), "kind": kind }))
            } else {
                writeln!(err, "error: {}", f.message())
            };
            f.code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let n_max = cli.max_size;
    match &cli.command {
        Command::Count { spec, marker, max_marker } => count(spec, marker.as_deref(), *max_marker, n_max),
        Command::Gf { spec, solve } => gf(spec, *solve),
        Command::List { spec, size } => {
            let (s, class) = load_spec(spec)?;
            let objs = list_objects(&s, &class, *size)?;
            let text = objs.iter().map(|o| format!("{o}\n")).collect::<String>();
            report(text, json!({ "class": class, "size": size, "count": objs.len(), "objects": objs }))
        }
        Command::Rand { spec, size, count } => {
            let (s, class) = load_spec(spec)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let objs =
                (0..*count).map(|_| random_object(&s, &class, *size, &mut rng)).collect::<Result<Vec<_>, _>>()?;
            let text = objs.iter().map(|o| format!("{o}\n")).collect::<String>();
            report(text, json!({ "class": class, "size": size, "seed": cli.seed, "objects": objs }))
        }
        Command::Rank { word } => {
            let w: BinaryWord = word.parse()?;
            let r = rank_gray(&w);
            report(r.to_string(), json!({ "word": word, "rank": r.to_string() }))
        }
        Command::Unrank { bits, rank } => {
            let r: BigUint = rank.parse().map_err(|_| usage(format!("`{rank}` is not a nonnegative integer")))?;
            let w = unrank_gray(*bits, &r)?;
            report(w.to_string(), json!({ "rank": rank, "word": w.to_string() }))
        }
        Command::Graycode { n, subsets } => {
            let words = gray_subsets(*n);
            let items: Vec<String> =
                words.iter().map(|w| if *subsets { w.subset_string() } else { w.to_string() }).collect();
            report(items.join(" "), json!({ "n": n, "words": items }))
        }
        Command::Coollex { n, k } => {
            let words = coollex_ksubsets(*n, *k)?;
            report(joined(&words), json!({ "n": n, "k": k, "words": strings(&words) }))
        }
        Command::Partitions { n, max_part, distinct, odd, count, random } => {
            let c = PartitionConstraints { max_part: *max_part, distinct: *distinct, odd: *odd };
            let p = Partitions::new(*n, c);
            if *count {
                let total = p.count();
                return report(total.to_string(), json!({ "n": n, "count": total.to_string() }));
            }
            let list = if *random { vec![p.random(&mut ChaCha8Rng::seed_from_u64(cli.seed))?] } else { p.list() };
            let text = list.iter().map(|x| format!("{x:?}\n")).collect::<String>();
            report(text, json!({ "n": n, "partitions": list }))
        }
        Command::Glaisher { parts, inverse } => {
            let image = if *inverse { glaisher_inv(parts)? } else { glaisher(parts)? };
            report(joined(&image), json!({ "input": parts, "output": image }))
        }
        Command::Polya { cmd } => polya(cmd),
        Command::Species { cmd } => species(cmd, n_max),
        Command::Asympt { expr, hayman, compare } => asympt(expr, *hayman, *compare),
        Command::Record { cmd } => record(cmd, n_max),
    }
}

fn load_spec(a: &SpecArgs) -> Result<(Specification, String), Failure> {
    let text = match (&a.spec, &a.spec_file) {
        (Some(t), None) => t.clone(),
        (None, Some(p)) => fs::read_to_string(p).map_err(|e| domain(format!("{}: {e}", p.display())))?,
        _ => return Err(usage("give the specification with --spec or --spec-file")),
    };
    let spec = parse_spec(&text)?;
    let class = a.class.clone().unwrap_or_else(|| spec.start_class().to_string());
    if spec.index_of(&class).is_none() {
        return Err(usage(format!("unknown class `{class}`")));
    }
    Ok((spec, class))
}

fn count(a: &SpecArgs, marker: Option<&str>, u_max: usize, n_max: usize) -> Result<Report, Failure> {
    let (spec, class) = load_spec(a)?;
    if let Some(m) = marker {
        let t = count_bivariate_for(&spec, n_max, u_max, Some(m))?;
        let rows = t.get(&class).expect("class exists");
        let text = rows.iter().enumerate().map(|(n, r)| format!("{n}: {}\n", joined(r))).collect::<String>();
        let json_rows: Vec<Vec<String>> = rows.iter().map(|r| strings(r)).collect();
        return report(text, json!({ "class": class, "marker": m, "rows": json_rows }));
    }
    let t = count_table(&spec, n_max)?;
    let shown: Vec<&(String, Vec<BigInt>)> =
        t.classes.iter().filter(|(c, _)| a.class.is_none() || *c == class).collect();
    let text = shown.iter().map(|(c, v)| format!("{c}: {}\n", joined(v))).collect::<String>();
    let counts: Vec<Value> = shown.iter().map(|(c, v)| json!({ "class": c, "values": strings(v) })).collect();
    report(text, json!({ "mode": spec.mode().to_string(), "n_max": n_max, "counts": counts }))
}

fn gf(a: &SpecArgs, solve: bool) -> Result<Report, Failure> {
    let (spec, _) = load_spec(a)?;
    let eqs = gf_equations(&spec)?;
    let mut lines: Vec<String> = eqs.iter().map(|e| e.to_operator_string()).collect();
    let mut solved_json = Vec::new();
    if solve {
        for (c, s) in gf_solve_acyclic(&spec)? {
            let closed = match s {
                Solved::Explicit(g) => Some(g.to_operator_string()),
                Solved::NotExplicit => None,
            };
            lines.push(match &closed {
                Some(g) => format!("solved {c}(z) = {g}"),
                None => format!("solved {c}: implicit"),
            });
            solved_json.push(json!({ "class": c, "closed_form": closed }));
        }
    }
    let text = lines.join("\n");
    let eq_strings: Vec<String> = eqs.iter().map(|e| e.to_operator_string()).collect();
    report(text, json!({ "mode": spec.mode().to_string(), "equations": eq_strings, "solved": solved_json }))
}

fn colours(letters: Option<&str>, q: usize) -> Result<Vec<char>, Failure> {
    let chars: Vec<char> = match letters {
        Some(s) => s.chars().collect(),
        None => "0123456789abcdefghijklmnopqrstuvwxyz".chars().collect(),
    };
    if chars.len() < q {
        return Err(usage(format!("need {q} letters, got {}", chars.len())));
    }
    Ok(chars[..q].to_vec())
}

fn polya(cmd: &PolyaCmd) -> Result<Report, Failure> {
    match cmd {
        PolyaCmd::CycleIndex { kind, n } => {
            let kind: GroupKind = kind.parse()?;
            let z = cycle_index_closed(kind, *n)?;
            report(z.to_string(), json!({ "group": kind.to_string(), "n": n, "cycle_index": z.to_string() }))
        }
        PolyaCmd::Orbits { kind, n, colors, letters } => {
            let kind: GroupKind = kind.parse()?;
            let letters = colours(letters.as_deref(), *colors)?;
            let g = standard_group(kind, *n)?;
            let action = ActionTable::on_words(&g, *colors)?;
            let total = burnside_count(&g, &action);
            let reps: Vec<String> = orbit_representatives(&g, &action)
                .into_iter()
                .map(|x| word_of(x, *n, *colors).into_iter().map(|c| letters[c]).collect())
                .collect();
            let text = format!("{total} orbits\n{}", reps.join("\n"));
            report(text, json!({ "orbits": total.to_string(), "representatives": reps }))
        }
        PolyaCmd::Inventory { kind, n, weights } => {
            let z = cycle_index_closed(kind.parse()?, *n)?;
            inventory(&z, &QPoly::from_weights(weights), *n)
        }
        PolyaCmd::Induced { kind, n, k, weights } => {
            let g = standard_group(kind.parse()?, *n)?;
            let induced = induced_ksubset_group(&g, *k)?;
            let z = cycle_index_group(&induced.group);
            inventory(&z, &QPoly::from_weights(weights), induced.domain.len())
        }
    }
}

fn inventory(z: &combi_core::CyclePoly, a: &QPoly, m: usize) -> Result<Report, Failure> {
    let b = orbit_inventory(z, a, m)?;
    let total = b.at_one();
    let text = format!("{b}\ntotal {total}");
    report(text, json!({ "cycle_index": z.to_string(), "inventory": b.to_string(), "total": total.to_string() }))
}

fn species(cmd: &SpeciesCmd, n_max: usize) -> Result<Report, Failure> {
    let q = |p: &QPoly| p.to_string_asc("q");
    match cmd {
        SpeciesCmd::Egf { expr } | SpeciesCmd::Isotypes { expr } | SpeciesCmd::Zindex { expr } => {
            let (env, f) = parse_species(expr)?;
            let z = cycle_index_series(&f, &env, n_max)?;
            let (key, items): (&str, Vec<String>) = match cmd {
                SpeciesCmd::Egf { .. } => ("egf", z.egf().iter().map(q).collect()),
                SpeciesCmd::Isotypes { .. } => ("isotypes", z.isotypes().iter().map(q).collect()),
                _ => ("cycle_index", z.grade_strings()),
            };
            let text = items.iter().enumerate().map(|(n, s)| format!("{n}: {s}\n")).collect::<String>();
            report(text, json!({ "species": f.to_string(), key: items }))
        }
        SpeciesCmd::Structures { expr, size } => {
            let (env, f) = parse_species(expr)?;
            let labels: Vec<usize> = (1..=*size).collect();
            let all = structures(&f, &env, &labels)?;
            let text = all
                .iter()
                .map(|(s, w)| if *w == 0 { format!("{s}\n") } else { format!("{s}  q^{w}\n") })
                .collect::<String>();
            let items: Vec<Value> =
                all.iter().map(|(s, w)| json!({ "structure": s.to_string(), "weight": w })).collect();
            report(text, json!({ "species": f.to_string(), "size": size, "structures": items }))
        }
    }
}

fn asympt(expr: &str, hayman: Option<usize>, compare: Option<usize>) -> Result<Report, Failure> {
    let e = parse_eexpr(expr)?;
    let r = radius(&e);
    let class = classify(&e);
    let mut lines = vec![format!("expression {e}"), format!("radius {r}"), format!("class {}", class.class)];
    let mut j = json!({ "expression": e.to_string(), "radius": r.to_string(), "class": class.class.to_string() });
    if r.is_finite() {
        let t = equivalent(&e)?;
        lines.push(format!("term {t}"));
        j["term"] = json!({
            "constant": t.constant,
            "constant_err": t.constant_err,
            "radius": t.radius,
            "power": t.power,
            "log_power": t.log_power,
        });
        if let Some(n) = compare {
            let exact = e.series(n).map_err(domain)?[n].clone();
            let ratio = t.eval(n) / num_traits::ToPrimitive::to_f64(&exact).unwrap_or(f64::NAN);
            lines.push(format!("coefficient {n}: exact {exact}, ratio {ratio}"));
            j["compare"] = json!({ "n": n, "exact": exact.to_string(), "ratio": ratio });
        }
    }
    if let Some(n) = hayman {
        let check = h_admissible_check(&e);
        if !check.accepted {
            return Err(domain(format!("not H-admissible: {}", check.trace.join("; "))));
        }
        let h = hayman_estimate(&e, n)?;
        lines.push(format!("hayman {n}: {h}"));
        j["hayman"] = json!({ "n": n, "estimate": h });
    }
    report(lines.join("\n"), j)
}

fn record(cmd: &RecordCmd, n_max: usize) -> Result<Report, Failure> {
    match cmd {
        RecordCmd::Make { spec, store, name, description, reference } => {
            let (s, class) = load_spec(spec)?;
            let mut r = make_record(&s.to_text(), Some(&class), n_max, name, description)?;
            r.references = reference.clone();
            RecordStore::new(store).append(&r)?;
            let text = format!("{}: {}", r.name, joined(&r.initial_values));
            report(text, serde_json::to_value(&r).expect("json"))
        }
        RecordCmd::Search { store, values, keyword } => {
            if values.is_empty() && keyword.is_none() {
                return Err(usage("give initial values or --keyword"));
            }
            let loaded = RecordStore::new(store).load()?;
            let recs = &loaded.records;
            let mut hits: Vec<(usize, Option<usize>)> = Vec::new();
            if !values.is_empty() {
                let prefix = values
                    .iter()
                    .flat_map(|v| v.split_whitespace())
                    .map(|v| v.parse::<BigInt>().map_err(|_| usage(format!("`{v}` is not an integer"))))
                    .collect::<Result<Vec<_>, _>>()?;
                hits.extend(search_initial_values(&prefix, recs).into_iter().map(|h| (h.index, Some(h.offset))));
            }
            if let Some(k) = keyword {
                for i in search_keyword(k, recs) {
                    if !hits.iter().any(|(j, _)| *j == i) {
                        hits.push((i, None));
                    }
                }
            }
            let mut text = String::new();
            for e in &loaded.errors {
                text.push_str(&format!("warning: line {}: {}\n", e.line, e.message));
            }
            for (i, off) in &hits {
                let r = &recs[*i];
                let at = off.map(|o| format!(" (offset {o})")).unwrap_or_default();
                text.push_str(&format!("{}{at}: {}\n", r.name, joined(&r.initial_values)));
            }
            let matches: Vec<Value> =
                hits.iter().map(|(i, off)| json!({ "offset": off, "record": recs[*i] })).collect();
            let errors: Vec<Value> =
                loaded.errors.iter().map(|e| json!({ "line": e.line, "message": e.message })).collect();
            report(text, json!({ "matches": matches, "errors": errors }))
        }
        RecordCmd::Verify { store } => {
            let loaded = RecordStore::new(store).load()?;
            let mut text = String::new();
            let mut failed = Vec::new();
            for r in &loaded.records {
                match verify(r) {
                    Ok(()) => text.push_str(&format!("ok {}\n", r.name)),
                    Err(e) => failed.push(e.to_string()),
                }
            }
            failed.extend(loaded.errors.iter().map(|e| format!("line {}: {}", e.line, e.message)));
            if !failed.is_empty() {
                return Err(domain(failed.join("\n")));
            }
            report(text, json!({ "verified": loaded.records.len() }))
        }
    }
}
