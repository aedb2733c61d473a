//! Sequence records and the append-only JSON-lines store that holds them.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use combi_core::asymptotics::{equivalent, AsymptoticTerm, EExpr};
use combi_core::counting::{count_table, gf_equations, gf_solve_acyclic, CountError, Solved};
use combi_core::spec::{parse_spec, Mode, SpecError, Specification};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("record `{name}` is invalid: {reason}")]
    Invalid { name: String, reason: String },
    #[error("store {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// Dominant term `C r^(-n) n^a (log n)^k` of the generating function
/// coefficients. For labeled classes that is `a_n / n!`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredTerm {
    pub expression: String,
    /// `ogf` or `egf`.
    pub scale: String,
    pub constant: String,
    pub radius: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_exact: Option<String>,
    pub power: i64,
    pub log_power: u32,
}

impl StoredTerm {
    fn new(e: &EExpr, t: &AsymptoticTerm, mode: Mode) -> Self {
        StoredTerm {
            expression: e.to_string(),
            scale: if mode == Mode::Labeled { "egf" } else { "ogf" }.into(),
            constant: t.constant.to_string(),
            radius: t.radius.to_string(),
            radius_exact: t.radius_exact.as_ref().map(|r| r.to_string()),
            power: t.power,
            log_power: t.log_power,
        }
    }

    pub fn constant(&self) -> f64 {
        self.constant.parse().unwrap_or(f64::NAN)
    }

    pub fn radius(&self) -> f64 {
        self.radius.parse().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcsRecord {
    pub name: String,
    /// Canonical specification text.
    pub specification: String,
    pub class: String,
    pub mode: String,
    /// Index `n` of the first entry of `initial_values`.
    pub offset: usize,
    #[serde(with = "decimal")]
    pub initial_values: Vec<BigInt>,
    pub gf_equations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotic_term: Option<StoredTerm>,
    /// Why `asymptotic_term` is missing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotic_note: Option<String>,
    pub description: String,
    #[serde(default)]
    pub references: Vec<String>,
    // Reserved; never filled in.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| s.parse().map_err(|_| D::Error::custom(format!("`{s}` is not an integer")))).collect()
    }
}

/// Count `class` of `spec_text` up to size `n` and derive the generating
/// function equations and, when available, the dominant asymptotic term.
pub fn make_record(
    spec_text: &str,
    class: Option<&str>,
    n: usize,
    name: &str,
    description: &str,
) -> Result<EcsRecord, RecordError> {
    let spec = parse_spec(spec_text)?;
    let class = class.unwrap_or(spec.start_class()).to_string();
    if spec.index_of(&class).is_none() {
        return Err(RecordError::UnknownClass(class));
    }
    let (initial_values, gf_equations, asymptotic_term, asymptotic_note) = derive(&spec, &class, n)?;
    Ok(EcsRecord {
        name: name.into(),
        specification: spec.to_text(),
        class,
        mode: spec.mode().to_string(),
        offset: 0,
        initial_values,
        gf_equations,
        asymptotic_term,
        asymptotic_note,
        description: description.into(),
        references: Vec::new(),
        recurrence: None,
        closed_form: None,
    })
}

type Derived = (Vec<BigInt>, Vec<String>, Option<StoredTerm>, Option<String>);

fn derive(spec: &Specification, class: &str, n: usize) -> Result<Derived, RecordError> {
    let table = count_table(spec, n)?;
    let values = table.get(class).ok_or_else(|| RecordError::UnknownClass(class.into()))?.to_vec();
    let eqs = gf_equations(spec)?.iter().map(|e| e.to_operator_string()).collect();
    let solved = gf_solve_acyclic(spec)?;
    let (term, note) = match solved.iter().find(|(c, _)| c == class).map(|(_, s)| s) {
        Some(Solved::Explicit(gf)) => match EExpr::from_gf(gf) {
            Some(e) => match equivalent(&e) {
                Ok(t) => (Some(StoredTerm::new(&e, &t, spec.mode())), None),
                Err(err) => (None, Some(format!("{e}: {err}"))),
            },
            None => (None, Some(format!("{gf} is outside the supported expression class"))),
        },
        _ => (None, Some("generating function is only given implicitly".to_string())),
    };
    Ok((values, eqs, term, note))
}

/// Recompute every derived field from the stored specification text and
/// compare.
pub fn verify(r: &EcsRecord) -> Result<(), RecordError> {
    let bad = |reason: String| RecordError::Invalid { name: r.name.clone(), reason };
    if r.initial_values.is_empty() {
        return Err(bad("no initial values".into()));
    }
    let spec = parse_spec(&r.specification)?;
    if spec.mode().to_string() != r.mode {
        return Err(bad(format!("mode is {}, specification says {}", r.mode, spec.mode())));
    }
    let n = r.offset + r.initial_values.len() - 1;
    let (values, eqs, term, note) = derive(&spec, &r.class, n)?;
    if values[r.offset..] != r.initial_values[..] {
        return Err(bad("initial values differ from a recount".into()));
    }
    if eqs != r.gf_equations {
        return Err(bad("generating function equations differ".into()));
    }
    if term != r.asymptotic_term || note != r.asymptotic_note {
        return Err(bad("asymptotic term differs".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct Loaded {
    pub records: Vec<EcsRecord>,
    pub errors: Vec<LineError>,
}

/// One JSON document per line. Records are only ever appended.
#[derive(Clone, Debug)]
pub struct RecordStore {
    path: PathBuf,
}

impl RecordStore {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        RecordStore { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn io(&self, source: io::Error) -> RecordError {
        RecordError::Io { path: self.path.clone(), source }
    }

    /// Check the record against a recount, then append it.
    pub fn append(&self, r: &EcsRecord) -> Result<(), RecordError> {
        verify(r)?;
        let mut line = serde_json::to_string(r).expect("records serialize");
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path).map_err(|e| self.io(e))?;
        f.write_all(line.as_bytes()).map_err(|e| self.io(e))?;
        f.sync_data().map_err(|e| self.io(e))
    }

    /// All readable records in insertion order. A missing file is an empty
    /// store; lines that do not parse are reported and skipped.
    pub fn load(&self) -> Result<Loaded, RecordError> {
        let f = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Loaded::default()),
            Err(e) => return Err(self.io(e)),
        };
        let mut out = Loaded::default();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(|e| self.io(e))?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<EcsRecord>(&line) {
                Ok(r) => out.records.push(r),
                Err(e) => out.errors.push(LineError { line: i + 1, message: e.to_string() }),
            }
        }
        Ok(out)
    }
}

/// Maximum start position of a match inside a record's values.
pub const MAX_MATCH_OFFSET: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hit {
    pub index: usize,
    pub offset: usize,
}

/// Records whose values contain `prefix` starting within the first
/// [`MAX_MATCH_OFFSET`] + 1 positions, best offset first.
pub fn search_initial_values(prefix: &[BigInt], records: &[EcsRecord]) -> Vec<Hit> {
    if prefix.is_empty() {
        return Vec::new();
    }
    let mut hits: Vec<Hit> = records
        .iter()
        .enumerate()
        .filter_map(|(index, r)| {
            let v = &r.initial_values;
            (0..=MAX_MATCH_OFFSET)
                .find(|&o| v.len() >= o + prefix.len() && v[o..o + prefix.len()] == *prefix)
                .map(|offset| Hit { index, offset })
        })
        .collect();
    hits.sort_by_key(|h| (h.offset, h.index));
    hits
}

/// Case-insensitive substring search over names and descriptions.
pub fn search_keyword(word: &str, records: &[EcsRecord]) -> Vec<usize> {
    let w = word.to_lowercase();
    records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.name.to_lowercase().contains(&w) || r.description.to_lowercase().contains(&w))
        .map(|(i, _)| i)
        .collect()
}
