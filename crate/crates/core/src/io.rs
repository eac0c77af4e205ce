//! The matroid file format.
//!
//! UTF-8, line-oriented; `#` starts a comment. Header lines:
//!
//! ```text
//! name: V8                      (optional)
//! elements: a b c d e f g h
//! rank: 4                       (optional, validated)
//! representation: bases|nonbases|circuits|flats|ranktable
//! ```
//!
//! followed by one record per line. `flats` records are `k: e1 e2 ...`;
//! `ranktable` records are `<subset labels> = <int>` and must enumerate all
//! subsets; the other representations list one subset per line.
//! Serialization always emits the `flats` form, ranks ascending, elements in
//! declaration order.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::axioms::{check_rank_axioms, AxiomCheckMode, AxiomViolation, DEFAULT_SAMPLES};
use crate::ground::{GroundSet, Subset};
use crate::matroid::{flats_from_oracle, Matroid, MatroidError, RankOracle};
use crate::ranktable::RankTable;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("not a matroid: {0}")]
    NotAMatroid(String),
}

impl ParseError {
    fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Bases,
    Nonbases,
    Circuits,
    Flats,
    RankTable,
}

impl Representation {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "bases" => Some(Self::Bases),
            "nonbases" => Some(Self::Nonbases),
            "circuits" => Some(Self::Circuits),
            "flats" => Some(Self::Flats),
            "ranktable" => Some(Self::RankTable),
            _ => None,
        }
    }
}

struct RawFile {
    name: Option<String>,
    ground: GroundSet,
    declared_rank: Option<usize>,
    representation: Representation,
    records: Vec<(usize, String)>, // (line number, record body)
}

fn split_header(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once(':')?;
    Some((key.trim(), value.trim()))
}

fn parse_raw(text: &str) -> Result<RawFile, ParseError> {
    let mut name = None;
    let mut elements: Option<(usize, Vec<String>)> = None;
    let mut declared_rank = None;
    let mut representation: Option<Representation> = None;
    let mut records = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw_line.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw_line.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if representation.is_none() {
            let (key, value) = split_header(line).ok_or_else(|| {
                ParseError::syntax(lineno, "expected `key: value` header line before records")
            })?;
            match key {
                "name" => name = Some(value.to_string()),
                "elements" => {
                    elements = Some((
                        lineno,
                        value.split_whitespace().map(str::to_string).collect(),
                    ))
                }
                "rank" => {
                    declared_rank = Some(value.parse::<usize>().map_err(|_| {
                        ParseError::syntax(lineno, format!("invalid rank `{value}`"))
                    })?)
                }
                "representation" => {
                    representation = Some(Representation::parse(value).ok_or_else(|| {
                        ParseError::syntax(
                            lineno,
                            format!(
                                "unknown representation `{value}` \
                                 (expected bases|nonbases|circuits|flats|ranktable)"
                            ),
                        )
                    })?)
                }
                other => {
                    return Err(ParseError::syntax(
                        lineno,
                        format!("unknown header key `{other}`"),
                    ))
                }
            }
        } else {
            records.push((lineno, line.to_string()));
        }
    }

    let representation =
        representation.ok_or_else(|| ParseError::syntax(0, "missing `representation:` header"))?;
    let (elements_line, labels) =
        elements.ok_or_else(|| ParseError::syntax(0, "missing `elements:` header"))?;
    let ground = GroundSet::new(labels)
        .map_err(|e| ParseError::syntax(elements_line, e.to_string()))?;
    Ok(RawFile {
        name,
        ground,
        declared_rank,
        representation,
        records,
    })
}

fn parse_subset(ground: &GroundSet, line: usize, body: &str) -> Result<Subset, ParseError> {
    ground
        .subset_from_labels(body.split_whitespace())
        .map_err(|e| ParseError::syntax(line, e.to_string()))
}

/// Rank oracle backed by an explicit list of bases.
struct BasesOracle {
    ground: GroundSet,
    bases: Vec<Subset>,
}

impl RankOracle for BasesOracle {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }
    fn rank_subset(&self, x: &Subset) -> usize {
        self.bases
            .iter()
            .map(|b| x.intersection(b).len())
            .max()
            .unwrap_or(0)
    }
}

fn check_basis_exchange(ground: &GroundSet, bases: &[Subset]) -> Result<(), ParseError> {
    let set: HashSet<&Subset> = bases.iter().collect();
    for b1 in bases {
        for b2 in bases {
            for x in b1.difference(b2).iter() {
                let found = b2.difference(b1).iter().any(|y| {
                    let mut cand = b1.clone();
                    cand.remove(x);
                    cand.insert(y);
                    set.contains(&cand)
                });
                if !found {
                    return Err(ParseError::NotAMatroid(format!(
                        "basis exchange fails for bases {{{}}} and {{{}}} at element {}",
                        ground.format_subset(b1),
                        ground.format_subset(b2),
                        ground.label(x)
                    )));
                }
            }
        }
    }
    Ok(())
}

struct CircuitsOracle {
    ground: GroundSet,
    circuits: Vec<Subset>,
}

impl CircuitsOracle {
    fn is_independent(&self, x: &Subset) -> bool {
        !self.circuits.iter().any(|c| c.is_subset_of(x))
    }
}

impl RankOracle for CircuitsOracle {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }
    fn rank_subset(&self, x: &Subset) -> usize {
        // greedy over declaration order; valid once the circuit axioms hold
        let mut indep = Subset::empty(self.ground.len());
        for e in x.iter() {
            indep.insert(e);
            if !self.is_independent(&indep) {
                indep.remove(e);
            }
        }
        indep.len()
    }
}

fn check_circuit_axioms(ground: &GroundSet, circuits: &[Subset]) -> Result<(), ParseError> {
    for (i, c1) in circuits.iter().enumerate() {
        if c1.is_empty() {
            return Err(ParseError::NotAMatroid(
                "the empty set cannot be a circuit".into(),
            ));
        }
        for c2 in &circuits[i + 1..] {
            if c1.is_subset_of(c2) || c2.is_subset_of(c1) {
                return Err(ParseError::NotAMatroid(format!(
                    "circuits {{{}}} and {{{}}} are nested",
                    ground.format_subset(c1),
                    ground.format_subset(c2)
                )));
            }
            for e in c1.intersection(c2).iter() {
                let mut union = c1.union(c2);
                union.remove(e);
                if !circuits.iter().any(|c3| c3.is_subset_of(&union)) {
                    return Err(ParseError::NotAMatroid(format!(
                        "circuit elimination fails for {{{}}} and {{{}}} at element {}",
                        ground.format_subset(c1),
                        ground.format_subset(c2),
                        ground.label(e)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn finish_from_oracle<O: RankOracle>(
    oracle: &O,
    name: Option<String>,
    declared_rank: Option<usize>,
) -> Result<Matroid, ParseError> {
    if let Some(r) = declared_rank {
        let actual = oracle.full_rank();
        if r != actual {
            return Err(ParseError::NotAMatroid(format!(
                "declared rank {r} but the data has rank {actual}"
            )));
        }
    }
    let flats = flats_from_oracle(oracle);
    Matroid::from_flats(oracle.ground().clone(), name, flats).map_err(|e| match e {
        MatroidError::NotAMatroid(msg) => ParseError::NotAMatroid(msg),
        other => ParseError::NotAMatroid(other.to_string()),
    })
}

fn describe_axiom_violation(ground: &GroundSet, v: &AxiomViolation) -> String {
    match v {
        AxiomViolation::Subcardinality { x, rank } => format!(
            "r({{{}}}) = {rank} exceeds the set size",
            ground.format_subset(x)
        ),
        AxiomViolation::Monotonicity { x, y } => format!(
            "rank decreases from {{{}}} to its superset {{{}}}",
            ground.format_subset(x),
            ground.format_subset(y)
        ),
        AxiomViolation::Submodularity { x, y } => format!(
            "submodularity fails for {{{}}} and {{{}}}",
            ground.format_subset(x),
            ground.format_subset(y)
        ),
    }
}

/// Parses a matroid file; the declared representation is converted to the
/// canonical flats form and the axioms are checked.
pub fn parse_matroid(text: &str) -> Result<Matroid, ParseError> {
    parse_matroid_seeded(text, 1)
}

/// As [`parse_matroid`], with the seed used for sampled axiom checking on
/// rank tables over more than 10 elements.
pub fn parse_matroid_seeded(text: &str, seed: u64) -> Result<Matroid, ParseError> {
    let raw = parse_raw(text)?;
    let ground = raw.ground.clone();
    match raw.representation {
        Representation::Flats => {
            let mut by_rank: Vec<Vec<Subset>> = Vec::new();
            for (lineno, body) in &raw.records {
                let (k, rest) = body.split_once(':').ok_or_else(|| {
                    ParseError::syntax(*lineno, "flats records have the form `k: e1 e2 ...`")
                })?;
                let k: usize = k.trim().parse().map_err(|_| {
                    ParseError::syntax(*lineno, format!("invalid flat rank `{}`", k.trim()))
                })?;
                if by_rank.len() <= k {
                    by_rank.resize(k + 1, Vec::new());
                }
                by_rank[k].push(parse_subset(&ground, *lineno, rest)?);
            }
            if let Some(r) = raw.declared_rank {
                if by_rank.len() != r + 1 {
                    return Err(ParseError::NotAMatroid(format!(
                        "declared rank {r} but flats go up to rank {}",
                        by_rank.len().saturating_sub(1)
                    )));
                }
            }
            Matroid::from_flats(ground, raw.name, by_rank).map_err(|e| match e {
                MatroidError::NotAMatroid(msg) => ParseError::NotAMatroid(msg),
                other => ParseError::NotAMatroid(other.to_string()),
            })
        }
        Representation::Bases => {
            let mut bases = Vec::new();
            for (lineno, body) in &raw.records {
                bases.push(parse_subset(&ground, *lineno, body)?);
            }
            if bases.is_empty() {
                return Err(ParseError::NotAMatroid("no bases declared".into()));
            }
            let size = bases[0].len();
            if bases.iter().any(|b| b.len() != size) {
                return Err(ParseError::NotAMatroid(
                    "bases must all have the same size".into(),
                ));
            }
            check_basis_exchange(&ground, &bases)?;
            let oracle = BasesOracle { ground, bases };
            finish_from_oracle(&oracle, raw.name, raw.declared_rank)
        }
        Representation::Nonbases => {
            let mut nonbases: Vec<Subset> = Vec::new();
            for (lineno, body) in &raw.records {
                nonbases.push(parse_subset(&ground, *lineno, body)?);
            }
            let rank = match (raw.declared_rank, nonbases.first()) {
                (Some(r), _) => r,
                (None, Some(first)) => first.len(),
                (None, None) => {
                    return Err(ParseError::NotAMatroid(
                        "nonbases representation needs a declared rank or at least one record"
                            .into(),
                    ))
                }
            };
            if nonbases.iter().any(|b| b.len() != rank) {
                return Err(ParseError::NotAMatroid(format!(
                    "nonbases must all have {rank} elements"
                )));
            }
            let listed: HashSet<&Subset> = nonbases.iter().collect();
            let bases: Vec<Subset> = crate::ground::k_subsets(ground.len(), rank)
                .into_iter()
                .filter(|s| !listed.contains(s))
                .collect();
            if bases.is_empty() {
                return Err(ParseError::NotAMatroid(
                    "every rank-sized subset is declared a nonbasis".into(),
                ));
            }
            check_basis_exchange(&ground, &bases)?;
            let oracle = BasesOracle { ground, bases };
            finish_from_oracle(&oracle, raw.name, Some(rank))
        }
        Representation::Circuits => {
            let mut circuits = Vec::new();
            for (lineno, body) in &raw.records {
                circuits.push(parse_subset(&ground, *lineno, body)?);
            }
            check_circuit_axioms(&ground, &circuits)?;
            let oracle = CircuitsOracle { ground, circuits };
            finish_from_oracle(&oracle, raw.name, raw.declared_rank)
        }
        Representation::RankTable => {
            let table = build_rank_table(&raw)?;
            let mode = AxiomCheckMode::auto(ground.len(), DEFAULT_SAMPLES, seed);
            let report = check_rank_axioms(&table, mode);
            if let Some(v) = report.violations.first() {
                return Err(ParseError::NotAMatroid(describe_axiom_violation(
                    &ground, v,
                )));
            }
            finish_from_oracle(&table, raw.name, raw.declared_rank)
        }
    }
}

/// Parses a `ranktable` file without the axiom check, for diagnostics on
/// would-be matroids (see the Escher scan).
pub fn parse_rank_table(text: &str) -> Result<(RankTable, Option<String>), ParseError> {
    let raw = parse_raw(text)?;
    if raw.representation != Representation::RankTable {
        return Err(ParseError::syntax(
            0,
            "expected `representation: ranktable`",
        ));
    }
    Ok((build_rank_table(&raw)?, raw.name))
}

fn build_rank_table(raw: &RawFile) -> Result<RankTable, ParseError> {
    let n = raw.ground.len();
    if n > RankTable::MAX_ELEMENTS {
        return Err(ParseError::NotAMatroid(format!(
            "rank tables support at most {} elements",
            RankTable::MAX_ELEMENTS
        )));
    }
    let mut ranks: Vec<Option<u8>> = vec![None; 1 << n];
    for (lineno, body) in &raw.records {
        let (left, right) = body.split_once('=').ok_or_else(|| {
            ParseError::syntax(*lineno, "rank table records have the form `e1 e2 ... = r`")
        })?;
        let subset = parse_subset(&raw.ground, *lineno, left)?;
        let rank: u8 = right.trim().parse().map_err(|_| {
            ParseError::syntax(*lineno, format!("invalid rank `{}`", right.trim()))
        })?;
        let mask = RankTable::subset_to_mask(&subset) as usize;
        if ranks[mask].replace(rank).is_some() {
            return Err(ParseError::syntax(
                *lineno,
                format!("duplicate entry for subset `{}`", left.trim()),
            ));
        }
    }
    let missing = ranks.iter().filter(|r| r.is_none()).count();
    if missing > 0 {
        return Err(ParseError::NotAMatroid(format!(
            "rank table must enumerate all {} subsets ({missing} missing)",
            1usize << n
        )));
    }
    let ranks: Vec<u8> = ranks.into_iter().map(Option::unwrap).collect();
    RankTable::new(raw.ground.clone(), ranks)
        .map_err(|e| ParseError::NotAMatroid(e.to_string()))
}

/// Serializes in `flats` form: ranks ascending, canonical flat order,
/// element labels in declaration order.
pub fn serialize_matroid(m: &Matroid) -> String {
    let mut out = String::new();
    if let Some(name) = m.name() {
        let _ = writeln!(out, "name: {name}");
    }
    let _ = writeln!(out, "elements: {}", m.ground_set().labels().join(" "));
    let _ = writeln!(out, "rank: {}", m.rank());
    let _ = writeln!(out, "representation: flats");
    for k in 0..=m.rank() {
        for f in m.flats_of_rank(k) {
            let labels = m.ground_set().labels_of(f).join(" ");
            let _ = writeln!(out, "{k}: {labels}");
        }
    }
    out
}

/// Serializes a rank table (used for the Escher fixture and diagnostics).
pub fn serialize_rank_table(t: &RankTable, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        let _ = writeln!(out, "name: {name}");
    }
    let ground = t.ground();
    let _ = writeln!(out, "elements: {}", ground.labels().join(" "));
    let _ = writeln!(out, "representation: ranktable");
    for mask in 0..t.len() as u32 {
        let s = RankTable::mask_to_subset(ground.len(), mask);
        let _ = writeln!(
            out,
            "{} = {}",
            ground.labels_of(&s).join(" "),
            t.rank_mask(mask)
        );
    }
    out
}
