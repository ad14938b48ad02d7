//! DBpedia symbol statements.
//!
//! Two shapes are read. `?s dbp:symbol ?o` makes `?o` a simulacrum of `?s`,
//! valid in the contexts named by the types of `?s`. `?s dct:subject ?c`, for
//! categories whose label mentions symbols, makes `?s` a simulacrum of what
//! the category is about ("National symbols of Liechtenstein" ->
//! Liechtenstein) in the general context.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use percent_encoding::percent_decode_str;
use serde_json::Value;
use thiserror::Error;

use super::{Conversion, LogLine, ParseError};
use crate::model::{Entity, Iri, RcRelation, Simulation, SimulationKind};
use crate::vocab::{display_iri, Term, RDF, RDFS, RDF_TYPE};

pub const DBR: &str = "http://dbpedia.org/resource/";
pub const DBC: &str = "http://dbpedia.org/resource/Category:";
pub const DBP: &str = "http://dbpedia.org/property/";
pub const DBO: &str = "http://dbpedia.org/ontology/";
pub const DCT: &str = "http://purl.org/dc/terms/";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";

pub const DBP_SYMBOL: &str = "http://dbpedia.org/property/symbol";
pub const DCT_SUBJECT: &str = "http://purl.org/dc/terms/subject";

const FILE_PREFIXES: [(&str, &str); 8] = [
    ("dbr", DBR),
    ("dbc", DBC),
    ("dbp", DBP),
    ("dbo", DBO),
    ("dct", DCT),
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("skos", SKOS),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolPredicate {
    /// `dbp:symbol`
    Symbol,
    /// `dct:subject`
    Subject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTriple {
    pub subject: Iri,
    pub predicate: SymbolPredicate,
    pub object: Term,
    pub subject_types: Vec<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbpediaConfig {
    /// Subjects with any of these types are not read as symbolized things.
    pub excluded_types: BTreeSet<Iri>,
}

impl Default for DbpediaConfig {
    fn default() -> Self {
        DbpediaConfig {
            excluded_types: [
                format!("{DBO}RailwayStation"),
                format!("{DBO}PublicCompany"),
            ]
            .into_iter()
            .map(|s| Iri::new(s).expect("constant IRI"))
            .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Offline triples

fn expand_name(token: &str) -> Option<String> {
    if let Some(inner) = token.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Some(inner.to_string());
    }
    if token == "a" {
        return Some(RDF_TYPE.to_string());
    }
    let (prefix, local) = token.split_once(':')?;
    FILE_PREFIXES
        .iter()
        .find(|(p, _)| *p == prefix)
        .map(|(_, ns)| format!("{ns}{local}"))
}

/// Splits a statement line into terms: `<iri>`, `prefix:name`, or a quoted
/// literal with optional `@lang`.
fn line_terms(line: &str, line_no: usize) -> Result<Vec<(usize, Term)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '"' {
            let mut value = String::new();
            let mut j = i + 1;
            let mut closed = false;
            while j < chars.len() {
                match chars[j].1 {
                    '\\' if j + 1 < chars.len() => {
                        let e = chars[j + 1].1;
                        value.push(match e {
                            'n' => '\n',
                            't' => '\t',
                            other => other,
                        });
                        j += 2;
                    }
                    '"' => {
                        closed = true;
                        j += 1;
                        break;
                    }
                    other => {
                        value.push(other);
                        j += 1;
                    }
                }
            }
            if !closed {
                return Err(ParseError::new(line_no, col, "unterminated literal"));
            }
            let mut lang = None;
            if j < chars.len() && chars[j].1 == '@' {
                let start = j + 1;
                j = start;
                while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '-') {
                    j += 1;
                }
                lang = Some(chars[start..j].iter().map(|(_, c)| c).collect());
            }
            out.push((
                col,
                Term::Literal {
                    value,
                    lang,
                    datatype: None,
                },
            ));
            i = j;
            continue;
        }
        let end = chars[i..]
            .iter()
            .position(|(_, c)| c.is_whitespace())
            .map_or(line.len(), |k| chars[i + k].0);
        let mut token = &line[pos..end];
        if token == "." {
            break;
        }
        if let Some(stripped) = token
            .strip_suffix('.')
            .filter(|_| !token.starts_with('<') || token.ends_with(">."))
        {
            token = stripped;
        }
        let iri = expand_name(token)
            .ok_or_else(|| ParseError::new(line_no, col, format!("cannot read {token:?}")))?;
        let iri = Iri::new(&iri).map_err(|e| ParseError::new(line_no, col, e.to_string()))?;
        out.push((col, Term::Iri(iri)));
        i += line[pos..end].chars().count();
    }
    Ok(out)
}

/// Reads `subject predicate object .` lines. `rdf:type` lines supply subject
/// types; statements with other predicates are ignored.
pub fn parse_symbol_file(text: &str) -> (Vec<SymbolTriple>, Vec<ParseError>) {
    let mut triples = Vec::new();
    let mut types: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
    let mut errors = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let terms = match line_terms(line, line_no) {
            Ok(t) => t,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };
        if terms.len() != 3 {
            errors.push(ParseError::new(
                line_no,
                1,
                format!("expected 3 terms, found {}", terms.len()),
            ));
            continue;
        }
        let (Term::Iri(s), Term::Iri(p)) = (&terms[0].1, &terms[1].1) else {
            let col = if terms[0].1.as_iri().is_none() {
                terms[0].0
            } else {
                terms[1].0
            };
            errors.push(ParseError::new(
                line_no,
                col,
                "subject and predicate must be IRIs",
            ));
            continue;
        };
        let object = terms[2].1.clone();
        match p.as_str() {
            DBP_SYMBOL | DCT_SUBJECT => triples.push(SymbolTriple {
                subject: s.clone(),
                predicate: if p.as_str() == DBP_SYMBOL {
                    SymbolPredicate::Symbol
                } else {
                    SymbolPredicate::Subject
                },
                object,
                subject_types: Vec::new(),
            }),
            RDF_TYPE => match object {
                Term::Iri(t) => {
                    let list = types.entry(s.clone()).or_default();
                    if !list.contains(&t) {
                        list.push(t);
                    }
                }
                Term::Literal { .. } => errors.push(ParseError::new(
                    line_no,
                    terms[2].0,
                    "rdf:type object must be an IRI",
                )),
            },
            _ => {}
        }
    }
    for t in &mut triples {
        if t.predicate == SymbolPredicate::Symbol {
            t.subject_types = types.get(&t.subject).cloned().unwrap_or_default();
        }
    }
    (triples, errors)
}

// ---------------------------------------------------------------------------
// Conversion

/// Human-readable label of a resource: percent-decoded local name with
/// underscores as spaces.
pub fn resource_label(iri: &Iri) -> String {
    let local = iri.local_name();
    let decoded = percent_decode_str(local).decode_utf8_lossy();
    decoded.replace('_', " ").trim().to_string()
}

/// Label of a type: its local name with camelCase split into words.
pub fn type_label(iri: &Iri) -> String {
    let local = resource_label(iri);
    let mut out = String::new();
    let mut prev: Option<char> = None;
    for c in local.chars() {
        if c.is_uppercase() && prev.is_some_and(|p| p.is_lowercase() || p.is_ascii_digit()) {
            out.push(' ');
        }
        out.push(c);
        prev = Some(c);
    }
    out
}

const CATEGORY_PREFIXES: [&str; 4] = [
    "national symbols of",
    "national symbol of",
    "symbols of",
    "symbol of",
];

/// What a symbol category is about.
pub fn clean_category(label: &str) -> String {
    let label = label.trim();
    let label = label.strip_prefix("Category:").unwrap_or(label).trim();
    let lower = label.to_lowercase();
    for prefix in CATEGORY_PREFIXES {
        if lower.starts_with(prefix) && lower.len() == label.len() {
            return label[prefix.len()..].trim().to_string();
        }
    }
    label.to_string()
}

fn term_label(t: &Term) -> String {
    match t {
        Term::Iri(iri) => resource_label(iri),
        Term::Literal { value, .. } => value.trim().to_string(),
    }
}

pub fn convert_dbpedia(
    triples: &[SymbolTriple],
    source: &Entity,
    config: &DbpediaConfig,
) -> Conversion {
    let mut out = Conversion::default();
    for (i, t) in triples.iter().enumerate() {
        let row = i + 1;
        let skip = |out: &mut Conversion, why: String| {
            out.log.push(LogLine::at(
                None,
                format!(
                    "row {row} ({}) skipped: {why}",
                    display_iri(t.subject.as_str())
                ),
            ))
        };
        let built = match t.predicate {
            SymbolPredicate::Symbol => {
                if let Some(x) = t
                    .subject_types
                    .iter()
                    .find(|ty| config.excluded_types.contains(*ty))
                {
                    skip(
                        &mut out,
                        format!("subject typed {}", display_iri(x.as_str())),
                    );
                    continue;
                }
                let contexts: Result<Vec<Entity>, _> = t
                    .subject_types
                    .iter()
                    .map(|ty| Entity::context(&type_label(ty)))
                    .collect();
                contexts.and_then(|mut contexts| {
                    if contexts.is_empty() {
                        contexts.push(Entity::general_context());
                    }
                    let simulacrum = Entity::simulacrum(&term_label(&t.object))?;
                    let rc = Entity::reality_counterpart(&resource_label(&t.subject))?;
                    Ok((simulacrum, rc, contexts))
                })
            }
            SymbolPredicate::Subject => {
                let category = term_label(&t.object);
                Entity::simulacrum(&resource_label(&t.subject)).and_then(|simulacrum| {
                    let rc = Entity::reality_counterpart(&clean_category(&category))?;
                    Ok((simulacrum, rc, vec![Entity::general_context()]))
                })
            }
        };
        let (simulacrum, rc, contexts) = match built {
            Ok(parts) => parts,
            Err(e) => {
                skip(&mut out, e.to_string());
                continue;
            }
        };
        match Simulation::build(
            SimulationKind::Generic,
            simulacrum,
            vec![(RcRelation::Has, rc)],
            contexts,
            vec![source.clone()],
        ) {
            Ok(sim) => out.push(sim, None),
            Err(e) => skip(&mut out, e.to_string()),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Fetching

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct TransportError {
    pub message: String,
    /// Whether trying the same request again could succeed.
    pub retryable: bool,
}

/// One SPARQL request returning the raw JSON results document.
pub trait SparqlTransport {
    fn select(&self, endpoint: &str, query: &str) -> Result<String, TransportError>;
}

/// Blocking HTTP GET per the SPARQL protocol.
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .new_agent();
        HttpTransport { agent }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        HttpTransport::new(Duration::from_secs(60))
    }
}

impl SparqlTransport for HttpTransport {
    fn select(&self, endpoint: &str, query: &str) -> Result<String, TransportError> {
        let response = self
            .agent
            .get(endpoint)
            .query("query", query)
            .header("Accept", "application/sparql-results+json")
            .call();
        match response {
            Ok(mut r) => r.body_mut().read_to_string().map_err(|e| TransportError {
                message: e.to_string(),
                retryable: true,
            }),
            Err(ureq::Error::StatusCode(code)) => Err(TransportError {
                message: format!("HTTP status {code}"),
                retryable: code >= 500 || code == 408 || code == 429,
            }),
            Err(e) => Err(TransportError {
                message: e.to_string(),
                retryable: true,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchOptions {
    pub page_size: usize,
    pub max_attempts: u32,
    /// Delay before the second attempt; doubled for each further attempt.
    pub initial_backoff: Duration,
    pub max_backoff: Duration,
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions {
            page_size: 10_000,
            max_attempts: 5,
            initial_backoff: Duration::from_millis(500),
            max_backoff: Duration::from_secs(8),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FetchError {
    #[error("NetworkError: {query} query, page {page} (offset {offset}) failed after {attempts} attempts: {message}")]
    Network {
        query: &'static str,
        page: usize,
        offset: usize,
        attempts: u32,
        message: String,
    },
    #[error("MalformedResponse: {query} query, page {page} (offset {offset}): {message}")]
    MalformedResponse {
        query: &'static str,
        page: usize,
        offset: usize,
        message: String,
    },
}

const PREFIX_BLOCK: &str = "PREFIX dbp: <http://dbpedia.org/property/>
PREFIX dct: <http://purl.org/dc/terms/>
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
PREFIX skos: <http://www.w3.org/2004/02/skos/core#>
";

fn symbol_query(limit: usize, offset: usize) -> String {
    format!(
        "{PREFIX_BLOCK}SELECT ?subject ?object ?type WHERE {{
  ?subject dbp:symbol ?object .
  OPTIONAL {{ ?subject rdf:type ?type }}
}} ORDER BY ?subject ?object ?type LIMIT {limit} OFFSET {offset}"
    )
}

fn category_query(limit: usize, offset: usize) -> String {
    format!(
        "{PREFIX_BLOCK}SELECT ?subject ?category WHERE {{
  ?category a skos:Concept ; rdfs:label ?label .
  FILTER(CONTAINS(LCASE(STR(?label)), \"symbol\"))
  ?subject dct:subject ?category .
}} ORDER BY ?subject ?category LIMIT {limit} OFFSET {offset}"
    )
}

type Row = BTreeMap<String, Term>;

fn parse_results(body: &str) -> Result<Vec<Row>, String> {
    let doc: Value = serde_json::from_str(body).map_err(|e| format!("not JSON: {e}"))?;
    let bindings = doc
        .pointer("/results/bindings")
        .and_then(Value::as_array)
        .ok_or("missing results.bindings")?;
    let mut rows = Vec::with_capacity(bindings.len());
    for (i, b) in bindings.iter().enumerate() {
        let obj = b
            .as_object()
            .ok_or_else(|| format!("binding {i} is not an object"))?;
        let mut row = Row::new();
        for (var, cell) in obj {
            let kind = cell.get("type").and_then(Value::as_str);
            let value = cell
                .get("value")
                .and_then(Value::as_str)
                .ok_or_else(|| format!("binding {i}: ?{var} has no value"))?;
            let term = match kind {
                Some("uri") => Term::Iri(Iri::new(value).map_err(|e| format!("binding {i}: {e}"))?),
                Some("literal") | Some("typed-literal") => Term::Literal {
                    value: value.to_string(),
                    lang: cell
                        .get("xml:lang")
                        .and_then(Value::as_str)
                        .map(str::to_string),
                    datatype: None,
                },
                Some("bnode") => continue,
                other => return Err(format!("binding {i}: ?{var} has unknown type {other:?}")),
            };
            row.insert(var.clone(), term);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn backoff(opts: &FetchOptions, attempt: u32) -> Duration {
    let factor = 1u32
        .checked_shl(attempt.saturating_sub(1))
        .unwrap_or(u32::MAX);
    opts.initial_backoff
        .saturating_mul(factor)
        .min(opts.max_backoff)
}

fn fetch_all(
    transport: &dyn SparqlTransport,
    endpoint: &str,
    opts: &FetchOptions,
    name: &'static str,
    query: fn(usize, usize) -> String,
    required: [&str; 2],
) -> Result<Vec<Row>, FetchError> {
    let limit = opts.page_size.max(1);
    let attempts = opts.max_attempts.max(1);
    let mut rows = Vec::new();
    for page in 1.. {
        let offset = (page - 1) * limit;
        let q = query(limit, offset);
        let mut attempt = 0;
        let body = loop {
            attempt += 1;
            match transport.select(endpoint, &q) {
                Ok(body) => break body,
                Err(e) if e.retryable && attempt < attempts => {
                    std::thread::sleep(backoff(opts, attempt))
                }
                Err(e) => {
                    return Err(FetchError::Network {
                        query: name,
                        page,
                        offset,
                        attempts: attempt,
                        message: e.message,
                    })
                }
            }
        };
        let batch = parse_results(&body)
            .and_then(|rows| {
                let missing = rows.iter().position(|r| {
                    !matches!(r.get(required[0]), Some(Term::Iri(_)))
                        || !r.contains_key(required[1])
                });
                match missing {
                    Some(i) => Err(format!(
                        "binding {i} lacks ?{} or ?{}",
                        required[0], required[1]
                    )),
                    None => Ok(rows),
                }
            })
            .map_err(|message| FetchError::MalformedResponse {
                query: name,
                page,
                offset,
                message,
            })?;
        let n = batch.len();
        rows.extend(batch);
        if n < limit {
            break;
        }
    }
    Ok(rows)
}

/// Every `dbp:symbol` statement with its subject's types, then every
/// membership in a symbol category. Either all pages arrive or the failing
/// page is reported.
pub fn fetch_symbol_data(
    transport: &dyn SparqlTransport,
    endpoint: &str,
    opts: &FetchOptions,
) -> Result<Vec<SymbolTriple>, FetchError> {
    let mut out: Vec<SymbolTriple> = Vec::new();
    let mut position: BTreeMap<(Iri, Term), usize> = BTreeMap::new();
    for row in fetch_all(
        transport,
        endpoint,
        opts,
        "dbp:symbol",
        symbol_query,
        ["subject", "object"],
    )? {
        let (Some(Term::Iri(subject)), Some(object)) = (row.get("subject"), row.get("object"))
        else {
            continue;
        };
        let key = (subject.clone(), object.clone());
        let idx = *position.entry(key).or_insert_with(|| {
            out.push(SymbolTriple {
                subject: subject.clone(),
                predicate: SymbolPredicate::Symbol,
                object: object.clone(),
                subject_types: Vec::new(),
            });
            out.len() - 1
        });
        if let Some(Term::Iri(ty)) = row.get("type") {
            if !out[idx].subject_types.contains(ty) {
                out[idx].subject_types.push(ty.clone());
            }
        }
    }
    for row in fetch_all(
        transport,
        endpoint,
        opts,
        "dct:subject",
        category_query,
        ["subject", "category"],
    )? {
        let (Some(Term::Iri(subject)), Some(category)) = (row.get("subject"), row.get("category"))
        else {
            continue;
        };
        out.push(SymbolTriple {
            subject: subject.clone(),
            predicate: SymbolPredicate::Subject,
            object: category.clone(),
            subject_types: Vec::new(),
        });
    }
    Ok(out)
}
