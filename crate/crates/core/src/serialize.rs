//! Turtle export and import.
//!
//! Export is byte-deterministic: a fixed prefix block, then one block per
//! subject in IRI order, predicates in schema order. Import reads the Turtle
//! subset the exporter writes (prefixes, IRIs, `a`, `;` and `,` lists, string
//! literals with language tags or datatypes) and rebuilds the graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, SimulationRecord};
use crate::model::{
    simulation_iri, Entity, Iri, Namespace, RcRelation, Role, SimulationKind, VariantLink,
};
use crate::vocab::{
    display_iri, Term, Triple, OWL_SAME_AS, PREFIXES, PROV_WAS_DERIVED_FROM, RDFS_LABEL, RDF_TYPE,
    SIM, SIM_HAS_CONTEXT, SIM_HAS_SIMULACRUM, SIM_HAS_VARIANT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Non-fatal findings while rebuilding a graph from Turtle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImportWarning {
    /// A simulation typed with a class outside the schema; it is read as a
    /// plain simulation and the type statement is preserved.
    UnknownClass { subject: Iri, class: Iri },
    /// An entity without `rdfs:label`; its local name is used instead.
    MissingLabel { subject: Iri },
    /// A labelled node that plays no role; its statements are preserved.
    RolelessNode { subject: Iri },
    /// A schema predicate whose object is a literal; the statement is
    /// preserved.
    LiteralObject { subject: Iri, predicate: Iri },
}

impl fmt::Display for ImportWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImportWarning::UnknownClass { subject, class } => write!(
                f,
                "{} is typed {} which is not a simulation class; reading it as sim:Simulation",
                display_iri(subject.as_str()),
                display_iri(class.as_str())
            ),
            ImportWarning::MissingLabel { subject } => {
                write!(f, "{} has no rdfs:label", display_iri(subject.as_str()))
            }
            ImportWarning::RolelessNode { subject } => write!(
                f,
                "{} plays no role in any simulation; kept as plain statements",
                display_iri(subject.as_str())
            ),
            ImportWarning::LiteralObject { subject, predicate } => write!(
                f,
                "{} {} has a literal object; kept as a plain statement",
                display_iri(subject.as_str()),
                display_iri(predicate.as_str())
            ),
        }
    }
}

/// Result of [`import_turtle`].
#[derive(Debug, Clone)]
pub struct Import {
    pub graph: Graph,
    pub warnings: Vec<ImportWarning>,
}

fn iri(s: &str) -> Iri {
    Iri::new(s).expect("vocabulary constants are valid")
}

/// Position of a predicate in the serialized order.
fn predicate_rank(p: &Iri) -> usize {
    match p.as_str() {
        SIM_HAS_SIMULACRUM => 0,
        SIM_HAS_CONTEXT => 10,
        PROV_WAS_DERIVED_FROM => 11,
        RDF_TYPE => 12,
        RDFS_LABEL => 13,
        SIM_HAS_VARIANT => 14,
        OWL_SAME_AS => 15,
        _ => RcRelation::from_property_iri(p).map_or(16, |r| 1 + r as usize),
    }
}

/// Every statement the exporter writes, in output order.
pub fn triples(g: &Graph) -> Vec<Triple> {
    let rdf_type = iri(RDF_TYPE);
    let has_simulacrum = iri(SIM_HAS_SIMULACRUM);
    let has_context = iri(SIM_HAS_CONTEXT);
    let derived_from = iri(PROV_WAS_DERIVED_FROM);
    let label = iri(RDFS_LABEL);
    let same_as = iri(OWL_SAME_AS);
    let has_variant = iri(SIM_HAS_VARIANT);

    let mut out = Vec::new();
    for rec in g.simulations() {
        let s = rec.id();
        match g.kind_conflicts().get(s) {
            Some(kinds) => {
                for k in kinds {
                    out.push(Triple::new(s.clone(), rdf_type.clone(), k.class_iri()));
                }
            }
            None => out.push(Triple::new(
                s.clone(),
                rdf_type.clone(),
                rec.kind().class_iri(),
            )),
        }
        for sc in rec.simulacra() {
            out.push(Triple::new(s.clone(), has_simulacrum.clone(), sc.clone()));
        }
        for (rel, rc) in rec.reality_counterparts() {
            out.push(Triple::new(s.clone(), rel.property_iri(), rc.clone()));
        }
        for c in rec.contexts() {
            out.push(Triple::new(s.clone(), has_context.clone(), c.clone()));
        }
        for src in rec.sources() {
            out.push(Triple::new(s.clone(), derived_from.clone(), src.clone()));
        }
    }
    for e in g.entities() {
        for role in e.roles() {
            out.push(Triple::new(
                e.id().clone(),
                rdf_type.clone(),
                role.class_iri(),
            ));
        }
        out.push(Triple::new(
            e.id().clone(),
            label.clone(),
            Term::literal(e.label()),
        ));
        for link in e.external_links() {
            out.push(Triple::new(e.id().clone(), same_as.clone(), link.clone()));
        }
    }
    for link in g.variants() {
        out.push(Triple::new(
            link.base.clone(),
            has_variant.clone(),
            link.variant.clone(),
        ));
    }
    out.extend(g.extras().iter().cloned());

    let mut ranked: Vec<(usize, Triple)> = out
        .into_iter()
        .map(|t| (predicate_rank(&t.predicate), t))
        .collect();
    ranked.sort_unstable_by(|(ra, a), (rb, b)| {
        (&a.subject, ra, &a.predicate, &a.object).cmp(&(&b.subject, rb, &b.predicate, &b.object))
    });
    let mut out: Vec<Triple> = ranked.into_iter().map(|(_, t)| t).collect();
    out.dedup();
    out
}

/// Serializes `g` as Turtle.
pub fn export_turtle(g: &Graph) -> String {
    let mut out = String::new();
    for (prefix, ns) in PREFIXES {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }
    let all = triples(g);
    let mut i = 0;
    while i < all.len() {
        let subject = &all[i].subject;
        out.push('\n');
        out.push_str(&display_iri(subject.as_str()));
        let mut first_predicate = true;
        while i < all.len() && &all[i].subject == subject {
            let predicate = &all[i].predicate;
            if first_predicate {
                out.push(' ');
                first_predicate = false;
            } else {
                out.push_str(" ;\n    ");
            }
            if predicate.as_str() == RDF_TYPE {
                out.push('a');
            } else {
                out.push_str(&display_iri(predicate.as_str()));
            }
            let mut first_object = true;
            while i < all.len() && &all[i].subject == subject && &all[i].predicate == predicate {
                out.push_str(if first_object { " " } else { ", " });
                first_object = false;
                out.push_str(&all[i].object.to_string());
                i += 1;
            }
        }
        out.push_str(" .\n");
    }
    out
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    PName(String, String),
    A,
    Literal(String, Option<String>, Option<Box<Tok>>),
    Semicolon,
    Comma,
    Dot,
    PrefixKw { sparql: bool },
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else {
                return Ok(out);
            };
            let tok = match c {
                '<' => {
                    self.bump();
                    Tok::Iri(self.iri_ref(line, column)?)
                }
                '"' | '\'' => self.literal(line, column)?,
                ';' => {
                    self.bump();
                    Tok::Semicolon
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '@' => {
                    self.bump();
                    let word = self.word();
                    match word.as_str() {
                        "prefix" => Tok::PrefixKw { sparql: false },
                        "base" => return Err(self.err(line, column, "@base is not supported")),
                        _ => {
                            return Err(self.err(
                                line,
                                column,
                                format!("unexpected directive @{word}"),
                            ))
                        }
                    }
                }
                '[' | '(' | '_' => {
                    return Err(self.err(
                        line,
                        column,
                        "blank nodes and collections are not supported",
                    ))
                }
                c if c.is_alphanumeric() || c == ':' => {
                    let word = self.pname_chars();
                    if word == "a" {
                        Tok::A
                    } else if word.eq_ignore_ascii_case("prefix") {
                        Tok::PrefixKw { sparql: true }
                    } else if word.eq_ignore_ascii_case("base") {
                        return Err(self.err(line, column, "BASE is not supported"));
                    } else {
                        match word.split_once(':') {
                            Some((p, l)) => Tok::PName(p.to_string(), l.to_string()),
                            None => {
                                return Err(self.err(
                                    line,
                                    column,
                                    format!("unexpected token {word:?}"),
                                ))
                            }
                        }
                    }
                }
                other => {
                    return Err(self.err(line, column, format!("unexpected character {other:?}")))
                }
            };
            out.push(Spanned { tok, line, column });
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_alphanumeric() || c == '-' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    /// Prefixed-name characters; a trailing `.` is left for the statement
    /// terminator.
    fn pname_chars(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '%') {
                s.push(c);
                self.bump();
            } else if c == '.' {
                let mut ahead = self.chars.clone();
                ahead.next();
                match ahead.peek() {
                    Some(&n) if n.is_alphanumeric() || matches!(n, '_' | '-' | ':' | '%' | '.') => {
                        s.push(c);
                        self.bump();
                    }
                    _ => break,
                }
            } else {
                break;
            }
        }
        s
    }

    fn iri_ref(&mut self, line: usize, column: usize) -> Result<String, SyntaxError> {
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(s),
                Some(c) if c.is_whitespace() => {
                    return Err(self.err(line, column, "whitespace inside IRI"))
                }
                Some(c) => s.push(c),
                None => return Err(self.err(line, column, "unterminated IRI")),
            }
        }
    }

    fn literal(&mut self, line: usize, column: usize) -> Result<Tok, SyntaxError> {
        let quote = self.bump().expect("peeked");
        let long = {
            let mut ahead = self.chars.clone();
            ahead.next() == Some(quote) && ahead.next() == Some(quote)
        };
        if long {
            self.bump();
            self.bump();
        }
        let mut value = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(line, column, "unterminated string literal"));
            };
            if c == quote {
                if !long {
                    break;
                }
                let mut ahead = self.chars.clone();
                if ahead.next() == Some(quote) && ahead.next() == Some(quote) {
                    self.bump();
                    self.bump();
                    break;
                }
                value.push(c);
            } else if c == '\\' {
                let esc = self
                    .bump()
                    .ok_or_else(|| self.err(line, column, "unterminated escape"))?;
                match esc {
                    't' => value.push('\t'),
                    'n' => value.push('\n'),
                    'r' => value.push('\r'),
                    'b' => value.push('\u{8}'),
                    'f' => value.push('\u{c}'),
                    '"' | '\'' | '\\' => value.push(esc),
                    'u' | 'U' => {
                        let n = if esc == 'u' { 4 } else { 8 };
                        let hex: String = (0..n).filter_map(|_| self.bump()).collect();
                        let ch = u32::from_str_radix(&hex, 16)
                            .ok()
                            .and_then(char::from_u32)
                            .ok_or_else(|| {
                                self.err(self.line, self.column, "bad unicode escape")
                            })?;
                        value.push(ch);
                    }
                    other => {
                        return Err(self.err(
                            self.line,
                            self.column,
                            format!("unknown escape \\{other}"),
                        ))
                    }
                }
            } else if c == '\n' && !long {
                return Err(self.err(line, column, "unterminated string literal"));
            } else {
                value.push(c);
            }
        }
        let mut lang = None;
        let mut datatype = None;
        match self.chars.peek() {
            Some('@') => {
                self.bump();
                let tag = self.word();
                if tag.is_empty() {
                    return Err(self.err(self.line, self.column, "empty language tag"));
                }
                lang = Some(tag);
            }
            Some('^') => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(self.err(self.line, self.column, "expected ^^"));
                }
                let (l, c) = (self.line, self.column);
                let dt = match self.chars.peek() {
                    Some('<') => {
                        self.bump();
                        Tok::Iri(self.iri_ref(l, c)?)
                    }
                    _ => {
                        let word = self.pname_chars();
                        match word.split_once(':') {
                            Some((p, loc)) => Tok::PName(p.to_string(), loc.to_string()),
                            None => return Err(self.err(l, c, "expected datatype IRI")),
                        }
                    }
                };
                datatype = Some(Box::new(dt));
            }
            _ => {}
        }
        Ok(Tok::Literal(value, lang, datatype))
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prefixes: BTreeMap<String, String>,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Spanned, SyntaxError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| SyntaxError {
                line: self.end.0,
                column: self.end.1,
                message: "unexpected end of document".into(),
            })?;
        self.pos += 1;
        Ok(t)
    }

    fn err(at: &Spanned, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn resolve(&self, at: &Spanned) -> Result<Iri, SyntaxError> {
        let raw = match &at.tok {
            Tok::Iri(s) => s.clone(),
            Tok::PName(p, l) => {
                let ns = self
                    .prefixes
                    .get(p)
                    .ok_or_else(|| Self::err(at, format!("undeclared prefix {p:?}")))?;
                format!("{ns}{l}")
            }
            Tok::A => RDF_TYPE.to_string(),
            _ => return Err(Self::err(at, "expected an IRI")),
        };
        Iri::new(&raw).map_err(|e| Self::err(at, e.to_string()))
    }

    fn parse(mut self) -> Result<Vec<Triple>, SyntaxError> {
        let mut out = Vec::new();
        while let Some(t) = self.peek().cloned() {
            if let Tok::PrefixKw { sparql } = t.tok {
                self.pos += 1;
                let name = self.next()?;
                let prefix = match &name.tok {
                    Tok::PName(p, l) if l.is_empty() => p.clone(),
                    _ => return Err(Self::err(&name, "expected `prefix:`")),
                };
                let ns = self.next()?;
                let Tok::Iri(ns) = ns.tok else {
                    return Err(Self::err(&ns, "expected namespace IRI"));
                };
                if !sparql {
                    let dot = self.next()?;
                    if dot.tok != Tok::Dot {
                        return Err(Self::err(&dot, "expected `.` after @prefix"));
                    }
                }
                self.prefixes.insert(prefix, ns);
                continue;
            }
            let subject_tok = self.next()?;
            if matches!(subject_tok.tok, Tok::A) {
                return Err(Self::err(&subject_tok, "`a` cannot be a subject"));
            }
            let subject = self.resolve(&subject_tok)?;
            'statement: loop {
                let p = self.next()?;
                let predicate = self.resolve(&p)?;
                loop {
                    let o = self.next()?;
                    let object = match &o.tok {
                        Tok::Literal(value, lang, dt) => Term::Literal {
                            value: value.clone(),
                            lang: lang.clone(),
                            datatype: match dt {
                                Some(dt) => Some(self.resolve(&Spanned {
                                    tok: (**dt).clone(),
                                    line: o.line,
                                    column: o.column,
                                })?),
                                None => None,
                            },
                        },
                        Tok::A => return Err(Self::err(&o, "`a` cannot be an object")),
                        _ => Term::Iri(self.resolve(&o)?),
                    };
                    out.push(Triple::new(subject.clone(), predicate.clone(), object));
                    let sep = self.next()?;
                    match sep.tok {
                        Tok::Comma => {}
                        Tok::Semicolon => {
                            while matches!(self.peek().map(|t| &t.tok), Some(Tok::Semicolon)) {
                                self.pos += 1;
                            }
                            if matches!(self.peek().map(|t| &t.tok), Some(Tok::Dot)) {
                                self.pos += 1;
                                break 'statement;
                            }
                            break;
                        }
                        Tok::Dot => break 'statement,
                        _ => return Err(Self::err(&sep, "expected `,`, `;` or `.`")),
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Parses the supported Turtle subset into plain triples.
pub fn parse_triples(text: &str) -> Result<Vec<Triple>, SyntaxError> {
    let toks = Lexer::new(text).tokens()?;
    let end = text.lines().count().max(1);
    Parser {
        toks,
        pos: 0,
        prefixes: BTreeMap::new(),
        end: (end, 1),
    }
    .parse()
}

/// Rebuilds a graph from a Turtle document.
pub fn import_turtle(text: &str) -> Result<Import, SyntaxError> {
    Ok(rebuild(parse_triples(text)?))
}

#[derive(Default)]
struct SimParts {
    kinds: BTreeSet<SimulationKind>,
    simulacra: BTreeSet<Iri>,
    rcs: Vec<(RcRelation, Iri)>,
    contexts: BTreeSet<Iri>,
    sources: BTreeSet<Iri>,
}

#[derive(Default)]
struct EntityParts {
    label: Option<String>,
    label_triples: Vec<Triple>,
    roles: BTreeSet<Role>,
    links: BTreeSet<Iri>,
}

fn rebuild(statements: Vec<Triple>) -> Import {
    let mut warnings = Vec::new();
    let mut sims: BTreeMap<Iri, SimParts> = BTreeMap::new();
    let mut ents: BTreeMap<Iri, EntityParts> = BTreeMap::new();
    let mut variants = Vec::new();
    let mut extras = Vec::new();
    let mut foreign_types: Vec<Triple> = Vec::new();

    for t in statements {
        let p = t.predicate.as_str();
        let object_iri = t.object.as_iri().cloned();
        let is_schema_link = p == SIM_HAS_SIMULACRUM
            || p == SIM_HAS_CONTEXT
            || p == PROV_WAS_DERIVED_FROM
            || p == SIM_HAS_VARIANT
            || RcRelation::from_property_iri(&t.predicate).is_some();
        if is_schema_link && object_iri.is_none() {
            warnings.push(ImportWarning::LiteralObject {
                subject: t.subject.clone(),
                predicate: t.predicate.clone(),
            });
            extras.push(t);
            continue;
        }
        match p {
            RDF_TYPE => {
                let class = object_iri.clone();
                if let Some(kind) = class.as_ref().and_then(SimulationKind::from_class_iri) {
                    sims.entry(t.subject.clone())
                        .or_default()
                        .kinds
                        .insert(kind);
                } else if let Some(role) = class.as_ref().and_then(Role::from_class_iri) {
                    ents.entry(t.subject.clone())
                        .or_default()
                        .roles
                        .insert(role);
                } else {
                    foreign_types.push(t);
                }
            }
            SIM_HAS_SIMULACRUM => {
                let o = object_iri.expect("checked");
                sims.entry(t.subject)
                    .or_default()
                    .simulacra
                    .insert(o.clone());
                ents.entry(o).or_default().roles.insert(Role::Simulacrum);
            }
            SIM_HAS_CONTEXT => {
                let o = object_iri.expect("checked");
                sims.entry(t.subject)
                    .or_default()
                    .contexts
                    .insert(o.clone());
                ents.entry(o).or_default().roles.insert(Role::Context);
            }
            PROV_WAS_DERIVED_FROM => {
                let o = object_iri.expect("checked");
                sims.entry(t.subject).or_default().sources.insert(o.clone());
                ents.entry(o).or_default().roles.insert(Role::Source);
            }
            SIM_HAS_VARIANT => {
                let o = object_iri.expect("checked");
                ents.entry(t.subject.clone()).or_default();
                ents.entry(o.clone()).or_default();
                variants.push(VariantLink {
                    base: t.subject,
                    variant: o,
                });
            }
            RDFS_LABEL => match &t.object {
                Term::Literal { value, .. } => {
                    let parts = ents.entry(t.subject.clone()).or_default();
                    if parts.label.as_ref().is_none_or(|l| value < l) {
                        parts.label = Some(value.clone());
                    }
                    parts.label_triples.push(t);
                }
                Term::Iri(_) => extras.push(t),
            },
            OWL_SAME_AS => match object_iri {
                Some(o) => {
                    ents.entry(t.subject).or_default().links.insert(o);
                }
                None => extras.push(t),
            },
            _ => {
                if let Some(rel) = RcRelation::from_property_iri(&t.predicate) {
                    let o = object_iri.expect("checked");
                    let parts = sims.entry(t.subject).or_default();
                    if !parts.rcs.contains(&(rel, o.clone())) {
                        parts.rcs.push((rel, o.clone()));
                    }
                    ents.entry(o)
                        .or_default()
                        .roles
                        .insert(Role::RealityCounterpart);
                } else {
                    extras.push(t);
                }
            }
        }
    }

    for t in foreign_types {
        if sims.contains_key(&t.subject) {
            if let Some(class) = t.object.as_iri() {
                if class.namespace() != Namespace::Schema || !class.as_str().starts_with(SIM) {
                    warnings.push(ImportWarning::UnknownClass {
                        subject: t.subject.clone(),
                        class: class.clone(),
                    });
                }
            }
        }
        extras.push(t);
    }

    let mut g = Graph::new();
    for (id, parts) in &mut ents {
        if sims.contains_key(id) {
            // a simulation node, not an entity
            extras.append(&mut parts.label_triples);
            continue;
        }
        if parts.roles.is_empty() {
            if !parts.label_triples.is_empty() {
                warnings.push(ImportWarning::RolelessNode {
                    subject: id.clone(),
                });
            }
            extras.append(&mut parts.label_triples);
            for link in &parts.links {
                extras.push(Triple::new(id.clone(), iri(OWL_SAME_AS), link.clone()));
            }
            continue;
        }
        let label = match parts.label.take() {
            Some(l) => l,
            None => {
                warnings.push(ImportWarning::MissingLabel {
                    subject: id.clone(),
                });
                id.local_name().to_string()
            }
        };
        g.upsert_entity(Entity::from_parts(
            id.clone(),
            label,
            std::mem::take(&mut parts.roles),
            std::mem::take(&mut parts.links),
        ));
    }

    for (id, parts) in sims {
        let kind = match parts.kinds.len() {
            0 => SimulationKind::Generic,
            1 => *parts.kinds.first().expect("len 1"),
            _ => {
                let specialized: BTreeSet<_> = parts
                    .kinds
                    .iter()
                    .copied()
                    .filter(|k| *k != SimulationKind::Generic)
                    .collect();
                if specialized.len() > 1 {
                    g.record_kind_conflict(id.clone(), parts.kinds.clone());
                }
                specialized
                    .first()
                    .copied()
                    .unwrap_or(SimulationKind::Generic)
            }
        };
        let rcs = order_rcs(&id, &parts.simulacra, parts.rcs);
        g.put_record(SimulationRecord::new(
            id,
            kind,
            parts.simulacra,
            rcs,
            parts.contexts,
            parts.sources,
        ));
    }
    for link in variants {
        g.put_variant(link);
    }
    for t in extras {
        g.put_extra(t);
    }
    Import { graph: g, warnings }
}

/// Restores construction order of reality counterparts from the id when the
/// id follows the hyphen-join scheme; otherwise sorts them.
fn order_rcs(
    id: &Iri,
    simulacra: &BTreeSet<Iri>,
    mut rcs: Vec<(RcRelation, Iri)>,
) -> Vec<(RcRelation, Iri)> {
    rcs.sort_by(|a, b| (&a.1, a.0).cmp(&(&b.1, b.0)));
    let matches_scheme =
        simulacra.len() == 1 && rcs.iter().all(|(_, rc)| rc.namespace() == Namespace::Data) && {
            let unique: BTreeSet<_> = rcs.iter().map(|(_, rc)| rc).collect();
            unique.len() == rcs.len()
        };
    if !matches_scheme {
        return rcs;
    }
    let segments: Vec<&str> = id.local_name().split('-').skip(1).collect();
    if segments.len() != rcs.len() {
        return rcs;
    }
    let mut ordered = Vec::with_capacity(rcs.len());
    for seg in &segments {
        match rcs.iter().position(|(_, rc)| rc.local_name() == *seg) {
            Some(i) => ordered.push(rcs.swap_remove(i)),
            None => {
                ordered.append(&mut rcs);
                ordered.sort_by(|a, b| (&a.1, a.0).cmp(&(&b.1, b.0)));
                return ordered;
            }
        }
    }
    let simulacrum = simulacra.first().expect("len 1");
    debug_assert_eq!(
        &simulation_iri(simulacrum, ordered.iter().map(|(_, rc)| rc)),
        id
    );
    ordered
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_simulation;
    use crate::validate::{check_axioms, Axiom};

    fn kb(local: &str) -> Iri {
        Iri::kb(local).unwrap()
    }

    fn normalize(s: &str) -> String {
        s.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    fn bee() -> Graph {
        let mut g = Graph::new();
        g.insert_simulation(
            build_simulation(
                SimulationKind::Generic,
                Entity::simulacrum("bee").unwrap(),
                vec![(
                    RcRelation::Has,
                    Entity::reality_counterpart("resurrection").unwrap(),
                )],
                vec![Entity::context("Egyptian").unwrap()],
                vec![Entity::source("Olderr").unwrap()],
            )
            .unwrap(),
        )
        .unwrap();
        g
    }

    #[test]
    fn empty_graph_is_prefix_header() {
        let out = export_turtle(&Graph::new());
        assert_eq!(out.lines().count(), 6);
        assert!(out.lines().all(|l| l.starts_with("@prefix")));
        let order: Vec<_> = out
            .lines()
            .map(|l| l.split_whitespace().nth(1).unwrap())
            .collect();
        assert_eq!(order, ["rdf:", "rdfs:", "owl:", "prov:", "sim:", "kb:"]);
    }

    #[test]
    fn bee_resurrection_block() {
        let out = export_turtle(&bee());
        assert!(normalize(&out).contains(
            "kb:bee-resurrection sim:hasSimulacrum kb:bee ; sim:hasRealityCounterpart kb:resurrection ; sim:hasContext kb:egyptian"
        ));
        assert!(out.contains("prov:wasDerivedFrom kb:olderr"));
        assert!(out.contains("kb:bee a sim:Simulacrum ;\n    rdfs:label \"bee\" ."));
        assert_eq!(export_turtle(&bee()), out);
    }

    #[test]
    fn agate_elicited() {
        let mut g = Graph::new();
        g.insert_simulation(
            build_simulation(
                SimulationKind::Generic,
                Entity::simulacrum("agate").unwrap(),
                vec![
                    (
                        RcRelation::Has,
                        Entity::reality_counterpart("charm").unwrap(),
                    ),
                    (
                        RcRelation::Elicited,
                        Entity::reality_counterpart("healthy blood").unwrap(),
                    ),
                ],
                vec![Entity::context("Arabian").unwrap()],
                vec![Entity::source("Olderr").unwrap()],
            )
            .unwrap(),
        )
        .unwrap();
        let out = export_turtle(&g);
        assert!(out.contains("sim:elicitedRealityCounterpart kb:healthyBlood"));
        let back = import_turtle(&out).unwrap();
        assert!(back.warnings.is_empty());
        assert_eq!(back.graph, g);
    }

    #[test]
    fn roundtrip_simple() {
        let g = bee();
        let back = import_turtle(&export_turtle(&g)).unwrap().graph;
        assert_eq!(back, g);
        assert_eq!(triples(&g).len(), g.stats().total.n_triples);
    }

    #[test]
    fn prevented_fixture() {
        let doc = r#"@prefix sim: <https://w3id.org/simulation/ontology/> .
@prefix kb: <https://w3id.org/simulation/data/> .
@prefix prov: <http://www.w3.org/ns/prov#> .
kb:agate-evilSpirits a sim:ProtectionSimulation ;
    sim:hasSimulacrum kb:agate ; sim:preventedRealityCounterpart kb:evilSpirits ;
    sim:hasContext kb:generalOrUnknown ; prov:wasDerivedFrom kb:olderr .
"#;
        let imp = import_turtle(doc).unwrap();
        let rec = imp.graph.simulation(&kb("agate-evilSpirits")).unwrap();
        assert_eq!(rec.kind(), SimulationKind::Protection);
        assert_eq!(
            rec.reality_counterparts(),
            &[(RcRelation::Prevented, kb("evilSpirits"))]
        );
        // labels are missing but roles are positional
        assert_eq!(imp.warnings.len(), 4);
        assert_eq!(check_axioms(&imp.graph), vec![]);
    }

    #[test]
    fn missing_source_fixture() {
        let doc = r#"PREFIX sim: <https://w3id.org/simulation/ontology/>
PREFIX kb: <https://w3id.org/simulation/data/>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
kb:olive-peace a sim:Simulation ;
    sim:hasSimulacrum kb:olive ;
    sim:hasRealityCounterpart kb:peace ;
    sim:hasContext kb:greek .
kb:olive rdfs:label "olive" .
kb:peace rdfs:label "peace"@en .
kb:greek rdfs:label "Greek" .
"#;
        let g = import_turtle(doc).unwrap().graph;
        let v = check_axioms(&g);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom, Axiom::MissingSource);
        assert_eq!(v[0].subject, kb("olive-peace"));
    }

    #[test]
    fn syntax_errors_carry_line() {
        let doc = "@prefix kb: <https://w3id.org/simulation/data/> .\nkb:a <http://www.w3.org/2000/01/rdf-schema#label> \"oops .\nkb:b kb:c kb:d .\n";
        let err = import_turtle(doc).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("unterminated"));

        let err = import_turtle("kb:a kb:b kb:c .").unwrap_err();
        assert!(err.message.contains("undeclared prefix"));
        let err = import_turtle(
            "@prefix kb: <https://w3id.org/simulation/data/> .\nkb:a kb:b [ kb:c kb:d ] .",
        )
        .unwrap_err();
        assert_eq!((err.line, err.column), (2, 11));
    }

    #[test]
    fn unknown_predicates_and_classes_survive() {
        let doc = r#"@prefix sim: <https://w3id.org/simulation/ontology/> .
@prefix kb: <https://w3id.org/simulation/data/> .
@prefix prov: <http://www.w3.org/ns/prov#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix dct: <http://purl.org/dc/terms/> .
kb:a-b a owl:Thing ; sim:hasSimulacrum kb:a ; sim:hasRealityCounterpart kb:b ;
    sim:hasContext kb:c ; prov:wasDerivedFrom kb:s ; dct:created "2021"^^<http://www.w3.org/2001/XMLSchema#gYear> .
kb:a owl:sameAs <http://wordnet-rdf.princeton.edu/id/1-n> ; dct:note 'single \'quoted\'', """long
text""" .
"#;
        let imp = import_turtle(doc).unwrap();
        assert!(imp
            .warnings
            .iter()
            .any(|w| matches!(w, ImportWarning::UnknownClass { .. })));
        let g = imp.graph;
        assert_eq!(
            g.simulation(&kb("a-b")).unwrap().kind(),
            SimulationKind::Generic
        );
        assert_eq!(g.extras().len(), 4);
        assert_eq!(g.entity(&kb("a")).unwrap().external_links().len(), 1);
        let again = import_turtle(&export_turtle(&g)).unwrap().graph;
        assert_eq!(again, g);
    }

    #[test]
    fn conflicting_kinds_roundtrip() {
        let doc = r#"@prefix sim: <https://w3id.org/simulation/ontology/> .
@prefix kb: <https://w3id.org/simulation/data/> .
kb:a-b a sim:HealingSimulation, sim:ProtectionSimulation ; sim:hasSimulacrum kb:a ; sim:hasRealityCounterpart kb:b .
"#;
        let g = import_turtle(doc).unwrap().graph;
        assert_eq!(g.kind_conflicts().len(), 1);
        let v = check_axioms(&g);
        assert!(v.iter().any(|v| v.axiom == Axiom::KindConflict));
        assert_eq!(import_turtle(&export_turtle(&g)).unwrap().graph, g);
    }
}
