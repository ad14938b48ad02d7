//! Plain-text symbol dictionary.
//!
//! ```text
//! # comment
//! hook
//!   attraction; deceitfulness
//!   [Christian] Christ's power to draw souls
//!   related to: crescent moon
//!   ~ fish hook:
//!     [Celtic] wisdom
//! ```
//!
//! A lemma starts at column 0. Indented lines are clauses: optional
//! `[Context]` groups (several groups, or comma-separated names inside one),
//! an optional relation phrase ending in `:`, then meanings separated by `;`.
//! `~ label:` opens a variant of the lemma; its clauses are indented deeper
//! than the `~` line.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Conversion, LogLine, ParseError, VariantPair};
use crate::model::{Entity, RcRelation, Simulation, SimulationKind};

pub const GRAMMAR: &str = "\
Dictionary format:
  lemma                      starts an entry at column 0
    meaning; meaning         indented clause, meanings separated by ';'
    [Context] meaning        contexts as bracketed prefixes, e.g. [Greek, Roman]
    related to: meaning      relation phrase before ':' picks the simulation kind
    ~ variant label:         opens a variant of the lemma
      [Context] meaning      variant clauses are indented deeper
  # comment                  ignored, as are blank lines";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub contexts: Vec<String>,
    pub relation: Option<String>,
    pub meanings: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantBlock {
    pub label: String,
    pub clauses: Vec<Clause>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub lemma: String,
    pub clauses: Vec<Clause>,
    pub variants: Vec<VariantBlock>,
    pub line: usize,
}

impl DictEntry {
    /// Meanings over all clauses, variants included.
    pub fn meaning_count(&self) -> usize {
        self.clauses
            .iter()
            .chain(self.variants.iter().flat_map(|v| &v.clauses))
            .map(|c| c.meanings.len())
            .sum()
    }
}

/// Parsed entries plus every malformed block. A malformed entry is dropped
/// whole and parsing resumes at the next lemma.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DictParse {
    pub entries: Vec<DictEntry>,
    pub errors: Vec<ParseError>,
}

struct OpenVariant {
    indent: usize,
    block: VariantBlock,
}

pub fn parse_dictionary(text: &str) -> DictParse {
    let mut out = DictParse::default();
    let mut current: Option<DictEntry> = None;
    let mut variant: Option<OpenVariant> = None;
    let mut skipping = false;

    fn close(out: &mut DictParse, entry: Option<DictEntry>, variant: Option<OpenVariant>) {
        if let Some(mut entry) = entry {
            if let Some(v) = variant {
                entry.variants.push(v.block);
            }
            if entry.clauses.is_empty() && entry.variants.is_empty() {
                out.errors.push(ParseError::new(
                    entry.line,
                    1,
                    format!("lemma {:?} has no clauses", entry.lemma),
                ));
            } else {
                out.entries.push(entry);
            }
        }
    }

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = line.chars().count() - trimmed.chars().count();

        if indent == 0 {
            close(&mut out, current.take(), variant.take());
            skipping = false;
            if trimmed.starts_with('~') || trimmed.starts_with('[') {
                out.errors
                    .push(ParseError::new(line_no, 1, "expected a lemma at column 0"));
                skipping = true;
                continue;
            }
            current = Some(DictEntry {
                lemma: trimmed.to_string(),
                clauses: Vec::new(),
                variants: Vec::new(),
                line: line_no,
            });
            continue;
        }
        if skipping {
            continue;
        }
        let Some(entry) = current.as_mut() else {
            out.errors.push(ParseError::new(
                line_no,
                indent + 1,
                "clause before the first lemma",
            ));
            skipping = true;
            continue;
        };

        if variant.as_ref().is_some_and(|v| indent <= v.indent) {
            entry.variants.push(variant.take().expect("checked").block);
        }

        let failed = if let Some(rest) = trimmed.strip_prefix('~') {
            if variant.is_some() {
                Err(ParseError::new(
                    line_no,
                    indent + 1,
                    "variants cannot be nested",
                ))
            } else {
                match rest.trim().strip_suffix(':').map(str::trim) {
                    Some(label) if !label.is_empty() => {
                        variant = Some(OpenVariant {
                            indent,
                            block: VariantBlock {
                                label: label.to_string(),
                                clauses: Vec::new(),
                                line: line_no,
                            },
                        });
                        Ok(())
                    }
                    _ => Err(ParseError::new(
                        line_no,
                        indent + 1,
                        "variant header must read `~ label:`",
                    )),
                }
            }
        } else {
            parse_clause(trimmed, line_no, indent + 1).map(|clause| match variant.as_mut() {
                Some(v) => v.block.clauses.push(clause),
                None => entry.clauses.push(clause),
            })
        };
        if let Err(e) = failed {
            out.errors.push(e);
            current = None;
            variant = None;
            skipping = true;
        }
    }
    close(&mut out, current, variant);
    out
}

fn parse_clause(text: &str, line: usize, column: usize) -> Result<Clause, ParseError> {
    let mut contexts = Vec::new();
    let mut rest = text;
    let mut col = column;
    while let Some(inner) = rest.strip_prefix('[') {
        let Some(end) = inner.find(']') else {
            return Err(ParseError::new(line, col, "unclosed `[`"));
        };
        for name in inner[..end].split(',') {
            let name = name.trim();
            if name.is_empty() {
                return Err(ParseError::new(line, col, "empty context name"));
            }
            contexts.push(name.to_string());
        }
        let after = &inner[end + 1..];
        let next = after.trim_start();
        col += 1 + end + 1 + (after.len() - next.len());
        rest = next;
    }
    let (relation, body) = match rest.split_once(':') {
        Some((phrase, body)) if !phrase.trim().is_empty() => (Some(normalize_phrase(phrase)), body),
        Some((_, _)) => {
            return Err(ParseError::new(
                line,
                col,
                "empty relation phrase before `:`",
            ))
        }
        None => (None, rest),
    };
    let meanings: Vec<String> = body
        .split(';')
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .map(str::to_string)
        .collect();
    if meanings.is_empty() {
        return Err(ParseError::new(line, col, "clause has no meaning"));
    }
    Ok(Clause {
        contexts,
        relation,
        meanings,
        line,
    })
}

fn normalize_phrase(phrase: &str) -> String {
    phrase
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// How a relation phrase is read: the simulation kind, the relation of the
/// meaning, and optionally a reality counterpart the phrase itself names
/// ("charm for X" has the charm and elicits X).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseRule {
    pub kind: SimulationKind,
    pub relation: RcRelation,
    pub head: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("phrase table line {line}: {message}")]
pub struct PhraseTableError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseTable {
    rules: BTreeMap<String, PhraseRule>,
}

impl Default for PhraseTable {
    fn default() -> Self {
        use RcRelation::*;
        use SimulationKind::*;
        let mut t = PhraseTable {
            rules: BTreeMap::new(),
        };
        for (phrase, kind, relation) in [
            ("related to", Relatedness, Has),
            ("attribute of", Attribute, Has),
            ("associated with", Association, Has),
            ("corresponds to", Correspondence, Has),
            ("manifestation of", Manifestation, Has),
            ("allusion to", Allusion, Has),
            ("emblem of", Emblematic, Has),
            ("protection from", Protection, Prevented),
            ("protection against", Protection, Prevented),
            ("cure for", Healing, Healed),
            ("heals", Healing, Healed),
            ("restores", Generic, Restored),
            ("eases", Generic, Eased),
        ] {
            t.insert(
                phrase,
                PhraseRule {
                    kind,
                    relation,
                    head: None,
                },
            );
        }
        t.insert(
            "charm for",
            PhraseRule {
                kind: Generic,
                relation: Elicited,
                head: Some("charm".into()),
            },
        );
        t
    }
}

impl PhraseTable {
    pub fn empty() -> Self {
        PhraseTable {
            rules: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, phrase: &str, rule: PhraseRule) {
        self.rules.insert(normalize_phrase(phrase), rule);
    }

    pub fn get(&self, phrase: &str) -> Option<&PhraseRule> {
        self.rules.get(&normalize_phrase(phrase))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PhraseRule)> {
        self.rules.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Reads `phrase <tab> kind <tab> relation [<tab> head]` lines on top of
    /// this table. Kinds and relations take their short names (`Protection`,
    /// `prevented`).
    pub fn load_overrides(&mut self, tsv: &str) -> Result<(), PhraseTableError> {
        for (idx, line) in tsv.lines().enumerate() {
            let err = |message: String| PhraseTableError {
                line: idx + 1,
                message,
            };
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if !(3..=4).contains(&cols.len()) {
                return Err(err(format!(
                    "expected 3 or 4 tab-separated fields, found {}",
                    cols.len()
                )));
            }
            let kind = cols[1].parse().map_err(|e| err(format!("{e}")))?;
            let relation = cols[2].parse().map_err(|e| err(format!("{e}")))?;
            let head = cols.get(3).filter(|h| !h.is_empty()).map(|h| h.to_string());
            self.insert(
                cols[0],
                PhraseRule {
                    kind,
                    relation,
                    head,
                },
            );
        }
        Ok(())
    }
}

/// Simulations and variant links for one entry, each stamped with `source`.
pub fn convert_entry(entry: &DictEntry, source: &Entity, table: &PhraseTable) -> Conversion {
    let mut out = Conversion::default();
    let lemma = match Entity::simulacrum(&entry.lemma) {
        Ok(e) => e,
        Err(e) => {
            out.log.push(LogLine::at(
                entry.line,
                format!("lemma {:?} skipped: {e}", entry.lemma),
            ));
            return out;
        }
    };
    convert_clauses(&lemma, &entry.clauses, source, table, &mut out);
    for block in &entry.variants {
        let variant = match Entity::simulacrum(&block.label) {
            Ok(e) => e,
            Err(e) => {
                out.log.push(LogLine::at(
                    block.line,
                    format!("variant {:?} skipped: {e}", block.label),
                ));
                continue;
            }
        };
        out.variants.push(VariantPair {
            base: lemma.clone(),
            variant: variant.clone(),
            line: Some(block.line),
        });
        convert_clauses(&variant, &block.clauses, source, table, &mut out);
    }
    out
}

fn convert_clauses(
    simulacrum: &Entity,
    clauses: &[Clause],
    source: &Entity,
    table: &PhraseTable,
    out: &mut Conversion,
) {
    for clause in clauses {
        let mut contexts = Vec::new();
        for name in &clause.contexts {
            match Entity::context(name) {
                Ok(c) => contexts.push(c),
                Err(e) => out.log.push(LogLine::at(
                    clause.line,
                    format!("context {name:?} ignored: {e}"),
                )),
            }
        }
        if contexts.is_empty() {
            contexts.push(Entity::general_context());
        }
        let rule = match &clause.relation {
            None => PhraseRule {
                kind: SimulationKind::Generic,
                relation: RcRelation::Has,
                head: None,
            },
            Some(phrase) => match table.get(phrase) {
                Some(rule) => rule.clone(),
                None => {
                    out.log.push(LogLine::at(
                        clause.line,
                        format!("UnknownRelationPhrase {phrase:?}: read as a plain simulation"),
                    ));
                    PhraseRule {
                        kind: SimulationKind::Generic,
                        relation: RcRelation::Has,
                        head: None,
                    }
                }
            },
        };
        let head = match rule.head.as_deref().map(Entity::reality_counterpart) {
            Some(Ok(e)) => Some(e),
            Some(Err(e)) => {
                out.log.push(LogLine::at(
                    clause.line,
                    format!("phrase head ignored: {e}"),
                ));
                None
            }
            None => None,
        };
        for meaning in &clause.meanings {
            let rc = match Entity::reality_counterpart(meaning) {
                Ok(rc) => rc,
                Err(e) => {
                    out.log.push(LogLine::at(
                        clause.line,
                        format!("meaning {meaning:?} skipped: {e}"),
                    ));
                    continue;
                }
            };
            let mut rcs = Vec::new();
            if let Some(h) = &head {
                rcs.push((RcRelation::Has, h.clone()));
            }
            rcs.push((rule.relation, rc));
            match Simulation::build(
                rule.kind,
                simulacrum.clone(),
                rcs,
                contexts.clone(),
                vec![source.clone()],
            ) {
                Ok(sim) => out.push(sim, clause.line),
                Err(e) => out.log.push(LogLine::at(
                    clause.line,
                    format!("meaning {meaning:?} skipped: {e}"),
                )),
            }
        }
    }
}

/// Converts every parsed entry; parse errors lead the log.
pub fn convert_dictionary(parsed: &DictParse, source: &Entity, table: &PhraseTable) -> Conversion {
    let mut out = Conversion::default();
    out.log.extend(
        parsed
            .errors
            .iter()
            .map(|e| LogLine::at(e.line, format!("column {}: {}", e.column, e.message))),
    );
    for entry in &parsed.entries {
        out.extend(convert_entry(entry, source, table));
    }
    out
}
