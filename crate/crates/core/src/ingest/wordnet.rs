//! Synset records whose glosses state what they symbolize.
//!
//! Input is tab-separated: `synset_iri  label  gloss  hyponym_flag`, where the
//! flag marks hyponyms of the symbol and emblem synsets (`1`/`0`,
//! `true`/`false`).

use thiserror::Error;

use super::{Conversion, LogLine, ParseError};
use crate::model::{Entity, Iri, RcRelation, Simulation, SimulationKind};

const TRIGGERS: [&str; 3] = ["symbol of", "emblem of", "symbolizes"];
const BOUNDARIES: [&str; 4] = [";", ".", " who ", " which "];
const ARTICLES: [&str; 3] = ["a ", "an ", "the "];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynsetRecord {
    pub synset_iri: Iri,
    pub label: String,
    pub gloss: String,
    pub is_symbol_hyponym: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynsetError {
    #[error("NoTrigger: gloss of {0:?} names no symbolic meaning")]
    NoTrigger(String),
    #[error("{label:?} skipped: {message}")]
    Unconvertible { label: String, message: String },
}

/// Records and malformed lines of a synset file.
pub fn parse_synsets(tsv: &str) -> (Vec<SynsetRecord>, Vec<ParseError>) {
    let (records, errors) = parse_numbered(tsv);
    (records.into_iter().map(|(_, r)| r).collect(), errors)
}

fn parse_numbered(tsv: &str) -> (Vec<(usize, SynsetRecord)>, Vec<ParseError>) {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (idx, line) in tsv.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            errors.push(ParseError::new(
                line_no,
                1,
                format!("expected 4 tab-separated fields, found {}", cols.len()),
            ));
            continue;
        }
        let synset_iri =
            match Iri::new(cols[0].trim().trim_start_matches('<').trim_end_matches('>')) {
                Ok(iri) => iri,
                Err(e) => {
                    errors.push(ParseError::new(line_no, 1, e.to_string()));
                    continue;
                }
            };
        let flag_col = cols[0].len() + cols[1].len() + cols[2].len() + 4;
        let is_symbol_hyponym = match cols[3].trim().to_ascii_lowercase().as_str() {
            "1" | "true" => true,
            "0" | "false" | "" => false,
            other => {
                errors.push(ParseError::new(
                    line_no,
                    flag_col,
                    format!("bad hyponym flag {other:?}"),
                ));
                continue;
            }
        };
        records.push((
            line_no,
            SynsetRecord {
                synset_iri,
                label: cols[1].trim().to_string(),
                gloss: cols[2].trim().to_string(),
                is_symbol_hyponym,
            },
        ));
    }
    (records, errors)
}

fn find_trigger(gloss: &str) -> Option<usize> {
    let lower = gloss.to_lowercase();
    TRIGGERS
        .iter()
        .filter_map(|t| lower.find(t).map(|i| (i, i + t.len())))
        .min()
        .map(|(_, end)| end)
}

pub fn has_trigger(gloss: &str) -> bool {
    find_trigger(gloss).is_some()
}

/// Symbol and emblem hyponyms, plus any record whose gloss carries a trigger
/// phrase.
pub fn select_synsets(records: &[SynsetRecord]) -> Vec<SynsetRecord> {
    records
        .iter()
        .filter(|r| r.is_symbol_hyponym || has_trigger(&r.gloss))
        .cloned()
        .collect()
}

/// Leading `(...)` of a gloss, and the rest.
fn leading_context(gloss: &str) -> (Option<&str>, &str) {
    let g = gloss.trim_start();
    if let Some(inner) = g.strip_prefix('(') {
        if let Some(end) = inner.find(')') {
            let ctx = inner[..end].trim();
            if !ctx.is_empty() {
                return (Some(ctx), &inner[end + 1..]);
            }
        }
    }
    (None, g)
}

/// Meaning terms after the first trigger phrase, up to the first clause
/// boundary. Glosses whose lowercase form changes byte length are scanned
/// in lowercase.
pub fn meaning_terms(gloss: &str) -> Vec<String> {
    let lower = gloss.to_lowercase();
    let text = if lower.len() == gloss.len() {
        gloss
    } else {
        lower.as_str()
    };
    let Some(start) = find_trigger(text) else {
        return Vec::new();
    };
    let mut tail = &text[start..];
    let tail_lower = tail.to_lowercase();
    if let Some(cut) = BOUNDARIES.iter().filter_map(|b| tail_lower.find(b)).min() {
        tail = &tail[..cut];
    }
    let mut parts = vec![tail.to_string()];
    for sep in [",", " and ", " or "] {
        parts = parts.iter().flat_map(|p| split_ci(p, sep)).collect();
    }
    parts
        .into_iter()
        .map(|p| {
            strip_article(p.trim())
                .trim_matches(|c: char| !c.is_alphanumeric())
                .to_string()
        })
        .filter(|p| !p.is_empty())
        .collect()
}

fn split_ci(s: &str, sep: &str) -> Vec<String> {
    let lower = s.to_lowercase();
    if lower.len() != s.len() {
        return lower.split(sep).map(str::to_string).collect();
    }
    let mut out = Vec::new();
    let mut last = 0;
    for (i, _) in lower.match_indices(sep) {
        out.push(s[last..i].to_string());
        last = i + sep.len();
    }
    out.push(s[last..].to_string());
    out
}

fn strip_article(s: &str) -> &str {
    let lower = s.to_lowercase();
    for a in ARTICLES {
        if lower.starts_with(a) && lower.len() == s.len() {
            return s[a.len()..].trim_start();
        }
    }
    s
}

/// One simulation per meaning term; notes about the gloss go to the log.
pub fn convert_synset(r: &SynsetRecord, source: &Entity) -> Result<Conversion, SynsetError> {
    let (ctx_label, body) = leading_context(&r.gloss);
    let terms = meaning_terms(body);
    if terms.is_empty() {
        return Err(SynsetError::NoTrigger(r.label.clone()));
    }
    let unconvertible = |e: &dyn std::fmt::Display| SynsetError::Unconvertible {
        label: r.label.clone(),
        message: e.to_string(),
    };
    let mut out = Conversion::default();
    let context = match ctx_label {
        Some(label) => {
            if label.eq_ignore_ascii_case("figurative") {
                out.log.push(LogLine::at(
                    None,
                    format!("{}: (figurative) read as context figurative", r.label),
                ));
            }
            Entity::context(label).map_err(|e| unconvertible(&e))?
        }
        None => Entity::general_context(),
    };
    if body.contains('(') {
        out.log.push(LogLine::at(
            None,
            format!("{}: qualifier inside the gloss ignored", r.label),
        ));
    }
    let simulacrum = Entity::simulacrum(&r.label)
        .map_err(|e| unconvertible(&e))?
        .with_link(r.synset_iri.clone());
    for term in terms {
        let rc = match Entity::reality_counterpart(&term) {
            Ok(rc) => rc,
            Err(e) => {
                out.log.push(LogLine::at(
                    None,
                    format!("{}: meaning {term:?} skipped: {e}", r.label),
                ));
                continue;
            }
        };
        let sim = Simulation::build(
            SimulationKind::Generic,
            simulacrum.clone(),
            vec![(RcRelation::Has, rc)],
            vec![context.clone()],
            vec![source.clone()],
        )
        .map_err(|e| unconvertible(&e))?;
        out.push(sim, None);
    }
    Ok(out)
}

/// Selects and converts a whole file's records; skipped records are logged
/// against their line.
pub fn convert_synsets(tsv: &str, source: &Entity) -> Conversion {
    let (records, errors) = parse_numbered(tsv);
    let mut out = Conversion::default();
    out.log.extend(
        errors
            .iter()
            .map(|e| LogLine::at(e.line, format!("column {}: {}", e.column, e.message))),
    );
    for (line, record) in &records {
        let line = *line;
        if !(record.is_symbol_hyponym || has_trigger(&record.gloss)) {
            continue;
        }
        match convert_synset(record, source) {
            Ok(mut c) => {
                for s in &mut c.simulations {
                    s.line = Some(line);
                }
                for l in &mut c.log {
                    l.line = Some(line);
                }
                out.extend(c);
            }
            Err(e) => out.log.push(LogLine::at(line, e.to_string())),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(label: &str, gloss: &str, flag: bool) -> SynsetRecord {
        SynsetRecord {
            synset_iri: Iri::new("http://wordnet-rdf.princeton.edu/id/09616318-n").unwrap(),
            label: label.into(),
            gloss: gloss.into(),
            is_symbol_hyponym: flag,
        }
    }

    fn ids(c: &Conversion) -> Vec<String> {
        let mut v: Vec<_> = c
            .simulations()
            .map(|s| s.id().local_name().to_string())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn selection() {
        let recs = vec![
            rec("dollar sign", "a symbol of commercialism or greed", false),
            rec("lion", "a large wild animal of the cat family", false),
            rec(
                "emblem",
                "a visible symbol representing an abstract idea",
                true,
            ),
        ];
        let kept: Vec<_> = select_synsets(&recs).into_iter().map(|r| r.label).collect();
        assert_eq!(kept, ["dollar sign", "emblem"]);
        assert!(select_synsets(&[]).is_empty());
    }

    #[test]
    fn penelope() {
        let r = rec(
            "Penelope",
            "(Greek mythology) the wife of Odysseus and a symbol of devotion and fidelity",
            false,
        );
        let c = convert_synset(&r, &Entity::source("WordNet").unwrap()).unwrap();
        assert_eq!(ids(&c), ["penelope-devotion", "penelope-fidelity"]);
        for s in c.simulations() {
            assert_eq!(s.contexts()[0].id().local_name(), "greekMythology");
            assert_eq!(s.simulacrum().external_links().len(), 1);
        }
    }

    #[test]
    fn dollar_sign_and_boundaries() {
        let src = Entity::source("WordNet").unwrap();
        let c = convert_synset(
            &rec("dollar sign", "a symbol of commercialism or greed", false),
            &src,
        )
        .unwrap();
        assert_eq!(ids(&c), ["dollarSign-commercialism", "dollarSign-greed"]);
        assert_eq!(
            c.simulations().next().unwrap().contexts()[0]
                .id()
                .local_name(),
            "generalOrUnknown"
        );

        assert_eq!(
            meaning_terms("an emblem of the state, the crown, and an empire; worn at court"),
            ["state", "crown", "empire"]
        );
        assert_eq!(meaning_terms("Symbolizes peace which is rare"), ["peace"]);
        assert_eq!(meaning_terms("a band that plays"), Vec::<String>::new());
    }

    #[test]
    fn no_trigger_and_figurative() {
        let src = Entity::source("WordNet").unwrap();
        let err = convert_synset(
            &rec(
                "albatross",
                "(figurative) something that hinders or handicaps",
                true,
            ),
            &src,
        )
        .unwrap_err();
        assert!(matches!(err, SynsetError::NoTrigger(_)));
        let c = convert_synset(
            &rec("albatross", "(figurative) a symbol of burden", true),
            &src,
        )
        .unwrap();
        assert_eq!(
            c.simulations().next().unwrap().contexts()[0]
                .id()
                .local_name(),
            "figurative"
        );
        assert_eq!(c.log.len(), 1);
    }

    #[test]
    fn tsv_file() {
        let tsv = "http://wordnet-rdf.princeton.edu/id/06834465-n\tdollar sign\ta symbol of commercialism or greed\t0\n\
                   bad line\n\
                   http://wordnet-rdf.princeton.edu/id/1-n\tlion\ta large wild animal of the cat family\tfalse\n\
                   http://wordnet-rdf.princeton.edu/id/2-n\tthing\tnothing here\t1\n";
        let (records, errors) = parse_synsets(tsv);
        assert_eq!(records.len(), 3);
        assert_eq!(errors[0].line, 2);
        let c = convert_synsets(tsv, &Entity::source("WordNet").unwrap());
        assert_eq!(c.simulations.len(), 2);
        assert!(c.simulations.iter().all(|s| s.line == Some(1)));
        let lines: Vec<_> = c.log.iter().map(|l| l.line).collect();
        assert_eq!(lines, [Some(2), Some(4)]);
    }
}
