//! Namespaces, the fixed prefix table, and the plain RDF terms used for
//! interchange.

use std::fmt;

use crate::model::Iri;

/// Data namespace, bound to `kb:`.
pub const KB: &str = "https://w3id.org/simulation/data/";
/// Schema namespace, bound to `sim:`.
pub const SIM: &str = "https://w3id.org/simulation/ontology/";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const PROV: &str = "http://www.w3.org/ns/prov#";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const OWL_SAME_AS: &str = "http://www.w3.org/2002/07/owl#sameAs";
pub const PROV_WAS_DERIVED_FROM: &str = "http://www.w3.org/ns/prov#wasDerivedFrom";

pub const SIM_HAS_SIMULACRUM: &str = "https://w3id.org/simulation/ontology/hasSimulacrum";
pub const SIM_HAS_CONTEXT: &str = "https://w3id.org/simulation/ontology/hasContext";
pub const SIM_HAS_VARIANT: &str = "https://w3id.org/simulation/ontology/hasVariant";

/// Prefix bindings in the order they are written at the top of every export.
pub const PREFIXES: [(&str, &str); 6] = [
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("owl", OWL),
    ("prov", PROV),
    ("sim", SIM),
    ("kb", KB),
];

/// Expands `prefix:local` against [`PREFIXES`]. Strings in angle brackets and
/// strings that already look absolute are returned unchanged (minus brackets).
pub fn expand(name: &str) -> String {
    let name = name.trim();
    if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
        return inner.to_string();
    }
    if let Some((prefix, local)) = name.split_once(':') {
        if !local.starts_with("//") {
            if let Some((_, ns)) = PREFIXES.iter().find(|(p, _)| *p == prefix) {
                return format!("{ns}{local}");
            }
        }
    }
    name.to_string()
}

/// Shortens an IRI to `prefix:local` when one of the fixed prefixes covers it
/// and the local part is a valid prefixed-name local part.
pub fn compact(iri: &str) -> Option<String> {
    PREFIXES.iter().find_map(|(prefix, ns)| {
        let local = iri.strip_prefix(ns)?;
        is_pn_local(local).then(|| format!("{prefix}:{local}"))
    })
}

/// Prefixed form where possible, `<iri>` otherwise.
pub fn display_iri(iri: &str) -> String {
    compact(iri).unwrap_or_else(|| format!("<{iri}>"))
}

/// Conservative subset of Turtle's PN_LOCAL: letters, digits, `_` and `-`,
/// not starting with `-`.
pub(crate) fn is_pn_local(local: &str) -> bool {
    !local.is_empty()
        && !local.starts_with('-')
        && local.chars().all(|c| {
            c.is_ascii_alphanumeric()
                || c == '_'
                || c == '-'
                || (c >= '\u{C0}' && c.is_alphanumeric())
        })
}

/// An RDF object term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal {
        value: String,
        lang: Option<String>,
        datatype: Option<Iri>,
    },
}

impl Term {
    pub fn literal(value: impl Into<String>) -> Self {
        Term::Literal {
            value: value.into(),
            lang: None,
            datatype: None,
        }
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal { .. } => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => f.write_str(&display_iri(iri.as_str())),
            Term::Literal {
                value,
                lang,
                datatype,
            } => {
                write!(f, "\"{}\"", escape_literal(value))?;
                if let Some(lang) = lang {
                    write!(f, "@{lang}")?;
                } else if let Some(dt) = datatype {
                    write!(f, "^^{}", display_iri(dt.as_str()))?;
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn escape_literal(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

/// A single statement. Subjects and predicates are always IRIs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject,
            predicate,
            object: object.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_and_compact() {
        assert_eq!(expand("kb:whiteRose"), format!("{KB}whiteRose"));
        assert_eq!(expand("<http://x.org/a>"), "http://x.org/a");
        assert_eq!(expand("http://x.org/a"), "http://x.org/a");
        assert_eq!(
            compact(&format!("{KB}bee-resurrection")).unwrap(),
            "kb:bee-resurrection"
        );
        assert_eq!(compact("http://dbpedia.org/resource/Eagle"), None);
        assert_eq!(
            display_iri("http://dbpedia.org/resource/Eagle"),
            "<http://dbpedia.org/resource/Eagle>"
        );
    }

    #[test]
    fn literal_escaping() {
        assert_eq!(
            Term::literal("say \"hi\"\n").to_string(),
            r#""say \"hi\"\n""#
        );
    }
}
