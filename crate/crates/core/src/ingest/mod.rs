//! Converters from the three source formats into simulations.
//!
//! Each converter is a pure function from parsed records to a
//! [`Conversion`]; [`Conversion::insert_into`] is the only step that touches a
//! graph.

use std::fmt;

use thiserror::Error;

use crate::graph::Graph;
use crate::model::{Entity, Simulation};

pub mod dbpedia;
pub mod dictionary;
pub mod wordnet;

/// A malformed line in one of the line-oriented input formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// One warning or skipped record, tied to an input line when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogLine {
    pub line: Option<usize>,
    pub message: String,
}

impl LogLine {
    pub(crate) fn at(line: impl Into<Option<usize>>, message: impl Into<String>) -> Self {
        LogLine {
            line: line.into(),
            message: message.into(),
        }
    }

    /// `file:line: message`, or `file: message` without a line.
    pub fn with_file(&self, file: &str) -> String {
        match self.line {
            Some(line) => format!("{file}:{line}: {}", self.message),
            None => format!("{file}: {}", self.message),
        }
    }
}

impl fmt::Display for LogLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Converted {
    pub simulation: Simulation,
    pub line: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantPair {
    pub base: Entity,
    pub variant: Entity,
    pub line: Option<usize>,
}

/// Output of a converter.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Conversion {
    pub simulations: Vec<Converted>,
    pub variants: Vec<VariantPair>,
    pub log: Vec<LogLine>,
}

impl Conversion {
    pub fn simulations(&self) -> impl Iterator<Item = &Simulation> {
        self.simulations.iter().map(|c| &c.simulation)
    }

    pub(crate) fn push(&mut self, simulation: Simulation, line: impl Into<Option<usize>>) {
        self.simulations.push(Converted {
            simulation,
            line: line.into(),
        });
    }

    pub fn extend(&mut self, other: Conversion) {
        self.simulations.extend(other.simulations);
        self.variants.extend(other.variants);
        self.log.extend(other.log);
    }

    /// Inserts everything into `g`. Rejected insertions are skipped and
    /// reported; everything else goes in.
    pub fn insert_into(&self, g: &mut Graph) -> Vec<LogLine> {
        let mut rejected = Vec::new();
        for c in &self.simulations {
            if let Err(e) = g.insert_simulation(c.simulation.clone()) {
                rejected.push(LogLine::at(c.line, format!("skipped: {e}")));
            }
        }
        for v in &self.variants {
            if let Err(e) = g.add_variant(v.base.clone(), v.variant.clone()) {
                rejected.push(LogLine::at(v.line, format!("skipped variant: {e}")));
            }
        }
        rejected
    }
}
