//! Colour distribution over shared symbolic meanings, and precision/recall
//! of a conversion against hand annotations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{csv_field, Graph};
use crate::model::{Iri, Role, SimulationKind};
use crate::query::{symbolic_meanings, MeaningOptions, QueryError};
use crate::vocab::{display_iri, expand};

/// Colour names and the label words that signal them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorLexicon {
    colors: Vec<(String, Vec<String>)>,
}

impl Default for ColorLexicon {
    fn default() -> Self {
        "white,red,green,black,gold/golden,blue,purple"
            .parse()
            .expect("default lexicon")
    }
}

impl FromStr for ColorLexicon {
    type Err = String;

    /// Comma-separated colours; `gold/golden` lists extra words for a colour.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut colors = Vec::new();
        for entry in s.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let words: Vec<String> = entry
                .split('/')
                .map(|w| w.trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect();
            if words.is_empty() {
                return Err(format!("empty colour in {s:?}"));
            }
            if words.iter().any(|w| !w.chars().all(char::is_alphanumeric)) {
                return Err(format!("colour words must be single words: {entry:?}"));
            }
            colors.push((words[0].clone(), words));
        }
        if colors.is_empty() {
            return Err("no colours given".into());
        }
        Ok(ColorLexicon { colors })
    }
}

impl ColorLexicon {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.colors.iter().map(|(name, _)| name.as_str())
    }

    /// Colours whose words appear as whole words in `label`.
    pub fn colors_in(&self, label: &str) -> Vec<&str> {
        let lower = label.to_lowercase();
        let words: BTreeSet<&str> = lower
            .split(|c: char| !c.is_alphanumeric())
            .filter(|w| !w.is_empty())
            .collect();
        self.colors
            .iter()
            .filter(|(_, tokens)| tokens.iter().any(|t| words.contains(t.as_str())))
            .map(|(name, _)| name.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorRow {
    pub meaning: Iri,
    pub label: String,
    /// Count of distinct coloured simulacra per colour, in lexicon order.
    pub counts: Vec<(String, usize)>,
}

impl ColorRow {
    pub fn count(&self, color: &str) -> usize {
        self.counts
            .iter()
            .find(|(c, _)| c == color)
            .map_or(0, |(_, n)| *n)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|(_, n)| n).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorDistribution {
    pub target: Iri,
    pub colors: Vec<String>,
    pub rows: Vec<ColorRow>,
}

/// For every meaning of `target`, how many other simulacra sharing that
/// meaning carry each colour in their label.
pub fn color_distribution(
    g: &Graph,
    target: &Iri,
    lexicon: &ColorLexicon,
) -> Result<ColorDistribution, QueryError> {
    let meanings = symbolic_meanings(g, target, MeaningOptions::default())?;
    let colors: Vec<String> = lexicon.names().map(str::to_string).collect();
    let mut rows = Vec::new();
    for meaning in meanings {
        let mut per_color: BTreeMap<&str, BTreeSet<&Iri>> = BTreeMap::new();
        for rec in g.simulations_with_rc(&meaning) {
            for sc in rec.simulacra().iter().filter(|s| *s != target) {
                let Some(e) = g.entity(sc) else { continue };
                for color in lexicon.colors_in(e.label()) {
                    per_color.entry(color).or_default().insert(sc);
                }
            }
        }
        let label = g.entity(&meaning).map_or_else(
            || meaning.local_name().to_string(),
            |e| e.label().to_string(),
        );
        rows.push(ColorRow {
            counts: colors
                .iter()
                .map(|c| {
                    (
                        c.clone(),
                        per_color.get(c.as_str()).map_or(0, BTreeSet::len),
                    )
                })
                .collect(),
            meaning,
            label,
        });
    }
    Ok(ColorDistribution {
        target: target.clone(),
        colors,
        rows,
    })
}

impl ColorDistribution {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("meaning,label");
        for c in &self.colors {
            out.push(',');
            out.push_str(&csv_field(c));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&csv_field(row.meaning.as_str()));
            out.push(',');
            out.push_str(&csv_field(&row.label));
            for (_, n) in &row.counts {
                let _ = write!(out, ",{n}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut header = vec!["meaning".to_string()];
        header.extend(self.colors.iter().cloned());
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![r.label.clone()];
                cells.extend(r.counts.iter().map(|(_, n)| n.to_string()));
                cells
            })
            .collect();
        crate::render::aligned(&header, &rows)
    }

    /// One horizontal bar per meaning, split by colour share.
    pub fn to_svg(&self) -> String {
        const LEFT: f64 = 140.0;
        const WIDTH: f64 = 480.0;
        const BAR: f64 = 22.0;
        const GAP: f64 = 8.0;
        let legend_y = 20.0;
        let top = 44.0;
        let height = top + self.rows.len() as f64 * (BAR + GAP) + 10.0;
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">"#,
            LEFT + WIDTH + 20.0,
            height
        );
        let _ = writeln!(
            svg,
            r#"  <title>Colours of simulacra sharing the meanings of {}</title>"#,
            xml_escape(&display_iri(self.target.as_str()))
        );
        let mut x = LEFT;
        for color in &self.colors {
            let _ = writeln!(
                svg,
                r##"  <rect x="{x}" y="{}" width="12" height="12" fill="{}" stroke="#444"/><text x="{}" y="{}">{}</text>"##,
                legend_y - 10.0,
                fill(color),
                x + 16.0,
                legend_y,
                xml_escape(color)
            );
            x += 24.0 + 7.0 * color.len() as f64;
        }
        for (i, row) in self.rows.iter().enumerate() {
            let y = top + i as f64 * (BAR + GAP);
            let _ = writeln!(
                svg,
                r#"  <text x="{}" y="{}" text-anchor="end">{}</text>"#,
                LEFT - 8.0,
                y + BAR * 0.7,
                xml_escape(&row.label)
            );
            let _ = writeln!(
                svg,
                r##"  <rect x="{LEFT}" y="{y}" width="{WIDTH}" height="{BAR}" fill="none" stroke="#bbb"/>"##
            );
            let total = row.total();
            let mut x = LEFT;
            for (color, n) in &row.counts {
                if *n == 0 {
                    continue;
                }
                let w = WIDTH * *n as f64 / total as f64;
                let _ = writeln!(
                    svg,
                    r##"  <rect x="{x:.2}" y="{y}" width="{w:.2}" height="{BAR}" fill="{}" stroke="#444"><title>{}: {n}</title></rect>"##,
                    fill(color),
                    xml_escape(color)
                );
                x += w;
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn fill(color: &str) -> &str {
    match color {
        "white" => "#f4f4f4",
        "gold" => "#d4af37",
        "red" => "#c0392b",
        "green" => "#2e8b57",
        "black" => "#222222",
        "blue" => "#2c6fbb",
        "purple" => "#7d3c98",
        "yellow" => "#f1c40f",
        "silver" => "#c0c0c0",
        "pink" => "#f4a6c0",
        "orange" => "#e67e22",
        "brown" => "#8b5a2b",
        "grey" | "gray" => "#888888",
        _ => "#999999",
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

// ---------------------------------------------------------------------------
// Conversion evaluation

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvalCategory {
    Simulation,
    Simulacrum,
    RealityCounterpart,
    Context,
    TypeOfSimulation,
    Variant,
}

impl EvalCategory {
    pub const ALL: [EvalCategory; 6] = [
        EvalCategory::Simulation,
        EvalCategory::Simulacrum,
        EvalCategory::RealityCounterpart,
        EvalCategory::Context,
        EvalCategory::TypeOfSimulation,
        EvalCategory::Variant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvalCategory::Simulation => "Simulation",
            EvalCategory::Simulacrum => "Simulacrum",
            EvalCategory::RealityCounterpart => "RealityCounterpart",
            EvalCategory::Context => "Context",
            EvalCategory::TypeOfSimulation => "TypeOfSimulation",
            EvalCategory::Variant => "Variant",
        }
    }

    /// Number of IRIs one item of this category consists of.
    fn arity(self) -> usize {
        match self {
            EvalCategory::TypeOfSimulation | EvalCategory::Variant => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for EvalCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvalCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EvalCategory::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("gold file line {line}: {message}")]
pub struct GoldFormatError {
    pub line: usize,
    pub message: String,
}

/// Annotated items: one IRI per item, or an ordered pair for
/// `TypeOfSimulation` (simulation, class) and `Variant` (base, variant).
pub type ItemSet = BTreeSet<Vec<String>>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldStandard {
    pub items: BTreeMap<EvalCategory, ItemSet>,
}

/// Parses `category <tab> iri [<tab> iri]` lines. Prefixed names (`kb:`,
/// `sim:` and the other fixed prefixes) are expanded.
pub fn parse_gold(text: &str) -> Result<GoldStandard, GoldFormatError> {
    let mut gold = GoldStandard::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| GoldFormatError { line, message };
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
        let category: EvalCategory = cols[0].parse().map_err(err)?;
        let iris = &cols[1..];
        if iris.len() != category.arity() {
            return Err(err(format!(
                "{category} takes {} IRI field(s), found {}",
                category.arity(),
                iris.len()
            )));
        }
        let mut item = Vec::with_capacity(iris.len());
        for name in iris {
            let full = expand(name);
            Iri::new(&full).map_err(|e| err(e.to_string()))?;
            item.push(full);
        }
        gold.items.entry(category).or_default().insert(item);
    }
    Ok(gold)
}

/// The items a converted graph asserts, per category. Only specialized
/// simulation classes count as types.
pub fn predicted_items(g: &Graph) -> BTreeMap<EvalCategory, ItemSet> {
    let mut out: BTreeMap<EvalCategory, ItemSet> = EvalCategory::ALL
        .into_iter()
        .map(|c| (c, ItemSet::new()))
        .collect();
    let mut put = |c: EvalCategory, item: Vec<String>| {
        out.get_mut(&c)
            .expect("all categories present")
            .insert(item);
    };
    for rec in g.simulations() {
        put(EvalCategory::Simulation, vec![rec.id().to_string()]);
        if rec.kind() != SimulationKind::Generic {
            put(
                EvalCategory::TypeOfSimulation,
                vec![rec.id().to_string(), rec.kind().class_iri().to_string()],
            );
        }
    }
    for e in g.entities() {
        for (role, c) in [
            (Role::Simulacrum, EvalCategory::Simulacrum),
            (Role::RealityCounterpart, EvalCategory::RealityCounterpart),
            (Role::Context, EvalCategory::Context),
        ] {
            if e.has_role(role) {
                put(c, vec![e.id().to_string()]);
            }
        }
    }
    for link in g.variants() {
        put(
            EvalCategory::Variant,
            vec![link.base.to_string(), link.variant.to_string()],
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRow {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl EvalRow {
    /// Metrics from raw counts. An empty denominator scores 1 when the other
    /// error count is also zero (nothing expected, nothing produced) and 0
    /// otherwise.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize, other_err: usize| {
            if den == 0 {
                if other_err == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(tp, tp + fp, fn_);
        let recall = ratio(tp, tp + fn_, fp);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        EvalRow {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<(EvalCategory, EvalRow)>,
    /// TP, FP and FN pooled over all categories.
    pub average: EvalRow,
}

impl EvalReport {
    pub fn row(&self, c: EvalCategory) -> &EvalRow {
        &self
            .rows
            .iter()
            .find(|(cat, _)| *cat == c)
            .expect("every category has a row")
            .1
    }

    fn lines(&self) -> Vec<Vec<String>> {
        let fmt_row = |name: &str, r: &EvalRow| {
            vec![
                name.to_string(),
                format!("{:.4}", r.precision),
                format!("{:.4}", r.recall),
                format!("{:.4}", r.f1),
                r.tp.to_string(),
                r.fp.to_string(),
                r.fn_.to_string(),
            ]
        };
        let mut rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(c, r)| fmt_row(c.name(), r))
            .collect();
        rows.push(fmt_row("Average", &self.average));
        rows
    }

    const HEADER: [&'static str; 7] = ["category", "precision", "recall", "f1", "tp", "fp", "fn"];

    pub fn to_text(&self) -> String {
        let header: Vec<String> = Self::HEADER.iter().map(|s| s.to_string()).collect();
        crate::render::aligned(&header, &self.lines())
    }

    pub fn to_csv(&self) -> String {
        let mut out = Self::HEADER.join(",");
        out.push('\n');
        for line in self.lines() {
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn eval_conversion(gold: &GoldStandard, predicted: &Graph) -> EvalReport {
    let predicted = predicted_items(predicted);
    let empty = ItemSet::new();
    let mut rows = Vec::new();
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for c in EvalCategory::ALL {
        let g = gold.items.get(&c).unwrap_or(&empty);
        let p = &predicted[&c];
        let t = g.intersection(p).count();
        let row = EvalRow::from_counts(t, p.len() - t, g.len() - t);
        tp += row.tp;
        fp += row.fp;
        fn_ += row.fn_;
        rows.push((c, row));
    }
    EvalReport {
        rows,
        average: EvalRow::from_counts(tp, fp, fn_),
    }
}
