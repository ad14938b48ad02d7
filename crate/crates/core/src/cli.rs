//! The `simkg` command line.
//!
//! Graph state moves between invocations as Turtle files: `--graph` loads
//! one before the command runs, `--out` saves after ingestion. Data goes to
//! standard output, diagnostics to standard error.
//!
//! Exit codes: 0 success, 1 usage error, 2 axiom violations, 3 I/O, network
//! or input failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{color_distribution, eval_conversion, parse_gold, ColorLexicon};
use crate::graph::Graph;
use crate::ingest::dbpedia::{
    convert_dbpedia, fetch_symbol_data, parse_symbol_file, DbpediaConfig, FetchOptions,
    HttpTransport,
};
use crate::ingest::dictionary::{convert_dictionary, parse_dictionary, PhraseTable, GRAMMAR};
use crate::ingest::wordnet::convert_synsets;
use crate::ingest::Conversion;
use crate::model::{Entity, Iri};
use crate::query::{run_cq, Bindings, CqId};
use crate::serialize::{export_turtle, import_turtle};
use crate::validate::{self, check_axioms};
use crate::vocab::expand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "simkg", version, about = "Build, check and query a knowledge graph of symbolic meanings", after_help = GRAMMAR)]
struct Cli {
    /// Turtle file to load before running the command
    #[arg(long, global = true, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Where to write the result (the graph for ingest commands and export)
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the graph even if it violates the axioms
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert plain-text dictionary files
    #[command(after_help = GRAMMAR)]
    IngestDict {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Label of the source every simulation is derived from
        #[arg(long, default_value = "Olderr")]
        source: String,
        /// Extra relation phrases: phrase<TAB>kind<TAB>relation[<TAB>head]
        #[arg(long, value_name = "TSV")]
        phrases: Option<PathBuf>,
    },
    /// Convert DBpedia symbol statements, live or from a file
    IngestDbpedia {
        /// SPARQL endpoint to page through
        #[arg(long, conflicts_with = "triples", required_unless_present = "triples")]
        endpoint: Option<String>,
        /// Offline statements, one `subject predicate object .` per line
        #[arg(long, value_name = "FILE")]
        triples: Option<PathBuf>,
        #[arg(long, default_value = "DBpedia")]
        source: String,
        #[arg(long, default_value_t = 10_000)]
        page_size: usize,
        /// Additional subject type to exclude (repeatable)
        #[arg(long, value_name = "IRI")]
        exclude_type: Vec<String>,
    },
    /// Convert synset records: iri<TAB>label<TAB>gloss<TAB>hyponym_flag
    IngestWordnet {
        file: PathBuf,
        #[arg(long, default_value = "WordNet")]
        source: String,
    },
    /// Check the loaded graph against the axioms
    Validate,
    /// Answer a competency question
    Query {
        /// Question id, e.g. Q2.2
        #[arg(long)]
        cq: String,
        /// Parameter binding name=iri, e.g. simulacrum=kb:olive (repeatable)
        #[arg(long, value_name = "NAME=IRI")]
        bind: Vec<String>,
    },
    /// Per-source corpus counts
    Stats,
    /// Write the loaded graph as Turtle
    Export,
    /// Colours of simulacra sharing the meanings of a target
    Casestudy {
        #[arg(long)]
        target: String,
        /// Comma-separated colours; gold/golden lists extra words
        #[arg(long)]
        colors: Option<String>,
        /// Also render a stacked bar chart
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Score a converted graph against hand annotations
    Eval {
        #[arg(long, value_name = "TSV")]
        gold: PathBuf,
        /// Converted graph; defaults to --graph
        #[arg(long, value_name = "FILE")]
        converted: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let (code, sink): (i32, &mut dyn Write) = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, stdout),
                _ => (1, stderr),
            };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut ctx = Ctx {
        cli: &cli,
        stdout,
        stderr,
    };
    match ctx.exec() {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.stderr, "error: {}", f.message);
            f.code
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn parse_iri(name: &str) -> Result<Iri, Failure> {
    Iri::new(expand(name)).map_err(|e| Failure::usage(format!("{name}: {e}")))
}

impl Ctx<'_> {
    fn emit(&mut self, data: &str) -> Result<(), Failure> {
        self.stdout
            .write_all(data.as_bytes())
            .map_err(|e| Failure::input(format!("cannot write output: {e}")))
    }

    fn note(&mut self, line: &str) {
        let _ = writeln!(self.stderr, "{line}");
    }

    fn load(&mut self, path: &Path) -> Result<Graph, Failure> {
        let text = read(path)?;
        let imported =
            import_turtle(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        for w in &imported.warnings {
            self.note(&format!("{}: warning: {w}", path.display()));
        }
        Ok(imported.graph)
    }

    fn loaded(&mut self) -> Result<Graph, Failure> {
        match &self.cli.graph {
            Some(p) => self.load(&p.clone()),
            None => Ok(Graph::new()),
        }
    }

    fn require_graph(&mut self) -> Result<Graph, Failure> {
        if self.cli.graph.is_none() {
            return Err(Failure::usage("this command needs --graph <FILE>"));
        }
        self.loaded()
    }

    /// Turtle to `--out`, or to standard output. Refuses a graph with
    /// violations unless `--force` is given.
    fn save(&mut self, g: &Graph) -> Result<i32, Failure> {
        let violations = check_axioms(g);
        if !violations.is_empty() && !self.cli.force {
            for v in &violations {
                self.note(&v.to_string());
            }
            self.note(&format!(
                "{} violations; not writing the graph (use --force to write anyway)",
                violations.len()
            ));
            return Ok(2);
        }
        let ttl = export_turtle(g);
        match &self.cli.out {
            Some(path) => write_file(path, &ttl)?,
            None => self.emit(&ttl)?,
        }
        Ok(0)
    }

    fn ingest(&mut self, conversion: Conversion, file: &str) -> Result<i32, Failure> {
        let mut g = self.loaded()?;
        for line in &conversion.log {
            self.note(&line.with_file(file));
        }
        let rejected = conversion.insert_into(&mut g);
        for line in &rejected {
            self.note(&line.with_file(file));
        }
        self.note(&format!(
            "{file}: {} simulations converted, {} variant links, {} warnings; graph has {} simulations",
            conversion.simulations.len(),
            conversion.variants.len(),
            conversion.log.len() + rejected.len(),
            g.simulation_count()
        ));
        self.save(&g)
    }

    fn exec(&mut self) -> Result<i32, Failure> {
        let format = self.cli.format;
        match &self.cli.command {
            Command::IngestDict {
                files,
                source,
                phrases,
            } => {
                let source =
                    Entity::source(source).map_err(|e| Failure::usage(format!("--source: {e}")))?;
                let mut table = PhraseTable::default();
                if let Some(p) = phrases {
                    table
                        .load_overrides(&read(p)?)
                        .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
                }
                let mut all = Conversion::default();
                let names: Vec<String> = files.iter().map(|f| f.display().to_string()).collect();
                for (file, name) in files.iter().zip(&names) {
                    let parsed = parse_dictionary(&read(file)?);
                    let mut c = convert_dictionary(&parsed, &source, &table);
                    for l in &mut c.log {
                        l.message = match l.line {
                            Some(n) => format!("{name}:{n}: {}", l.message),
                            None => format!("{name}: {}", l.message),
                        };
                        l.line = None;
                    }
                    all.extend(c);
                }
                let label = if names.len() == 1 {
                    names[0].clone()
                } else {
                    "dictionary".into()
                };
                let mut g = self.loaded()?;
                for line in &all.log {
                    self.note(&line.message);
                }
                let rejected = all.insert_into(&mut g);
                for line in &rejected {
                    self.note(&line.with_file(&label));
                }
                self.note(&format!(
                    "{label}: {} simulations converted, {} variant links, {} warnings; graph has {} simulations",
                    all.simulations.len(),
                    all.variants.len(),
                    all.log.len() + rejected.len(),
                    g.simulation_count()
                ));
                self.save(&g)
            }
            Command::IngestDbpedia {
                endpoint,
                triples,
                source,
                page_size,
                exclude_type,
            } => {
                let source =
                    Entity::source(source).map_err(|e| Failure::usage(format!("--source: {e}")))?;
                let mut config = DbpediaConfig::default();
                for t in exclude_type {
                    config.excluded_types.insert(parse_iri(t)?);
                }
                let (rows, label) = match (endpoint, triples) {
                    (Some(url), _) => {
                        let opts = FetchOptions {
                            page_size: *page_size,
                            ..FetchOptions::default()
                        };
                        let rows = fetch_symbol_data(
                            &HttpTransport::new(Duration::from_secs(60)),
                            url,
                            &opts,
                        )
                        .map_err(|e| Failure::input(e.to_string()))?;
                        (rows, url.clone())
                    }
                    (None, Some(path)) => {
                        let (rows, errors) = parse_symbol_file(&read(path)?);
                        let name = path.display().to_string();
                        for e in errors {
                            self.note(&format!(
                                "{name}:{}: column {}: {}",
                                e.line, e.column, e.message
                            ));
                        }
                        (rows, name)
                    }
                    (None, None) => return Err(Failure::usage("give --endpoint or --triples")),
                };
                let conversion = convert_dbpedia(&rows, &source, &config);
                self.ingest(conversion, &label)
            }
            Command::IngestWordnet { file, source } => {
                let source =
                    Entity::source(source).map_err(|e| Failure::usage(format!("--source: {e}")))?;
                let conversion = convert_synsets(&read(file)?, &source);
                self.ingest(conversion, &file.display().to_string())
            }
            Command::Validate => {
                let g = self.require_graph()?;
                let violations = check_axioms(&g);
                let report = match format {
                    Format::Text => validate::render_text(&violations),
                    Format::Csv => validate::render_csv(&violations),
                };
                self.emit(&report)?;
                Ok(if violations.is_empty() { 0 } else { 2 })
            }
            Command::Query { cq, bind } => {
                let g = self.require_graph()?;
                let cq: CqId = cq.parse().map_err(|e| Failure::usage(format!("{e}")))?;
                let mut bindings = Bindings::new();
                for b in bind {
                    let (name, value) = b.split_once('=').ok_or_else(|| {
                        Failure::usage(format!("--bind expects NAME=IRI, got {b:?}"))
                    })?;
                    bindings.insert(name.trim().to_string(), parse_iri(value.trim())?);
                }
                let rows = run_cq(&g, cq, &bindings).map_err(|e| Failure::usage(e.to_string()))?;
                let out = match format {
                    Format::Text => crate::query::render_text(cq, &rows),
                    Format::Csv => crate::query::render_csv(cq, &rows),
                };
                self.emit(&out)?;
                Ok(0)
            }
            Command::Stats => {
                let g = self.require_graph()?;
                let stats = g.stats();
                let out = match format {
                    Format::Text => stats.to_string(),
                    Format::Csv => stats.to_csv(),
                };
                self.emit(&out)?;
                Ok(0)
            }
            Command::Export => {
                let g = self.require_graph()?;
                self.save(&g)
            }
            Command::Casestudy {
                target,
                colors,
                svg,
            } => {
                let g = self.require_graph()?;
                let target = parse_iri(target)?;
                let lexicon = match colors {
                    Some(c) => c
                        .parse()
                        .map_err(|e: String| Failure::usage(format!("--colors: {e}")))?,
                    None => ColorLexicon::default(),
                };
                let dist = color_distribution(&g, &target, &lexicon)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                if let Some(path) = svg {
                    write_file(path, &dist.to_svg())?;
                }
                match &self.cli.out {
                    Some(path) => write_file(path, &dist.to_csv())?,
                    None => {
                        let out = match format {
                            Format::Text => dist.to_text(),
                            Format::Csv => dist.to_csv(),
                        };
                        self.emit(&out)?;
                    }
                }
                Ok(0)
            }
            Command::Eval { gold, converted } => {
                let gold_text = read(gold)?;
                let gold_std = parse_gold(&gold_text)
                    .map_err(|e| Failure::input(format!("{}: {e}", gold.display())))?;
                let g = match converted {
                    Some(p) => self.load(p)?,
                    None => self.require_graph()?,
                };
                let report = eval_conversion(&gold_std, &g);
                let out = match format {
                    Format::Text => report.to_text(),
                    Format::Csv => report.to_csv(),
                };
                self.emit(&out)?;
                Ok(0)
            }
        }
    }
}
