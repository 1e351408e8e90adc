//! End-to-end run: corpus and ontology in, connection report out.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{extract_phrases, parse_corpus, CorpusError, QuestionCorpus};
use crate::matcher::{collapse_matches, match_phrases, ConceptMatch, MatchConfig, PhraseOutcome};
use crate::ontology::{
    build_label_index, load_graph, GraphConfig, LabelIndex, OntologyError, OntologyGraph,
};
use crate::pathfinder::{
    compare, enumerate_pairs, validate_path, ConnectionRecord, EdgeFilter, PathError,
    DEFAULT_MAX_DEPTH,
};
use crate::textnorm::{load_lexicon, Lexicon, LexiconError, Stoplist};

pub const TOOL_NAME: &str = "onto-enrich";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Corpus {
        path: String,
        #[source]
        source: CorpusError,
    },
    #[error("{path}: {source}")]
    Ontology {
        path: String,
        #[source]
        source: OntologyError,
    },
    #[error("{path}: {source}")]
    Lexicon {
        path: String,
        #[source]
        source: LexiconError,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// 1 for bad input, 2 for internal invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

/// Analysis settings shared by file-based and in-memory runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub matching: MatchConfig,
    pub max_depth: usize,
    pub graph: GraphConfig,
    pub optimal_only: bool,
    /// Fan matching and pair comparison out over threads. Output is identical
    /// either way.
    pub parallel: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            matching: MatchConfig::default(),
            max_depth: DEFAULT_MAX_DEPTH,
            graph: GraphConfig::default(),
            optimal_only: false,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub ontology: PathBuf,
    pub corpus: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    pub options: Options,
    pub format: OutputFormat,
    pub output: PathBuf,
}

/// Raw input documents with the names used in messages and the report.
#[derive(Debug, Clone, Copy)]
pub struct Inputs<'a> {
    pub ontology: Source<'a>,
    pub corpus: Source<'a>,
    pub lexicon: Option<Source<'a>>,
    pub stoplist: Option<Source<'a>>,
}

#[derive(Debug, Clone, Copy)]
pub struct Source<'a> {
    pub name: &'a str,
    pub bytes: &'a [u8],
}

impl<'a> Source<'a> {
    pub fn new(name: &'a str, bytes: &'a [u8]) -> Self {
        Source { name, bytes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub ontology: String,
    pub corpus: String,
    pub lexicon: Option<String>,
    pub stoplist: Option<String>,
    pub word_threshold: f64,
    pub seq_threshold: f64,
    pub max_depth: usize,
    pub hierarchical_predicates: Vec<String>,
    pub label_predicates: Vec<String>,
    pub label_lang: Option<String>,
    pub optimal_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub records: Vec<ConnectionRecord>,
    pub matches: Vec<ConceptMatch>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn optimal_count(&self) -> usize {
        self.records.iter().filter(|r| r.optimal).count()
    }
}

fn validate(options: &Options) -> Result<(), Error> {
    MatchConfig::new(
        options.matching.word_threshold(),
        options.matching.seq_threshold(),
    )
    .map_err(|e| Error::Config(e.to_string()))?;
    if options.max_depth < 1 {
        return Err(Error::Config("max depth must be at least 1".into()));
    }
    Ok(())
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads every input file named in `config` and analyzes it.
pub fn run(config: &RunConfig) -> Result<Report, Error> {
    let load = |path: &Path| read(path).map(|bytes| (path.display().to_string(), bytes));
    let ontology = load(&config.ontology)?;
    let corpus = load(&config.corpus)?;
    let lexicon = config.lexicon.as_deref().map(load).transpose()?;
    let stoplist = config.stoplist.as_deref().map(load).transpose()?;
    fn source((name, bytes): &(String, Vec<u8>)) -> Source<'_> {
        Source::new(name, bytes)
    }
    let inputs = Inputs {
        ontology: source(&ontology),
        corpus: source(&corpus),
        lexicon: lexicon.as_ref().map(source),
        stoplist: stoplist.as_ref().map(source),
    };
    analyze(&inputs, &config.options)
}

/// Loaded, immutable inputs for matching and path search.
pub struct Prepared {
    pub corpus: QuestionCorpus,
    pub graph: OntologyGraph,
    pub index: LabelIndex,
    pub lexicon: Lexicon,
    pub stoplist: Stoplist,
}

pub fn prepare(inputs: &Inputs, options: &Options) -> Result<Prepared, Error> {
    validate(options)?;
    let corpus = parse_corpus(inputs.corpus.bytes).map_err(|source| Error::Corpus {
        path: inputs.corpus.name.to_string(),
        source,
    })?;
    let lexicon = match inputs.lexicon {
        Some(src) => load_lexicon(src.bytes).map_err(|source| Error::Lexicon {
            path: src.name.to_string(),
            source,
        })?,
        None => Lexicon::new(),
    };
    let stoplist = match inputs.stoplist {
        Some(src) => Stoplist::parse(std::str::from_utf8(src.bytes).map_err(|e| Error::Io {
            path: src.name.to_string(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
        })?),
        None => Stoplist::default_english(),
    };
    let graph =
        load_graph(inputs.ontology.bytes, &options.graph).map_err(|source| Error::Ontology {
            path: inputs.ontology.name.to_string(),
            source,
        })?;
    let index = build_label_index(&graph, &lexicon, &stoplist);
    Ok(Prepared {
        corpus,
        graph,
        index,
        lexicon,
        stoplist,
    })
}

struct QuestionResult {
    matches: Vec<ConceptMatch>,
    warnings: Vec<String>,
}

fn match_one(
    p: &Prepared,
    question: &crate::corpus::Question,
    config: &MatchConfig,
) -> QuestionResult {
    let phrases = extract_phrases(question);
    let outcomes = match_phrases(&phrases, &p.index, &p.lexicon, &p.stoplist, config);
    let mut warnings = Vec::new();
    let mut matched = Vec::new();
    for (phrase, outcome) in phrases.iter().zip(outcomes) {
        match outcome {
            PhraseOutcome::Skipped => warnings.push(format!(
                "question {}: phrase {:?} is empty after normalization; skipped",
                question.id, phrase.raw
            )),
            PhraseOutcome::NoMatch(_) => {}
            PhraseOutcome::Matched(_, m) => matched.push(m),
        }
    }
    QuestionResult {
        matches: collapse_matches(matched),
        warnings,
    }
}

fn map_maybe_parallel<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

pub fn analyze(inputs: &Inputs, options: &Options) -> Result<Report, Error> {
    let prepared = prepare(inputs, options)?;
    let mut report = analyze_prepared(&prepared, options)?;
    report.config.ontology = inputs.ontology.name.to_string();
    report.config.corpus = inputs.corpus.name.to_string();
    report.config.lexicon = inputs.lexicon.map(|s| s.name.to_string());
    report.config.stoplist = inputs.stoplist.map(|s| s.name.to_string());
    Ok(report)
}

/// Matching, pairing and comparison over already-loaded inputs. Source
/// names in the config echo are left empty.
pub fn analyze_prepared(p: &Prepared, options: &Options) -> Result<Report, Error> {
    validate(options)?;
    let mut warnings: Vec<String> = p.index.warnings().to_vec();

    let per_question = map_maybe_parallel(&p.corpus.questions, options.parallel, |q| {
        match_one(p, q, &options.matching)
    });

    let mut matches = Vec::new();
    let mut pairs: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for result in per_question {
        for pair in enumerate_pairs(&result.matches) {
            pairs
                .entry((pair.concept_a, pair.concept_b))
                .or_default()
                .push(pair.question_id);
        }
        matches.extend(result.matches);
        warnings.extend(result.warnings);
    }

    let pairs: Vec<((String, String), Vec<String>)> = pairs.into_iter().collect();
    let compared = map_maybe_parallel(&pairs, options.parallel, |((a, b), _)| {
        compare(&p.graph, a, b, options.max_depth)
    });
    let mut records = Vec::with_capacity(pairs.len());
    for (((_, _), mut ids), record) in pairs.into_iter().zip(compared) {
        let mut record = record?;
        ids.sort();
        ids.dedup();
        record.question_ids = ids;
        records.push(record);
    }
    records.sort_by(|x, y| {
        y.optimal
            .cmp(&x.optimal)
            .then_with(|| {
                x.full_length()
                    .unwrap_or(usize::MAX)
                    .cmp(&y.full_length().unwrap_or(usize::MAX))
            })
            .then_with(|| x.concept_a.cmp(&y.concept_a))
            .then_with(|| x.concept_b.cmp(&y.concept_b))
    });
    check_records(&p.graph, &records, options.max_depth)?;
    if options.optimal_only {
        records.retain(|r| r.optimal);
    }

    Ok(Report {
        tool: TOOL_NAME.to_string(),
        version: TOOL_VERSION.to_string(),
        config: ConfigEcho {
            ontology: String::new(),
            corpus: String::new(),
            lexicon: None,
            stoplist: None,
            word_threshold: options.matching.word_threshold(),
            seq_threshold: options.matching.seq_threshold(),
            max_depth: options.max_depth,
            hierarchical_predicates: options
                .graph
                .hierarchical_predicates
                .iter()
                .cloned()
                .collect(),
            label_predicates: options.graph.label_predicates.iter().cloned().collect(),
            label_lang: options.graph.label_lang.clone(),
            optimal_only: options.optimal_only,
        },
        records,
        matches,
        warnings,
    })
}

/// Re-checks every record against the graph before it is reported.
pub fn check_records(
    graph: &OntologyGraph,
    records: &[ConnectionRecord],
    max_depth: usize,
) -> Result<(), Error> {
    let fail = |r: &ConnectionRecord, what: String| {
        Err(Error::Invariant(format!(
            "{} / {}: {what}",
            r.concept_a, r.concept_b
        )))
    };
    let mut seen = std::collections::HashSet::new();
    for r in records {
        if r.concept_a >= r.concept_b {
            return fail(r, "concepts not in ascending order".into());
        }
        if !seen.insert((&r.concept_a, &r.concept_b)) {
            return fail(r, "duplicate pair".into());
        }
        if r.question_ids.is_empty() || r.question_ids.windows(2).any(|w| w[0] >= w[1]) {
            return fail(r, "question ids empty or unsorted".into());
        }
        for (path, filter) in [
            (&r.hierarchical, EdgeFilter::Hierarchical),
            (&r.full, EdgeFilter::All),
        ] {
            if let Some(path) = path {
                if path.length > max_depth
                    || path.nodes.first() != Some(&r.concept_a)
                    || path.nodes.last() != Some(&r.concept_b)
                {
                    return fail(r, "path endpoints or length out of bounds".into());
                }
                if let Err(e) = validate_path(graph, path, filter) {
                    return fail(r, e);
                }
            }
        }
        match (r.hierarchical_length(), r.full_length()) {
            (Some(h), Some(f)) if f > h => {
                return fail(r, format!("full length {f} exceeds hierarchical {h}"))
            }
            (Some(h), Some(f)) if r.optimal != (f < h) => {
                return fail(r, "optimal flag disagrees with lengths".into())
            }
            (None, _) | (_, None) if r.optimal => {
                return fail(r, "optimal without both paths".into())
            }
            (Some(_), None) => return fail(r, "hierarchical path without full path".into()),
            _ => {}
        }
    }
    Ok(())
}

pub const CSV_HEADER: [&str; 8] = [
    "concept_a",
    "concept_b",
    "hier_len",
    "full_len",
    "optimal",
    "questions",
    "hier_path",
    "full_path",
];

pub fn serialize_report(report: &Report, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            out
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("in-memory write");
            let len = |p: &Option<crate::pathfinder::PathResult>| {
                p.as_ref().map(|p| p.length.to_string()).unwrap_or_default()
            };
            let path = |p: &Option<crate::pathfinder::PathResult>| {
                p.as_ref().map(|p| p.nodes.join("/")).unwrap_or_default()
            };
            for r in &report.records {
                w.write_record([
                    r.concept_a.clone(),
                    r.concept_b.clone(),
                    len(&r.hierarchical),
                    len(&r.full),
                    r.optimal.to_string(),
                    r.question_ids.join(";"),
                    path(&r.hierarchical),
                    path(&r.full),
                ])
                .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}
