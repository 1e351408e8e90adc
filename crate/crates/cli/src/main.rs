use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use onto_enrich::matcher::MatchConfig;
use onto_enrich::ontology::GraphConfig;
use onto_enrich::pathfinder::DEFAULT_MAX_DEPTH;
use onto_enrich::pipeline::{run, serialize_report, Options, OutputFormat, RunConfig};

/// Find concept pairs whose shortest path over all ontology relations is
/// shorter than their shortest path over hierarchical relations alone.
#[derive(Debug, Parser)]
#[command(name = "onto-enrich", version)]
struct Cli {
    /// Ontology as one triple per line
    #[arg(long, value_name = "FILE")]
    ontology: PathBuf,
    /// XML question corpus with TERM1/TERM2 markup
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Tab-separated surface form to lemma table
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Stop words, one per line (defaults to a built-in English list)
    #[arg(long, value_name = "FILE")]
    stoplist: Option<PathBuf>,
    #[arg(long, default_value_t = 0.75)]
    word_threshold: f64,
    #[arg(long, default_value_t = 0.5)]
    seq_threshold: f64,
    /// Longest path, in edges, that the search will consider
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    /// Keep only labels with this language tag
    #[arg(long, value_name = "TAG")]
    label_lang: Option<String>,
    /// Hierarchical predicate IRI; repeat for several (replaces the defaults)
    #[arg(long = "hierarchical-predicate", value_name = "IRI")]
    hierarchical_predicates: Vec<String>,
    /// Label predicate IRI; repeat for several (replaces the default)
    #[arg(long = "label-predicate", value_name = "IRI")]
    label_predicates: Vec<String>,
    /// json or csv
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Write only optimal connections
    #[arg(long)]
    optimal_only: bool,
    /// Run on a single thread
    #[arg(long)]
    serial: bool,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, String> {
        let matching =
            MatchConfig::new(self.word_threshold, self.seq_threshold).map_err(|e| e.to_string())?;
        let mut graph = GraphConfig {
            label_lang: self.label_lang,
            ..GraphConfig::default()
        };
        if !self.hierarchical_predicates.is_empty() {
            graph.hierarchical_predicates = BTreeSet::from_iter(self.hierarchical_predicates);
        }
        if !self.label_predicates.is_empty() {
            graph.label_predicates = BTreeSet::from_iter(self.label_predicates);
        }
        Ok(RunConfig {
            ontology: self.ontology,
            corpus: self.corpus,
            lexicon: self.lexicon,
            stoplist: self.stoplist,
            options: Options {
                matching,
                max_depth: self.max_depth,
                graph,
                optimal_only: self.optimal_only,
                parallel: !self.serial,
            },
            format: self.format,
            output: self.out,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = std::fs::write(&config.output, serialize_report(&report, config.format)) {
        eprintln!("error: {}: {e}", config.output.display());
        return ExitCode::from(1);
    }
    eprintln!(
        "{} connections ({} optimal) written to {}",
        report.records.len(),
        report.optimal_count(),
        config.output.display()
    );
    ExitCode::SUCCESS
}
