//! Browser bindings for the onto-enrich demo page.
//!
//! Every export takes and returns plain strings; results are JSON. The
//! `*_json` functions hold the logic and are usable from native code.

use onto_enrich::matcher::{align, seq_similarity};
use onto_enrich::ontology::{load_graph, GraphConfig};
use onto_enrich::pipeline::{analyze, serialize_report, Inputs, Options, OutputFormat, Source};
use onto_enrich::textnorm::{load_lexicon, normalize_phrase, Lexicon, Stoplist};
use onto_enrich::{compare, MatchConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const ONTOLOGY: &str = include_str!("../../core/fixtures/ontology.nt");
const CORPUS: &str = include_str!("../../core/fixtures/corpus.xml");
const LEXICON: &str = include_str!("../../core/fixtures/lexicon.tsv");
const STOPLIST: &str = include_str!("../../core/fixtures/stoplist.txt");

fn lexicon() -> Lexicon {
    load_lexicon(LEXICON.as_bytes()).expect("bundled lexicon is valid")
}

fn stoplist() -> Stoplist {
    Stoplist::parse(STOPLIST)
}

#[derive(Serialize)]
struct AlignedWords<'a> {
    left: &'a str,
    right: &'a str,
    similarity: f64,
}

#[derive(Serialize)]
struct Similarity<'a> {
    lemmas_a: Vec<&'a str>,
    lemmas_b: Vec<&'a str>,
    pairs: Vec<AlignedWords<'a>>,
    /// None when either side normalizes to nothing.
    score: Option<f64>,
}

/// Normalizes both phrases with the bundled lexicon and stoplist and shows
/// the word alignment behind their similarity.
pub fn similarity_json(a: &str, b: &str, word_threshold: f64) -> Result<String, String> {
    MatchConfig::new(word_threshold, 0.0).map_err(|e| e.to_string())?;
    let (lexicon, stoplist) = (lexicon(), stoplist());
    let seq_a = normalize_phrase(a, &lexicon, &stoplist);
    let seq_b = normalize_phrase(b, &lexicon, &stoplist);
    let pairs = align(&seq_a, &seq_b, word_threshold);
    let score = seq_similarity(&seq_a, &seq_b, word_threshold).ok();
    let out = Similarity {
        lemmas_a: seq_a.lemmas().iter().map(|l| l.form()).collect(),
        lemmas_b: seq_b.lemmas().iter().map(|l| l.form()).collect(),
        pairs: pairs
            .iter()
            .map(|p| AlignedWords {
                left: seq_a.lemmas()[p.left].form(),
                right: seq_b.lemmas()[p.right].form(),
                similarity: p.similarity,
            })
            .collect(),
        score,
    };
    Ok(serde_json::to_string(&out).unwrap())
}

/// Concept IRIs of an ontology, sorted.
pub fn concepts_json(ontology: &str) -> Result<String, String> {
    let graph =
        load_graph(ontology.as_bytes(), &GraphConfig::default()).map_err(|e| e.to_string())?;
    let iris: Vec<&str> = graph.concepts().iter().map(|c| c.iri.as_str()).collect();
    Ok(serde_json::to_string(&iris).unwrap())
}

/// Hierarchical and full shortest paths between two concepts.
pub fn compare_json(ontology: &str, a: &str, b: &str, max_depth: usize) -> Result<String, String> {
    if max_depth < 1 {
        return Err("max depth must be at least 1".into());
    }
    let graph =
        load_graph(ontology.as_bytes(), &GraphConfig::default()).map_err(|e| e.to_string())?;
    let record = compare(&graph, a, b, max_depth).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&record).unwrap())
}

/// Full analysis of a corpus against an ontology, using the bundled lexicon
/// and stoplist. Returns the JSON report.
pub fn analyze_json(
    ontology: &str,
    corpus: &str,
    word_threshold: f64,
    seq_threshold: f64,
    max_depth: usize,
) -> Result<String, String> {
    let options = Options {
        matching: MatchConfig::new(word_threshold, seq_threshold).map_err(|e| e.to_string())?,
        max_depth,
        parallel: false,
        ..Options::default()
    };
    let inputs = Inputs {
        ontology: Source::new("ontology", ontology.as_bytes()),
        corpus: Source::new("corpus", corpus.as_bytes()),
        lexicon: Some(Source::new("lexicon.tsv", LEXICON.as_bytes())),
        stoplist: Some(Source::new("stoplist.txt", STOPLIST.as_bytes())),
    };
    let report = analyze(&inputs, &options).map_err(|e| e.to_string())?;
    Ok(String::from_utf8(serialize_report(&report, OutputFormat::Json)).unwrap())
}

fn js(result: Result<String, String>) -> Result<String, JsValue> {
    result.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = sampleOntology)]
pub fn sample_ontology() -> String {
    ONTOLOGY.to_string()
}

#[wasm_bindgen(js_name = sampleCorpus)]
pub fn sample_corpus() -> String {
    CORPUS.to_string()
}

#[wasm_bindgen]
pub fn similarity(a: &str, b: &str, word_threshold: f64) -> Result<String, JsValue> {
    js(similarity_json(a, b, word_threshold))
}

#[wasm_bindgen]
pub fn concepts(ontology: &str) -> Result<String, JsValue> {
    js(concepts_json(ontology))
}

#[wasm_bindgen(js_name = compareConcepts)]
pub fn compare_concepts(
    ontology: &str,
    a: &str,
    b: &str,
    max_depth: usize,
) -> Result<String, JsValue> {
    js(compare_json(ontology, a, b, max_depth))
}

#[wasm_bindgen(js_name = analyzeCorpus)]
pub fn analyze_corpus(
    ontology: &str,
    corpus: &str,
    word_threshold: f64,
    seq_threshold: f64,
    max_depth: usize,
) -> Result<String, JsValue> {
    js(analyze_json(
        ontology,
        corpus,
        word_threshold,
        seq_threshold,
        max_depth,
    ))
}
