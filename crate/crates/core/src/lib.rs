//! Ontology enrichment from annotated question corpora.
//!
//! Noun and prepositional phrases marked in test questions are matched to
//! ontology concepts with a two-level Jaccard measure. For every pair of
//! concepts that co-occur in a question, the shortest path using only
//! hierarchical relations is compared with the shortest path over all
//! relations. Pairs whose full path is strictly shorter are reported as
//! optimal connections, candidates for new direct relations.
//!
//! ```
//! use onto_enrich::pipeline::{analyze, Inputs, Options, Source};
//!
//! let inputs = Inputs {
//!     ontology: Source::new("onto.nt", b"<c:Square> <rdfs:subClassOf> <c:Rhombus> .\n\
//!                                        <c:Rhombus> <rdfs:subClassOf> <c:Parallelogram> .\n\
//!                                        <c:Square> <ome:isA> <c:Parallelogram> ."),
//!     corpus: Source::new("q.xml", b"<corpus><question id=\"q1\"><text>A <TERM1>square</TERM1> \
//!                                    is a <TERM1>parallelogram</TERM1>.</text></question></corpus>"),
//!     lexicon: None,
//!     stoplist: None,
//! };
//! let report = analyze(&inputs, &Options::default()).unwrap();
//! assert_eq!(report.records.len(), 1);
//! assert!(report.records[0].optimal);
//! ```

pub mod corpus;
pub mod matcher;
pub mod ontology;
pub mod pathfinder;
pub mod pipeline;
pub mod textnorm;

pub use corpus::{extract_phrases, parse_corpus, MarkedPhrase, QuestionCorpus};
pub use matcher::{char_jaccard, seq_similarity, ConceptMatch, MatchConfig};
pub use ontology::{
    build_graph, build_label_index, parse_triples, GraphConfig, LabelIndex, OntologyGraph,
};
pub use pathfinder::{compare, shortest_path, ConnectionRecord, EdgeFilter, PathResult};
pub use pipeline::{analyze, run, serialize_report, OutputFormat, Report, RunConfig};
pub use textnorm::{
    load_lexicon, normalize_phrase, tokenize, Lemma, LemmaSequence, Lexicon, Stoplist,
};
