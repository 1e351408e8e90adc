//! Concept graph loading.
//!
//! The storage format is a line-based triple subset:
//!
//! ```text
//! # comment
//! <c:Square> <rdfs:subClassOf> <c:Quadrilateral> .
//! <c:Square> <rdfs:label> "square"@en .
//! ```
//!
//! No prefixes, blank nodes or multi-line statements. Edges between concepts
//! are classified as hierarchical when their predicate is in the configured
//! hierarchical set; the full edge set always contains the hierarchical one.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::textnorm::{normalize_phrase, LemmaSequence, Lexicon, Stoplist};

pub const RDFS_SUBCLASS_OF: &str = "rdfs:subClassOf";
pub const OME_HAS_CHILD: &str = "ome:hasChild";
pub const RDFS_LABEL: &str = "rdfs:label";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OntologyError {
    #[error("ontology line {line}: malformed triple: {reason}")]
    MalformedTriple { line: usize, reason: String },
    #[error("ontology line {line}: unterminated literal")]
    UnterminatedLiteral { line: usize },
    #[error("ontology line {line}: self-loop edge {iri} {predicate} {iri}")]
    SelfLoopEdge {
        line: usize,
        iri: String,
        predicate: String,
    },
    #[error("ontology is not valid UTF-8: {0}")]
    Encoding(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TripleObject {
    Iri(String),
    Literal { value: String, lang: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: TripleObject,
    /// 1-based source line.
    pub line: usize,
}

pub fn parse_triples(input: &[u8]) -> Result<Vec<Triple>, OntologyError> {
    let text = std::str::from_utf8(input).map_err(|e| OntologyError::Encoding(e.to_string()))?;
    let mut triples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        triples.push(
            LineParser {
                rest: line,
                line: i + 1,
            }
            .triple()?,
        );
    }
    Ok(triples)
}

struct LineParser<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> LineParser<'a> {
    fn fail(&self, reason: impl Into<String>) -> OntologyError {
        OntologyError::MalformedTriple {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn triple(mut self) -> Result<Triple, OntologyError> {
        let subject = self.iri("subject")?;
        let predicate = self.iri("predicate")?;
        self.skip_ws();
        let object = if self.rest.starts_with('"') {
            self.literal()?
        } else {
            TripleObject::Iri(self.iri("object")?)
        };
        self.skip_ws();
        match self.rest.strip_prefix('.') {
            Some(tail) if tail.trim().is_empty() => {}
            Some(_) => return Err(self.fail("unexpected text after '.'")),
            None => return Err(self.fail("expected '.' at end of triple")),
        }
        Ok(Triple {
            subject,
            predicate,
            object,
            line: self.line,
        })
    }

    fn iri(&mut self, role: &str) -> Result<String, OntologyError> {
        self.skip_ws();
        let body = self
            .rest
            .strip_prefix('<')
            .ok_or_else(|| self.fail(format!("expected <iri> as {role}")))?;
        let end = body
            .find('>')
            .ok_or_else(|| self.fail(format!("unclosed <iri> in {role}")))?;
        let iri = &body[..end];
        if iri.is_empty() {
            return Err(self.fail(format!("empty {role} iri")));
        }
        if let Some(c) = iri
            .chars()
            .find(|&c| c.is_whitespace() || c.is_control() || "<\"{}|^`\\".contains(c))
        {
            return Err(self.fail(format!("invalid character {c:?} in {role} iri")));
        }
        if !iri.contains(':') {
            return Err(self.fail(format!("{role} iri {iri:?} is not absolute")));
        }
        self.rest = &body[end + 1..];
        Ok(iri.to_string())
    }

    fn literal(&mut self) -> Result<TripleObject, OntologyError> {
        let mut chars = self.rest[1..].char_indices();
        let mut value = String::new();
        let close = loop {
            let Some((i, c)) = chars.next() else {
                return Err(OntologyError::UnterminatedLiteral { line: self.line });
            };
            match c {
                '"' => break i,
                '\\' => {
                    let Some((_, e)) = chars.next() else {
                        return Err(OntologyError::UnterminatedLiteral { line: self.line });
                    };
                    match e {
                        't' => value.push('\t'),
                        'b' => value.push('\u{8}'),
                        'n' => value.push('\n'),
                        'r' => value.push('\r'),
                        'f' => value.push('\u{c}'),
                        '"' | '\'' | '\\' => value.push(e),
                        'u' | 'U' => {
                            let width = if e == 'u' { 4 } else { 8 };
                            let hex: String = chars.by_ref().take(width).map(|(_, h)| h).collect();
                            let decoded = (hex.len() == width)
                                .then(|| u32::from_str_radix(&hex, 16).ok())
                                .flatten()
                                .and_then(char::from_u32)
                                .ok_or_else(|| self.fail(format!("bad \\{e} escape")))?;
                            value.push(decoded);
                        }
                        other => return Err(self.fail(format!("unknown escape \\{other}"))),
                    }
                }
                c => value.push(c),
            }
        };
        self.rest = &self.rest[1 + close + 1..];
        let lang = match self.rest.strip_prefix('@') {
            Some(tail) => {
                let end = tail
                    .find(|c: char| c.is_whitespace() || c == '.')
                    .unwrap_or(tail.len());
                let tag = &tail[..end];
                let valid = !tag.is_empty()
                    && tag.split('-').enumerate().all(|(i, part)| {
                        !part.is_empty()
                            && part
                                .chars()
                                .all(|c| c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit()))
                    });
                if !valid {
                    return Err(self.fail(format!("invalid language tag {tag:?}")));
                }
                self.rest = &tail[end..];
                Some(tag.to_string())
            }
            None => None,
        };
        Ok(TripleObject::Literal { value, lang })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphConfig {
    pub hierarchical_predicates: BTreeSet<String>,
    pub label_predicates: BTreeSet<String>,
    /// Keep only labels with this language tag.
    pub label_lang: Option<String>,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            hierarchical_predicates: [RDFS_SUBCLASS_OF, OME_HAS_CHILD].map(String::from).into(),
            label_predicates: [RDFS_LABEL.to_string()].into(),
            label_lang: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub text: String,
    pub lang: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub iri: String,
    /// Sorted, deduplicated, never empty.
    pub labels: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationEdge {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Neighbor {
    pub node: usize,
    pub predicate: usize,
    pub hierarchical: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyGraph {
    concepts: Vec<Concept>,
    index: HashMap<String, usize>,
    edges: BTreeSet<RelationEdge>,
    predicates: Vec<String>,
    hierarchical_predicates: BTreeSet<String>,
    /// Per concept, sorted by (neighbor iri, predicate iri).
    adjacency: Vec<Vec<Neighbor>>,
}

impl OntologyGraph {
    /// Concepts in ascending IRI order.
    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn concept(&self, iri: &str) -> Option<&Concept> {
        self.index.get(iri).map(|&i| &self.concepts[i])
    }

    pub fn contains(&self, iri: &str) -> bool {
        self.index.contains_key(iri)
    }

    pub fn edges(&self) -> &BTreeSet<RelationEdge> {
        &self.edges
    }

    pub fn hierarchical_edges(&self) -> impl Iterator<Item = &RelationEdge> {
        self.edges
            .iter()
            .filter(|e| self.is_hierarchical(&e.predicate))
    }

    pub fn hierarchical_predicates(&self) -> &BTreeSet<String> {
        &self.hierarchical_predicates
    }

    pub fn is_hierarchical(&self, predicate: &str) -> bool {
        self.hierarchical_predicates.contains(predicate)
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub(crate) fn node_index(&self, iri: &str) -> Option<usize> {
        self.index.get(iri).copied()
    }

    pub(crate) fn iri_at(&self, node: usize) -> &str {
        &self.concepts[node].iri
    }

    pub(crate) fn predicate_at(&self, p: usize) -> &str {
        &self.predicates[p]
    }

    pub(crate) fn neighbors(&self, node: usize) -> &[Neighbor] {
        &self.adjacency[node]
    }
}

fn local_name(iri: &str) -> &str {
    let tail = ['#', '/', ':']
        .iter()
        .find_map(|&sep| iri.rfind(sep).map(|i| &iri[i + 1..]))
        .unwrap_or(iri);
    if tail.is_empty() {
        iri
    } else {
        tail
    }
}

pub fn build_graph(
    triples: &[Triple],
    config: &GraphConfig,
) -> Result<OntologyGraph, OntologyError> {
    let mut labels: BTreeMap<String, BTreeSet<Label>> = BTreeMap::new();
    let mut edges = BTreeSet::new();

    for t in triples {
        match &t.object {
            TripleObject::Literal { value, lang } => {
                let entry = labels.entry(t.subject.clone()).or_default();
                if !config.label_predicates.contains(&t.predicate) || value.trim().is_empty() {
                    continue;
                }
                let wanted = match (&config.label_lang, lang) {
                    (None, _) => true,
                    (Some(want), Some(have)) => want.eq_ignore_ascii_case(have),
                    (Some(_), None) => false,
                };
                if wanted {
                    entry.insert(Label {
                        text: value.clone(),
                        lang: lang.clone(),
                    });
                }
            }
            TripleObject::Iri(object) => {
                if *object == t.subject {
                    return Err(OntologyError::SelfLoopEdge {
                        line: t.line,
                        iri: object.clone(),
                        predicate: t.predicate.clone(),
                    });
                }
                labels.entry(t.subject.clone()).or_default();
                labels.entry(object.clone()).or_default();
                edges.insert(RelationEdge {
                    subject: t.subject.clone(),
                    predicate: t.predicate.clone(),
                    object: object.clone(),
                });
            }
        }
    }

    let concepts: Vec<Concept> = labels
        .into_iter()
        .map(|(iri, labels)| {
            let mut labels: Vec<Label> = labels.into_iter().collect();
            if labels.is_empty() {
                labels.push(Label {
                    text: local_name(&iri).to_string(),
                    lang: None,
                });
            }
            Concept { iri, labels }
        })
        .collect();
    let index: HashMap<String, usize> = concepts
        .iter()
        .enumerate()
        .map(|(i, c)| (c.iri.clone(), i))
        .collect();
    let predicates: Vec<String> = edges
        .iter()
        .map(|e| e.predicate.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let predicate_index: HashMap<&str, usize> = predicates
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_str(), i))
        .collect();

    let mut adjacency = vec![Vec::new(); concepts.len()];
    for e in &edges {
        let s = index[&e.subject];
        let o = index[&e.object];
        let p = predicate_index[e.predicate.as_str()];
        let hierarchical = config.hierarchical_predicates.contains(&e.predicate);
        adjacency[s].push(Neighbor {
            node: o,
            predicate: p,
            hierarchical,
        });
        adjacency[o].push(Neighbor {
            node: s,
            predicate: p,
            hierarchical,
        });
    }
    for list in &mut adjacency {
        list.sort_by_key(|n| (n.node, n.predicate));
        list.dedup();
    }

    Ok(OntologyGraph {
        concepts,
        index,
        edges,
        predicates,
        hierarchical_predicates: config.hierarchical_predicates.clone(),
        adjacency,
    })
}

/// Parses and builds in one step.
pub fn load_graph(input: &[u8], config: &GraphConfig) -> Result<OntologyGraph, OntologyError> {
    build_graph(&parse_triples(input)?, config)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelEntry {
    pub iri: String,
    pub label: String,
    pub lemmas: LemmaSequence,
}

/// Normalized concept labels, sorted by (iri, label).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelIndex {
    entries: Vec<LabelEntry>,
    warnings: Vec<String>,
}

impl LabelIndex {
    pub fn entries(&self) -> &[LabelEntry] {
        &self.entries
    }

    /// Labels dropped because nothing was left after normalization.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn build_label_index(
    graph: &OntologyGraph,
    lexicon: &Lexicon,
    stoplist: &Stoplist,
) -> LabelIndex {
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for concept in graph.concepts() {
        let texts: BTreeSet<&str> = concept.labels.iter().map(|l| l.text.as_str()).collect();
        for text in texts {
            let lemmas = normalize_phrase(text, lexicon, stoplist);
            if lemmas.is_empty() {
                warnings.push(format!(
                    "label {text:?} of {} is empty after normalization; not indexed",
                    concept.iri
                ));
                continue;
            }
            entries.push(LabelEntry {
                iri: concept.iri.clone(),
                label: text.to_string(),
                lemmas,
            });
        }
    }
    LabelIndex { entries, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(src: &str) -> OntologyGraph {
        load_graph(src.as_bytes(), &GraphConfig::default()).unwrap()
    }

    #[test]
    fn object_triple() {
        let t = parse_triples(b"<c:Square> <rdfs:subClassOf> <c:Quadrilateral> .").unwrap();
        assert_eq!(
            t,
            [Triple {
                subject: "c:Square".into(),
                predicate: "rdfs:subClassOf".into(),
                object: TripleObject::Iri("c:Quadrilateral".into()),
                line: 1,
            }]
        );
    }

    #[test]
    fn literal_triple() {
        let t = parse_triples(b"<c:Square> <rdfs:label> \"square\"@en .").unwrap();
        assert_eq!(
            t[0].object,
            TripleObject::Literal {
                value: "square".into(),
                lang: Some("en".into())
            }
        );
    }

    #[test]
    fn blank_and_comment_lines() {
        let src = "<c:A> <p:x> <c:B> .\n\n<c:B> <p:x> <c:C> .\n";
        let t = parse_triples(src.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].line, 3);
        let src = "# header\n<c:A> <p:x> <c:B> .\n   # indented comment\n";
        assert_eq!(parse_triples(src.as_bytes()).unwrap().len(), 1);
    }

    #[test]
    fn literal_escapes_and_tags() {
        let t = parse_triples(br#"<c:A> <rdfs:label> "say \"hi\"\t\u0410\\" ."#).unwrap();
        assert_eq!(
            t[0].object,
            TripleObject::Literal {
                value: "say \"hi\"\tА\\".into(),
                lang: None
            }
        );
        let t = parse_triples(b"<c:A> <rdfs:label> \"x\"@ru-RU.").unwrap();
        assert!(
            matches!(&t[0].object, TripleObject::Literal { lang: Some(l), .. } if l == "ru-RU")
        );
    }

    #[test]
    fn unterminated_literal() {
        let e = parse_triples(b"<c:A> <p:x> <c:B> .\n<c:A> <rdfs:label> \"open .\n").unwrap_err();
        assert_eq!(e, OntologyError::UnterminatedLiteral { line: 2 });
    }

    #[test]
    fn malformed_lines() {
        for (src, line) in [
            ("<c:A> <p:x> <c:B>", 1),
            ("\n<c:A> <p:x> .", 2),
            ("<c:A> <p:x> <c:B> . extra", 1),
            ("<c:A> <> <c:B> .", 1),
            ("<A> <p:x> <c:B> .", 1),
            ("<c:A> <p:x> <c:B c> .", 1),
            ("<c:A> p:x <c:B> .", 1),
            ("<c:A> <p:x> \"v\"@ .", 1),
            ("<c:A> <p:x> \"v\"^^<x:int> .", 1),
            ("<c:A> <p:x> \"\\q\" .", 1),
        ] {
            match parse_triples(src.as_bytes()) {
                Err(OntologyError::MalformedTriple { line: l, .. }) => assert_eq!(l, line, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn single_hierarchical_edge() {
        let g = graph("<c:A> <rdfs:subClassOf> <c:B> .");
        assert_eq!(g.len(), 2);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.hierarchical_edges().count(), 1);
    }

    #[test]
    fn classification_is_a_filter() {
        let g = graph("<c:A> <rdfs:subClassOf> <c:B> .\n<c:A> <ome:relatesTo> <c:C> .");
        assert_eq!(g.hierarchical_edges().count(), 1);
        assert_eq!(g.edges().len(), 2);
        assert!(g.hierarchical_edges().all(|e| g.edges().contains(e)));
    }

    #[test]
    fn default_hierarchy_predicates() {
        let cfg = GraphConfig::default();
        let expected: BTreeSet<String> =
            ["rdfs:subClassOf", "ome:hasChild"].map(String::from).into();
        assert_eq!(cfg.hierarchical_predicates, expected);
        assert_eq!(cfg.label_predicates, ["rdfs:label".to_string()].into());
    }

    #[test]
    fn local_name_fallback() {
        let g = graph("<c:RightAngle> <rdfs:subClassOf> <http://x.org/onto#Angle> .\n<http://x.org/a/Ray> <p:x> <c:RightAngle> .");
        assert_eq!(
            g.concept("c:RightAngle").unwrap().labels[0].text,
            "RightAngle"
        );
        assert_eq!(
            g.concept("http://x.org/onto#Angle").unwrap().labels[0].text,
            "Angle"
        );
        assert_eq!(
            g.concept("http://x.org/a/Ray").unwrap().labels[0].text,
            "Ray"
        );
        assert_eq!(local_name("http://x.org/"), "http://x.org/");
    }

    #[test]
    fn labelled_only_concept_and_duplicates() {
        let g = graph(
            "<c:A> <rdfs:label> \"a\" .\n<c:B> <p:x> <c:C> .\n<c:B> <p:x> <c:C> .\n<c:B> <rdfs:comment> \"note\" .",
        );
        assert_eq!(g.len(), 3);
        assert_eq!(g.edges().len(), 1);
        // rdfs:comment is not a label predicate
        assert_eq!(g.concept("c:B").unwrap().labels[0].text, "B");
    }

    #[test]
    fn self_loop_rejected() {
        let e = load_graph(b"\n<c:A> <p:x> <c:A> .", &GraphConfig::default()).unwrap_err();
        assert!(matches!(e, OntologyError::SelfLoopEdge { line: 2, .. }));
    }

    #[test]
    fn language_filter() {
        let src = "<c:A> <rdfs:label> \"angle\"@en .\n<c:A> <rdfs:label> \"угол\"@ru .\n<c:B> <rdfs:label> \"ray\"@en .";
        let all = graph(src);
        assert_eq!(all.concept("c:A").unwrap().labels.len(), 2);
        let cfg = GraphConfig {
            label_lang: Some("RU".into()),
            ..GraphConfig::default()
        };
        let ru = load_graph(src.as_bytes(), &cfg).unwrap();
        assert_eq!(ru.concept("c:A").unwrap().labels[0].text, "угол");
        assert_eq!(ru.concept("c:B").unwrap().labels[0].text, "B");
    }

    #[test]
    fn custom_label_predicate() {
        let cfg = GraphConfig {
            label_predicates: ["skos:prefLabel".to_string()].into(),
            ..GraphConfig::default()
        };
        let g = load_graph(
            b"<c:A> <skos:prefLabel> \"alpha\" .\n<c:A> <rdfs:label> \"x\" .",
            &cfg,
        )
        .unwrap();
        assert_eq!(g.concept("c:A").unwrap().labels.len(), 1);
        assert_eq!(g.concept("c:A").unwrap().labels[0].text, "alpha");
    }

    #[test]
    fn label_index_entries() {
        let g = graph(
            "<c:TriangleMiddleLine> <rdfs:label> \"Triangle middle line\"@en .\n\
             <c:RightAngle> <rdfs:label> \"Right angle\"@en .\n\
             <c:Junk> <rdfs:label> \"of the\" .",
        );
        let idx = build_label_index(&g, &Lexicon::new(), &Stoplist::new(["of", "the"]));
        let got: Vec<_> = idx
            .entries()
            .iter()
            .map(|e| (e.iri.as_str(), e.lemmas.to_string()))
            .collect();
        assert_eq!(
            got,
            [
                ("c:RightAngle", "[right, angle]".to_string()),
                (
                    "c:TriangleMiddleLine",
                    "[triangle, middle, line]".to_string()
                ),
            ]
        );
        assert_eq!(idx.warnings().len(), 1);
        assert!(idx.warnings()[0].contains("c:Junk"));
    }

    #[test]
    fn label_index_has_one_entry_per_label() {
        let g = graph("<c:M> <rdfs:label> \"Midpoint\" .\n<c:M> <rdfs:label> \"Middle of the segment\" .\n<c:M> <rdfs:label> \"Midpoint\"@en .");
        let idx = build_label_index(&g, &Lexicon::new(), &Stoplist::default_english());
        let labels: Vec<_> = idx.entries().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["Middle of the segment", "Midpoint"]);
    }

    #[test]
    fn fixture_is_deterministic() {
        let src = include_bytes!("../fixtures/ontology.nt");
        let a = load_graph(src, &GraphConfig::default()).unwrap();
        let b = load_graph(src, &GraphConfig::default()).unwrap();
        assert_eq!(a, b);
        let stop = Stoplist::default_english();
        let ia = build_label_index(&a, &Lexicon::new(), &stop);
        assert_eq!(ia, build_label_index(&b, &Lexicon::new(), &stop));
        assert!(ia.entries().iter().all(|e| a.contains(&e.iri)));
        let keys: Vec<_> = ia.entries().iter().map(|e| (&e.iri, &e.label)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
