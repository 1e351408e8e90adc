#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use onto_enrich::ontology::{load_graph, GraphConfig, OntologyGraph};
use onto_enrich::pipeline::{Inputs, Options, Source};
use onto_enrich::EdgeFilter;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Vec<u8> {
    std::fs::read(fixture_path(name)).unwrap()
}

pub struct Fixture {
    pub ontology: Vec<u8>,
    pub corpus: Vec<u8>,
    pub lexicon: Vec<u8>,
    pub stoplist: Vec<u8>,
}

impl Fixture {
    pub fn load(corpus: &str) -> Self {
        Fixture {
            ontology: fixture("ontology.nt"),
            corpus: fixture(corpus),
            lexicon: fixture("lexicon.tsv"),
            stoplist: fixture("stoplist.txt"),
        }
    }

    pub fn inputs(&self) -> Inputs<'_> {
        Inputs {
            ontology: Source::new("ontology.nt", &self.ontology),
            corpus: Source::new("corpus.xml", &self.corpus),
            lexicon: Some(Source::new("lexicon.tsv", &self.lexicon)),
            stoplist: Some(Source::new("stoplist.txt", &self.stoplist)),
        }
    }
}

pub fn fixture_graph() -> OntologyGraph {
    load_graph(&fixture("ontology.nt"), &GraphConfig::default()).unwrap()
}

pub fn serial() -> Options {
    Options::default()
}

/// All-pairs edge counts by Floyd-Warshall over the undirected edge set,
/// built from the public edge list only.
pub struct AllPairs {
    index: HashMap<String, usize>,
    dist: Vec<Vec<Option<usize>>>,
}

impl AllPairs {
    #[allow(clippy::needless_range_loop)]
    pub fn new(graph: &OntologyGraph, filter: EdgeFilter) -> Self {
        let index: HashMap<String, usize> = graph
            .concepts()
            .iter()
            .enumerate()
            .map(|(i, c)| (c.iri.clone(), i))
            .collect();
        let n = index.len();
        let mut dist = vec![vec![None; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = Some(0);
        }
        for e in graph.edges() {
            if filter == EdgeFilter::Hierarchical
                && !graph.hierarchical_predicates().contains(&e.predicate)
            {
                continue;
            }
            let (s, o) = (index[&e.subject], index[&e.object]);
            dist[s][o] = Some(1);
            dist[o][s] = Some(1);
        }
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = dist[i][k] else { continue };
                for j in 0..n {
                    if let Some(kj) = dist[k][j] {
                        if dist[i][j].is_none_or(|d| ik + kj < d) {
                            dist[i][j] = Some(ik + kj);
                        }
                    }
                }
            }
        }
        AllPairs { index, dist }
    }

    pub fn get(&self, a: &str, b: &str) -> Option<usize> {
        self.dist[self.index[a]][self.index[b]]
    }
}

pub const PREDICATES: [&str; 6] = [
    "rdfs:subClassOf",
    "ome:hasChild",
    "ome:partOf",
    "ome:relatedTo",
    "ome:adjacentTo",
    "ome:dependsOn",
];

/// Random typed graph: up to `max_nodes` nodes, each unordered pair joined
/// with probability `p` by a random predicate in a random direction, and a
/// random non-empty subset of predicates classified hierarchical.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, p: f64) -> OntologyGraph {
    let n = rng.gen_range(2..=max_nodes);
    let mut lines = Vec::new();
    for i in 0..n {
        lines.push(format!("<n:{i:02}> <rdfs:label> \"node {i}\" ."));
        for j in i + 1..n {
            if rng.gen_bool(p) {
                let pred = PREDICATES.choose(rng).unwrap();
                let (s, o) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
                lines.push(format!("<n:{s:02}> <{pred}> <n:{o:02}> ."));
            }
        }
    }
    let mut hierarchical: BTreeSet<String> = PREDICATES
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|s| s.to_string())
        .collect();
    if hierarchical.is_empty() {
        hierarchical.insert(PREDICATES[0].to_string());
    }
    let config = GraphConfig {
        hierarchical_predicates: hierarchical,
        ..GraphConfig::default()
    };
    load_graph(lines.join("\n").as_bytes(), &config).unwrap()
}
