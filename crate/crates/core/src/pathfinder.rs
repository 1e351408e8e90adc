//! Shortest connections between concepts.
//!
//! Edges are walked in both directions. A hierarchical search admits only
//! edges with a hierarchical predicate, a full search admits every edge. A
//! pair is an optimal connection when its full path is strictly shorter
//! than its hierarchical path.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::matcher::ConceptMatch;
use crate::ontology::OntologyGraph;

pub const DEFAULT_MAX_DEPTH: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("unknown concept {0}")]
    UnknownConcept(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeFilter {
    Hierarchical,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathResult {
    /// Number of edges.
    pub length: usize,
    pub nodes: Vec<String>,
    pub predicates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectionRecord {
    pub concept_a: String,
    pub concept_b: String,
    pub hierarchical: Option<PathResult>,
    pub full: Option<PathResult>,
    pub optimal: bool,
    pub question_ids: Vec<String>,
}

impl ConnectionRecord {
    pub fn hierarchical_length(&self) -> Option<usize> {
        self.hierarchical.as_ref().map(|p| p.length)
    }

    pub fn full_length(&self) -> Option<usize> {
        self.full.as_ref().map(|p| p.length)
    }
}

/// Breadth-first search from `src` to `dst` over the admitted edges, up to
/// `max_depth` edges. Neighbors are expanded in ascending
/// (neighbor iri, predicate iri) order, so equal-length paths resolve the
/// same way on every run.
pub fn shortest_path(
    graph: &OntologyGraph,
    src: &str,
    dst: &str,
    filter: EdgeFilter,
    max_depth: usize,
) -> Result<Option<PathResult>, PathError> {
    let lookup = |iri: &str| {
        graph
            .node_index(iri)
            .ok_or_else(|| PathError::UnknownConcept(iri.to_string()))
    };
    let (start, goal) = (lookup(src)?, lookup(dst)?);
    if start == goal {
        return Ok(Some(PathResult {
            length: 0,
            nodes: vec![src.to_string()],
            predicates: Vec::new(),
        }));
    }

    // parent[n] = (previous node, predicate index)
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; graph.len()];
    let mut seen = vec![false; graph.len()];
    let mut queue = VecDeque::from([(start, 0usize)]);
    seen[start] = true;

    while let Some((node, depth)) = queue.pop_front() {
        if depth >= max_depth {
            continue;
        }
        for n in graph.neighbors(node) {
            if seen[n.node] || (filter == EdgeFilter::Hierarchical && !n.hierarchical) {
                continue;
            }
            seen[n.node] = true;
            parent[n.node] = Some((node, n.predicate));
            if n.node == goal {
                return Ok(Some(trace(graph, &parent, goal)));
            }
            queue.push_back((n.node, depth + 1));
        }
    }
    Ok(None)
}

fn trace(graph: &OntologyGraph, parent: &[Option<(usize, usize)>], goal: usize) -> PathResult {
    let mut nodes = vec![graph.iri_at(goal).to_string()];
    let mut predicates = Vec::new();
    let mut at = goal;
    while let Some((prev, pred)) = parent[at] {
        predicates.push(graph.predicate_at(pred).to_string());
        nodes.push(graph.iri_at(prev).to_string());
        at = prev;
    }
    nodes.reverse();
    predicates.reverse();
    PathResult {
        length: predicates.len(),
        nodes,
        predicates,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptPair {
    /// Always less than `concept_b`.
    pub concept_a: String,
    pub concept_b: String,
    pub question_id: String,
}

/// All unordered pairs of distinct concepts matched in one question.
pub fn enumerate_pairs(matches: &[ConceptMatch]) -> Vec<ConceptPair> {
    let Some(first) = matches.first() else {
        return Vec::new();
    };
    let concepts: Vec<&str> = matches
        .iter()
        .map(|m| m.concept_iri.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut pairs = Vec::new();
    for (i, a) in concepts.iter().enumerate() {
        for b in &concepts[i + 1..] {
            pairs.push(ConceptPair {
                concept_a: a.to_string(),
                concept_b: b.to_string(),
                question_id: first.question_id.clone(),
            });
        }
    }
    pairs
}

/// Runs both searches for a pair. `question_ids` is left empty for the
/// caller to fill.
pub fn compare(
    graph: &OntologyGraph,
    a: &str,
    b: &str,
    max_depth: usize,
) -> Result<ConnectionRecord, PathError> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let hierarchical = shortest_path(graph, a, b, EdgeFilter::Hierarchical, max_depth)?;
    let full = shortest_path(graph, a, b, EdgeFilter::All, max_depth)?;
    let optimal = match (&hierarchical, &full) {
        (Some(h), Some(f)) => f.length < h.length,
        _ => false,
    };
    Ok(ConnectionRecord {
        concept_a: a.to_string(),
        concept_b: b.to_string(),
        hierarchical,
        full,
        optimal,
        question_ids: Vec::new(),
    })
}

/// Checks a path against the graph: shape, endpoints, and that every step
/// uses an existing edge admitted by the filter.
pub fn validate_path(
    graph: &OntologyGraph,
    path: &PathResult,
    filter: EdgeFilter,
) -> Result<(), String> {
    if path.nodes.len() != path.length + 1 || path.predicates.len() != path.length {
        return Err(format!(
            "path of length {} has inconsistent shape",
            path.length
        ));
    }
    for (i, pred) in path.predicates.iter().enumerate() {
        let (u, v) = (&path.nodes[i], &path.nodes[i + 1]);
        if filter == EdgeFilter::Hierarchical && !graph.is_hierarchical(pred) {
            return Err(format!("step {u} -> {v} uses non-hierarchical {pred}"));
        }
        let found = graph.edges().iter().any(|e| {
            &e.predicate == pred
                && ((&e.subject == u && &e.object == v) || (&e.subject == v && &e.object == u))
        });
        if !found {
            return Err(format!("no edge {u} {pred} {v}"));
        }
    }
    Ok(())
}
