//! Two-level Jaccard matching of phrases against concept labels.
//!
//! Words are compared by the Jaccard coefficient of their letter sets. Two
//! words at or above `word_threshold` count as the same word, and sequences
//! are then scored by the Jaccard coefficient over those fuzzy word matches.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::corpus::MarkedPhrase;
use crate::ontology::{LabelEntry, LabelIndex};
use crate::textnorm::{normalize_phrase, Lemma, LemmaSequence, Lexicon, Stoplist};

pub const DEFAULT_WORD_THRESHOLD: f64 = 0.75;
pub const DEFAULT_SEQ_THRESHOLD: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum MatchError {
    #[error("cannot score an empty lemma sequence")]
    EmptySequence,
    #[error("{name} must be within [0, 1], got {value}")]
    InvalidThreshold { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchConfig {
    word_threshold: f64,
    seq_threshold: f64,
}

impl MatchConfig {
    pub fn new(word_threshold: f64, seq_threshold: f64) -> Result<Self, MatchError> {
        let check = |name, value: f64| {
            if (0.0..=1.0).contains(&value) {
                Ok(value)
            } else {
                Err(MatchError::InvalidThreshold { name, value })
            }
        };
        Ok(MatchConfig {
            word_threshold: check("word threshold", word_threshold)?,
            seq_threshold: check("sequence threshold", seq_threshold)?,
        })
    }

    pub fn word_threshold(&self) -> f64 {
        self.word_threshold
    }

    pub fn seq_threshold(&self) -> f64 {
        self.seq_threshold
    }
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            word_threshold: DEFAULT_WORD_THRESHOLD,
            seq_threshold: DEFAULT_SEQ_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConceptMatch {
    pub question_id: String,
    pub phrase: MarkedPhrase,
    pub concept_iri: String,
    pub matched_label: String,
    pub score: f64,
}

fn letter_set(s: &str) -> BTreeSet<char> {
    s.chars().collect()
}

/// Jaccard coefficient of the distinct characters of two words.
pub fn char_jaccard(a: &Lemma, b: &Lemma) -> f64 {
    jaccard_str(a.form(), b.form())
}

fn jaccard_str(a: &str, b: &str) -> f64 {
    let (a, b) = (letter_set(a), letter_set(b));
    let union = a.union(&b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// One fuzzy word pairing chosen by [`align`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WordPair {
    pub left: usize,
    pub right: usize,
    pub similarity: f64,
}

/// Greedy word alignment: each word of `a`, in order, takes the unused word
/// of `b` with the highest letter similarity at or above the threshold,
/// preferring the earliest position on ties.
pub fn align(a: &LemmaSequence, b: &LemmaSequence, word_threshold: f64) -> Vec<WordPair> {
    let mut used = vec![false; b.len()];
    let mut pairs = Vec::new();
    for (i, left) in a.lemmas().iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        for (j, right) in b.lemmas().iter().enumerate() {
            if used[j] {
                continue;
            }
            let s = char_jaccard(left, right);
            if s >= word_threshold && best.is_none_or(|(_, bs)| s > bs) {
                best = Some((j, s));
            }
        }
        if let Some((j, similarity)) = best {
            used[j] = true;
            pairs.push(WordPair {
                left: i,
                right: j,
                similarity,
            });
        }
    }
    pairs
}

/// `m / (|a| + |b| - m)` where `m` is the number of aligned word pairs.
pub fn seq_similarity(
    a: &LemmaSequence,
    b: &LemmaSequence,
    word_threshold: f64,
) -> Result<f64, MatchError> {
    if a.is_empty() || b.is_empty() {
        return Err(MatchError::EmptySequence);
    }
    let m = align(a, b, word_threshold).len();
    Ok(m as f64 / (a.len() + b.len() - m) as f64)
}

/// Finds the best label for a normalized phrase.
///
/// Ties on score prefer the shorter label, then the smaller IRI, then the
/// smaller label text.
pub fn match_phrase(
    phrase: &MarkedPhrase,
    lemmas: &LemmaSequence,
    index: &LabelIndex,
    config: &MatchConfig,
) -> Option<ConceptMatch> {
    if lemmas.is_empty() {
        return None;
    }
    let mut best: Option<(f64, &LabelEntry)> = None;
    for entry in index.entries() {
        let Ok(score) = seq_similarity(lemmas, &entry.lemmas, config.word_threshold) else {
            continue;
        };
        if score < config.seq_threshold {
            continue;
        }
        let better = match best {
            None => true,
            Some((bs, be)) => {
                score > bs
                    || (score == bs
                        && (entry.lemmas.len(), &entry.iri, &entry.label)
                            < (be.lemmas.len(), &be.iri, &be.label))
            }
        };
        if better {
            best = Some((score, entry));
        }
    }
    best.map(|(score, entry)| ConceptMatch {
        question_id: phrase.question_id.clone(),
        phrase: phrase.clone(),
        concept_iri: entry.iri.clone(),
        matched_label: entry.label.clone(),
        score,
    })
}

/// What happened to one phrase during matching.
#[derive(Debug, Clone, PartialEq)]
pub enum PhraseOutcome {
    /// Nothing left after normalization; no match attempted.
    Skipped,
    NoMatch(LemmaSequence),
    Matched(LemmaSequence, ConceptMatch),
}

/// Per-phrase outcomes in phrase order, before duplicate collapsing.
pub fn match_phrases(
    phrases: &[MarkedPhrase],
    index: &LabelIndex,
    lexicon: &Lexicon,
    stoplist: &Stoplist,
    config: &MatchConfig,
) -> Vec<PhraseOutcome> {
    phrases
        .iter()
        .map(|p| {
            let lemmas = normalize_phrase(&p.raw, lexicon, stoplist);
            if lemmas.is_empty() {
                return PhraseOutcome::Skipped;
            }
            match match_phrase(p, &lemmas, index, config) {
                Some(m) => PhraseOutcome::Matched(lemmas, m),
                None => PhraseOutcome::NoMatch(lemmas),
            }
        })
        .collect()
}

/// Keeps one match per concept (the highest scoring, earliest on ties),
/// in phrase ordinal order.
pub fn collapse_matches(matches: Vec<ConceptMatch>) -> Vec<ConceptMatch> {
    let mut best: HashMap<String, usize> = HashMap::new();
    for (i, m) in matches.iter().enumerate() {
        best.entry(m.concept_iri.clone())
            .and_modify(|b| {
                if m.score > matches[*b].score {
                    *b = i;
                }
            })
            .or_insert(i);
    }
    let mut keep: Vec<usize> = best.into_values().collect();
    keep.sort_unstable();
    let mut matches: Vec<Option<ConceptMatch>> = matches.into_iter().map(Some).collect();
    keep.into_iter().filter_map(|i| matches[i].take()).collect()
}

pub fn match_question(
    phrases: &[MarkedPhrase],
    index: &LabelIndex,
    lexicon: &Lexicon,
    stoplist: &Stoplist,
    config: &MatchConfig,
) -> Vec<ConceptMatch> {
    let matched = match_phrases(phrases, index, lexicon, stoplist, config)
        .into_iter()
        .filter_map(|o| match o {
            PhraseOutcome::Matched(_, m) => Some(m),
            _ => None,
        })
        .collect();
    collapse_matches(matched)
}
