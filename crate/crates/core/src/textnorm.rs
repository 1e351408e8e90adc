//! Tokenization and dictionary lemmatization.
//!
//! Text is split on every character that is neither a letter nor a digit,
//! case-folded, mapped through a [`Lexicon`] and filtered by a [`Stoplist`].
//! Stoplist membership is tested on lemma forms, after lemmatization.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("lexicon line {line}: {reason}")]
    MalformedLexiconLine { line: usize, reason: String },
    #[error("lexicon is not valid UTF-8: {0}")]
    Encoding(String),
}

/// Case-folds a string using single-character lowercase mappings.
///
/// Characters whose lowercase form expands to several characters keep their
/// original form, which is what simple case folding does. A handful of
/// characters fold differently from their lowercase mapping and are listed
/// explicitly.
pub fn fold_case(text: &str) -> String {
    text.chars().map(fold_char).collect()
}

fn fold_char(c: char) -> char {
    match c {
        'ς' => 'σ',
        'ſ' => 's',
        'ϐ' => 'β',
        'ϑ' => 'θ',
        'ϕ' => 'φ',
        'ϖ' => 'π',
        'ϰ' => 'κ',
        'ϱ' => 'ρ',
        'ϵ' => 'ε',
        '\u{0345}' | '\u{1FBE}' => 'ι',
        'ẛ' => 'ṡ',
        'ẞ' => 'ß',
        _ => {
            let mut lower = c.to_lowercase();
            match (lower.next(), lower.next()) {
                (Some(l), None) => l,
                _ => c,
            }
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// A case-folded run of letters and digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn surface(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Normal form of a word. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Lemma(String);

impl Lemma {
    pub fn form(&self) -> &str {
        &self.0
    }

    /// Builds a lemma from a single word, folding its case. Returns `None`
    /// unless the text is exactly one token.
    pub fn parse(text: &str) -> Option<Lemma> {
        let mut tokens = tokenize(text).into_iter();
        match (tokens.next(), tokens.next()) {
            (Some(t), None) => Some(Lemma(t.0)),
            _ => None,
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ordered lemmas of a phrase or label with stop words removed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LemmaSequence(Vec<Lemma>);

impl LemmaSequence {
    pub fn new(lemmas: Vec<Lemma>) -> Self {
        LemmaSequence(lemmas)
    }

    pub fn lemmas(&self) -> &[Lemma] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Convenience for tests and demos: every whitespace-separated word
    /// becomes one lemma. Words that are not single tokens are skipped.
    pub fn from_words(words: &str) -> Self {
        LemmaSequence(words.split_whitespace().filter_map(Lemma::parse).collect())
    }
}

impl fmt::Display for LemmaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(l.form())?;
        }
        f.write_str("]")
    }
}

/// Surface form to lemma dictionary. Lookup falls back to the surface form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    map: HashMap<String, String>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry. Both sides must be single tokens; they are case-folded.
    pub fn insert(&mut self, surface: &str, lemma: &str) -> bool {
        match (Lemma::parse(surface), Lemma::parse(lemma)) {
            (Some(s), Some(l)) => {
                self.map.insert(s.0, l.0);
                true
            }
            _ => false,
        }
    }

    pub fn get(&self, surface: &str) -> Option<&str> {
        self.map.get(surface).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stoplist {
    forms: BTreeSet<String>,
}

impl Stoplist {
    pub fn new<I, S>(forms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Stoplist {
            forms: forms.into_iter().map(|s| fold_case(s.as_ref())).collect(),
        }
    }

    /// The small English function-word list used when no stoplist file is given.
    pub fn default_english() -> Self {
        Self::parse(DEFAULT_STOPLIST)
    }

    /// One form per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn contains(&self, form: &str) -> bool {
        self.forms.contains(&fold_case(form))
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

const DEFAULT_STOPLIST: &str = include_str!("../data/default_stoplist.txt");

pub fn tokenize(text: &str) -> Vec<Token> {
    text.split(|c: char| !is_word_char(c))
        .filter(|s| !s.is_empty())
        .map(|s| Token(fold_case(s)))
        .collect()
}

pub fn lemmatize(token: &Token, lexicon: &Lexicon) -> Lemma {
    match lexicon.get(token.surface()) {
        Some(lemma) => Lemma(lemma.to_string()),
        None => Lemma(token.0.clone()),
    }
}

pub fn normalize_phrase(text: &str, lexicon: &Lexicon, stoplist: &Stoplist) -> LemmaSequence {
    LemmaSequence(
        tokenize(text)
            .iter()
            .map(|t| lemmatize(t, lexicon))
            .filter(|l| !stoplist.contains(l.form()))
            .collect(),
    )
}

/// Reads a `surface<TAB>lemma` file. Later entries for the same surface
/// replace earlier ones.
pub fn load_lexicon(input: &[u8]) -> Result<Lexicon, LexiconError> {
    let text = std::str::from_utf8(input).map_err(|e| LexiconError::Encoding(e.to_string()))?;
    let mut lexicon = Lexicon::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let malformed = |reason: &str| LexiconError::MalformedLexiconLine {
            line: i + 1,
            reason: reason.to_string(),
        };
        let mut cols = line.split('\t');
        let (surface, lemma) = match (cols.next(), cols.next(), cols.next()) {
            (Some(s), Some(l), None) => (s.trim(), l.trim()),
            _ => return Err(malformed("expected two tab-separated columns")),
        };
        if !lexicon.insert(surface, lemma) {
            return Err(malformed("surface and lemma must each be a single word"));
        }
    }
    Ok(lexicon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(Token::surface).collect()
    }

    fn forms(seq: &LemmaSequence) -> Vec<&str> {
        seq.lemmas().iter().map(Lemma::form).collect()
    }

    #[test]
    fn tokenize_noun_phrase() {
        assert_eq!(
            surfaces(&tokenize("finite set of points")),
            ["finite", "set", "of", "points"]
        );
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" ,.- ").is_empty());
    }

    #[test]
    fn tokenize_splits_hyphens_and_apostrophes() {
        assert_eq!(
            surfaces(&tokenize("Triangle's mid-line")),
            ["triangle", "s", "mid", "line"]
        );
    }

    #[test]
    fn tokenize_cyrillic_and_digits() {
        assert_eq!(
            surfaces(&tokenize("Треугольник ABC, 2 стороны")),
            ["треугольник", "abc", "2", "стороны"]
        );
    }

    #[test]
    fn folding_uses_single_char_mappings() {
        assert_eq!(fold_case("ΟΔΟΣ"), "οδοσ");
        assert_eq!(fold_case("ὁδός"), "ὁδόσ");
        // U+0130 lowercases to two chars; simple folding leaves it alone.
        assert_eq!(fold_case("İ"), "İ");
    }

    #[test]
    fn lemmatize_with_lexicon() {
        let mut lex = Lexicon::new();
        lex.insert("triangles", "triangle");
        let t = &tokenize("triangles")[0];
        assert_eq!(lemmatize(t, &lex).form(), "triangle");
    }

    #[test]
    fn lemmatize_identity_fallback() {
        let t = &tokenize("triangle")[0];
        assert_eq!(lemmatize(t, &Lexicon::new()).form(), "triangle");
    }

    #[test]
    fn lemmatize_axes() {
        let lex = load_lexicon(b"axes\taxis\n").unwrap();
        assert_eq!(lemmatize(&tokenize("axes")[0], &lex).form(), "axis");
    }

    #[test]
    fn normalize_prepositional_phrase() {
        let lex = load_lexicon(b"characters\tcharacter\n").unwrap();
        let stop = Stoplist::new(["up", "to", "the", "after"]);
        let seq = normalize_phrase("up to two characters after the dot", &lex, &stop);
        assert_eq!(forms(&seq), ["two", "character", "dot"]);
    }

    #[test]
    fn normalize_fully_stoplisted() {
        let seq = normalize_phrase("of of of", &Lexicon::new(), &Stoplist::new(["of"]));
        assert!(seq.is_empty());
    }

    #[test]
    fn normalize_without_stoplist() {
        let lex = load_lexicon(b"lines\tline\n").unwrap();
        let seq = normalize_phrase("middle lines", &lex, &Stoplist::default());
        assert_eq!(forms(&seq), ["middle", "line"]);
    }

    #[test]
    fn stoplist_applies_to_lemmas() {
        // "Its" lemmatizes to "it", which is stoplisted even though "its" is not.
        let lex = load_lexicon(b"its\tit\n").unwrap();
        let seq = normalize_phrase("Its side", &lex, &Stoplist::new(["it"]));
        assert_eq!(forms(&seq), ["side"]);
    }

    #[test]
    fn load_lexicon_folds_case() {
        let lex = load_lexicon(b"Triangles\ttriangle\n").unwrap();
        assert_eq!(lex.get("triangles"), Some("triangle"));
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn load_lexicon_empty() {
        assert!(load_lexicon(b"").unwrap().is_empty());
    }

    #[test]
    fn load_lexicon_last_wins() {
        let lex = load_lexicon(b"a\tb\na\tc\n").unwrap();
        assert_eq!(lex.get("a"), Some("c"));
    }

    #[test]
    fn load_lexicon_skips_comments_and_crlf() {
        let lex = load_lexicon(b"# header\r\n\r\nlines\tline\r\n").unwrap();
        assert_eq!(lex.get("lines"), Some("line"));
    }

    #[test]
    fn load_lexicon_reports_line() {
        let err = load_lexicon(b"ok\tfine\nbroken line\n").unwrap_err();
        assert!(matches!(
            err,
            LexiconError::MalformedLexiconLine { line: 2, .. }
        ));
        let err = load_lexicon(b"a\tb\tc\n").unwrap_err();
        assert!(matches!(
            err,
            LexiconError::MalformedLexiconLine { line: 1, .. }
        ));
        let err = load_lexicon(b"\n\nmid-line\tline\n").unwrap_err();
        assert!(matches!(
            err,
            LexiconError::MalformedLexiconLine { line: 3, .. }
        ));
    }

    #[test]
    fn default_stoplist_has_function_words() {
        let stop = Stoplist::default_english();
        for w in ["the", "of", "to", "a"] {
            assert!(stop.contains(w), "{w}");
        }
        assert!(!stop.contains("triangle"));
    }

    fn word() -> impl Strategy<Value = String> {
        "[a-zA-Zа-яА-ЯёЁα-ωΑ-Ω0-9]{1,8}"
    }

    fn phrase() -> impl Strategy<Value = String> {
        "[a-zA-Zа-яА-Я0-9 ,.'-]{0,40}"
    }

    proptest! {
        #[test]
        fn lemma_forms_are_single_tokens(text in phrase(), entries in prop::collection::vec((word(), word()), 0..6)) {
            let mut lex = Lexicon::new();
            for (s, l) in &entries {
                lex.insert(s, l);
            }
            for lemma in normalize_phrase(&text, &lex, &Stoplist::default()).lemmas() {
                prop_assert!(!lemma.form().is_empty());
                let again = tokenize(lemma.form());
                prop_assert_eq!(surfaces(&again), vec![lemma.form()]);
            }
        }

        #[test]
        fn normalized_never_longer_than_tokens(text in phrase(), stop in prop::collection::vec(word(), 0..5)) {
            let stop = Stoplist::new(stop);
            let n = normalize_phrase(&text, &Lexicon::new(), &stop).len();
            prop_assert!(n <= tokenize(&text).len());
        }

        #[test]
        fn normalization_ignores_case(text in "[a-zа-я ,.-]{0,40}", stop in prop::collection::vec("[a-zа-я]{1,4}", 0..5)) {
            let lex = load_lexicon("points\tpoint\nстороны\tсторона\n".as_bytes()).unwrap();
            let stop = Stoplist::new(stop);
            prop_assert_eq!(
                normalize_phrase(&text.to_uppercase(), &lex, &stop),
                normalize_phrase(&text, &lex, &stop)
            );
        }
    }
}
