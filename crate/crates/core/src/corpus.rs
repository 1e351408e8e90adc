//! Question corpus reader.
//!
//! ```text
//! <corpus>
//!   <question id="q1">
//!     <text>... <TERM1>noun phrase</TERM1> ... <TERM2>prepositional phrase</TERM2> ...</text>
//!     <answer kind="text">... <TERM1>...</TERM1> ...</answer>
//!     <answer kind="numeric">42</answer>
//!   </question>
//! </corpus>
//! ```
//!
//! `TERM1` marks a noun phrase, `TERM2` a prepositional phrase. Only answers
//! of kind `text` (the default) contribute phrases. TERM tags must be flat:
//! nesting is rejected rather than flattened.

use std::collections::HashSet;
use std::fmt::Write as _;

use roxmltree::{Document, Node, NodeType, ParsingOptions};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("malformed corpus XML at {line}:{column}: {message}")]
    MalformedXml {
        line: u32,
        column: u32,
        message: String,
    },
    #[error("duplicate question id {0:?}")]
    DuplicateQuestionId(String),
    #[error("question at {line}:{column} has no id")]
    MissingQuestionId { line: u32, column: u32 },
    #[error("question {0:?} has empty text")]
    EmptyQuestionText(String),
    #[error("unsupported encoding {0:?}; corpus files must be UTF-8")]
    UnsupportedEncoding(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PhraseKind {
    /// Noun phrase, tagged `TERM1`.
    #[serde(rename = "NP")]
    Np,
    /// Prepositional phrase, tagged `TERM2`.
    #[serde(rename = "PP")]
    Pp,
}

impl PhraseKind {
    fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "TERM1" => Some(PhraseKind::Np),
            "TERM2" => Some(PhraseKind::Pp),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            PhraseKind::Np => "TERM1",
            PhraseKind::Pp => "TERM2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhraseSource {
    QuestionText,
    AnswerText,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnswerKind {
    Text,
    Numeric,
    Symbolic,
}

impl AnswerKind {
    fn parse(value: &str) -> Option<Self> {
        match value {
            "text" => Some(AnswerKind::Text),
            "numeric" => Some(AnswerKind::Numeric),
            "symbolic" => Some(AnswerKind::Symbolic),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AnswerKind::Text => "text",
            AnswerKind::Numeric => "numeric",
            AnswerKind::Symbolic => "symbolic",
        }
    }
}

/// A run of plain text or a tagged phrase inside question or answer markup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Plain(String),
    Term { kind: PhraseKind, text: String },
}

/// Text with inline TERM markup. Adjacent plain runs are always merged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MarkedText {
    segments: Vec<Segment>,
}

impl MarkedText {
    pub fn new(segments: Vec<Segment>) -> Self {
        let mut text = MarkedText::default();
        for s in segments {
            match s {
                Segment::Plain(p) => text.push_plain(&p),
                term => text.segments.push(term),
            }
        }
        text
    }

    fn push_plain(&mut self, s: &str) {
        if s.is_empty() {
            return;
        }
        if let Some(Segment::Plain(last)) = self.segments.last_mut() {
            last.push_str(s);
        } else {
            self.segments.push(Segment::Plain(s.to_string()));
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The text with markup removed.
    pub fn plain_text(&self) -> String {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Plain(t) | Segment::Term { text: t, .. } => t.as_str(),
            })
            .collect()
    }

    fn terms(&self) -> impl Iterator<Item = (PhraseKind, &str)> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Term { kind, text } => Some((*kind, text.as_str())),
            Segment::Plain(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    pub kind: AnswerKind,
    pub body: MarkedText,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub id: String,
    pub text: MarkedText,
    pub answers: Vec<Answer>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuestionCorpus {
    pub questions: Vec<Question>,
}

impl QuestionCorpus {
    pub fn len(&self) -> usize {
        self.questions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.questions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MarkedPhrase {
    pub question_id: String,
    pub kind: PhraseKind,
    pub raw: String,
    pub source: PhraseSource,
    /// Position among the phrases of its question, counting from 0.
    pub ordinal: usize,
}

/// Marked phrases of a question: question text first, then text answers in
/// order. Markup inside numeric and symbolic answers is skipped.
pub fn extract_phrases(question: &Question) -> Vec<MarkedPhrase> {
    let answers = question
        .answers
        .iter()
        .filter(|a| a.kind == AnswerKind::Text)
        .map(|a| (&a.body, PhraseSource::AnswerText));
    std::iter::once((&question.text, PhraseSource::QuestionText))
        .chain(answers)
        .flat_map(|(body, source)| body.terms().map(move |(kind, raw)| (kind, raw, source)))
        .enumerate()
        .map(|(ordinal, (kind, raw, source))| MarkedPhrase {
            question_id: question.id.clone(),
            kind,
            raw: raw.trim().to_string(),
            source,
            ordinal,
        })
        .collect()
}

pub fn parse_corpus(input: &[u8]) -> Result<QuestionCorpus, CorpusError> {
    let input = input.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(input);
    let text = std::str::from_utf8(input).map_err(|e| {
        let valid = &input[..e.valid_up_to()];
        let line = valid.iter().filter(|&&b| b == b'\n').count() as u32 + 1;
        let column = valid.iter().rev().take_while(|&&b| b != b'\n').count() as u32 + 1;
        CorpusError::MalformedXml {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    check_declared_encoding(text)?;

    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    let doc = Document::parse_with_options(text, opts).map_err(|e| {
        let pos = e.pos();
        CorpusError::MalformedXml {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })?;
    Reader { doc: &doc }.corpus()
}

fn check_declared_encoding(text: &str) -> Result<(), CorpusError> {
    let Some(rest) = text.strip_prefix("<?xml") else {
        return Ok(());
    };
    let Some(end) = rest.find("?>") else {
        return Ok(());
    };
    let decl = &rest[..end];
    let Some(at) = decl.find("encoding") else {
        return Ok(());
    };
    let value = decl[at + "encoding".len()..]
        .trim_start()
        .strip_prefix('=')
        .map(str::trim_start)
        .and_then(|v| {
            let quote = v.chars().next().filter(|&c| c == '"' || c == '\'')?;
            let v = &v[1..];
            v.find(quote).map(|e| &v[..e])
        });
    match value {
        Some(v) if v.eq_ignore_ascii_case("utf-8") => Ok(()),
        Some(v) => Err(CorpusError::UnsupportedEncoding(v.to_string())),
        // A broken declaration is reported by the XML parser.
        None => Ok(()),
    }
}

struct Reader<'a, 'input> {
    doc: &'a Document<'input>,
}

impl<'a, 'input> Reader<'a, 'input> {
    fn malformed(&self, node: Node, message: impl Into<String>) -> CorpusError {
        let pos = self.doc.text_pos_at(node.range().start);
        CorpusError::MalformedXml {
            line: pos.row,
            column: pos.col,
            message: message.into(),
        }
    }

    /// Child elements, rejecting stray non-whitespace text.
    fn element_children(
        &self,
        node: Node<'a, 'input>,
    ) -> Result<Vec<Node<'a, 'input>>, CorpusError> {
        let mut out = Vec::new();
        for child in node.children() {
            match child.node_type() {
                NodeType::Element => out.push(child),
                NodeType::Text if child.text().unwrap_or("").trim().is_empty() => {}
                NodeType::Text => {
                    return Err(self.malformed(
                        child,
                        format!("unexpected text inside <{}>", node.tag_name().name()),
                    ))
                }
                _ => {}
            }
        }
        Ok(out)
    }

    fn expect_name(&self, node: Node, name: &str) -> Result<(), CorpusError> {
        let tag = node.tag_name();
        if tag.name() == name && tag.namespace().is_none() {
            Ok(())
        } else {
            Err(self.malformed(node, format!("expected <{name}>, found <{}>", tag.name())))
        }
    }

    fn corpus(&self) -> Result<QuestionCorpus, CorpusError> {
        let root = self.doc.root_element();
        self.expect_name(root, "corpus")?;
        let mut seen = HashSet::new();
        let mut questions = Vec::new();
        for node in self.element_children(root)? {
            self.expect_name(node, "question")?;
            let question = self.question(node)?;
            if !seen.insert(question.id.clone()) {
                return Err(CorpusError::DuplicateQuestionId(question.id));
            }
            questions.push(question);
        }
        Ok(QuestionCorpus { questions })
    }

    fn question(&self, node: Node<'a, 'input>) -> Result<Question, CorpusError> {
        let id = match node.attribute("id") {
            Some(id) if !id.trim().is_empty() => id.to_string(),
            _ => {
                let pos = self.doc.text_pos_at(node.range().start);
                return Err(CorpusError::MissingQuestionId {
                    line: pos.row,
                    column: pos.col,
                });
            }
        };
        let mut text = None;
        let mut answers = Vec::new();
        for child in self.element_children(node)? {
            match child.tag_name().name() {
                "text" if child.tag_name().namespace().is_none() => {
                    if text.is_some() {
                        return Err(self.malformed(child, "question has more than one <text>"));
                    }
                    if !answers.is_empty() {
                        return Err(self.malformed(child, "<text> must precede answers"));
                    }
                    text = Some(self.marked_text(child)?);
                }
                "answer" if child.tag_name().namespace().is_none() => {
                    let kind = match child.attribute("kind") {
                        None => AnswerKind::Text,
                        Some(k) => AnswerKind::parse(k).ok_or_else(|| {
                            self.malformed(child, format!("unknown answer kind {k:?}"))
                        })?,
                    };
                    answers.push(Answer {
                        kind,
                        body: self.marked_text(child)?,
                    });
                }
                other => {
                    return Err(self.malformed(child, format!("unexpected <{other}> in question")))
                }
            }
        }
        let text = text.ok_or_else(|| self.malformed(node, "question has no <text>"))?;
        if text.plain_text().trim().is_empty() {
            return Err(CorpusError::EmptyQuestionText(id));
        }
        Ok(Question { id, text, answers })
    }

    fn marked_text(&self, node: Node<'a, 'input>) -> Result<MarkedText, CorpusError> {
        let mut out = MarkedText::default();
        for child in node.children() {
            match child.node_type() {
                NodeType::Text => out.push_plain(child.text().unwrap_or("")),
                NodeType::Element => {
                    let tag = child.tag_name();
                    let kind = PhraseKind::from_tag(tag.name())
                        .filter(|_| tag.namespace().is_none())
                        .ok_or_else(|| {
                            self.malformed(
                                child,
                                format!("unexpected <{}> in marked text", tag.name()),
                            )
                        })?;
                    if child.attributes().len() > 0 {
                        return Err(
                            self.malformed(child, format!("<{}> takes no attributes", kind.tag()))
                        );
                    }
                    let mut text = String::new();
                    for inner in child.children() {
                        match inner.node_type() {
                            NodeType::Text => text.push_str(inner.text().unwrap_or("")),
                            NodeType::Element => {
                                return Err(self.malformed(
                                    inner,
                                    format!(
                                        "nested <{}> inside <{}>",
                                        inner.tag_name().name(),
                                        kind.tag()
                                    ),
                                ))
                            }
                            _ => {}
                        }
                    }
                    if text.trim().is_empty() {
                        return Err(self.malformed(child, format!("empty <{}>", kind.tag())));
                    }
                    out.segments.push(Segment::Term { kind, text });
                }
                _ => {}
            }
        }
        Ok(out)
    }
}

/// Serializes a corpus to the canonical XML form read by [`parse_corpus`].
pub fn to_xml(corpus: &QuestionCorpus) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<corpus>\n");
    for q in &corpus.questions {
        let _ = writeln!(out, "  <question id=\"{}\">", escape(&q.id, true));
        out.push_str("    <text>");
        write_marked(&mut out, &q.text);
        out.push_str("</text>\n");
        for a in &q.answers {
            let _ = write!(out, "    <answer kind=\"{}\">", a.kind.as_str());
            write_marked(&mut out, &a.body);
            out.push_str("</answer>\n");
        }
        out.push_str("  </question>\n");
    }
    out.push_str("</corpus>\n");
    out
}

fn write_marked(out: &mut String, text: &MarkedText) {
    for s in text.segments() {
        match s {
            Segment::Plain(t) => out.push_str(&escape(t, false)),
            Segment::Term { kind, text } => {
                let _ = write!(out, "<{0}>{1}</{0}>", kind.tag(), escape(text, false));
            }
        }
    }
}

fn escape(s: &str, attribute: bool) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            '"' if attribute => out.push_str("&quot;"),
            '\t' if attribute => out.push_str("&#9;"),
            '\n' if attribute => out.push_str("&#10;"),
            c => out.push(c),
        }
    }
    out
}
