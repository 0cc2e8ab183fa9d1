//! The inline bracket notation.
//!
//! One labeling unit per line. Each element is written as `[TAG content]` with
//! exactly one ASCII space after the tag; inside the content a single `-`
//! separates trigger from body, and one `(...)` group per segment marks the
//! head. Gap text between elements is kept verbatim. The characters
//! `[ ] ( ) - \` are escaped with a backslash wherever they are literal text;
//! a `#` opening a unit line is escaped the same way so it is not taken for a
//! comment.
//!
//! ```text
//! #id: example1
//! [SUB-W 被告人(陈某某)][ADV-P 因-家庭(矛盾)][PRE-S 迁怒][RAI-W 岳父(滕某某)]。
//! 并[PRE-M 互相(厮打)]。
//! ```

use std::fmt;

use crate::model::{Document, Element, LabelingUnit, ModelError, Segment, Span, Tag};

const RESERVED: [char; 6] = ['[', ']', '(', ')', '-', '\\'];

/// Parse diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParseCode {
    /// P001: unbalanced `[` / `]`.
    UnbalancedBracket,
    /// P002: unknown type, empty tag or illegal subtag combination.
    UnknownTag,
    /// P003: tag not followed by exactly one space.
    MissingSpace,
    /// P004: more than one separator in an element.
    MultipleSeparators,
    /// P005: more than one head group in one segment.
    MultipleHeads,
    /// P006: nested or unbalanced parentheses.
    BadParens,
    /// P007: stray `)` outside any element.
    StrayClose,
    /// P008: invalid escape sequence.
    BadEscape,
    /// P009: empty element, segment or head.
    EmptyContent,
    /// P010: input is not valid UTF-8.
    InvalidUtf8,
}

impl ParseCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseCode::UnbalancedBracket => "P001",
            ParseCode::UnknownTag => "P002",
            ParseCode::MissingSpace => "P003",
            ParseCode::MultipleSeparators => "P004",
            ParseCode::MultipleHeads => "P005",
            ParseCode::BadParens => "P006",
            ParseCode::StrayClose => "P007",
            ParseCode::BadEscape => "P008",
            ParseCode::EmptyContent => "P009",
            ParseCode::InvalidUtf8 => "P010",
        }
    }
}

impl fmt::Display for ParseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A malformed-markup finding. Line and column are 1-based; the column counts
/// codepoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub code: ParseCode,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {} {}", self.line, self.column, self.code, self.message)
    }
}

/// Result of parsing a whole source file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedDocument {
    pub document: Document,
    pub diagnostics: Vec<ParseDiagnostic>,
    /// 1-based source line of each unit in `document.units`.
    pub unit_lines: Vec<usize>,
}

impl ParsedDocument {
    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

struct LineParser {
    chars: Vec<char>,
    pos: usize,
    line_no: usize,
    text: String,
    /// Codepoints pushed to `text` so far.
    offset: usize,
}

/// Content of one segment while it is being read.
#[derive(Default)]
struct SegmentDraft {
    start: usize,
    head_open: Option<usize>,
    head: Option<(usize, usize)>,
}

type Fail = Box<ParseDiagnostic>;

impl LineParser {
    fn new(line: &str, line_no: usize) -> Self {
        LineParser {
            chars: line.chars().collect(),
            pos: 0,
            line_no,
            text: String::with_capacity(line.len()),
            offset: 0,
        }
    }

    fn fail(&self, code: ParseCode, at: usize, message: impl Into<String>) -> Fail {
        Box::new(ParseDiagnostic {
            code,
            line: self.line_no,
            column: at.min(self.chars.len().saturating_sub(1)) + 1,
            message: message.into(),
        })
    }

    fn push(&mut self, c: char) {
        self.text.push(c);
        self.offset += 1;
    }

    /// Resolves the escape starting at `self.pos` (the backslash).
    fn escape(&mut self, allow_hash: bool) -> Result<char, Fail> {
        let at = self.pos;
        match self.chars.get(at + 1) {
            Some(&c) if RESERVED.contains(&c) || (allow_hash && c == '#') => {
                self.pos += 2;
                Ok(c)
            }
            Some(&c) => Err(self.fail(ParseCode::BadEscape, at, format!("invalid escape \\{c}"))),
            None => Err(self.fail(ParseCode::BadEscape, at, "dangling backslash at end of line")),
        }
    }

    fn run(mut self) -> Result<LabelingUnit, Fail> {
        let mut elements = Vec::new();
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            match c {
                '\\' => {
                    let lit = self.escape(self.pos == 0)?;
                    self.push(lit);
                }
                '[' => elements.push(self.element()?),
                ']' => return Err(self.fail(ParseCode::UnbalancedBracket, self.pos, "`]` without matching `[`")),
                ')' => return Err(self.fail(ParseCode::StrayClose, self.pos, "`)` outside any element")),
                '(' => return Err(self.fail(ParseCode::BadParens, self.pos, "`(` outside any element")),
                _ => {
                    self.push(c);
                    self.pos += 1;
                }
            }
        }
        // Elements are produced left to right without overlap.
        Ok(LabelingUnit::new(self.text, elements).expect("elements in order"))
    }

    fn element(&mut self) -> Result<Element, Fail> {
        let open = self.pos;
        self.pos += 1;
        let tag_start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '-')
        {
            self.pos += 1;
        }
        let tag_str: String = self.chars[tag_start..self.pos].iter().collect();
        if self.pos >= self.chars.len() {
            return Err(self.fail(ParseCode::UnbalancedBracket, open, "`[` is never closed"));
        }
        if tag_str.is_empty() {
            return Err(self.fail(ParseCode::UnknownTag, tag_start, "empty tag"));
        }
        let tag: Tag =
            tag_str.parse().map_err(|e: ModelError| self.fail(ParseCode::UnknownTag, tag_start, e.to_string()))?;
        if self.chars[self.pos] != ' ' {
            return Err(self.fail(ParseCode::MissingSpace, self.pos, format!("expected one space after tag {tag}")));
        }
        self.pos += 1;

        let content_start = self.offset;
        let mut current = SegmentDraft { start: self.offset, ..Default::default() };
        let mut trigger: Option<SegmentDraft> = None;
        loop {
            let Some(&c) = self.chars.get(self.pos) else {
                return Err(self.fail(ParseCode::UnbalancedBracket, open, "`[` is never closed"));
            };
            match c {
                '\\' => {
                    let lit = self.escape(false)?;
                    self.push(lit);
                }
                ']' => {
                    if current.head_open.is_some() {
                        return Err(self.fail(ParseCode::BadParens, self.pos, "`(` is never closed"));
                    }
                    self.pos += 1;
                    break;
                }
                '[' => return Err(self.fail(ParseCode::UnbalancedBracket, self.pos, "elements cannot nest")),
                '(' => {
                    if current.head_open.is_some() {
                        return Err(self.fail(ParseCode::BadParens, self.pos, "nested `(`"));
                    }
                    if current.head.is_some() {
                        return Err(self.fail(ParseCode::MultipleHeads, self.pos, "only one head group per segment"));
                    }
                    current.head_open = Some(self.offset);
                    self.pos += 1;
                }
                ')' => {
                    let Some(h) = current.head_open.take() else {
                        return Err(self.fail(ParseCode::BadParens, self.pos, "`)` without matching `(`"));
                    };
                    if h == self.offset {
                        return Err(self.fail(ParseCode::EmptyContent, self.pos, "empty head group"));
                    }
                    current.head = Some((h, self.offset));
                    self.pos += 1;
                }
                '-' => {
                    if current.head_open.is_some() {
                        return Err(self.fail(ParseCode::BadParens, self.pos, "separator inside a head group"));
                    }
                    if trigger.is_some() {
                        return Err(self.fail(ParseCode::MultipleSeparators, self.pos, "more than one separator"));
                    }
                    if current.start == self.offset {
                        return Err(self.fail(ParseCode::EmptyContent, self.pos, "empty trigger"));
                    }
                    let next = SegmentDraft { start: self.offset, ..Default::default() };
                    trigger = Some(std::mem::replace(&mut current, next));
                    self.pos += 1;
                }
                _ => {
                    self.push(c);
                    self.pos += 1;
                }
            }
        }

        let close = self.pos - 1;
        if self.offset == content_start {
            return Err(self.fail(ParseCode::EmptyContent, close, "empty element"));
        }
        if current.start == self.offset {
            return Err(self.fail(ParseCode::EmptyContent, close, "empty body after separator"));
        }
        let seal = |d: &SegmentDraft, end: usize| -> Segment {
            // Bounds are known-good: non-empty segment, head inside it.
            let span = Span::new(d.start, end).expect("non-empty segment");
            let head = d.head.map(|(a, b)| Span::new(a, b).expect("non-empty head"));
            Segment::new(span, head).expect("head inside segment")
        };
        let body = seal(&current, self.offset);
        let trigger = trigger.map(|d| seal(&d, current.start));
        Ok(Element::new(tag, trigger, body).expect("trigger abuts body"))
    }
}

/// Parses one source line into a labeling unit.
///
/// `line_no` is only used to locate diagnostics. Parsing stops at the first
/// malformation; the returned list then holds exactly that finding.
pub fn parse_unit(line: &str, line_no: usize) -> Result<LabelingUnit, Vec<ParseDiagnostic>> {
    LineParser::new(line, line_no).run().map_err(|d| vec![*d])
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

/// Parses an inline file. Lines that fail are left out of the document and
/// reported in `diagnostics`.
pub fn parse_document(source: &str) -> ParsedDocument {
    let mut out = ParsedDocument::default();
    let mut id_seen = false;
    for (i, line) in source.split('\n').enumerate() {
        let line_no = i + 1;
        if is_blank(line) {
            continue;
        }
        if line.starts_with('#') {
            match line.strip_prefix("#id:") {
                Some(id) if !id_seen => {
                    out.document.id = id.trim().to_string();
                    id_seen = true;
                }
                _ => out.document.metadata.push(line.to_string()),
            }
            continue;
        }
        match parse_unit(line, line_no) {
            Ok(unit) => {
                out.document.units.push(unit);
                out.unit_lines.push(line_no);
            }
            Err(diags) => out.diagnostics.extend(diags),
        }
    }
    out
}

/// Like [`parse_document`], but starts from raw bytes and reports P010 for
/// input that is not UTF-8.
pub fn parse_document_bytes(source: &[u8]) -> ParsedDocument {
    match std::str::from_utf8(source) {
        Ok(s) => parse_document(s),
        Err(e) => {
            let valid = &source[..e.valid_up_to()];
            let line = valid.iter().filter(|&&b| b == b'\n').count() + 1;
            let line_start = valid.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
            let column = String::from_utf8_lossy(&valid[line_start..]).chars().count() + 1;
            ParsedDocument {
                diagnostics: vec![ParseDiagnostic {
                    code: ParseCode::InvalidUtf8,
                    line,
                    column,
                    message: "input is not valid UTF-8".into(),
                }],
                ..Default::default()
            }
        }
    }
}

fn push_escaped(out: &mut String, s: &str) {
    for c in s.chars() {
        if RESERVED.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
}

fn push_segment(out: &mut String, unit: &LabelingUnit, seg: Segment) {
    let span = seg.span();
    match seg.head() {
        None => push_escaped(out, slice(unit, span.start(), span.end())),
        Some(h) => {
            push_escaped(out, slice(unit, span.start(), h.start()));
            out.push('(');
            push_escaped(out, slice(unit, h.start(), h.end()));
            out.push(')');
            push_escaped(out, slice(unit, h.end(), span.end()));
        }
    }
}

fn slice(unit: &LabelingUnit, start: usize, end: usize) -> &str {
    if start == end {
        return "";
    }
    unit.slice(Span::new(start, end).expect("ordered offsets")).expect("offsets inside unit")
}

/// Canonical inline serialization of one unit, without a line terminator.
pub fn emit_unit(unit: &LabelingUnit) -> String {
    let mut out = String::with_capacity(unit.text().len() + unit.elements().len() * 10);
    let mut cursor = 0usize;
    for element in unit.elements() {
        let span = element.span();
        push_escaped(&mut out, slice(unit, cursor, span.start()));
        out.push('[');
        out.push_str(&element.tag().to_string());
        out.push(' ');
        if let Some(trigger) = element.trigger() {
            push_segment(&mut out, unit, trigger);
            out.push('-');
        }
        push_segment(&mut out, unit, element.body());
        out.push(']');
        cursor = span.end();
    }
    push_escaped(&mut out, slice(unit, cursor, unit.char_len()));
    if out.starts_with('#') {
        out.insert(0, '\\');
    }
    out
}

/// Canonical inline serialization of a document: the id line when the id is
/// non-empty, the remaining metadata lines, then one line per unit.
pub fn emit_document(doc: &Document) -> String {
    let mut out = String::new();
    if !doc.id.is_empty() {
        out.push_str("#id: ");
        out.push_str(&doc.id);
        out.push('\n');
    }
    for meta in &doc.metadata {
        out.push_str(meta);
        out.push('\n');
    }
    for unit in &doc.units {
        out.push_str(&emit_unit(unit));
        out.push('\n');
    }
    out
}
