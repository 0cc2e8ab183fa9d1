//! Standoff and column representations of annotated documents.
//!
//! Standoff: one JSON object per document per line,
//!
//! ```text
//! {"id":"d1","units":[{"text":"并互相厮打。","elements":[{"kind":"PRE","sub":"M","start":1,"end":5,"head_start":3,"head_end":5}]}]}
//! ```
//!
//! Absent optionals are omitted. `meta` carries the raw comment lines and is
//! left out when empty.
//!
//! Columns: a `# doc <id>` header (plus `# meta <line>` for each comment line),
//! then one `char<TAB>tag<TAB>role` row per codepoint with a blank line after
//! every unit. Tags are BIO with the full tag (`B-COM-W`); roles are `T`
//! (trigger), `TH` (trigger head), `B` (body), `H` (body head) and `O`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Document, Element, LabelingUnit, ModelError, Segment, Span, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConvertCode {
    /// C001: span out of bounds, empty, or inconsistent with trigger/body layout.
    OutOfBounds,
    /// C002: overlapping or unordered elements.
    Overlap,
    /// C003: unknown kind or illegal kind/subtag combination.
    IllegalTag,
    /// C004: record is not valid JSON for the standoff schema.
    MalformedRecord,
    /// C010: `I-` tag without a preceding matching `B-`.
    DanglingInside,
    /// C011: role flag inconsistent with the boundary tag.
    RoleMismatch,
    /// C012: row without exactly three tab-separated fields of the right shape.
    MalformedRow,
}

impl ConvertCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ConvertCode::OutOfBounds => "C001",
            ConvertCode::Overlap => "C002",
            ConvertCode::IllegalTag => "C003",
            ConvertCode::MalformedRecord => "C004",
            ConvertCode::DanglingInside => "C010",
            ConvertCode::RoleMismatch => "C011",
            ConvertCode::MalformedRow => "C012",
        }
    }
}

impl fmt::Display for ConvertCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{code} {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConvertError {
    pub code: ConvertCode,
    /// 1-based input line, when the input is line oriented.
    pub line: Option<usize>,
    pub message: String,
}

impl ConvertError {
    fn new(code: ConvertCode, line: Option<usize>, message: impl Into<String>) -> Self {
        ConvertError { code, line, message: message.into() }
    }

    fn at(mut self, line: usize) -> Self {
        self.line.get_or_insert(line);
        self
    }
}

impl From<ModelError> for ConvertError {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::EmptySpan { .. }
            | ModelError::OutOfBounds { .. }
            | ModelError::HeadOutsideSegment { .. }
            | ModelError::DetachedTrigger { .. } => ConvertCode::OutOfBounds,
            ModelError::Overlap { .. } | ModelError::Unordered { .. } => ConvertCode::Overlap,
            ModelError::IllegalTag(_) | ModelError::UnknownTag(_) => ConvertCode::IllegalTag,
        };
        ConvertError::new(code, None, e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Standoff

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandoffRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub meta: Vec<String>,
    #[serde(default)]
    pub units: Vec<StandoffUnit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandoffUnit {
    pub text: String,
    #[serde(default)]
    pub elements: Vec<StandoffElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandoffElement {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub: Option<String>,
    pub start: usize,
    pub end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trig_start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trig_end: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trig_head_start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trig_head_end: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head_start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head_end: Option<usize>,
}

impl StandoffElement {
    fn from_element(e: &Element) -> Self {
        let tag = e.tag();
        let trig = e.trigger();
        let trig_head = trig.and_then(|t| t.head());
        let head = e.body().head();
        StandoffElement {
            kind: tag.kind().as_str().to_string(),
            sub: tag.sub().code().map(String::from),
            start: e.span().start(),
            end: e.span().end(),
            trig_start: trig.map(|t| t.span().start()),
            trig_end: trig.map(|t| t.span().end()),
            trig_head_start: trig_head.map(|h| h.start()),
            trig_head_end: trig_head.map(|h| h.end()),
            head_start: head.map(|h| h.start()),
            head_end: head.map(|h| h.end()),
        }
    }

    fn to_element(&self) -> Result<Element, ConvertError> {
        let tag = Tag::from_parts(&self.kind, self.sub.as_deref())?;
        let pair = |a: Option<usize>, b: Option<usize>, what: &str| -> Result<Option<Span>, ConvertError> {
            match (a, b) {
                (None, None) => Ok(None),
                (Some(a), Some(b)) => Ok(Some(Span::new(a, b)?)),
                _ => Err(ConvertError::new(ConvertCode::OutOfBounds, None, format!("{what} needs both start and end"))),
            }
        };
        let span = Span::new(self.start, self.end)?;
        let trig = pair(self.trig_start, self.trig_end, "trigger")?;
        let trig_head = pair(self.trig_head_start, self.trig_head_end, "trigger head")?;
        let head = pair(self.head_start, self.head_end, "head")?;

        let trigger = match trig {
            None if trig_head.is_some() => {
                return Err(ConvertError::new(ConvertCode::OutOfBounds, None, "trigger head without trigger"))
            }
            None => None,
            Some(t) => {
                if t.start() != span.start() || t.end() >= span.end() {
                    return Err(ConvertError::new(
                        ConvertCode::OutOfBounds,
                        None,
                        format!("trigger {t} must open element {span} and leave a body"),
                    ));
                }
                Some(Segment::new(t, trig_head)?)
            }
        };
        let body_start = trigger.map_or(span.start(), |t| t.span().end());
        let body = Segment::new(Span::new(body_start, span.end())?, head)?;
        Ok(Element::new(tag, trigger, body)?)
    }
}

pub fn to_standoff(doc: &Document) -> StandoffRecord {
    StandoffRecord {
        id: doc.id.clone(),
        meta: doc.metadata.clone(),
        units: doc
            .units
            .iter()
            .map(|u| StandoffUnit {
                text: u.text().to_string(),
                elements: u.elements().iter().map(StandoffElement::from_element).collect(),
            })
            .collect(),
    }
}

/// One standoff line, without the trailing newline.
pub fn to_standoff_line(doc: &Document) -> String {
    serde_json::to_string(&to_standoff(doc)).expect("standoff records always serialize")
}

pub fn from_standoff(record: &StandoffRecord) -> Result<Document, ConvertError> {
    let mut units = Vec::with_capacity(record.units.len());
    for u in &record.units {
        let elements = u.elements.iter().map(StandoffElement::to_element).collect::<Result<Vec<_>, _>>()?;
        units.push(LabelingUnit::new(u.text.clone(), elements)?);
    }
    Ok(Document { id: record.id.clone(), metadata: record.meta.clone(), units })
}

/// Parses a line-delimited standoff stream. Blank lines are skipped.
pub fn from_standoff_str(text: &str) -> Result<Vec<Document>, ConvertError> {
    let mut docs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: StandoffRecord = serde_json::from_str(line)
            .map_err(|e| ConvertError::new(ConvertCode::MalformedRecord, Some(i + 1), e.to_string()))?;
        docs.push(from_standoff(&record).map_err(|e| e.at(i + 1))?);
    }
    Ok(docs)
}

// ---------------------------------------------------------------------------
// Columns

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Trigger,
    TriggerHead,
    Body,
    Head,
    Outside,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Trigger => "T",
            Role::TriggerHead => "TH",
            Role::Body => "B",
            Role::Head => "H",
            Role::Outside => "O",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "T" => Role::Trigger,
            "TH" => Role::TriggerHead,
            "B" => Role::Body,
            "H" => Role::Head,
            "O" => Role::Outside,
            _ => return None,
        })
    }

    fn in_trigger(self) -> bool {
        matches!(self, Role::Trigger | Role::TriggerHead)
    }

    fn is_head(self) -> bool {
        matches!(self, Role::TriggerHead | Role::Head)
    }
}

/// Boundary tag and role of every codepoint of `unit`.
pub fn unit_rows(unit: &LabelingUnit) -> Vec<(String, Role)> {
    let mut rows: Vec<(String, Role)> = vec![("O".to_string(), Role::Outside); unit.char_len()];
    let inside = |s: Option<Span>, i: usize| s.is_some_and(|s| s.start() <= i && i < s.end());
    for e in unit.elements() {
        let span = e.span();
        let tag = e.tag().to_string();
        for (i, row) in rows.iter_mut().enumerate().take(span.end()).skip(span.start()) {
            let bio = if i == span.start() { format!("B-{tag}") } else { format!("I-{tag}") };
            let role = match e.trigger() {
                Some(t) if inside(Some(t.span()), i) => {
                    if inside(t.head(), i) {
                        Role::TriggerHead
                    } else {
                        Role::Trigger
                    }
                }
                _ if inside(e.body().head(), i) => Role::Head,
                _ => Role::Body,
            };
            *row = (bio, role);
        }
    }
    rows
}

pub fn to_columns(doc: &Document) -> String {
    let mut out = String::new();
    out.push_str("# doc ");
    out.push_str(&doc.id);
    out.push('\n');
    for meta in &doc.metadata {
        out.push_str("# meta ");
        out.push_str(meta);
        out.push('\n');
    }
    for unit in &doc.units {
        for (c, (tag, role)) in unit.text().chars().zip(unit_rows(unit)) {
            out.push(c);
            out.push('\t');
            out.push_str(&tag);
            out.push('\t');
            out.push_str(role.as_str());
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

struct Row {
    line: usize,
    ch: char,
    /// `None` for `O`, otherwise (begins, tag).
    tag: Option<(bool, Tag)>,
    role: Role,
}

fn parse_row(line_no: usize, line: &str) -> Result<Row, ConvertError> {
    let malformed = |m: &str| ConvertError::new(ConvertCode::MalformedRow, Some(line_no), m.to_string());
    let mut fields = line.split('\t');
    let (Some(ch), Some(tag), Some(role), None) = (fields.next(), fields.next(), fields.next(), fields.next()) else {
        return Err(malformed("expected three tab-separated fields"));
    };
    let mut chars = ch.chars();
    let (Some(ch), None) = (chars.next(), chars.next()) else {
        return Err(malformed("first field must be exactly one character"));
    };
    let role = Role::parse(role).ok_or_else(|| malformed("unknown role flag"))?;
    let tag = if tag == "O" {
        None
    } else {
        let (begins, rest) = if let Some(rest) = tag.strip_prefix("B-") {
            (true, rest)
        } else if let Some(rest) = tag.strip_prefix("I-") {
            (false, rest)
        } else {
            return Err(malformed("boundary tag must be O, B-… or I-…"));
        };
        let tag: Tag = rest.parse().map_err(|e: ModelError| ConvertError::from(e).at(line_no))?;
        Some((begins, tag))
    };
    if tag.is_none() != (role == Role::Outside) {
        return Err(ConvertError::new(
            ConvertCode::RoleMismatch,
            Some(line_no),
            "O boundary tag requires O role and vice versa",
        ));
    }
    Ok(Row { line: line_no, ch, tag, role })
}

/// Characters of one element while reading rows.
struct ElementDraft {
    tag: Tag,
    start: usize,
    roles: Vec<(usize, Role)>,
}

fn contiguous(idx: &[usize]) -> Option<Span> {
    let (first, last) = (*idx.first()?, *idx.last()?);
    if last - first + 1 == idx.len() {
        Span::new(first, last + 1).ok()
    } else {
        None
    }
}

impl ElementDraft {
    fn finish(self) -> Result<Element, ConvertError> {
        let line = self.roles.first().map(|r| r.0).unwrap_or(0);
        let mismatch = |m: &str| ConvertError::new(ConvertCode::RoleMismatch, Some(line), m.to_string());
        let trig_len = self.roles.iter().take_while(|(_, r)| r.in_trigger()).count();
        if self.roles[trig_len..].iter().any(|(_, r)| r.in_trigger()) {
            return Err(mismatch("trigger characters must precede the body"));
        }
        if trig_len == self.roles.len() {
            return Err(mismatch("element has a trigger but no body"));
        }
        let heads = |range: std::ops::Range<usize>| -> Result<Option<Span>, ConvertError> {
            let idx: Vec<usize> =
                range.clone().filter(|&i| self.roles[i].1.is_head()).map(|i| self.start + i).collect();
            if idx.is_empty() {
                return Ok(None);
            }
            contiguous(&idx).map(Some).ok_or_else(|| mismatch("head characters must be contiguous"))
        };
        let end = self.start + self.roles.len();
        let trigger = if trig_len > 0 {
            let span = Span::new(self.start, self.start + trig_len)?;
            Some(Segment::new(span, heads(0..trig_len)?)?)
        } else {
            None
        };
        let body = Segment::new(Span::new(self.start + trig_len, end)?, heads(trig_len..self.roles.len())?)?;
        Ok(Element::new(self.tag, trigger, body)?)
    }
}

fn build_unit(rows: &[Row]) -> Result<LabelingUnit, ConvertError> {
    let mut text = String::with_capacity(rows.len() * 3);
    let mut elements = Vec::new();
    let mut open: Option<ElementDraft> = None;
    for (i, row) in rows.iter().enumerate() {
        text.push(row.ch);
        match row.tag {
            None => {
                if let Some(d) = open.take() {
                    elements.push(d.finish()?);
                }
            }
            Some((true, tag)) => {
                if let Some(d) = open.take() {
                    elements.push(d.finish()?);
                }
                open = Some(ElementDraft { tag, start: i, roles: vec![(row.line, row.role)] });
            }
            Some((false, tag)) => match open.as_mut() {
                Some(d) if d.tag == tag => d.roles.push((row.line, row.role)),
                _ => {
                    return Err(ConvertError::new(
                        ConvertCode::DanglingInside,
                        Some(row.line),
                        format!("I-{tag} without a preceding B-{tag}"),
                    ))
                }
            },
        }
    }
    if let Some(d) = open.take() {
        elements.push(d.finish()?);
    }
    Ok(LabelingUnit::new(text, elements)?)
}

/// Parses a column stream holding any number of documents. Rows before the
/// first `# doc` header belong to a document with an empty id.
pub fn from_columns_stream(text: &str) -> Result<Vec<Document>, ConvertError> {
    let mut docs: Vec<Document> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();

    fn flush(docs: &mut Vec<Document>, rows: &mut Vec<Row>) -> Result<(), ConvertError> {
        if rows.is_empty() {
            return Ok(());
        }
        let unit = build_unit(rows)?;
        rows.clear();
        if docs.is_empty() {
            docs.push(Document::default());
        }
        docs.last_mut().expect("document present").units.push(unit);
        Ok(())
    }

    for (i, line) in text.split('\n').enumerate() {
        let line_no = i + 1;
        if line.is_empty() {
            flush(&mut docs, &mut rows)?;
        } else if let Some(id) = line.strip_prefix("# doc ").or((line == "# doc").then_some("")) {
            flush(&mut docs, &mut rows)?;
            docs.push(Document::new(id));
        } else if let Some(meta) = line.strip_prefix("# meta ") {
            if !rows.is_empty() {
                return Err(ConvertError::new(ConvertCode::MalformedRow, Some(line_no), "metadata inside a unit"));
            }
            if docs.is_empty() {
                docs.push(Document::default());
            }
            docs.last_mut().expect("document present").metadata.push(meta.to_string());
        } else {
            rows.push(parse_row(line_no, line)?);
        }
    }
    flush(&mut docs, &mut rows)?;
    Ok(docs)
}

/// Parses a column file holding exactly one document (an empty input yields
/// an empty document).
pub fn from_columns(text: &str) -> Result<Document, ConvertError> {
    let mut docs = from_columns_stream(text)?;
    match docs.len() {
        0 => Ok(Document::default()),
        1 => Ok(docs.pop().expect("one document")),
        n => Err(ConvertError::new(ConvertCode::MalformedRow, None, format!("expected one document, found {n}"))),
    }
}
