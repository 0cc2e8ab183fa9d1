//! Domain types for predicate-head annotation.
//!
//! A [`LabelingUnit`] stores the plain text of one sentence or clause together
//! with a flat, ordered list of [`Element`]s. All offsets are counted in
//! Unicode scalar values (codepoints) and refer to the plain text; brackets,
//! tags, parentheses and the trigger separator only exist in serialized forms.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors raised when a value would violate a model invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("empty or inverted span [{start},{end})")]
    EmptySpan { start: usize, end: usize },
    #[error("span {span} exceeds text length {len}")]
    OutOfBounds { span: Span, len: usize },
    #[error("head {head} is not inside segment {segment}")]
    HeadOutsideSegment { head: Span, segment: Span },
    #[error("trigger {trigger} does not end where body {body} begins")]
    DetachedTrigger { trigger: Span, body: Span },
    #[error("illegal tag combination {0}")]
    IllegalTag(String),
    #[error("unknown tag {0:?}")]
    UnknownTag(String),
    #[error("elements {first} and {second} overlap")]
    Overlap { first: Span, second: Span },
    #[error("elements {first} and {second} are out of order")]
    Unordered { first: Span, second: Span },
}

/// Annotated linguistic role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementType {
    /// Predicate head.
    Pre,
    /// Subject element.
    Sub,
    /// Temporal element.
    Tem,
    /// Locational element.
    Loc,
    /// Adverbial element: cause, manner, intent or preparatory action.
    Adv,
    /// Complemental element: acted upon, caused or influenced by the predicate.
    Com,
    /// Unit the guideline cannot process; always covers the whole unit.
    Unc,
    /// Legacy tag found in older annotations. Treated like its own kind.
    Rai,
}

impl ElementType {
    pub const ALL: [ElementType; 8] = [
        ElementType::Pre,
        ElementType::Sub,
        ElementType::Tem,
        ElementType::Loc,
        ElementType::Adv,
        ElementType::Com,
        ElementType::Unc,
        ElementType::Rai,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementType::Pre => "PRE",
            ElementType::Sub => "SUB",
            ElementType::Tem => "TEM",
            ElementType::Loc => "LOC",
            ElementType::Adv => "ADV",
            ElementType::Com => "COM",
            ElementType::Unc => "UNC",
            ElementType::Rai => "RAI",
        }
    }

    /// Whether elements of this kind carry a form postfix (`-W`, `-P`, `-C`).
    pub fn takes_form(self) -> bool {
        !matches!(self, ElementType::Pre | ElementType::Unc)
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElementType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ElementType::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| ModelError::UnknownTag(s.to_string()))
    }
}

/// Structure of a predicate head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PredicatePattern {
    /// `S`: a single verb without modifiers or aspect markers.
    Singleton,
    /// `R`: contains a reappearing verb.
    Reduplicated,
    /// `L`: coordinated verbs.
    Coordinated,
    /// `M`: verb with modifiers, aspect markers or complements; the verb is the head.
    Modified,
    /// `V`: idioms, proverbs and other fixed expressions.
    Specific,
}

impl PredicatePattern {
    pub const ALL: [PredicatePattern; 5] = [
        PredicatePattern::Singleton,
        PredicatePattern::Reduplicated,
        PredicatePattern::Coordinated,
        PredicatePattern::Modified,
        PredicatePattern::Specific,
    ];

    pub fn code(self) -> char {
        match self {
            PredicatePattern::Singleton => 'S',
            PredicatePattern::Reduplicated => 'R',
            PredicatePattern::Coordinated => 'L',
            PredicatePattern::Modified => 'M',
            PredicatePattern::Specific => 'V',
        }
    }

    pub fn from_code(code: char) -> Option<Self> {
        PredicatePattern::ALL.into_iter().find(|p| p.code() == code)
    }
}

/// Composition of a relevant element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementForm {
    /// `W`: a word or named entity, possibly with a modifier.
    Word,
    /// `P`: a preposition-object or verb-object phrase.
    Phrase,
    /// `C`: anything else, typically a clause.
    Clause,
}

impl ElementForm {
    pub const ALL: [ElementForm; 3] = [ElementForm::Word, ElementForm::Phrase, ElementForm::Clause];

    pub fn code(self) -> char {
        match self {
            ElementForm::Word => 'W',
            ElementForm::Phrase => 'P',
            ElementForm::Clause => 'C',
        }
    }

    pub fn from_code(code: char) -> Option<Self> {
        ElementForm::ALL.into_iter().find(|f| f.code() == code)
    }
}

/// The part of a tag after the `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subtag {
    None,
    Pattern(PredicatePattern),
    Form(ElementForm),
}

impl Subtag {
    pub fn code(self) -> Option<char> {
        match self {
            Subtag::None => None,
            Subtag::Pattern(p) => Some(p.code()),
            Subtag::Form(f) => Some(f.code()),
        }
    }
}

/// A validated kind/subtag pair such as `PRE-S` or `COM-W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag {
    kind: ElementType,
    sub: Subtag,
}

impl Tag {
    pub fn new(kind: ElementType, sub: Subtag) -> Result<Self, ModelError> {
        let ok = match (kind, sub) {
            (ElementType::Pre, Subtag::Pattern(_)) => true,
            (ElementType::Unc, Subtag::None) => true,
            (k, Subtag::Form(_)) => k.takes_form(),
            _ => false,
        };
        if ok {
            Ok(Tag { kind, sub })
        } else {
            let shown = match sub.code() {
                Some(c) => format!("{kind}-{c}"),
                None => kind.to_string(),
            };
            Err(ModelError::IllegalTag(shown))
        }
    }

    pub fn pre(pattern: PredicatePattern) -> Self {
        Tag { kind: ElementType::Pre, sub: Subtag::Pattern(pattern) }
    }

    pub fn unc() -> Self {
        Tag { kind: ElementType::Unc, sub: Subtag::None }
    }

    /// Builds a relevant-element tag; fails for `PRE` and `UNC`.
    pub fn relevant(kind: ElementType, form: ElementForm) -> Result<Self, ModelError> {
        Tag::new(kind, Subtag::Form(form))
    }

    /// Parses a kind and an optional one-letter subtag, e.g. `("COM", Some("W"))`.
    pub fn from_parts(kind: &str, sub: Option<&str>) -> Result<Self, ModelError> {
        let kind: ElementType = kind.parse()?;
        let sub = match sub {
            None => Subtag::None,
            Some(code) => {
                let mut chars = code.chars();
                let c = match (chars.next(), chars.next()) {
                    (Some(c), None) => c,
                    _ => return Err(ModelError::IllegalTag(format!("{kind}-{code}"))),
                };
                if kind == ElementType::Pre {
                    PredicatePattern::from_code(c)
                        .map(Subtag::Pattern)
                        .ok_or_else(|| ModelError::IllegalTag(format!("{kind}-{code}")))?
                } else {
                    ElementForm::from_code(c)
                        .map(Subtag::Form)
                        .ok_or_else(|| ModelError::IllegalTag(format!("{kind}-{code}")))?
                }
            }
        };
        Tag::new(kind, sub)
    }

    pub fn kind(&self) -> ElementType {
        self.kind
    }

    pub fn sub(&self) -> Subtag {
        self.sub
    }

    pub fn pattern(&self) -> Option<PredicatePattern> {
        match self.sub {
            Subtag::Pattern(p) => Some(p),
            _ => None,
        }
    }

    pub fn form(&self) -> Option<ElementForm> {
        match self.sub {
            Subtag::Form(f) => Some(f),
            _ => None,
        }
    }

    /// Same tag with the kind replaced, keeping the subtag. Used for RAI→COM
    /// normalization.
    pub fn with_kind(&self, kind: ElementType) -> Result<Self, ModelError> {
        Tag::new(kind, self.sub)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sub.code() {
            Some(c) => write!(f, "{}-{}", self.kind, c),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl FromStr for Tag {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('-') {
            Some((kind, sub)) => Tag::from_parts(kind, Some(sub)),
            None => Tag::from_parts(s, None),
        }
    }
}

/// Half-open codepoint range `[start, end)`, never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    start: usize,
    end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Result<Self, ModelError> {
        if start < end {
            Ok(Span { start, end })
        } else {
            Err(ModelError::EmptySpan { start, end })
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

/// A trigger or body region, optionally marking its head word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    span: Span,
    head: Option<Span>,
}

impl Segment {
    pub fn new(span: Span, head: Option<Span>) -> Result<Self, ModelError> {
        if let Some(head) = head {
            if !span.contains(&head) {
                return Err(ModelError::HeadOutsideSegment { head, segment: span });
            }
        }
        Ok(Segment { span, head })
    }

    pub fn plain(span: Span) -> Self {
        Segment { span, head: None }
    }

    pub fn span(&self) -> Span {
        self.span
    }

    pub fn head(&self) -> Option<Span> {
        self.head
    }
}

/// One annotated, typed span of a labeling unit.
///
/// The optional trigger and the body tile the element span. The separator has
/// no width in the plain text; it sits at the offset where the trigger ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Element {
    tag: Tag,
    trigger: Option<Segment>,
    body: Segment,
}

impl Element {
    pub fn new(tag: Tag, trigger: Option<Segment>, body: Segment) -> Result<Self, ModelError> {
        if let Some(trigger) = trigger {
            if trigger.span.end != body.span.start {
                return Err(ModelError::DetachedTrigger { trigger: trigger.span, body: body.span });
            }
        }
        Ok(Element { tag, trigger, body })
    }

    /// An element with no trigger and no head.
    pub fn simple(tag: Tag, span: Span) -> Self {
        Element { tag, trigger: None, body: Segment::plain(span) }
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn kind(&self) -> ElementType {
        self.tag.kind
    }

    pub fn pattern(&self) -> Option<PredicatePattern> {
        self.tag.pattern()
    }

    pub fn form(&self) -> Option<ElementForm> {
        self.tag.form()
    }

    pub fn trigger(&self) -> Option<Segment> {
        self.trigger
    }

    pub fn body(&self) -> Segment {
        self.body
    }

    /// Whole element, trigger included.
    pub fn span(&self) -> Span {
        let start = self.trigger.map_or(self.body.span.start, |t| t.span.start);
        Span { start, end: self.body.span.end }
    }

    /// Offset of the trigger separator, if the element has one.
    pub fn separator(&self) -> Option<usize> {
        self.trigger.map(|t| t.span.end)
    }

    /// Copy of this element with a different tag.
    pub fn retagged(&self, tag: Tag) -> Self {
        Element { tag, ..*self }
    }

    fn shifted(&self, delta: usize) -> Self {
        let shift = |s: Span| Span { start: s.start + delta, end: s.end + delta };
        let seg = |s: Segment| Segment { span: shift(s.span), head: s.head.map(shift) };
        Element { tag: self.tag, trigger: self.trigger.map(seg), body: seg(self.body) }
    }
}

/// Either verbatim gap text or an element with its surface string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece<'a> {
    Gap(&'a str),
    Element(&'a Element, &'a str),
}

/// One manually segmented sentence or clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelingUnit {
    text: String,
    char_len: usize,
    elements: Vec<Element>,
}

impl LabelingUnit {
    /// Validates bounds, ordering and disjointness of `elements`.
    pub fn new(text: impl Into<String>, elements: Vec<Element>) -> Result<Self, ModelError> {
        let text = text.into();
        let char_len = text.chars().count();
        let mut prev: Option<Span> = None;
        for element in &elements {
            let span = element.span();
            if span.end > char_len {
                return Err(ModelError::OutOfBounds { span, len: char_len });
            }
            if let Some(prev) = prev {
                if prev.overlaps(&span) {
                    return Err(ModelError::Overlap { first: prev, second: span });
                }
                if span.start < prev.start {
                    return Err(ModelError::Unordered { first: prev, second: span });
                }
            }
            prev = Some(span);
        }
        Ok(LabelingUnit { text, char_len, elements })
    }

    /// A unit without annotation.
    pub fn plain(text: impl Into<String>) -> Self {
        let text = text.into();
        let char_len = text.chars().count();
        LabelingUnit { text, char_len, elements: Vec::new() }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Length of the text in codepoints.
    pub fn char_len(&self) -> usize {
        self.char_len
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn into_parts(self) -> (String, Vec<Element>) {
        (self.text, self.elements)
    }

    /// Plain surface string of the unit. Equal to the concatenation of all
    /// [`pieces`](Self::pieces).
    pub fn surface(&self) -> &str {
        &self.text
    }

    /// The codepoints covered by `span`.
    pub fn slice(&self, span: Span) -> Result<&str, ModelError> {
        if span.end > self.char_len {
            return Err(ModelError::OutOfBounds { span, len: self.char_len });
        }
        let (a, b) = byte_range(&self.text, span.start, span.end);
        Ok(&self.text[a..b])
    }

    /// Surface string of one element of this unit.
    pub fn element_surface(&self, element: &Element) -> Result<&str, ModelError> {
        self.slice(element.span())
    }

    /// Gap text and element surfaces in positional order.
    pub fn pieces(&self) -> Vec<Piece<'_>> {
        // Element bounds are non-decreasing, so one walk over the codepoints
        // resolves every byte offset.
        let bounds: Vec<usize> = self
            .elements
            .iter()
            .flat_map(|e| {
                let s = e.span();
                [s.start, s.end]
            })
            .collect();
        let mut byte_bounds = Vec::with_capacity(bounds.len());
        let mut offsets = self.text.char_indices().map(|(i, _)| i).chain(std::iter::once(self.text.len()));
        let mut cp = 0usize;
        let mut byte = offsets.next().unwrap_or(0);
        for &b in &bounds {
            while cp < b {
                byte = offsets.next().unwrap_or(self.text.len());
                cp += 1;
            }
            byte_bounds.push(byte);
        }

        let mut out = Vec::with_capacity(self.elements.len() * 2 + 1);
        let mut cursor = 0usize;
        for (i, e) in self.elements.iter().enumerate() {
            let (a, b) = (byte_bounds[2 * i], byte_bounds[2 * i + 1]);
            if a > cursor {
                out.push(Piece::Gap(&self.text[cursor..a]));
            }
            out.push(Piece::Element(e, &self.text[a..b]));
            cursor = b;
        }
        if cursor < self.text.len() {
            out.push(Piece::Gap(&self.text[cursor..]));
        }
        out
    }

    /// Copy with the elements replaced; validated like [`new`](Self::new).
    pub fn with_elements(&self, elements: Vec<Element>) -> Result<Self, ModelError> {
        LabelingUnit::new(self.text.clone(), elements)
    }

    /// Concatenates two units, shifting the elements of `other`.
    pub fn concat(&self, other: &LabelingUnit) -> LabelingUnit {
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().map(|e| e.shifted(self.char_len)));
        LabelingUnit {
            text: format!("{}{}", self.text, other.text),
            char_len: self.char_len + other.char_len,
            elements,
        }
    }
}

/// Byte range of the codepoint range `[start, end)`; clamps at the text end.
pub(crate) fn byte_range(text: &str, start: usize, end: usize) -> (usize, usize) {
    let mut a = text.len();
    let mut b = text.len();
    for (n, (i, _)) in text.char_indices().enumerate() {
        if n == start {
            a = i;
        }
        if n == end {
            b = i;
            break;
        }
    }
    (a, b)
}

/// A sequence of labeling units with identity and free-form metadata.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Document {
    pub id: String,
    /// Raw comment lines other than the id line, `#` included.
    pub metadata: Vec<String>,
    pub units: Vec<LabelingUnit>,
}

impl Document {
    pub fn new(id: impl Into<String>) -> Self {
        Document { id: id.into(), metadata: Vec::new(), units: Vec::new() }
    }

    pub fn element_count(&self) -> usize {
        self.units.iter().map(|u| u.elements.len()).sum()
    }
}
