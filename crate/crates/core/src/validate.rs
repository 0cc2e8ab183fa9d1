//! Guideline conformance checks.
//!
//! | code | severity | finding |
//! |------|----------|---------|
//! | E001 | error    | unit without UNC whose PRE count is not exactly one |
//! | E003 | error    | `PRE-M` whose body has no head group |
//! | E005 | error    | UNC element that is not the sole element or does not cover the unit |
//! | W010 | warning  | `-P` element without trigger separator |
//! | W011 | warning  | PRE element with a trigger separator |
//! | W020 | warning  | legacy RAI element; COM is the defined role |
//! | I040 | info     | non-ADV element whose trigger starts with 把 or 被 |
//! | I041 | info     | SUB element placed after the predicate head |
//!
//! I040 looks at the trigger rather than the raw surface: 把/被 as the first
//! character of a plain word (被告人) is lexical, not a marker.
//!
//! Priority between competing relevant-element types and the rules for
//! successive verbal expressions need semantic judgement and are not checked.

use std::fmt;

use serde::Serialize;

use crate::model::{Document, ElementForm, ElementType, LabelingUnit, PredicatePattern, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    /// E001
    PredicateCount,
    /// E003
    ModifiedWithoutHead,
    /// E005
    UncNotWholeUnit,
    /// W010
    PhraseWithoutTrigger,
    /// W011
    PredicateWithTrigger,
    /// W020
    LegacyRai,
    /// I040
    BaBeiOutsideAdverbial,
    /// I041
    SubjectAfterPredicate,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::PredicateCount => "E001",
            Code::ModifiedWithoutHead => "E003",
            Code::UncNotWholeUnit => "E005",
            Code::PhraseWithoutTrigger => "W010",
            Code::PredicateWithTrigger => "W011",
            Code::LegacyRai => "W020",
            Code::BaBeiOutsideAdverbial => "I040",
            Code::SubjectAfterPredicate => "I041",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Code::PredicateCount | Code::ModifiedWithoutHead | Code::UncNotWholeUnit => Severity::Error,
            Code::PhraseWithoutTrigger | Code::PredicateWithTrigger | Code::LegacyRai => Severity::Warning,
            Code::BaBeiOutsideAdverbial | Code::SubjectAfterPredicate => Severity::Info,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    pub unit_index: usize,
    pub span: Option<Span>,
    pub message: String,
}

impl Diagnostic {
    pub fn severity(&self) -> Severity {
        self.code.severity()
    }

    /// Severity after `--strict` promotion of warnings.
    pub fn effective_severity(&self, strict: bool) -> Severity {
        match self.severity() {
            Severity::Warning if strict => Severity::Error,
            s => s,
        }
    }

    fn sort_key(&self) -> (usize, Option<usize>, Code) {
        (self.unit_index, self.span.map(|s| s.start()), self.code)
    }
}

fn finding(code: Code, unit_index: usize, span: Option<Span>, message: impl Into<String>) -> Diagnostic {
    Diagnostic { code, unit_index, span, message: message.into() }
}

pub fn validate_unit(unit: &LabelingUnit, unit_index: usize) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let elements = unit.elements();

    if let Some(unc) = elements.iter().find(|e| e.kind() == ElementType::Unc) {
        let whole = unc.span().start() == 0 && unc.span().end() == unit.char_len();
        if elements.len() != 1 || !whole {
            out.push(finding(
                Code::UncNotWholeUnit,
                unit_index,
                Some(unc.span()),
                "UNC must be the only element and cover the whole unit",
            ));
        }
    } else {
        let pre_count = elements.iter().filter(|e| e.kind() == ElementType::Pre).count();
        if pre_count != 1 {
            out.push(finding(
                Code::PredicateCount,
                unit_index,
                None,
                format!("expected exactly one predicate head, found {pre_count}"),
            ));
        }
    }

    for e in elements {
        let span = Some(e.span());
        if e.pattern() == Some(PredicatePattern::Modified) && e.body().head().is_none() {
            out.push(finding(
                Code::ModifiedWithoutHead,
                unit_index,
                span,
                "PRE-M must mark its verb as head with (...)",
            ));
        }
        if e.form() == Some(ElementForm::Phrase) && e.trigger().is_none() {
            out.push(finding(
                Code::PhraseWithoutTrigger,
                unit_index,
                span,
                format!("{} element has no trigger separator", e.tag()),
            ));
        }
        if e.kind() == ElementType::Pre && e.trigger().is_some() {
            out.push(finding(
                Code::PredicateWithTrigger,
                unit_index,
                span,
                "predicate head carries a trigger separator",
            ));
        }
        if e.kind() == ElementType::Rai {
            out.push(finding(Code::LegacyRai, unit_index, span, format!("legacy tag {}; consider COM", e.tag())));
        }
        if e.kind() != ElementType::Adv {
            let marker = e.trigger().and_then(|t| unit.slice(t.span()).ok()).and_then(|t| t.chars().next());
            if matches!(marker, Some('把' | '被')) {
                out.push(finding(
                    Code::BaBeiOutsideAdverbial,
                    unit_index,
                    span,
                    format!("{} element is introduced by a Ba/Bei marker; usually annotated as ADV", e.tag()),
                ));
            }
        }
    }

    if let Some(pre) = elements.iter().find(|e| e.kind() == ElementType::Pre) {
        if let Some(sub) =
            elements.iter().find(|e| e.kind() == ElementType::Sub && e.span().start() > pre.span().start())
        {
            out.push(finding(
                Code::SubjectAfterPredicate,
                unit_index,
                Some(sub.span()),
                "subject element follows the predicate head",
            ));
        }
    }

    out.sort_by_key(Diagnostic::sort_key);
    out
}

/// All findings of a document ordered by unit, span start and code.
pub fn validate_document(doc: &Document) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = doc.units.iter().enumerate().flat_map(|(i, unit)| validate_unit(unit, i)).collect();
    out.sort_by_key(Diagnostic::sort_key);
    out
}

/// One finding in the machine-readable report stream.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticRecord<'a> {
    pub file: &'a str,
    pub line: usize,
    pub unit: usize,
    pub code: &'static str,
    pub severity: Severity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end: Option<usize>,
    pub message: &'a str,
}

impl<'a> DiagnosticRecord<'a> {
    pub fn new(file: &'a str, line: usize, diag: &'a Diagnostic, strict: bool) -> Self {
        DiagnosticRecord {
            file,
            line,
            unit: diag.unit_index,
            code: diag.code.as_str(),
            severity: diag.effective_severity(strict),
            start: diag.span.map(|s| s.start()),
            end: diag.span.map(|s| s.end()),
            message: &diag.message,
        }
    }
}

/// `file:line: CODE severity message`
pub fn render_text(file: &str, line: usize, diag: &Diagnostic, strict: bool) -> String {
    format!("{file}:{line}: {} {} {}", diag.code, diag.effective_severity(strict), diag.message)
}
