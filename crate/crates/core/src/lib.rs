//! Toolkit for the inline bracket annotation of Chinese predicate heads and
//! their relevant elements.
//!
//! * [`model`]: labeling units, elements, spans and tags.
//! * [`inline`]: parser and canonical emitter for the bracket notation.
//! * [`validate`]: guideline conformance checks with coded diagnostics.
//! * [`segment`]: proposes labeling-unit boundaries in raw text.
//! * [`convert`]: standoff records and per-character column files.
//! * [`metrics`]: corpus statistics and inter-annotator agreement.

pub mod convert;
pub mod inline;
pub mod metrics;
pub mod model;
pub mod segment;
pub mod validate;

pub use inline::{emit_document, emit_unit, parse_document, parse_unit, ParseCode, ParseDiagnostic, ParsedDocument};
pub use model::{
    Document, Element, ElementForm, ElementType, LabelingUnit, ModelError, Piece, PredicatePattern, Segment, Span,
    Subtag, Tag,
};
