//! Random documents for round-trip and property tests.

#![allow(dead_code)]

use predhead::{Document, Element, ElementForm, ElementType, LabelingUnit, PredicatePattern, Segment, Span, Tag};
use rand::seq::SliceRandom;
use rand::Rng;

/// Characters used in unit text: common Hanzi, full-width punctuation,
/// ASCII letters and digits, and every character the inline notation
/// reserves or escapes.
pub const ALPHABET: &[char] = &[
    '我', '你', '他', '被', '把', '告', '人', '陈', '某', '因', '家', '庭', '矛', '盾', '迁', '怒', '岳', '父', '滕',
    '年', '月', '日', '凌', '晨', '并', '和', '且', '刀', '捅', '刺', '。', '，', '、', '；', '！', '？', '”', '』',
    '「', 'a', 'Z', '7', ' ', '　', '[', ']', '(', ')', '-', '\\', '#', ':', '{', '"',
];

pub fn random_text(rng: &mut impl Rng, len: usize) -> String {
    loop {
        let s: String = (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect();
        if !s.trim().is_empty() {
            return s;
        }
    }
}

pub fn random_tag(rng: &mut impl Rng) -> Tag {
    let kind = *ElementType::ALL.choose(rng).unwrap();
    match kind {
        ElementType::Pre => Tag::pre(*PredicatePattern::ALL.choose(rng).unwrap()),
        ElementType::Unc => Tag::unc(),
        k => Tag::relevant(k, *ElementForm::ALL.choose(rng).unwrap()).unwrap(),
    }
}

fn random_segment(rng: &mut impl Rng, start: usize, end: usize) -> Segment {
    let span = Span::new(start, end).unwrap();
    if rng.gen_bool(0.5) {
        let hs = rng.gen_range(start..end);
        let he = rng.gen_range(hs + 1..=end);
        Segment::new(span, Some(Span::new(hs, he).unwrap())).unwrap()
    } else {
        Segment::plain(span)
    }
}

pub fn random_element(rng: &mut impl Rng, start: usize, end: usize) -> Element {
    let tag = random_tag(rng);
    if end - start >= 2 && rng.gen_bool(0.4) {
        let sep = rng.gen_range(start + 1..end);
        Element::new(tag, Some(random_segment(rng, start, sep)), random_segment(rng, sep, end)).unwrap()
    } else {
        Element::new(tag, None, random_segment(rng, start, end)).unwrap()
    }
}

pub fn random_unit(rng: &mut impl Rng, max_len: usize) -> LabelingUnit {
    let len = rng.gen_range(1..=max_len);
    let text = random_text(rng, len);
    let mut elements = Vec::new();
    let mut pos = 0;
    while pos < len {
        let start = rng.gen_range(pos..=len);
        if start == len || rng.gen_bool(0.25) {
            break;
        }
        let end = rng.gen_range(start + 1..=len);
        elements.push(random_element(rng, start, end));
        pos = end;
    }
    LabelingUnit::new(text, elements).unwrap()
}

fn random_line(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(0..8);
    let s: String = (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect();
    s.trim().to_string()
}

pub fn random_document(rng: &mut impl Rng, max_units: usize, max_len: usize) -> Document {
    let mut doc = Document::new(random_line(rng).replace('#', "").trim());
    for _ in 0..rng.gen_range(0..3) {
        doc.metadata.push(format!("# {}", random_line(rng)));
    }
    for _ in 0..rng.gen_range(0..=max_units) {
        doc.units.push(random_unit(rng, max_len));
    }
    doc
}
