//! Proposes labeling-unit boundaries in raw Chinese text.
//!
//! End marks (。；！？) always close a unit. Commas and conjunctions only
//! separate units when both sides carry their own predicate head, which cannot
//! be decided before annotation, so they yield *candidate* boundaries for a
//! human to confirm.

use std::collections::BTreeMap;

use serde::Serialize;

pub const END_MARKS: [char; 4] = ['。', '；', '！', '？'];
pub const CLOSING_QUOTES: [char; 3] = ['”', '』', '」'];
pub const COMMAS: [char; 2] = ['，', '、'];
pub const DEFAULT_CONJUNCTIONS: [&str; 7] = ["并", "并且", "且", "和", "而且", "但是", "然后"];

const NUMERALS: &str = "0123456789０１２３４５６７８９〇零一二三四五六七八九十百千两";
const TIME_UNITS: &str = "年月日号时点分秒";
const TIME_WORDS: [&str; 38] = [
    "凌晨", "清晨", "早晨", "早上", "上午", "中午", "午后", "下午", "傍晚", "晚上", "晚间", "夜间", "夜里", "深夜",
    "半夜", "当天", "当日", "当晚", "当夜", "次日", "同日", "同年", "同月", "今天", "昨天", "明天", "前天", "左右",
    "前后", "期间", "上旬", "中旬", "下旬", "月初", "月底", "年底", "许", "时许",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Hard,
    Candidate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCause {
    EndMark,
    Comma,
    Conjunction,
}

/// A proposed cut falling after the codepoint at `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SegmentBoundary {
    pub position: usize,
    pub kind: BoundaryKind,
    pub cause: BoundaryCause,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CommaPolicy {
    #[default]
    Candidate,
    Hard,
    Ignore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitPolicy {
    HardOnly,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmenterConfig {
    conjunctions: Vec<String>,
    pub commas: CommaPolicy,
    /// Keep a clause made only of a date or time expression (e.g.
    /// `2015年6月29日凌晨，`) attached to the following clause. Such a clause
    /// cannot hold a predicate head of its own.
    pub attach_temporal_lead: bool,
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        SegmenterConfig::new(DEFAULT_CONJUNCTIONS, CommaPolicy::Candidate)
    }
}

impl SegmenterConfig {
    /// Empty entries are dropped and duplicates removed, keeping first
    /// occurrence order.
    pub fn new<I, S>(conjunctions: I, commas: CommaPolicy) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lexicon: Vec<String> = Vec::new();
        for c in conjunctions {
            let c = c.as_ref().trim();
            if !c.is_empty() && !lexicon.iter().any(|x| x == c) {
                lexicon.push(c.to_string());
            }
        }
        SegmenterConfig { conjunctions: lexicon, commas, attach_temporal_lead: true }
    }

    /// Reads a lexicon with one entry per line.
    pub fn with_lexicon_text(text: &str, commas: CommaPolicy) -> Self {
        SegmenterConfig::new(text.lines(), commas)
    }

    pub fn conjunctions(&self) -> &[String] {
        &self.conjunctions
    }

    /// Length in codepoints of the longest lexicon entry starting at `at`.
    fn conjunction_at(&self, chars: &[char], at: usize) -> Option<usize> {
        self.conjunctions
            .iter()
            .map(|c| c.chars().collect::<Vec<_>>())
            .filter(|c| chars[at..].starts_with(c))
            .map(|c| c.len())
            .max()
    }
}

fn starts_with_str(chars: &[char], word: &str) -> Option<usize> {
    let mut n = 0;
    for w in word.chars() {
        if chars.get(n) != Some(&w) {
            return None;
        }
        n += 1;
    }
    Some(n)
}

/// Whether `clause` consists only of numeric dates/times and time words.
fn is_temporal_expression(clause: &[char]) -> bool {
    let mut i = 0;
    while i < clause.len() {
        let rest = &clause[i..];
        if let Some(n) = TIME_WORDS.iter().filter_map(|w| starts_with_str(rest, w)).max() {
            i += n;
            continue;
        }
        let digits = rest.iter().take_while(|c| NUMERALS.contains(**c)).count();
        if digits > 0 && rest.get(digits).is_some_and(|c| TIME_UNITS.contains(*c)) {
            i += digits + 1;
            continue;
        }
        return false;
    }
    !clause.is_empty()
}

/// Proposes unit boundaries. No boundary is placed at the end of `text`.
pub fn propose_boundaries(text: &str, config: &SegmenterConfig) -> Vec<SegmentBoundary> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut found: BTreeMap<usize, SegmentBoundary> = BTreeMap::new();
    let mut add = |position: usize, kind: BoundaryKind, cause: BoundaryCause| {
        if position + 1 >= n {
            return;
        }
        let b = SegmentBoundary { position, kind, cause };
        found
            .entry(position)
            .and_modify(|old| {
                if old.kind == BoundaryKind::Candidate && kind == BoundaryKind::Hard {
                    *old = b;
                }
            })
            .or_insert(b);
    };

    let mut clause_start = 0usize;
    let mut conj_blocked_until = 0usize;
    let mut i = 0usize;
    while i < n {
        if i > 0 && i >= conj_blocked_until {
            if let Some(len) = config.conjunction_at(&chars, i) {
                add(i - 1, BoundaryKind::Candidate, BoundaryCause::Conjunction);
                clause_start = clause_start.max(i);
                conj_blocked_until = i + len;
            }
        }
        let c = chars[i];
        if END_MARKS.contains(&c) {
            let mut j = i;
            while j + 1 < n && (END_MARKS.contains(&chars[j + 1]) || CLOSING_QUOTES.contains(&chars[j + 1])) {
                j += 1;
            }
            add(j, BoundaryKind::Hard, BoundaryCause::EndMark);
            clause_start = j + 1;
            i = j + 1;
            continue;
        }
        if COMMAS.contains(&c) {
            let kind = match config.commas {
                CommaPolicy::Candidate => Some(BoundaryKind::Candidate),
                CommaPolicy::Hard => Some(BoundaryKind::Hard),
                CommaPolicy::Ignore => None,
            };
            if let Some(kind) = kind {
                let lead = config.attach_temporal_lead && is_temporal_expression(&chars[clause_start..i]);
                if !lead {
                    add(i, kind, BoundaryCause::Comma);
                    clause_start = i + 1;
                }
            }
        }
        i += 1;
    }
    found.into_values().collect()
}

/// Cuts `text` after the selected boundaries. Punctuation stays with the
/// preceding piece, a conjunction with the following one.
pub fn split(text: &str, config: &SegmenterConfig, policy: SplitPolicy) -> Vec<String> {
    let cuts: Vec<usize> = propose_boundaries(text, config)
        .into_iter()
        .filter(|b| policy == SplitPolicy::All || b.kind == BoundaryKind::Hard)
        .map(|b| b.position + 1)
        .collect();
    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    let mut current = String::new();
    let mut next_cut = cuts.iter().peekable();
    for (idx, c) in text.chars().enumerate() {
        if next_cut.peek() == Some(&&idx) {
            next_cut.next();
            if !current.is_empty() {
                pieces.push(std::mem::take(&mut current));
            }
        }
        current.push(c);
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces
}
