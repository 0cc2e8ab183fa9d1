//! Corpus statistics and inter-annotator agreement.
//!
//! Two annotations of the same segmented source are aligned unit by unit (the
//! unit texts must be identical). Span agreement uses a deterministic greedy
//! matcher: elements of `a` are visited left to right and each takes the first
//! unused element of `b` that satisfies the match criterion. `b` plays the
//! prediction, `a` the reference. Character agreement is Cohen's kappa over
//! one label per codepoint (the element kind, or `O`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, AddAssign};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::model::{Document, Element, ElementForm, ElementType, LabelingUnit, PredicatePattern, Span};

// ---------------------------------------------------------------------------
// Statistics

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsReport {
    pub units: usize,
    pub elements: usize,
    /// Units containing a UNC element.
    pub unc_units: usize,
    pub by_kind: BTreeMap<ElementType, usize>,
    pub by_pattern: BTreeMap<PredicatePattern, usize>,
    pub by_form: BTreeMap<ElementForm, usize>,
    /// Counts per full tag, e.g. `SUB-W`.
    pub by_tag: BTreeMap<String, usize>,
    /// Unit length in codepoints → number of units.
    pub unit_length: BTreeMap<usize, usize>,
    /// Element count → number of units.
    pub elements_per_unit: BTreeMap<usize, usize>,
}

impl StatsReport {
    pub fn kind(&self, kind: ElementType) -> usize {
        self.by_kind.get(&kind).copied().unwrap_or(0)
    }

    pub fn pattern(&self, pattern: PredicatePattern) -> usize {
        self.by_pattern.get(&pattern).copied().unwrap_or(0)
    }

    pub fn form(&self, form: ElementForm) -> usize {
        self.by_form.get(&form).copied().unwrap_or(0)
    }

    pub fn tag(&self, tag: &str) -> usize {
        self.by_tag.get(tag).copied().unwrap_or(0)
    }

    fn add_unit(&mut self, unit: &LabelingUnit) {
        self.units += 1;
        self.elements += unit.elements().len();
        if unit.elements().iter().any(|e| e.kind() == ElementType::Unc) {
            self.unc_units += 1;
        }
        for e in unit.elements() {
            *self.by_kind.entry(e.kind()).or_default() += 1;
            if let Some(p) = e.pattern() {
                *self.by_pattern.entry(p).or_default() += 1;
            }
            if let Some(f) = e.form() {
                *self.by_form.entry(f).or_default() += 1;
            }
            *self.by_tag.entry(e.tag().to_string()).or_default() += 1;
        }
        *self.unit_length.entry(unit.char_len()).or_default() += 1;
        *self.elements_per_unit.entry(unit.elements().len()).or_default() += 1;
    }

    /// Structured form with every kind, pattern and form listed (zeros
    /// included) so that records from different corpora line up.
    pub fn to_record(&self) -> Value {
        let kinds: Map<String, Value> =
            ElementType::ALL.iter().map(|k| (k.as_str().to_string(), json!(self.kind(*k)))).collect();
        let patterns: Map<String, Value> =
            PredicatePattern::ALL.iter().map(|p| (p.code().to_string(), json!(self.pattern(*p)))).collect();
        let forms: Map<String, Value> =
            ElementForm::ALL.iter().map(|f| (f.code().to_string(), json!(self.form(*f)))).collect();
        let hist = |m: &BTreeMap<usize, usize>| -> Map<String, Value> {
            m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()
        };
        json!({
            "units": self.units,
            "elements": self.elements,
            "unc_units": self.unc_units,
            "kinds": kinds,
            "patterns": patterns,
            "forms": forms,
            "tags": self.by_tag,
            "unit_length": hist(&self.unit_length),
            "elements_per_unit": hist(&self.elements_per_unit),
        })
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "units\t{}", self.units);
        let _ = writeln!(out, "elements\t{}", self.elements);
        let _ = writeln!(out, "unc_units\t{}", self.unc_units);
        out.push_str("\nkind\tcount\n");
        for k in ElementType::ALL {
            let _ = writeln!(out, "{k}\t{}", self.kind(k));
        }
        out.push_str("\npattern\tcount\n");
        for p in PredicatePattern::ALL {
            let _ = writeln!(out, "PRE-{}\t{}", p.code(), self.pattern(p));
        }
        out.push_str("\nform\tcount\n");
        for f in ElementForm::ALL {
            let _ = writeln!(out, "{}\t{}", f.code(), self.form(f));
        }
        out.push_str("\ntag\tcount\n");
        for (t, n) in &self.by_tag {
            let _ = writeln!(out, "{t}\t{n}");
        }
        out.push_str("\nunit_length\tunits\n");
        for (l, n) in &self.unit_length {
            let _ = writeln!(out, "{l}\t{n}");
        }
        out.push_str("\nelements_per_unit\tunits\n");
        for (l, n) in &self.elements_per_unit {
            let _ = writeln!(out, "{l}\t{n}");
        }
        out
    }
}

fn merge<K: Ord + Clone>(into: &mut BTreeMap<K, usize>, from: &BTreeMap<K, usize>) {
    for (k, v) in from {
        *into.entry(k.clone()).or_default() += v;
    }
}

impl AddAssign<&StatsReport> for StatsReport {
    fn add_assign(&mut self, rhs: &StatsReport) {
        self.units += rhs.units;
        self.elements += rhs.elements;
        self.unc_units += rhs.unc_units;
        merge(&mut self.by_kind, &rhs.by_kind);
        merge(&mut self.by_pattern, &rhs.by_pattern);
        merge(&mut self.by_form, &rhs.by_form);
        merge(&mut self.by_tag, &rhs.by_tag);
        merge(&mut self.unit_length, &rhs.unit_length);
        merge(&mut self.elements_per_unit, &rhs.elements_per_unit);
    }
}

impl Add for StatsReport {
    type Output = StatsReport;

    fn add(mut self, rhs: StatsReport) -> StatsReport {
        self += &rhs;
        self
    }
}

pub fn corpus_stats<'a>(docs: impl IntoIterator<Item = &'a Document>) -> StatsReport {
    let mut report = StatsReport::default();
    for doc in docs {
        for unit in &doc.units {
            report.add_unit(unit);
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Agreement

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgreementError {
    #[error("AGR001 unit text mismatch at index {index}")]
    TextMismatch { index: usize },
    #[error("AGR002 unit count mismatch: {a} vs {b}")]
    UnitCount { a: usize, b: usize },
}

impl AgreementError {
    pub fn code(&self) -> &'static str {
        match self {
            AgreementError::TextMismatch { .. } => "AGR001",
            AgreementError::UnitCount { .. } => "AGR002",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MatchCriterion {
    /// Same span, kind and subtag.
    #[default]
    Exact,
    /// Same span and kind.
    TypeOnly,
    /// Same kind and overlapping anchors; the anchor is the body head when
    /// present, otherwise the whole element.
    HeadOverlap,
}

impl MatchCriterion {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchCriterion::Exact => "exact",
            MatchCriterion::TypeOnly => "type_only",
            MatchCriterion::HeadOverlap => "head_overlap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AgreementConfig {
    pub criterion: MatchCriterion,
    /// Compare RAI elements as COM.
    pub normalize_rai: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchCounts {
    pub matched: usize,
    pub only_a: usize,
    pub only_b: usize,
}

impl MatchCounts {
    pub fn precision(&self) -> f64 {
        ratio(self.matched, self.matched + self.only_b)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.matched, self.matched + self.only_a)
    }

    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub fn f1(&self) -> f64 {
        f1(self.precision(), self.recall())
    }

    fn swapped(self) -> Self {
        MatchCounts { matched: self.matched, only_a: self.only_b, only_b: self.only_a }
    }
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpanAgreement {
    pub criterion: MatchCriterion,
    pub per_kind: BTreeMap<ElementType, MatchCounts>,
    pub micro: MatchCounts,
}

impl SpanAgreement {
    /// Same report with the roles of `a` and `b` exchanged.
    pub fn swapped(&self) -> SpanAgreement {
        SpanAgreement {
            criterion: self.criterion,
            per_kind: self.per_kind.iter().map(|(k, c)| (*k, c.swapped())).collect(),
            micro: self.micro.swapped(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub span: SpanAgreement,
    pub normalize_rai: bool,
    /// `None` when chance agreement is 1 (or there are no characters), where
    /// kappa is undefined.
    pub kappa: Option<f64>,
}

fn check_alignment(a: &Document, b: &Document) -> Result<(), AgreementError> {
    if a.units.len() != b.units.len() {
        return Err(AgreementError::UnitCount { a: a.units.len(), b: b.units.len() });
    }
    if let Some(index) = a.units.iter().zip(&b.units).position(|(x, y)| x.text() != y.text()) {
        return Err(AgreementError::TextMismatch { index });
    }
    Ok(())
}

fn normalized(kind: ElementType, normalize_rai: bool) -> ElementType {
    if normalize_rai && kind == ElementType::Rai {
        ElementType::Com
    } else {
        kind
    }
}

fn anchor(e: &Element) -> Span {
    e.body().head().unwrap_or_else(|| e.span())
}

fn matches(x: &Element, y: &Element, config: &AgreementConfig) -> bool {
    let kx = normalized(x.kind(), config.normalize_rai);
    let ky = normalized(y.kind(), config.normalize_rai);
    if kx != ky {
        return false;
    }
    match config.criterion {
        MatchCriterion::Exact => x.span() == y.span() && x.tag().sub() == y.tag().sub(),
        MatchCriterion::TypeOnly => x.span() == y.span(),
        MatchCriterion::HeadOverlap => anchor(x).overlaps(&anchor(y)),
    }
}

/// Greedy left-to-right matching inside one unit. Returns, for each element
/// of `a`, the index of its partner in `b`.
pub fn greedy_match(a: &[Element], b: &[Element], config: &AgreementConfig) -> Vec<Option<usize>> {
    let mut used = vec![false; b.len()];
    a.iter()
        .map(|x| {
            let j = b.iter().enumerate().position(|(j, y)| !used[j] && matches(x, y, config))?;
            used[j] = true;
            Some(j)
        })
        .collect()
}

pub fn span_agreement(a: &Document, b: &Document, config: &AgreementConfig) -> Result<SpanAgreement, AgreementError> {
    check_alignment(a, b)?;
    let mut report = SpanAgreement { criterion: config.criterion, ..Default::default() };
    for (ua, ub) in a.units.iter().zip(&b.units) {
        let pairs = greedy_match(ua.elements(), ub.elements(), config);
        let mut b_used = vec![false; ub.elements().len()];
        for (x, partner) in ua.elements().iter().zip(&pairs) {
            let counts = report.per_kind.entry(normalized(x.kind(), config.normalize_rai)).or_default();
            match partner {
                Some(j) => {
                    b_used[*j] = true;
                    counts.matched += 1;
                    report.micro.matched += 1;
                }
                None => {
                    counts.only_a += 1;
                    report.micro.only_a += 1;
                }
            }
        }
        for (y, used) in ub.elements().iter().zip(b_used) {
            if !used {
                report.per_kind.entry(normalized(y.kind(), config.normalize_rai)).or_default().only_b += 1;
                report.micro.only_b += 1;
            }
        }
    }
    Ok(report)
}

fn char_labels(unit: &LabelingUnit, normalize_rai: bool) -> Vec<Option<ElementType>> {
    let mut labels = vec![None; unit.char_len()];
    for e in unit.elements() {
        let s = e.span();
        for l in &mut labels[s.start()..s.end()] {
            *l = Some(normalized(e.kind(), normalize_rai));
        }
    }
    labels
}

fn label_index(l: Option<ElementType>) -> usize {
    match l {
        None => 0,
        Some(k) => 1 + k as usize,
    }
}

/// Cohen's kappa over per-codepoint labels, pooled across all units.
///
/// Computed from integer counts: with `n` characters, `agree` agreeing
/// positions and per-label marginals `ca`, `cb`,
/// `kappa = (n·agree − Σ ca·cb) / (n² − Σ ca·cb)`.
pub fn char_kappa(a: &Document, b: &Document, normalize_rai: bool) -> Result<Option<f64>, AgreementError> {
    check_alignment(a, b)?;
    const LABELS: usize = ElementType::ALL.len() + 1;
    let mut ca = [0u128; LABELS];
    let mut cb = [0u128; LABELS];
    let mut n: u128 = 0;
    let mut agree: u128 = 0;
    for (ua, ub) in a.units.iter().zip(&b.units) {
        for (x, y) in char_labels(ua, normalize_rai).into_iter().zip(char_labels(ub, normalize_rai)) {
            n += 1;
            ca[label_index(x)] += 1;
            cb[label_index(y)] += 1;
            if x == y {
                agree += 1;
            }
        }
    }
    let chance: u128 = ca.iter().zip(&cb).map(|(x, y)| x * y).sum();
    let total = n * n;
    if n == 0 || chance == total {
        return Ok(None);
    }
    if agree == n {
        return Ok(Some(1.0));
    }
    let num = (n * agree) as f64 - chance as f64;
    Ok(Some(num / (total - chance) as f64))
}

pub fn agree(a: &Document, b: &Document, config: &AgreementConfig) -> Result<AgreementReport, AgreementError> {
    Ok(AgreementReport {
        span: span_agreement(a, b, config)?,
        normalize_rai: config.normalize_rai,
        kappa: char_kappa(a, b, config.normalize_rai)?,
    })
}

impl AgreementReport {
    pub fn precision(&self) -> f64 {
        self.span.micro.precision()
    }

    pub fn recall(&self) -> f64 {
        self.span.micro.recall()
    }

    pub fn f1(&self) -> f64 {
        self.span.micro.f1()
    }

    pub fn to_record(&self) -> Value {
        let counts = |c: &MatchCounts| {
            json!({
                "matched": c.matched,
                "only_a": c.only_a,
                "only_b": c.only_b,
                "precision": c.precision(),
                "recall": c.recall(),
                "f1": c.f1(),
            })
        };
        let per_kind: Map<String, Value> =
            self.span.per_kind.iter().map(|(k, c)| (k.as_str().to_string(), counts(c))).collect();
        json!({
            "criterion": self.span.criterion.as_str(),
            "normalize_rai": self.normalize_rai,
            "micro": counts(&self.span.micro),
            "per_kind": per_kind,
            "kappa": self.kappa,
        })
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "criterion\t{}", self.span.criterion.as_str());
        if self.normalize_rai {
            out.push_str("normalize_rai\tyes\n");
        }
        out.push_str("kind\tmatched\tonly_a\tonly_b\tprecision\trecall\tf1\n");
        let row = |out: &mut String, name: &str, c: &MatchCounts| {
            let _ = writeln!(
                out,
                "{name}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}",
                c.matched,
                c.only_a,
                c.only_b,
                c.precision(),
                c.recall(),
                c.f1()
            );
        };
        for (k, c) in &self.span.per_kind {
            row(&mut out, k.as_str(), c);
        }
        row(&mut out, "micro", &self.span.micro);
        match self.kappa {
            Some(k) => {
                let _ = writeln!(out, "kappa\t{k:.4}");
            }
            None => out.push_str("kappa\tundefined\n"),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inline::parse_document;

    fn doc(src: &str) -> Document {
        let p = parse_document(src);
        assert!(p.is_clean(), "{:?}", p.diagnostics);
        p.document
    }

    /// Independent route: full confusion matrix over string labels, floats.
    fn brute_kappa(a: &[&str], b: &[&str]) -> f64 {
        let labels: Vec<&str> = {
            let mut v: Vec<&str> = a.iter().chain(b).copied().collect();
            v.sort();
            v.dedup();
            v
        };
        let n = a.len() as f64;
        let mut matrix = vec![vec![0.0; labels.len()]; labels.len()];
        for (x, y) in a.iter().zip(b) {
            let i = labels.iter().position(|l| l == x).unwrap();
            let j = labels.iter().position(|l| l == y).unwrap();
            matrix[i][j] += 1.0;
        }
        let po: f64 = (0..labels.len()).map(|i| matrix[i][i]).sum::<f64>() / n;
        let pe: f64 = (0..labels.len())
            .map(|i| {
                let row: f64 = matrix[i].iter().sum();
                let col: f64 = matrix.iter().map(|r| r[i]).sum();
                (row / n) * (col / n)
            })
            .sum();
        (po - pe) / (1.0 - pe)
    }

    #[test]
    fn worked_kappa_example() {
        let a = doc("[PRE-S 一二三]四五六\n");
        let b = doc("[PRE-S 一二]三四五六\n");
        let k = char_kappa(&a, &b, false).unwrap().unwrap();
        let oracle = brute_kappa(&["PRE", "PRE", "PRE", "O", "O", "O"], &["PRE", "PRE", "O", "O", "O", "O"]);
        assert!((oracle - 2.0 / 3.0).abs() < 1e-12);
        assert!((k - oracle).abs() < 1e-12);
    }

    #[test]
    fn degenerate_kappa() {
        let a = doc("一二三\n");
        assert_eq!(char_kappa(&a, &a, false).unwrap(), None);
        assert_eq!(char_kappa(&Document::default(), &Document::default(), false).unwrap(), None);
        let a = doc("[PRE-S 一]二三\n");
        assert_eq!(char_kappa(&a, &a, false).unwrap(), Some(1.0));
    }

    #[test]
    fn worked_span_example() {
        let a = doc("[PRE-S 一二三][COM-W 四五六]\n");
        let b = doc("[PRE-S 一二三]四五六\n");
        let r = span_agreement(&a, &b, &AgreementConfig::default()).unwrap();
        assert_eq!(r.micro, MatchCounts { matched: 1, only_a: 1, only_b: 0 });
        assert_eq!(r.micro.precision(), 1.0);
        assert_eq!(r.micro.recall(), 0.5);
        assert!((r.micro.f1() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn criteria() {
        let a = doc("[PRE-S 一二三]\n");
        let b = doc("[PRE-M 一(二)三]\n");
        let exact = AgreementConfig { criterion: MatchCriterion::Exact, normalize_rai: false };
        let typed = AgreementConfig { criterion: MatchCriterion::TypeOnly, normalize_rai: false };
        assert_eq!(span_agreement(&a, &b, &exact).unwrap().micro.matched, 0);
        assert_eq!(span_agreement(&a, &b, &typed).unwrap().micro.matched, 1);

        let head = AgreementConfig { criterion: MatchCriterion::HeadOverlap, normalize_rai: false };
        let a = doc("[COM-W 一个(苹果)]\n");
        let b = doc("[COM-W 一个苹(果)]\n");
        assert_eq!(span_agreement(&a, &b, &head).unwrap().micro.matched, 1);
        assert_eq!(span_agreement(&a, &b, &typed).unwrap().micro.matched, 1);
        let b = doc("[COM-W (一)个苹果]\n");
        assert_eq!(span_agreement(&a, &b, &head).unwrap().micro.matched, 0);
    }

    #[test]
    fn rai_normalization() {
        let a = doc("[RAI-W 你]\n");
        let b = doc("[COM-W 你]\n");
        let plain = AgreementConfig::default();
        let norm = AgreementConfig { normalize_rai: true, ..plain };
        assert_eq!(span_agreement(&a, &b, &plain).unwrap().micro.matched, 0);
        assert_eq!(span_agreement(&a, &b, &norm).unwrap().micro.matched, 1);
        assert_eq!(char_kappa(&a, &b, true).unwrap(), None);
    }

    #[test]
    fn greedy_is_injective() {
        let a = doc("[COM-W 一(二)三][COM-W 四]\n");
        let b = doc("[COM-W (一)二三四]\n");
        let head = AgreementConfig { criterion: MatchCriterion::HeadOverlap, normalize_rai: false };
        let pairs = greedy_match(a.units[0].elements(), b.units[0].elements(), &head);
        assert_eq!(pairs, vec![None, None]);
        let b = doc("[COM-W 一(二三四)]\n");
        let pairs = greedy_match(a.units[0].elements(), b.units[0].elements(), &head);
        // Only one partner exists, so at most one a-element can claim it.
        assert_eq!(pairs, vec![Some(0), None]);
    }

    #[test]
    fn alignment_errors() {
        let a = doc("一二\n");
        let b = doc("一三\n");
        assert_eq!(agree(&a, &b, &AgreementConfig::default()).unwrap_err().code(), "AGR001");
        let c = doc("一二\n三\n");
        assert_eq!(agree(&a, &c, &AgreementConfig::default()).unwrap_err().code(), "AGR002");
    }

    #[test]
    fn stats_counts_and_additivity() {
        let a = doc("[SUB-W 我][PRE-M 可以(吃)掉][COM-W 这个(苹果)]\n[UNC 无法处理]\n");
        let s = corpus_stats([&a]);
        assert_eq!(s.units, 2);
        assert_eq!(s.elements, 4);
        assert_eq!(s.unc_units, 1);
        assert_eq!(s.kind(ElementType::Sub), 1);
        assert_eq!(s.pattern(PredicatePattern::Modified), 1);
        assert_eq!(s.form(ElementForm::Word), 2);
        assert_eq!(s.tag("COM-W"), 1);
        assert_eq!(s.unit_length.get(&9), Some(&1));
        assert_eq!(s.elements_per_unit.get(&1), Some(&1));
        let b = doc("[PRE-S 跑]\n");
        assert_eq!(corpus_stats([&a, &b]), corpus_stats([&a]) + corpus_stats([&b]));
        assert_eq!(corpus_stats(std::iter::empty::<&Document>()), StatsReport::default());
    }
}
