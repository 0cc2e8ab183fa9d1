//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use predhead::convert::{from_columns, from_standoff_str, to_columns, to_standoff_line};
use predhead::metrics::{agree, char_kappa, corpus_stats, AgreementConfig, MatchCriterion};
use predhead::segment::{split, SegmenterConfig, SplitPolicy};
use predhead::validate::{validate_document, validate_unit, Code, Severity};
use predhead::{
    emit_document, parse_document, Document, Element, ElementType, LabelingUnit, PredicatePattern, Segment, Span,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const GOLDEN: &str = include_str!("../../core/testdata/golden.ann");
const RUNNING: &str = include_str!("../../core/testdata/running_example.txt");
const UNITS: &str = include_str!("../../core/testdata/units.txt");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn golden() -> Document {
    parse_document(GOLDEN).document
}

fn golden_fidelity() -> Outcome {
    let parsed = parse_document(GOLDEN);
    ensure!(parsed.is_clean(), "parse diagnostics: {:?}", parsed.diagnostics);
    ensure!(parsed.document.units.len() == 10, "{} units", parsed.document.units.len());
    let diags = validate_document(&parsed.document);
    let rai = parsed.document.units.iter().flat_map(|u| u.elements()).filter(|e| e.kind() == ElementType::Rai).count();
    ensure!(diags.iter().all(|d| d.code == Code::LegacyRai), "unexpected findings: {diags:?}");
    ensure!(diags.len() == rai, "{} W020 for {rai} RAI elements", diags.len());
    ensure!(!diags.iter().any(|d| d.severity() == Severity::Error), "errors present");
    ensure!(emit_document(&parsed.document) == GOLDEN, "emit differs from source");
    Ok(format!("10 units, 0 parse diagnostics, {rai} W020, byte-exact re-emit"))
}

fn golden_stats() -> Outcome {
    let expected: [(&str, usize); 8] =
        [("S", 5), ("M", 5), ("SUB-W", 5), ("TEM-W", 1), ("ADV-P", 6), ("LOC-W", 1), ("COM", 8), ("RAI-W", 1)];
    let s = corpus_stats([&golden()]);
    let lib = |k: &str| match k {
        "S" => s.pattern(PredicatePattern::Singleton),
        "M" => s.pattern(PredicatePattern::Modified),
        "COM" => s.kind(ElementType::Com),
        t => s.tag(t),
    };
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("golden.ann");
    std::fs::write(&path, GOLDEN).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_phk"))
        .args(["stats", "--format", "records"])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "phk stats exited {:?}", out.status.code());
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let cli = |k: &str| -> usize {
        let v = match k {
            "S" | "M" => &rec["patterns"][k],
            "COM" => &rec["kinds"][k],
            t => &rec["tags"][t],
        };
        v.as_u64().unwrap_or(u64::MAX) as usize
    };
    for (k, want) in expected {
        ensure!(lib(k) == want, "library {k} = {} (want {want})", lib(k));
        ensure!(cli(k) == want, "phk stats {k} = {} (want {want})", cli(k));
    }
    Ok("S=5 M=5 SUB-W=5 TEM-W=1 ADV-P=6 LOC-W=1 COM=8 RAI-W=1 (library and CLI)".into())
}

fn round_trips() -> Outcome {
    const N: u64 = 1000;
    let mut elements = 0;
    for seed in 0..N {
        let doc = common::random_document(&mut StdRng::seed_from_u64(seed), 8, 16);
        elements += doc.element_count();
        let text = emit_document(&doc);
        let parsed = parse_document(&text);
        ensure!(parsed.is_clean() && parsed.document == doc, "inline round trip failed for seed {seed}");
        ensure!(emit_document(&parsed.document) == text, "inline re-emit differs for seed {seed}");
        let back = from_standoff_str(&to_standoff_line(&doc)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(back == vec![doc.clone()], "standoff round trip failed for seed {seed}");
        let back = from_columns(&to_columns(&doc)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(back == doc, "columns round trip failed for seed {seed}");
    }
    Ok(format!("{N} documents ({elements} elements), 0 failures"))
}

fn shifted_copy(unit: &LabelingUnit, e: &Element) -> LabelingUnit {
    let s = e.span();
    let shift = |sp: Span| Span::new(sp.start() - s.start(), sp.end() - s.start()).unwrap();
    let body = Segment::new(shift(e.body().span()), e.body().head().map(shift)).unwrap();
    let trigger = e.trigger().map(|t| Segment::new(shift(t.span()), t.head().map(shift)).unwrap());
    let copy = Element::new(e.tag(), trigger, body).unwrap();
    LabelingUnit::new(unit.element_surface(e).unwrap(), vec![copy]).unwrap()
}

fn has(unit: &LabelingUnit, code: Code) -> bool {
    validate_unit(unit, 0).iter().any(|d| d.code == code)
}

fn mutation_suite() -> Outcome {
    let (mut cases, mut detected) = (0, 0);
    for unit in &golden().units {
        let pre = unit.elements().iter().find(|e| e.kind() == ElementType::Pre).unwrap();
        cases += 2;
        detected += usize::from(has(&unit.concat(&shifted_copy(unit, pre)), Code::PredicateCount));
        let without: Vec<Element> = unit.elements().iter().filter(|e| e.kind() != ElementType::Pre).cloned().collect();
        detected += usize::from(has(&unit.with_elements(without).unwrap(), Code::PredicateCount));
        for (i, e) in unit.elements().iter().enumerate() {
            if e.pattern() == Some(PredicatePattern::Modified) {
                let mut els = unit.elements().to_vec();
                els[i] = Element::new(e.tag(), e.trigger(), Segment::plain(e.body().span())).unwrap();
                cases += 1;
                detected += usize::from(has(&unit.with_elements(els).unwrap(), Code::ModifiedWithoutHead));
            }
        }
    }
    ensure!(detected == cases, "detected {detected}/{cases}");
    Ok(format!("{detected}/{cases} mutations detected"))
}

fn brute_kappa(a: &[&str], b: &[&str]) -> f64 {
    let n = a.len() as f64;
    let mut m: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *m.entry((*x, *y)).or_default() += 1.0;
    }
    let mut cats: Vec<&str> = a.iter().chain(b).copied().collect();
    cats.sort();
    cats.dedup();
    let po: f64 = cats.iter().map(|c| m.get(&(*c, *c)).copied().unwrap_or(0.0)).sum::<f64>() / n;
    let pe: f64 = cats
        .iter()
        .map(|c| {
            let row: f64 = m.iter().filter(|((x, _), _)| x == c).map(|(_, v)| v).sum();
            let col: f64 = m.iter().filter(|((_, y), _)| y == c).map(|(_, v)| v).sum();
            row / n * col / n
        })
        .sum();
    (po - pe) / (1.0 - pe)
}

fn perturb(doc: &Document, r: &mut StdRng) -> Document {
    let mut out = Document::new(doc.id.clone());
    for unit in &doc.units {
        let mut els = Vec::new();
        for e in unit.elements() {
            if r.gen_bool(0.2) {
                continue;
            }
            els.push(if r.gen_bool(0.3) { e.retagged(common::random_tag(r)) } else { *e });
        }
        out.units.push(unit.with_elements(els).unwrap());
    }
    out
}

fn agreement() -> Outcome {
    let g = golden();
    for criterion in [MatchCriterion::Exact, MatchCriterion::TypeOnly, MatchCriterion::HeadOverlap] {
        let r = agree(&g, &g, &AgreementConfig { criterion, normalize_rai: false }).map_err(|e| e.to_string())?;
        ensure!(r.precision() == 1.0 && r.recall() == 1.0 && r.f1() == 1.0, "self P/R/F1 not 1 under {criterion:?}");
        ensure!(
            r.span.per_kind.values().all(|c| c.precision() == 1.0 && c.recall() == 1.0 && c.f1() == 1.0),
            "per-kind self agreement not 1 under {criterion:?}"
        );
        ensure!(r.kappa == Some(1.0), "self kappa {:?}", r.kappa);
    }

    let a = parse_document("[PRE-S 一二三]四五六\n").document;
    let b = parse_document("[PRE-S 一二]三四五六\n").document;
    let k = char_kappa(&a, &b, false).map_err(|e| e.to_string())?.ok_or("kappa undefined")?;
    let oracle = brute_kappa(&["PRE", "PRE", "PRE", "O", "O", "O"], &["PRE", "PRE", "O", "O", "O", "O"]);
    ensure!((k - oracle).abs() < 1e-12, "kappa {k} vs oracle {oracle}");
    ensure!((k - 2.0 / 3.0).abs() < 1e-12, "kappa {k} vs 2/3");

    let mut r = StdRng::seed_from_u64(0x5eed);
    for i in 0..100 {
        let x = common::random_document(&mut r, 6, 14);
        let y = perturb(&x, &mut r);
        let criterion = [MatchCriterion::Exact, MatchCriterion::TypeOnly, MatchCriterion::HeadOverlap][i % 3];
        let cfg = AgreementConfig { criterion, normalize_rai: i % 2 == 0 };
        let xy = agree(&x, &y, &cfg).map_err(|e| e.to_string())?;
        let yx = agree(&y, &x, &cfg).map_err(|e| e.to_string())?;
        ensure!(xy.precision() == yx.recall() && xy.recall() == yx.precision(), "P/R not swapped on pair {i}");
        ensure!(xy.f1() == yx.f1(), "F1 changed on pair {i}");
        ensure!(xy.kappa == yx.kappa, "kappa changed on pair {i}");
    }
    Ok(format!("self-agreement exact; kappa {k:.15} (oracle {oracle:.15}); 100 swapped pairs symmetric"))
}

fn segmenter_partition() -> Outcome {
    const CJK: &[char] = &[
        '我', '他', '们', '去', '了', '年', '月', '日', '凌', '晨', '时', '许', '并', '且', '和', '而', '然', '后',
        '但', '是', '1', '9', '。', '；', '！', '？', '，', '、', '”', '』', '」', '“', '（', '）', ' ',
    ];
    let cfg = SegmenterConfig::default();
    let mut r = StdRng::seed_from_u64(7);
    for i in 0..1000 {
        let len = r.gen_range(0..120);
        let text: String = (0..len).map(|_| CJK[r.gen_range(0..CJK.len())]).collect();
        for policy in [SplitPolicy::All, SplitPolicy::HardOnly] {
            let pieces = split(&text, &cfg, policy);
            ensure!(pieces.concat() == text, "string {i} not reproduced under {policy:?}");
            ensure!(pieces.iter().all(|p| !p.is_empty()), "empty piece in string {i}");
        }
    }
    let paragraph = RUNNING.trim_end();
    let pieces = split(paragraph, &cfg, SplitPolicy::All);
    ensure!(pieces.concat() == paragraph, "running example not reproduced");
    let want: Vec<&str> = UNITS.lines().collect();
    ensure!(pieces == want, "running example split into {pieces:?}");
    Ok("1000 random strings partitioned; running example yields the 10 golden units".into())
}

fn throughput() -> Outcome {
    const TARGET: usize = 10 * 1024 * 1024;
    let mut r = StdRng::seed_from_u64(42);
    let mut corpus = String::with_capacity(TARGET + 4096);
    let mut docs = 0;
    while corpus.len() < TARGET {
        if docs % 2 == 0 {
            corpus.push_str(GOLDEN);
        } else {
            corpus.push_str(&emit_document(&common::random_document(&mut r, 40, 40)));
        }
        docs += 1;
    }
    let start = Instant::now();
    let parsed = parse_document(&corpus);
    let findings = validate_document(&parsed.document).len();
    let elapsed = start.elapsed();
    ensure!(parsed.is_clean(), "synthetic corpus has parse diagnostics");
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:.2?}");
    Ok(format!(
        "{:.1} MB, {} units, {findings} findings in {elapsed:.2?}",
        corpus.len() as f64 / 1_048_576.0,
        parsed.document.units.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("golden corpus fidelity", golden_fidelity),
        ("golden statistics", golden_stats),
        ("round-trip suites", round_trips),
        ("validator mutation suite", mutation_suite),
        ("agreement oracle", agreement),
        ("segmenter partition", segmenter_partition),
        ("throughput sanity", throughput),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
