//! `phk`: batch front end for inline predicate-head annotation corpora.
//!
//! Data goes to stdout, diagnostics to stderr. Files are processed in the
//! order given and output never depends on anything but the inputs.

mod args;
mod config;
mod input;

use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use predhead::convert::{to_columns, to_standoff_line};
use predhead::metrics::{agree, corpus_stats, AgreementConfig};
use predhead::segment::{split, CommaPolicy, SegmenterConfig, SplitPolicy};
use predhead::validate::{render_text, validate_document, DiagnosticRecord, Severity};
use predhead::{emit_document, Document};

use crate::args::{
    AgreeArgs, Cli, Command, ConvertArgs, ParseArgs, ReportFormat, SegmentArgs, StatsArgs, TableFormat, Target,
    ValidateArgs,
};
use crate::config::Config;
use crate::input::{is_empty, label, load_any, load_inline, read_bytes, LoadResult};

const LEXICON_ENV: &str = "PHK_CONJ_LEXICON";

/// Worst outcome seen so far. Precedence when several occur: I/O, then
/// malformed input, then validation errors.
#[derive(Debug, Default)]
struct Status {
    io: bool,
    malformed: bool,
    errors: bool,
}

impl Status {
    fn code(&self) -> u8 {
        if self.io {
            2
        } else if self.malformed {
            3
        } else if self.errors {
            1
        } else {
            0
        }
    }

    fn io_error(&mut self, msg: impl std::fmt::Display) {
        eprintln!("phk: {msg}");
        self.io = true;
    }

    fn report(&mut self, loaded: &LoadResult) {
        for e in &loaded.errors {
            eprintln!("{e}");
        }
        self.malformed |= !loaded.errors.is_empty();
    }
}

type Out = BufWriter<io::StdoutLock<'static>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut status = Status::default();
    let config = match config::load(Path::new(".")) {
        Ok(c) => c,
        Err(e) => {
            status.io_error(e);
            return ExitCode::from(status.code());
        }
    };
    let mut out = BufWriter::new(io::stdout().lock());
    let written = match &cli.command {
        Command::Parse(a) => run_parse(a, &mut out, &mut status),
        Command::Validate(a) => run_validate(a, &config, &mut out, &mut status),
        Command::Segment(a) => run_segment(a, &config, &mut out, &mut status),
        Command::Convert(a) => run_convert(a, &mut out, &mut status),
        Command::Stats(a) => run_stats(a, &config, &mut out, &mut status),
        Command::Agree(a) => run_agree(a, &config, &mut out, &mut status),
    };
    if let Err(e) = written.and_then(|_| out.flush()) {
        status.io_error(format!("stdout: {e}"));
    }
    ExitCode::from(status.code())
}

fn load_files(files: &[PathBuf], status: &mut Status) -> Vec<(String, LoadResult)> {
    let mut all = Vec::new();
    for path in files {
        let file = label(path);
        match read_bytes(path) {
            Ok(bytes) => {
                let loaded = load_any(&file, &bytes);
                status.report(&loaded);
                all.push((file, loaded));
            }
            Err(e) => status.io_error(e),
        }
    }
    all
}

fn run_parse(args: &ParseArgs, out: &mut Out, status: &mut Status) -> io::Result<()> {
    for path in &args.files {
        let file = label(path);
        let bytes = match read_bytes(path) {
            Ok(b) => b,
            Err(e) => {
                status.io_error(e);
                continue;
            }
        };
        let loaded = load_inline(&file, &bytes);
        status.report(&loaded);
        if args.check {
            continue;
        }
        for l in loaded.docs.iter().filter(|l| !is_empty(&l.doc)) {
            writeln!(out, "{}", to_standoff_line(&l.doc))?;
        }
    }
    Ok(())
}

fn run_validate(args: &ValidateArgs, config: &Config, out: &mut Out, status: &mut Status) -> io::Result<()> {
    let strict = args.strict || config.validate.strict;
    let format = args.format.or(config.validate.format).unwrap_or(ReportFormat::Text);
    for (file, loaded) in load_files(&args.files, status) {
        for l in &loaded.docs {
            for d in validate_document(&l.doc) {
                let line = l.unit_lines.get(d.unit_index).copied().unwrap_or(0);
                status.errors |= d.effective_severity(strict) == Severity::Error;
                match format {
                    ReportFormat::Text => writeln!(out, "{}", render_text(&file, line, &d, strict))?,
                    ReportFormat::Records => {
                        let rec = DiagnosticRecord::new(&file, line, &d, strict);
                        writeln!(out, "{}", serde_json::to_string(&rec).expect("records serialize"))?
                    }
                }
            }
        }
    }
    Ok(())
}

/// Lexicon source in order of precedence: flag, config file, environment.
fn segmenter_config(args: &SegmentArgs, config: &Config, status: &mut Status) -> Option<SegmenterConfig> {
    let commas: CommaPolicy = args.commas.or(config.segment.commas).map(Into::into).unwrap_or_default();
    let lexicon = args
        .conj
        .clone()
        .or_else(|| config.segment.conj.clone())
        .or_else(|| std::env::var_os(LEXICON_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let Some(path) = lexicon else {
        let mut seg = SegmenterConfig::default();
        seg.commas = commas;
        return Some(seg);
    };
    match std::fs::read(&path).map(String::from_utf8) {
        Ok(Ok(text)) => Some(SegmenterConfig::with_lexicon_text(&text, commas)),
        Ok(Err(_)) => {
            status.io_error(format!("{}: lexicon is not valid UTF-8", path.display()));
            None
        }
        Err(e) => {
            status.io_error(format!("{}: {e}", path.display()));
            None
        }
    }
}

fn run_segment(args: &SegmentArgs, config: &Config, out: &mut Out, status: &mut Status) -> io::Result<()> {
    let Some(seg) = segmenter_config(args, config, status) else {
        return Ok(());
    };
    let bytes = match read_bytes(&args.rawfile) {
        Ok(b) => b,
        Err(e) => {
            status.io_error(e);
            return Ok(());
        }
    };
    let Ok(text) = String::from_utf8(bytes) else {
        eprintln!("{}: input is not valid UTF-8", label(&args.rawfile));
        status.malformed = true;
        return Ok(());
    };
    for line in text.split('\n') {
        let line = line.strip_suffix('\r').unwrap_or(line);
        for piece in split(line, &seg, SplitPolicy::All) {
            if !piece.trim().is_empty() {
                writeln!(out, "{piece}")?;
            }
        }
    }
    Ok(())
}

fn run_convert(args: &ConvertArgs, out: &mut Out, status: &mut Status) -> io::Result<()> {
    for (_, loaded) in load_files(&args.files, status) {
        for l in loaded.docs.iter().filter(|l| !is_empty(&l.doc)) {
            match args.to {
                Target::Inline => out.write_all(emit_document(&l.doc).as_bytes())?,
                Target::Standoff => writeln!(out, "{}", to_standoff_line(&l.doc))?,
                Target::Columns => out.write_all(to_columns(&l.doc).as_bytes())?,
            }
        }
    }
    Ok(())
}

fn run_stats(args: &StatsArgs, config: &Config, out: &mut Out, status: &mut Status) -> io::Result<()> {
    let loaded = load_files(&args.files, status);
    let report = corpus_stats(loaded.iter().flat_map(|(_, l)| l.docs.iter().map(|d| &d.doc)));
    match args.format.or(config.stats.format).unwrap_or(TableFormat::Table) {
        TableFormat::Table => out.write_all(report.render_table().as_bytes()),
        TableFormat::Records => writeln!(out, "{}", report.to_record()),
    }
}

/// All units of a file, in order, as one document.
fn flatten(loaded: Vec<(String, LoadResult)>) -> Document {
    let mut doc = Document::default();
    for (_, l) in loaded {
        for d in l.docs {
            doc.units.extend(d.doc.units);
        }
    }
    doc
}

fn run_agree(args: &AgreeArgs, config: &Config, out: &mut Out, status: &mut Status) -> io::Result<()> {
    let a = load_files(std::slice::from_ref(&args.file_a), status);
    let b = load_files(std::slice::from_ref(&args.file_b), status);
    if status.io || status.malformed {
        return Ok(());
    }
    let cfg = AgreementConfig {
        criterion: args.criterion.or(config.agree.criterion).map(Into::into).unwrap_or_default(),
        normalize_rai: args.normalize_rai || config.agree.normalize_rai,
    };
    match agree(&flatten(a), &flatten(b), &cfg) {
        Ok(report) => match args.format.or(config.agree.format).unwrap_or(TableFormat::Table) {
            TableFormat::Table => out.write_all(report.render_table().as_bytes()),
            TableFormat::Records => writeln!(out, "{}", report.to_record()),
        },
        Err(e) => {
            status.io_error(format!("{} vs {}: {e}", label(&args.file_a), label(&args.file_b)));
            Ok(())
        }
    }
}
