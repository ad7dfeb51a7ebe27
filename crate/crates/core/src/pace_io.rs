//! PACE 2023 instance (`.gr`) and solution formats.
//!
//! Instances: `c` comment lines, one `p tww <n> <m>` header, then `m` lines
//! `<u> <v>` with 1-based labels. Solutions: `n - 1` lines
//! `<survivor> <removed>`. Input tolerates blank lines, tabs and CRLF; output
//! is always single-space separated with `\n` line ends.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::io::Read;

use thiserror::Error;

use crate::sequence::ContractionSequence;
use crate::trigraph::{ContractionPair, Trigraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub source_name: Option<String>,
}

impl Instance {
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Self {
        Instance {
            n,
            edges,
            source_name: None,
        }
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Black-only trigraph of the instance.
    pub fn trigraph(&self) -> Trigraph {
        Trigraph::from_graph(self.n, &self.edges).expect("instance invariants hold")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `p tww <n> <m>` header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("instance must have at least one vertex")]
    NoVertices,
    #[error("expected {expected} lines, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("expected two integer labels, got `{0}`")]
    BadLine(String),
    #[error("label {label} outside 1..={n}")]
    OutOfRange { label: u64, n: usize },
    #[error("self-loop on {0}")]
    SelfLoop(u32),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(u32, u32),
    #[error("read failed: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; for count mismatches at end of input this is the
    /// last line of the text.
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

pub fn read_instance<R: Read>(mut reader: R) -> Result<Instance, ParseError> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| ParseError::at(0, ParseErrorKind::Io(e.to_string())))?;
    parse_instance(&text)
}

fn parse_pair(line: &str, n: usize) -> Result<(u32, u32), ParseErrorKind> {
    let mut tokens = line.split_ascii_whitespace();
    let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
        return Err(ParseErrorKind::BadLine(line.trim().to_string()));
    };
    let parse = |t: &str| -> Result<u32, ParseErrorKind> {
        let label: u64 = t.parse().map_err(|_| ParseErrorKind::BadLine(line.trim().to_string()))?;
        if label == 0 || label > n as u64 {
            return Err(ParseErrorKind::OutOfRange { label, n });
        }
        Ok(label as u32)
    };
    Ok((parse(a)?, parse(b)?))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let Some((n, m)) = header else {
            header = Some(parse_header(trimmed).map_err(|k| ParseError::at(lineno, k))?);
            continue;
        };
        if edges.len() == m {
            return Err(ParseError::at(
                lineno,
                ParseErrorKind::CountMismatch {
                    expected: m,
                    found: m + 1,
                },
            ));
        }
        let (u, v) = parse_pair(trimmed, n).map_err(|k| ParseError::at(lineno, k))?;
        if u == v {
            return Err(ParseError::at(lineno, ParseErrorKind::SelfLoop(u)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::at(lineno, ParseErrorKind::DuplicateEdge(u, v)));
        }
        edges.push((u, v));
    }

    let Some((n, m)) = header else {
        return Err(ParseError::at(last_line.max(1), ParseErrorKind::MissingHeader));
    };
    if edges.len() != m {
        return Err(ParseError::at(
            last_line,
            ParseErrorKind::CountMismatch {
                expected: m,
                found: edges.len(),
            },
        ));
    }
    Ok(Instance::new(n, edges))
}

fn parse_header(line: &str) -> Result<(usize, usize), ParseErrorKind> {
    let tokens: Vec<&str> = line.split_ascii_whitespace().collect();
    match tokens.as_slice() {
        ["p", "tww", n, m] => {
            let n: usize = n.parse().map_err(|_| ParseErrorKind::MalformedHeader(line.to_string()))?;
            let m: usize = m.parse().map_err(|_| ParseErrorKind::MalformedHeader(line.to_string()))?;
            if n == 0 {
                return Err(ParseErrorKind::NoVertices);
            }
            if n > u32::MAX as usize {
                return Err(ParseErrorKind::MalformedHeader(line.to_string()));
            }
            Ok((n, m))
        }
        ["p", ..] => Err(ParseErrorKind::MalformedHeader(line.to_string())),
        _ => Err(ParseErrorKind::MissingHeader),
    }
}

/// Canonical `.gr` text: header then edges in stored order.
pub fn render_instance(inst: &Instance) -> String {
    let mut out = String::with_capacity(16 + inst.edges.len() * 8);
    let _ = writeln!(out, "p tww {} {}", inst.n, inst.edges.len());
    for &(u, v) in &inst.edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn render_sequence(seq: &ContractionSequence) -> String {
    let mut out = String::with_capacity(seq.len() * 8);
    for p in seq {
        let _ = writeln!(out, "{} {}", p.survivor, p.removed);
    }
    out
}

/// Writes the sequence with a single `write_all`, so an interrupted process
/// never leaves a torn line behind.
pub fn write_sequence<W: std::io::Write>(w: &mut W, seq: &ContractionSequence) -> std::io::Result<()> {
    w.write_all(render_sequence(seq).as_bytes())?;
    w.flush()
}

pub fn parse_sequence(text: &str, n: usize) -> Result<ContractionSequence, ParseError> {
    let mut seq = ContractionSequence::new();
    let expected = n.saturating_sub(1);
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if seq.len() == expected {
            return Err(ParseError::at(
                lineno,
                ParseErrorKind::CountMismatch {
                    expected,
                    found: expected + 1,
                },
            ));
        }
        let (x, y) = parse_pair(trimmed, n).map_err(|k| ParseError::at(lineno, k))?;
        seq.push(ContractionPair::new(x, y));
    }
    if seq.len() != expected {
        return Err(ParseError::at(
            last_line,
            ParseErrorKind::CountMismatch {
                expected,
                found: seq.len(),
            },
        ));
    }
    Ok(seq)
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_instance(self))
    }
}
