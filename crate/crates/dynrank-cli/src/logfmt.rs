//! Change-log and NFA file parsing.
//!
//! Logs are line oriented, UTF-8, `#` starts a comment. The first
//! operation line must be `init ...`, whose shape depends on the mode; all
//! later lines are change operations or queries. Nodes, variables and
//! matrix indices are 1-based in files and 0-based in the library.

use std::fmt;

use dynrank::{Lit, Nfa};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse { line: usize, msg: String },
    Io(String),
    Invariant { step: usize, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant { .. } => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
            CliError::Invariant { step, msg } => {
                write!(f, "invariant breach at step {step}: {msg}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Matrix,
    Reach,
    Allpairs,
    #[value(name = "2sat")]
    TwoSat,
    Rpq,
    Matching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Header {
    /// `init n m N`
    Matrix { n: usize, m: usize, max_abs: i64 },
    /// `init n s t`
    Reach { n: usize, s: usize, t: usize },
    /// `init n`
    AllPairs { n: usize },
    /// `init n`
    TwoSat { n: usize },
    /// `init n s t`
    Rpq { n: usize, s: usize, t: usize },
    /// `init n`
    Matching { n: usize },
}

/// One replayable line of a change log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChangeOp {
    SetEntry { i: usize, j: usize, value: i64 },
    InsertEdge { u: usize, v: usize },
    DeleteEdge { u: usize, v: usize },
    AddClause { a: Lit, b: Lit },
    RemoveClause { a: Lit, b: Lit },
    InsertLabeled { u: usize, label: String, v: usize },
    DeleteLabeled { u: usize, label: String, v: usize },
    AddUndirected { i: usize, j: usize },
    RemoveUndirected { i: usize, j: usize },
    QueryRank,
    QueryReach { pair: Option<(usize, usize)> },
    QuerySat,
    QueryMatch,
    QuerySize,
    QueryPerfect,
}

#[derive(Debug, Clone)]
pub struct ParsedLog {
    pub header: Header,
    /// Ops with their source line numbers, in file order.
    pub ops: Vec<(usize, ChangeOp)>,
}

fn err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, CliError> {
    tok.parse::<T>()
        .map_err(|_| err(line, format!("bad {what} `{tok}`")))
}

/// 1-based index from a token, converted to 0-based and range-checked.
fn parse_index(tok: &str, line: usize, what: &str, limit: usize) -> Result<usize, CliError> {
    let raw: usize = parse_num(tok, line, what)?;
    if raw < 1 || raw > limit {
        return Err(err(line, format!("{what} {raw} out of range 1..={limit}")));
    }
    Ok(raw - 1)
}

/// Literal token `+k` or `-k`, 1-based variable index.
fn parse_lit(tok: &str, line: usize, vars: usize) -> Result<Lit, CliError> {
    let (positive, rest) = match tok.as_bytes().first() {
        Some(b'+') => (true, &tok[1..]),
        Some(b'-') => (false, &tok[1..]),
        _ => return Err(err(line, format!("literal `{tok}` must start with + or -"))),
    };
    let var = parse_index(rest, line, "variable", vars)?;
    Ok(Lit::new(var, positive))
}

pub fn parse_log(text: &str, mode: Mode) -> Result<ParsedLog, CliError> {
    let mut header: Option<Header> = None;
    let mut ops = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if header.is_none() {
            if toks[0] != "init" {
                return Err(err(lineno, "log must start with an init line"));
            }
            header = Some(parse_header(&toks, lineno, mode)?);
            continue;
        }
        let h = header.unwrap();
        ops.push((lineno, parse_op(&toks, lineno, mode, h)?));
    }
    let header = header.ok_or(CliError::Parse {
        line: 0,
        msg: "empty log: missing init line".into(),
    })?;
    Ok(ParsedLog { header, ops })
}

fn parse_header(toks: &[&str], line: usize, mode: Mode) -> Result<Header, CliError> {
    let args = &toks[1..];
    let need = |k: usize| -> Result<(), CliError> {
        if args.len() != k {
            Err(err(line, format!("init takes {k} arguments in this mode")))
        } else {
            Ok(())
        }
    };
    match mode {
        Mode::Matrix => {
            need(3)?;
            let n = parse_num::<usize>(args[0], line, "row count")?;
            let m = parse_num::<usize>(args[1], line, "column count")?;
            let max_abs = parse_num::<i64>(args[2], line, "entry bound")?;
            if n < 1 || m < 1 || max_abs < 1 {
                return Err(err(line, "dimensions and bound must be positive"));
            }
            Ok(Header::Matrix { n, m, max_abs })
        }
        Mode::Reach | Mode::Rpq => {
            need(3)?;
            let n = parse_num::<usize>(args[0], line, "node count")?;
            if n < 1 {
                return Err(err(line, "node count must be positive"));
            }
            let s = parse_index(args[1], line, "source node", n)?;
            let t = parse_index(args[2], line, "target node", n)?;
            Ok(if mode == Mode::Reach {
                Header::Reach { n, s, t }
            } else {
                Header::Rpq { n, s, t }
            })
        }
        Mode::Allpairs | Mode::TwoSat | Mode::Matching => {
            need(1)?;
            let n = parse_num::<usize>(args[0], line, "count")?;
            if n < 1 {
                return Err(err(line, "count must be positive"));
            }
            Ok(match mode {
                Mode::Allpairs => Header::AllPairs { n },
                Mode::TwoSat => Header::TwoSat { n },
                _ => Header::Matching { n },
            })
        }
    }
}

fn parse_op(toks: &[&str], line: usize, mode: Mode, header: Header) -> Result<ChangeOp, CliError> {
    let args = &toks[1..];
    let wrong_mode = || err(line, format!("op `{}` not valid in {:?} mode", toks[0], mode));
    let argc = |k: usize| -> Result<(), CliError> {
        if args.len() != k {
            Err(err(line, format!("op `{}` takes {k} arguments", toks[0])))
        } else {
            Ok(())
        }
    };
    match toks[0] {
        "set" => {
            let Header::Matrix { n, m, max_abs } = header else {
                return Err(wrong_mode());
            };
            argc(3)?;
            let i = parse_index(args[0], line, "row", n)?;
            let j = parse_index(args[1], line, "column", m)?;
            let value = parse_num::<i64>(args[2], line, "value")?;
            if value.abs() > max_abs {
                return Err(err(
                    line,
                    format!("entry {value} exceeds declared bound {max_abs}"),
                ));
            }
            Ok(ChangeOp::SetEntry { i, j, value })
        }
        "insert" | "delete" => {
            let n = match header {
                Header::Reach { n, .. } | Header::AllPairs { n } => n,
                _ => return Err(wrong_mode()),
            };
            argc(2)?;
            let u = parse_index(args[0], line, "node", n)?;
            let v = parse_index(args[1], line, "node", n)?;
            if u == v {
                return Err(err(line, "self-loops excluded"));
            }
            Ok(if toks[0] == "insert" {
                ChangeOp::InsertEdge { u, v }
            } else {
                ChangeOp::DeleteEdge { u, v }
            })
        }
        "clause" | "declause" => {
            let Header::TwoSat { n } = header else {
                return Err(wrong_mode());
            };
            argc(2)?;
            let a = parse_lit(args[0], line, n)?;
            let b = parse_lit(args[1], line, n)?;
            Ok(if toks[0] == "clause" {
                ChangeOp::AddClause { a, b }
            } else {
                ChangeOp::RemoveClause { a, b }
            })
        }
        "ledge" | "dledge" => {
            let Header::Rpq { n, .. } = header else {
                return Err(wrong_mode());
            };
            argc(3)?;
            let u = parse_index(args[0], line, "node", n)?;
            let label = args[1].to_string();
            let v = parse_index(args[2], line, "node", n)?;
            Ok(if toks[0] == "ledge" {
                ChangeOp::InsertLabeled { u, label, v }
            } else {
                ChangeOp::DeleteLabeled { u, label, v }
            })
        }
        "edge" | "dedge" => {
            let Header::Matching { n } = header else {
                return Err(wrong_mode());
            };
            argc(2)?;
            let i = parse_index(args[0], line, "node", n)?;
            let j = parse_index(args[1], line, "node", n)?;
            if i == j {
                return Err(err(line, "self-loops excluded"));
            }
            Ok(if toks[0] == "edge" {
                ChangeOp::AddUndirected { i, j }
            } else {
                ChangeOp::RemoveUndirected { i, j }
            })
        }
        "rank?" => {
            if !matches!(header, Header::Matrix { .. }) {
                return Err(wrong_mode());
            }
            argc(0)?;
            Ok(ChangeOp::QueryRank)
        }
        "reach?" => match header {
            Header::Reach { .. } => {
                argc(0)?;
                Ok(ChangeOp::QueryReach { pair: None })
            }
            Header::AllPairs { n } => {
                argc(2)?;
                let s = parse_index(args[0], line, "source node", n)?;
                let t = parse_index(args[1], line, "target node", n)?;
                Ok(ChangeOp::QueryReach { pair: Some((s, t)) })
            }
            _ => Err(wrong_mode()),
        },
        "sat?" => {
            if !matches!(header, Header::TwoSat { .. }) {
                return Err(wrong_mode());
            }
            argc(0)?;
            Ok(ChangeOp::QuerySat)
        }
        "match?" => {
            if !matches!(header, Header::Rpq { .. }) {
                return Err(wrong_mode());
            }
            argc(0)?;
            Ok(ChangeOp::QueryMatch)
        }
        "size?" => {
            if !matches!(header, Header::Matching { .. }) {
                return Err(wrong_mode());
            }
            argc(0)?;
            Ok(ChangeOp::QuerySize)
        }
        "pm?" => {
            if !matches!(header, Header::Matching { .. }) {
                return Err(wrong_mode());
            }
            argc(0)?;
            Ok(ChangeOp::QueryPerfect)
        }
        other => Err(err(line, format!("unknown op `{other}`"))),
    }
}

/// NFA file: `initial <state>`, `accept <state...>`, and transition lines
/// `<state> <label> <state>`. State names are arbitrary tokens, interned
/// in order of first appearance.
pub fn parse_nfa(text: &str) -> Result<Nfa, CliError> {
    let mut names: Vec<String> = Vec::new();
    let intern = |tok: &str, names: &mut Vec<String>| -> usize {
        if let Some(pos) = names.iter().position(|n| n == tok) {
            pos
        } else {
            names.push(tok.to_string());
            names.len() - 1
        }
    };
    let mut initial: Option<usize> = None;
    let mut accepting: Vec<usize> = Vec::new();
    let mut transitions: Vec<(usize, String, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "initial" => {
                if toks.len() != 2 {
                    return Err(err(lineno, "initial takes one state"));
                }
                initial = Some(intern(toks[1], &mut names));
            }
            "accept" => {
                if toks.len() < 2 {
                    return Err(err(lineno, "accept takes at least one state"));
                }
                for tok in &toks[1..] {
                    accepting.push(intern(tok, &mut names));
                }
            }
            _ => {
                if toks.len() != 3 {
                    return Err(err(lineno, "transition lines are `state label state`"));
                }
                let from = intern(toks[0], &mut names);
                let to = intern(toks[2], &mut names);
                transitions.push((from, toks[1].to_string(), to));
            }
        }
    }
    let initial = initial.ok_or(CliError::Parse {
        line: 0,
        msg: "nfa file missing `initial` line".into(),
    })?;
    if accepting.is_empty() {
        return Err(CliError::Parse {
            line: 0,
            msg: "nfa file missing `accept` line".into(),
        });
    }
    let mut nfa = Nfa::new(names.len(), initial, accepting);
    for (from, label, to) in transitions {
        nfa.add_transition(from, &label, to);
    }
    Ok(nfa)
}
