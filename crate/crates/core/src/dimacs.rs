//! Extended DIMACS shortest-path format: `c` comment lines, one
//! `p sp <n> <m>` line, then `m` lines `a <u> <v> <w>` with 1-based ids and
//! signed integer lengths.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dist::Length;
use crate::graph::WeightedDigraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex {id} outside [1, {n}]")]
    OutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: problem line declares {declared} arcs, found {found}")]
    ArcCount { line: usize, declared: usize, found: usize },
    #[error("missing problem line")]
    MissingProblem,
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed { line, msg: msg.into() }
}

pub fn parse_dimacs(text: &str) -> Result<WeightedDigraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs: Vec<(usize, usize, Length)> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let mut tok = raw.split_whitespace();
        match tok.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(malformed(line, "second problem line"));
                }
                if tok.next() != Some("sp") {
                    return Err(malformed(line, "expected `p sp <n> <m>`"));
                }
                let n = field(&mut tok, line, "vertex count")?;
                let m = field(&mut tok, line, "arc count")?;
                end(&mut tok, line)?;
                header = Some((n, m));
                arcs.reserve(m);
            }
            Some("a") => {
                let Some((n, m)) = header else {
                    return Err(malformed(line, "arc before problem line"));
                };
                let u: usize = field(&mut tok, line, "tail")?;
                let v: usize = field(&mut tok, line, "head")?;
                let w: Length = field(&mut tok, line, "length")?;
                end(&mut tok, line)?;
                for id in [u, v] {
                    if id == 0 || id > n {
                        return Err(ParseError::OutOfRange { line, id, n });
                    }
                }
                if arcs.len() == m {
                    return Err(ParseError::ArcCount { line, declared: m, found: m + 1 });
                }
                arcs.push((u - 1, v - 1, w));
            }
            Some(other) => return Err(malformed(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingProblem)?;
    if arcs.len() != m {
        return Err(ParseError::ArcCount { line: last_line, declared: m, found: arcs.len() });
    }
    Ok(WeightedDigraph::new(n, arcs).expect("ids were range-checked"))
}

fn field<'a, T: std::str::FromStr>(
    tok: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    let s = tok.next().ok_or_else(|| malformed(line, format!("missing {what}")))?;
    s.parse().map_err(|_| malformed(line, format!("bad {what} `{s}`")))
}

fn end<'a>(tok: &mut impl Iterator<Item = &'a str>, line: usize) -> Result<(), ParseError> {
    match tok.next() {
        None => Ok(()),
        Some(s) => Err(malformed(line, format!("trailing token `{s}`"))),
    }
}

pub fn write_dimacs(g: &WeightedDigraph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    writeln!(out, "p sp {} {}", g.n(), g.m()).unwrap();
    for a in g.arcs() {
        writeln!(out, "a {} {} {}", a.tail + 1, a.head + 1, a.len).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::ga;

    #[test]
    fn parses_ga() {
        let g = parse_dimacs("c three vertices\np sp 3 2\na 1 2 -2\n\na 2 3 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.arcs(), ga().arcs());
    }

    #[test]
    fn single_vertex() {
        let g = parse_dimacs("p sp 1 0").unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
        assert_eq!(write_dimacs(&g), "p sp 1 0\n");
    }

    #[test]
    fn writes_ga() {
        assert_eq!(write_dimacs(&ga()), "p sp 3 2\na 1 2 -2\na 2 3 3\n");
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(parse_dimacs("p sp 3 1\na 1 5 0\n").unwrap_err(), ParseError::OutOfRange { line: 2, id: 5, n: 3 });
        assert_eq!(parse_dimacs("p sp 3 1\na 0 1 0\n").unwrap_err(), ParseError::OutOfRange { line: 2, id: 0, n: 3 });
        assert!(matches!(parse_dimacs("p sp 3 1\na 1 2\n"), Err(ParseError::Malformed { line: 2, .. })));
        assert!(matches!(parse_dimacs("p sp 3 1\na 1 2 x\n"), Err(ParseError::Malformed { line: 2, .. })));
        assert!(matches!(parse_dimacs("a 1 2 3\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert!(matches!(parse_dimacs("p sp 2 0\np sp 2 0\n"), Err(ParseError::Malformed { line: 2, .. })));
        assert!(matches!(parse_dimacs("p max 2 0\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert!(matches!(parse_dimacs("x\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert_eq!(parse_dimacs("p sp 2 2\na 1 2 0\n").unwrap_err(), ParseError::ArcCount { line: 2, declared: 2, found: 1 });
        assert_eq!(parse_dimacs("p sp 2 0\na 1 2 0\n").unwrap_err(), ParseError::ArcCount { line: 2, declared: 0, found: 1 });
        assert_eq!(parse_dimacs("c nothing\n").unwrap_err(), ParseError::MissingProblem);
    }
}
