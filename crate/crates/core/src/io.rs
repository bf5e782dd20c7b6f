//! Canonical text format.
//!
//! ```text
//! # comment
//! n r              (or: n mixed maxr)
//! 0 1 2
//! 3 4 5 x 2        (edge with multiplicity 2)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeMultiset, Hypergraph, MixedHypergraph};

/// Either flavour of hypergraph, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyHypergraph {
    Uniform(Hypergraph),
    Mixed(MixedHypergraph),
}

enum Header {
    Uniform { n: usize, r: usize },
    Mixed { n: usize, max_r: usize },
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, found {tok:?}")))
}

pub fn parse(text: &str) -> Result<AnyHypergraph> {
    let mut header = None;
    let mut edges: Vec<(Vec<usize>, u64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some(h) = &header else {
            header = Some(match toks.as_slice() {
                [n, "mixed", m] => Header::Mixed {
                    n: parse_usize(n, line)?,
                    max_r: parse_usize(m, line)?,
                },
                [n, r] => Header::Uniform {
                    n: parse_usize(n, line)?,
                    r: parse_usize(r, line)?,
                },
                _ => return Err(parse_err(line, "header must be \"n r\" or \"n mixed maxr\"")),
            });
            continue;
        };
        let (verts, mult) = match toks.iter().position(|&t| t == "x") {
            Some(pos) => {
                if pos + 2 != toks.len() {
                    return Err(parse_err(line, "multiplicity must be the last token: \"... x k\""));
                }
                (&toks[..pos], parse_usize(toks[pos + 1], line)? as u64)
            }
            None => (&toks[..], 1),
        };
        let e: Vec<usize> = verts
            .iter()
            .map(|t| parse_usize(t, line))
            .collect::<Result<_>>()?;
        let (n, lo, hi) = match h {
            Header::Uniform { n, r } => (*n, *r, *r),
            Header::Mixed { n, max_r } => (*n, 2, *max_r),
        };
        if e.len() < lo || e.len() > hi {
            return Err(parse_err(line, format!("edge has {} vertices, expected {lo}..={hi}", e.len())));
        }
        if let Some(v) = e.iter().find(|&&v| v >= n) {
            return Err(parse_err(line, format!("vertex {v} out of range for n = {n}")));
        }
        if mult == 0 {
            return Err(parse_err(line, "multiplicity must be positive"));
        }
        edges.push((e, mult));
    }
    let located = |res: Result<AnyHypergraph>| {
        res.map_err(|e| match e {
            Error::RepeatedVertex { edge, .. } | Error::WrongEdgeSize { edge, .. } => {
                parse_err(edge_line(text, edge), e.to_string())
            }
            other => other,
        })
    };
    match header {
        None => Err(parse_err(0, "missing header line")),
        Some(Header::Uniform { n, r }) => {
            located(Hypergraph::with_multiplicities(n, r, edges).map(AnyHypergraph::Uniform))
        }
        Some(Header::Mixed { n, max_r }) => located(
            MixedHypergraph::with_multiplicities(n, max_r, edges).map(AnyHypergraph::Mixed),
        ),
    }
}

/// Line number of the `edge`-th edge line.
fn edge_line(text: &str, edge: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .nth(edge + 1)
        .map(|(i, _)| i + 1)
        .unwrap_or(0)
}

fn write_edges(out: &mut String, store: &EdgeMultiset) {
    for (e, m) in store.edges() {
        let mut first = true;
        for v in e {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{v}");
        }
        if m > 1 {
            let _ = write!(out, " x {m}");
        }
        out.push('\n');
    }
}

pub fn to_text(h: &Hypergraph) -> String {
    let mut out = format!("{} {}\n", h.n(), h.r());
    write_edges(&mut out, h);
    out
}

pub fn mixed_to_text(h: &MixedHypergraph) -> String {
    let mut out = format!("{} mixed {}\n", h.n(), h.max_r());
    write_edges(&mut out, h);
    out
}

pub fn read_any(path: impl AsRef<Path>) -> Result<AnyHypergraph> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<Hypergraph> {
    match read_any(path)? {
        AnyHypergraph::Uniform(h) => Ok(h),
        AnyHypergraph::Mixed(_) => Err(Error::InvalidParameter(
            "expected a uniform hypergraph, found a mixed one".into(),
        )),
    }
}

pub fn write_hypergraph(h: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_text(h))?;
    Ok(())
}

pub fn write_mixed(h: &MixedHypergraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, mixed_to_text(h))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_edges() {
        let h = parse("# two disjoint edges\n4 2\n0 1\n2 3\n").unwrap();
        assert_eq!(
            h,
            AnyHypergraph::Uniform(Hypergraph::new(4, 2, [vec![0, 1], vec![2, 3]]).unwrap())
        );
    }

    #[test]
    fn malformed_edge_reports_line() {
        let err = parse("4 2\n0 1\n0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse("4 2\n\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(matches!(parse("4 2\n0 9\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse("").is_err());
    }

    #[test]
    fn multiplicities_and_mixed() {
        let text = "5 mixed 3\n0 1 x 3\n2 3 4\n";
        let AnyHypergraph::Mixed(h) = parse(text).unwrap() else {
            panic!("expected mixed");
        };
        assert_eq!(h.edge_count(), 4);
        assert_eq!(mixed_to_text(&h), text);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k4.txt");
        let k4 = Hypergraph::new(
            4,
            2,
            [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]].map(Vec::from),
        )
        .unwrap();
        write_hypergraph(&k4, &path).unwrap();
        assert_eq!(read_hypergraph(&path).unwrap(), k4);
    }
}
