//! The `.gog` text format.
//!
//! ```text
//! # comment
//! rank 2
//! vertex X
//! edge h: X -> X alpha [[1,0],[0,2]] omega [[2,0],[0,1]]
//! tree
//! ```
//!
//! Whitespace inside a line is insignificant. Semantic problems (unknown
//! vertices, singular inclusions, …) are left to [`crate::gog::validate`].

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use thiserror::Error;

use crate::gog::{EdgeSpec, GoGSpec};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        self.skip_ws();
        let end = self.pos + token.chars().count();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(token.chars()) {
            self.pos = end;
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c.is_alphanumeric() || c == '_' || c == '\'')
        {
            self.pos += 1;
        }
        if start == self.pos || !self.chars[start].is_alphabetic() && self.chars[start] != '_' {
            self.pos = start;
            return self.err(format!("expected {what}"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-' | '+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<BigInt>() {
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn matrix(&mut self) -> Result<IntMatrix, ParseError> {
        let start = self.pos;
        self.expect("[")?;
        let mut rows = Vec::new();
        loop {
            self.expect("[")?;
            let mut row = vec![self.integer()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                row.push(self.integer()?);
            }
            self.expect("]")?;
            rows.push(row);
            match self.peek() {
                Some(',') => self.pos += 1,
                _ => break,
            }
        }
        self.expect("]")?;
        match IntMatrix::from_rows(rows) {
            Ok(m) if m.is_square() => Ok(m),
            _ => {
                self.pos = start;
                self.err("matrix must be square with rows of equal length")
            }
        }
    }
}

/// Parses a `.gog` document. Vertex and edge order is preserved.
pub fn parse(input: &str) -> Result<GoGSpec, ParseError> {
    let mut rank: Option<usize> = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut tree: Option<Vec<String>> = None;
    for (i, raw) in input.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let mut c = Cursor::new(text, i + 1);
        if c.at_end() {
            continue;
        }
        let keyword = c.ident("a declaration")?;
        match keyword.as_str() {
            "rank" => {
                if rank.is_some() {
                    return c.err("duplicate rank declaration");
                }
                let n = c.integer()?;
                rank = Some(usize::try_from(n).or_else(|_| c.err("rank must be a non-negative integer"))?);
            }
            "vertex" => vertices.push(c.ident("a vertex name")?),
            "edge" => {
                let name = c.ident("an edge name")?;
                c.expect(":")?;
                let source = c.ident("a source vertex")?;
                c.expect("->")?;
                let target = c.ident("a target vertex")?;
                c.expect("alpha")?;
                let alpha = c.matrix()?;
                c.expect("omega")?;
                let omega = c.matrix()?;
                edges.push(EdgeSpec {
                    name,
                    source,
                    target,
                    alpha,
                    omega,
                });
            }
            "tree" => {
                if tree.is_some() {
                    return c.err("duplicate tree declaration");
                }
                let mut names = Vec::new();
                while !c.at_end() {
                    if c.peek() == Some(',') {
                        c.pos += 1;
                        continue;
                    }
                    names.push(c.ident("an edge name")?);
                }
                tree = Some(names);
            }
            other => {
                c.pos = 0;
                c.skip_ws();
                return c.err(format!("unknown declaration `{other}`"));
            }
        }
        if !c.at_end() {
            return c.err("unexpected trailing input");
        }
    }
    let Some(rank) = rank else {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "missing rank declaration".into(),
        });
    };
    Ok(GoGSpec {
        rank,
        vertices,
        edges,
        spanning_tree: tree,
    })
}

fn render_matrix(m: &IntMatrix, out: &mut String) {
    out.push('[');
    for (i, row) in m.rows().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{x}");
        }
        out.push(']');
    }
    out.push(']');
}

/// Canonical text form; `parse(&render(s)) == Ok(s)`.
pub fn render(spec: &GoGSpec) -> String {
    let mut out = format!("rank {}\n", spec.rank);
    for v in &spec.vertices {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in &spec.edges {
        let _ = write!(out, "edge {}: {} -> {} alpha ", e.name, e.source, e.target);
        render_matrix(&e.alpha, &mut out);
        out.push_str(" omega ");
        render_matrix(&e.omega, &mut out);
        out.push('\n');
    }
    if let Some(t) = &spec.spanning_tree {
        out.push_str("tree");
        for name in t {
            let _ = write!(out, " {name}");
        }
        out.push('\n');
    }
    out
}

/// Display adapter for [`render`].
pub struct Rendered<'a>(pub &'a GoGSpec);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{bs12, spec_a, spec_b};
    use proptest::prelude::*;

    const SPEC_A: &str = "# graph A\nrank 2\nvertex X\n\
        edge h: X->X alpha [[1,0],[0,2]] omega [[2,0],[0,1]]\n\
        edge p : X -> X alpha [[1, 0], [0, 1]]  omega [[1,1],[0,1]]  # unipotent loop\n";

    #[test]
    fn parses_the_documented_examples() {
        let a = parse(SPEC_A).unwrap();
        assert_eq!(a, spec_a());
        assert_eq!((a.vertices.len(), a.edges.len()), (1, 2));
        let b = parse(&format!(
            "{SPEC_A}edge e: X -> X alpha [[1,0],[0,1]] omega [[0,1],[-1,0]]\n"
        ))
        .unwrap();
        assert_eq!(b, spec_b());
        assert_eq!(parse(&render(&bs12())).unwrap(), bs12());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("").unwrap_err();
        assert_eq!(e.message, "missing rank declaration");
        let e = parse("rank 2\nedge h X -> X").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        assert!(e.to_string().starts_with("2:8: expected `:`"));
        let e = parse("rank 1\nvertex X\nedge t: X -> X alpha [[1]] omega [[x]]").unwrap_err();
        assert_eq!((e.line, e.column), (3, 36));
        let e = parse("rank 2\nrank 3").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(parse("rank 1\nfoo").unwrap_err().message, "unknown declaration `foo`");
        assert!(parse("rank 1\nedge t: X -> X alpha [[1,2]] omega [[1]]").is_err());
    }

    #[test]
    fn tree_declarations() {
        let s = parse("rank 1\nvertex A\nvertex B\nedge a: A -> B alpha [[1]] omega [[2]]\ntree a\n").unwrap();
        assert_eq!(s.spanning_tree, Some(vec!["a".to_string()]));
        assert_eq!(parse(&render(&s)).unwrap(), s);
        let empty = parse("rank 1\nvertex A\ntree\n").unwrap();
        assert_eq!(empty.spanning_tree, Some(vec![]));
    }

    fn name() -> impl Strategy<Value = String> {
        "[A-Za-z_][A-Za-z0-9_]{0,4}"
    }

    fn spec() -> impl Strategy<Value = GoGSpec> {
        (1usize..=3).prop_flat_map(|n| {
            let mat = proptest::collection::vec(proptest::collection::vec(-50i64..50, n), n).prop_map(|rows| {
                IntMatrix::from_rows(
                    rows.into_iter()
                        .map(|r| r.into_iter().map(BigInt::from).collect())
                        .collect(),
                )
                .unwrap()
            });
            let edge =
                (name(), name(), name(), mat.clone(), mat).prop_map(|(name, source, target, alpha, omega)| EdgeSpec {
                    name,
                    source,
                    target,
                    alpha,
                    omega,
                });
            (
                proptest::collection::vec(name(), 0..4),
                proptest::collection::vec(edge, 0..4),
                proptest::option::of(proptest::collection::vec(name(), 0..3)),
            )
                .prop_map(move |(vertices, edges, spanning_tree)| GoGSpec {
                    rank: n,
                    vertices,
                    edges,
                    spanning_tree,
                })
        })
    }

    proptest! {
        #[test]
        fn render_round_trips(s in spec()) {
            prop_assert_eq!(parse(&render(&s)).unwrap(), s);
        }
    }
}
