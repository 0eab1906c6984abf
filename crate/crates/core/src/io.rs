//! Text formats for matrices, labelled graphs, witnesses and block maps.
//!
//! Matrices are read either as JSON (`{"rows": [[...]]}` or a bare array of
//! rows) or in the whitespace format: a header line `R C` followed by `R`
//! lines of `C` integers. Blank lines and `#` comments are ignored.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json::matrix_from_value;
use crate::matrix::IntMatrix;
use crate::oracle::{BlockMap, EdgeShift};
use crate::sofic::LabelledGraph;
use crate::witnesses::Witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixRole {
    /// Nonnegative entries only.
    Adjacency,
    Integer,
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{' | '['))
}

pub fn parse_matrix(text: &str, role: MatrixRole) -> Result<IntMatrix> {
    let m = if looks_like_json(text) {
        matrix_from_value(&parse_json(text)?).map_err(|msg| parse_err(1, 1, msg))?
    } else {
        parse_whitespace_matrix(text)?
    };
    if role == MatrixRole::Adjacency {
        m.check_adjacency()?;
    }
    Ok(m)
}

/// Tokens of a line with their 1-based columns, comments stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_whitespace_matrix(text: &str) -> Result<IntMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, tokens(l))).filter(|(_, t)| !t.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty input"))?;
    if header.len() != 2 {
        return Err(parse_err(hline, 1, "expected a header `R C`"));
    }
    let dim = |(col, tok): (usize, &str)| -> Result<usize> {
        tok.parse::<usize>().map_err(|_| parse_err(hline, col, format!("`{tok}` is not a dimension")))
    };
    let (r, c) = (dim(header[0])?, dim(header[1])?);
    if r == 0 || c == 0 {
        return Err(parse_err(hline, 1, "dimensions must be positive"));
    }
    let mut data = Vec::with_capacity(r * c);
    let mut last = hline;
    for _ in 0..r {
        let (lno, toks) = lines.next().ok_or_else(|| parse_err(last + 1, 1, format!("expected {r} rows")))?;
        last = lno;
        if toks.len() != c {
            let col = toks.get(c).map_or(1, |t| t.0);
            return Err(parse_err(lno, col, format!("expected {c} entries, found {}", toks.len())));
        }
        for (col, tok) in toks {
            data.push(BigInt::from_str(tok).map_err(|_| parse_err(lno, col, format!("`{tok}` is not an integer")))?);
        }
    }
    if let Some((lno, toks)) = lines.next() {
        return Err(parse_err(lno, toks[0].0, "trailing data after the last row"));
    }
    IntMatrix::new(r, c, data)
}

/// The whitespace format, which `parse_matrix` reads back.
pub fn format_matrix(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_labelled_graph(text: &str) -> Result<LabelledGraph> {
    LabelledGraph::from_json(&parse_json(text)?)
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    Witness::from_json(&parse_json(text)?).map_err(|msg| parse_err(1, 1, msg))
}

pub fn parse_block_map(text: &str, src: &EdgeShift, tgt: &EdgeShift) -> Result<BlockMap> {
    BlockMap::from_json(&parse_json(text)?, src, tgt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;

    #[test]
    fn whitespace_and_json_formats() {
        assert_eq!(parse_matrix("2 2\n1 1\n2 0", MatrixRole::Adjacency).unwrap(), matrix![[1, 1], [2, 0]]);
        let json = r#"{"rows":[[0,2,2],[1,0,0],[1,0,0]]}"#;
        assert_eq!(parse_matrix(json, MatrixRole::Adjacency).unwrap(), matrix![[0, 2, 2], [1, 0, 0], [1, 0, 0]]);
        assert_eq!(parse_matrix("[[3]]", MatrixRole::Integer).unwrap(), matrix![[3]]);
        let m = matrix![[1, -4], [0, 7]];
        assert_eq!(parse_matrix(&format_matrix(&m), MatrixRole::Integer).unwrap(), m);
    }

    #[test]
    fn negative_entries_rejected_for_adjacency() {
        let e = parse_matrix("2 2\n1 -1\n0 1", MatrixRole::Adjacency).unwrap_err();
        assert!(matches!(e, Error::NegativeEntry { row: 0, col: 1, .. }));
        assert!(parse_matrix("2 2\n1 -1\n0 1", MatrixRole::Integer).is_ok());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_matrix("2 2\n1 1\n2 x", MatrixRole::Integer).unwrap_err(),
            Error::Parse { line: 3, col: 3, msg: "`x` is not an integer".into() }
        );
        assert!(matches!(
            parse_matrix("2 2\n1 1 1\n2 0", MatrixRole::Integer),
            Err(Error::Parse { line: 2, col: 5, .. })
        ));
        assert!(matches!(parse_matrix("2 2\n1 1", MatrixRole::Integer), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_matrix("{\"rows\": [[1,", MatrixRole::Integer), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("", MatrixRole::Integer), Err(Error::Parse { .. })));
    }
}
