//! Plain-text Cayley table files.
//!
//! ```text
//! group z2 order 2
//! 0 1
//! 1 0
//! names 0 1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Row `g` lists
//! `g·h` for `h = 0..N`; index 0 must be the identity.

use std::fmt::Write as _;
use std::path::Path;

use crate::group::FiniteGroup;
use crate::{Error, Result};

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<FiniteGroup> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing `group <name> order <N>` header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (label, order) = match tokens.as_slice() {
        ["group", name, "order", n] => {
            let n: usize = n.parse().map_err(|_| {
                parse_err(hline, column_of(header, 3), format!("bad order '{n}'"))
            })?;
            (name.to_string(), n)
        }
        _ => return Err(parse_err(hline, 1, "expected `group <name> order <N>`")),
    };
    if order == 0 {
        return Err(parse_err(hline, column_of(header, 3), "order must be positive"));
    }

    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(order);
    let mut row_lines = Vec::with_capacity(order);
    let mut names = None;
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "names" {
            if names.is_some() {
                return Err(parse_err(ln, 1, "duplicate names line"));
            }
            if toks.len() - 1 != order {
                return Err(parse_err(
                    ln,
                    1,
                    format!("{} names for {order} elements", toks.len() - 1),
                ));
            }
            names = Some(toks[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>());
            continue;
        }
        if rows.len() == order {
            return Err(parse_err(ln, 1, format!("more than {order} table rows")));
        }
        if toks.len() != order {
            return Err(parse_err(
                ln,
                1,
                format!("row {} has {} entries, expected {order}", rows.len(), toks.len()),
            ));
        }
        let mut row = Vec::with_capacity(order);
        for (i, t) in toks.iter().enumerate() {
            let v: usize = t
                .parse()
                .ok()
                .filter(|&v| v < order)
                .ok_or_else(|| {
                    parse_err(ln, column_of(line, i), format!("bad element index '{t}'"))
                })?;
            row.push(v);
        }
        rows.push(row);
        row_lines.push(ln);
    }
    if rows.len() != order {
        return Err(parse_err(
            hline,
            1,
            format!("expected {order} rows, found {}", rows.len()),
        ));
    }
    // report Latin-square failures against the offending source line
    for (g, row) in rows.iter().enumerate() {
        let mut seen = vec![false; order];
        for &x in row {
            if std::mem::replace(&mut seen[x], true) {
                return Err(parse_err(
                    row_lines[g],
                    1,
                    format!("row {g} repeats index {x}"),
                ));
            }
        }
    }
    FiniteGroup::from_rows(label, &rows, names)
}

fn column_of(line: &str, token: usize) -> usize {
    let mut col = 1;
    let mut in_tok = false;
    let mut seen = 0;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            in_tok = false;
        } else if !in_tok {
            in_tok = true;
            if seen == token {
                col = i + 1;
                break;
            }
            seen += 1;
        }
    }
    col
}

pub fn load(path: impl AsRef<Path>) -> Result<FiniteGroup> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Precondition(format!("cannot read {}: {e}", path.display()))
    })?;
    parse(&text)
}

pub fn to_text(g: &FiniteGroup) -> String {
    let mut out = format!("group {} order {}\n", g.label(), g.order());
    for row in g.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    let _ = writeln!(out, "names {}", g.names().join(" "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn parses_z2() {
        let g = parse("group z2 order 2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.label(), "z2");
    }

    #[test]
    fn repeated_index_names_the_row() {
        let err = parse("group bad order 2\n0 1\n1 1\n").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("row 1"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn bad_token_reports_column() {
        let err = parse("group z2 order 2\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err}");
    }

    #[test]
    fn round_trips_catalog_groups() {
        for name in ["q8", "d4", "s3xz2"] {
            let g = catalog::by_name(name).unwrap();
            let back = parse(&to_text(&g)).unwrap();
            assert_eq!(back, g);
            assert_eq!(back.names(), g.names());
        }
    }
}
