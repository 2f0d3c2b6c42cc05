//! Plain-text matrix and assignment files.
//!
//! Matrix file: a header line `n m`, then `n+1` lines of `m+1` numbers
//! separated by single spaces. Square (classical assignment) matrices use the
//! same header with `n == m` followed by exactly `n` lines of `n` numbers.
//! Writers emit 17 significant digits so every `f64` round-trips exactly.
//!
//! Assignment file: a header line `n m`, then one line of `n` integers where
//! the i-th is the 1-based target of source i, or 0 for a deletion.

use std::io::{BufRead, Write};

use crate::assignment::EpsAssignment;
use crate::error::{Error, Result};
use crate::matrix::{EpsMatrix, Role, SquareMatrix};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with their 1-based line numbers.
fn lines(reader: impl BufRead) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push((k + 1, line));
        }
    }
    Ok(out)
}

fn parse_header(lines: &[(usize, String)]) -> Result<(usize, usize)> {
    let (no, text) = lines.first().ok_or_else(|| parse_err(1, "empty input"))?;
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(*no, "header must be `n m`"));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| parse_err(*no, format!("invalid dimension `{s}`")))
    };
    Ok((parse(fields[0])?, parse(fields[1])?))
}

fn parse_rows(lines: &[(usize, String)], rows: usize, cols: usize) -> Result<Vec<f64>> {
    if lines.len() != rows {
        let at = lines.last().map_or(1, |l| l.0);
        return Err(parse_err(
            at,
            format!("expected {rows} data rows, found {}", lines.len()),
        ));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (no, text) in lines {
        let before = data.len();
        for field in text.split_whitespace() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(*no, format!("invalid number `{field}`")))?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(parse_err(
                *no,
                format!("expected {cols} values, found {}", data.len() - before),
            ));
        }
    }
    Ok(data)
}

pub fn read_matrix(reader: impl BufRead, role: Role) -> Result<EpsMatrix> {
    let lines = lines(reader)?;
    let (n, m) = parse_header(&lines)?;
    let data = parse_rows(&lines[1..], n + 1, m + 1)?;
    EpsMatrix::new(n, m, data, role)
}

pub fn read_square(reader: impl BufRead) -> Result<SquareMatrix> {
    let lines = lines(reader)?;
    let (n, m) = parse_header(&lines)?;
    if n != m {
        return Err(parse_err(
            lines[0].0,
            "square matrix header must have n == m",
        ));
    }
    let data = parse_rows(&lines[1..], n, n)?;
    SquareMatrix::new(n, data)
}

fn write_row(out: &mut impl Write, row: &[f64]) -> Result<()> {
    let text: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
    writeln!(out, "{}", text.join(" "))?;
    Ok(())
}

pub fn write_matrix(mut out: impl Write, x: &EpsMatrix) -> Result<()> {
    writeln!(out, "{} {}", x.n(), x.m())?;
    for i in 0..=x.n() {
        write_row(&mut out, x.row(i))?;
    }
    Ok(())
}

pub fn write_square(mut out: impl Write, w: &SquareMatrix) -> Result<()> {
    writeln!(out, "{} {}", w.n(), w.n())?;
    for i in 0..w.n() {
        write_row(&mut out, w.row(i))?;
    }
    Ok(())
}

pub fn read_assignment(reader: impl BufRead) -> Result<EpsAssignment> {
    let lines = lines(reader)?;
    let (n, m) = parse_header(&lines)?;
    let (no, text) = lines
        .get(1)
        .ok_or_else(|| parse_err(lines[0].0 + 1, "missing assignment line"))?;
    if lines.len() > 2 {
        return Err(parse_err(lines[2].0, "unexpected trailing content"));
    }
    let codes = text
        .split_whitespace()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| parse_err(*no, format!("invalid target `{f}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if codes.len() != n {
        return Err(parse_err(
            *no,
            format!("expected {n} entries, found {}", codes.len()),
        ));
    }
    let sub = codes.into_iter().map(|c| c.checked_sub(1)).collect();
    EpsAssignment::new(m, sub).map_err(|e| parse_err(*no, e.to_string()))
}

pub fn write_assignment(mut out: impl Write, a: &EpsAssignment) -> Result<()> {
    writeln!(out, "{} {}", a.n(), a.m())?;
    let codes: Vec<String> = a.codes().iter().map(ToString::to_string).collect();
    writeln!(out, "{}", codes.join(" "))?;
    Ok(())
}
