//! Text formats for algebras and modules.
//!
//! Algebra file:
//!
//! ```text
//! p=2 dim=2
//! mul 0 0 = 0:1
//! mul 0 1 = 1:1
//! mul 1 0 = 1:1
//! unit = 0:1
//! radical = 0 1
//! ```
//!
//! Omitted products are zero. `radical` lists basis rows separated by `;`.
//! A module file starts with `dim=<m>` and has one `action i =` block per
//! algebra basis element, with the matrix rows either on following lines or
//! on the same line separated by `;`. `#` starts a comment.

use std::fmt::Write as _;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{reduce_signed, FpMatrix, Subspace};
use crate::module::FdModule;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_int(tok: &str, line: usize) -> Result<i64> {
    tok.parse::<i64>().map_err(|_| parse_err(line, format!("expected an integer, found `{tok}`")))
}

fn parse_index(tok: &str, line: usize, bound: usize, what: &str) -> Result<usize> {
    let i = tok
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected a {what} index, found `{tok}`")))?;
    if i >= bound {
        return Err(parse_err(line, format!("{what} index {i} out of range (dimension {bound})")));
    }
    Ok(i)
}

/// Parses `key=value` pairs separated by whitespace.
fn header_fields(line: &str, lineno: usize) -> Result<Vec<(&str, &str)>> {
    line.split_whitespace()
        .map(|f| f.split_once('=').ok_or_else(|| parse_err(lineno, format!("expected key=value, found `{f}`"))))
        .collect()
}

/// `k1:c1 k2:c2 ...` into a coordinate vector.
fn parse_sparse(rest: &str, line: usize, dim: usize, p: u32) -> Result<Vec<u32>> {
    let mut v = vec![0u32; dim];
    for tok in rest.split_whitespace() {
        let (k, c) = tok
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("expected index:coefficient, found `{tok}`")))?;
        let k = parse_index(k, line, dim, "basis")?;
        let c = reduce_signed(parse_int(c, line)?, p);
        v[k] = crate::linalg::add_mod(v[k], c, p);
    }
    Ok(v)
}

fn parse_row(text: &str, line: usize, len: usize, p: u32) -> Result<Vec<u32>> {
    let row: Vec<u32> = text
        .split_whitespace()
        .map(|t| parse_int(t, line).map(|v| reduce_signed(v, p)))
        .collect::<Result<_>>()?;
    if row.len() != len {
        return Err(parse_err(line, format!("row has {} entries, expected {len}", row.len())));
    }
    Ok(row)
}

pub fn parse_algebra(text: &str) -> Result<Algebra> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty algebra file"))?;
    let mut p = None;
    let mut dim = None;
    for (k, v) in header_fields(header, hline)? {
        match k {
            "p" => p = Some(v.parse::<u32>().map_err(|_| parse_err(hline, format!("bad modulus `{v}`")))?),
            "dim" => dim = Some(v.parse::<usize>().map_err(|_| parse_err(hline, format!("bad dimension `{v}`")))?),
            _ => return Err(parse_err(hline, format!("unknown header field `{k}`"))),
        }
    }
    let p = p.ok_or_else(|| parse_err(hline, "missing p=<prime>"))?;
    let d = dim.ok_or_else(|| parse_err(hline, "missing dim=<d>"))?;
    crate::linalg::check_modulus(p).map_err(|e| parse_err(hline, e.to_string()))?;
    if d == 0 {
        return Err(parse_err(hline, "dimension must be positive"));
    }
    let mut mul = vec![0u32; d * d * d];
    let mut seen = vec![false; d * d];
    let mut unit = None;
    let mut radical = None;
    for (line, l) in lines {
        let (lhs, rhs) = l.split_once('=').ok_or_else(|| parse_err(line, "expected `=`"))?;
        let lhs: Vec<&str> = lhs.split_whitespace().collect();
        match lhs.as_slice() {
            ["mul", i, j] => {
                let i = parse_index(i, line, d, "basis")?;
                let j = parse_index(j, line, d, "basis")?;
                if std::mem::replace(&mut seen[i * d + j], true) {
                    return Err(parse_err(line, format!("product b{i}·b{j} given twice")));
                }
                let v = parse_sparse(rhs, line, d, p)?;
                mul[(i * d + j) * d..(i * d + j + 1) * d].copy_from_slice(&v);
            }
            ["unit"] => {
                if unit.replace((line, parse_sparse(rhs, line, d, p)?)).is_some() {
                    return Err(parse_err(line, "unit given twice"));
                }
            }
            ["radical"] => {
                let rows = rhs
                    .split(';')
                    .filter(|r| !r.trim().is_empty())
                    .map(|r| parse_row(r, line, d, p))
                    .collect::<Result<Vec<_>>>()?;
                if radical.replace((line, Subspace::from_vectors(p, d, &rows))).is_some() {
                    return Err(parse_err(line, "radical given twice"));
                }
            }
            _ => return Err(parse_err(line, format!("unrecognized statement `{l}`"))),
        }
    }
    let (uline, unit) = unit.ok_or_else(|| parse_err(hline, "missing `unit = ...`"))?;
    let base = Algebra::new(p, d, mul.clone(), unit.clone(), None).map_err(|e| {
        let line = if e.to_string().contains("unit") { uline } else { hline };
        parse_err(line, e.to_string())
    })?;
    match radical {
        None => Ok(base),
        Some((rline, r)) => Algebra::new(p, d, mul, unit, Some(r)).map_err(|e| parse_err(rline, e.to_string())),
    }
}

pub fn parse_module(text: &str, algebra: &Algebra) -> Result<FdModule> {
    let p = algebra.modulus();
    let d = algebra.dim();
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let (hline, header) = *lines.first().ok_or_else(|| parse_err(1, "empty module file"))?;
    let mut m = None;
    for (k, v) in header_fields(header, hline)? {
        match k {
            "dim" => m = Some(v.parse::<usize>().map_err(|_| parse_err(hline, format!("bad dimension `{v}`")))?),
            _ => return Err(parse_err(hline, format!("unknown header field `{k}`"))),
        }
    }
    let m = m.ok_or_else(|| parse_err(hline, "missing dim=<m>"))?;
    let mut actions: Vec<Option<(usize, FpMatrix)>> = vec![None; d];
    let mut idx = 1;
    while idx < lines.len() {
        let (line, l) = lines[idx];
        let (lhs, rhs) = l.split_once('=').ok_or_else(|| parse_err(line, "expected `action i =`"))?;
        let i = match lhs.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["action", i] => parse_index(i, line, d, "algebra basis")?,
            _ => return Err(parse_err(line, format!("unrecognized statement `{l}`"))),
        };
        idx += 1;
        let mut rows = Vec::with_capacity(m);
        if rhs.trim().is_empty() {
            while rows.len() < m {
                let (rl, r) = *lines
                    .get(idx)
                    .ok_or_else(|| parse_err(line, format!("action {i} ends after {} of {m} rows", rows.len())))?;
                rows.push(parse_row(r, rl, m, p)?);
                idx += 1;
            }
        } else {
            for r in rhs.split(';').filter(|r| !r.trim().is_empty()) {
                rows.push(parse_row(r, line, m, p)?);
            }
            if rows.len() != m {
                return Err(parse_err(line, format!("action {i} has {} rows, expected {m}", rows.len())));
            }
        }
        let mut data = Vec::with_capacity(m * m);
        rows.into_iter().for_each(|r| data.extend(r));
        if actions[i].replace((line, FpMatrix::from_flat(p, m, m, data))).is_some() {
            return Err(parse_err(line, format!("action {i} given twice")));
        }
    }
    let mut mats = Vec::with_capacity(d);
    let mut where_ = Vec::with_capacity(d);
    for (i, a) in actions.into_iter().enumerate() {
        match a {
            Some((line, mat)) => {
                where_.push(line);
                mats.push(mat);
            }
            None if m == 0 => {
                where_.push(hline);
                mats.push(FpMatrix::zeros(p, 0, 0));
            }
            None => return Err(parse_err(hline, format!("missing `action {i}` block"))),
        }
    }
    let module = FdModule::from_parts(algebra.clone(), m, mats, None);
    for i in 0..d {
        for j in 0..d {
            let lhs = module.action(i).mul_unchecked(module.action(j));
            if lhs != module.action_of(&algebra.basis_product(i, j)) {
                return Err(parse_err(where_[i], format!("representation law fails for b{i}·b{j}")));
            }
        }
    }
    if !module.action_of(algebra.unit()).is_identity() {
        return Err(parse_err(hline, "the unit does not act as the identity"));
    }
    Ok(module)
}

pub fn algebra_to_text(a: &Algebra) -> String {
    let d = a.dim();
    let mut s = format!("p={} dim={}\n", a.modulus(), d);
    for i in 0..d {
        for j in 0..d {
            let v = a.basis_product(i, j);
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            let _ = writeln!(s, "mul {i} {j} = {}", sparse(&v));
        }
    }
    let _ = writeln!(s, "unit = {}", sparse(a.unit()));
    if let Some(r) = a.supplied_radical() {
        let rows: Vec<String> = (0..r.dim()).map(|t| join(r.vector(t))).collect();
        let _ = writeln!(s, "radical = {}", rows.join("; "));
    }
    s
}

pub fn module_to_text(m: &FdModule) -> String {
    let mut s = format!("dim={}\n", m.dim());
    if m.dim() == 0 {
        return s;
    }
    for (i, a) in m.actions().iter().enumerate() {
        let _ = writeln!(s, "action {i} =");
        for r in 0..a.rows() {
            let _ = writeln!(s, "{}", join(a.row(r)));
        }
    }
    s
}

fn sparse(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, c)| format!("{k}:{c}")).collect();
    parts.join(" ")
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

pub fn read_algebra(path: &std::path::Path) -> Result<Algebra> {
    parse_algebra(&std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?)
}

pub fn read_module(path: &std::path::Path, algebra: &Algebra) -> Result<FdModule> {
    parse_module(&std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?, algebra)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUAL: &str = "p=2 dim=2\nmul 0 0 = 0:1\nmul 0 1 = 1:1\nmul 1 0 = 1:1\nunit = 0:1\nradical = 0 1\n";

    #[test]
    fn parses_dual_numbers() {
        let a = parse_algebra(DUAL).unwrap();
        assert_eq!(a, Algebra::truncated_polynomial(2, 2).unwrap());
        assert_eq!(a.radical().unwrap().dim(), 1);
    }

    #[test]
    fn roundtrips() {
        for a in [Algebra::upper_triangular(2).unwrap(), Algebra::square_zero(2, 2).unwrap()] {
            let b = parse_algebra(&algebra_to_text(&a)).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.radical(), b.radical());
            let m = FdModule::regular(&a).dual().dual().with_algebra(&a);
            let back = parse_module(&module_to_text(&m), &a).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "p=2 dim=2\nmul 0 0 = 0:1\nmul 0 1 = 1:1\nmul 1 0 = 1:1\nmul 1 1 = 0:1 1:1\nunit = 0:1\n# ok\nradical = 0 1\n";
        match parse_algebra(bad) {
            Err(Error::Parse { line: 8, .. }) => {}
            other => panic!("expected radical failure on line 8, got {other:?}"),
        }
        match parse_algebra("p=4 dim=1\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_algebra("p=2 dim=1\nmul 0 3 = 0:1\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        let a = parse_algebra(DUAL).unwrap();
        match parse_module("dim=1\naction 0 = 1\naction 1 = 1\n", &a) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_module("dim=2\naction 0 =\n1 0\n", &a) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn module_rows_on_one_line() {
        let a = parse_algebra(DUAL).unwrap();
        let m = parse_module("dim=2\naction 0 = 1 0; 0 1\naction 1 = 0 0; 1 0\n", &a).unwrap();
        assert_eq!(m, FdModule::regular(&a));
    }
}
