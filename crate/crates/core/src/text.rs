//! Line-oriented text formats.
//!
//! A matrix file is a sequence of `key=value` lines:
//!
//! ```text
//! # comments run to the end of the line
//! p=7
//! m=2
//! modulus=1,0,1
//! n=2
//! A=[[1,0;0,1],[3,3;0,0]]
//! ```
//!
//! An element of `F_q` is written as its `m` coefficients `c_0,...,c_{m-1}`
//! over `F_p`; entries of a row are separated by `;`, rows by `,`. Whitespace
//! is insignificant and a bracketed value may span lines. `modulus` lists the
//! coefficients of the monic defining polynomial, lowest first; it is always
//! written out for `m > 1`.
//!
//! A decomposition is written as `k=`, `terms=`, `case=`, one matrix block per
//! witness, then `verified=`.

use std::fmt::Write as _;

use crate::decompose::{Case, Decomposition};
use crate::error::{Error, ParseErrorKind, Result};
use crate::ff::{FieldCtx, Fel};
use crate::mat::Mat;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug)]
struct Tok {
    ch: char,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
struct Entry {
    key: String,
    line: usize,
    col: usize,
    value: Vec<Tok>,
}

fn err_at(line: usize, col: usize, kind: ParseErrorKind, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        kind,
        msg: msg.into(),
    }
}

fn tok_err(t: Option<&Tok>, fallback: (usize, usize), kind: ParseErrorKind, msg: impl Into<String>) -> Error {
    let (line, col) = t.map_or(fallback, |t| (t.line, t.col));
    err_at(line, col, kind, msg)
}

fn lex(text: &str) -> Result<Vec<Entry>> {
    let mut chars = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for (ci, ch) in body.chars().enumerate() {
            chars.push(Tok {
                ch,
                line: li + 1,
                col: ci + 1,
            });
        }
        chars.push(Tok {
            ch: '\n',
            line: li + 1,
            col: body.chars().count() + 1,
        });
    }

    let mut entries = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].ch.is_whitespace() {
            i += 1;
            continue;
        }
        let start = chars[i];
        let mut key = String::new();
        while i < chars.len() && chars[i].ch != '=' {
            let c = chars[i].ch;
            if c == '\n' {
                return Err(err_at(start.line, start.col, ParseErrorKind::Syntax, "expected `key=value`"));
            }
            if !c.is_whitespace() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    return Err(err_at(chars[i].line, chars[i].col, ParseErrorKind::Syntax, format!("unexpected `{c}` in key")));
                }
                key.push(c);
            }
            i += 1;
        }
        if i == chars.len() || key.is_empty() {
            return Err(err_at(start.line, start.col, ParseErrorKind::Syntax, "expected `key=value`"));
        }
        i += 1;
        while i < chars.len() && chars[i].ch.is_whitespace() && chars[i].ch != '\n' {
            i += 1;
        }
        let mut value = Vec::new();
        if i < chars.len() && chars[i].ch == '[' {
            let mut depth = 0i32;
            loop {
                let Some(t) = chars.get(i) else {
                    return Err(err_at(start.line, start.col, ParseErrorKind::Syntax, "unbalanced brackets"));
                };
                i += 1;
                if t.ch.is_whitespace() {
                    continue;
                }
                match t.ch {
                    '[' => depth += 1,
                    ']' => depth -= 1,
                    _ => {}
                }
                value.push(*t);
                if depth == 0 {
                    break;
                }
            }
        } else {
            while i < chars.len() && chars[i].ch != '\n' {
                if !chars[i].ch.is_whitespace() {
                    value.push(chars[i]);
                }
                i += 1;
            }
        }
        entries.push(Entry {
            key,
            line: start.line,
            col: start.col,
            value,
        });
    }
    Ok(entries)
}

/// Entries consumed front to back.
struct Entries {
    list: Vec<Entry>,
    pos: usize,
    end: (usize, usize),
}

impl Entries {
    fn new(text: &str) -> Result<Entries> {
        let list = lex(text)?;
        let end = (text.lines().count().max(1), 1);
        Ok(Entries { list, pos: 0, end })
    }

    fn peek_key(&self) -> Option<&str> {
        self.list.get(self.pos).map(|e| e.key.as_str())
    }

    fn is_done(&self) -> bool {
        self.pos == self.list.len()
    }

    fn expect(&mut self, key: &str) -> Result<Entry> {
        match self.list.get(self.pos) {
            Some(e) if e.key == key => {
                self.pos += 1;
                Ok(e.clone())
            }
            Some(e) => Err(err_at(e.line, e.col, ParseErrorKind::Syntax, format!("expected `{key}=`, found `{}=`", e.key))),
            None => Err(err_at(self.end.0, self.end.1, ParseErrorKind::Syntax, format!("missing `{key}=`"))),
        }
    }
}

fn value_str(e: &Entry) -> String {
    e.value.iter().map(|t| t.ch).collect()
}

fn parse_uint(toks: &[Tok], at: (usize, usize)) -> Result<u64> {
    let s: String = toks.iter().map(|t| t.ch).collect();
    s.parse::<u64>()
        .map_err(|_| tok_err(toks.first(), at, ParseErrorKind::Syntax, format!("expected a non-negative integer, found `{s}`")))
}

fn entry_uint(e: &Entry) -> Result<u64> {
    parse_uint(&e.value, (e.line, e.col))
}

fn split_toks(toks: &[Tok], sep: char) -> Vec<&[Tok]> {
    toks.split(|t| t.ch == sep).collect()
}

fn parse_fel_toks(ctx: &FieldCtx, toks: &[Tok], at: (usize, usize)) -> Result<Fel> {
    let digits = split_toks(toks, ',');
    if digits.len() != ctx.m() {
        return Err(tok_err(
            toks.first(),
            at,
            ParseErrorKind::FieldMismatch,
            format!("expected {} coefficient(s), found {}", ctx.m(), digits.len()),
        ));
    }
    let mut coeffs = Vec::with_capacity(digits.len());
    for d in digits {
        let v = parse_uint(d, at)?;
        if v >= ctx.p() {
            return Err(tok_err(d.first(), at, ParseErrorKind::FieldMismatch, format!("coefficient {v} is not below p = {}", ctx.p())));
        }
        coeffs.push(v);
    }
    Ok(ctx.from_coeffs(&coeffs).expect("digits checked"))
}

fn to_toks(s: &str) -> Vec<Tok> {
    s.chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, ch)| Tok { ch, line: 1, col: i + 1 })
        .collect()
}

pub fn render_fel(ctx: &FieldCtx, a: Fel) -> String {
    ctx.coeffs(a)
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_fel(ctx: &FieldCtx, s: &str) -> Result<Fel> {
    parse_fel_toks(ctx, &to_toks(s), (1, 1))
}

/// Coefficients lowest first, `,`-separated over a prime field and
/// `;`-separated otherwise (each coefficient being `m` digits).
pub fn render_poly(ctx: &FieldCtx, f: &Poly) -> String {
    let sep = if ctx.m() == 1 { "," } else { ";" };
    if f.is_zero() {
        return render_fel(ctx, Fel::ZERO);
    }
    f.coeffs()
        .iter()
        .map(|&c| render_fel(ctx, c))
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn parse_poly(ctx: &FieldCtx, s: &str) -> Result<Poly> {
    let toks = to_toks(s);
    let sep = if ctx.m() == 1 { ',' } else { ';' };
    let coeffs = split_toks(&toks, sep)
        .into_iter()
        .map(|c| parse_fel_toks(ctx, c, (1, 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

fn parse_field(entries: &mut Entries) -> Result<FieldCtx> {
    let pe = entries.expect("p")?;
    let p = entry_uint(&pe)?;
    let me = entries.expect("m")?;
    let m = entry_uint(&me)?;
    let modulus = if entries.peek_key() == Some("modulus") {
        let e = entries.expect("modulus")?;
        let c = split_toks(&e.value, ',')
            .into_iter()
            .map(|d| parse_uint(d, (e.line, e.col)))
            .collect::<Result<Vec<_>>>()?;
        Some((c, e))
    } else {
        None
    };
    let at = modulus.as_ref().map_or((pe.line, pe.col), |(_, e)| (e.line, e.col));
    FieldCtx::new(p, m as usize, modulus.as_ref().map(|(c, _)| c.as_slice()))
        .map_err(|e| err_at(at.0, at.1, ParseErrorKind::Syntax, e.to_string()))
}

fn parse_matrix_value(ctx: &FieldCtx, n: usize, e: &Entry) -> Result<Mat> {
    let toks = &e.value;
    let at = (e.line, e.col);
    let bad = |t: Option<&Tok>, msg: &str| tok_err(t, at, ParseErrorKind::Syntax, msg.to_string());
    let mut i = 0;
    if toks.first().map(|t| t.ch) != Some('[') || toks.last().map(|t| t.ch) != Some(']') {
        return Err(bad(toks.first(), "matrix must be written `[[...],...]`"));
    }
    i += 1;
    let last = toks.len() - 1;
    let mut rows: Vec<Vec<Fel>> = Vec::new();
    while i < last {
        if toks[i].ch != '[' {
            return Err(bad(toks.get(i), "expected `[` to open a row"));
        }
        let open = i;
        i += 1;
        while i < last && toks[i].ch != ']' {
            if toks[i].ch == '[' {
                return Err(bad(toks.get(i), "nested `[` inside a row"));
            }
            i += 1;
        }
        if i >= last {
            return Err(bad(toks.get(open), "unclosed row"));
        }
        let body = &toks[open + 1..i];
        let row = split_toks(body, ';')
            .into_iter()
            .map(|c| parse_fel_toks(ctx, c, (toks[open].line, toks[open].col)))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(bad(toks.get(open), &format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
        i += 1;
        if i < last {
            if toks[i].ch != ',' {
                return Err(bad(toks.get(i), "expected `,` between rows"));
            }
            i += 1;
        }
    }
    if rows.len() != n {
        return Err(bad(toks.first(), &format!("matrix has {} rows, expected {n}", rows.len())));
    }
    Mat::from_rows(rows)
}

fn parse_matrix_block(entries: &mut Entries, field: Option<&FieldCtx>) -> Result<(FieldCtx, Mat)> {
    let first = entries.list.get(entries.pos).map(|e| (e.line, e.col));
    let ctx = parse_field(entries)?;
    if let Some(f) = field {
        if *f != ctx {
            let (line, col) = first.unwrap_or(entries.end);
            return Err(err_at(line, col, ParseErrorKind::FieldMismatch, "field differs from the first matrix"));
        }
    }
    let ne = entries.expect("n")?;
    let n = entry_uint(&ne)? as usize;
    if n == 0 {
        return Err(err_at(ne.line, ne.col, ParseErrorKind::Syntax, "n must be positive"));
    }
    let ae = entries.expect("A")?;
    let a = parse_matrix_value(&ctx, n, &ae)?;
    Ok((ctx, a))
}

pub fn render_matrix(ctx: &FieldCtx, a: &Mat) -> String {
    let mut out = String::new();
    writeln!(out, "p={}", ctx.p()).unwrap();
    writeln!(out, "m={}", ctx.m()).unwrap();
    if let Some(modulus) = ctx.modulus() {
        let s: Vec<String> = modulus.iter().map(u64::to_string).collect();
        writeln!(out, "modulus={}", s.join(",")).unwrap();
    }
    writeln!(out, "n={}", a.n()).unwrap();
    let rows: Vec<String> = (0..a.n())
        .map(|i| {
            let cells: Vec<String> = a.row(i).iter().map(|&c| render_fel(ctx, c)).collect();
            format!("[{}]", cells.join(";"))
        })
        .collect();
    writeln!(out, "A=[{}]", rows.join(",")).unwrap();
    out
}

pub fn parse_matrix(text: &str) -> Result<(FieldCtx, Mat)> {
    let mut entries = Entries::new(text)?;
    let out = parse_matrix_block(&mut entries, None)?;
    if let Some(e) = entries.list.get(entries.pos) {
        return Err(err_at(e.line, e.col, ParseErrorKind::Syntax, format!("unexpected `{}=` after the matrix", e.key)));
    }
    Ok(out)
}

pub fn render_decomposition(ctx: &FieldCtx, d: &Decomposition, verified: bool) -> String {
    let mut out = String::new();
    writeln!(out, "k={}", d.k).unwrap();
    writeln!(out, "terms={}", d.terms()).unwrap();
    writeln!(out, "case={}", d.case).unwrap();
    for w in &d.witnesses {
        out.push_str(&render_matrix(ctx, w));
    }
    writeln!(out, "verified={verified}").unwrap();
    out
}

fn parse_decomposition_block(entries: &mut Entries, field: Option<&FieldCtx>) -> Result<(FieldCtx, Decomposition)> {
    let ke = entries.expect("k")?;
    let k = entry_uint(&ke)?;
    if k == 0 {
        return Err(err_at(ke.line, ke.col, ParseErrorKind::Syntax, "k must be positive"));
    }
    let te = entries.expect("terms")?;
    let terms = entry_uint(&te)? as usize;
    if terms == 0 {
        return Err(err_at(te.line, te.col, ParseErrorKind::Syntax, "terms must be positive"));
    }
    let ce = entries.expect("case")?;
    let case: Case = value_str(&ce)
        .parse()
        .map_err(|m: String| err_at(ce.line, ce.col, ParseErrorKind::Syntax, m))?;
    let mut ctx = field.cloned();
    let mut witnesses: Vec<Mat> = Vec::with_capacity(terms);
    for _ in 0..terms {
        let (c, w) = parse_matrix_block(entries, ctx.as_ref())?;
        if let Some(first) = witnesses.first() {
            if first.n() != w.n() {
                return Err(err_at(ce.line, ce.col, ParseErrorKind::Syntax, "witnesses differ in size"));
            }
        }
        ctx.get_or_insert(c);
        witnesses.push(w);
    }
    if entries.peek_key() == Some("verified") {
        let ve = entries.expect("verified")?;
        let v = value_str(&ve);
        if v != "true" && v != "false" {
            return Err(err_at(ve.line, ve.col, ParseErrorKind::Syntax, "verified must be true or false"));
        }
    }
    Ok((ctx.expect("at least one witness"), Decomposition { k, witnesses, case }))
}

pub fn parse_decomposition(text: &str) -> Result<(FieldCtx, Decomposition)> {
    let mut entries = Entries::new(text)?;
    let out = parse_decomposition_block(&mut entries, None)?;
    if let Some(e) = entries.list.get(entries.pos) {
        return Err(err_at(e.line, e.col, ParseErrorKind::Syntax, format!("unexpected `{}=`", e.key)));
    }
    Ok(out)
}

/// A matrix block followed by a decomposition block, as produced by
/// concatenating a matrix file with the output of `decompose`.
pub fn parse_problem(text: &str) -> Result<(FieldCtx, Mat, Decomposition)> {
    let mut entries = Entries::new(text)?;
    let (ctx, a) = parse_matrix_block(&mut entries, None)?;
    let (_, d) = parse_decomposition_block(&mut entries, Some(&ctx))?;
    if !entries.is_done() {
        let e = &entries.list[entries.pos];
        return Err(err_at(e.line, e.col, ParseErrorKind::Syntax, format!("unexpected `{}=`", e.key)));
    }
    Ok((ctx, a, d))
}

/// One `key=value` per line with whitespace and comments removed, for
/// comparing texts up to layout. Unparseable text is returned unchanged.
pub fn normalize(text: &str) -> String {
    match lex(text) {
        Ok(entries) => entries
            .iter()
            .map(|e| format!("{}={}", e.key, value_str(e)))
            .collect::<Vec<_>>()
            .join("\n"),
        Err(_) => text.to_string(),
    }
}
