//! Code specifications.
//!
//! ```text
//! 0.4,0.5,0.6                      binary shorthand, x ↦ (x, 1-x)
//! q=3; 1 0 0|1/3 1/3 1/3           rows of a general code
//! qplus1:q=2                       named families with key=value pairs
//! omega:n=2,q=2
//! binary4:n=3
//! distinct:q=4,parts=1+2|3+4
//! ```
//!
//! Numbers are decimals (optionally with an exponent) or fractions `a/b`,
//! and are kept exactly alongside their float value.

use std::collections::BTreeMap;

use cdna_core::mld::binary::construct_binary4;
use cdna_core::mld::construct::{
    construct_distinct_support, construct_omega_code, construct_omega_code_exact, construct_qplus1,
    construct_qplus1_exact,
};
use cdna_core::mld::{CompositeCode, RationalCode};
use cdna_core::CompositeSymbol;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::CliError;

/// A parsed code with its exact form when all entries are rational.
#[derive(Debug, Clone)]
pub struct ParsedCode {
    pub code: CompositeCode,
    pub exact: Option<RationalCode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Qplus1 { q: usize },
    Omega { n: u32, q: usize },
    Binary4 { n: u32 },
    Distinct { q: usize, parts: Vec<Vec<usize>> },
}

fn err(pos: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { pos: pos + 1, msg: msg.into() }
}

/// A number token starting at byte `offset` of the whole spec.
pub fn parse_number(tok: &str, offset: usize) -> Result<(BigRational, f64), CliError> {
    let t = tok.trim();
    let lead = offset + (tok.len() - tok.trim_start().len());
    if t.is_empty() {
        return Err(err(lead, "expected a number"));
    }
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| err(lead, format!("bad numerator '{a}'")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| err(lead + a.len() + 1, format!("bad denominator '{b}'")))?;
        if den.is_zero() {
            return Err(err(lead + a.len() + 1, "zero denominator"));
        }
        let r = BigRational::new(num, den);
        let f = cdna_core::combinatorics::rational_to_f64(&r);
        return Ok((r, f));
    }
    let float: f64 = t.parse().map_err(|_| err(lead, format!("bad number '{t}'")))?;
    if !float.is_finite() {
        return Err(err(lead, format!("'{t}' is not finite")));
    }
    Ok((decimal_to_rational(t).ok_or_else(|| err(lead, format!("bad number '{t}'")))?, float))
}

fn decimal_to_rational(t: &str) -> Option<BigRational> {
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let ten = BigInt::from(10);
    let scale = exp - frac.len() as i32;
    let mut r = BigRational::from_integer(digits);
    if scale >= 0 {
        r *= BigRational::from_integer(Pow::pow(&ten, scale as u32));
    } else {
        r /= BigRational::from_integer(Pow::pow(&ten, (-scale) as u32));
    }
    Some(if neg { -r } else { r })
}

/// Splits on `sep`, yielding pieces with their byte offsets.
fn pieces(s: &str, offset: usize, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == sep {
            out.push((&s[start..i], offset + start));
            start = i + c.len_utf8();
        }
    }
    out.push((&s[start..], offset + start));
    out
}

/// Reads the spec from a file when `arg` names one.
pub fn load_spec(arg: &str) -> Result<String, CliError> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        Ok(std::fs::read_to_string(path)?.trim().to_string())
    } else {
        Ok(arg.trim().to_string())
    }
}

pub fn parse_code(spec: &str) -> Result<ParsedCode, CliError> {
    let s = spec.trim_end();
    if s.trim().is_empty() {
        return Err(err(0, "empty code specification"));
    }
    if let Some(i) = s.find(':') {
        let name = s[..i].trim();
        if name.chars().all(|c| c.is_ascii_alphanumeric()) && !name.is_empty() {
            return parse_family(name, &s[i + 1..], i + 1);
        }
    }
    if s.trim_start().starts_with("q=") || s.trim_start().starts_with("q =") {
        return parse_rows(s);
    }
    parse_binary(s)
}

fn parse_binary(s: &str) -> Result<ParsedCode, CliError> {
    let mut exact = Vec::new();
    let mut floats = Vec::new();
    for (tok, off) in pieces(s, 0, ',') {
        let (r, f) = parse_number(tok, off)?;
        if !(0.0..=1.0).contains(&f) {
            return Err(err(off, format!("binary value {} outside [0, 1]", tok.trim())));
        }
        exact.push(r);
        floats.push(f);
    }
    let code = CompositeCode::from_binary(&floats)?;
    let exact = RationalCode::from_binary(exact).ok();
    Ok(ParsedCode { code, exact })
}

fn parse_rows(s: &str) -> Result<ParsedCode, CliError> {
    let semi = s.find(';').ok_or_else(|| err(s.len(), "expected ';' after q=Q"))?;
    let head = &s[..semi];
    let eq = head.find('=').expect("starts with q=");
    let q: usize = head[eq + 1..]
        .trim()
        .parse()
        .map_err(|_| err(eq + 1, format!("bad alphabet size '{}'", head[eq + 1..].trim())))?;
    if q == 0 {
        return Err(err(eq + 1, "q must be at least 1"));
    }
    let mut floats = Vec::new();
    let mut exact = Vec::new();
    for (row, off) in pieces(&s[semi + 1..], semi + 1, '|') {
        let mut fr = Vec::new();
        let mut er = Vec::new();
        let mut pos = 0;
        for tok in row.split_whitespace() {
            let at = row[pos..].find(tok).expect("token in row") + pos;
            pos = at + tok.len();
            for (t, o) in pieces(tok, off + at, ',') {
                if t.is_empty() {
                    continue;
                }
                let (r, f) = parse_number(t, o)?;
                er.push(r);
                fr.push(f);
            }
        }
        if fr.len() != q {
            return Err(err(off, format!("row has {} entries, expected q={q}", fr.len())));
        }
        floats.push(CompositeSymbol::new(fr).map_err(|e| err(off, e.to_string()))?);
        exact.push(er);
    }
    let code = CompositeCode::new(floats)?;
    let exact = RationalCode::new(exact).ok();
    Ok(ParsedCode { code, exact })
}

fn key_values(body: &str, offset: usize) -> Result<BTreeMap<String, (String, usize)>, CliError> {
    let mut map = BTreeMap::new();
    for (kv, off) in pieces(body, offset, ',') {
        if kv.trim().is_empty() {
            continue;
        }
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| err(off, format!("expected key=value, got '{}'", kv.trim())))?;
        map.insert(k.trim().to_string(), (v.trim().to_string(), off + k.len() + 1));
    }
    Ok(map)
}

fn take<T: std::str::FromStr>(
    map: &mut BTreeMap<String, (String, usize)>,
    key: &str,
    end: usize,
) -> Result<T, CliError> {
    let (v, off) = map.remove(key).ok_or_else(|| err(end, format!("missing '{key}='")))?;
    v.parse().map_err(|_| err(off, format!("bad value '{v}' for {key}")))
}

pub fn parse_parts(v: &str, off: usize) -> Result<Vec<Vec<usize>>, CliError> {
    pieces(v, off, '|')
        .into_iter()
        .map(|(part, o)| {
            pieces(part, o, '+')
                .into_iter()
                .map(|(s, so)| {
                    s.trim().parse::<usize>().map_err(|_| err(so, format!("bad symbol '{}'", s.trim())))
                })
                .collect()
        })
        .collect()
}

fn parse_family(name: &str, body: &str, offset: usize) -> Result<ParsedCode, CliError> {
    let end = offset + body.len();
    let mut kv = key_values(body, offset)?;
    let family = match name {
        "qplus1" => Family::Qplus1 { q: take(&mut kv, "q", end)? },
        "omega" => Family::Omega { n: take(&mut kv, "n", end)?, q: take(&mut kv, "q", end)? },
        "binary4" => Family::Binary4 { n: take(&mut kv, "n", end)? },
        "distinct" => {
            let q = take(&mut kv, "q", end)?;
            let (v, off) = kv.remove("parts").ok_or_else(|| err(end, "missing 'parts='"))?;
            Family::Distinct { q, parts: parse_parts(&v, off)? }
        }
        other => return Err(err(0, format!("unknown code family '{other}'"))),
    };
    if let Some((k, (_, off))) = kv.into_iter().next() {
        return Err(err(off.saturating_sub(k.len() + 1), format!("unexpected key '{k}'")));
    }
    build_family(family)
}

pub fn build_family(family: Family) -> Result<ParsedCode, CliError> {
    let (code, exact) = match &family {
        Family::Qplus1 { q } => (construct_qplus1(*q)?, Some(construct_qplus1_exact(*q)?)),
        Family::Omega { n, q } => (construct_omega_code(*n, *q)?, Some(construct_omega_code_exact(*n, *q)?)),
        Family::Binary4 { n } => (construct_binary4(*n)?.code, None),
        Family::Distinct { q, parts } => {
            let code = construct_distinct_support(*q, parts)?;
            let rows = parts
                .iter()
                .map(|p| {
                    let w = BigRational::new(BigInt::one(), BigInt::from(p.len()));
                    let mut row = vec![BigRational::zero(); *q];
                    for &s in p {
                        row[s - 1] = w.clone();
                    }
                    row
                })
                .collect();
            (code, RationalCode::new(rows).ok())
        }
    };
    Ok(ParsedCode { code, exact })
}

/// The code in this grammar, binary shorthand when `q = 2`.
pub fn render_code(code: &CompositeCode) -> String {
    use crate::output::fmt_real;
    let short = |x: f64| {
        let s = fmt_real(x);
        s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
    };
    match code.binary_values() {
        Some(v) => v.iter().map(|&x| short(x)).collect::<Vec<_>>().join(","),
        None => {
            let rows: Vec<String> = code
                .symbols()
                .iter()
                .map(|s| s.probs().iter().map(|&p| short(p)).collect::<Vec<_>>().join(" "))
                .collect();
            format!("q={}; {}", code.q(), rows.join("|"))
        }
    }
}

pub fn render_symbol(symbol: &CompositeSymbol) -> String {
    let code = CompositeCode::new(vec![symbol.clone()]).expect("one symbol");
    match code.binary_values() {
        Some(_) => render_code(&code),
        None => render_code(&code).split_once("; ").map(|(_, r)| r.to_string()).unwrap_or_default(),
    }
}
