//! Text forms accepted on the command line.
//!
//! Field elements are sums of terms `q`, `q*sym` or `sym` with `q` an
//! integer, a fraction `p/q` or a decimal, over the basis declared with
//! `--basis sym=hint`. This is the same shape the library prints.

use std::str::FromStr;
use std::sync::Arc;

use serde_json::Value;
use veechmix::exactnum::{merge_bases, FieldElement, Rational, RealBasis, Vec2};

use crate::CliError;

/// `--basis beta1=0.4142,beta2=0.618` (repeatable).
pub fn basis(decls: &[String]) -> Result<Arc<RealBasis>, CliError> {
    let mut syms = Vec::new();
    for d in decls.iter().flat_map(|d| d.split(',')) {
        let (name, hint) = d
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("basis symbol {d:?} needs the form name=hint")))?;
        let hint = f64::from_str(hint.trim()).map_err(|e| CliError::Usage(format!("hint of {name}: {e}")))?;
        syms.push((name.trim().to_string(), hint));
    }
    if syms.is_empty() {
        return Ok(RealBasis::rational());
    }
    RealBasis::new(syms).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn rational(text: &str) -> Result<Rational, CliError> {
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let digits = format!("{int}{frac}");
        let num = Rational::from_str(&digits).map_err(|_| CliError::Usage(format!("not a number: {t:?}")))?;
        let den = Rational::from_str(&format!("1{}", "0".repeat(frac.len()))).expect("power of ten");
        return Ok(num / den);
    }
    Rational::from_str(t).map_err(|_| CliError::Usage(format!("not a rational number: {t:?}")))
}

/// Splits at `+` and `-` that start a new term, keeping the sign.
fn terms(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut prev = ' ';
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        if (ch == '+' || ch == '-') && !cur.is_empty() && prev != '*' && prev != '/' {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
        prev = ch;
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub fn element(text: &str, basis: &Arc<RealBasis>) -> Result<FieldElement, CliError> {
    let parts = terms(text);
    if parts.is_empty() {
        return Err(CliError::Usage("empty number".into()));
    }
    let mut coords = vec![Rational::from_integer(0.into()); basis.len()];
    for part in parts {
        let (neg, body) = match part.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, part.strip_prefix('+').unwrap_or(&part)),
        };
        let (coef, sym) = match body.split_once('*') {
            Some((c, s)) => (rational(c)?, s),
            None if body.starts_with(|c: char| c.is_ascii_digit() || c == '.') => (rational(body)?, "1"),
            None => (Rational::from_integer(1.into()), body),
        };
        let idx = basis
            .index_of(sym)
            .ok_or_else(|| CliError::Usage(format!("unknown symbol {sym:?}; declare it with --basis {sym}=<hint>")))?;
        coords[idx] += if neg { -coef } else { coef };
    }
    FieldElement::new(basis.clone(), coords).map_err(|e| CliError::Usage(e.to_string()))
}

/// `x,y` as exact coordinates.
pub fn vec2(text: &str, basis: &Arc<RealBasis>) -> Result<Vec2, CliError> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected x,y, got {text:?}")))?;
    Ok(Vec2::new(element(x, basis)?, element(y, basis)?))
}

pub fn usize_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| CliError::Usage(format!("{s:?}: {e}"))))
        .collect()
}

/// `a:b:step`, both ends included up to rounding.
pub fn grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("expected a:b:step, got {text:?}"));
    let parts: Vec<f64> = text.split(':').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || b < a {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| a + i as f64 * step).collect())
}

/// A list of numbers given either as library field-element objects or as
/// strings over the command-line basis.
pub fn elements(value: &Value, basis: &Arc<RealBasis>) -> Result<Vec<FieldElement>, CliError> {
    let items = value.as_array().ok_or_else(|| CliError::Data("expected a JSON array of numbers".into()))?;
    let xs = items
        .iter()
        .map(|v| match v {
            Value::String(s) => element(s, basis).map_err(|e| CliError::Data(e.to_string())),
            Value::Number(n) => element(&n.to_string(), basis).map_err(|e| CliError::Data(e.to_string())),
            other => serde_json::from_value::<FieldElement>(other.clone()).map_err(|e| CliError::Data(e.to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if xs.is_empty() {
        return Err(CliError::Data("empty list of numbers".into()));
    }
    let (_, xs) = merge_bases(xs).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(xs)
}
