//! Text grammar for ring specs and sparse polynomials.
//!
//! Polynomials are sums of terms like `2*x^3*e`, separated by `+` or `-`.
//! The long names `lambda` and `epsilon` are accepted as aliases for `l`
//! and `e`.

use super::unipoly::UniPoly;
use super::{Generator, Relation, RingSpec};
use crate::error::{parse_err, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawMonomial {
    pub coeff: i64,
    pub factors: Vec<(String, u32)>,
}

pub(crate) fn canonical_var_name(name: &str) -> &str {
    match name {
        "lambda" => "l",
        "epsilon" => "e",
        other => other,
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn is_valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_char)
}

/// Split a sum into signed terms at top level (outside brackets).
pub(crate) fn split_signed_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negative = false;
    for c in text.chars() {
        match c {
            '[' | '(' | '{' => {
                depth += 1;
                current.push(c);
            }
            ']' | ')' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_err(format!("unbalanced brackets in `{text}`")));
                }
                current.push(c);
            }
            '+' | '-' if depth == 0 => {
                let t = current.trim().to_string();
                if t.is_empty() {
                    if !out.is_empty() || negative {
                        // a sign directly after another sign
                        if c == '-' {
                            negative = !negative;
                        }
                        continue;
                    }
                } else {
                    out.push((negative, t));
                }
                current.clear();
                negative = c == '-';
            }
            c if c.is_whitespace() => current.push(' '),
            c => current.push(c),
        }
    }
    if depth != 0 {
        return Err(parse_err(format!("unbalanced brackets in `{text}`")));
    }
    let t = current.trim().to_string();
    if t.is_empty() {
        return Err(parse_err(format!("dangling operator in `{text}`")));
    }
    out.push((negative, t));
    Ok(out)
}

pub(crate) fn parse_polynomial_terms(text: &str) -> Result<Vec<RawMonomial>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(parse_err("empty polynomial"));
    }
    let mut out = Vec::new();
    for (negative, term) in split_signed_terms(text)? {
        let mut coeff: i64 = if negative { -1 } else { 1 };
        let mut factors = Vec::new();
        for factor in term.split('*') {
            let factor: String = factor.chars().filter(|c| !c.is_whitespace()).collect();
            if factor.is_empty() {
                return Err(parse_err(format!("empty factor in `{term}`")));
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                let v: i64 = factor
                    .parse()
                    .map_err(|_| parse_err(format!("bad integer `{factor}`")))?;
                coeff = coeff
                    .checked_mul(v)
                    .ok_or_else(|| parse_err(format!("integer overflow in `{term}`")))?;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u32>()
                        .map_err(|_| parse_err(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor.as_str(), 1),
            };
            if !is_valid_var_name(name) {
                return Err(parse_err(format!("bad variable name `{name}`")));
            }
            factors.push((canonical_var_name(name).to_string(), exp));
        }
        out.push(RawMonomial { coeff, factors });
    }
    Ok(out)
}

fn parse_prime(tok: Option<&str>) -> Result<u32> {
    let tok = tok.ok_or_else(|| parse_err("missing characteristic"))?;
    tok.parse::<u32>()
        .map_err(|_| parse_err(format!("bad characteristic `{tok}`")))
}

fn split_kv(tok: &str) -> Option<(&str, &str)> {
    tok.split_once('=')
}

pub(crate) fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    let mut toks = text.split_whitespace();
    let kind = toks.next().ok_or_else(|| parse_err("empty ring spec"))?;
    let p = parse_prime(toks.next())?;
    let rest: Vec<&str> = toks.collect();
    let mut field: Option<UniPoly> = None;
    let mut kv = Vec::new();
    let mut bare = Vec::new();
    for tok in &rest {
        match split_kv(tok) {
            Some(("gf", poly)) => field = Some(UniPoly::parse(poly, "x", p)?),
            Some((k, v)) => kv.push((k, v)),
            None => bare.push(*tok),
        }
    }
    let get = |key: &str| kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
    let unknown = |allowed: &[&str]| -> Result<()> {
        for (k, _) in &kv {
            if !allowed.contains(k) {
                return Err(parse_err(format!("unknown key `{k}` in `{text}`")));
            }
        }
        Ok(())
    };
    let spec = match kind {
        "fp" => {
            unknown(&[])?;
            if !bare.is_empty() || field.is_some() {
                return Err(parse_err(format!("unexpected tokens in `{text}`")));
            }
            RingSpec::prime_field(p)
        }
        "gf" => {
            unknown(&["d", "mod"])?;
            let d = get("d")
                .map(|d| {
                    d.parse::<usize>()
                        .map_err(|_| parse_err(format!("bad degree `{d}`")))
                })
                .transpose()?;
            let modulus = get("mod").map(|m| UniPoly::parse(m, "x", p)).transpose()?;
            match (d, modulus) {
                (Some(d), Some(m)) => {
                    if m.degree() != Some(d) {
                        return Err(Error::InvalidSpec(format!(
                            "modulus {} does not have degree {d}",
                            m.format("x")
                        )));
                    }
                    RingSpec::galois_field_with(p, m)
                }
                (None, Some(m)) => RingSpec::galois_field_with(p, m),
                (Some(d), None) => {
                    if !super::unipoly::is_prime(p as u64) {
                        return Err(Error::NotPrime(p as u64));
                    }
                    RingSpec::galois_field(p, d)
                }
                (None, None) => return Err(parse_err("gf needs d= or mod=")),
            }
        }
        "poly" => {
            unknown(&["vars"])?;
            let vars = parse_var_list(get("vars").ok_or_else(|| parse_err("poly needs vars="))?)?;
            let gens = vars
                .into_iter()
                .map(|name| Generator { name, relation: Relation::Free })
                .collect();
            RingSpec { p, field: None, gens }
        }
        "mq" => {
            unknown(&["vars", "bounds"])?;
            let vars = parse_var_list(get("vars").ok_or_else(|| parse_err("mq needs vars="))?)?;
            let bounds_text = get("bounds").ok_or_else(|| parse_err("mq needs bounds="))?;
            let bounds = split_bounds(bounds_text)?;
            if bounds.len() != vars.len() {
                return Err(parse_err(format!(
                    "{} variables but {} bounds",
                    vars.len(),
                    bounds.len()
                )));
            }
            let mut gens = Vec::new();
            for (name, b) in vars.into_iter().zip(bounds) {
                let relation = if b == "*" {
                    Relation::Free
                } else if let Some(inner) = b.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
                    Relation::Monic(UniPoly::parse(inner, &name, p)?)
                } else {
                    Relation::Nilpotent(
                        b.parse::<u32>()
                            .map_err(|_| parse_err(format!("bad bound `{b}`")))?,
                    )
                };
                gens.push(Generator { name, relation });
            }
            RingSpec { p, field: None, gens }
        }
        "uq" => {
            unknown(&["mod"])?;
            if bare.len() != 1 {
                return Err(parse_err(format!("uq needs exactly one variable in `{text}`")));
            }
            if !is_valid_var_name(bare[0]) {
                return Err(parse_err(format!("bad variable name `{}`", bare[0])));
            }
            let var = canonical_var_name(bare[0]).to_string();
            let modulus = UniPoly::parse(
                get("mod").ok_or_else(|| parse_err("uq needs mod="))?,
                &var,
                p,
            )?;
            RingSpec { p, field: None, gens: vec![Generator { name: var, relation: Relation::Monic(modulus) }] }
        }
        other => return Err(parse_err(format!("unknown ring kind `{other}`"))),
    };
    if kind != "fp" && kind != "gf" {
        if !bare.is_empty() && kind != "uq" {
            return Err(parse_err(format!("unexpected tokens in `{text}`")));
        }
        Ok(RingSpec { field, ..spec })
    } else {
        Ok(spec)
    }
}

fn parse_var_list(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for v in text.split(',') {
        let v = v.trim();
        if !is_valid_var_name(v) {
            return Err(parse_err(format!("bad variable name `{v}`")));
        }
        out.push(canonical_var_name(v).to_string());
    }
    Ok(out)
}

fn split_bounds(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '{' => {
                depth += 1;
                cur.push(c)
            }
            '}' => {
                depth -= 1;
                cur.push(c)
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(parse_err(format!("unbalanced braces in `{text}`")));
    }
    out.push(cur);
    Ok(out)
}
