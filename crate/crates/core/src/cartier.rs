//! The truncated Cartier-Dieudonne ring `E_n` over an F_p-algebra `R`.
//!
//! Elements are kept in the normal form `sum V^r [x_{r,s}] F^s` with
//! `r < n`. Products use
//! `V^r[a]F^s * V^t[b]F^u = V^{r+t}[a^{p^t} b^{p^s}]F^{s+u}`; colliding
//! Teichmuller coefficients are merged with the Witt sum
//! `[a] + [b] = sum_k V^k[s_k]F^k`, which pushes carries to slot
//! `(r+k, s+k)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::ring::parse::split_signed_terms;
use crate::ring::{Ring, RingElement, RingHom};
use crate::witt::WittVector;

#[derive(Clone, PartialEq, Eq)]
pub struct CartierElement {
    ring: Ring,
    n: usize,
    terms: BTreeMap<(usize, u32), RingElement>,
}

impl CartierElement {
    pub fn zero(ring: &Ring, n: usize) -> CartierElement {
        assert!(n >= 1, "level must be at least 1");
        CartierElement { ring: ring.clone(), n, terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring, n: usize) -> CartierElement {
        CartierElement::monomial(n, 0, &ring.one(), 0)
    }

    /// `V^r [a] F^s`.
    pub fn monomial(n: usize, r: usize, a: &RingElement, s: u32) -> CartierElement {
        let mut out = CartierElement::zero(a.ring(), n);
        if r < n && !a.is_zero() {
            out.terms.insert((r, s), a.clone());
        }
        out
    }

    /// The Teichmuller lift `[a]`.
    pub fn teichmuller(n: usize, a: &RingElement) -> CartierElement {
        CartierElement::monomial(n, 0, a, 0)
    }

    pub fn f(ring: &Ring, n: usize) -> CartierElement {
        CartierElement::monomial(n, 0, &ring.one(), 1)
    }

    pub fn v(ring: &Ring, n: usize) -> CartierElement {
        CartierElement::monomial(n, 1, &ring.one(), 0)
    }

    /// The embedding `W_n(R) -> E_n`, `(w_0, w_1, ...) -> sum V^r [w_r] F^r`.
    pub fn from_witt(w: &WittVector) -> CartierElement {
        let n = w.len();
        let mut out = CartierElement::zero(w.ring(), n);
        for (r, c) in w.components().iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert((r, r as u32), c.clone());
            }
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero coefficients keyed by `(r, s)`.
    pub fn terms(&self) -> &BTreeMap<(usize, u32), RingElement> {
        &self.terms
    }

    /// Largest `s` with a nonzero `F^s` term.
    pub fn f_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, s)| s).max()
    }

    fn check(&self, other: &CartierElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        if self.n != other.n {
            return Err(Error::ParamsMismatch(format!("levels {} and {}", self.n, other.n)));
        }
        Ok(())
    }

    /// Add `V^r [c] F^s` in place, cascading Witt carries.
    fn insert(&mut self, r: usize, s: u32, c: RingElement) -> Result<()> {
        if r >= self.n || c.is_zero() {
            return Ok(());
        }
        let Some(a) = self.terms.remove(&(r, s)) else {
            self.terms.insert((r, s), c);
            return Ok(());
        };
        let m = self.n - r;
        let sum = WittVector::teichmuller(&a, m).add_teichmuller(&c)?;
        for (k, w) in sum.into_components().into_iter().enumerate() {
            self.insert(r + k, s + k as u32, w)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &CartierElement) -> Result<CartierElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (&(r, s), c) in &other.terms {
            out.insert(r, s, c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<CartierElement> {
        let mut out = CartierElement::zero(&self.ring, self.n);
        for (&(r, s), c) in &self.terms {
            // -V^r[c]F^s = V^r(-[c])F^s with -[c] = sum_k V^k[N_k(c)]F^k
            let neg = WittVector::teichmuller(c, self.n - r).neg()?;
            for (k, w) in neg.into_components().into_iter().enumerate() {
                out.insert(r + k, s + k as u32, w)?;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CartierElement) -> Result<CartierElement> {
        self.add(&other.neg()?)
    }

    /// `V^r[a]F^s * V^t[b]F^u = V^{r+t}[a^{p^t} b^{p^s}]F^{s+u}`.
    pub fn monomial_mul(
        n: usize,
        (r, a, s): (usize, &RingElement, u32),
        (t, b, u): (usize, &RingElement, u32),
    ) -> Result<CartierElement> {
        if a.ring() != b.ring() {
            return Err(Error::RingMismatch(format!("{} vs {}", a.ring(), b.ring())));
        }
        if r + t >= n {
            return Ok(CartierElement::zero(a.ring(), n));
        }
        let c = a.frobenius_pow(t as u32).mul(&b.frobenius_pow(s));
        Ok(CartierElement::monomial(n, r + t, &c, s + u))
    }

    pub fn mul(&self, other: &CartierElement) -> Result<CartierElement> {
        self.check(other)?;
        let mut out = CartierElement::zero(&self.ring, self.n);
        for (&(r, s), a) in &self.terms {
            for (&(t, u), b) in &other.terms {
                if r + t >= self.n {
                    continue;
                }
                let c = a.frobenius_pow(t as u32).mul(&b.frobenius_pow(s));
                out.insert(r + t, s + u, c)?;
            }
        }
        Ok(out)
    }

    /// Reduce to level `m <= n` by dropping `V^r` terms with `r >= m`.
    pub fn truncate(&self, m: usize) -> Result<CartierElement> {
        if m == 0 || m > self.n {
            return Err(Error::Range(format!("cannot truncate level {} to {m}", self.n)));
        }
        let terms = self.terms.iter().filter(|(k, _)| k.0 < m).map(|(k, c)| (*k, c.clone())).collect();
        Ok(CartierElement { ring: self.ring.clone(), n: m, terms })
    }

    /// Coefficientwise image under a ring map.
    pub fn map(&self, h: &RingHom) -> Result<CartierElement> {
        let mut out = CartierElement::zero(h.target(), self.n);
        for (&(r, s), c) in &self.terms {
            out.insert(r, s, h.apply(c)?)?;
        }
        Ok(out)
    }

    /// Act on `x` in `W_n(S)` where `S` is an `R`-algebra via `h`:
    /// `V^r[a]F^s` acts as `V^r o (mult by [h(a)]) o sigma^s`.
    pub fn act(&self, h: &RingHom, x: &WittVector) -> Result<WittVector> {
        if h.source() != &self.ring {
            return Err(Error::RingMismatch(format!(
                "structure map starts at {}, element lives over {}",
                h.source(),
                self.ring
            )));
        }
        if x.ring() != h.target() || x.len() != self.n {
            return Err(Error::ParamsMismatch(format!(
                "expected an element of W_{}({}), got {x}",
                self.n,
                h.target()
            )));
        }
        let mut acc = WittVector::zero(h.target(), self.n);
        for (&(r, s), a) in &self.terms {
            let lift = WittVector::teichmuller(&h.apply(a)?, self.n);
            let term = lift.mul(&x.frobenius_pow(s))?.verschiebung_pow(r);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Parse sums of terms `V^r[x]F^s`, e.g. `F - [l]` or `V[1]F + [1+l]`.
    pub fn parse(text: &str, ring: &Ring, n: usize) -> Result<CartierElement> {
        let mut acc = CartierElement::zero(ring, n);
        let text = text.trim();
        if text == "0" {
            return Ok(acc);
        }
        for (negative, term) in split_signed_terms(text)? {
            let t = parse_term(&term, ring, n)?;
            acc = if negative { acc.sub(&t)? } else { acc.add(&t)? };
        }
        Ok(acc)
    }
}

fn parse_power(text: &str, letter: char) -> Result<(u32, &str)> {
    let Some(rest) = text.strip_prefix(letter) else {
        return Ok((0, text));
    };
    let rest = rest.trim_start();
    if let Some(r) = rest.strip_prefix('^') {
        let r = r.trim_start();
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        let k = r[..end]
            .parse()
            .map_err(|_| parse_err(format!("bad exponent after {letter} in `{text}`")))?;
        Ok((k, r[end..].trim_start()))
    } else {
        Ok((1, rest))
    }
}

fn parse_term(term: &str, ring: &Ring, n: usize) -> Result<CartierElement> {
    let term = term.trim();
    if let Ok(k) = term.parse::<i64>() {
        return Ok(CartierElement::from_witt(&WittVector::from_int(ring, n, k)?));
    }
    let (r, rest) = parse_power(term, 'V')?;
    let (coeff, rest) = match rest.strip_prefix('[') {
        Some(inner) => {
            let close = inner
                .find(']')
                .ok_or_else(|| parse_err(format!("unterminated `[` in `{term}`")))?;
            (ring.parse(&inner[..close])?, inner[close + 1..].trim_start())
        }
        None => (ring.one(), rest),
    };
    let (s, rest) = parse_power(rest, 'F')?;
    if !rest.is_empty() || (r == 0 && s == 0 && !term.starts_with('[')) {
        return Err(parse_err(format!("cannot read Cartier term `{term}`")));
    }
    Ok(CartierElement::monomial(n, r as usize, &coeff, s))
}

impl fmt::Display for CartierElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(r, s), c)| format_monomial(r, c, s))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for CartierElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn format_monomial(r: usize, c: &RingElement, s: u32) -> String {
    let v = match r {
        0 => String::new(),
        1 => "V".to_string(),
        r => format!("V^{r}"),
    };
    let fp = match s {
        0 => String::new(),
        1 => "F".to_string(),
        s => format!("F^{s}"),
    };
    format!("{v}[{c}]{fp}")
}
