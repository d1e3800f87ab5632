//! Dense univariate polynomials over F_p, used for moduli.
//!
//! Coefficients are stored low degree first and kept trimmed (no trailing
//! zeros). The zero polynomial is the empty vector.

use std::fmt::Write;

use super::parse::{parse_polynomial_terms, RawMonomial};
use crate::error::{parse_err, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<u32>,
}

pub(crate) fn mul_mod_p(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn pow_mod_p(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_p(acc, base, p);
        }
        base = mul_mod_p(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod_p(a, p as u64 - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<u32>, p: u32) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        trim(&mut coeffs);
        UniPoly { coeffs }
    }

    /// `x^k` as a polynomial.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn add(&self, other: &Self, p: u32) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0; len];
        for (i, c) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *c = (a + b) % p;
        }
        trim(&mut out);
        UniPoly { coeffs: out }
    }

    pub fn sub(&self, other: &Self, p: u32) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0; len];
        for (i, c) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *c = (a + p - b) % p;
        }
        trim(&mut out);
        UniPoly { coeffs: out }
    }

    pub fn mul(&self, other: &Self, p: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly { coeffs: vec![] };
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p as u64;
            }
        }
        UniPoly::new(out.into_iter().map(|c| c as u32).collect(), p)
    }

    /// Remainder modulo a nonzero polynomial.
    pub fn rem(&self, modulus: &Self, p: u32) -> Self {
        let d = modulus.degree().expect("division by the zero polynomial");
        let lead_inv = inv_mod_p(modulus.coeffs[d], p);
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let top = r.len() - 1;
            let c = mul_mod_p(r[top], lead_inv, p);
            if c != 0 {
                for (k, &m) in modulus.coeffs.iter().enumerate() {
                    let idx = top - d + k;
                    r[idx] = (r[idx] + p - mul_mod_p(c, m, p)) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        UniPoly { coeffs: r }
    }

    pub fn gcd(&self, other: &Self, p: u32) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.coeffs.last() {
            let inv = inv_mod_p(lead, p);
            for c in a.coeffs.iter_mut() {
                *c = mul_mod_p(*c, inv, p);
            }
        }
        a
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Self, p: u32) -> Self {
        let mut base = self.rem(modulus, p);
        let mut acc = UniPoly::new(vec![1], p).rem(modulus, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p).rem(modulus, p);
            }
            base = base.mul(&base, p).rem(modulus, p);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, p: u32) -> bool {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        if d == 1 {
            return true;
        }
        let x = UniPoly::monomial(1);
        // x^{p^k} mod f, computed by repeated p-th powers
        let frob_iter = |k: usize| -> UniPoly {
            let mut acc = x.rem(self, p);
            for _ in 0..k {
                acc = acc.pow_mod(p as u128, self, p);
            }
            acc
        };
        if frob_iter(d).sub(&x, p).rem(self, p) != UniPoly::new(vec![], p) {
            return false;
        }
        let mut m = d;
        let mut q = 2;
        while m > 1 {
            if m % q == 0 {
                while m % q == 0 {
                    m /= q;
                }
                let h = frob_iter(d / q).sub(&x, p);
                if self.gcd(&h, p).degree() != Some(0) {
                    return false;
                }
            }
            q += 1;
        }
        true
    }

    /// The first monic irreducible polynomial of degree `d`, scanning lower
    /// coefficients in increasing base-`p` order.
    pub fn first_irreducible(p: u32, d: usize) -> UniPoly {
        let total = (p as u128).pow(d as u32);
        for code in 0..total {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                coeffs.push((c % p as u128) as u32);
                c /= p as u128;
            }
            coeffs.push(1);
            let f = UniPoly::new(coeffs, p);
            if f.is_irreducible(p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Parse a polynomial in the single variable `var`.
    pub fn parse(text: &str, var: &str, p: u32) -> Result<UniPoly> {
        let terms = parse_polynomial_terms(text)?;
        let mut coeffs: Vec<u32> = Vec::new();
        for RawMonomial { coeff, factors } in terms {
            let mut deg = 0usize;
            for (name, e) in factors {
                if name != var {
                    return Err(parse_err(format!("unexpected variable `{name}` in `{text}`")));
                }
                deg += e as usize;
            }
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            let c = coeff.rem_euclid(p as i64) as u32;
            coeffs[deg] = (coeffs[deg] + c) % p;
        }
        Ok(UniPoly::new(coeffs, p))
    }

    /// Highest degree first, e.g. `x^2+x+1`.
    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            match (k, c) {
                (0, c) => write!(out, "{c}").unwrap(),
                (1, 1) => out.push_str(var),
                (1, c) => write!(out, "{c}*{var}").unwrap(),
                (k, 1) => write!(out, "{var}^{k}").unwrap(),
                (k, c) => write!(out, "{c}*{var}^{k}").unwrap(),
            }
        }
        out
    }
}
