//! Derivations `f d/dT` on `R[T]/(T^{p^N})` and their `p`-th powers.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};

/// `F_p[l][T]/(T^{p^big_n})`.
pub fn hochschild_ring(p: u32, big_n: u32) -> Result<Ring> {
    let bound = p
        .checked_pow(big_n)
        .ok_or_else(|| Error::Range(format!("{p}^{big_n} is too large")))?;
    Ring::parse_spec(&format!("mq {p} vars=l,T bounds=*,{bound}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedDerivation {
    ring: Ring,
    var: String,
    coeff: RingElement,
}

impl TruncatedDerivation {
    /// `f d/dvar`; `var` must be a variable with `var^m = 0`, `p | m`.
    pub fn new(var: &str, coeff: RingElement) -> Result<TruncatedDerivation> {
        let ring = coeff.ring().clone();
        // validates that d/dvar exists on the ring
        ring.var(var)?.derivative(var)?;
        Ok(TruncatedDerivation { ring, var: var.to_string(), coeff })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeff(&self) -> &RingElement {
        &self.coeff
    }

    pub fn apply(&self, g: &RingElement) -> Result<RingElement> {
        Ok(self.coeff.mul(&g.derivative(&self.var)?))
    }

    pub fn apply_pow(&self, g: &RingElement, k: u32) -> Result<RingElement> {
        let mut acc = g.clone();
        for _ in 0..k {
            acc = self.apply(&acc)?;
        }
        Ok(acc)
    }

    /// Leibniz rule on `T` and `T^2`.
    pub fn leibniz_holds(&self) -> Result<bool> {
        let t = self.ring.var(&self.var)?;
        let lhs = self.apply(&t.mul(&t))?;
        let dt = self.apply(&t)?;
        Ok(lhs == dt.mul(&t).add(&t.mul(&dt)))
    }

    /// Powers `T^k` spanning the ring over the coefficients, up to the
    /// nilpotency bound of `T`.
    fn monomials(&self) -> Result<Vec<RingElement>> {
        let t = self.ring.var(&self.var)?;
        let mut out = vec![self.ring.one()];
        loop {
            let next = out.last().unwrap().mul(&t);
            if next.is_zero() {
                return Ok(out);
            }
            out.push(next);
        }
    }

    /// `(f d)^p` by direct `p`-fold composition. The result is checked to be
    /// the derivation `g d` with `g = (f d)^p (T)` on every `T^k`.
    pub fn p_power_direct(&self) -> Result<TruncatedDerivation> {
        let p = self.ring.p();
        let t = self.ring.var(&self.var)?;
        let g = self.apply_pow(&t, p)?;
        let candidate = TruncatedDerivation { ring: self.ring.clone(), var: self.var.clone(), coeff: g };
        for m in self.monomials()? {
            if self.apply_pow(&m, p)? != candidate.apply(&m)? {
                return Err(Error::Inconsistent(format!(
                    "p-th power of {self} is not a derivation on {m}"
                )));
            }
        }
        Ok(candidate)
    }

    /// `d^p` on every `T^k`, as a list of images.
    pub fn coordinate_p_power_images(&self) -> Result<Vec<RingElement>> {
        let p = self.ring.p();
        let d = TruncatedDerivation { ring: self.ring.clone(), var: self.var.clone(), coeff: self.ring.one() };
        self.monomials()?.iter().map(|m| d.apply_pow(m, p)).collect()
    }

    /// `f^p d^p + (f d)^{p-1}(f) d`, evaluated on every `T^k`, and the
    /// coefficient of `d` when `d^p` vanishes.
    pub fn p_power_hochschild(&self) -> Result<TruncatedDerivation> {
        let p = self.ring.p();
        let dp = self.coordinate_p_power_images()?;
        let fp = self.coeff.pow(p as u64);
        let tail = self.apply_pow(&self.coeff, p - 1)?;
        let result = TruncatedDerivation { ring: self.ring.clone(), var: self.var.clone(), coeff: tail };
        for (m, dpm) in self.monomials()?.iter().zip(&dp) {
            let value = fp.mul(dpm).add(&result.apply(m)?);
            if value != self.apply_pow(m, p)? {
                return Err(Error::Inconsistent(format!(
                    "Hochschild's formula fails for {self} on {m}"
                )));
            }
        }
        Ok(result)
    }

    /// `(f d)^p` computed both ways; errors if they disagree.
    pub fn hochschild_p_power(&self) -> Result<TruncatedDerivation> {
        let direct = self.p_power_direct()?;
        let formula = self.p_power_hochschild()?;
        if direct != formula {
            return Err(Error::Inconsistent(format!(
                "direct p-th power {direct} differs from Hochschild's formula {formula}"
            )));
        }
        Ok(direct)
    }
}

impl fmt::Display for TruncatedDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})d/d{}", self.coeff, self.var)
    }
}
