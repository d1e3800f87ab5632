//! Truncated Witt vectors `W_n(R)` over an F_p-algebra `R`.

mod structural;

use std::fmt;
use std::sync::Arc;

pub use structural::{ghost, structural_polynomials, IntPoly, ModPoly, StructuralPolynomials};
use structural::PowerCache;

use crate::error::{parse_err, Error, Result};
use crate::ring::{Ring, RingElement, RingHom};

/// Characteristic and length of a Witt vector ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WittParams {
    pub p: u32,
    pub n: usize,
}

/// An element `(x_0, ..., x_{n-1})` of `W_n(R)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittVector {
    ring: Ring,
    comps: Vec<RingElement>,
}

impl WittVector {
    pub fn new(comps: Vec<RingElement>) -> Result<WittVector> {
        let ring = comps
            .first()
            .ok_or_else(|| Error::Range("Witt vectors need at least one component".into()))?
            .ring()
            .clone();
        if comps.iter().any(|c| c.ring() != &ring) {
            return Err(Error::RingMismatch("components lie in different rings".into()));
        }
        Ok(WittVector { ring, comps })
    }

    pub fn zero(ring: &Ring, n: usize) -> WittVector {
        assert!(n >= 1, "Witt vectors need at least one component");
        WittVector { ring: ring.clone(), comps: vec![ring.zero(); n] }
    }

    pub fn one(ring: &Ring, n: usize) -> WittVector {
        WittVector::teichmuller(&ring.one(), n)
    }

    /// The multiplicative lift `[a] = (a, 0, ..., 0)`.
    pub fn teichmuller(a: &RingElement, n: usize) -> WittVector {
        let mut w = WittVector::zero(a.ring(), n);
        w.comps[0] = a.clone();
        w
    }

    /// The image of an integer under `Z -> W_n(R)`.
    pub fn from_int(ring: &Ring, n: usize, k: i64) -> Result<WittVector> {
        let one = WittVector::one(ring, n);
        let mut acc = WittVector::zero(ring, n);
        for _ in 0..k.unsigned_abs() {
            acc = acc.add(&one)?;
        }
        if k < 0 {
            acc = acc.neg()?;
        }
        Ok(acc)
    }

    pub fn params(&self) -> WittParams {
        WittParams { p: self.ring.p(), n: self.comps.len() }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn components(&self) -> &[RingElement] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<RingElement> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn polys(&self) -> Result<Arc<StructuralPolynomials>> {
        structural_polynomials(self.ring.p(), self.comps.len())
    }

    fn check_compatible(&self, other: &WittVector) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        if self.comps.len() != other.comps.len() {
            return Err(Error::ParamsMismatch(format!(
                "lengths {} and {}",
                self.comps.len(),
                other.comps.len()
            )));
        }
        Ok(())
    }

    fn eval_binary(&self, other: &WittVector, polys: &[ModPoly]) -> WittVector {
        let mut point = Vec::with_capacity(2 * self.comps.len());
        for (a, b) in self.comps.iter().zip(&other.comps) {
            point.push(a);
            point.push(b);
        }
        let mut cache = PowerCache::new(point);
        let comps = polys.iter().map(|q| q.eval(&self.ring, &mut cache)).collect();
        WittVector { ring: self.ring.clone(), comps }
    }

    pub fn add(&self, other: &WittVector) -> Result<WittVector> {
        self.check_compatible(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let sp = self.polys()?;
        Ok(self.eval_binary(other, sp.sum_mod()))
    }

    /// `self + [c]`.
    pub fn add_teichmuller(&self, c: &RingElement) -> Result<WittVector> {
        if c.ring() != &self.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, c.ring())));
        }
        if c.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(WittVector::teichmuller(c, self.len()));
        }
        let sp = self.polys()?;
        let zero = self.ring.zero();
        let mut point = Vec::with_capacity(2 * self.comps.len());
        for (i, a) in self.comps.iter().enumerate() {
            point.push(a);
            point.push(if i == 0 { c } else { &zero });
        }
        let mut cache = PowerCache::new(point);
        let comps = sp.sum_teich_mod().iter().map(|q| q.eval(&self.ring, &mut cache)).collect();
        Ok(WittVector { ring: self.ring.clone(), comps })
    }

    pub fn neg(&self) -> Result<WittVector> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let sp = self.polys()?;
        let mut cache = PowerCache::new(self.comps.iter().collect());
        let comps = sp.neg_mod().iter().map(|q| q.eval(&self.ring, &mut cache)).collect();
        Ok(WittVector { ring: self.ring.clone(), comps })
    }

    pub fn sub(&self, other: &WittVector) -> Result<WittVector> {
        self.check_compatible(other)?;
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &WittVector) -> Result<WittVector> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(WittVector::zero(&self.ring, self.len()));
        }
        let sp = self.polys()?;
        Ok(self.eval_binary(other, sp.prod_mod()))
    }

    /// `[a] * self = (a x_0, a^p x_1, a^{p^2} x_2, ...)`.
    pub fn teichmuller_mul(&self, a: &RingElement) -> WittVector {
        let mut power = a.clone();
        let mut comps = Vec::with_capacity(self.comps.len());
        for (i, x) in self.comps.iter().enumerate() {
            if i > 0 {
                power = power.frobenius();
            }
            comps.push(power.mul(x));
        }
        WittVector { ring: self.ring.clone(), comps }
    }

    /// The Witt vector Frobenius, componentwise `p`-th power.
    pub fn frobenius(&self) -> WittVector {
        WittVector {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|c| c.frobenius()).collect(),
        }
    }

    pub fn frobenius_pow(&self, k: u32) -> WittVector {
        WittVector {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|c| c.frobenius_pow(k)).collect(),
        }
    }

    /// The shift `(x_0, ..., x_{n-1}) -> (0, x_0, ..., x_{n-2})`.
    pub fn verschiebung(&self) -> WittVector {
        self.verschiebung_pow(1)
    }

    pub fn verschiebung_pow(&self, k: usize) -> WittVector {
        let n = self.comps.len();
        let mut comps = vec![self.ring.zero(); n];
        if k < n {
            comps[k..].clone_from_slice(&self.comps[..n - k]);
        }
        WittVector { ring: self.ring.clone(), comps }
    }

    /// `p * self`, computed as `V(F(self))`.
    pub fn mul_by_p(&self) -> WittVector {
        self.frobenius().verschiebung()
    }

    /// The image in `W_m(R)` for `m <= n`.
    pub fn truncate(&self, m: usize) -> Result<WittVector> {
        if m == 0 || m > self.comps.len() {
            return Err(Error::Range(format!("cannot truncate W_{} to W_{m}", self.comps.len())));
        }
        Ok(WittVector { ring: self.ring.clone(), comps: self.comps[..m].to_vec() })
    }

    /// Componentwise image under a ring map.
    pub fn map(&self, h: &RingHom) -> Result<WittVector> {
        let comps = self.comps.iter().map(|c| h.apply(c)).collect::<Result<Vec<_>>>()?;
        Ok(WittVector { ring: h.target().clone(), comps })
    }

    /// Compact form `w(c_0;c_1;...)`.
    pub fn short(&self) -> String {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        format!("w({})", parts.join(";"))
    }

    /// Parse `w[p,n](c_0; ...)` or `w(c_0; ...)` with components in `ring`.
    pub fn parse(text: &str, ring: &Ring) -> Result<WittVector> {
        let text = text.trim();
        let rest = text
            .strip_prefix('w')
            .ok_or_else(|| parse_err(format!("Witt vector must start with `w`: `{text}`")))?
            .trim_start();
        let (header, body) = match rest.strip_prefix('[') {
            Some(r) => {
                let (h, b) = r
                    .split_once(']')
                    .ok_or_else(|| parse_err(format!("unterminated header in `{text}`")))?;
                (Some(h), b.trim_start())
            }
            None => (None, rest),
        };
        let inner = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| parse_err(format!("expected `(...)` in `{text}`")))?;
        let comps = inner
            .split(';')
            .map(|c| ring.parse(c.trim()))
            .collect::<Result<Vec<_>>>()?;
        let w = WittVector::new(comps)?;
        if let Some(h) = header {
            let nums: Vec<&str> = h.split(',').map(str::trim).collect();
            let bad = || parse_err(format!("bad header `[{h}]`"));
            if nums.len() != 2 {
                return Err(bad());
            }
            let p: u32 = nums[0].parse().map_err(|_| bad())?;
            let n: usize = nums[1].parse().map_err(|_| bad())?;
            if p != ring.p() || n != w.len() {
                return Err(Error::ParamsMismatch(format!(
                    "header [{p},{n}] does not match {} components over {ring}",
                    w.len()
                )));
            }
        }
        Ok(w)
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "w[{},{}]({})", self.ring.p(), self.comps.len(), parts.join("; "))
    }
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All elements of `W_n(R)` for a finite ring, in lexicographic order of
/// components.
pub fn all_witt_vectors(ring: &Ring, n: usize) -> Result<Vec<WittVector>> {
    let elems: Vec<RingElement> = ring.elements()?.collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for prefix in &out {
            for e in &elems {
                let mut v: Vec<RingElement> = prefix.clone();
                v.push(e.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(WittVector::new).collect()
}
