//! n-cosmooth modules given by structure equations
//! `F e_i = sum_j a_ij(V) e_j` with `a_ij(V) = sum_k V^k [a_ijk]`.
//!
//! Elements are stored in canonical coordinates: `m = sum V^i [c_ij] e_j`
//! for `0 <= i < n`, flattened row-major (`i * r + j`). Every operation
//! produces a list of raw terms `V^i [c] F^s e_j` which [`Presentation::normalize`]
//! turns back into coordinates: `F` is rewritten with the structure
//! equations, and coefficients meeting at the same slot are combined with
//! the Witt sum, carrying into higher slots.

mod format;
mod maps;
mod verify;

use std::fmt;
use std::sync::Arc;

pub use maps::ModuleMap;
pub use verify::{check_u_injective, verify_cosmooth, ExactnessCheck, VerifyReport};

use crate::cartier::CartierElement;
use crate::error::{Error, Result};
use crate::ring::{linalg, HomTable, Ring, RingElement, RingHom};
use crate::witt::WittVector;

/// Canonical coordinates, flattened as `i * r + j`.
pub type Coords = Vec<RingElement>;

/// Structure-equation presentation of a module over `E_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    ring: Ring,
    n: usize,
    r: usize,
    /// `a[i][j][k]` at index `(i * r + j) * n + k`.
    coeffs: Vec<RingElement>,
}

/// A raw term `V^slot [c] F^fdeg e_gen`.
#[derive(Clone, Debug)]
pub(crate) struct RawTerm {
    pub slot: usize,
    pub gen: usize,
    pub fdeg: u32,
    pub c: RingElement,
}

impl Presentation {
    /// `coeffs[i][j]` lists `a_ij0, ..., a_ij(n-1)`.
    pub fn new(ring: &Ring, n: usize, coeffs: Vec<Vec<Vec<RingElement>>>) -> Result<Presentation> {
        let r = coeffs.len();
        if n == 0 || r == 0 {
            return Err(Error::Shape("level and rank must be at least 1".into()));
        }
        let mut flat = Vec::with_capacity(r * r * n);
        for (i, row) in coeffs.into_iter().enumerate() {
            if row.len() != r {
                return Err(Error::Shape(format!("row {} has {} entries, expected {r}", i + 1, row.len())));
            }
            for (j, list) in row.into_iter().enumerate() {
                if list.len() != n {
                    return Err(Error::Shape(format!(
                        "a[{}][{}] has {} coefficients, expected {n}",
                        i + 1,
                        j + 1,
                        list.len()
                    )));
                }
                for c in list {
                    if c.ring() != ring {
                        return Err(Error::RingMismatch(format!("coefficient {c} is not in {ring}")));
                    }
                    flat.push(c);
                }
            }
        }
        Ok(Presentation { ring: ring.clone(), n, r, coeffs: flat })
    }

    /// Flat coefficients in the order `(i * r + j) * n + k`.
    pub fn from_flat(ring: &Ring, n: usize, r: usize, coeffs: Vec<RingElement>) -> Result<Presentation> {
        if n == 0 || r == 0 || coeffs.len() != r * r * n {
            return Err(Error::Shape(format!(
                "expected {} coefficients for n={n}, r={r}, got {}",
                r * r * n,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(Error::RingMismatch(format!("coefficients must lie in {ring}")));
        }
        Ok(Presentation { ring: ring.clone(), n, r, coeffs })
    }

    /// Rank one: `F e = (sum_k V^k [a_k]) e`.
    pub fn rank_one(ring: &Ring, coeffs: Vec<RingElement>) -> Result<Presentation> {
        let n = coeffs.len();
        Presentation::new(ring, n, vec![vec![coeffs]])
    }

    /// Coefficients given as arbitrary Witt vectors: `a_ij(V) = sum_k V^k w_ijk`.
    /// They are brought to Teichmuller form by computing canonical
    /// coordinates in the module they present, iterating over levels.
    pub fn from_witt_coefficients(
        ring: &Ring,
        n: usize,
        coeffs: Vec<Vec<Vec<WittVector>>>,
    ) -> Result<Presentation> {
        let r = coeffs.len();
        for (i, row) in coeffs.iter().enumerate() {
            if row.len() != r || row.iter().any(|l| l.len() != n) {
                return Err(Error::Shape(format!("row {} has the wrong shape", i + 1)));
            }
            for w in row.iter().flatten() {
                if w.len() != n || w.ring() != ring {
                    return Err(Error::ParamsMismatch(format!("{w} is not in W_{n}({ring})")));
                }
            }
        }
        // raw terms of sum_j sum_k V^k w_ijk e_j, for each i
        let raw_rows: Vec<Vec<RawTerm>> = (0..r)
            .map(|i| {
                let mut raw = Vec::new();
                for j in 0..r {
                    for (k, w) in coeffs[i][j].iter().enumerate() {
                        for (m, c) in w.components().iter().enumerate() {
                            if k + m < n && !c.is_zero() {
                                raw.push(RawTerm { slot: k + m, gen: j, fdeg: m as u32, c: c.clone() });
                            }
                        }
                    }
                }
                raw
            })
            .collect();
        let mut pres = Presentation::from_flat(ring, n, r, vec![ring.zero(); r * r * n])?;
        for _ in 0..=n {
            let mut next = pres.clone();
            for (i, raw) in raw_rows.iter().enumerate() {
                let coords = pres.normalize(raw.clone())?;
                for k in 0..n {
                    for j in 0..r {
                        next.coeffs[(i * r + j) * n + k] = coords[k * r + j].clone();
                    }
                }
            }
            if next == pres {
                return Ok(pres);
            }
            pres = next;
        }
        Err(Error::Inconsistent("coefficient conversion did not stabilize".into()))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// `a_ijk` with 0-based indices.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &RingElement {
        &self.coeffs[(i * self.r + j) * self.n + k]
    }

    /// `a_ij0, ..., a_ij(n-1)`.
    pub fn coeff_list(&self, i: usize, j: usize) -> &[RingElement] {
        let start = (i * self.r + j) * self.n;
        &self.coeffs[start..start + self.n]
    }

    pub fn flat_coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    /// `a_ij(V)` as an element of `E_n`.
    pub fn coeff_operator(&self, i: usize, j: usize) -> Result<CartierElement> {
        let mut acc = CartierElement::zero(&self.ring, self.n);
        for (k, c) in self.coeff_list(i, j).iter().enumerate() {
            acc = acc.add(&CartierElement::monomial(self.n, k, c, 0))?;
        }
        Ok(acc)
    }

    /// Reduction modulo `V^m`, a presentation at level `m`.
    pub fn truncate(&self, m: usize) -> Result<Presentation> {
        if m == 0 || m > self.n {
            return Err(Error::Range(format!("cannot truncate level {} to {m}", self.n)));
        }
        let mut coeffs = Vec::with_capacity(self.r * self.r * m);
        for ij in 0..self.r * self.r {
            coeffs.extend_from_slice(&self.coeffs[ij * self.n..ij * self.n + m]);
        }
        Ok(Presentation { ring: self.ring.clone(), n: m, r: self.r, coeffs })
    }

    /// A presentation at level `n + 1` truncating to this one; `layer[i][j]`
    /// is the new coefficient `a_ijn` (zero by default).
    pub fn lift_level(&self, layer: Option<&[Vec<RingElement>]>) -> Result<Presentation> {
        let n = self.n;
        let mut coeffs = Vec::with_capacity(self.r * self.r * (n + 1));
        for i in 0..self.r {
            for j in 0..self.r {
                coeffs.extend_from_slice(self.coeff_list(i, j));
                let extra = match layer {
                    Some(l) => {
                        let c = l
                            .get(i)
                            .and_then(|row| row.get(j))
                            .ok_or_else(|| Error::Shape(format!("layer must be {0}x{0}", self.r)))?;
                        if c.ring() != &self.ring {
                            return Err(Error::RingMismatch(format!("{c} is not in {}", self.ring)));
                        }
                        c.clone()
                    }
                    None => self.ring.zero(),
                };
                coeffs.push(extra);
            }
        }
        Ok(Presentation { ring: self.ring.clone(), n: n + 1, r: self.r, coeffs })
    }

    /// Apply a ring map to every coefficient.
    pub fn base_change(&self, h: &RingHom) -> Result<Presentation> {
        if h.source() != &self.ring {
            return Err(Error::RingMismatch(format!(
                "presentation over {} cannot be base changed along a map from {}",
                self.ring,
                h.source()
            )));
        }
        let coeffs = self.coeffs.iter().map(|c| h.apply(c)).collect::<Result<Vec<_>>>()?;
        Ok(Presentation { ring: h.target().clone(), n: self.n, r: self.r, coeffs })
    }

    /// A presentation over the source of `h` whose base change along `h` is
    /// this one, using the monomial-basis section of `h`.
    pub fn lift_along(&self, h: &RingHom) -> Result<Presentation> {
        if h.target() != &self.ring {
            return Err(Error::RingMismatch(format!(
                "presentation over {} cannot be lifted along a map to {}",
                self.ring,
                h.target()
            )));
        }
        let coeffs = self.coeffs.iter().map(|c| h.lift_element(c)).collect::<Result<Vec<_>>>()?;
        let lifted = Presentation { ring: h.source().clone(), n: self.n, r: self.r, coeffs };
        if &lifted.base_change(h)? != self {
            return Err(Error::NoSection("lift does not reduce to the presentation".into()));
        }
        Ok(lifted)
    }

    /// [`Presentation::base_change`] through a tabulated map.
    pub fn base_change_table(&self, t: &HomTable) -> Result<Presentation> {
        if t.hom().source() != &self.ring {
            return Err(Error::RingMismatch(format!("map does not start at {}", self.ring)));
        }
        let coeffs = self.coeffs.iter().map(|c| t.apply(c)).collect::<Result<Vec<_>>>()?;
        Ok(Presentation { ring: t.hom().target().clone(), n: self.n, r: self.r, coeffs })
    }

    /// [`Presentation::lift_along`] through a tabulated map.
    pub fn lift_along_table(&self, t: &HomTable) -> Result<Presentation> {
        if t.hom().target() != &self.ring {
            return Err(Error::RingMismatch(format!("map does not end at {}", self.ring)));
        }
        let coeffs = self.coeffs.iter().map(|c| t.lift_element(c)).collect::<Result<Vec<_>>>()?;
        let lifted = Presentation { ring: t.hom().source().clone(), n: self.n, r: self.r, coeffs };
        if &lifted.base_change_table(t)? != self {
            return Err(Error::NoSection("lift does not reduce to the presentation".into()));
        }
        Ok(lifted)
    }

    /// `(r, matrix of F on M/VM)`: the slot-0 coefficients.
    pub fn lie_data(&self) -> (usize, Vec<Vec<RingElement>>) {
        let m = (0..self.r)
            .map(|i| (0..self.r).map(|j| self.coeff(i, j, 0).clone()).collect())
            .collect();
        (self.r, m)
    }

    pub fn zero_coords(&self) -> Coords {
        vec![self.ring.zero(); self.n * self.r]
    }

    /// Coordinates of the generator `e_j`.
    pub fn generator_coords(&self, j: usize) -> Coords {
        let mut c = self.zero_coords();
        c[j] = self.ring.one();
        c
    }

    fn check_coords(&self, x: &Coords) -> Result<()> {
        if x.len() != self.n * self.r {
            return Err(Error::Shape(format!(
                "expected {} coordinates, got {}",
                self.n * self.r,
                x.len()
            )));
        }
        if x.iter().any(|c| c.ring() != &self.ring) {
            return Err(Error::RingMismatch(format!("coordinates must lie in {}", self.ring)));
        }
        Ok(())
    }

    /// Turn raw terms into canonical coordinates.
    pub(crate) fn normalize(&self, raw: Vec<RawTerm>) -> Result<Coords> {
        let (n, r) = (self.n, self.r);
        let mut buckets: Vec<Vec<(usize, u32, RingElement)>> = vec![Vec::new(); n];
        for t in raw {
            if t.slot < n && !t.c.is_zero() {
                buckets[t.slot].push((t.gen, t.fdeg, t.c));
            }
        }
        let mut out = self.zero_coords();
        for i in 0..n {
            let mut pending = std::mem::take(&mut buckets[i]);
            let mut plain: Vec<Vec<RingElement>> = vec![Vec::new(); r];
            while let Some((j, s, c)) = pending.pop() {
                if s == 0 {
                    plain[j].push(c);
                    continue;
                }
                // V^i[c]F^s e_j = sum_{k,l} V^{i+l}[c^{p^l} a_jkl^{p^{s-1}}]F^{s-1} e_k
                for k in 0..r {
                    for l in 0..n - i {
                        let a = self.coeff(j, k, l);
                        if a.is_zero() {
                            continue;
                        }
                        let c2 = c.frobenius_pow(l as u32).mul(&a.frobenius_pow(s - 1));
                        if c2.is_zero() {
                            continue;
                        }
                        if l == 0 {
                            pending.push((k, s - 1, c2));
                        } else {
                            buckets[i + l].push((k, s - 1, c2));
                        }
                    }
                }
            }
            for (j, mut cs) in plain.into_iter().enumerate() {
                match cs.len() {
                    0 => {}
                    1 => out[i * r + j] = cs.pop().unwrap(),
                    // W_1 addition is ring addition
                    _ if i + 1 == n => out[i * r + j] = cs.iter().fold(self.ring.zero(), |acc, c| acc.add(c)),
                    _ => {
                        let mut w = WittVector::teichmuller(&cs[0], n - i);
                        for c in &cs[1..] {
                            w = w.add_teichmuller(c)?;
                        }
                        for (k, wk) in w.into_components().into_iter().enumerate() {
                            if k == 0 {
                                out[i * r + j] = wk;
                            } else if !wk.is_zero() {
                                buckets[i + k].push((j, k as u32, wk));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn coords_as_raw(&self, x: &Coords, out: &mut Vec<RawTerm>) {
        for (idx, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out.push(RawTerm { slot: idx / self.r, gen: idx % self.r, fdeg: 0, c: c.clone() });
            }
        }
    }

    pub fn add_coords(&self, x: &Coords, y: &Coords) -> Result<Coords> {
        self.check_coords(x)?;
        self.check_coords(y)?;
        if y.iter().all(|c| c.is_zero()) {
            return Ok(x.clone());
        }
        if x.iter().all(|c| c.is_zero()) {
            return Ok(y.clone());
        }
        let mut raw = Vec::new();
        self.coords_as_raw(x, &mut raw);
        self.coords_as_raw(y, &mut raw);
        self.normalize(raw)
    }

    pub fn v_coords(&self, x: &Coords) -> Coords {
        let mut out = self.zero_coords();
        let len = self.r * (self.n - 1);
        out[self.r..].clone_from_slice(&x[..len]);
        out
    }

    pub fn f_coords(&self, x: &Coords) -> Result<Coords> {
        self.check_coords(x)?;
        let raw = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| RawTerm { slot: idx / self.r, gen: idx % self.r, fdeg: 1, c: c.frobenius() })
            .collect();
        self.normalize(raw)
    }

    /// Left action of `E_n`:
    /// `V^r[x]F^s * V^i[c] e_j = V^{r+i}[x^{p^i} c^{p^s}]F^s e_j`.
    pub fn act_coords(&self, e: &CartierElement, x: &Coords) -> Result<Coords> {
        self.check_coords(x)?;
        if e.ring() != &self.ring || e.level() != self.n {
            return Err(Error::ParamsMismatch(format!(
                "operator over E_{}({}) acting on a module over E_{}({})",
                e.level(),
                e.ring(),
                self.n,
                self.ring
            )));
        }
        let mut raw = Vec::new();
        for (&(rr, s), a) in e.terms() {
            for (idx, c) in x.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (i, j) = (idx / self.r, idx % self.r);
                if rr + i >= self.n {
                    continue;
                }
                let coeff = a.frobenius_pow(i as u32).mul(&c.frobenius_pow(s));
                raw.push(RawTerm { slot: rr + i, gen: j, fdeg: s, c: coeff });
            }
        }
        self.normalize(raw)
    }

    pub fn scalar_coords(&self, w: &WittVector, x: &Coords) -> Result<Coords> {
        if w.len() != self.n {
            return Err(Error::ParamsMismatch(format!("scalar must lie in W_{}", self.n)));
        }
        self.act_coords(&CartierElement::from_witt(w), x)
    }

    pub fn neg_coords(&self, x: &Coords) -> Result<Coords> {
        let minus_one = WittVector::from_int(&self.ring, self.n, -1)?;
        self.scalar_coords(&minus_one, x)
    }

    pub fn sub_coords(&self, x: &Coords, y: &Coords) -> Result<Coords> {
        self.add_coords(x, &self.neg_coords(y)?)
    }

    /// Coordinates of `m` with respect to other generators `y_1, ..., y_r`
    /// whose reductions modulo `V` form an invertible matrix.
    pub fn coords_in_generators(&self, ys: &[Coords], m: &Coords) -> Result<Coords> {
        let r = self.r;
        if ys.len() != r {
            return Err(Error::Shape(format!("need {r} generators")));
        }
        let y0: Vec<Vec<RingElement>> = ys.iter().map(|y| y[..r].to_vec()).collect();
        let inv = linalg::inverse(&y0, &self.ring)
            .ok_or_else(|| Error::Precondition("generators are not invertible modulo V".into()))?;
        self.coords_in_generators_with_inverse(ys, &inv, m)
    }

    pub(crate) fn coords_in_generators_with_inverse(
        &self,
        ys: &[Coords],
        y0_inv: &[Vec<RingElement>],
        m: &Coords,
    ) -> Result<Coords> {
        let (n, r) = (self.n, self.r);
        let mut residual = m.clone();
        let mut out = self.zero_coords();
        for i in 0..n {
            let row: Vec<RingElement> = residual[i * r..(i + 1) * r].to_vec();
            if row.iter().all(|c| c.is_zero()) {
                continue;
            }
            // b = row * Y0^{-1}
            let b: Vec<RingElement> = (0..r)
                .map(|k| (0..r).fold(self.ring.zero(), |acc, j| acc.add(&row[j].mul(&y0_inv[j][k]))))
                .collect();
            let mut raw = Vec::new();
            for (k, bk) in b.iter().enumerate() {
                if bk.is_zero() {
                    continue;
                }
                // V^i[b_k] y_k
                for (idx, c) in ys[k].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (ii, j) = (idx / r, idx % r);
                    if i + ii < n {
                        let coeff = bk.frobenius_pow(ii as u32).mul(c);
                        raw.push(RawTerm { slot: i + ii, gen: j, fdeg: 0, c: coeff });
                    }
                }
            }
            let part = self.normalize(raw)?;
            residual = self.sub_coords(&residual, &part)?;
            if residual[i * r..(i + 1) * r].iter().any(|c| !c.is_zero()) {
                return Err(Error::Inconsistent("change of generators did not clear a level".into()));
            }
            for k in 0..r {
                out[i * r + k] = b[k].clone();
            }
        }
        Ok(out)
    }

    /// The presentation of the same module with respect to generators `ys`.
    pub fn rebase(&self, ys: &[Coords]) -> Result<Presentation> {
        let r = self.r;
        let y0: Vec<Vec<RingElement>> = ys.iter().map(|y| y[..r].to_vec()).collect();
        let inv = linalg::inverse(&y0, &self.ring)
            .ok_or_else(|| Error::Precondition("generators are not invertible modulo V".into()))?;
        self.rebase_with_inverse(ys, &inv)
    }

    pub(crate) fn rebase_with_inverse(&self, ys: &[Coords], y0_inv: &[Vec<RingElement>]) -> Result<Presentation> {
        let (n, r) = (self.n, self.r);
        let mut coeffs = vec![self.ring.zero(); r * r * n];
        for (i, y) in ys.iter().enumerate() {
            let fy = self.f_coords(y)?;
            let b = self.coords_in_generators_with_inverse(ys, y0_inv, &fy)?;
            for k in 0..n {
                for j in 0..r {
                    coeffs[(i * r + j) * n + k] = b[k * r + j].clone();
                }
            }
        }
        Ok(Presentation { ring: self.ring.clone(), n, r, coeffs })
    }

    /// All coordinate vectors, for a finite ring.
    pub fn all_coords(&self) -> Result<Vec<Coords>> {
        let elems: Vec<RingElement> = self.ring.elements()?.collect();
        let len = self.n * self.r;
        let total = (elems.len() as u128).checked_pow(len as u32);
        if total.is_none_or(|t| t > 1 << 24) {
            return Err(Error::BudgetExceeded { needed: total.unwrap_or(u128::MAX), budget: 1 << 24 });
        }
        let mut out: Vec<Coords> = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * elems.len());
            for prefix in &out {
                for e in &elems {
                    let mut v = prefix.clone();
                    v.push(e.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Number of elements `|R|^{nr}`, for a finite ring.
    pub fn cardinality(&self) -> Option<u128> {
        self.ring.cardinality()?.checked_pow((self.n * self.r) as u32)
    }

    pub fn into_arc(self) -> Arc<Presentation> {
        Arc::new(self)
    }

    pub fn element(self: &Arc<Self>, coords: Coords) -> Result<ModuleElement> {
        self.check_coords(&coords)?;
        Ok(ModuleElement { pres: self.clone(), coords })
    }

    pub fn generator(self: &Arc<Self>, j: usize) -> ModuleElement {
        ModuleElement { pres: self.clone(), coords: self.generator_coords(j) }
    }

    pub fn zero(self: &Arc<Self>) -> ModuleElement {
        ModuleElement { pres: self.clone(), coords: self.zero_coords() }
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// An element of the module presented by an `Arc<Presentation>`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    pres: Arc<Presentation>,
    coords: Coords,
}

impl ModuleElement {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Coordinate `c_ij` of `V^i [c_ij] e_j`.
    pub fn coord(&self, i: usize, j: usize) -> &RingElement {
        &self.coords[i * self.pres.r + j]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn same_owner(&self, other: &ModuleElement) -> Result<()> {
        if !Arc::ptr_eq(&self.pres, &other.pres) && self.pres != other.pres {
            return Err(Error::ParamsMismatch("elements of different modules".into()));
        }
        Ok(())
    }

    fn wrap(&self, coords: Coords) -> ModuleElement {
        ModuleElement { pres: self.pres.clone(), coords }
    }

    pub fn add(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.same_owner(other)?;
        Ok(self.wrap(self.pres.add_coords(&self.coords, &other.coords)?))
    }

    pub fn neg(&self) -> Result<ModuleElement> {
        Ok(self.wrap(self.pres.neg_coords(&self.coords)?))
    }

    pub fn sub(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.same_owner(other)?;
        Ok(self.wrap(self.pres.sub_coords(&self.coords, &other.coords)?))
    }

    pub fn v(&self) -> ModuleElement {
        self.wrap(self.pres.v_coords(&self.coords))
    }

    pub fn f(&self) -> Result<ModuleElement> {
        Ok(self.wrap(self.pres.f_coords(&self.coords)?))
    }

    pub fn scalar(&self, w: &WittVector) -> Result<ModuleElement> {
        Ok(self.wrap(self.pres.scalar_coords(w, &self.coords)?))
    }

    pub fn act(&self, e: &CartierElement) -> Result<ModuleElement> {
        Ok(self.wrap(self.pres.act_coords(e, &self.coords)?))
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.pres.r;
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| {
                let (i, j) = (idx / r, idx % r);
                format!("{}e{}", crate::cartier::format_monomial(i, c, 0), j + 1)
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Ring {
        Ring::prime_field(2).unwrap()
    }

    #[test]
    fn e_plus_e_in_the_z4_module() {
        let r = f2();
        let m = Presentation::rank_one(&r, vec![r.one(), r.zero()]).unwrap().into_arc();
        let e = m.generator(0);
        let two_e = e.add(&e).unwrap();
        assert_eq!(two_e.to_string(), "V[1]e1");
        assert_eq!(e.f().unwrap(), e);
        assert!(two_e.add(&two_e).unwrap().is_zero());
    }

    #[test]
    fn f_kills_e_in_the_alpha_dual_module() {
        let r = f2();
        let m = Presentation::rank_one(&r, vec![r.zero(), r.zero()]).unwrap().into_arc();
        let e = m.generator(0);
        assert!(e.f().unwrap().is_zero());
        // e + e = V[1]F e = 0
        assert!(e.add(&e).unwrap().is_zero());
    }

    #[test]
    fn truncate_and_lift_level_round_trip() {
        let r = Ring::parse_spec("poly 3 vars=l").unwrap();
        let l2 = r.parse("l^2").unwrap();
        let p = Presentation::rank_one(&r, vec![l2.clone(), r.zero()]).unwrap();
        let up = p.lift_level(None).unwrap();
        assert_eq!(up.level(), 3);
        assert_eq!(up.truncate(2).unwrap(), p);
        assert_eq!(p.truncate(2).unwrap(), p);
        assert_eq!(p.truncate(1).unwrap().coeff_list(0, 0), &[l2]);
        assert!(p.truncate(3).is_err());
    }

    #[test]
    fn witt_coefficients_of_teichmuller_shape_are_unchanged() {
        let r = Ring::parse_spec("mq 2 vars=e bounds=2").unwrap();
        let e = r.var("e").unwrap();
        let p = Presentation::rank_one(&r, vec![e.clone(), r.one()]).unwrap();
        let w = vec![vec![vec![WittVector::teichmuller(&e, 2), WittVector::teichmuller(&r.one(), 2)]]];
        assert_eq!(Presentation::from_witt_coefficients(&r, 2, w).unwrap(), p);
    }

    #[test]
    fn witt_coefficient_two_becomes_v_slot() {
        // F e = 2e = V[1]F e forces F e = V^2[1]F^2 e = 0
        let r = f2();
        let two = WittVector::from_int(&r, 2, 2).unwrap();
        let w = vec![vec![vec![two, WittVector::zero(&r, 2)]]];
        let p = Presentation::from_witt_coefficients(&r, 2, w).unwrap();
        assert!(p.flat_coeffs().iter().all(|c| c.is_zero()));
    }
}
