//! Finitely presented F_p-algebras with exact normal forms.
//!
//! Every ring has the shape F_p[x_1, ..., x_k]/(g_1(x_1), ..., g_k(x_k)) where
//! each relation is absent (a free variable), `x^m`, or a monic univariate
//! polynomial. An optional coefficient field F_q = F_p[x]/(f) is carried as
//! an extra generator named `x`, listed first.
//!
//! Elements are sparse sums of reduced monomials with coefficients in F_p.

mod hom;
pub mod linalg;
pub(crate) mod parse;
mod unipoly;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use smallvec::SmallVec;

use crate::error::{parse_err, Error, Result};
pub use hom::{HomTable, RingHom};
pub(crate) use unipoly::{inv_mod_p, mul_mod_p};
pub use unipoly::{is_prime, UniPoly};

/// Maximum number of generators (including the coefficient-field generator).
pub const MAX_VARS: usize = 6;

pub type Exponents = [u16; MAX_VARS];
type Terms = SmallVec<[(Exponents, u32); 4]>;

/// Monomial order: exponents compared from the last generator to the first.
pub fn mono_cmp(a: &Exponents, b: &Exponents) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Name of the coefficient-field generator.
pub const FIELD_VAR: &str = "x";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Free,
    /// `v^m = 0`.
    Nilpotent(u32),
    /// `f(v) = 0` for a monic univariate `f`.
    Monic(UniPoly),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub relation: Relation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    PrimeField,
    GaloisField,
    PolyRing,
    QuotientRing,
    UnivariateQuotient,
}

/// Textual description of a ring; see [`Ring::new`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub p: u32,
    /// Modulus of the coefficient field F_q over F_p, in the variable `x`.
    pub field: Option<UniPoly>,
    pub gens: Vec<Generator>,
}

impl RingSpec {
    pub fn prime_field(p: u32) -> Self {
        RingSpec { p, field: None, gens: vec![] }
    }

    /// F_{p^d} with the first irreducible modulus of degree `d`.
    pub fn galois_field(p: u32, d: usize) -> Self {
        if d == 1 {
            return RingSpec::prime_field(p);
        }
        RingSpec::galois_field_with(p, UniPoly::first_irreducible(p, d))
    }

    pub fn galois_field_with(p: u32, modulus: UniPoly) -> Self {
        RingSpec { p, field: Some(modulus), gens: vec![] }
    }

    pub fn polynomial(p: u32, vars: &[&str]) -> Self {
        RingSpec {
            p,
            field: None,
            gens: vars
                .iter()
                .map(|v| Generator { name: v.to_string(), relation: Relation::Free })
                .collect(),
        }
    }

    /// F_p[v_1, ..., v_k]/(v_1^{m_1}, ..., v_k^{m_k}).
    pub fn truncated(p: u32, vars: &[(&str, u32)]) -> Self {
        RingSpec {
            p,
            field: None,
            gens: vars
                .iter()
                .map(|(v, m)| Generator { name: v.to_string(), relation: Relation::Nilpotent(*m) })
                .collect(),
        }
    }

    pub fn univariate(p: u32, var: &str, modulus: UniPoly) -> Self {
        RingSpec {
            p,
            field: None,
            gens: vec![Generator { name: var.to_string(), relation: Relation::Monic(modulus) }],
        }
    }

    /// The same presentation with an extra generator appended.
    pub fn with_generator(mut self, name: &str, relation: Relation) -> Self {
        self.gens.push(Generator { name: name.to_string(), relation });
        self
    }

    pub fn kind(&self) -> RingKind {
        match (&self.field, self.gens.as_slice()) {
            (None, []) => RingKind::PrimeField,
            (Some(_), []) => RingKind::GaloisField,
            (_, gens) if gens.iter().all(|g| g.relation == Relation::Free) => RingKind::PolyRing,
            (_, [g]) if matches!(g.relation, Relation::Monic(_)) => RingKind::UnivariateQuotient,
            _ => RingKind::QuotientRing,
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        let field_suffix = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            match &self.field {
                Some(m) => write!(f, " gf={}", m.format(FIELD_VAR)),
                None => Ok(()),
            }
        };
        match self.kind() {
            RingKind::PrimeField => write!(f, "fp {p}"),
            RingKind::GaloisField => {
                let m = self.field.as_ref().unwrap();
                write!(f, "gf {p} d={} mod={}", m.degree().unwrap_or(0), m.format(FIELD_VAR))
            }
            RingKind::PolyRing => {
                let vars: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
                write!(f, "poly {p} vars={}", vars.join(","))?;
                field_suffix(f)
            }
            RingKind::UnivariateQuotient => {
                let g = &self.gens[0];
                let Relation::Monic(m) = &g.relation else { unreachable!() };
                write!(f, "uq {p} {} mod={}", g.name, m.format(&g.name))?;
                field_suffix(f)
            }
            RingKind::QuotientRing => {
                let vars: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
                let bounds: Vec<String> = self
                    .gens
                    .iter()
                    .map(|g| match &g.relation {
                        Relation::Free => "*".to_string(),
                        Relation::Nilpotent(m) => m.to_string(),
                        Relation::Monic(m) => format!("{{{}}}", m.format(&g.name)),
                    })
                    .collect();
                write!(f, "mq {p} vars={} bounds={}", vars.join(","), bounds.join(","))?;
                field_suffix(f)
            }
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_ring_spec(s)
    }
}

#[derive(Debug)]
enum VarKind {
    Free,
    Nilpotent(u16),
    Modulus {
        degree: u16,
        modulus: UniPoly,
        /// `v^k mod f` for small `k`, as dense coefficient vectors of length `degree`.
        table: Vec<Vec<u32>>,
    },
}

#[derive(Debug)]
struct Var {
    name: String,
    kind: VarKind,
}

#[derive(Debug)]
struct RingData {
    spec: RingSpec,
    p: u32,
    vars: Vec<Var>,
    has_modulus: bool,
    is_field: bool,
    basis: OnceLock<Vec<Exponents>>,
    finite_basis: OnceLock<Vec<Exponents>>,
}

/// A ring built from a [`RingSpec`]. Cloning is cheap.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Ring {}

impl Hash for Ring {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.spec.hash(state);
    }
}

fn modulus_table(f: &UniPoly, p: u32, len: usize) -> Vec<Vec<u32>> {
    let d = f.degree().unwrap();
    (0..len)
        .map(|k| {
            let r = UniPoly::monomial(k).rem(f, p);
            let mut v = r.coeffs().to_vec();
            v.resize(d, 0);
            v
        })
        .collect()
}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Ring> {
        let p = spec.p;
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p > u16::MAX as u32 {
            return Err(Error::InvalidSpec(format!("characteristic {p} is too large")));
        }
        let mut vars = Vec::new();
        let table_len = |d: usize| (2 * d).max(p as usize * d) + 1;
        if let Some(f) = &spec.field {
            check_modulus(f, FIELD_VAR, p)?;
            if !f.is_irreducible(p) {
                return Err(Error::Reducible(f.format(FIELD_VAR), p));
            }
            let d = f.degree().unwrap();
            vars.push(Var {
                name: FIELD_VAR.to_string(),
                kind: VarKind::Modulus {
                    degree: d as u16,
                    modulus: f.clone(),
                    table: modulus_table(f, p, table_len(d)),
                },
            });
        }
        for g in &spec.gens {
            if !parse::is_valid_var_name(&g.name) {
                return Err(Error::InvalidSpec(format!("bad variable name `{}`", g.name)));
            }
            if vars.iter().any(|v| v.name == g.name) {
                return Err(Error::InvalidSpec(format!("duplicate variable `{}`", g.name)));
            }
            let kind = match &g.relation {
                Relation::Free => VarKind::Free,
                Relation::Nilpotent(m) => {
                    if *m == 0 || *m > u16::MAX as u32 {
                        return Err(Error::InvalidSpec(format!("bound {m} out of range")));
                    }
                    VarKind::Nilpotent(*m as u16)
                }
                Relation::Monic(f) => {
                    check_modulus(f, &g.name, p)?;
                    let d = f.degree().unwrap();
                    if f.coeffs()[..d].iter().all(|&c| c == 0) {
                        VarKind::Nilpotent(d as u16)
                    } else {
                        VarKind::Modulus {
                            degree: d as u16,
                            modulus: f.clone(),
                            table: modulus_table(f, p, table_len(d)),
                        }
                    }
                }
            };
            vars.push(Var { name: g.name.clone(), kind });
        }
        if vars.len() > MAX_VARS {
            return Err(Error::InvalidSpec(format!("at most {MAX_VARS} generators are supported")));
        }
        let has_modulus = vars.iter().any(|v| matches!(v.kind, VarKind::Modulus { .. }));
        let is_field = match spec.gens.as_slice() {
            [] => true,
            [g] if spec.field.is_none() => {
                matches!(&g.relation, Relation::Monic(f) if f.is_irreducible(p))
                    || g.relation == Relation::Nilpotent(1)
            }
            _ => false,
        };
        Ok(Ring(Arc::new(RingData {
            spec,
            p,
            vars,
            has_modulus,
            is_field,
            basis: OnceLock::new(),
            finite_basis: OnceLock::new(),
        })))
    }

    pub fn parse_spec(text: &str) -> Result<Ring> {
        Ring::new(text.parse()?)
    }

    pub fn prime_field(p: u32) -> Result<Ring> {
        Ring::new(RingSpec::prime_field(p))
    }

    pub fn galois_field(p: u32, d: usize) -> Result<Ring> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ring::new(RingSpec::galois_field(p, d))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn is_finite(&self) -> bool {
        self.0.vars.iter().all(|v| !matches!(v.kind, VarKind::Free))
    }

    pub fn is_field(&self) -> bool {
        self.0.is_field
    }

    pub fn var_count(&self) -> usize {
        self.0.vars.len()
    }

    /// Generator names in storage order (the field generator first, if any).
    pub fn var_names(&self) -> Vec<&str> {
        self.0.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        let name = parse::canonical_var_name(name);
        self.0.vars.iter().position(|v| v.name == name)
    }

    /// Dimension over F_p, if finite.
    pub fn dimension(&self) -> Option<usize> {
        self.is_finite().then(|| self.basis().len())
    }

    /// Number of elements, if finite and representable.
    pub fn cardinality(&self) -> Option<u128> {
        let dim = self.dimension()?;
        (self.0.p as u128).checked_pow(dim as u32)
    }

    fn var_bound(&self, v: usize) -> Option<u16> {
        match &self.0.vars[v].kind {
            VarKind::Free => None,
            VarKind::Nilpotent(m) => Some(*m),
            VarKind::Modulus { degree, .. } => Some(*degree),
        }
    }

    fn box_basis(&self, only_finite: bool) -> Vec<Exponents> {
        let mut out = vec![[0u16; MAX_VARS]];
        for v in 0..self.0.vars.len() {
            let bound = match self.var_bound(v) {
                Some(b) => b,
                None if only_finite => 1,
                None => panic!("basis of an infinite ring"),
            };
            let mut next = Vec::with_capacity(out.len() * bound as usize);
            for e in &out {
                for k in 0..bound {
                    let mut e2 = *e;
                    e2[v] = k;
                    next.push(e2);
                }
            }
            out = next;
        }
        out.sort_unstable_by(mono_cmp);
        out
    }

    /// Monomial basis in ascending order. Panics for infinite rings.
    pub fn basis(&self) -> &[Exponents] {
        assert!(self.is_finite(), "basis of an infinite ring");
        self.0.basis.get_or_init(|| self.box_basis(false))
    }

    /// Monomial basis of the finite part (free variables set to exponent 0).
    fn finite_basis(&self) -> &[Exponents] {
        self.0.finite_basis.get_or_init(|| self.box_basis(true))
    }

    pub fn zero(&self) -> RingElement {
        RingElement { ring: self.clone(), terms: Terms::new() }
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> RingElement {
        let c = c.rem_euclid(self.0.p as i64) as u32;
        let mut terms = Terms::new();
        if c != 0 {
            terms.push(([0; MAX_VARS], c));
        }
        RingElement { ring: self.clone(), terms }
    }

    pub fn var(&self, name: &str) -> Result<RingElement> {
        let v = self
            .var_index(name)
            .ok_or_else(|| Error::InvalidSpec(format!("no variable `{name}` in {self}")))?;
        Ok(self.gen(v))
    }

    /// The generator with storage index `v`.
    pub fn gen(&self, v: usize) -> RingElement {
        let mut e = [0u16; MAX_VARS];
        e[v] = 1;
        self.monomial(e, 1)
    }

    /// `c * x^e` reduced to normal form.
    pub fn monomial(&self, e: Exponents, c: u32) -> RingElement {
        let mut acc = Vec::new();
        self.reduce_into(e, c % self.0.p, &mut acc);
        RingElement { ring: self.clone(), terms: self.merge(acc) }
    }

    pub fn parse(&self, text: &str) -> Result<RingElement> {
        let terms = parse::parse_polynomial_terms(text)?;
        let mut acc = self.zero();
        for m in terms {
            let mut term = self.from_int(m.coeff);
            for (name, e) in m.factors {
                let v = self
                    .var_index(&name)
                    .ok_or_else(|| parse_err(format!("unknown variable `{name}` in {self}")))?;
                term = term.mul(&self.gen(v).pow(e as u64));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Reduce `c * x^e` and push the resulting terms (unmerged).
    fn reduce_into(&self, e: Exponents, c: u32, out: &mut Vec<(Exponents, u32)>) {
        if c == 0 {
            return;
        }
        let p = self.0.p;
        let mut needs_expand = false;
        for (v, var) in self.0.vars.iter().enumerate() {
            match &var.kind {
                VarKind::Nilpotent(m) if e[v] >= *m => return,
                VarKind::Modulus { degree, .. } if e[v] >= *degree => needs_expand = true,
                _ => {}
            }
        }
        if !needs_expand {
            out.push((e, c));
            return;
        }
        let mut partial: SmallVec<[(Exponents, u32); 8]> = SmallVec::new();
        partial.push((e, c));
        for (v, var) in self.0.vars.iter().enumerate() {
            let VarKind::Modulus { degree, modulus, table } = &var.kind else {
                continue;
            };
            if e[v] < *degree {
                continue;
            }
            let computed;
            let row: &[u32] = match table.get(e[v] as usize) {
                Some(r) => r,
                None => {
                    let r = UniPoly::monomial(e[v] as usize).rem(modulus, p);
                    let mut dense = r.coeffs().to_vec();
                    dense.resize(*degree as usize, 0);
                    computed = dense;
                    &computed
                }
            };
            let mut next = SmallVec::new();
            for (pe, pc) in &partial {
                for (k, &a) in row.iter().enumerate() {
                    if a != 0 {
                        let mut e2 = *pe;
                        e2[v] = k as u16;
                        next.push((e2, mul_mod_p(*pc, a, p)));
                    }
                }
            }
            partial = next;
        }
        out.extend(partial);
    }

    fn merge(&self, mut v: Vec<(Exponents, u32)>) -> Terms {
        let p = self.0.p;
        v.sort_unstable_by(|a, b| mono_cmp(&a.0, &b.0));
        let mut out = Terms::new();
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc = (*lc + c) % p;
                }
                _ => {
                    if let Some((_, 0)) = out.last() {
                        out.pop();
                    }
                    out.push((e, c));
                }
            }
        }
        if let Some((_, 0)) = out.last() {
            out.pop();
        }
        out
    }

    /// All elements in lexicographic order of their coefficient vectors
    /// over the ascending monomial basis.
    pub fn elements(&self) -> Result<ElementIter> {
        if !self.is_finite() {
            return Err(Error::NotFinite);
        }
        let dim = self.basis().len();
        Ok(ElementIter { ring: self.clone(), digits: vec![0; dim], done: false })
    }

    /// The element with the given enumeration index.
    pub fn element_at(&self, mut index: u128) -> Result<RingElement> {
        let card = self.cardinality().ok_or(Error::NotFinite)?;
        if index >= card {
            return Err(Error::Range(format!("index {index} outside ring of size {card}")));
        }
        let p = self.0.p as u128;
        let basis = self.basis();
        let mut terms = Terms::new();
        for e in basis.iter().rev() {
            let d = (index % p) as u32;
            index /= p;
            if d != 0 {
                terms.push((*e, d));
            }
        }
        terms.reverse();
        Ok(RingElement { ring: self.clone(), terms })
    }

    /// Dense coefficients of `a` over the monomial basis.
    pub fn coordinates(&self, a: &RingElement) -> Vec<u32> {
        let basis = self.basis();
        let mut out = vec![0; basis.len()];
        for (e, c) in &a.terms {
            let i = basis.binary_search_by(|b| mono_cmp(b, e)).expect("element not in normal form");
            out[i] = *c;
        }
        out
    }

    pub fn from_coordinates(&self, coords: &[u32]) -> RingElement {
        let basis = self.basis();
        let terms = basis
            .iter()
            .zip(coords)
            .filter(|(_, c)| **c % self.0.p != 0)
            .map(|(e, c)| (*e, *c % self.0.p))
            .collect();
        RingElement { ring: self.clone(), terms }
    }
}

fn check_modulus(f: &UniPoly, var: &str, _p: u32) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::NotMonic(f.format(var)));
    }
    if f.degree() == Some(0) {
        return Err(Error::InvalidSpec(format!("modulus {} is constant", f.format(var))));
    }
    if f.degree().unwrap() > u16::MAX as usize / 2 {
        return Err(Error::InvalidSpec(format!("modulus {} has too large degree", f.format(var))));
    }
    Ok(())
}

pub struct ElementIter {
    ring: Ring,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for ElementIter {
    type Item = RingElement;
    fn next(&mut self) -> Option<RingElement> {
        if self.done {
            return None;
        }
        let item = self.ring.from_coordinates(&self.digits);
        let p = self.ring.0.p;
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < p {
                break;
            }
            self.digits[i] = 0;
        }
        Some(item)
    }
}

/// An element of a [`Ring`] in normal form.
#[derive(Clone)]
pub struct RingElement {
    ring: Ring,
    terms: Terms,
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Nonzero terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, u32)> + '_ {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == ([0; MAX_VARS], 1)
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> u32 {
        match self.terms.first() {
            Some((e, c)) if *e == [0; MAX_VARS] => *c,
            _ => 0,
        }
    }

    fn check_ring(&self, other: &RingElement) {
        assert!(
            self.ring == other.ring,
            "ring mismatch: {} vs {}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.check_ring(other);
        let p = self.ring.0.p;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Terms::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match mono_cmp(&a[i].0, &b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = (a[i].1 + b[j].1) % p;
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        RingElement { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> RingElement {
        let p = self.ring.0.p;
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, (p - c) % p)).collect(),
        }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.add(&other.neg())
    }

    /// Multiply by an integer.
    pub fn scale(&self, k: i64) -> RingElement {
        let p = self.ring.0.p;
        let k = k.rem_euclid(p as i64) as u32;
        if k == 0 {
            return self.ring.zero();
        }
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, mul_mod_p(*c, k, p))).collect(),
        }
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let ring = &self.ring;
        let p = ring.0.p;
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0u16; MAX_VARS];
                for v in 0..MAX_VARS {
                    e[v] = ea[v].checked_add(eb[v]).expect("exponent overflow");
                }
                let c = mul_mod_p(*ca, *cb, p);
                if ring.0.has_modulus {
                    ring.reduce_into(e, c, &mut acc);
                } else if !ring.exceeds_nilpotent(&e) {
                    acc.push((e, c));
                }
            }
        }
        RingElement { ring: ring.clone(), terms: ring.merge(acc) }
    }

    pub fn pow(&self, mut k: u64) -> RingElement {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `a^p`, using that coefficients lie in F_p.
    pub fn frobenius(&self) -> RingElement {
        let ring = &self.ring;
        let p = ring.0.p;
        let mut acc = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut e2 = [0u16; MAX_VARS];
            for v in 0..MAX_VARS {
                let x = e[v] as u32 * p;
                e2[v] = u16::try_from(x).expect("exponent overflow");
            }
            ring.reduce_into(e2, *c, &mut acc);
        }
        RingElement { ring: ring.clone(), terms: ring.merge(acc) }
    }

    /// `a^{p^k}`.
    pub fn frobenius_pow(&self, k: u32) -> RingElement {
        let mut out = self.clone();
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = out.frobenius();
        }
        out
    }

    /// Formal partial derivative in the named variable. Defined for free
    /// variables and for variables `v` with `v^m = 0` where `p | m`.
    pub fn derivative(&self, var: &str) -> Result<RingElement> {
        let ring = &self.ring;
        let v = ring
            .var_index(var)
            .ok_or_else(|| Error::InvalidSpec(format!("no variable `{var}` in {ring}")))?;
        match ring.0.vars[v].kind {
            VarKind::Free => {}
            VarKind::Nilpotent(m) if m as u32 % ring.0.p == 0 => {}
            _ => {
                return Err(Error::Precondition(format!(
                    "d/d{var} is not well defined on {ring}"
                )))
            }
        }
        let p = ring.0.p;
        let mut acc = Vec::new();
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let k = e[v] as u32 % p;
            if k == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[v] -= 1;
            acc.push((e2, mul_mod_p(*c, k, p)));
        }
        Ok(RingElement { ring: ring.clone(), terms: ring.merge(acc) })
    }

    /// Split into coefficients over the finite part, keyed by the monomial in
    /// free variables.
    fn split_free(&self) -> Vec<(Exponents, RingElement)> {
        let ring = &self.ring;
        let free: Vec<usize> = (0..ring.0.vars.len())
            .filter(|&v| matches!(ring.0.vars[v].kind, VarKind::Free))
            .collect();
        let mut parts: Vec<(Exponents, Terms)> = Vec::new();
        for (e, c) in &self.terms {
            let mut key = [0u16; MAX_VARS];
            let mut rest = *e;
            for &v in &free {
                key[v] = e[v];
                rest[v] = 0;
            }
            match parts.iter_mut().find(|(k, _)| *k == key) {
                Some((_, t)) => t.push((rest, *c)),
                None => parts.push((key, smallvec::smallvec![(rest, *c)])),
            }
        }
        parts
            .into_iter()
            .map(|(k, mut t)| {
                t.sort_unstable_by(|a, b| mono_cmp(&a.0, &b.0));
                (k, RingElement { ring: ring.clone(), terms: t })
            })
            .collect()
    }

    fn finite_part_matrix(&self) -> Vec<Vec<u32>> {
        let ring = &self.ring;
        let basis = ring.finite_basis();
        let dim = basis.len();
        let mut m = vec![vec![0u32; dim]; dim];
        for (col, b) in basis.iter().enumerate() {
            let prod = self.mul(&ring.monomial(*b, 1));
            for (e, c) in &prod.terms {
                let row = basis.binary_search_by(|b| mono_cmp(b, e)).expect("finite part not closed");
                m[row][col] = *c;
            }
        }
        m
    }

    fn is_unit_finite_part(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.ring.0.is_field {
            return true;
        }
        let m = self.finite_part_matrix();
        linalg::rank_mod_p(m, self.ring.0.p) == self.ring.finite_basis().len()
    }

    fn is_nilpotent_finite_part(&self) -> bool {
        let dim = self.ring.finite_basis().len() as u64;
        let mut x = self.clone();
        let mut power = 1u64;
        while power < dim && !x.is_zero() {
            x = x.frobenius();
            power *= self.ring.0.p as u64;
        }
        x.is_zero()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.split_free().iter().all(|(_, a)| a.is_nilpotent_finite_part())
    }

    pub fn is_unit(&self) -> bool {
        let parts = self.split_free();
        let mut constant_ok = false;
        for (k, a) in &parts {
            if *k == [0; MAX_VARS] {
                constant_ok = a.is_unit_finite_part();
            } else if !a.is_nilpotent_finite_part() {
                return false;
            }
        }
        constant_ok
    }

    fn inverse_finite_part(&self) -> Option<RingElement> {
        let ring = &self.ring;
        if self.is_zero() {
            return None;
        }
        if ring.0.is_field && ring.is_finite() {
            let q = ring.cardinality().unwrap();
            return Some(self.pow((q - 2) as u64));
        }
        let basis = ring.finite_basis();
        let m = self.finite_part_matrix();
        let mut rhs = vec![0u32; basis.len()];
        rhs[0] = 1;
        let sol = linalg::solve_mod_p(m, rhs, ring.0.p)?;
        let terms = basis
            .iter()
            .zip(sol)
            .filter(|(_, c)| *c != 0)
            .map(|(e, c)| (*e, c))
            .collect();
        Some(RingElement { ring: ring.clone(), terms })
    }

    pub fn inverse(&self) -> Option<RingElement> {
        if !self.is_unit() {
            return None;
        }
        let ring = &self.ring;
        let parts = self.split_free();
        let u = parts
            .iter()
            .find(|(k, _)| *k == [0; MAX_VARS])
            .map(|(_, a)| a.clone())
            .unwrap();
        let u_inv = u.inverse_finite_part()?;
        // a = u + n with n nilpotent: a^{-1} = u^{-1} * sum_k (-n u^{-1})^k
        let n = self.sub(&u);
        let t = n.mul(&u_inv).neg();
        let mut sum = ring.one();
        let mut power = ring.one();
        loop {
            power = power.mul(&t);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Some(u_inv.mul(&sum))
    }

    /// Position in [`Ring::elements`], for finite rings.
    pub fn enumeration_index(&self) -> Option<u128> {
        if !self.ring.is_finite() {
            return None;
        }
        let p = self.ring.0.p as u128;
        let basis = self.ring.basis();
        let mut idx = 0u128;
        for (e, c) in &self.terms {
            let i = basis.binary_search_by(|b| mono_cmp(b, e)).expect("element not in normal form");
            let place = p.checked_pow((basis.len() - 1 - i) as u32)?;
            idx = idx.checked_add(place.checked_mul(*c as u128)?)?;
        }
        Some(idx)
    }

    /// Apply a substitution of generator images (by storage index).
    pub(crate) fn substitute(&self, images: &[RingElement], target: &Ring) -> RingElement {
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut term = target.from_int(*c as i64);
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[v].pow(k as u64));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl Ring {
    fn exceeds_nilpotent(&self, e: &Exponents) -> bool {
        self.0.vars.iter().enumerate().any(|(v, var)| match var.kind {
            VarKind::Nilpotent(m) => e[v] >= m,
            _ => false,
        })
    }
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ring == other.ring
    }
}

impl Eq for RingElement {}

impl Hash for RingElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl PartialOrd for RingElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingElement {
    /// Lexicographic on coefficient vectors over the ascending monomial
    /// basis; agrees with the enumeration order of finite rings.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((ea, ca)), Some((eb, cb))) => match mono_cmp(ea, eb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ca != cb {
                            return ca.cmp(cb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, "+")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.ring.0.vars[v].name.clone()),
                    k => factors.push(format!("{}^{k}", self.ring.0.vars[v].name)),
                }
            }
            match (factors.is_empty(), *c) {
                (true, c) => write!(f, "{c}")?,
                (false, 1) => write!(f, "{}", factors.join("*"))?,
                (false, c) => write!(f, "{c}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
