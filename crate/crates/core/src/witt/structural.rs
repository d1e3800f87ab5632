//! Witt addition, multiplication and negation polynomials over Z.
//!
//! The polynomials are obtained from the ghost components
//! `w_k(Z) = sum_{i<=k} p^i Z_i^{p^(k-i)}` by solving
//! `w_k(S) = w_k(X) + w_k(Y)`, `w_k(P) = w_k(X) w_k(Y)`, `w_k(N) = -w_k(X)`
//! for the top component, which requires an exact division by `p^k`.
//!
//! Variables are interleaved: `X_i` has index `2i` and `Y_i` index `2i+1`.
//! The negation polynomials use `X_i` at index `i`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::config;
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};

/// A polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: HashMap<Vec<u16>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: HashMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut out = IntPoly::zero(nvars);
        if !c.is_zero() {
            out.terms.insert(vec![0; nvars], c);
        }
        out
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        let mut out = IntPoly::zero(nvars);
        out.terms.insert(e, BigInt::one());
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u16>, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort();
        v
    }

    fn widen(&self, nvars: usize) -> IntPoly {
        if nvars == self.nvars {
            return self.clone();
        }
        assert!(nvars > self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.resize(nvars, 0);
                (e2, c.clone())
            })
            .collect();
        IntPoly { nvars, terms }
    }

    fn add_term(&mut self, e: Vec<u16>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        use std::collections::hash_map::Entry;
        match entry {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.nvars.max(other.nvars);
        let mut out = self.widen(n);
        for (e, c) in &other.widen(n).terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let n = self.nvars.max(other.nvars);
        let (a, b) = (self.widen(n), other.widen(n));
        let mut out = IntPoly::zero(n);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> IntPoly {
        let mut acc = IntPoly::constant(self.nvars, BigInt::one());
        let mut base = self.clone();
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

    /// Exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut terms = HashMap::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(IntPoly { nvars: self.nvars, terms })
    }

    /// Evaluate at integer points.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= Pow::pow(&point[v], k as u32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Reduce coefficients modulo `p`.
    pub fn reduce_mod(&self, p: u32) -> ModPoly {
        let pb = BigInt::from(p);
        let mut terms: Vec<(Vec<u16>, u32)> = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = c.mod_floor(&pb).to_u32().unwrap();
                (r != 0).then(|| (e.clone(), r))
            })
            .collect();
        terms.sort();
        ModPoly { nvars: self.nvars, terms }
    }

    pub fn format(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        // graded order, then lexicographic, for readability
        let deg = |e: &Vec<u16>| e.iter().map(|&k| k as u32).sum::<u32>();
        let mut v = self.sorted_terms();
        v.sort_by(|a, b| deg(a.0).cmp(&deg(b.0)).then(b.0.cmp(a.0)));
        let mut out = String::new();
        for (i, (e, c)) in v.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { names(j) } else { format!("{}^{k}", names(j)) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&abs.to_string()),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => out.push_str(&format!("{abs}*{}", mono.join("*"))),
            }
        }
        out
    }
}

/// A polynomial with coefficients in F_p, ready for evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    nvars: usize,
    terms: Vec<(Vec<u16>, u32)>,
}

impl ModPoly {
    pub fn terms(&self) -> &[(Vec<u16>, u32)] {
        &self.terms
    }

    /// Terms that only involve the given variables.
    pub fn restrict_to(&self, vars: &[usize]) -> ModPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().enumerate().all(|(v, &k)| k == 0 || vars.contains(&v)))
            .cloned()
            .collect();
        ModPoly { nvars: self.nvars, terms }
    }

    /// Evaluate at ring elements, using `powers` as a cache of variable powers.
    pub(crate) fn eval(&self, ring: &Ring, powers: &mut PowerCache<'_>) -> RingElement {
        let mut acc = ring.zero();
        'terms: for (e, c) in &self.terms {
            let mut t = ring.from_int(*c as i64);
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match powers.get(v, k) {
                    Some(x) => t = t.mul(x),
                    None => continue 'terms,
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

/// Lazily computed powers of the evaluation point. `None` marks zero.
pub(crate) struct PowerCache<'a> {
    point: Vec<&'a RingElement>,
    cache: Vec<Vec<(u16, RingElement)>>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(point: Vec<&'a RingElement>) -> Self {
        let cache = vec![Vec::new(); point.len()];
        PowerCache { point, cache }
    }

    fn get(&mut self, v: usize, k: u16) -> Option<&RingElement> {
        let base = self.point.get(v)?;
        if base.is_zero() {
            return None;
        }
        if k == 1 {
            return Some(self.point[v]);
        }
        let pos = match self.cache[v].iter().position(|(e, _)| *e == k) {
            Some(pos) => pos,
            None => {
                let x = base.pow(k as u64);
                self.cache[v].push((k, x));
                self.cache[v].len() - 1
            }
        };
        let x = &self.cache[v][pos].1;
        (!x.is_zero()).then_some(x)
    }
}

/// Structural polynomials for `W_n` in characteristic `p`.
#[derive(Debug)]
pub struct StructuralPolynomials {
    p: u32,
    n: usize,
    sum: Vec<IntPoly>,
    prod: Vec<IntPoly>,
    neg: Vec<IntPoly>,
    sum_mod: Vec<ModPoly>,
    prod_mod: Vec<ModPoly>,
    neg_mod: Vec<ModPoly>,
    /// `S_k` restricted to `Y_j = 0` for `j >= 1`: adding a Teichmuller lift.
    sum_teich_mod: Vec<ModPoly>,
}

/// `w_k` applied to polynomials `z_0..z_k`.
pub fn ghost(p: u32, z: &[IntPoly], k: usize) -> IntPoly {
    let nvars = z.iter().map(|q| q.nvars).max().unwrap_or(0);
    let mut acc = IntPoly::zero(nvars);
    for (i, zi) in z.iter().enumerate().take(k + 1) {
        let coeff = BigInt::from(p).pow(i as u32);
        let e = (p as u64).pow((k - i) as u32);
        acc = acc.add(&zi.pow(e).scale(&coeff));
    }
    acc
}

fn witt_vars(nvars: usize, offset: usize, stride: usize, count: usize) -> Vec<IntPoly> {
    (0..count).map(|i| IntPoly::var(nvars, offset + stride * i)).collect()
}

impl StructuralPolynomials {
    fn empty(p: u32) -> Self {
        StructuralPolynomials {
            p,
            n: 0,
            sum: vec![],
            prod: vec![],
            neg: vec![],
            sum_mod: vec![],
            prod_mod: vec![],
            neg_mod: vec![],
            sum_teich_mod: vec![],
        }
    }

    /// Add the next component by solving the ghost identities.
    fn extend(&self) -> Result<StructuralPolynomials> {
        let p = self.p;
        let k = self.n;
        let nv2 = 2 * (k + 1);
        let x = witt_vars(nv2, 0, 2, k + 1);
        let y = witt_vars(nv2, 1, 2, k + 1);
        let pk = BigInt::from(p).pow(k as u32);
        let solve = |target: IntPoly, lower: &[IntPoly], what: &str| -> Result<IntPoly> {
            let mut rest = target;
            for (i, zi) in lower.iter().enumerate() {
                let coeff = BigInt::from(p).pow(i as u32);
                let e = (p as u64).pow((k - i) as u32);
                rest = rest.sub(&zi.pow(e).scale(&coeff));
            }
            rest.div_exact(&pk).ok_or_else(|| {
                Error::Inconsistent(format!("{what}_{k} is not integral for p={p}"))
            })
        };
        let s = solve(ghost(p, &x, k).add(&ghost(p, &y, k)), &self.sum, "S")?;
        let m = solve(ghost(p, &x, k).mul(&ghost(p, &y, k)), &self.prod, "P")?;
        let xn = witt_vars(k + 1, 0, 1, k + 1);
        let ng = solve(ghost(p, &xn, k).neg(), &self.neg, "N")?;

        let mut out = StructuralPolynomials::empty(p);
        out.n = k + 1;
        out.sum = self.sum.iter().cloned().chain([s]).collect();
        out.prod = self.prod.iter().cloned().chain([m]).collect();
        out.neg = self.neg.iter().cloned().chain([ng]).collect();
        out.sum_mod = out.sum.iter().map(|q| q.reduce_mod(p)).collect();
        out.prod_mod = out.prod.iter().map(|q| q.reduce_mod(p)).collect();
        out.neg_mod = out.neg.iter().map(|q| q.reduce_mod(p)).collect();
        let teich_vars: Vec<usize> = (0..=k).map(|i| 2 * i).chain([1]).collect();
        out.sum_teich_mod = out.sum_mod.iter().map(|q| q.restrict_to(&teich_vars)).collect();
        Ok(out)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `S_k` over Z in variables `X_i = 2i`, `Y_i = 2i+1`.
    pub fn sum(&self) -> &[IntPoly] {
        &self.sum
    }

    pub fn prod(&self) -> &[IntPoly] {
        &self.prod
    }

    /// `N_k` over Z in variables `X_i = i`.
    pub fn neg(&self) -> &[IntPoly] {
        &self.neg
    }

    pub fn sum_mod(&self) -> &[ModPoly] {
        &self.sum_mod
    }

    pub fn prod_mod(&self) -> &[ModPoly] {
        &self.prod_mod
    }

    pub fn neg_mod(&self) -> &[ModPoly] {
        &self.neg_mod
    }

    pub(crate) fn sum_teich_mod(&self) -> &[ModPoly] {
        &self.sum_teich_mod
    }

    /// Recompute both sides of every ghost identity from the stored
    /// polynomials and compare them.
    pub fn check_ghost_identities(&self) -> Result<()> {
        let p = self.p;
        let nv = 2 * self.n;
        let x = witt_vars(nv, 0, 2, self.n);
        let y = witt_vars(nv, 1, 2, self.n);
        let xn = witt_vars(self.n, 0, 1, self.n);
        for k in 0..self.n {
            let wx = ghost(p, &x, k);
            let wy = ghost(p, &y, k);
            let checks = [
                ("S", ghost(p, &self.sum, k), wx.add(&wy)),
                ("P", ghost(p, &self.prod, k), wx.mul(&wy)),
                ("N", ghost(p, &self.neg, k), ghost(p, &xn, k).neg()),
            ];
            for (what, lhs, rhs) in checks {
                let nvars = lhs.nvars.max(rhs.nvars);
                if !lhs.widen(nvars).sub(&rhs.widen(nvars)).is_empty() {
                    return Err(Error::Inconsistent(format!(
                        "ghost identity for {what}_{k} fails at p={p}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Human-readable listing, `X_i`/`Y_i` naming.
    pub fn describe(&self) -> String {
        let xy = |v: usize| format!("{}{}", if v % 2 == 0 { "X" } else { "Y" }, v / 2);
        let xonly = |v: usize| format!("X{v}");
        let mut out = String::new();
        for (k, q) in self.sum.iter().enumerate() {
            out.push_str(&format!("S_{k} = {}\n", q.format(&xy)));
        }
        for (k, q) in self.prod.iter().enumerate() {
            out.push_str(&format!("P_{k} = {}\n", q.format(&xy)));
        }
        for (k, q) in self.neg.iter().enumerate() {
            out.push_str(&format!("N_{k} = {}\n", q.format(&xonly)));
        }
        out
    }
}

impl fmt::Display for StructuralPolynomials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

type Cache = Mutex<HashMap<(u32, usize), Arc<StructuralPolynomials>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized structural polynomials for `W_n` in characteristic `p`.
pub fn structural_polynomials(p: u32, n: usize) -> Result<Arc<StructuralPolynomials>> {
    if !crate::ring::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if n == 0 {
        return Err(Error::Range("Witt length must be at least 1".into()));
    }
    let (max_p, max_n) = config::witt_guard();
    if p > max_p || n > max_n {
        return Err(Error::GuardExceeded(format!(
            "W_{n} in characteristic {p} exceeds the guard p <= {max_p}, n <= {max_n}"
        )));
    }
    if let Some(sp) = cache().lock().unwrap().get(&(p, n)) {
        return Ok(sp.clone());
    }
    let base = if n == 1 {
        Arc::new(StructuralPolynomials::empty(p))
    } else {
        structural_polynomials(p, n - 1)?
    };
    let computed = Arc::new(base.extend()?);
    // first writer wins; later computations of the same entry are discarded
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry((p, n)).or_insert(computed).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(v: usize) -> String {
        format!("{}{}", if v % 2 == 0 { "X" } else { "Y" }, v / 2)
    }

    #[test]
    fn low_components() {
        let sp = structural_polynomials(2, 2).unwrap();
        assert_eq!(sp.sum()[0].format(&xy), "X0 + Y0");
        assert_eq!(sp.prod()[0].format(&xy), "X0*Y0");
        assert_eq!(sp.sum()[1].format(&xy), "X1 + Y1 - X0*Y0");
        let sp3 = structural_polynomials(3, 2).unwrap();
        // S_1 = X1 + Y1 - (X0^2 Y0 + X0 Y0^2)
        let expected = IntPoly::var(4, 2)
            .add(&IntPoly::var(4, 3))
            .sub(&IntPoly::var(4, 0).pow(2).mul(&IntPoly::var(4, 1)))
            .sub(&IntPoly::var(4, 0).mul(&IntPoly::var(4, 1).pow(2)));
        assert_eq!(sp3.sum()[1], expected);
    }

    #[test]
    fn guards_and_errors() {
        assert!(matches!(structural_polynomials(4, 2), Err(Error::NotPrime(4))));
        assert!(matches!(structural_polynomials(2, 0), Err(Error::Range(_))));
        assert!(matches!(structural_polynomials(11, 2), Err(Error::GuardExceeded(_))));
        assert!(matches!(structural_polynomials(2, 7), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn cache_returns_shared_instance() {
        let a = structural_polynomials(3, 3).unwrap();
        let b = structural_polynomials(3, 3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        a.check_ghost_identities().unwrap();
    }
}
