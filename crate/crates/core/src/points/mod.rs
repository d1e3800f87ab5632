//! The functor of points `S -> Hom(M, W_n(S))` by exhaustive search, and
//! the abelian group it produces.
//!
//! A point is a tuple `x_j = phi(e_j)` in `W_n(S)` satisfying
//! `F x_j = sum_k sum_l V^l([a_jkl] x_k)`, with `F` the componentwise
//! Frobenius of `W_n(S)`.

mod hochschild;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use hochschild::{hochschild_ring, TruncatedDerivation};

use crate::config::Budgets;
use crate::cosmooth::{Coords, Presentation};
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement, RingHom};
use crate::witt::WittVector;

/// A point: the images of the generators.
pub type Point = Vec<WittVector>;

#[derive(Clone, Debug)]
pub struct PointSet {
    presentation: Arc<Presentation>,
    hom: RingHom,
    points: Vec<Point>,
}

fn point_key(x: &Point) -> Vec<u128> {
    x.iter()
        .flat_map(|w| w.components().iter().map(|c| c.enumeration_index().unwrap_or(0)))
        .collect()
}

/// Whether `x` satisfies the structure equations after base change along `h`.
pub fn is_point(pres: &Presentation, h: &RingHom, x: &Point) -> Result<bool> {
    let (n, r) = (pres.level(), pres.rank());
    for j in 0..r {
        let lhs = x[j].frobenius();
        let mut rhs = WittVector::zero(h.target(), n);
        for (k, xk) in x.iter().enumerate() {
            for l in 0..n {
                let a = pres.coeff(j, k, l);
                if a.is_zero() {
                    continue;
                }
                rhs = rhs.add(&xk.teichmuller_mul(&h.apply(a)?).verschiebung_pow(l))?;
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

impl PointSet {
    /// All points with values in the target of `h: R -> S`, `S` finite.
    pub fn compute(pres: Arc<Presentation>, h: &RingHom, budget: u128) -> Result<PointSet> {
        if h.source() != pres.ring() {
            return Err(Error::RingMismatch(format!(
                "points need an algebra over {}, got a map from {}",
                pres.ring(),
                h.source()
            )));
        }
        let s = h.target();
        let q = s.cardinality().ok_or(Error::NotFinite)?;
        let (n, r) = (pres.level(), pres.rank());
        let len = n * r;
        let total = q.checked_pow(len as u32).unwrap_or(u128::MAX);
        Budgets::check(total, budget)?;
        let elems: Vec<RingElement> = s.elements()?.collect();
        let mut digits = vec![0usize; len];
        let mut points = Vec::new();
        loop {
            let x: Point = (0..r)
                .map(|j| WittVector::new((0..n).map(|i| elems[digits[j * n + i]].clone()).collect()))
                .collect::<Result<_>>()?;
            if is_point(&pres, h, &x)? {
                points.push(x);
            }
            let mut pos = len;
            loop {
                if pos == 0 {
                    points.sort_by_cached_key(point_key);
                    return Ok(PointSet { presentation: pres, hom: h.clone(), points });
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < elems.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// Points over `S` itself, for a presentation over `S`.
    pub fn over_base(pres: Arc<Presentation>, budget: u128) -> Result<PointSet> {
        let id = RingHom::identity(pres.ring());
        PointSet::compute(pres, &id, budget)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn hom(&self) -> &RingHom {
        &self.hom
    }

    pub fn target(&self) -> &Ring {
        self.hom.target()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.points.binary_search_by_key(&point_key(x), point_key).is_ok()
    }

    /// The value of the point at a module element: `phi(sum V^i [c_ij] e_j)`.
    pub fn evaluate(&self, x: &Point, m: &Coords) -> Result<WittVector> {
        let (n, r) = (self.presentation.level(), self.presentation.rank());
        let mut acc = WittVector::zero(self.target(), n);
        for (idx, c) in m.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = (idx / r, idx % r);
            acc = acc.add(&x[j].teichmuller_mul(&self.hom.apply(c)?).verschiebung_pow(i))?;
        }
        Ok(acc)
    }

    /// Check the group axioms on the addition table and compute the
    /// invariant factors.
    pub fn group_structure(&self, budget: u128) -> Result<GroupStructure> {
        let m = self.points.len();
        Budgets::check((m as u128) * (m as u128), budget)?;
        let index: HashMap<&Point, usize> = self.points.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let add = |a: &Point, b: &Point| -> Result<Point> {
            a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
        };
        let zero: Point = vec![WittVector::zero(self.target(), self.presentation.level()); self.presentation.rank()];
        let has_zero = index.contains_key(&zero);
        let mut closed = true;
        let mut table = vec![vec![usize::MAX; m]; m];
        for a in 0..m {
            for b in 0..m {
                match index.get(&add(&self.points[a], &self.points[b])?) {
                    Some(&c) => table[a][b] = c,
                    None => closed = false,
                }
            }
        }
        let mut associative = closed;
        let mut commutative = closed;
        let mut inverses = closed && has_zero;
        if closed {
            'outer: for a in 0..m {
                for b in 0..m {
                    if table[a][b] != table[b][a] {
                        commutative = false;
                    }
                    for c in 0..m {
                        if table[table[a][b]][c] != table[a][table[b][c]] {
                            associative = false;
                            break 'outer;
                        }
                    }
                }
            }
            if has_zero {
                let z = index[&zero];
                inverses = (0..m).all(|a| table[a].contains(&z));
            }
        }
        let mut invariant_factors = Vec::new();
        let valid = closed && associative && commutative && inverses;
        if valid && m > 1 {
            let z = index[&zero];
            let p = self.presentation.p() as u128;
            // orders of all elements, each a power of p
            let orders: Vec<u128> = (0..m)
                .map(|a| {
                    let mut k = 1u128;
                    let mut cur = a;
                    while cur != z {
                        cur = table[cur][a];
                        k += 1;
                    }
                    k
                })
                .collect();
            let max_order = *orders.iter().max().unwrap();
            // |G[p^k]| for k = 0, 1, ...
            let mut torsion = vec![1u128];
            let mut pk = 1u128;
            while pk < max_order {
                pk *= p;
                torsion.push(orders.iter().filter(|&&o| pk % o == 0).count() as u128);
            }
            // number of cyclic factors of order >= p^k is log_p(|G[p^k]| / |G[p^{k-1}]|)
            let log_p = |mut x: u128| {
                let mut e = 0;
                while x > 1 {
                    x /= p;
                    e += 1;
                }
                e
            };
            let at_least: Vec<usize> = (1..torsion.len()).map(|k| log_p(torsion[k] / torsion[k - 1])).collect();
            for k in (0..at_least.len()).rev() {
                let exactly = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
                for _ in 0..exactly {
                    invariant_factors.push(p.pow(k as u32 + 1));
                }
            }
            invariant_factors.reverse();
        }
        Ok(GroupStructure {
            order: m,
            has_zero,
            closed,
            associative,
            commutative,
            inverses,
            invariant_factors,
        })
    }
}

/// Group axioms checked by table and the invariant factors
/// `d_1 | d_2 | ...` of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub order: usize,
    pub has_zero: bool,
    pub closed: bool,
    pub associative: bool,
    pub commutative: bool,
    pub inverses: bool,
    pub invariant_factors: Vec<u128>,
}

impl GroupStructure {
    pub fn is_group(&self) -> bool {
        self.has_zero && self.closed && self.associative && self.commutative && self.inverses
    }

    pub fn is_cyclic(&self) -> bool {
        self.is_group() && self.invariant_factors.len() <= 1
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_group() {
            return write!(
                f,
                "not a group (zero: {}, closed: {}, associative: {}, commutative: {}, inverses: {})",
                self.has_zero, self.closed, self.associative, self.commutative, self.inverses
            );
        }
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn points_of(ring: &Ring, a: Vec<RingElement>, s: &Ring) -> PointSet {
        let pres = Presentation::rank_one(ring, a).unwrap().into_arc();
        let h = RingHom::by_names(ring, s, &[]).unwrap();
        PointSet::compute(pres, &h, 1 << 20).unwrap()
    }

    #[test]
    fn z_mod_4() {
        let r = Ring::prime_field(2).unwrap();
        let ps = points_of(&r, vec![r.one(), r.zero()], &r);
        assert_eq!(ps.len(), 4);
        let g = ps.group_structure(1 << 20).unwrap();
        assert_eq!(g.invariant_factors, vec![4]);
        assert_eq!(g.to_string(), "Z/4");
    }

    #[test]
    fn solutions_of_x_squared_equals_x_in_f4() {
        let r = Ring::prime_field(2).unwrap();
        let f4 = Ring::galois_field(2, 2).unwrap();
        let ps = points_of(&r, vec![r.one()], &f4);
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.group_structure(1 << 20).unwrap().invariant_factors, vec![2]);
    }

    #[test]
    fn alpha_points() {
        let r = Ring::prime_field(2).unwrap();
        let d = Ring::parse_spec("mq 2 vars=e bounds=2").unwrap();
        let ps = points_of(&r, vec![r.zero()], &d);
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.points()[1][0].components()[0], d.var("e").unwrap());
        let trivial = points_of(&r, vec![r.zero()], &r);
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial.group_structure(1 << 20).unwrap().to_string(), "0");
    }

    #[test]
    fn rank_two_elementary() {
        let r = Ring::prime_field(2).unwrap();
        let pres = Presentation::new(
            &r,
            1,
            vec![vec![vec![r.one()], vec![r.zero()]], vec![vec![r.zero()], vec![r.one()]]],
        )
        .unwrap()
        .into_arc();
        let ps = PointSet::over_base(pres, 1 << 20).unwrap();
        assert_eq!(ps.group_structure(1 << 20).unwrap().invariant_factors, vec![2, 2]);
    }
}
