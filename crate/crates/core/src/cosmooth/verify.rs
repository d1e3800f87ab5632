//! Exhaustive checks of the cosmoothness axioms over finite rings.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Coords, Presentation};
use crate::cartier::CartierElement;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::ring::RingElement;

/// All pairs are examined for additivity up to this many; beyond it a
/// fixed sample of `PAIR_SAMPLE` pairs is used.
const PAIR_LIMIT: usize = 1 << 14;
const PAIR_SAMPLE: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessCheck {
    pub i: usize,
    pub kernel_size: usize,
    pub image_size: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub description: String,
    pub elements: usize,
    pub rank: usize,
    pub v_nilpotent: bool,
    pub exactness: Vec<ExactnessCheck>,
    pub fv_vf_p: bool,
    pub pairs_checked: usize,
    pub additive: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.v_nilpotent && self.exactness.iter().all(|c| c.equal) && self.fv_vf_p && self.additive
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "module {}: {} elements", self.description, self.elements)?;
        writeln!(f, "M/VM free of rank {}: pass", self.rank)?;
        writeln!(f, "V^n = 0: {}", verdict(self.v_nilpotent))?;
        if self.exactness.is_empty() {
            writeln!(f, "ker V^i = im V^(n-i): vacuous")?;
        }
        for c in &self.exactness {
            writeln!(
                f,
                "ker V^{} = im V^{}: {} ({} = {})",
                c.i,
                self.exactness.len() + 1 - c.i,
                verdict(c.equal),
                c.kernel_size,
                c.image_size
            )?;
        }
        writeln!(f, "FV = VF = p: {}", verdict(self.fv_vf_p))?;
        writeln!(f, "F, V additive on {} pairs: {}", self.pairs_checked, verdict(self.additive))?;
        write!(f, "overall: {}", verdict(self.passed()))
    }
}

fn v_pow(pres: &Presentation, x: &Coords, k: usize) -> Coords {
    (0..k).fold(x.clone(), |acc, _| pres.v_coords(&acc))
}

fn times(pres: &Presentation, x: &Coords, k: u32) -> Result<Coords> {
    let mut acc = pres.zero_coords();
    for _ in 0..k {
        acc = pres.add_coords(&acc, x)?;
    }
    Ok(acc)
}

/// Enumerate all `|R|^{nr}` elements and check the axioms.
pub fn verify_cosmooth(pres: &Presentation, budget: u128) -> Result<VerifyReport> {
    let total = pres.cardinality().ok_or(Error::NotFinite)?;
    Budgets::check(total, budget)?;
    let (n, p) = (pres.level(), pres.p());
    let all = pres.all_coords()?;
    let zero = pres.zero_coords();

    let v_nilpotent = all.iter().all(|x| v_pow(pres, x, n) == zero);

    let mut exactness = Vec::new();
    for i in 1..n {
        let kernel: HashSet<&Coords> = all.iter().filter(|x| v_pow(pres, x, i) == zero).collect();
        let image: HashSet<Coords> = all.iter().map(|x| v_pow(pres, x, n - i)).collect();
        let equal = kernel.len() == image.len() && image.iter().all(|y| kernel.contains(y));
        exactness.push(ExactnessCheck { i, kernel_size: kernel.len(), image_size: image.len(), equal });
    }

    let mut fv_vf_p = true;
    for x in &all {
        let px = times(pres, x, p)?;
        let fv = pres.f_coords(&pres.v_coords(x))?;
        let vf = pres.v_coords(&pres.f_coords(x)?);
        if fv != px || vf != px {
            fv_vf_p = false;
            break;
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if all.len() * all.len() <= PAIR_LIMIT {
        for a in 0..all.len() {
            for b in 0..all.len() {
                pairs.push((a, b));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let idx: Vec<usize> = (0..all.len()).collect();
        for _ in 0..PAIR_SAMPLE {
            pairs.push((*idx.choose(&mut rng).unwrap(), *idx.choose(&mut rng).unwrap()));
        }
    }
    let mut additive = true;
    for &(a, b) in &pairs {
        let (x, y) = (&all[a], &all[b]);
        let s = pres.add_coords(x, y)?;
        let f_ok = pres.f_coords(&s)? == pres.add_coords(&pres.f_coords(x)?, &pres.f_coords(y)?)?;
        let v_ok = pres.v_coords(&s) == pres.add_coords(&pres.v_coords(x), &pres.v_coords(y))?;
        if !f_ok || !v_ok || s != pres.add_coords(y, x)? {
            additive = false;
            break;
        }
    }

    Ok(VerifyReport {
        description: pres.describe(),
        elements: all.len(),
        rank: pres.rank(),
        v_nilpotent,
        exactness,
        fv_vf_p,
        pairs_checked: pairs.len(),
        additive,
    })
}

/// Kernel of `u: (h_i) -> sum_i h_i (F g_i - sum_j a_ij(V) g_j)` on tuples of
/// operators of F-degree at most `fdeg_bound`. Returns `true` when only the
/// zero tuple maps to zero.
pub fn check_u_injective(pres: &Presentation, fdeg_bound: u32, budget: u128) -> Result<bool> {
    let ring = pres.ring();
    let (n, r) = (pres.level(), pres.rank());
    let q = ring.cardinality().ok_or(Error::NotFinite)?;
    let slots = n * (fdeg_bound as usize + 1);
    let per_component = q.checked_pow(slots as u32);
    let total = per_component.and_then(|c| c.checked_pow(r as u32)).unwrap_or(u128::MAX);
    Budgets::check(total, budget)?;
    let elems: Vec<RingElement> = ring.elements()?.collect();

    // every operator of bounded F-degree
    let mut ops = vec![CartierElement::zero(ring, n)];
    for rr in 0..n {
        for s in 0..=fdeg_bound {
            let mut next = Vec::with_capacity(ops.len() * elems.len());
            for op in &ops {
                for c in &elems {
                    next.push(op.add(&CartierElement::monomial(n, rr, c, s))?);
                }
            }
            ops = next;
        }
    }
    let f = CartierElement::f(ring, n);
    let a: Vec<Vec<CartierElement>> = (0..r)
        .map(|i| (0..r).map(|j| pres.coeff_operator(i, j)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    // images of a single nonzero component h at position i
    let mut contributions: Vec<Vec<Vec<CartierElement>>> = vec![Vec::with_capacity(ops.len()); r];
    for (i, contrib) in contributions.iter_mut().enumerate() {
        for h in &ops {
            let mut out = vec![CartierElement::zero(ring, n); r];
            out[i] = h.mul(&f)?;
            for j in 0..r {
                out[j] = out[j].sub(&h.mul(&a[i][j])?)?;
            }
            contrib.push(out);
        }
    }
    let mut index = vec![0usize; r];
    loop {
        if index.iter().any(|&k| k != 0) {
            let mut sum = vec![CartierElement::zero(ring, n); r];
            for (i, &k) in index.iter().enumerate() {
                for j in 0..r {
                    sum[j] = sum[j].add(&contributions[i][k][j])?;
                }
            }
            if sum.iter().all(|c| c.is_zero()) {
                return Ok(false);
            }
        }
        let mut pos = 0;
        loop {
            if pos == r {
                return Ok(true);
            }
            index[pos] += 1;
            if index[pos] < ops.len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}
