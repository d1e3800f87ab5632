//! Census of presentations over finite rings: enumeration, isomorphism
//! classes under change of generators, automorphism counts, and lifting
//! witnesses along truncation and square-zero thickenings.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::config::Budgets;
use crate::cosmooth::{Coords, ModuleMap, Presentation};
use crate::error::{Error, Result};
use crate::ring::{linalg, HomTable, Ring, RingElement, RingHom};

type Key = Vec<u128>;

fn key_of(p: &Presentation) -> Key {
    p.flat_coeffs().iter().map(|c| c.enumeration_index().unwrap_or(0)).collect()
}

fn presentation_count(ring: &Ring, n: usize, r: usize) -> Result<u128> {
    let q = ring.cardinality().ok_or(Error::NotFinite)?;
    Ok(q.checked_pow((n * r * r) as u32).unwrap_or(u128::MAX))
}

/// All presentations of level `n` and rank `r` over a finite ring, in
/// lexicographic order of their coefficient arrays.
pub fn enumerate_presentations(ring: &Ring, n: usize, r: usize, budget: u128) -> Result<PresentationIter> {
    if n == 0 || r == 0 {
        return Err(Error::Shape("level and rank must be at least 1".into()));
    }
    Budgets::check(presentation_count(ring, n, r)?, budget)?;
    let elems: Vec<RingElement> = ring.elements()?.collect();
    Ok(PresentationIter { ring: ring.clone(), n, r, digits: vec![0; n * r * r], elems, done: false })
}

pub struct PresentationIter {
    ring: Ring,
    n: usize,
    r: usize,
    digits: Vec<usize>,
    elems: Vec<RingElement>,
    done: bool,
}

impl Iterator for PresentationIter {
    type Item = Presentation;

    fn next(&mut self) -> Option<Presentation> {
        if self.done {
            return None;
        }
        let coeffs = self.digits.iter().map(|&d| self.elems[d].clone()).collect();
        let out = Presentation::from_flat(&self.ring, self.n, self.r, coeffs).ok();
        let mut pos = self.digits.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < self.elems.len() {
                break;
            }
            self.digits[pos] = 0;
        }
        out
    }
}

/// A tuple of new generators `y_1, ..., y_r` in canonical coordinates,
/// with the inverse of its reduction modulo `V`.
#[derive(Clone, Debug)]
pub struct GeneratorChange {
    pub generators: Vec<Coords>,
    pub inverse_mod_v: Vec<Vec<RingElement>>,
}

/// Every generator change: `|GL_r(R)| * |R|^{(n-1) r^2}` tuples.
pub fn generator_changes(ring: &Ring, n: usize, r: usize, budget: u128) -> Result<Vec<GeneratorChange>> {
    let q = ring.cardinality().ok_or(Error::NotFinite)?;
    let upper = q.checked_pow((n * r * r) as u32).unwrap_or(u128::MAX);
    let elems: Vec<RingElement> = ring.elements()?.collect();
    // invertible reductions first, so the budget applies to the actual count
    let mut invertible = Vec::new();
    let mut digits = vec![0usize; r * r];
    loop {
        let m: Vec<Vec<RingElement>> =
            (0..r).map(|i| (0..r).map(|j| elems[digits[i * r + j]].clone()).collect()).collect();
        if let Some(inv) = linalg::inverse(&m, ring) {
            invertible.push((m, inv));
        }
        if !odometer(&mut digits, elems.len()) {
            break;
        }
    }
    let higher = q.checked_pow(((n - 1) * r * r) as u32).unwrap_or(u128::MAX);
    let total = (invertible.len() as u128).saturating_mul(higher);
    Budgets::check(total.min(upper), budget)?;
    let mut out = Vec::with_capacity(total as usize);
    for (m, inv) in &invertible {
        let mut digits = vec![0usize; (n - 1) * r * r];
        loop {
            let generators: Vec<Coords> = (0..r)
                .map(|k| {
                    let mut y = Vec::with_capacity(n * r);
                    y.extend(m[k].iter().cloned());
                    for i in 1..n {
                        for j in 0..r {
                            y.push(elems[digits[((i - 1) * r + j) * r + k]].clone());
                        }
                    }
                    y
                })
                .collect();
            out.push(GeneratorChange { generators, inverse_mod_v: inv.clone() });
            if !odometer(&mut digits, elems.len()) {
                break;
            }
        }
    }
    Ok(out)
}

/// Advance little-endian-last digits; `false` once they wrap to zero.
fn odometer(digits: &mut [usize], base: usize) -> bool {
    let mut pos = digits.len();
    while pos > 0 {
        pos -= 1;
        digits[pos] += 1;
        if digits[pos] < base {
            return true;
        }
        digits[pos] = 0;
    }
    false
}

/// One isomorphism class in a census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    /// The smallest presentation of the class in enumeration order.
    pub representative: Presentation,
    pub orbit_size: usize,
    pub automorphisms: usize,
    /// Presentations of the input stream lying in this class.
    pub members_seen: usize,
}

impl ClassInfo {
    pub fn mass(&self) -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(self.automorphisms))
    }

    /// `[c_0;c_1]` per coefficient list, joined by `|` in row-major order.
    pub fn serialize_representative(&self) -> String {
        serialize_presentation(&self.representative)
    }
}

pub fn serialize_presentation(p: &Presentation) -> String {
    let mut parts = Vec::new();
    for i in 0..p.rank() {
        for j in 0..p.rank() {
            let list: Vec<String> = p.coeff_list(i, j).iter().map(|c| c.to_string()).collect();
            parts.push(format!("[{}]", list.join(";")));
        }
    }
    parts.join("|")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub ring: Ring,
    pub n: usize,
    pub r: usize,
    pub total_presentations: usize,
    /// Number of generator changes acting on presentations.
    pub group_size: usize,
    pub classes: Vec<ClassInfo>,
}

impl CensusReport {
    /// Groupoid cardinality, the sum of `1/|Aut|` over classes.
    pub fn mass(&self) -> BigRational {
        self.classes.iter().fold(BigRational::zero(), |acc, c| acc + c.mass())
    }

    pub fn orbit_stabilizer_holds(&self) -> bool {
        self.classes.iter().all(|c| c.orbit_size * c.automorphisms == self.group_size)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("representative,orbit_size,automorphisms,mass\n");
        for c in &self.classes {
            out.push_str(&format!(
                "{},{},{},{}\n",
                c.serialize_representative(),
                c.orbit_size,
                c.automorphisms,
                c.mass()
            ));
        }
        out
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "census p={} n={} r={} over {}: {} presentations, {} classes, {} generator changes",
            self.ring.p(),
            self.n,
            self.r,
            self.ring.spec(),
            self.total_presentations,
            self.classes.len(),
            self.group_size
        )?;
        for c in &self.classes {
            writeln!(
                f,
                "  {}  orbit {}  |Aut| {}",
                c.representative.describe(),
                c.orbit_size,
                c.automorphisms
            )?;
        }
        writeln!(
            f,
            "orbit-stabilizer: {}",
            if self.orbit_stabilizer_holds() { "pass" } else { "FAIL" }
        )?;
        write!(f, "mass: {}", self.mass())
    }
}

/// Group a finite stream of presentations (same ring, level and rank) into
/// isomorphism classes. Each class is computed as a full orbit under
/// generator changes, so the result does not depend on the stream order.
/// Automorphisms are counted twice, as the stabilizer of the presentation
/// and as the generator images passing the homomorphism test; a mismatch
/// is an error.
pub fn iso_classes<I>(stream: I, budgets: &Budgets) -> Result<CensusReport>
where
    I: IntoIterator<Item = Presentation>,
{
    let list: Vec<Presentation> = stream.into_iter().collect();
    let first = list.first().ok_or_else(|| Error::Precondition("empty stream".into()))?;
    let (ring, n, r) = (first.ring().clone(), first.level(), first.rank());
    if list.iter().any(|p| p.ring() != &ring || p.level() != n || p.rank() != r) {
        return Err(Error::ParamsMismatch("stream mixes rings, levels or ranks".into()));
    }
    Budgets::check(list.len() as u128, budgets.presentations)?;
    let changes = generator_changes(&ring, n, r, budgets.maps)?;

    let mut class_of: HashMap<Key, usize> = HashMap::new();
    let mut classes: Vec<(Key, ClassInfo)> = Vec::new();
    for p in &list {
        let key = key_of(p);
        if let Some(&c) = class_of.get(&key) {
            classes[c].1.members_seen += 1;
            continue;
        }
        let arc = p.clone().into_arc();
        let mut orbit: HashSet<Key> = HashSet::new();
        let mut stabilizer = 0;
        let mut automorphisms = 0;
        let mut best: Option<(Key, Presentation)> = None;
        for g in &changes {
            let q = p.rebase_with_inverse(&g.generators, &g.inverse_mod_v)?;
            let qk = key_of(&q);
            if &q == p {
                stabilizer += 1;
            }
            if ModuleMap::new(arc.clone(), arc.clone(), g.generators.clone())?.hom_check()? {
                automorphisms += 1;
            }
            if best.as_ref().is_none_or(|(bk, _)| qk < *bk) {
                best = Some((qk.clone(), q));
            }
            orbit.insert(qk);
        }
        if stabilizer != automorphisms {
            return Err(Error::Inconsistent(format!(
                "stabilizer {stabilizer} and automorphism count {automorphisms} differ for {}",
                p.describe()
            )));
        }
        let idx = classes.len();
        for k in &orbit {
            class_of.insert(k.clone(), idx);
        }
        let (bk, rep) = best.expect("at least the identity change");
        classes.push((
            bk,
            ClassInfo { representative: rep, orbit_size: orbit.len(), automorphisms, members_seen: 1 },
        ));
    }
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(CensusReport {
        ring,
        n,
        r,
        total_presentations: list.len(),
        group_size: changes.len(),
        classes: classes.into_iter().map(|(_, c)| c).collect(),
    })
}

/// Census of all presentations of level `n`, rank `r` over a finite ring.
pub fn census(ring: &Ring, n: usize, r: usize, budgets: &Budgets) -> Result<CensusReport> {
    iso_classes(enumerate_presentations(ring, n, r, budgets.presentations)?, budgets)
}

/// Orbits of `a -> u^{p-1} a` on `R` for units `u`: the isomorphism classes
/// of rank one, level one, predicted by changing `e` to `u e`.
pub fn rank_one_level_one_orbits(ring: &Ring) -> Result<Vec<Vec<RingElement>>> {
    let elems: Vec<RingElement> = ring.elements()?.collect();
    let units: Vec<RingElement> = elems.iter().filter(|u| u.is_unit()).cloned().collect();
    let p = ring.p() as u64;
    let mut seen: HashSet<RingElement> = HashSet::new();
    let mut orbits = Vec::new();
    for a in &elems {
        if seen.contains(a) {
            continue;
        }
        let mut orbit: Vec<RingElement> = units.iter().map(|u| u.pow(p - 1).mul(a)).collect();
        orbit.sort();
        orbit.dedup();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Whether two presentations define isomorphic modules, by scanning every
/// generator change of the first.
pub fn are_isomorphic(a: &Presentation, b: &Presentation, budget: u128) -> Result<bool> {
    if a.ring() != b.ring() || a.level() != b.level() || a.rank() != b.rank() {
        return Ok(false);
    }
    for g in generator_changes(a.ring(), a.level(), a.rank(), budget)? {
        if &a.rebase_with_inverse(&g.generators, &g.inverse_mod_v)? == b {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Lifting witnesses `P -> lift_level(P)` for a stream of presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationReport {
    pub checked: usize,
    pub lifted: usize,
    /// The first few `(presentation, lift)` pairs.
    pub witnesses: Vec<(Presentation, Presentation)>,
    pub failures: Vec<Presentation>,
}

impl TruncationReport {
    pub fn coverage(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            self.lifted as f64 / self.checked as f64
        }
    }
}

impl fmt::Display for TruncationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, q) in &self.witnesses {
            writeln!(f, "  {}  <-  {}", p.describe(), q.describe())?;
        }
        write!(f, "lifted {}/{}: coverage {:.3}", self.lifted, self.checked, self.coverage())
    }
}

const WITNESS_LIMIT: usize = 8;

/// For each presentation, a level `n+1` presentation truncating to it.
pub fn truncation_surjectivity<I>(stream: I) -> Result<TruncationReport>
where
    I: IntoIterator<Item = Presentation>,
{
    let mut report = TruncationReport { checked: 0, lifted: 0, witnesses: Vec::new(), failures: Vec::new() };
    for p in stream {
        report.checked += 1;
        let up = p.lift_level(None)?;
        if up.truncate(p.level())? == p {
            report.lifted += 1;
            if report.witnesses.len() < WITNESS_LIMIT {
                report.witnesses.push((p, up));
            }
        } else {
            report.failures.push(p);
        }
    }
    Ok(report)
}

/// `R[e]/(e^2)` with its reduction map, using the first free name among
/// `e`, `eps`, `d`.
pub fn square_zero_thickening(ring: &Ring) -> Result<(Ring, RingHom)> {
    let names = ring.var_names();
    let name = ["e", "eps", "d"]
        .into_iter()
        .find(|v| !names.contains(v))
        .ok_or_else(|| Error::InvalidSpec(format!("no free variable name for a thickening of {ring}")))?;
    RingHom::dual_numbers(ring, name)
}

/// A presentation over `R[e]/(e^2)` reducing to `pres`.
pub fn infinitesimal_lift(pres: &Presentation) -> Result<(Presentation, RingHom)> {
    let (_, h) = square_zero_thickening(pres.ring())?;
    let lifted = pres.lift_along(&h)?;
    Ok((lifted, h))
}

/// Lifts along a tabulated thickening for every presentation of a stream;
/// returns the number of presentations whose lift reduced back exactly.
pub fn infinitesimal_lift_all<I>(stream: I, table: &HomTable) -> Result<(usize, usize)>
where
    I: IntoIterator<Item = Presentation>,
{
    let (mut checked, mut ok) = (0, 0);
    for p in stream {
        checked += 1;
        let lifted = p.lift_along_table(table)?;
        if lifted.base_change_table(table)? == p {
            ok += 1;
        }
    }
    Ok((checked, ok))
}
