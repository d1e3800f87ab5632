//! Homomorphisms of F_p-algebras, given by images of generators.

use std::fmt;

use super::{parse, Relation, Ring, RingElement, RingSpec, UniPoly, VarKind, FIELD_VAR};
use crate::error::{parse_err, Error, Result};

#[derive(Clone)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    /// One image per source generator, in storage order.
    images: Vec<RingElement>,
    identity: bool,
}

fn eval_univariate(f: &UniPoly, a: &RingElement) -> RingElement {
    let ring = a.ring();
    let mut acc = ring.zero();
    for &c in f.coeffs().iter().rev() {
        acc = acc.mul(a).add(&ring.from_int(c as i64));
    }
    acc
}

/// Parse `lambda=1,e=0` style assignments.
pub fn parse_assignments(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected name=value, got `{part}`")))?;
        let name = name.trim();
        if !parse::is_valid_var_name(name) {
            return Err(parse_err(format!("bad variable name `{name}`")));
        }
        out.push((parse::canonical_var_name(name).to_string(), value.trim().to_string()));
    }
    if out.is_empty() {
        return Err(parse_err("empty substitution"));
    }
    Ok(out)
}

impl RingHom {
    /// Validates that the images satisfy every relation of the source.
    pub fn new(source: Ring, target: Ring, images: Vec<RingElement>) -> Result<RingHom> {
        if source.p() != target.p() {
            return Err(Error::InvalidHom(format!(
                "characteristics differ: {} vs {}",
                source.p(),
                target.p()
            )));
        }
        if images.len() != source.var_count() {
            return Err(Error::InvalidHom(format!(
                "expected {} images, got {}",
                source.var_count(),
                images.len()
            )));
        }
        for (v, img) in images.iter().enumerate() {
            if img.ring() != &target {
                return Err(Error::InvalidHom(format!("image {img} is not in {target}")));
            }
            let var = &source.0.vars[v];
            let ok = match &var.kind {
                VarKind::Free => true,
                VarKind::Nilpotent(m) => img.pow(*m as u64).is_zero(),
                VarKind::Modulus { modulus, .. } => eval_univariate(modulus, img).is_zero(),
            };
            if !ok {
                return Err(Error::InvalidHom(format!(
                    "{} -> {img} violates the relation of {}",
                    var.name, var.name
                )));
            }
        }
        let identity = source == target
            && images.iter().enumerate().all(|(v, img)| *img == source.gen(v));
        Ok(RingHom { source, target, images, identity })
    }

    pub fn identity(ring: &Ring) -> RingHom {
        let images = (0..ring.var_count()).map(|v| ring.gen(v)).collect();
        RingHom { source: ring.clone(), target: ring.clone(), images, identity: true }
    }

    /// The structure map F_p -> `ring`.
    pub fn structure(ring: &Ring) -> Result<RingHom> {
        RingHom::new(Ring::prime_field(ring.p())?, ring.clone(), vec![])
    }

    /// Generators are sent to the target generators of the same name unless
    /// overridden by an assignment (parsed in the target).
    pub fn by_names(source: &Ring, target: &Ring, overrides: &[(String, String)]) -> Result<RingHom> {
        for (name, _) in overrides {
            if source.var_index(name).is_none() {
                return Err(Error::InvalidHom(format!("no variable `{name}` in {source}")));
            }
        }
        let mut images = Vec::new();
        for name in source.var_names() {
            let img = match overrides.iter().find(|(n, _)| n == name) {
                Some((_, value)) => target.parse(value)?,
                None => target.var(name).map_err(|_| {
                    Error::InvalidHom(format!("no image for `{name}` in {target}"))
                })?,
            };
            images.push(img);
        }
        RingHom::new(source.clone(), target.clone(), images)
    }

    /// Substitute values for some generators, e.g. `lambda=1`. The target is
    /// the source presentation with those generators removed.
    pub fn specialize(source: &Ring, assignments: &str) -> Result<RingHom> {
        let assignments = parse_assignments(assignments)?;
        let spec = source.spec();
        for (name, _) in &assignments {
            if name == FIELD_VAR && spec.field.is_some() {
                return Err(Error::InvalidHom("cannot specialize the coefficient field".into()));
            }
            if !spec.gens.iter().any(|g| &g.name == name) {
                return Err(Error::InvalidHom(format!("no variable `{name}` in {source}")));
            }
        }
        let target_spec = RingSpec {
            p: spec.p,
            field: spec.field.clone(),
            gens: spec
                .gens
                .iter()
                .filter(|g| !assignments.iter().any(|(n, _)| *n == g.name))
                .cloned()
                .collect(),
        };
        let target = Ring::new(target_spec)?;
        RingHom::by_names(source, &target, &assignments)
    }

    /// The ring `ring[e]/(e^2)` together with the reduction map `e -> 0`.
    pub fn dual_numbers(ring: &Ring, var: &str) -> Result<(Ring, RingHom)> {
        let spec = ring.spec().clone().with_generator(var, Relation::Nilpotent(2));
        let lifted = Ring::new(spec)?;
        let h = RingHom::specialize(&lifted, &format!("{var}=0"))?;
        Ok((lifted, h))
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[RingElement] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn apply(&self, a: &RingElement) -> Result<RingElement> {
        if a.ring() != &self.source {
            return Err(Error::RingMismatch(format!(
                "element of {} given to a map from {}",
                a.ring(),
                self.source
            )));
        }
        if self.identity {
            return Ok(a.clone());
        }
        Ok(a.substitute(&self.images, &self.target))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &RingHom) -> Result<RingHom> {
        if self.target != next.source {
            return Err(Error::RingMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, next.source, next.target
            )));
        }
        let images = self
            .images
            .iter()
            .map(|img| next.apply(img))
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(self.source.clone(), next.target.clone(), images)
    }

    /// A preimage of `b` chosen by the monomial-basis section: each target
    /// monomial is read as the source monomial in generators of the same
    /// name. Fails if the result does not map back to `b`.
    pub fn lift_element(&self, b: &RingElement) -> Result<RingElement> {
        if b.ring() != &self.target {
            return Err(Error::RingMismatch(format!("{b} is not in {}", self.target)));
        }
        let mut index = Vec::new();
        for name in self.target.var_names() {
            let v = self.source.var_index(name).ok_or_else(|| {
                Error::NoSection(format!("{} has no generator `{name}`", self.source))
            })?;
            index.push(v);
        }
        let mut acc = self.source.zero();
        for (e, c) in b.terms() {
            let mut es = [0u16; super::MAX_VARS];
            for (tv, &k) in e.iter().enumerate().take(index.len()) {
                es[index[tv]] = k;
            }
            acc = acc.add(&self.source.monomial(es, c));
        }
        if &self.apply(&acc)? != b {
            return Err(Error::NoSection(format!(
                "monomial section does not lift {b} along {self}"
            )));
        }
        Ok(acc)
    }
}

/// A ring map tabulated on a finite source, with the monomial-basis
/// section tabulated on the target when it exists.
#[derive(Clone, Debug)]
pub struct HomTable {
    hom: RingHom,
    images: Vec<RingElement>,
    lifts: Option<Vec<RingElement>>,
}

impl HomTable {
    pub fn new(hom: &RingHom) -> Result<HomTable> {
        let images = hom.source.elements()?.map(|a| hom.apply(&a)).collect::<Result<Vec<_>>>()?;
        let lifts = match hom.target.elements() {
            Ok(elems) => elems.map(|b| hom.lift_element(&b)).collect::<Result<Vec<_>>>().ok(),
            Err(_) => None,
        };
        Ok(HomTable { hom: hom.clone(), images, lifts })
    }

    pub fn hom(&self) -> &RingHom {
        &self.hom
    }

    pub fn apply(&self, a: &RingElement) -> Result<RingElement> {
        match a.enumeration_index() {
            Some(i) if a.ring() == &self.hom.source => Ok(self.images[i as usize].clone()),
            _ => self.hom.apply(a),
        }
    }

    pub fn lift_element(&self, b: &RingElement) -> Result<RingElement> {
        match (&self.lifts, b.enumeration_index()) {
            (Some(lifts), Some(i)) if b.ring() == &self.hom.target => Ok(lifts[i as usize].clone()),
            _ => self.hom.lift_element(b),
        }
    }
}

impl fmt::Display for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let maps: Vec<String> = self
            .source
            .var_names()
            .iter()
            .zip(&self.images)
            .map(|(n, img)| format!("{n}->{img}"))
            .collect();
        write!(f, "[{}] -> [{}] {{{}}}", self.source, self.target, maps.join(", "))
    }
}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
