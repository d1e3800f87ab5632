//! Maps between presented modules, determined by the images of generators.

use std::collections::HashSet;
use std::sync::Arc;

use super::{Coords, Presentation, RawTerm};
use crate::error::{Error, Result};
use crate::ring::linalg;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<Coords>,
}

impl ModuleMap {
    /// `images[j]` is the image of `e_j`, in target coordinates.
    pub fn new(source: Arc<Presentation>, target: Arc<Presentation>, images: Vec<Coords>) -> Result<ModuleMap> {
        if source.ring() != target.ring() || source.level() != target.level() {
            return Err(Error::ParamsMismatch("source and target must share ring and level".into()));
        }
        if images.len() != source.rank() {
            return Err(Error::Shape(format!("need {} images, got {}", source.rank(), images.len())));
        }
        for y in &images {
            target.check_coords(y)?;
        }
        Ok(ModuleMap { source, target, images })
    }

    pub fn identity(m: Arc<Presentation>) -> ModuleMap {
        let images = (0..m.rank()).map(|j| m.generator_coords(j)).collect();
        ModuleMap { source: m.clone(), target: m, images }
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn images(&self) -> &[Coords] {
        &self.images
    }

    /// `f(sum V^i [c_ij] e_j) = sum V^i [c_ij] f(e_j)`.
    pub fn apply(&self, x: &Coords) -> Result<Coords> {
        self.source.check_coords(x)?;
        let (n, r, rt) = (self.source.level(), self.source.rank(), self.target.rank());
        let mut raw = Vec::new();
        for (idx, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = (idx / r, idx % r);
            for (idx2, d) in self.images[j].iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let (i2, j2) = (idx2 / rt, idx2 % rt);
                if i + i2 < n {
                    raw.push(RawTerm { slot: i + i2, gen: j2, fdeg: 0, c: c.frobenius_pow(i2 as u32).mul(d) });
                }
            }
        }
        self.target.normalize(raw)
    }

    /// F-equivariance on generators: `F f(e_j) = f(F e_j)`.
    pub fn hom_check(&self) -> Result<bool> {
        for j in 0..self.source.rank() {
            let lhs = self.target.f_coords(&self.images[j])?;
            let fe = self.source.f_coords(&self.source.generator_coords(j))?;
            if lhs != self.apply(&fe)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Reduction modulo `V`: entry `(j, k)` is the slot-0 coordinate of
    /// `f(e_j)` along `e_k`.
    pub fn matrix_mod_v(&self) -> Vec<Vec<crate::ring::RingElement>> {
        let rt = self.target.rank();
        self.images.iter().map(|y| y[..rt].to_vec()).collect()
    }

    /// Isomorphism test through the reduction modulo `V`.
    pub fn is_iso(&self) -> Result<bool> {
        if !self.hom_check()? {
            return Err(Error::Precondition("the map does not commute with F".into()));
        }
        if self.source.rank() != self.target.rank() {
            return Ok(false);
        }
        let m = self.matrix_mod_v();
        Ok(linalg::determinant(&m, self.source.ring()).is_unit())
    }

    /// Bijectivity by enumerating the source, for finite rings.
    pub fn is_bijective_brute_force(&self) -> Result<bool> {
        let (Some(a), Some(b)) = (self.source.cardinality(), self.target.cardinality()) else {
            return Err(Error::NotFinite);
        };
        if a != b {
            return Ok(false);
        }
        let mut seen = HashSet::new();
        for x in self.source.all_coords()? {
            if !seen.insert(self.apply(&x)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ModuleMap) -> Result<ModuleMap> {
        if self.target != next.source {
            return Err(Error::ParamsMismatch("maps are not composable".into()));
        }
        let images = self.images.iter().map(|y| next.apply(y)).collect::<Result<Vec<_>>>()?;
        Ok(ModuleMap { source: self.source.clone(), target: next.target.clone(), images })
    }
}
