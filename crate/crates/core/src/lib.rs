//! Exact computations with truncated Witt vectors, the truncated
//! Cartier-Dieudonne ring and n-cosmooth modules over F_p-algebras.

pub mod cartier;
pub mod config;
pub mod cosmooth;
pub mod error;
pub mod moduli;
pub mod points;
pub mod ring;
pub mod witt;

pub use error::{Error, Result};
pub use ring::{Ring, RingElement, RingHom, RingSpec};
pub use witt::WittVector;
pub use cartier::CartierElement;
pub use cosmooth::{ModuleElement, ModuleMap, Presentation};
