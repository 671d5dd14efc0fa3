//! Strongly regular Cayley graphs on `F_{q^6}` from cyclic arcs of Singer
//! type, with exact verification, and a quadratic-character prime sieve.

pub mod arcs;
pub mod conic;
pub mod cyclo;
pub mod error;
pub mod gf;
pub mod numth;
pub mod sieve;
pub mod srg;

pub use cyclo::{CycInt, PeriodSpectrum};
pub use error::{Error, Result};
pub use gf::{build_tower, CubicField, Elem, FieldTower, SexticElem, Subfield};
