//! Exact computer algebra for GKZ hypergeometric systems of toric Calabi-Yau
//! hypersurfaces with B-branes.

pub mod arith;
pub mod fan;
pub mod fixtures;
pub mod formcalc;
pub mod gkz;
pub mod intlat;
pub mod linalg;
pub mod nilring;
pub mod poly;
pub mod ratfunc;
pub mod residue;
