//! Executable structures for comparing mind-matter theories.
//!
//! * [`worldmodel`]: finite atoms, hyperedges, attributes and predicates.
//! * [`theoryzoo`]: theory families as mental/material sets over a world.
//! * [`equivalence`]: object maps and full / partial / mutual-non equivalence.
//! * [`cogmech`]: concepts, composition and its sampled material counterpart.
//! * [`stats`]: closed-form activation probabilities, Monte Carlo checks and
//!   a hypothesis test for compositional structure.
//! * [`speclang`]: the `.mmk` declaration language.

pub mod cogmech;
pub mod equivalence;
pub mod rng;
pub mod speclang;
pub mod stats;
pub mod theoryzoo;
pub mod worldmodel;
