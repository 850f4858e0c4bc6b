//! Exact computations with intersection lattices, curve cones, Cremona
//! moves and formal inflation on rational and ruled 4-manifolds.

pub mod audit;
pub mod cones;
pub mod configurations;
pub mod cremona;
pub mod enumeration;
pub mod inflation;
pub mod lattice;
pub mod linalg;
pub mod polyhedral;
pub mod rational;
pub mod swcert;

pub use lattice::{canonical_class, j_genus, light_cone_facts, sw_dimension, DivisorClass, LatticeError, SurfaceModel};
pub use rational::Q;
