//! Exact rational polytope toolkit: normal-projective normalisation of
//! combinatorial cubes, cubical towers and connected sums, and the cubical
//! f/h/g-vector calculus.

pub mod bitset;
pub mod constructor;
pub mod io;
pub mod enumerative;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod linalg;
pub mod normalizer;
pub mod projective;
pub mod rational;

pub use error::{Error, Result};
pub use rational::{Point, Rational};
