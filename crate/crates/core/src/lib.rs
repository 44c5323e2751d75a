#![no_std]

extern crate alloc;

pub mod boundary;
pub mod enumerative;
pub mod error;
pub mod exec;
pub mod eval;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod rankloci;
pub mod solver;
pub mod symmetroid;
pub mod tracker;
pub mod witness;

pub use error::{Error, Result};
pub use poly::{Monomial, PolySystem, Polynomial, C};
pub use random::Seed;
