pub mod error;
pub mod experiment;
pub mod geometry;
pub mod kdtree;
pub mod limitproc;
pub mod moments;
pub mod output;
pub mod profile;
pub mod quadrature;
pub mod quadtree;
pub mod rng;
pub mod specfun;
pub mod stats;
pub mod tables;

pub use error::{Error, Result};
