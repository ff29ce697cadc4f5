pub mod cli;
pub mod error;
pub mod fan;
pub mod fixtures;
pub mod input;
pub mod lattice;
pub mod linalg;
pub mod mirror;
pub mod opengw;
pub mod series;
pub mod surface;
