//! Exact lattice arithmetic for wall divisors on Hilbert schemes of points on K3 and
//! abelian surfaces, with Brill–Noether existence tests, catalog generation and
//! coisotropic subvariety descriptors.

pub mod brill_noether;
pub mod catalog;
pub mod coisotropic;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod mukai;
pub mod wall;

pub use error::{Error, Result};
pub use mukai::{CurveClass, DivisorClass, MukaiTriple, Surface, SurfaceContext};
pub use wall::{wall_test, Branch, WallInput, WallVerdict};
