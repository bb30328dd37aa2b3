//! Exact two-point resistance of infinite periodic resistor networks.
//!
//! A network is described by its unit cell ([`lattice::LatticeSpec`]). The
//! resistance between any two nodes is obtained from the lattice Green's
//! function by integrating over the Brillouin zone ([`spectral`]). Finite
//! torus solvers ([`torus`]) and closed-form lattice mappings ([`mappings`])
//! provide independent cross-checks, and [`verify`] reproduces published
//! values.
//!
//! ```
//! use gridohm::{catalog, spectral, QuadratureConfig, ResistanceQuery};
//!
//! let square = catalog::builtin("square", &[]).unwrap().spec;
//! let q = ResistanceQuery::new(0, 0, [1, 0]);
//! let r = spectral::resistance(&square, &q, &QuadratureConfig::for_dimension(2)).unwrap();
//! assert!((r.value - 0.5).abs() < 1e-9);
//! ```

pub mod catalog;
pub mod document;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod mappings;
pub mod spectral;
mod sparse;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{Bond, LatticeSpec, NodeRef, ResistanceQuery};
pub use spectral::{QuadratureConfig, ResistanceResult};
