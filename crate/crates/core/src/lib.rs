//! Structure-preserving semi-discretization of Lagrange--Dirac field systems
//! with boundary energy flow.
//!
//! The library discretizes scalar fields on rectilinear boxes with
//! summation-by-parts (SBP) finite differences, and differential forms on
//! cubical complexes with a staggered (Yee) dual grid. Both discretizations
//! are chosen so that the interior/boundary split of functional derivatives,
//! the canonical Dirac structure, the forced evolution equations and the
//! energy balance laws hold as exact matrix identities rather than O(h)
//! approximations.
//!
//! Module map:
//! - [`grid`]: rectilinear grids, SBP difference/quadrature/boundary operators;
//! - [`phase`]: the restricted cotangent bundle, canonical forms, flat map,
//!   Tulczyjew maps and the canonical Dirac structure;
//! - [`densities`]: pointwise Lagrangian densities and force models;
//! - [`dynamics`]: discrete functional derivatives, the Dirac differential,
//!   the forced evolution equations and symplectic time steppers;
//! - [`energy`]: energy density, local balance residual and the global
//!   balance audit;
//! - [`dec`]: discrete exterior calculus on cubical complexes (cochains,
//!   coboundary, diagonal Hodge, boundary traces, the dual pairing);
//! - [`systems`]: preconfigured wave/Klein-Gordon/sine-Gordon/telegraph and
//!   Maxwell systems with their diagnostics;
//! - [`oracle`]: independent brute-force and analytic references used by the
//!   test and verification suites.

pub mod dec;
pub mod densities;
pub mod dynamics;
pub mod energy;
mod error;
pub mod grid;
pub mod oracle;
pub mod phase;
pub mod systems;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
