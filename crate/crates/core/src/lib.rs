//! Dispersion curves of two-dimensional phononic crystals.
//!
//! The crate discretizes a periodic unit cell with tensor-product
//! quadrilateral elements, either classical (equispaced nodes, Gauss-Legendre
//! integration) or spectral (Lobatto nodes with the matching
//! Gauss-Lobatto-Legendre rule, which makes the mass matrix diagonal). Bloch
//! periodicity is imposed by a phase transform of the assembled system, and
//! each wave vector yields a small Hermitian generalized eigenproblem whose
//! eigenvalues are the squared angular frequencies.
//!
//! Closed-form dispersion relations for a homogeneous medium and for a
//! two-layer stack are provided as oracles so numerical branches can be
//! checked quantitatively.
//!
//! The pipeline, bottom-up:
//!
//! - [`basis`]: nodal sets, Lagrange bases and quadrature rules on `[-1, 1]`
//! - [`elasticity`]: isotropic plane-strain materials
//! - [`cellmesh`]: unit cells, structured meshes and boundary DOF sets
//! - [`assembly`]: element integration, global assembly, mass lumping
//! - [`bloch`]: the Bloch reduction `T(k)` and the reduced pencil
//! - [`eigensolve`]: the dense Hermitian generalized eigensolver
//! - [`analytic`]: folded homogeneous branches and the layered-medium relation
//! - [`sweep`]: wave-vector paths, dispersion sweeps, normalization, oracle reports
//! - [`config`], [`output`], [`cli`]: run configuration, result files and the command line

pub mod analytic;
pub mod assembly;
pub mod basis;
pub mod bloch;
pub mod cellmesh;
pub mod cli;
pub mod config;
pub mod eigensolve;
pub mod elasticity;
mod error;
pub mod output;
pub mod sweep;

pub use error::{Error, Result};

pub use faer::c64;
