//! Spectra of Laplace, Steklov/Wentzell and fourth-order Steklov problems on
//! planar star-shaped domains and closed triangle surfaces, together with a
//! registry of the isoperimetric eigenvalue inequalities they are checked
//! against.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, reports and the
//! command-line front end live in the `isobound` companion crate.
//!
//! Layout:
//! - [`geometry2d`]: star-shaped domains, boundary frames, interior quadrature
//!   and geometric functionals.
//! - [`mesh3d`]: closed triangle meshes, cotangent Laplacian, discrete mean
//!   curvature.
//! - [`basis`]: Trefftz trial functions (harmonic, Almansi, modified Helmholtz).
//! - [`pencil`]: dense symmetric eigen-solvers and the regularized pencil.
//! - [`spectra`]: eigenvalue problems on domains and meshes, ball spectra.
//! - [`inequalities`]: the check registry and suite runner.
//! - [`explorer`]: sweeps and minimal-slack searches over domain families.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod error;
pub mod explorer;
pub mod geometry2d;
pub mod inequalities;
mod math;
pub mod mesh3d;
pub mod pencil;
pub mod quadrature;
pub mod spectra;

pub use error::{Error, Result};
pub use geometry2d::{DomainKind, DomainSpec2D, GeoSummary};
pub use inequalities::{CheckId, CheckReport, Status};
pub use mesh3d::TriMesh;
pub use spectra::{DensityFn, SolverConfig, SpectrumResult};
