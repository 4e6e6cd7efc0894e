//! Finite-sample and coefficient-space experiments for unbounded
//! multiplication operators on complete Nevanlinna-Pick spaces.
//!
//! The workhorse is [`finsample::FinSampleSpace`]: the span of kernel
//! functions at a finite point set, where every operator in sight is an
//! `n × n` matrix. [`hardy`] works on the Hardy space of the disk through
//! Taylor coefficients and boundary grids, and [`drury`] handles the
//! Drury-Arveson space through exact monomial norms.
//!
//! ```
//! use cnplab::{CnpKernel, FinSampleSpace, PointSet, SampledMultiplier};
//! use num_complex::Complex64;
//!
//! let pts = PointSet::disk(&[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)], "pair")?;
//! let space = FinSampleSpace::new(&CnpKernel::Szego, pts)?;
//! let z = SampledMultiplier::sample("z", space.points(), |p| p.z())?;
//! let k = space.dom_t_star_kernel(&z)?.kernel;
//! assert!((k[(1, 1)].re - 7.0 / 6.0).abs() < 1e-12);
//! # Ok::<(), cnplab::Error>(())
//! ```

// `!(x < y)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod drury;
pub mod error;
pub mod export;
pub mod finsample;
pub mod hardy;
pub mod kernels;
pub mod linalg;

pub use error::{Error, Result};
pub use finsample::{FinSampleSpace, RepresentingPair, SampledMultiplier, Tolerances};
pub use kernels::{CnpKernel, Point, PointSet};
