//! Gabor frames, adjoint subgroups and Heisenberg modules over finite abelian groups.
//!
//! Everything lives on a group `G = Z_{N1} x ... x Z_{Nk}` and its phase space `G x Ĝ`.
//! Signals are complex vectors indexed by the lexicographic enumeration of `G`; operators
//! are dense complex matrices.
//!
//! Measures: counting on `G`, `(1/|G|)`-counting on `G x Ĝ` (total mass `|G|`), and a
//! per-point weight `w` on every subgroup `Λ`. The covolume is `s(Λ) = |G| / (w |Λ|)` and the
//! adjoint subgroup `Λ°` carries weight `1/s(Λ)`.
//!
//! ```
//! use gdl_core::duality_suite::duality_certificate;
//! use gdl_core::gabor_engine::{frame_bounds, GaborSystem, WindowFamily};
//! use gdl_core::group_core::make_group;
//! use gdl_core::phase_space::PhaseSpace;
//! use gdl_core::Complex64;
//!
//! let space = PhaseSpace::new(make_group(&[2]).unwrap());
//! let lattice = space.subgroup(&[&[1, 1]], 1.0).unwrap();
//! let delta = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
//! let g = WindowFamily::single(space.group().clone(), &delta).unwrap();
//! let sys = GaborSystem::with_space(space, g, lattice).unwrap();
//!
//! let bounds = frame_bounds(&sys);
//! assert!((bounds.lower - 1.0).abs() < 1e-12 && (bounds.upper - 1.0).abs() < 1e-12);
//! assert!(duality_certificate(&sys, 1e-9).unwrap().pass);
//! ```

#![no_std]

extern crate alloc;

pub mod duality_suite;
pub mod error;
pub mod frame_construction;
pub mod gabor_engine;
pub mod group_core;
pub mod linalg;
pub mod module_algebra;
pub mod phase_space;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// A complex vector indexed by group elements in lexicographic order.
///
/// Signals on `G x Z_d` are stored as `d` consecutive blocks of length `|G|`.
pub type Signal = alloc::vec::Vec<Complex64>;

/// Dense complex operator.
pub type Operator = nalgebra::DMatrix<Complex64>;

/// Relative threshold for deciding that a frame or Riesz bound is positive.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[cfg(test)]
pub(crate) mod testutil;
