//! Spectra and engineered level degeneracies of two-parameter (q,p)-deformed
//! oscillators.
//!
//! The crate is organised bottom-up:
//!
//! - [`oscillator`]: q,p-brackets, energies and the truncated Fock representation.
//! - [`degeneracy`]: the curves `E_{n+k} = E_n` in the (q,p) square.
//! - [`conics`]: reduction relations `p = f(q)` through (1,1) and two prescribed points.
//! - [`reduction`]: one-parameter spectra obtained by inverting a relation.
//! - [`intersect`]: crossings of two degeneracy curves.
//! - [`io`], [`svg`] and [`reproduce`]: file formats, plots and the published-value harness.
//!
//! ```
//! use qpdeg_core::reduction::design;
//! use qpdeg_core::{fit_parabola, reduced_spectrum, LevelPair};
//!
//! // make E1=E2 and E3=E4 coincide at p = 0.6
//! let (a, b) = (LevelPair::new(1, 1)?, LevelPair::new(3, 1)?);
//! let d = design(a, b, 0.6, 1e-12)?;
//! let relation = fit_parabola(d.spec)?;
//! let table = reduced_spectrum(&relation, &d.assignment, 0.6, 6)?;
//! assert!((table.energy(1).unwrap() - table.energy(2).unwrap()).abs() < 1e-10);
//! assert!((table.energy(3).unwrap() - table.energy(4).unwrap()).abs() < 1e-10);
//! # Ok::<(), qpdeg_core::Error>(())
//! ```

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conics;
pub mod degeneracy;
pub mod error;
pub mod intersect;
pub mod io;
pub mod oscillator;
pub mod reduction;
pub mod reproduce;
mod roots;
pub mod svg;

pub use conics::{
    fit_ellipse, fit_hyperbola, fit_line, fit_parabola, ConicRelation, FitSpec, Sign,
};
pub use degeneracy::{axis_endpoint, classify, solve_q, trace, CurveTrace, Family, LevelPair};
pub use error::{Error, Result};
pub use intersect::{intersect_curves, IntersectionPoint};
pub use oscillator::{
    build_fock_rep, energy, energy_level, qp_bracket, verify_algebra, DeformationPoint, FockRep,
};
pub use reduction::{
    degeneracy_report, reduced_spectrum, BranchAssignment, SpectrumEntry, SpectrumTable,
};
