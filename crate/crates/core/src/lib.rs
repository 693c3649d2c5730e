//! Information complexity and tractability of tensor-product approximation
//! problems, computed from univariate eigenvalue spectra.
//!
//! The d-variate spectrum is the set of products `prod_k lambda(k, j_k)`.
//! [`products`] enumerates and counts it, [`complexity`] turns counts into
//! `n(eps, S_d)`, and [`tract`] classifies tractability from closed-form
//! limits of the second ratios `h_k = lambda(k, 2) / lambda(k, 1)`.
//! [`nystrom`] estimates kernel spectra by quadrature as an independent check.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexity;
pub mod error;
pub mod extended;
pub mod nystrom;
pub mod oracle;
pub mod products;
pub mod special;
pub mod spectra;
pub mod tract;

pub use complexity::{ComplexityQuery, ComplexityResult};
pub use error::{Error, Result};
pub use extended::{ExtendedReal, Interval};
pub use nystrom::{KernelSpec, SpectrumEstimate};
pub use products::{CountResult, ProductProblem};
pub use spectra::{Criterion, FactorSpectrum, FamilySpec, SequenceDescriptor};
pub use tract::{classify, TractabilityReport};
