//! Exact orthonormal dilations of MRA Parseval wavelet sets.
//!
//! Sets of frequencies are finite unions of half-open intervals with rational
//! endpoints ([`IntervalSet`]). From a Parseval wavelet set `P` the crate
//! computes the scaling set, a QMF filter set `M`, the chosen paths of the
//! dyadic maps `tau_0`, `tau_1` relative to `M`, and decodes the dilated
//! scaling function and orthonormal super-wavelet on the line and on each
//! cycle component. Everything except [`frame`] is exact.
//!
//! ```
//! use parseval_dilate::{dilate, iset, DStrategy, Limits};
//!
//! let p = iset("[-1/4,-1/8)u[1/8,1/4)");
//! let d = dilate(&p, &DStrategy::ExplicitSet(iset("[1/4,3/8)u[5/8,3/4)")), Limits::default()).unwrap();
//! assert!(d.verification.passed);
//! assert_eq!(d.psi.real, p);
//! ```

pub mod dynamics;
pub mod encoding;
pub mod error;
pub mod filter;
pub mod frame;
pub mod intervals;
pub mod pipeline;
pub mod rational;
pub mod wavelet;
pub mod words;

pub use dynamics::{DensityReport, PartitionGraph, PiecewisePath};
pub use encoding::{ComponentFunction, DilationReport, SymbolicSet};
pub use error::{Error, ParseError, Result};
pub use filter::{DStrategy, FilterSet};
pub use frame::{GramReport, IndexPair, InvarianceReport};
pub use intervals::{iset, IntervalSet};
pub use pipeline::{dilate, paths, Dilation, Limits, PathData};
pub use rational::{parse_rational, Rational};
pub use wavelet::{ComplementReport, ScalingData, WaveletSetReport};
pub use words::{Cycle, EPWord};
