//! Exact D-values and relative spectra of subtori of `(R/Z)^n`.
//!
//! For `x ∈ (R/Z)^n` let `D(x) = max_k |x_k - 1/2|` (coordinates in `[0, 1)`), and for a
//! subtorus `T` let `D(T)` be its minimum over `T`. The relative spectrum of a
//! two-dimensional subtorus `U` is the set of `D(T)` over proper one-dimensional `T ⊆ U`.

pub mod catalog;
pub mod error;
pub mod exact;
pub mod locus;
pub mod pwl;
pub mod slice;
pub mod spectrum;
pub mod torus;

pub use catalog::{d_two_speeds, enumerate_2d_subtori, tight_pairs};
pub use error::{Error, Result};
pub use exact::{format_rational, parse_basis, parse_int_vector, parse_rational, Int, IntVector, Rational};
pub use pwl::{Argmin, CirclePwl, GammaTable};
pub use locus::{finiteness, zero_locus, Finiteness, LocusElement};
pub use slice::{SlicePoints, SliceStructure};
pub use spectrum::{
    analyse, relative_spectrum, CertificationReport, Classification, ExceptionalValue, Progression,
    ProgressionSet, SpectrumAnalysis, SpectrumDescription, SpectrumOptions,
};
pub use torus::{canonicalize_symmetry, d_coset_line, d_line_oracle, d_plane, CosetLine, Subtorus1D, Subtorus2D, TorusPoint};
