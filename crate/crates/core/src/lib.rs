//! Exact arithmetic for continued fractions and rational-approximation spectra.

pub mod cf;
pub mod exactnum;
pub mod kappa;
pub mod measure;

pub use cf::{CfExpansion, Convergent, TailPair};
pub use exactnum::{BigRational, QuadSurd};
pub use kappa::KappaProfile;
pub use measure::{MeasureKind, MeasureSample, RealInput};
