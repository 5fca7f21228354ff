//! Finite models of the spectral triples: the grading operator of the
//! cylinder filtration, truncated Cuntz–Krieger representations, the AF
//! summability schedule and the crossed-product operator.

mod af;
mod crossed;
mod grading;
mod truncation;

pub use af::{af_summability_report, AFTriple, AfReport, Parity};
pub use crossed::{
    crossed_product_spectrum, jlo_phi0, summability_exponent_fit, CrossedProductTriple,
    ExponentFit, JloInput, SpectralValue, DEFAULT_CUTOFF, MIN_DISTINCT,
};
pub use grading::{
    theta_trace, zeta_partial, GradingOperator, TailModel, ThetaTrace, ZetaDiagnosis, ZetaPartial,
    CONVERGED_TAIL,
};
pub use truncation::{CkResiduals, CommutatorNorm, SpectralTruncation};
