//! Universal profiles, asymptotic fields, coefficient extraction and
//! decay-rate validation.

pub mod profiles;
pub mod fields;

pub use fields::{asymptotic_fields, asymptotic_point, AsymptoticCoeffs, Component};
pub mod coeffs;

pub use coeffs::{a1_diagnostic, extract_coeffs, A1Diagnostic, A4Pieces, CoeffReport};
pub mod decay;

pub use decay::{decay_fit, shift_equivalence_check, DecayFit, DecayReport, Residual, ShiftReport};
