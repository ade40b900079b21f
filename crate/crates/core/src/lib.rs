// `!(x < y)` is deliberate throughout: NaN has to fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod models;
pub mod operator;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::SymmetricMatrix;
pub use operator::{assemble_free, assemble_system, contraction_bound, operator_a, optimize_shift, KleinGordonSystem, ModelSpec, UPowers};
pub use spectral::{
    central_gap, defect_check, eigen_spectrum, pencil_residual, relative_distance, sign_operator, Interval, SignOperator,
    SignType, SpectrumReport,
};
