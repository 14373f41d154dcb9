//! The POVM time operator: the Hermite frame, `T_G` and its commutator with
//! `h`, the Hilbert-inequality bound, and the contrast with the unbounded `𝔱`.

mod frame;
mod matrix;
mod measure;

pub use frame::{hermite_coefficients, hermite_frame, HermiteFrame};
pub use matrix::{
    commutator_check, norm_bound_check, tg_entry, tg_entry_f64, tg_matrix, CommutatorReport, NormReport, PiPoly,
    TgMatrix, POWER_TOL,
};
pub use measure::{
    contrast_sweep, full_circle_weight_exact, povm_weight, tg_form, tg_increment, weight_from_coefficients,
    ContrastReport, ContrastRow,
};
