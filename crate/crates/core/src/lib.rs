//! Evaluation of the Fox-Wright function
//! `pΨq(z) = Σ Π Γ(a_k + A_k n) / Π Γ(b_j + B_j n) zⁿ/n!` in the boundary case
//! `Σ B - Σ A = -1`, where the series has radius `ρ` and a single algebraic or
//! logarithmic singularity at `z = ρ`.
//!
//! [`eval::eval_auto`] picks among the Maclaurin series, the inverse-power
//! residue series and the expansion about `z = ρ`; [`eval::cut_values`]
//! gives the jump and the mean across `[ρ, ∞)`. The coefficient machinery
//! behind the singular expansion lives in [`engine`].

pub mod engine;
pub mod eval;
pub mod error;
pub mod params;
pub mod poly;
pub mod series;
pub mod special;

pub use error::{FwxError, Result};
pub use eval::{
    average_on_cut, cut_values, eval_at_rho, eval_auto, eval_maclaurin, eval_residue_series, eval_singular_expansion,
    eval_with, jump_on_cut, CutValues, EvalOptions, EvalResult, Representation,
};
pub use num_complex::Complex64;
pub use params::ParameterSet;
