//! Fractional calculus on sampled paths: Gamma, the Riemann–Liouville
//! integral, Riemann–Liouville and Caputo derivatives, and the
//! Mittag-Leffler reference series.

mod gamma;
mod mittag_leffler;
mod ops;
mod types;

pub use gamma::{gamma, ln_gamma};
pub(crate) use gamma::gamma_pos;
pub use mittag_leffler::{mittag_leffler, MittagLeffler};
pub use ops::{
    caputo_derivative, caputo_derivative_l1, differentiate, rl_derivative, rl_integral,
    rl_integral_of_order, FracIntegrator,
};
pub use types::{FracOrder, SampledPath, StateVec, TimeGrid};
