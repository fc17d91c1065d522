//! Lower-bound certificates for q-variation, maximal and Hilbert operators
//! acting on lattice-valued functions of one real variable.
//!
//! Normalizations:
//!
//! * `A_t f(x) = (1/t) ∫_{-t}^{t} f(x - y) dy`, a kernel of mass 2;
//! * `H_s` is convolution with `(4πs)^{-1/2} e^{-x²/(4s)}` (mass 1);
//! * the Hilbert transform is `p.v. ∫ f(y)/(x - y) dy` with no `1/π`.
//!
//! Every reported ratio is `‖T f‖ / ‖f‖` for an explicit witness `f`, hence a
//! lower bound for the operator norm of `T`.

pub mod cli;
pub mod corefn;
pub mod error;
pub mod experiments;
pub mod operators;
pub mod special;
pub mod variation;
pub mod witnesses;

pub use error::{Error, Result};
