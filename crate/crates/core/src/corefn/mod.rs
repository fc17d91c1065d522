//! Step functions, sample grids, lattice norms and the sliding-window kernels
//! shared by the operator and experiment layers.

mod fit;
mod grid;
pub mod io;
mod norm;
mod pcf;
mod sliding;

pub use fit::{fit_power_law, GrowthFit};
pub use grid::{SampleGrid, ScalarProfile};
pub use norm::{bochner_norm, InnerNorm, VectorField};
pub use pcf::{Antiderivative, PiecewiseConstantFn};
pub use sliding::{sliding_power_sum, sliding_sup};
